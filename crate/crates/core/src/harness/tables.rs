//! Built-in configurations for the four published tables.

use super::config::{ExperimentConfig, Sweep};
use crate::coarse::CoarseKind;
use crate::discretization::ModelProblem;
use crate::error::{Error, Result};
use crate::preconditioner::PreconditionerKind;

/// Wavenumbers of the scalability tables; each runs with `n = 4k + 1`.
pub const SCALABILITY_WAVENUMBERS: [usize; 8] = [20, 40, 60, 80, 100, 120, 140, 200];

fn scalability(problem: ModelProblem, wavenumbers: &[usize]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        problem,
        wavenumbers.iter().map(|&k| k as f64).collect(),
        wavenumbers.iter().map(|&k| 4 * k + 1).collect(),
    );
    cfg.sweep = Sweep::Paired;
    cfg
}

fn shs_hocs_sweep(ratio: usize, k: Vec<usize>, n: Vec<usize>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ModelProblem::Mp1, k.into_iter().map(|k| k as f64).collect(), n);
    cfg.ratio = ratio;
    cfg.coarse = vec![CoarseKind::Bezier];
    cfg.preconditioners = vec![PreconditionerKind::Shs2];
    cfg.max_iter = 50;
    cfg
}

/// Sommerfeld problem, `κ_h = 1/4`, `H_sub = H = 4h`, all coarse spaces and preconditioners.
pub fn table1() -> ExperimentConfig {
    scalability(ModelProblem::Mp2, &SCALABILITY_WAVENUMBERS)
}

/// Dirichlet counterpart of [`table1`].
pub fn table2() -> ExperimentConfig {
    scalability(ModelProblem::Mp1, &SCALABILITY_WAVENUMBERS)
}

/// SHS2 with the Bézier coarse space at `H = 4h`, cap 50.
pub fn table3() -> ExperimentConfig {
    shs_hocs_sweep(4, (10..=50).step_by(10).collect(), (33..=161).step_by(8).collect())
}

/// SHS2 with the Bézier coarse space at `H = H_sub = 16h`, cap 50.
pub fn table4() -> ExperimentConfig {
    shs_hocs_sweep(16, (5..=30).step_by(5).collect(), (33..=257).step_by(16).collect())
}

/// Restricts a paired scalability config to its first `count` rows.
pub fn truncated(mut cfg: ExperimentConfig, count: usize) -> ExperimentConfig {
    cfg.k.truncate(count);
    cfg.n.truncate(count);
    cfg
}

pub fn builtin(table: u8) -> Result<ExperimentConfig> {
    match table {
        1 => Ok(table1()),
        2 => Ok(table2()),
        3 => Ok(table3()),
        4 => Ok(table4()),
        t => Err(Error::Config(format!("there is no built-in table {t}; choose 1 to 4"))),
    }
}
