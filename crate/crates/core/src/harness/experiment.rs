use std::fmt;
use std::time::Instant;

use num_complex::Complex64;

use super::config::{validate_config, ExperimentConfig};
use crate::coarse::{CoarseKind, CoarseSpace};
use crate::decomposition::Decomposition;
use crate::discretization::{assemble, regime, Grid, ModelProblem};
use crate::error::Result;
use crate::krylov::gmres;
use crate::linalg::Scalar;
use crate::preconditioner::{PreconditionerKind, TwoLevelSchwarz};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Converged { iterations: usize },
    /// Iteration cap reached; printed as `x`.
    NotConverged { iterations: usize },
    /// Setup or solve error; printed as `err`.
    Failed(String),
}

impl Outcome {
    pub fn iterations(&self) -> Option<usize> {
        match self {
            Outcome::Converged { iterations } => Some(*iterations),
            _ => None,
        }
    }

    pub fn converged(&self) -> bool {
        matches!(self, Outcome::Converged { .. })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Converged { iterations } => write!(f, "{iterations}"),
            Outcome::NotConverged { .. } => f.write_str("x"),
            Outcome::Failed(_) => f.write_str("err"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub coarse: CoarseKind,
    pub preconditioner: PreconditionerKind,
    pub outcome: Outcome,
    pub seconds: f64,
}

/// One `(k, n)` cell of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub k: f64,
    pub n: usize,
    pub subdomains: usize,
    /// All fine nodes, `n²`.
    pub fine_nodes: usize,
    /// All coarse nodes, `((n-1)/r + 1)²`.
    pub coarse_nodes: usize,
    pub kappa_h: f64,
    pub kappa_coarse: f64,
    pub results: Vec<CellResult>,
    pub seconds: f64,
}

impl TableRow {
    pub fn result(&self, coarse: CoarseKind, preconditioner: PreconditionerKind) -> Option<&CellResult> {
        self.results
            .iter()
            .find(|r| r.coarse == coarse && r.preconditioner == preconditioner)
    }

    pub fn iterations(&self, coarse: CoarseKind, preconditioner: PreconditionerKind) -> Option<usize> {
        self.result(coarse, preconditioner)?.outcome.iterations()
    }
}

fn solve_all<T: Scalar>(cfg: &ExperimentConfig, k: f64, n: usize) -> Result<Vec<CellResult>> {
    let grid = Grid::for_problem(cfg.problem, n)?;
    let problem = assemble::<T>(&grid, k)?;
    let boxes = grid.cells() / cfg.subdomain_cells();
    let dd = Decomposition::new(&grid, boxes, cfg.overlap, cfg.partition_of_unity)?;
    let gm = cfg.gmres();

    let mut schwarz: Option<TwoLevelSchwarz<T>> = None;
    let mut out = Vec::new();
    for &kind in &cfg.coarse {
        let setup = Instant::now();
        let built = CoarseSpace::build_with(kind, &grid, cfg.ratio, cfg.stencil_boundary, problem.matrix()).and_then(
            |coarse| match &schwarz {
                Some(s) => s.with_coarse(coarse),
                None => TwoLevelSchwarz::new(problem.matrix().clone(), dd.clone(), coarse)
                    .map(|s| s.with_weight_placement(cfg.weight_placement)),
            },
        );
        let setup_seconds = setup.elapsed().as_secs_f64();
        let s = match built {
            Ok(s) => schwarz.insert(s),
            Err(e) => {
                for &p in &cfg.preconditioners {
                    out.push(CellResult {
                        coarse: kind,
                        preconditioner: p,
                        outcome: Outcome::Failed(e.to_string()),
                        seconds: setup_seconds,
                    });
                }
                continue;
            }
        };
        for &p in &cfg.preconditioners {
            let start = Instant::now();
            let outcome = match gmres(problem.matrix(), &s.preconditioner(p), problem.rhs(), &gm) {
                Ok(r) if r.converged => Outcome::Converged { iterations: r.iterations },
                Ok(r) => Outcome::NotConverged { iterations: r.iterations },
                Err(e) => Outcome::Failed(e.to_string()),
            };
            out.push(CellResult {
                coarse: kind,
                preconditioner: p,
                outcome,
                seconds: setup_seconds + start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(out)
}

/// Runs every coarse space and preconditioner of `cfg` on one `(k, n)` cell.
pub fn run_cell(cfg: &ExperimentConfig, k: f64, n: usize) -> Result<TableRow> {
    let start = Instant::now();
    let grid = Grid::for_problem(cfg.problem, n)?;
    let results = match cfg.problem {
        ModelProblem::Mp1 => solve_all::<f64>(cfg, k, n)?,
        ModelProblem::Mp2 => solve_all::<Complex64>(cfg, k, n)?,
    };
    let report = regime(k, grid.h(), grid.h() * cfg.ratio as f64);
    let coarse_per_dim = grid.cells() / cfg.ratio + 1;
    let boxes = grid.cells() / cfg.subdomain_cells();
    Ok(TableRow {
        k,
        n,
        subdomains: boxes * boxes,
        fine_nodes: grid.node_count(),
        coarse_nodes: coarse_per_dim * coarse_per_dim,
        kappa_h: report.kappa_h,
        kappa_coarse: report.kappa_coarse,
        results,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Validates `cfg`, prints its warnings to stderr and runs all cells in sweep order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TableRow>> {
    let validation = validate_config(cfg)?;
    for w in &validation.warnings {
        eprintln!("warning: {w}");
    }
    validation
        .cells
        .iter()
        .map(|c| {
            let row = run_cell(cfg, c.k, c.n)?;
            for r in &row.results {
                match &r.outcome {
                    Outcome::NotConverged { iterations } => eprintln!(
                        "warning: k = {}, n = {}: {}/{} did not reach rtol in {iterations} iterations",
                        c.k,
                        c.n,
                        r.coarse.label(),
                        r.preconditioner.label()
                    ),
                    Outcome::Failed(msg) => eprintln!(
                        "warning: k = {}, n = {}: {}/{} failed: {msg}",
                        c.k,
                        c.n,
                        r.coarse.label(),
                        r.preconditioner.label()
                    ),
                    Outcome::Converged { .. } => {}
                }
            }
            Ok(row)
        })
        .collect()
}
