// Drive the experiment harness programmatically: a short wavenumber sweep at
// a fixed quarter radian per cell, written as CSV to stdout.
//
// Run with `cargo run --release --example wavenumber_sweep`.

use helmholtz_schwarz::harness::{self, ExperimentConfig, Sweep, TableRow};
use helmholtz_schwarz::prelude::*;

pub fn run_example() -> Result<Vec<TableRow>> {
    let mut cfg = ExperimentConfig::new(ModelProblem::Mp1, vec![10.0, 20.0], vec![41, 81]);
    cfg.sweep = Sweep::Paired;
    cfg.preconditioners = vec![PreconditionerKind::Shs2];

    let checked = harness::validate_config(&cfg)?;
    for cell in &checked.cells {
        println!(
            "k = {}, n = {}: kappa_h = {}, kappa_H = {}",
            cell.k, cell.n, cell.regime.kappa_h, cell.regime.kappa_coarse
        );
    }
    let rows = harness::run_experiment(&cfg)?;
    harness::emit_csv(&rows, std::io::stdout().lock())?;
    Ok(rows)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
