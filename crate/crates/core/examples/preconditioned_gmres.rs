// Solve the Sommerfeld problem at k = 20 with every two-level preconditioner
// and both coarse spaces.
//
// Run with `cargo run --release --example preconditioned_gmres`.

use helmholtz_schwarz::prelude::*;
use num_complex::Complex64;

pub fn run_example() -> Result<Vec<(CoarseKind, PreconditionerKind, usize)>> {
    let k = 20.0;
    let grid = Grid::new(81, BoundaryCondition::Sommerfeld)?;
    let problem = assemble::<Complex64>(&grid, k)?;
    let dd = Decomposition::new(&grid, 20, OverlapMode::Max, PartitionOfUnity::Multiplicity)?;

    let mut counts = Vec::new();
    for kind in [CoarseKind::Linear, CoarseKind::Bezier] {
        let coarse = CoarseSpace::build(kind, &grid, 4, problem.matrix())?;
        let schwarz = TwoLevelSchwarz::new(problem.matrix().clone(), dd.clone(), coarse)?;
        for p in PreconditionerKind::ALL {
            let report = gmres(
                problem.matrix(),
                &schwarz.preconditioner(p),
                problem.rhs(),
                &GmresConfig::default(),
            )?;
            println!(
                "{}/{}: {} iterations, converged {}, true residual {:.2e}",
                kind.label(),
                p.label(),
                report.iterations,
                report.converged,
                report.true_residual
            );
            counts.push((kind, p, report.iterations));
        }
    }
    Ok(counts)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
