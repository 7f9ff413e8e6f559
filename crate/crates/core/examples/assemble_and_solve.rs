// Assemble the Dirichlet point-source problem, solve it directly and compare
// against the analytical series solution.
//
// Run with `cargo run --release --example assemble_and_solve`.

use helmholtz_schwarz::prelude::*;

pub fn run_example() -> Result<f64> {
    let k = 6.0;
    let mut worst = 0.0f64;
    for n in [33, 65] {
        let grid = Grid::for_problem(ModelProblem::Mp1, n)?;
        let problem = assemble::<f64>(&grid, k)?;
        let u = factorize(problem.matrix())?.solve(problem.rhs())?;

        // compare away from the singular source
        let probe = [(n - 1) / 4, (n - 1) / 4];
        let idx = grid.unknown_index(probe[0], probe[1]).expect("interior node");
        let exact = analytical_mp1(k, grid.coordinates(probe[0], probe[1]), 400)?;
        let err = (u[idx] - exact).abs();
        println!(
            "n = {n:>3}: {} unknowns, {} nonzeros, u(1/4, 1/4) = {:.6} (series {exact:.6}, error {err:.2e})",
            grid.num_unknowns(),
            problem.matrix().nnz(),
            u[idx]
        );
        worst = worst.max(err);
    }
    Ok(worst)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
