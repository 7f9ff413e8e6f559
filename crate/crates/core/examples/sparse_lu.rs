// Factor a complex Sommerfeld matrix with the nested-dissection sparse LU and
// report fill against the George-Ng bound.
//
// Run with `cargo run --release --example sparse_lu`.

use helmholtz_schwarz::linalg::vector::{distance, norm2};
use helmholtz_schwarz::prelude::*;
use num_complex::Complex64;

pub fn run_example() -> Result<f64> {
    let grid = Grid::new(41, BoundaryCondition::Sommerfeld)?;
    let problem = assemble::<Complex64>(&grid, 10.0)?;
    let a = problem.matrix();
    println!("complex symmetry defect {:.1e}", a.symmetry_defect());

    let lu = factorize(a)?;
    println!(
        "nnz(A) = {}, nnz(L + U) = {}, fill bound = {}",
        a.nnz(),
        lu.factor_nnz(),
        lu.fill_bound()
    );

    let x = lu.solve(problem.rhs())?;
    let residual = distance(&a.spmv(&x)?, problem.rhs()) / norm2(problem.rhs());
    println!("relative residual {residual:.2e}");
    Ok(residual)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
