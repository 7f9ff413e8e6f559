// Compare the bilinear and Bézier coarse spaces: stencils and sparsity of the
// Galerkin matrix.
//
// Run with `cargo run --release --example coarse_spaces`.

use helmholtz_schwarz::coarse::{restriction_1d, BEZIER_STENCIL};
use helmholtz_schwarz::prelude::*;

pub fn run_example() -> Result<Vec<(CoarseKind, usize)>> {
    println!("one-level Bézier stencil: {BEZIER_STENCIL:?}");
    let grid = Grid::for_problem(ModelProblem::Mp1, 33)?;
    let a = assemble::<f64>(&grid, 8.0)?.into_parts().0;

    let mut stats = Vec::new();
    for kind in [CoarseKind::Linear, CoarseKind::Bezier] {
        let r1 = restriction_1d(kind, &grid, 4, StencilBoundary::Truncate)?;
        let (cols, weights) = r1.row(r1.nrows() / 2);
        println!("{}: middle 1D row touches fine unknowns {cols:?}", kind.label());
        println!("      weights {weights:?}");

        let coarse = CoarseSpace::build(kind, &grid, 4, &a)?;
        println!(
            "      R0 is {} x {}, A0 has {} nonzeros",
            coarse.restriction().nrows(),
            coarse.restriction().ncols(),
            coarse.galerkin_nnz()
        );
        stats.push((kind, coarse.galerkin_nnz()));
    }
    Ok(stats)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
