// Build overlapping box decompositions and inspect overlap, multiplicity and
// the partition of unity.
//
// Run with `cargo run --release --example decomposition`.

use helmholtz_schwarz::prelude::*;

pub fn run_example() -> Result<f64> {
    let grid = Grid::new(33, BoundaryCondition::Sommerfeld)?;
    let mut worst = 0.0f64;
    for overlap in [OverlapMode::Layers(0), OverlapMode::Layers(1), OverlapMode::Max] {
        let dd = Decomposition::new(&grid, 8, overlap, PartitionOfUnity::Multiplicity)?;
        let sizes: Vec<usize> = (0..dd.len()).map(|i| dd.indices(i).len()).collect();
        let max_mult = dd.multiplicity().iter().copied().max().unwrap_or(0);
        let pou_error = dd.weight_sum().iter().map(|w| (w - 1.0).abs()).fold(0.0, f64::max);
        println!(
            "{overlap:?}: {} subdomains, {} shared layers, sizes {}..={}, max multiplicity {max_mult}, PoU error {pou_error:.1e}",
            dd.len(),
            dd.overlap(),
            sizes.iter().min().unwrap(),
            sizes.iter().max().unwrap(),
        );
        worst = worst.max(pou_error);
    }
    Ok(worst)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
