//! Bit-flip threshold of the rotated surface code from the d=3 / d=5
//! coherent-information crossing.

use std::time::Instant;

use qci::codes::rotated_surface_code;
use qci::threshold::{find_crossing, preset, sweep_code_capacity, NoiseKind, SweepOptions};

fn main() -> qci::Result<()> {
    let grid = preset("bitflip").expect("preset exists").points();
    let options = SweepOptions::default();
    let start = Instant::now();
    let d3 = sweep_code_capacity(&rotated_surface_code(3)?, NoiseKind::BitFlip, &grid, &options)?;
    let d5 = sweep_code_capacity(&rotated_surface_code(5)?, NoiseKind::BitFlip, &grid, &options)?;
    let crossing = find_crossing(&d3, &d5)?;
    println!(
        "surface d=3 vs d=5 bit-flip crossing: p = {:.5} ± {:.1e}  ({} rates, {:.1?})",
        crossing.p_cross,
        crossing.uncertainty,
        grid.len(),
        start.elapsed()
    );
    Ok(())
}
