//! Bit-flip crossing of the 4.8.8 color code between two distances.
//!
//! Usage: `color_bitflip_threshold [SMALL LARGE]`, default `3 5`.
//! `7 9` bisects instead of sweeping, since d=9 holds 2^24 blocks even
//! with the bit-flip reduction.

use std::time::Instant;

use qci::codes::color_code_488;
use qci::threshold::{
    code_capacity_ci, find_crossing, locate_crossing, preset, sweep_code_capacity, NoiseKind,
    SweepOptions,
};

fn main() -> qci::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("distances are integers"))
        .collect();
    let (small, large) = match args[..] {
        [a, b] => (a, b),
        _ => (3, 5),
    };
    let (a, b) = (color_code_488(small)?, color_code_488(large)?);
    let grid = preset("bitflip").expect("preset exists");
    let options = SweepOptions::default();
    let start = Instant::now();
    let crossing = if large <= 5 {
        let points = grid.points();
        let ca = sweep_code_capacity(&a, NoiseKind::BitFlip, &points, &options)?;
        let cb = sweep_code_capacity(&b, NoiseKind::BitFlip, &points, &options)?;
        find_crossing(&ca, &cb)?
    } else {
        let ci = |code, p| code_capacity_ci(code, NoiseKind::BitFlip, p, &options);
        locate_crossing(&grid, |p| {
            let (x, y) = (ci(&a, p)?.ci_normalized, ci(&b, p)?.ci_normalized);
            println!("p = {p:.4}  CI({small}) = {x:.6}  CI({large}) = {y:.6}");
            Ok(x - y)
        })?
        .0
    };
    println!(
        "color d={small} vs d={large} bit-flip crossing: p = {:.5} ± {:.1e}  ({:.1?})",
        crossing.p_cross,
        crossing.uncertainty,
        start.elapsed()
    );
    Ok(())
}
