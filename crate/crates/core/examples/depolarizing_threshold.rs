//! Depolarizing-noise crossing between d=3 and d=5 for the surface or
//! color code, located by bisection on the preset grid.
//!
//! Usage: `depolarizing_threshold [surface|color488]`
//!
//! The d=5 surface code holds up to 2^24 blocks (about 2 GB).

use std::time::Instant;

use qci::codes::{color_code_488, rotated_surface_code};
use qci::threshold::{code_capacity_ci, locate_crossing, preset, NoiseKind, SweepOptions};

fn main() -> qci::Result<()> {
    let family = std::env::args().nth(1).unwrap_or_else(|| "surface".into());
    let build = match family.as_str() {
        "surface" => rotated_surface_code,
        "color488" => color_code_488,
        other => {
            eprintln!("unknown family {other:?}");
            std::process::exit(1);
        }
    };
    let (small, large) = (build(3)?, build(5)?);
    let grid = preset("depolarizing").expect("preset exists");
    let options = SweepOptions::default();
    let start = Instant::now();
    let (crossing, samples) = locate_crossing(&grid, |p| {
        let t = Instant::now();
        let a = code_capacity_ci(&small, NoiseKind::Depolarizing, p, &options)?.ci_normalized;
        let b = code_capacity_ci(&large, NoiseKind::Depolarizing, p, &options)?.ci_normalized;
        println!("p = {p:.3}  CI(3) = {a:.6}  CI(5) = {b:.6}  ({:.1?})", t.elapsed());
        Ok(a - b)
    })?;
    println!(
        "{family} depolarizing crossing: p = {:.5} ± {:.1e}  ({} evaluations, {:.1?})",
        crossing.p_cross,
        crossing.uncertainty,
        samples.len(),
        start.elapsed()
    );
    Ok(())
}
