//! Repetition-code memory experiment with faulty syndrome extraction:
//! d=3 / d=5 crossings under phenomenological and circuit-level noise.
//!
//! Usage: `memory_threshold [phenomenological|circuit] [MIN:MAX:STEP]`

use std::time::Instant;

use qci::threshold::{
    locate_crossing, memory_ci, preset, Grid, MemoryPreset, SweepOptions,
};

fn main() -> qci::Result<()> {
    let mut args = std::env::args().skip(1);
    let which: MemoryPreset = args.next().as_deref().unwrap_or("phenomenological").parse()?;
    let grid = match args.next() {
        Some(text) => Grid::parse(&text)?,
        None => preset(&which.to_string()).expect("preset exists"),
    };
    let options = SweepOptions::default();
    let start = Instant::now();
    let ci = |d: usize, p: f64| -> qci::Result<f64> {
        Ok(memory_ci(d, which.rates(p)?, &options)?.ci_normalized)
    };
    let (crossing, samples) = locate_crossing(&grid, |p| Ok(ci(3, p)? - ci(5, p)?))?;
    for (p, diff) in &samples {
        println!("p = {p:.4}  CI(3) - CI(5) = {diff:+.3e}");
    }
    println!(
        "{which} crossing: p = {:.5} ± {:.1e}  ({:.1?})",
        crossing.p_cross,
        crossing.uncertainty,
        start.elapsed()
    );
    Ok(())
}
