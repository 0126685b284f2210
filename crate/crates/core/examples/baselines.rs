//! Single-qubit coherent information next to the hashing bound, and where
//! each noise model's bound reaches zero.

use qci::threshold::{baseline_curve, hashing_bound, NoiseKind};

fn main() -> qci::Result<()> {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.025).collect();
    for noise in [NoiseKind::BitFlip, NoiseKind::Depolarizing] {
        let curve = baseline_curve(noise, &grid)?;
        println!("{noise}");
        for (p, ci) in grid.iter().zip(&curve.values) {
            println!("  p = {p:.3}  CI = {ci:+.6}  hashing = {:+.6}", hashing_bound(noise, *p)?);
        }
        // The bound decreases on [0, 1/2]; bisect for its zero.
        let (mut lo, mut hi) = (0.0, 0.5);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if hashing_bound(noise, mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        println!("  hashing bound reaches zero at p = {lo:.5}\n");
    }
    Ok(())
}
