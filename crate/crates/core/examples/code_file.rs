//! Load stabilizer codes from text files and compare them with the
//! single-qubit curve. `code_file PATH` reads any file in the same format.

use qci::codes::parse_code_file;
use qci::threshold::{
    baseline_curve, pseudo_threshold, sweep_code_capacity, CssReduction, Grid, NoiseKind,
    SweepOptions,
};

fn main() -> qci::Result<()> {
    let texts: Vec<(String, String)> = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable code file");
            vec![(path, text)]
        }
        None => vec![
            ("steane".into(), include_str!("../data/steane.code").into()),
            ("four_two_two".into(), include_str!("../data/four_two_two.code").into()),
        ],
    };
    let options = SweepOptions {
        css_reduction: CssReduction::Off,
        ..SweepOptions::default()
    };
    let grid = Grid::new(0.05, 0.25, 0.0025)?.points();
    for (name, text) in texts {
        let code = parse_code_file(&text)?;
        println!("{name}: [[{}, {}]], css = {}", code.n(), code.k(), code.is_css());
        for noise in [NoiseKind::BitFlip, NoiseKind::Depolarizing] {
            let curve = sweep_code_capacity(&code, noise, &grid, &options)?;
            let single = baseline_curve(noise, &grid)?;
            match pseudo_threshold(&curve, &single) {
                Ok(c) => println!("  {noise}: pseudo-threshold p = {:.4} ± {:.1e}", c.p_cross, c.uncertainty),
                Err(e) => println!("  {noise}: {e}"),
            }
        }
    }
    Ok(())
}
