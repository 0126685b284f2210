//! Print a code, its completed frame and how single-qubit errors look in
//! the stabilizer basis.
//!
//! Usage: `inspect_code [surface|color488|repetition] [D]`

use qci::codes::{to_code_file, CodeFamily};
use qci::frame::{complete_frame, transform_pauli};
use qci::pauli::PauliString;

fn main() -> qci::Result<()> {
    let mut args = std::env::args().skip(1);
    let family = match args.next().as_deref() {
        None | Some("surface") => CodeFamily::Surface,
        Some("color488") => CodeFamily::Color488,
        Some("repetition") => CodeFamily::Repetition,
        Some(other) => {
            eprintln!("unknown family {other:?}");
            std::process::exit(1);
        }
    };
    let d = args.next().map_or(3, |a| a.parse().expect("distance is an integer"));
    let code = family.build(d)?;
    print!("{}", to_code_file(&code));

    let frame = complete_frame(&code)?;
    println!("\ndestabilizers:");
    for (s, t) in code.stabilizers().iter().zip(frame.destabilizers()) {
        println!("  {s}  ↔  {t}");
    }

    println!("\nsingle-qubit errors (syndrome | logical flips | phases):");
    for q in 0..code.n().min(4) {
        for kind in ['X', 'Z'] {
            let e = PauliString::single(code.n(), q, kind)?;
            let t = transform_pauli(&frame, &e)?;
            println!(
                "  {kind}{q}: {} | {} | {}",
                t.syndrome_flips, t.logical_flips, t.phase_mask
            );
        }
    }
    Ok(())
}
