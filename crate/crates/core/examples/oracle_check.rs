//! Cross-check the blocked engine against the dense density matrix on the
//! small codes, including a memory circuit simulated gate by gate.

use qci::circuit::{build_repetition_memory, circuit_level_rates, Element};
use qci::codes::{color_code_488, repetition_code, rotated_surface_code};
use qci::oracle::{dense_apply_channel, dense_apply_gate, dense_ci, dense_encode};
use qci::pauli::{bit_flip_channel, depolarizing_channel};
use qci::threshold::{code_capacity_ci, memory_ci, CssReduction, NoiseKind, SweepOptions};

fn main() -> qci::Result<()> {
    let options = SweepOptions {
        css_reduction: CssReduction::Off,
        ..SweepOptions::default()
    };
    for code in [repetition_code(3)?, rotated_surface_code(3)?, color_code_488(3)?] {
        let n = code.n();
        for noise in [NoiseKind::BitFlip, NoiseKind::Depolarizing] {
            let p = 0.1;
            let mut dense = dense_encode(&code, 0)?;
            for q in 0..n {
                let ch = match noise {
                    NoiseKind::BitFlip => bit_flip_channel(q, p, n)?,
                    NoiseKind::Depolarizing => depolarizing_channel(q, p, n)?,
                };
                dense = dense_apply_channel(&dense, &ch)?;
            }
            let oracle = dense_ci(&dense).ci_normalized;
            let engine = code_capacity_ci(&code, noise, p, &options)?.ci_normalized;
            println!(
                "{:<14} {noise:<13} p = {p}  oracle {oracle:.12}  engine {engine:.12}  diff {:.1e}",
                code.name(),
                (oracle - engine).abs()
            );
        }
    }

    let rates = circuit_level_rates(0.03)?;
    let circuit = build_repetition_memory(3, rates)?;
    let mut dense = dense_encode(&repetition_code(3)?, circuit.n_ancilla())?;
    for e in circuit.elements() {
        dense = match e {
            Element::Gate(g) => dense_apply_gate(&dense, g)?,
            Element::Channel(ch) => dense_apply_channel(&dense, ch)?,
        };
    }
    let oracle = dense_ci(&dense).ci_normalized;
    let engine = memory_ci(3, rates, &options)?.ci_normalized;
    println!(
        "memory d=3 circuit-level λ = 0.03  oracle {oracle:.12}  engine {engine:.12}  diff {:.1e}",
        (oracle - engine).abs()
    );
    Ok(())
}
