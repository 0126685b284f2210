//! Dense-oracle runners shared by the integration tests.
#![allow(dead_code)]

use qci::circuit::{build_repetition_memory, Element, Rates};
use qci::codes::repetition_code;
use qci::frame::StabilizerCode;
use qci::oracle::{dense_apply_channel, dense_apply_gate, dense_ci, dense_encode, DenseState};
use qci::pauli::{bit_flip_channel, depolarizing_channel};
use qci::threshold::NoiseKind;

pub fn dense_code_capacity_state(code: &StabilizerCode, noise: NoiseKind, p: f64) -> DenseState {
    let n = code.n();
    let mut state = dense_encode(code, 0).unwrap();
    for q in 0..n {
        let ch = match noise {
            NoiseKind::BitFlip => bit_flip_channel(q, p, n).unwrap(),
            NoiseKind::Depolarizing => depolarizing_channel(q, p, n).unwrap(),
        };
        state = dense_apply_channel(&state, &ch).unwrap();
    }
    state
}

pub fn dense_code_capacity_ci(code: &StabilizerCode, noise: NoiseKind, p: f64) -> f64 {
    dense_ci(&dense_code_capacity_state(code, noise, p)).ci_normalized
}

/// Runs the memory circuit gate by gate on the full density matrix.
pub fn dense_memory_ci(d: usize, rates: Rates) -> f64 {
    let circuit = build_repetition_memory(d, rates).unwrap();
    let code = repetition_code(d).unwrap();
    let mut state = dense_encode(&code, circuit.n_ancilla()).unwrap();
    for e in circuit.elements() {
        state = match e {
            Element::Gate(g) => dense_apply_gate(&state, g).unwrap(),
            Element::Channel(ch) => dense_apply_channel(&state, ch).unwrap(),
        };
    }
    dense_ci(&state).ci_normalized
}
