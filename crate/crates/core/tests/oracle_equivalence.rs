//! The blocked engine against the dense density-matrix oracle.

mod common;

use common::{dense_code_capacity_ci, dense_code_capacity_state, dense_memory_ci};
use nalgebra::Complex;
use qci::circuit::{circuit_level_rates, phenomenological_rates, Rates};
use qci::codes::{color_code_488, parse_code_file, repetition_code, rotated_surface_code};
use qci::frame::{complete_frame, transform_channel, RegisterMap};
use qci::pauli::{depolarizing_channel, PauliString};
use qci::state::{initial_bell_state, StateLayout};
use qci::threshold::{code_capacity_ci, memory_ci, CssReduction, NoiseKind, SweepOptions};

const TOL: f64 = 1e-10;

fn full() -> SweepOptions {
    SweepOptions {
        css_reduction: CssReduction::Off,
        ..SweepOptions::default()
    }
}

fn check(code: &qci::frame::StabilizerCode, noise: NoiseKind, ps: &[f64]) {
    for &p in ps {
        let dense = dense_code_capacity_ci(code, noise, p);
        let engine = code_capacity_ci(code, noise, p, &full()).unwrap().ci_normalized;
        assert!(
            (dense - engine).abs() < TOL,
            "{} {noise} p={p}: oracle {dense} engine {engine}",
            code.name()
        );
    }
}

#[test]
fn repetition_code_capacity() {
    let code = repetition_code(3).unwrap();
    check(&code, NoiseKind::BitFlip, &[0.05, 0.1, 0.15]);
    check(&code, NoiseKind::Depolarizing, &[0.05, 0.1, 0.15]);
}

#[test]
fn repetition_memory_phenomenological() {
    for p in [0.05, 0.11] {
        let rates = phenomenological_rates(p).unwrap();
        let dense = dense_memory_ci(3, rates);
        let engine = memory_ci(3, rates, &full()).unwrap().ci_normalized;
        assert!((dense - engine).abs() < TOL, "p={p}: {dense} vs {engine}");
    }
}

#[test]
fn repetition_memory_circuit_level() {
    for lambda in [0.02, 0.04] {
        let rates = circuit_level_rates(lambda).unwrap();
        let dense = dense_memory_ci(3, rates);
        let engine = memory_ci(3, rates, &full()).unwrap().ci_normalized;
        assert!((dense - engine).abs() < TOL, "λ={lambda}: {dense} vs {engine}");
    }
}

#[test]
fn repetition_memory_uneven_rates() {
    let rates = Rates::parse("0.02,0.05,0.07,0.03,0.09").unwrap();
    let dense = dense_memory_ci(3, rates);
    let engine = memory_ci(3, rates, &full()).unwrap().ci_normalized;
    assert!((dense - engine).abs() < TOL, "{dense} vs {engine}");
}

#[test]
fn surface_d3() {
    let code = rotated_surface_code(3).unwrap();
    check(&code, NoiseKind::BitFlip, &[0.05, 0.1, 0.15]);
    check(&code, NoiseKind::Depolarizing, &[0.05, 0.1, 0.15]);
}

#[test]
fn color_d3() {
    let code = color_code_488(3).unwrap();
    check(&code, NoiseKind::BitFlip, &[0.05, 0.1, 0.15]);
    check(&code, NoiseKind::Depolarizing, &[0.05, 0.1, 0.15]);
}

#[test]
fn non_css_and_k2_codes() {
    // [[5, 1, 3]] has no CSS form; its stabilizers mix X and Z on each qubit.
    let five = parse_code_file(
        "n 5 k 1\nS XZZXI\nS IXZZX\nS XIXZZ\nS ZXIXZ\nLX XXXXX\nLZ ZZZZZ\n",
    )
    .unwrap();
    check(&five, NoiseKind::Depolarizing, &[0.05, 0.12]);
    let toy = parse_code_file(include_str!("../data/four_two_two.code")).unwrap();
    check(&toy, NoiseKind::Depolarizing, &[0.03, 0.1]);
    check(&toy, NoiseKind::BitFlip, &[0.03, 0.1]);
}

/// Entry `[u][v]` of block `s` must equal `⟨r, ψ_{s,l}| ρ |r', ψ_{s,l'}⟩`
/// with `ψ_{s,l} = D^s X̄^l |0_L⟩` and `u = (l << k) | r`.
#[test]
fn blocks_match_dense_matrix_entries() {
    let code = repetition_code(3).unwrap();
    let (n, k, m) = (code.n(), code.k(), code.n() - code.k());
    let p = 0.13;
    let dense = dense_code_capacity_state(&code, NoiseKind::Depolarizing, p);
    let rho = dense.matrix();

    let frame = complete_frame(&code).unwrap();
    let map = RegisterMap::data_only(n);
    let channels: Vec<_> = (0..n)
        .map(|q| transform_channel(&frame, &depolarizing_channel(q, p, n).unwrap(), &map).unwrap())
        .collect();
    let mut state = initial_bell_state(&StateLayout::full(&code, 0));
    state.apply_channels(&channels).unwrap();

    // |0_L⟩ = |000⟩ for Z-type checks with X̄ = XXX.
    let apply = |op: &PauliString, v: &[Complex<f64>]| -> Vec<Complex<f64>> {
        let mut out = vec![Complex::new(0.0, 0.0); v.len()];
        for (b, a) in v.iter().enumerate() {
            let mut to = b;
            let mut phase = Complex::new(1.0, 0.0);
            for q in 0..op.n_qubits() {
                match op.letter(q) {
                    'X' => to ^= 1 << q,
                    'Z' => {
                        if b >> q & 1 == 1 {
                            phase = -phase;
                        }
                    }
                    'Y' => {
                        to ^= 1 << q;
                        phase *= Complex::new(0.0, if b >> q & 1 == 1 { -1.0 } else { 1.0 });
                    }
                    _ => {}
                }
            }
            out[to] += phase * a;
        }
        out
    };
    let mut zero = vec![Complex::new(0.0, 0.0); 1 << n];
    zero[0] = Complex::new(1.0, 0.0);
    let basis = |s: usize, l: usize| {
        let mut v = zero.clone();
        if l == 1 {
            v = apply(&code.logical_x()[0], &v);
        }
        for i in 0..m {
            if s >> i & 1 == 1 {
                v = apply(&frame.destabilizers()[i], &v);
            }
        }
        v
    };
    let full_vector = |r: usize, psi: &[Complex<f64>]| {
        let mut v = vec![Complex::new(0.0, 0.0); 1 << (n + k)];
        for (b, a) in psi.iter().enumerate() {
            v[(r << n) | b] = *a;
        }
        v
    };

    let dim = 1 << (2 * k);
    let mut checked = 0;
    for s in 0..(1usize << m) {
        let label = qci::bits::Bits::from_u64(m, s as u64);
        let block = state.block(&label).expect("every syndrome is reachable");
        for u in 0..dim {
            for v in 0..dim {
                let (lu, ru) = (u >> k, u & 1);
                let (lv, rv) = (v >> k, v & 1);
                let bra = full_vector(ru, &basis(s, lu));
                let ket = full_vector(rv, &basis(s, lv));
                let mut entry = Complex::new(0.0, 0.0);
                for (i, b) in bra.iter().enumerate() {
                    if *b == Complex::new(0.0, 0.0) {
                        continue;
                    }
                    for (j, c) in ket.iter().enumerate() {
                        entry += b.conj() * rho[(i, j)] * c;
                    }
                }
                assert!(entry.im.abs() < 1e-12);
                assert!(
                    (entry.re - block[u * dim + v]).abs() < 1e-12,
                    "s={s} u={u} v={v}: dense {entry} engine {}",
                    block[u * dim + v]
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 4 * 16);
}
