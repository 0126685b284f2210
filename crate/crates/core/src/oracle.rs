//! Dense density-matrix reference for small instances.
//!
//! Everything here is literal: codewords come from stabilizer projectors,
//! Paulis carry their `i` phases, and entropies come from a full Hermitian
//! eigendecomposition. Nothing is shared with the blocked engine except
//! `PauliString`, so agreement between the two is real evidence.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frame::StabilizerCode;
use crate::pauli::{CliffordGate, PauliChannel, PauliString};
use crate::state::CiResult;

pub const ORACLE_QUBIT_CAP: usize = 11;

type C64 = Complex<f64>;

const ZERO: C64 = Complex::new(0.0, 0.0);
const ONE: C64 = Complex::new(1.0, 0.0);
const I: C64 = Complex::new(0.0, 1.0);

/// Full density matrix over `reference ⊗ physical`. Basis index is
/// `(reference bits << n_physical) | physical bits`, qubit `q` at bit `q`.
#[derive(Clone, Debug)]
pub struct DenseState {
    n_physical: usize,
    n_reference: usize,
    rho: DMatrix<C64>,
}

impl DenseState {
    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn n_reference(&self) -> usize {
        self.n_reference
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    fn dim_physical(&self) -> usize {
        1 << self.n_physical
    }
}

/// `P|b⟩ = i^{#Y} (−1)^{z·b} |b ⊕ x⟩` on a register of `p.n_qubits()` qubits.
fn pauli_action(p: &PauliString, b: usize) -> (usize, C64) {
    let mut x = 0usize;
    let mut z = 0usize;
    let mut n_y = 0;
    for q in 0..p.n_qubits() {
        match p.letter(q) {
            'X' => x |= 1 << q,
            'Z' => z |= 1 << q,
            'Y' => {
                x |= 1 << q;
                z |= 1 << q;
                n_y += 1;
            }
            _ => {}
        }
    }
    let mut phase = I.powi(n_y);
    if (z & b).count_ones() % 2 == 1 {
        phase = -phase;
    }
    (b ^ x, phase)
}

fn apply_pauli_to_vector(p: &PauliString, v: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::from_element(v.len(), ZERO);
    for (b, amp) in v.iter().enumerate() {
        if *amp != ZERO {
            let (to, phase) = pauli_action(p, b);
            out[to] += phase * amp;
        }
    }
    out
}

/// `v ← (1 + P)/2 v`.
fn project_plus(p: &PauliString, v: &DVector<C64>) -> DVector<C64> {
    (v + apply_pauli_to_vector(p, v)) * C64::new(0.5, 0.0)
}

fn check_cap(total: usize) -> Result<()> {
    if total > ORACLE_QUBIT_CAP {
        return Err(Error::OracleCap {
            requested: total,
            cap: ORACLE_QUBIT_CAP,
        });
    }
    Ok(())
}

/// Encoded generalized Bell state of `code` with the reference, plus
/// `n_ancilla` ancillas in `|0⟩` placed after the data qubits.
pub fn dense_encode(code: &StabilizerCode, n_ancilla: usize) -> Result<DenseState> {
    let (n, k) = (code.n(), code.k());
    check_cap(n + n_ancilla + k)?;
    let dim_code = 1usize << n;

    // |0_L⟩: project the first computational state that survives.
    let mut zero_l = None;
    for b in 0..dim_code {
        let mut v = DVector::from_element(dim_code, ZERO);
        v[b] = ONE;
        for s in code.stabilizers().iter().chain(code.logical_z()) {
            v = project_plus(s, &v);
        }
        let norm = v.norm();
        if norm > 1e-6 {
            zero_l = Some(v / C64::new(norm, 0.0));
            break;
        }
    }
    let zero_l = zero_l.ok_or_else(|| Error::InvalidCode("no nonzero codeword".into()))?;

    let n_physical = n + n_ancilla;
    let dim = 1usize << (n_physical + k);
    let mut psi = DVector::from_element(dim, ZERO);
    let amp = C64::new(1.0 / ((1u64 << k) as f64).sqrt(), 0.0);
    for i in 0..(1usize << k) {
        let mut word = zero_l.clone();
        for (j, x) in code.logical_x().iter().enumerate() {
            if i >> j & 1 == 1 {
                word = apply_pauli_to_vector(x, &word);
            }
        }
        for (b, a) in word.iter().enumerate() {
            psi[(i << n_physical) | b] += amp * a;
        }
    }
    let rho = &psi * psi.adjoint();
    Ok(DenseState {
        n_physical,
        n_reference: k,
        rho,
    })
}

/// `ρ ← Σ_t p_t P_t ρ P_t†` with `P_t` acting on the physical register.
pub fn dense_apply_channel(state: &DenseState, channel: &PauliChannel) -> Result<DenseState> {
    if channel.n_qubits() != state.n_physical {
        return Err(Error::LengthMismatch {
            expected: state.n_physical,
            found: channel.n_qubits(),
        });
    }
    let dim = state.rho.nrows();
    let mask = state.dim_physical() - 1;
    let mut out = DMatrix::from_element(dim, dim, ZERO);
    for (w, p) in channel.terms() {
        if *w == 0.0 {
            continue;
        }
        let act: Vec<(usize, C64)> = (0..dim)
            .map(|idx| {
                let (to, phase) = pauli_action(p, idx & mask);
                ((idx & !mask) | to, phase)
            })
            .collect();
        for a in 0..dim {
            let (ta, pa) = act[a];
            for c in 0..dim {
                let (tc, pc) = act[c];
                out[(ta, tc)] += pa * state.rho[(a, c)] * pc.conj() * *w;
            }
        }
    }
    Ok(DenseState {
        rho: out,
        ..state.clone()
    })
}

fn single_qubit_unitary(state: &DenseState, q: usize, u: [[C64; 2]; 2]) -> DenseState {
    let dim = state.rho.nrows();
    let mut full = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let bit = col >> q & 1;
        for out_bit in 0..2 {
            let row = (col & !(1 << q)) | (out_bit << q);
            full[(row, col)] += u[out_bit][bit];
        }
    }
    DenseState {
        rho: &full * &state.rho * full.adjoint(),
        ..state.clone()
    }
}

pub fn dense_apply_gate(state: &DenseState, gate: &CliffordGate) -> Result<DenseState> {
    gate.validate(state.n_physical)?;
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ok(match *gate {
        CliffordGate::Cnot { control, target } => {
            let dim = state.rho.nrows();
            let perm = |b: usize| b ^ ((b >> control & 1) << target);
            let mut out = DMatrix::from_element(dim, dim, ZERO);
            for a in 0..dim {
                for c in 0..dim {
                    out[(perm(a), perm(c))] = state.rho[(a, c)];
                }
            }
            DenseState {
                rho: out,
                ..state.clone()
            }
        }
        CliffordGate::H(q) => single_qubit_unitary(state, q, [[h, h], [h, -h]]),
        CliffordGate::S(q) => single_qubit_unitary(state, q, [[ONE, ZERO], [ZERO, I]]),
        CliffordGate::X(q) => single_qubit_unitary(state, q, [[ZERO, ONE], [ONE, ZERO]]),
    })
}

fn hermitian_entropy_bits(m: DMatrix<C64>) -> f64 {
    m.symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

/// `Tr_R ρ`: sum over the reference bits, which are the high index bits.
pub fn dense_trace_reference(state: &DenseState) -> DMatrix<C64> {
    let d = state.dim_physical();
    let mut out = DMatrix::from_element(d, d, ZERO);
    for r in 0..(1usize << state.n_reference) {
        let off = r * d;
        out += state.rho.view((off, off), (d, d));
    }
    out
}

pub fn dense_ci(state: &DenseState) -> CiResult {
    let s_rq = hermitian_entropy_bits(state.rho.clone());
    let s_q = hermitian_entropy_bits(dense_trace_reference(state));
    CiResult::from_entropies(s_q, s_rq, state.n_reference)
}
