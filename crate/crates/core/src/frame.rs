//! Stabilizer codes, destabilizer completion, and the map from physical
//! Pauli errors to their action on the stabilizer (working) basis.
//!
//! Conjugating by the encoder sends stabilizer `i` to `Z_i`, destabilizer `i`
//! to `X_i`, and the logical pair `(X̄_j, Z̄_j)` to `(X, Z)` on logical slot
//! `j`. An error therefore flips syndrome bit `i` iff it anticommutes with
//! `S_i` and picks up a sign on that bit iff it anticommutes with `D_i`; the
//! logical slots behave the same way with `Z̄_j` and `X̄_j`. No encoding
//! circuit is ever built.

use crate::bits::{gf2_rank, Bits};
use crate::error::{Error, Result};
use crate::pauli::{PauliChannel, PauliString};

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    k: usize,
    stabilizers: Vec<PauliString>,
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
    distance: Option<usize>,
}

fn labelled(kind: &str, i: usize, p: &PauliString) -> String {
    format!("{kind}[{i}] {p}")
}

impl StabilizerCode {
    /// Validates every commutation relation, stabilizer independence, and
    /// that `n − k` stabilizers are given for `k = logical_x.len()`.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        stabilizers: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
        distance: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCode("code needs at least one qubit".into()));
        }
        let k = logical_x.len();
        if k == 0 {
            return Err(Error::InvalidCode("code must encode at least one logical qubit".into()));
        }
        if logical_z.len() != k {
            return Err(Error::InvalidCode(format!(
                "{k} logical X operators but {} logical Z operators",
                logical_z.len()
            )));
        }
        if stabilizers.len() + k != n {
            return Err(Error::InvalidCode(format!(
                "{} stabilizers and {k} logical qubits do not add up to n = {n}",
                stabilizers.len()
            )));
        }
        for p in stabilizers.iter().chain(&logical_x).chain(&logical_z) {
            if p.n_qubits() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: p.n_qubits(),
                });
            }
        }

        let pair_error = |a: String, b: String| Error::AnticommutingPair {
            first: a,
            second: b,
        };
        for (i, a) in stabilizers.iter().enumerate() {
            for (j, b) in stabilizers.iter().enumerate().skip(i + 1) {
                if a.anticommutes_unchecked(b) {
                    return Err(pair_error(labelled("S", i, a), labelled("S", j, b)));
                }
            }
        }
        for (kind, logicals) in [("LX", &logical_x), ("LZ", &logical_z)] {
            for (j, l) in logicals.iter().enumerate() {
                for (i, s) in stabilizers.iter().enumerate() {
                    if l.anticommutes_unchecked(s) {
                        return Err(pair_error(labelled("S", i, s), labelled(kind, j, l)));
                    }
                }
            }
        }
        for i in 0..k {
            if !logical_x[i].anticommutes_unchecked(&logical_z[i]) {
                return Err(Error::LogicalPairCommutes(i));
            }
            for j in 0..k {
                if i == j {
                    continue;
                }
                if logical_x[i].anticommutes_unchecked(&logical_z[j]) {
                    return Err(pair_error(
                        labelled("LX", i, &logical_x[i]),
                        labelled("LZ", j, &logical_z[j]),
                    ));
                }
                if j > i && logical_x[i].anticommutes_unchecked(&logical_x[j]) {
                    return Err(pair_error(
                        labelled("LX", i, &logical_x[i]),
                        labelled("LX", j, &logical_x[j]),
                    ));
                }
                if j > i && logical_z[i].anticommutes_unchecked(&logical_z[j]) {
                    return Err(pair_error(
                        labelled("LZ", i, &logical_z[i]),
                        labelled("LZ", j, &logical_z[j]),
                    ));
                }
            }
        }
        let rows: Vec<Bits> = stabilizers.iter().map(symplectic_row).collect();
        if gf2_rank(&rows) != rows.len() {
            return Err(Error::DependentStabilizers);
        }

        Ok(Self {
            name: name.into(),
            n,
            k,
            stabilizers,
            logical_x,
            logical_z,
            distance,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn logical_x(&self) -> &[PauliString] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliString] {
        &self.logical_z
    }

    /// Every stabilizer is pure X or pure Z.
    pub fn is_css(&self) -> bool {
        self.stabilizers
            .iter()
            .all(|s| s.is_x_type() || s.is_z_type())
    }

    /// Indices of the pure-Z stabilizers (the only ones X errors can flip).
    pub fn z_stabilizer_indices(&self) -> Vec<usize> {
        (0..self.stabilizers.len())
            .filter(|&i| self.stabilizers[i].is_z_type())
            .collect()
    }

    /// Same code with its stabilizers listed in `order`.
    pub fn reorder_stabilizers(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.stabilizers.len()];
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!(
                    "{order:?} is not a permutation of the stabilizer indices"
                )));
            }
        }
        if order.len() != seen.len() {
            return Err(Error::InvalidArgument(format!(
                "{order:?} is not a permutation of the stabilizer indices"
            )));
        }
        Ok(Self {
            stabilizers: order.iter().map(|&i| self.stabilizers[i].clone()).collect(),
            ..self.clone()
        })
    }
}

/// `(x | z)` as one `2n`-bit row.
fn symplectic_row(p: &PauliString) -> Bits {
    p.x_bits().concat(p.z_bits())
}

/// `(z | x)`, so that `dual(a) · row(b)` is the symplectic product.
fn symplectic_dual(p: &PauliString) -> Bits {
    p.z_bits().concat(p.x_bits())
}

#[derive(Clone, Debug)]
pub struct StabilizerFrame {
    code: StabilizerCode,
    destabilizers: Vec<PauliString>,
}

impl StabilizerFrame {
    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }
}

/// Symplectic Gram–Schmidt: solve for each destabilizer against the fixed
/// stabilizers and logicals, then clear mutual anticommutation between
/// destabilizers by multiplying in the matching stabilizer.
pub fn complete_frame(code: &StabilizerCode) -> Result<StabilizerFrame> {
    let n = code.n;
    let m = n - code.k;
    let constraints: Vec<&PauliString> = code
        .stabilizers
        .iter()
        .chain(&code.logical_x)
        .chain(&code.logical_z)
        .collect();
    let rows = constraints.len();

    // Row-reduce [M | I]; M has the symplectic duals as rows.
    let mut reduced: Vec<Bits> = constraints.iter().map(|p| symplectic_dual(p)).collect();
    let mut tracking: Vec<Bits> = (0..rows).map(|i| Bits::from_indices(rows, [i])).collect();
    let mut pivots = Vec::with_capacity(rows);
    let mut next = 0;
    for col in 0..2 * n {
        let Some(found) = (next..rows).find(|&r| reduced[r].get(col)) else {
            continue;
        };
        reduced.swap(next, found);
        tracking.swap(next, found);
        for r in 0..rows {
            if r != next && reduced[r].get(col) {
                let (pivot_row, pivot_track) = (reduced[next].clone(), tracking[next].clone());
                reduced[r].xor_assign(&pivot_row);
                tracking[r].xor_assign(&pivot_track);
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows {
            break;
        }
    }
    if pivots.len() != rows {
        // Unreachable for a validated code; kept as a guard.
        return Err(Error::DependentStabilizers);
    }

    let mut destabilizers: Vec<PauliString> = Vec::with_capacity(m);
    for i in 0..m {
        // M v = e_i  ⇔  R v = T e_i, and R's pivot columns are unit vectors.
        let mut v = Bits::zeros(2 * n);
        for (r, &col) in pivots.iter().enumerate() {
            if tracking[r].get(i) {
                v.set(col, true);
            }
        }
        let mut d = PauliString::from_bits(v.slice(0, n), v.slice(n, n))?;
        for (j, prev) in destabilizers.iter().enumerate() {
            if d.anticommutes_unchecked(prev) {
                d.mul_assign_unchecked(&code.stabilizers[j]);
            }
        }
        destabilizers.push(d);
    }

    Ok(StabilizerFrame {
        code: code.clone(),
        destabilizers,
    })
}

/// Working-basis action of a data-qubit Pauli on labels `b = (s, l)`:
/// `|b⟩ ↦ (−1)^{phase_mask·b} |b ⊕ (syndrome_flips, logical_flips)⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransformedPauli {
    pub syndrome_flips: Bits,
    pub logical_flips: Bits,
    /// Syndrome slots first, then logical slots.
    pub phase_mask: Bits,
}

impl TransformedPauli {
    pub fn identity(n_stabilizers: usize, k: usize) -> Self {
        Self {
            syndrome_flips: Bits::zeros(n_stabilizers),
            logical_flips: Bits::zeros(k),
            phase_mask: Bits::zeros(n_stabilizers + k),
        }
    }

    pub fn compose(&self, other: &TransformedPauli) -> TransformedPauli {
        TransformedPauli {
            syndrome_flips: self.syndrome_flips.xor(&other.syndrome_flips),
            logical_flips: self.logical_flips.xor(&other.logical_flips),
            phase_mask: self.phase_mask.xor(&other.phase_mask),
        }
    }
}

pub fn transform_pauli(frame: &StabilizerFrame, e: &PauliString) -> Result<TransformedPauli> {
    let code = &frame.code;
    if e.n_qubits() != code.n {
        return Err(Error::LengthMismatch {
            expected: code.n,
            found: e.n_qubits(),
        });
    }
    let m = code.stabilizers.len();
    let k = code.k;
    let mut out = TransformedPauli::identity(m, k);
    for i in 0..m {
        out.syndrome_flips
            .set(i, e.anticommutes_unchecked(&code.stabilizers[i]));
        out.phase_mask
            .set(i, e.anticommutes_unchecked(&frame.destabilizers[i]));
    }
    for j in 0..k {
        out.logical_flips
            .set(j, e.anticommutes_unchecked(&code.logical_z[j]));
        out.phase_mask
            .set(m + j, e.anticommutes_unchecked(&code.logical_x[j]));
    }
    Ok(out)
}

/// Role of one physical qubit in a register that may hold ancillas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Data(usize),
    Ancilla(usize),
    Reference,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterMap {
    slots: Vec<Slot>,
    data_qubits: Vec<usize>,
    n_ancilla: usize,
}

impl RegisterMap {
    /// Data slots must cover `0..n_data` exactly once, ancilla slots likewise.
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        let n_data = slots.iter().filter(|s| matches!(s, Slot::Data(_))).count();
        let n_ancilla = slots
            .iter()
            .filter(|s| matches!(s, Slot::Ancilla(_)))
            .count();
        let mut data_qubits = vec![usize::MAX; n_data];
        let mut ancilla_seen = vec![false; n_ancilla];
        for (q, slot) in slots.iter().enumerate() {
            match *slot {
                Slot::Data(i) => {
                    if i >= n_data || data_qubits[i] != usize::MAX {
                        return Err(Error::InvalidArgument(format!(
                            "data slot {i} repeated or out of range"
                        )));
                    }
                    data_qubits[i] = q;
                }
                Slot::Ancilla(j) => {
                    if j >= n_ancilla || std::mem::replace(&mut ancilla_seen[j], true) {
                        return Err(Error::InvalidArgument(format!(
                            "ancilla slot {j} repeated or out of range"
                        )));
                    }
                }
                Slot::Reference => {}
            }
        }
        Ok(Self {
            slots,
            data_qubits,
            n_ancilla,
        })
    }

    /// Physical qubit `i` is data slot `i`; no ancillas.
    pub fn data_only(n: usize) -> Self {
        Self::new((0..n).map(Slot::Data).collect()).expect("identity map is valid")
    }

    pub fn n_qubits(&self) -> usize {
        self.slots.len()
    }

    pub fn n_data(&self) -> usize {
        self.data_qubits.len()
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_ancilla
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }
}

/// A physical Pauli over data and ancilla qubits in the working basis.
/// Ancillas stay in the computational basis, so their part is a raw flip
/// plus a phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WorkingPauli {
    pub data: TransformedPauli,
    pub ancilla_flips: Bits,
    pub ancilla_phase: Bits,
    /// The data-qubit part has no Z component.
    pub data_x_only: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkingChannel {
    pub terms: Vec<(f64, WorkingPauli)>,
}

impl WorkingChannel {
    pub fn n_stabilizers(&self) -> usize {
        self.terms[0].1.data.syndrome_flips.len()
    }

    pub fn k(&self) -> usize {
        self.terms[0].1.data.logical_flips.len()
    }

    pub fn n_ancilla(&self) -> usize {
        self.terms[0].1.ancilla_flips.len()
    }
}

pub fn transform_working_pauli(
    frame: &StabilizerFrame,
    p: &PauliString,
    map: &RegisterMap,
) -> Result<WorkingPauli> {
    if p.n_qubits() != map.n_qubits() {
        return Err(Error::LengthMismatch {
            expected: map.n_qubits(),
            found: p.n_qubits(),
        });
    }
    if map.n_data() != frame.code.n {
        return Err(Error::LayoutMismatch(format!(
            "register has {} data qubits, code has {}",
            map.n_data(),
            frame.code.n
        )));
    }
    let mut ancilla_flips = Bits::zeros(map.n_ancilla);
    let mut ancilla_phase = Bits::zeros(map.n_ancilla);
    for q in p.support() {
        match map.slots[q] {
            Slot::Reference => return Err(Error::ReferenceTouched),
            Slot::Ancilla(j) => {
                ancilla_flips.set(j, p.x_bits().get(q));
                ancilla_phase.set(j, p.z_bits().get(q));
            }
            Slot::Data(_) => {}
        }
    }
    let data_part = p.restrict(&map.data_qubits);
    Ok(WorkingPauli {
        data: transform_pauli(frame, &data_part)?,
        ancilla_flips,
        ancilla_phase,
        data_x_only: data_part.is_x_type(),
    })
}

pub fn transform_channel(
    frame: &StabilizerFrame,
    channel: &PauliChannel,
    map: &RegisterMap,
) -> Result<WorkingChannel> {
    let terms = channel
        .terms()
        .iter()
        .map(|(w, p)| Ok((*w, transform_working_pauli(frame, p, map)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WorkingChannel { terms })
}
