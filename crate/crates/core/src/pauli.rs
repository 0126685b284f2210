//! Binary-symplectic Pauli operators, Clifford conjugation and Pauli channels.
//!
//! Phases are not represented. Every Pauli here ends up as a Kraus operator
//! `K ρ K†`, where a global phase cancels, so `X·Z` and `Y` are the same value.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{check_probability, Error, Result};

/// An `n`-qubit Pauli operator stored as paired X/Z bit-vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: Bits,
    z: Bits,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: Bits::zeros(n),
            z: Bits::zeros(n),
        }
    }

    pub fn from_bits(x: Bits, z: Bits) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    /// Single-qubit Pauli `kind` (one of `I`, `X`, `Y`, `Z`) on `qubit`.
    pub fn single(n: usize, qubit: usize, kind: char) -> Result<Self> {
        Self::from_sparse(n, [(qubit, kind)])
    }

    /// Build from `(qubit, kind)` pairs; repeated qubits multiply.
    pub fn from_sparse(n: usize, ops: impl IntoIterator<Item = (usize, char)>) -> Result<Self> {
        let mut p = Self::identity(n);
        for (q, kind) in ops {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            let (x, z) = match kind.to_ascii_uppercase() {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => return Err(Error::MalformedPauli(kind.to_string())),
            };
            if x {
                p.x.flip(q);
            }
            if z {
                p.z.flip(q);
            }
        }
        Ok(p)
    }

    pub fn x_type(n: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::from_sparse(n, support.into_iter().map(|q| (q, 'X')))
    }

    pub fn z_type(n: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::from_sparse(n, support.into_iter().map(|q| (q, 'Z')))
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        (0..self.n_qubits())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .collect()
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    /// Letter on `qubit`: one of `I`, `X`, `Y`, `Z`.
    pub fn letter(&self, qubit: usize) -> char {
        match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::LengthMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        Ok(())
    }

    /// True iff the symplectic product `a.x·b.z ⊕ a.z·b.x` vanishes.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(!self.anticommutes_unchecked(other))
    }

    /// Symplectic product; panics on width mismatch.
    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Product up to phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        Ok(PauliString {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        })
    }

    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Conjugate through `gates` applied in order: returns the x/z image of
    /// `g_m ⋯ g_1 · p · g_1† ⋯ g_m†`. Signs are not tracked.
    pub fn conjugate_through(&self, gates: &[CliffordGate]) -> Result<PauliString> {
        let n = self.n_qubits();
        let mut out = self.clone();
        for gate in gates {
            gate.validate(n)?;
            out.apply_gate_unchecked(gate);
        }
        Ok(out)
    }

    pub(crate) fn apply_gate_unchecked(&mut self, gate: &CliffordGate) {
        match *gate {
            CliffordGate::Cnot { control, target } => {
                if self.x.get(control) {
                    self.x.flip(target);
                }
                if self.z.get(target) {
                    self.z.flip(control);
                }
            }
            CliffordGate::H(q) => {
                let (x, z) = (self.x.get(q), self.z.get(q));
                self.x.set(q, z);
                self.z.set(q, x);
            }
            CliffordGate::S(q) => {
                if self.x.get(q) {
                    self.z.flip(q);
                }
            }
            CliffordGate::X(_) => {}
        }
    }

    /// Restrict to the qubits listed in `qubits`, in that order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let m = qubits.len();
        let mut out = PauliString::identity(m);
        for (i, &q) in qubits.iter().enumerate() {
            out.x.set(i, self.x.get(q));
            out.z.set(i, self.z.get(q));
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses a string over `{I, X, Y, Z}`; the leftmost character is qubit 0.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::MalformedPauli(s.to_string()));
        }
        let n = s.chars().count();
        let mut p = PauliString::identity(n);
        for (q, c) in s.chars().enumerate() {
            match c {
                'I' => {}
                'X' => p.x.set(q, true),
                'Y' => {
                    p.x.set(q, true);
                    p.z.set(q, true)
                }
                'Z' => p.z.set(q, true),
                _ => return Err(Error::MalformedPauli(s.to_string())),
            }
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    Cnot { control: usize, target: usize },
    H(usize),
    S(usize),
    X(usize),
}

impl CliffordGate {
    pub fn cnot(control: usize, target: usize) -> Self {
        CliffordGate::Cnot { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::Cnot { control, target } => vec![control, target],
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::X(q) => vec![q],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
        }
        if let CliffordGate::Cnot { control, target } = *self {
            if control == target {
                return Err(Error::InvalidGate(format!(
                    "CNOT control and target are both {control}"
                )));
            }
        }
        Ok(())
    }
}

/// A mixture of Pauli Kraus operators, `ρ ↦ Σ p_t P_t ρ P_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    terms: Vec<(f64, PauliString)>,
}

const CHANNEL_SUM_TOLERANCE: f64 = 1e-12;

impl PauliChannel {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::UnnormalizedChannel(0.0));
        };
        let n = first.n_qubits();
        let mut total = 0.0;
        for (p, op) in &terms {
            check_probability(*p)?;
            if op.n_qubits() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: op.n_qubits(),
                });
            }
            total += p;
        }
        if (total - 1.0).abs() > CHANNEL_SUM_TOLERANCE {
            return Err(Error::UnnormalizedChannel(total));
        }
        Ok(Self { terms })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            terms: vec![(1.0, PauliString::identity(n))],
        }
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn n_qubits(&self) -> usize {
        self.terms[0].1.n_qubits()
    }

    pub fn is_identity(&self) -> bool {
        self.terms
            .iter()
            .all(|(p, op)| *p == 0.0 || op.is_identity())
    }

    /// Qubits touched by any term with nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        let mut touched: Vec<usize> = self
            .terms
            .iter()
            .filter(|(p, _)| *p > 0.0)
            .flat_map(|(_, op)| op.support())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        touched
    }
}

/// `{(1−p, I), (p, X_q)}`.
pub fn bit_flip_channel(qubit: usize, p: f64, n: usize) -> Result<PauliChannel> {
    check_probability(p)?;
    if p == 0.0 {
        return Ok(PauliChannel::identity(n));
    }
    PauliChannel::new(vec![
        (1.0 - p, PauliString::identity(n)),
        (p, PauliString::single(n, qubit, 'X')?),
    ])
}

/// `{(1−p, I), (p/3, X_q), (p/3, Y_q), (p/3, Z_q)}`.
pub fn depolarizing_channel(qubit: usize, p: f64, n: usize) -> Result<PauliChannel> {
    check_probability(p)?;
    if p == 0.0 {
        return Ok(PauliChannel::identity(n));
    }
    PauliChannel::new(vec![
        (1.0 - p, PauliString::identity(n)),
        (p / 3.0, PauliString::single(n, qubit, 'X')?),
        (p / 3.0, PauliString::single(n, qubit, 'Y')?),
        (p / 3.0, PauliString::single(n, qubit, 'Z')?),
    ])
}

/// CNOT failure model: `{(1−p₂, I), (p₂/3, X_i), (p₂/3, X_j), (p₂/3, X_i X_j)}`.
pub fn two_qubit_bit_flip_channel(i: usize, j: usize, p2: f64, n: usize) -> Result<PauliChannel> {
    check_probability(p2)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "two-qubit channel needs distinct qubits, got {i} twice"
        )));
    }
    if p2 == 0.0 {
        // still validate indices
        PauliString::x_type(n, [i, j])?;
        return Ok(PauliChannel::identity(n));
    }
    PauliChannel::new(vec![
        (1.0 - p2, PauliString::identity(n)),
        (p2 / 3.0, PauliString::single(n, i, 'X')?),
        (p2 / 3.0, PauliString::single(n, j, 'X')?),
        (p2 / 3.0, PauliString::x_type(n, [i, j])?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("III").commutes(&p("XYZ")).unwrap());
        assert!(matches!(
            p("X").commutes(&p("XX")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let y = p("X").multiply(&p("Z")).unwrap();
        assert!(y.x_bits().get(0) && y.z_bits().get(0));
        assert_eq!(y, p("Y"));
        assert!(p("XYZ").multiply(&p("XYZ")).unwrap().is_identity());
        assert_eq!(p("XXI").multiply(&p("IXX")).unwrap(), p("XIX"));
    }

    #[test]
    fn cnot_propagation() {
        let cx = [CliffordGate::cnot(0, 1)];
        assert_eq!(p("XI").conjugate_through(&cx).unwrap(), p("XX"));
        assert_eq!(p("IZ").conjugate_through(&cx).unwrap(), p("ZZ"));
        assert_eq!(p("IX").conjugate_through(&cx).unwrap(), p("IX"));
        assert_eq!(p("ZI").conjugate_through(&cx).unwrap(), p("ZI"));
    }

    #[test]
    fn single_qubit_gate_rules() {
        assert_eq!(p("X").conjugate_through(&[CliffordGate::H(0)]).unwrap(), p("Z"));
        assert_eq!(p("X").conjugate_through(&[CliffordGate::S(0)]).unwrap(), p("Y"));
        assert_eq!(p("Y").conjugate_through(&[CliffordGate::X(0)]).unwrap(), p("Y"));
    }

    #[test]
    fn bad_gates_are_rejected() {
        assert!(p("XX").conjugate_through(&[CliffordGate::cnot(0, 2)]).is_err());
        assert!(p("XX").conjugate_through(&[CliffordGate::cnot(1, 1)]).is_err());
    }

    #[test]
    fn pauli_text_round_trip() {
        assert_eq!(p("IXYZ").to_string(), "IXYZ");
        assert!("IXA".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn channel_definitions() {
        let c = bit_flip_channel(0, 0.0, 1).unwrap();
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].0, 1.0);
        assert!(c.terms()[0].1.is_identity());

        let c = depolarizing_channel(0, 0.3, 1).unwrap();
        let probs: Vec<f64> = c.terms().iter().map(|t| t.0).collect();
        assert!((probs[0] - 0.7).abs() < 1e-15);
        for q in &probs[1..] {
            assert!((q - 0.1).abs() < 1e-15);
        }
        let ops: Vec<String> = c.terms().iter().map(|t| t.1.to_string()).collect();
        assert_eq!(ops, ["I", "X", "Y", "Z"]);

        let c = two_qubit_bit_flip_channel(0, 1, 0.3, 2).unwrap();
        let ops: Vec<String> = c.terms().iter().map(|t| t.1.to_string()).collect();
        assert_eq!(ops, ["II", "XI", "IX", "XX"]);
        assert!((c.terms()[0].0 - 0.7).abs() < 1e-15);
        assert!(c.terms()[1..].iter().all(|t| (t.0 - 0.1).abs() < 1e-15));

        assert!(matches!(
            bit_flip_channel(0, 1.5, 1),
            Err(Error::InvalidProbability(_))
        ));
        assert!(depolarizing_channel(0, -0.1, 1).is_err());
    }

    #[test]
    fn channel_probabilities_sum_to_one_on_grid() {
        for i in 0..=100 {
            let prob = i as f64 / 100.0;
            for c in [
                bit_flip_channel(1, prob, 3).unwrap(),
                depolarizing_channel(1, prob, 3).unwrap(),
                two_qubit_bit_flip_channel(0, 2, prob, 3).unwrap(),
            ] {
                let total: f64 = c.terms().iter().map(|t| t.0).sum();
                assert!((total - 1.0).abs() <= 1e-12);
            }
        }
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (any::<u64>(), any::<u64>()).prop_map(move |(x, z)| {
            PauliString::from_bits(Bits::from_u64(n, x), Bits::from_u64(n, z)).unwrap()
        })
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = CliffordGate> {
        prop_oneof![
            (0..n, 1..n).prop_map(move |(c, off)| CliffordGate::cnot(c, (c + off) % n)),
            (0..n).prop_map(CliffordGate::H),
            (0..n).prop_map(CliffordGate::S),
            (0..n).prop_map(CliffordGate::X),
        ]
    }

    proptest! {
        #[test]
        fn commutation_is_symmetric(a in arb_pauli(7), b in arb_pauli(7)) {
            prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
            prop_assert!(a.commutes(&a.multiply(&a).unwrap()).unwrap());
        }

        #[test]
        fn multiplication_is_associative_and_involutive(
            a in arb_pauli(9), b in arb_pauli(9), c in arb_pauli(9)
        ) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert!(a.multiply(&a).unwrap().is_identity());
        }

        #[test]
        fn conjugation_is_a_homomorphism(
            a in arb_pauli(6),
            b in arb_pauli(6),
            gates in proptest::collection::vec(arb_gate(6), 10),
        ) {
            let lhs = a.multiply(&b).unwrap().conjugate_through(&gates).unwrap();
            let rhs = a.conjugate_through(&gates).unwrap()
                .multiply(&b.conjugate_through(&gates).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            // Clifford conjugation preserves commutation relations.
            prop_assert_eq!(
                a.commutes(&b).unwrap(),
                a.conjugate_through(&gates).unwrap()
                    .commutes(&b.conjugate_through(&gates).unwrap()).unwrap()
            );
        }
    }
}
