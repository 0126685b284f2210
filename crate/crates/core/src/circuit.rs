//! Repetition-code memory experiment with faulty syndrome extraction.
//!
//! Register layout: data qubits `0..d`, then one fresh ancilla per
//! stabilizer per round, ancilla `j` of round `r` at `d + r(d−1) + j`.
//! The reference qubit is not part of the register, so no gate or channel
//! can reach it.
//!
//! Compilation pushes every error location to the end of the circuit. With
//! `U_t` the gates after location `t`, `N_T ∘ U_T ∘ … ∘ N_1 ∘ U_1` equals
//! `Ñ_T ∘ … ∘ Ñ_1 ∘ U_T ⋯ U_1` where `Ñ_t` conjugates each Kraus Pauli of
//! `N_t` through all later gates. The gates acting on the noiseless input
//! only copy trivial syndromes onto the ancillas, which stay at 0.

use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::frame::{transform_channel, RegisterMap, Slot, StabilizerFrame, WorkingChannel};
use crate::pauli::{bit_flip_channel, two_qubit_bit_flip_channel, CliffordGate, PauliChannel};
use crate::state::{initial_bell_state, BlockedState, CiResult, StateLayout};

/// Error rates of the memory circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rates {
    /// Ancilla preparation.
    pub p_sp: f64,
    /// Data idling after each syndrome round.
    pub p_id: f64,
    /// Ancilla flip after each round (faulty readout).
    pub p_m: f64,
    /// Two-qubit flip after each CNOT.
    pub p_2: f64,
    /// Data flip before the first round.
    pub p_data: f64,
}

impl Rates {
    pub fn validate(&self) -> Result<()> {
        for p in [self.p_sp, self.p_id, self.p_m, self.p_2, self.p_data] {
            check_probability(p)?;
        }
        Ok(())
    }

    /// Parse `p_sp,p_id,p_m,p_2,p_data`.
    pub fn parse(text: &str) -> Result<Self> {
        let values: Vec<f64> = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad rate {s:?}")))
            })
            .collect::<Result<_>>()?;
        let [p_sp, p_id, p_m, p_2, p_data] = values[..] else {
            return Err(Error::InvalidArgument(format!(
                "expected five comma-separated rates, got {}",
                values.len()
            )));
        };
        let rates = Self {
            p_sp,
            p_id,
            p_m,
            p_2,
            p_data,
        };
        rates.validate()?;
        Ok(rates)
    }
}

/// `p_sp = p_2 = 0`, all other rates `p`.
pub fn phenomenological_rates(p: f64) -> Result<Rates> {
    check_probability(p)?;
    Ok(Rates {
        p_sp: 0.0,
        p_id: p,
        p_m: p,
        p_2: 0.0,
        p_data: p,
    })
}

/// Every rate equal to `lambda`.
pub fn circuit_level_rates(lambda: f64) -> Result<Rates> {
    check_probability(lambda)?;
    Ok(Rates {
        p_sp: lambda,
        p_id: lambda,
        p_m: lambda,
        p_2: lambda,
        p_data: lambda,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Gate(CliffordGate),
    Channel(PauliChannel),
}

#[derive(Clone, Debug)]
pub struct NoisyCircuit {
    d: usize,
    rounds: usize,
    rates: Rates,
    elements: Vec<Element>,
}

impl NoisyCircuit {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn n_ancilla(&self) -> usize {
        self.rounds * (self.d - 1)
    }

    /// Data plus ancilla qubits (the reference is extra).
    pub fn n_qubits(&self) -> usize {
        self.d + self.n_ancilla()
    }

    pub fn rates(&self) -> Rates {
        self.rates
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn ancilla(&self, round: usize, stabilizer: usize) -> usize {
        self.d + round * (self.d - 1) + stabilizer
    }

    pub fn register_map(&self) -> RegisterMap {
        let slots = (0..self.d)
            .map(Slot::Data)
            .chain((0..self.n_ancilla()).map(Slot::Ancilla))
            .collect();
        RegisterMap::new(slots).expect("memory register map is valid")
    }

    pub fn channel_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Channel(_)))
            .count()
    }

    /// Swap two elements; used to test ordering invariants.
    pub fn swap_elements(&mut self, a: usize, b: usize) {
        self.elements.swap(a, b);
    }
}

/// `d − 1` rounds of `Z_j Z_{j+1}` extraction on a distance-`d`
/// repetition code.
pub fn build_repetition_memory(d: usize, rates: Rates) -> Result<NoisyCircuit> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidDistance {
            family: "repetition memory",
            distance: d,
            reason: "must be odd and at least 3",
        });
    }
    rates.validate()?;
    let rounds = d - 1;
    let n = d + rounds * (d - 1);
    let mut circuit = NoisyCircuit {
        d,
        rounds,
        rates,
        elements: Vec::new(),
    };
    let mut push = |e: Element| circuit.elements.push(e);

    // A: preparation errors on every ancilla.
    for a in d..n {
        push(Element::Channel(bit_flip_channel(a, rates.p_sp, n)?));
    }
    // C: the data noise ahead of the first round.
    for q in 0..d {
        push(Element::Channel(bit_flip_channel(q, rates.p_data, n)?));
    }
    for r in 0..rounds {
        // D/F: syndrome extraction.
        for j in 0..d - 1 {
            let a = d + r * (d - 1) + j;
            for q in [j, j + 1] {
                push(Element::Gate(CliffordGate::cnot(q, a)));
                push(Element::Channel(two_qubit_bit_flip_channel(q, a, rates.p_2, n)?));
            }
        }
        // E/G: readout errors, then idling.
        for j in 0..d - 1 {
            let a = d + r * (d - 1) + j;
            push(Element::Channel(bit_flip_channel(a, rates.p_m, n)?));
        }
        for q in 0..d {
            push(Element::Channel(bit_flip_channel(q, rates.p_id, n)?));
        }
    }
    Ok(circuit)
}

#[derive(Clone, Debug)]
pub struct CompiledNoise {
    pub ideal_state: BlockedState,
    pub channels: Vec<WorkingChannel>,
}

impl CompiledNoise {
    pub fn layout(&self) -> &StateLayout {
        self.ideal_state.layout()
    }

    pub fn run(&self, memory_limit_blocks: u64, prune: f64) -> Result<CiResult> {
        let mut state = self
            .ideal_state
            .clone()
            .with_memory_limit(memory_limit_blocks)
            .with_prune(prune);
        state.apply_channels(&self.channels)?;
        state.coherent_information()
    }
}

pub fn compile(circuit: &NoisyCircuit, frame: &StabilizerFrame) -> Result<CompiledNoise> {
    if frame.code().n() != circuit.d {
        return Err(Error::LayoutMismatch(format!(
            "circuit has {} data qubits, code has {}",
            circuit.d,
            frame.code().n()
        )));
    }
    let map = circuit.register_map();
    let mut later: Vec<CliffordGate> = Vec::new();
    let mut compiled = Vec::with_capacity(circuit.channel_count());
    for element in circuit.elements.iter().rev() {
        match element {
            Element::Gate(g) => later.push(*g),
            Element::Channel(ch) => {
                let terms = ch
                    .terms()
                    .iter()
                    .map(|(w, p)| {
                        let mut image = p.clone();
                        for g in later.iter().rev() {
                            image.apply_gate_unchecked(g);
                        }
                        (*w, image)
                    })
                    .collect();
                let pushed = PauliChannel::new(terms)?;
                compiled.push(transform_channel(frame, &pushed, &map)?);
            }
        }
    }
    compiled.reverse();
    let layout = StateLayout::full(frame.code(), circuit.n_ancilla());
    Ok(CompiledNoise {
        ideal_state: initial_bell_state(&layout),
        channels: compiled,
    })
}
