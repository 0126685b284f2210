//! Block-diagonal density matrices in the stabilizer basis.
//!
//! Every Pauli Kraus operator flips the same classical bits (syndrome and
//! ancilla) on ket and bra, and the initial state sits at a single classical
//! label, so the state stays block diagonal in those labels forever. Each
//! block is a real symmetric matrix over the coherent index
//! `u = (l << k) | r` of logical bits `l` and reference bits `r`.
//!
//! Only labels reachable from the origin are stored. They form the GF(2)
//! span of the classical flips seen so far, so blocks live in one dense
//! array indexed by span coordinates and a label XOR is an index XOR.

use nalgebra::{DMatrix, Matrix4};
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{Bits, EchelonBasis};
use crate::error::{Error, Result};
use crate::frame::{StabilizerCode, WorkingChannel, WorkingPauli};

pub const DEFAULT_MEMORY_LIMIT_BLOCKS: u64 = 1 << 26;
pub const NEGATIVITY_TOLERANCE: f64 = 1e-9;

/// Blocks handled per task in reductions; fixed so sums do not depend on
/// the worker count.
const REDUCTION_CHUNK: usize = 1024;
/// Below this many cosets a channel is applied on the calling thread.
const PARALLEL_COSETS: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLayout {
    k: usize,
    n_stabilizers: usize,
    /// Stabilizer indices that get a syndrome bit, in label order.
    syndrome_slots: Vec<usize>,
    n_ancilla_bits: usize,
}

impl StateLayout {
    /// One syndrome bit per stabilizer.
    pub fn full(code: &StabilizerCode, n_ancilla_bits: usize) -> Self {
        let m = code.stabilizers().len();
        Self {
            k: code.k(),
            n_stabilizers: m,
            syndrome_slots: (0..m).collect(),
            n_ancilla_bits,
        }
    }

    /// Keeps only the Z-stabilizer bits; valid for X-only noise on CSS codes.
    pub fn css_bitflip(code: &StabilizerCode, n_ancilla_bits: usize) -> Result<Self> {
        if !code.is_css() {
            return Err(Error::CssReduction(format!("a CSS code, {} is not", code.name())));
        }
        Ok(Self {
            k: code.k(),
            n_stabilizers: code.stabilizers().len(),
            syndrome_slots: code.z_stabilizer_indices(),
            n_ancilla_bits,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_syndrome_bits(&self) -> usize {
        self.syndrome_slots.len()
    }

    pub fn n_ancilla_bits(&self) -> usize {
        self.n_ancilla_bits
    }

    pub fn is_reduced(&self) -> bool {
        self.syndrome_slots.len() != self.n_stabilizers
    }

    pub fn label_width(&self) -> usize {
        self.n_syndrome_bits() + self.n_ancilla_bits
    }

    /// `4^k`, the side of a block of ρ_RQ.
    pub fn coherent_dim(&self) -> usize {
        1 << (2 * self.k)
    }

    pub fn worst_case_blocks(&self) -> u128 {
        1u128.checked_shl(self.label_width() as u32).unwrap_or(u128::MAX)
    }

    pub fn check_memory(&self, limit_blocks: u64) -> Result<()> {
        let required = self.worst_case_blocks();
        if required > limit_blocks as u128 {
            return Err(Error::MemoryGuard {
                required,
                limit: limit_blocks,
            });
        }
        Ok(())
    }

    /// Classical part of a working-basis Pauli as a label.
    fn classical_flips(&self, p: &WorkingPauli) -> Result<Bits> {
        let mut label = Bits::zeros(self.label_width());
        let syn = &p.data.syndrome_flips;
        if self.is_reduced() {
            if !p.data_x_only {
                return Err(Error::CssReduction("noise without Y or Z terms".into()));
            }
            if syn.iter_ones().any(|i| !self.syndrome_slots.contains(&i)) {
                return Err(Error::CssReduction(
                    "noise that leaves X-stabilizer syndromes untouched".into(),
                ));
            }
        }
        for (bit, &slot) in self.syndrome_slots.iter().enumerate() {
            if syn.get(slot) {
                label.set(bit, true);
            }
        }
        let offset = self.n_syndrome_bits();
        for j in p.ancilla_flips.iter_ones() {
            label.set(offset + j, true);
        }
        Ok(label)
    }

    fn check_channel(&self, channel: &WorkingChannel) -> Result<()> {
        if channel.terms.is_empty() {
            return Err(Error::LayoutMismatch("empty channel".into()));
        }
        if channel.n_stabilizers() != self.n_stabilizers
            || channel.k() != self.k
            || channel.n_ancilla() != self.n_ancilla_bits
        {
            return Err(Error::LayoutMismatch(format!(
                "channel has ({} stabilizers, k = {}, {} ancillas), layout has ({}, {}, {})",
                channel.n_stabilizers(),
                channel.k(),
                channel.n_ancilla(),
                self.n_stabilizers,
                self.k,
                self.n_ancilla_bits
            )));
        }
        Ok(())
    }
}

/// Reduced layout for pure bit-flip noise on a CSS code.
pub fn css_bitflip_layout(code: &StabilizerCode) -> Result<StateLayout> {
    StateLayout::css_bitflip(code, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CiResult {
    pub s_q: f64,
    pub s_rq: f64,
    pub ci_bits: f64,
    pub ci_normalized: f64,
}

impl CiResult {
    pub fn from_entropies(s_q: f64, s_rq: f64, k: usize) -> Self {
        let ci_bits = s_q - s_rq;
        Self {
            s_q,
            s_rq,
            ci_bits,
            ci_normalized: ci_bits / k as f64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockedState {
    layout: StateLayout,
    /// Whether the coherent index still carries reference bits.
    with_reference: bool,
    /// Label of each span coordinate bit.
    generators: Vec<Bits>,
    span: EchelonBasis,
    blocks: Vec<f64>,
    memory_limit: u64,
    prune: f64,
}

/// Generalized Bell state `Σ_i |i_R⟩|i_L⟩ / 2^{k/2}` with every classical bit 0.
pub fn initial_bell_state(layout: &StateLayout) -> BlockedState {
    let dim = layout.coherent_dim();
    let k = layout.k;
    let mut block = vec![0.0; dim * dim];
    let amp = 1.0 / (1u64 << k) as f64;
    for i in 0..(1usize << k) {
        for j in 0..(1usize << k) {
            let u = (i << k) | i;
            let v = (j << k) | j;
            block[u * dim + v] = amp;
        }
    }
    BlockedState {
        layout: layout.clone(),
        with_reference: true,
        generators: Vec::new(),
        span: EchelonBasis::default(),
        blocks: block,
        memory_limit: DEFAULT_MEMORY_LIMIT_BLOCKS,
        prune: 0.0,
    }
}

/// Per-term plan inside a coset: the source offset and the entry map.
struct TermPlan {
    /// Index of the term's flip within the coset's subgroup enumeration.
    shift: usize,
    dst: Vec<usize>,
    coef: Vec<f64>,
}

#[derive(Clone, Copy)]
struct SharedBlocks(*mut f64);
// SAFETY: each task touches only the blocks of its own coset, and cosets
// partition the index set, so no two tasks alias.
unsafe impl Send for SharedBlocks {}
unsafe impl Sync for SharedBlocks {}

impl BlockedState {
    pub fn layout(&self) -> &StateLayout {
        &self.layout
    }

    pub fn with_memory_limit(mut self, limit_blocks: u64) -> Self {
        self.memory_limit = limit_blocks;
        self
    }

    /// Blocks with trace at or below `threshold` are dropped after each
    /// channel. Zero (the default) keeps the evolution exact.
    pub fn with_prune(mut self, threshold: f64) -> Self {
        self.prune = threshold;
        self
    }

    pub fn has_reference(&self) -> bool {
        self.with_reference
    }

    /// Side length of each block.
    pub fn block_dim(&self) -> usize {
        if self.with_reference {
            1 << (2 * self.layout.k)
        } else {
            1 << self.layout.k
        }
    }

    fn block_len(&self) -> usize {
        let d = self.block_dim();
        d * d
    }

    /// Allocated blocks (the size of the reachable span).
    pub fn n_blocks(&self) -> usize {
        self.blocks.len() / self.block_len()
    }

    pub fn n_nonzero_blocks(&self) -> usize {
        self.blocks
            .chunks_exact(self.block_len())
            .filter(|b| b.iter().any(|&x| x != 0.0))
            .count()
    }

    fn label_of(&self, coords: usize) -> Bits {
        let mut label = Bits::zeros(self.layout.label_width());
        for (g, generator) in self.generators.iter().enumerate() {
            if coords >> g & 1 == 1 {
                label.xor_assign(generator);
            }
        }
        label
    }

    /// Block at `label`, or `None` if it is unreachable.
    pub fn block(&self, label: &Bits) -> Option<&[f64]> {
        let coords = self.span.coordinates(label)? as usize;
        let len = self.block_len();
        Some(&self.blocks[coords * len..(coords + 1) * len])
    }

    /// Nonzero blocks with their classical labels, in storage order.
    pub fn iter_blocks(&self) -> impl Iterator<Item = (Bits, &[f64])> + '_ {
        self.blocks
            .chunks_exact(self.block_len())
            .enumerate()
            .filter(|(_, b)| b.iter().any(|&x| x != 0.0))
            .map(|(c, b)| (self.label_of(c), b))
    }

    pub fn trace(&self) -> f64 {
        let d = self.block_dim();
        let len = self.block_len();
        chunked_sum(&self.blocks, len, |b| (0..d).map(|i| b[i * d + i]).sum())
    }

    /// Add `label` to the reachable span, growing storage if needed.
    fn extend_span(&mut self, label: &Bits) -> Result<()> {
        if self.span.coordinates(label).is_some() {
            return Ok(());
        }
        let blocks = (self.n_blocks() as u64) * 2;
        if blocks > self.memory_limit {
            return Err(Error::MemoryGuard {
                required: blocks as u128,
                limit: self.memory_limit,
            });
        }
        self.span.insert(label);
        self.generators.push(label.clone());
        let len = self.blocks.len();
        self.blocks.resize(2 * len, 0.0);
        Ok(())
    }

    /// Reserve storage for every flip in `channels` up front so later
    /// growth never reallocates.
    pub fn reserve_for(&mut self, channels: &[WorkingChannel]) -> Result<()> {
        let mut span = self.span.clone();
        for ch in channels {
            for (_, p) in &ch.terms {
                span.insert(&self.layout.classical_flips(p)?);
            }
        }
        let blocks = 1u128 << span.rank();
        if blocks > self.memory_limit as u128 {
            return Err(Error::MemoryGuard {
                required: blocks,
                limit: self.memory_limit,
            });
        }
        let target = blocks as usize * self.block_len();
        self.blocks.reserve_exact(target.saturating_sub(self.blocks.len()));
        Ok(())
    }

    /// `ρ ← Σ_t w_t K_t ρ K_t†`.
    pub fn apply_channel(&mut self, channel: &WorkingChannel) -> Result<()> {
        self.layout.check_channel(channel)?;
        let k = self.layout.k;
        let m = self.layout.n_stabilizers;
        let l_shift = if self.with_reference { k } else { 0 };
        let dim = self.block_dim();
        let len = self.block_len();

        let mut flips = Vec::with_capacity(channel.terms.len());
        for (w, p) in &channel.terms {
            let label = self.layout.classical_flips(p)?;
            if *w > 0.0 {
                self.extend_span(&label)?;
            }
            flips.push(label);
        }

        // Reduced echelon basis (on span coordinates) of the term flips.
        let mut group: Vec<u64> = Vec::new();
        let mut terms = Vec::new();
        for ((w, p), label) in channel.terms.iter().zip(&flips) {
            if *w == 0.0 {
                continue;
            }
            let coords = self.span.coordinates(label).expect("label was inserted");
            let mut residual = coords;
            for &g in &group {
                if residual & top_bit(g) != 0 {
                    residual ^= g;
                }
            }
            if residual != 0 {
                let pivot = top_bit(residual);
                for g in &mut group {
                    if *g & pivot != 0 {
                        *g ^= residual;
                    }
                }
                group.push(residual);
            }
            terms.push((*w, p, coords));
        }
        let subgroup: Vec<u64> = (0..1u64 << group.len())
            .map(|mask| {
                (0..group.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .fold(0, |acc, b| acc ^ group[b])
            })
            .collect();

        let plans: Vec<TermPlan> = terms
            .iter()
            .map(|&(w, p, coords)| {
                let shift = group
                    .iter()
                    .enumerate()
                    .filter(|(_, &g)| coords & top_bit(g) != 0)
                    .fold(0usize, |acc, (b, _)| acc | 1 << b);
                debug_assert_eq!(subgroup[shift], coords);
                let lflip = (p.data.logical_flips.low_u64() as usize) << l_shift;
                let lphase = p.data.phase_mask.slice(m, k).low_u64() as usize;
                let sign = |u: usize| {
                    if ((u >> l_shift) & lphase).count_ones() % 2 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                };
                let mut dst = vec![0; len];
                let mut coef = vec![0.0; len];
                for u in 0..dim {
                    for v in 0..dim {
                        dst[u * dim + v] = (u ^ lflip) * dim + (v ^ lflip);
                        coef[u * dim + v] = w * sign(u) * sign(v);
                    }
                }
                TermPlan { shift, dst, coef }
            })
            .collect();

        let rank = self.generators.len();
        let pivots: u64 = group.iter().fold(0, |acc, &g| acc | top_bit(g));
        let free: Vec<u32> = (0..rank as u32).filter(|b| pivots >> b & 1 == 0).collect();
        let n_cosets = 1usize << free.len();
        let group_size = subgroup.len();

        let shared = SharedBlocks(self.blocks.as_mut_ptr());
        let run = |rep_index: usize, scratch: &mut (Vec<f64>, Vec<f64>)| {
            // Capture the whole wrapper; a closure would otherwise capture
            // only its raw pointer field, which is not Send.
            #[allow(clippy::redundant_locals)]
            let shared = shared;
            let rep = free
                .iter()
                .enumerate()
                .filter(|(i, _)| rep_index >> i & 1 == 1)
                .fold(0u64, |acc, (_, &b)| acc | 1 << b);
            let (input, output) = scratch;
            let mut any = false;
            for (i, &g) in subgroup.iter().enumerate() {
                let at = (rep ^ g) as usize * len;
                // SAFETY: `at` indexes a block of this coset only.
                let src = unsafe { std::slice::from_raw_parts(shared.0.add(at), len) };
                any |= src.iter().any(|&x| x != 0.0);
                input[i * len..(i + 1) * len].copy_from_slice(src);
            }
            if !any {
                return;
            }
            output.fill(0.0);
            for i in 0..group_size {
                let out = &mut output[i * len..(i + 1) * len];
                for plan in &plans {
                    let from = i ^ plan.shift;
                    let src = &input[from * len..(from + 1) * len];
                    for e in 0..len {
                        out[plan.dst[e]] += plan.coef[e] * src[e];
                    }
                }
            }
            for (i, &g) in subgroup.iter().enumerate() {
                let at = (rep ^ g) as usize * len;
                // SAFETY: as above.
                let dst = unsafe { std::slice::from_raw_parts_mut(shared.0.add(at), len) };
                dst.copy_from_slice(&output[i * len..(i + 1) * len]);
            }
        };
        let scratch = || (vec![0.0; group_size * len], vec![0.0; group_size * len]);
        if n_cosets < PARALLEL_COSETS {
            let mut buffers = scratch();
            for rep in 0..n_cosets {
                run(rep, &mut buffers);
            }
        } else {
            (0..n_cosets)
                .into_par_iter()
                .for_each_init(scratch, |buffers, rep| run(rep, buffers));
        }

        if self.prune > 0.0 {
            let threshold = self.prune;
            self.blocks.par_chunks_mut(len).for_each(|b| {
                let tr: f64 = (0..dim).map(|i| b[i * dim + i]).sum();
                if tr <= threshold {
                    b.fill(0.0);
                }
            });
        }
        Ok(())
    }

    pub fn apply_channels(&mut self, channels: &[WorkingChannel]) -> Result<()> {
        self.reserve_for(channels)?;
        for ch in channels {
            self.apply_channel(ch)?;
        }
        Ok(())
    }

    /// `ρ_Q = Tr_R ρ_RQ`, block by block.
    pub fn trace_out_reference(&self) -> Result<BlockedState> {
        if !self.with_reference {
            return Err(Error::LayoutMismatch("reference already traced out".into()));
        }
        let k = self.layout.k;
        let (dim, half) = (1usize << (2 * k), 1usize << k);
        let mut blocks = vec![0.0; self.n_blocks() * half * half];
        blocks
            .par_chunks_mut(half * half)
            .zip(self.blocks.par_chunks(dim * dim))
            .for_each(|(out, b)| {
                for l in 0..half {
                    for lp in 0..half {
                        out[l * half + lp] = (0..half)
                            .map(|r| b[((l << k) | r) * dim + ((lp << k) | r)])
                            .sum();
                    }
                }
            });
        Ok(BlockedState {
            with_reference: false,
            blocks,
            ..self.clone_metadata()
        })
    }

    fn clone_metadata(&self) -> BlockedState {
        BlockedState {
            layout: self.layout.clone(),
            with_reference: self.with_reference,
            generators: self.generators.clone(),
            span: self.span.clone(),
            blocks: Vec::new(),
            memory_limit: self.memory_limit,
            prune: self.prune,
        }
    }

    /// Von Neumann entropy in bits, summed over blocks.
    pub fn entropy_bits(&self) -> Result<f64> {
        let dim = self.block_dim();
        let len = self.block_len();
        let per_chunk: Vec<Result<f64>> = self
            .blocks
            .par_chunks(REDUCTION_CHUNK * len)
            .map(|chunk| {
                let mut total = 0.0;
                for b in chunk.chunks_exact(len) {
                    if b.iter().all(|&x| x == 0.0) {
                        continue;
                    }
                    total += block_entropy(b, dim)?;
                }
                Ok(total)
            })
            .collect();
        let mut total = 0.0;
        for s in per_chunk {
            total += s?;
        }
        Ok(total)
    }

    pub fn coherent_information(&self) -> Result<CiResult> {
        let s_rq = self.entropy_bits()?;
        let s_q = self.trace_out_reference()?.entropy_bits()?;
        Ok(CiResult::from_entropies(s_q, s_rq, self.layout.k))
    }

    /// Text listing of every nonzero block, for small instances.
    pub fn debug_dump(&self) -> Result<String> {
        let coherent = if self.with_reference { 2 } else { 1 } * self.layout.k;
        if self.layout.label_width() + coherent > 10 {
            return Err(Error::InvalidArgument(
                "debug dump is limited to 10-qubit instances".into(),
            ));
        }
        let dim = self.block_dim();
        let mut out = String::new();
        for (label, b) in self.iter_blocks() {
            out.push_str(&format!("label {label}\n"));
            for row in b.chunks_exact(dim) {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:+.6e}")).collect();
                out.push_str(&format!("  {}\n", cells.join(" ")));
            }
        }
        Ok(out)
    }
}

#[inline]
fn top_bit(x: u64) -> u64 {
    1u64 << (63 - x.leading_zeros())
}

fn chunked_sum(blocks: &[f64], len: usize, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
    let partial: Vec<f64> = blocks
        .par_chunks(REDUCTION_CHUNK * len)
        .map(|chunk| chunk.chunks_exact(len).map(&f).sum())
        .collect();
    partial.iter().sum()
}

/// `−Σ λ log₂ λ` over the eigenvalues of a symmetric block.
pub(crate) fn block_entropy(b: &[f64], dim: usize) -> Result<f64> {
    let mut total = 0.0;
    let mut add = |lambda: f64| -> Result<()> {
        if lambda < -NEGATIVITY_TOLERANCE {
            return Err(Error::NegativeEigenvalue(lambda));
        }
        let lambda = lambda.clamp(0.0, 1.0);
        if lambda > 0.0 {
            total -= lambda * lambda.log2();
        }
        Ok(())
    };
    match dim {
        1 => add(b[0])?,
        2 => {
            let (a, c, off) = (b[0], b[3], 0.5 * (b[1] + b[2]));
            let mean = 0.5 * (a + c);
            let radius = (0.25 * (a - c) * (a - c) + off * off).sqrt();
            add(mean + radius)?;
            add(mean - radius)?;
        }
        4 => {
            for lambda in Matrix4::from_row_slice(b).symmetric_eigenvalues().iter() {
                add(*lambda)?;
            }
        }
        _ => {
            for lambda in DMatrix::from_row_slice(dim, dim, b)
                .symmetric_eigenvalues()
                .iter()
            {
                add(*lambda)?;
            }
        }
    }
    Ok(total)
}
