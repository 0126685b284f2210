//! Coherent-information curves, their crossings, and closed-form baselines.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{
    build_repetition_memory, circuit_level_rates, compile, phenomenological_rates, Rates,
};
use crate::codes::repetition_code;
use crate::error::{check_probability, Error, Result};
use crate::frame::{complete_frame, transform_channel, RegisterMap, StabilizerCode};
use crate::pauli::{bit_flip_channel, depolarizing_channel};
use crate::state::{initial_bell_state, CiResult, StateLayout, DEFAULT_MEMORY_LIMIT_BLOCKS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    BitFlip,
    Depolarizing,
}

impl NoiseKind {
    /// Probabilities of `I, X, Y, Z` for a single qubit.
    pub fn probabilities(self, p: f64) -> Vec<f64> {
        match self {
            NoiseKind::BitFlip => vec![1.0 - p, p],
            NoiseKind::Depolarizing => vec![1.0 - p, p / 3.0, p / 3.0, p / 3.0],
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::BitFlip => "bitflip",
            NoiseKind::Depolarizing => "depolarizing",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "bitflip" | "x" => Ok(NoiseKind::BitFlip),
            "depolarizing" | "depol" => Ok(NoiseKind::Depolarizing),
            _ => Err(Error::InvalidArgument(format!("unknown noise kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MemoryPreset {
    Phenomenological,
    Circuit,
}

impl MemoryPreset {
    pub fn rates(self, p: f64) -> Result<Rates> {
        match self {
            MemoryPreset::Phenomenological => phenomenological_rates(p),
            MemoryPreset::Circuit => circuit_level_rates(p),
        }
    }
}

impl fmt::Display for MemoryPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemoryPreset::Phenomenological => "phenomenological",
            MemoryPreset::Circuit => "circuit",
        })
    }
}

impl FromStr for MemoryPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phenomenological" | "phenom" => Ok(MemoryPreset::Phenomenological),
            "circuit" | "circuit-level" => Ok(MemoryPreset::Circuit),
            _ => Err(Error::InvalidArgument(format!("unknown preset {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CssReduction {
    /// Reduce whenever the code is CSS and the noise is bit-flip.
    #[default]
    Auto,
    On,
    Off,
}

impl FromStr for CssReduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CssReduction::Auto),
            "on" => Ok(CssReduction::On),
            "off" => Ok(CssReduction::Off),
            _ => Err(Error::InvalidArgument(format!("css reduction must be auto, on or off, not {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub css_reduction: CssReduction,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub prune: f64,
    pub memory_limit_blocks: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            css_reduction: CssReduction::Auto,
            threads: None,
            prune: 0.0,
            memory_limit_blocks: DEFAULT_MEMORY_LIMIT_BLOCKS,
        }
    }
}

impl SweepOptions {
    /// Run `f` on a pool of the configured size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Evenly spaced rates `min + i·step` up to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(min <= max) || min < 0.0 || max > 1.0 {
            return Err(Error::InvalidGrid(format!("min {min}, max {max}, step {step}")));
        }
        Ok(Self { min, max, step })
    }

    pub fn single(p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            min: p,
            max: p,
            step: 1.0,
        })
    }

    /// Parse `MIN:MAX:STEP`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(':')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::InvalidGrid(format!("bad number {s:?} in {text:?}")))
            })
            .collect::<Result<_>>()?;
        match parts[..] {
            [min, max, step] => Self::new(min, max, step),
            _ => Err(Error::InvalidGrid(format!("expected MIN:MAX:STEP, got {text:?}"))),
        }
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        (self.min + i as f64 * self.step).min(self.max)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CiCurve {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl CiCurve {
    pub fn new(label: impl Into<String>, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} rates but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("rates must be strictly increasing".into()));
        }
        if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidGrid("rates must lie in [0, 1]".into()));
        }
        Ok(Self {
            label: label.into(),
            grid,
            values,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossingResult {
    pub p_cross: f64,
    pub uncertainty: f64,
    pub bracket: (f64, f64),
}

fn resolve_layout(code: &StabilizerCode, noise: NoiseKind, mode: CssReduction) -> Result<StateLayout> {
    match (mode, noise) {
        (CssReduction::Off, _) => Ok(StateLayout::full(code, 0)),
        (CssReduction::On, NoiseKind::Depolarizing) => Err(Error::CssReduction(
            "bit-flip noise, not depolarizing".into(),
        )),
        (CssReduction::On, NoiseKind::BitFlip) => StateLayout::css_bitflip(code, 0),
        (CssReduction::Auto, NoiseKind::BitFlip) if code.is_css() => StateLayout::css_bitflip(code, 0),
        (CssReduction::Auto, _) => Ok(StateLayout::full(code, 0)),
    }
}

/// One round of independent single-qubit noise on every data qubit.
pub fn code_capacity_ci(
    code: &StabilizerCode,
    noise: NoiseKind,
    p: f64,
    options: &SweepOptions,
) -> Result<CiResult> {
    check_probability(p)?;
    let layout = resolve_layout(code, noise, options.css_reduction)?;
    layout.check_memory(options.memory_limit_blocks)?;
    let frame = complete_frame(code)?;
    let n = code.n();
    let map = RegisterMap::data_only(n);
    let channels = (0..n)
        .map(|q| {
            let ch = match noise {
                NoiseKind::BitFlip => bit_flip_channel(q, p, n)?,
                NoiseKind::Depolarizing => depolarizing_channel(q, p, n)?,
            };
            transform_channel(&frame, &ch, &map)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut state = initial_bell_state(&layout)
        .with_memory_limit(options.memory_limit_blocks)
        .with_prune(options.prune);
    state.apply_channels(&channels)?;
    state.coherent_information()
}

/// Repetition-code memory experiment at the given rates.
pub fn memory_ci(d: usize, rates: Rates, options: &SweepOptions) -> Result<CiResult> {
    let circuit = build_repetition_memory(d, rates)?;
    let frame = complete_frame(&repetition_code(d)?)?;
    let compiled = compile(&circuit, &frame)?;
    compiled.layout().check_memory(options.memory_limit_blocks)?;
    compiled.run(options.memory_limit_blocks, options.prune)
}

/// Small states are cheaper to spread over grid points than over blocks.
const SMALL_STATE_BLOCKS: u128 = 1 << 12;

fn sweep(
    label: String,
    grid: &[f64],
    small: bool,
    options: &SweepOptions,
    eval: impl Fn(f64) -> Result<f64> + Sync,
) -> Result<CiCurve> {
    let values = options.install(|| {
        if small {
            grid.par_iter().map(|&p| eval(p)).collect::<Result<Vec<_>>>()
        } else {
            grid.iter().map(|&p| eval(p)).collect::<Result<Vec<_>>>()
        }
    })??;
    CiCurve::new(label, grid.to_vec(), values)
}

pub fn sweep_code_capacity(
    code: &StabilizerCode,
    noise: NoiseKind,
    grid: &[f64],
    options: &SweepOptions,
) -> Result<CiCurve> {
    let layout = resolve_layout(code, noise, options.css_reduction)?;
    layout.check_memory(options.memory_limit_blocks)?;
    let small = layout.worst_case_blocks() <= SMALL_STATE_BLOCKS;
    sweep(
        format!("{} {noise}", code.name()),
        grid,
        small,
        options,
        |p| Ok(code_capacity_ci(code, noise, p, options)?.ci_normalized),
    )
}

pub fn sweep_memory(
    d: usize,
    preset: MemoryPreset,
    grid: &[f64],
    options: &SweepOptions,
) -> Result<CiCurve> {
    let label_bits = (d - 1) + (d - 1) * (d - 1);
    let small = label_bits <= 12;
    sweep(
        format!("repetition-d{d} {preset}"),
        grid,
        small,
        options,
        |p| Ok(memory_ci(d, preset.rates(p)?, options)?.ci_normalized),
    )
}

/// Single-qubit curve in closed form.
pub fn baseline_curve(noise: NoiseKind, grid: &[f64]) -> Result<CiCurve> {
    let values = grid
        .iter()
        .map(|&p| single_qubit_ci(p, noise))
        .collect::<Result<Vec<_>>>()?;
    CiCurve::new(format!("single-qubit {noise}"), grid.to_vec(), values)
}

/// Sign changes of `a − b`, each as a crossing estimate. Exact zeros are
/// skipped when looking for neighbours of opposite sign.
fn all_crossings(grid: &[f64], diff: &[f64]) -> Vec<CrossingResult> {
    let nonzero: Vec<usize> = (0..diff.len()).filter(|&i| diff[i] != 0.0).collect();
    let mut out = Vec::new();
    for w in nonzero.windows(2) {
        let (i, j) = (w[0], w[1]);
        if (diff[i] > 0.0) == (diff[j] > 0.0) {
            continue;
        }
        let p_cross = if j == i + 1 {
            let t = diff[i] / (diff[i] - diff[j]);
            grid[i] + t * (grid[j] - grid[i])
        } else {
            // Zeros strictly between i and j: take the middle of that run.
            0.5 * (grid[i + 1] + grid[j - 1])
        };
        out.push(CrossingResult {
            p_cross,
            uncertainty: grid[i + 1] - grid[i],
            bracket: (grid[i], grid[j]),
        });
    }
    out
}

pub fn find_crossing(a: &CiCurve, b: &CiCurve) -> Result<CrossingResult> {
    if a.grid != b.grid {
        return Err(Error::InvalidGrid("curves are sampled on different grids".into()));
    }
    let diff: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    let found = all_crossings(&a.grid, &diff);
    match found.len() {
        0 => Err(Error::NoCrossing),
        1 => Ok(found[0]),
        _ => Err(Error::MultipleCrossings(
            found.iter().map(|c| c.bracket).collect(),
        )),
    }
}

/// Crossing of a code curve with the single-qubit curve.
pub fn pseudo_threshold(code_curve: &CiCurve, single_qubit: &CiCurve) -> Result<CrossingResult> {
    find_crossing(code_curve, single_qubit)
}

/// Locate the crossing of `diff(p) = a(p) − b(p)` on `grid` by bisection
/// over grid indices, evaluating `diff` only `O(log n)` times.
///
/// Assumes a single sign change inside the window. When that holds the
/// result equals [`find_crossing`] on the fully sampled curves; endpoints
/// of equal sign are reported as [`Error::NoCrossing`] even though an even
/// number of crossings could hide between them.
pub fn locate_crossing(
    grid: &Grid,
    mut diff: impl FnMut(f64) -> Result<f64>,
) -> Result<(CrossingResult, Vec<(f64, f64)>)> {
    let mut samples = Vec::new();
    let mut eval = |i: usize, samples: &mut Vec<(f64, f64)>| -> Result<f64> {
        let p = grid.point(i);
        let v = diff(p)?;
        samples.push((p, v));
        Ok(v)
    };
    let (mut lo, mut hi) = (0, grid.len() - 1);
    let mut d_lo = eval(lo, &mut samples)?;
    let mut d_hi = eval(hi, &mut samples)?;
    if d_lo == 0.0 || d_hi == 0.0 || (d_lo > 0.0) == (d_hi > 0.0) {
        return Err(Error::NoCrossing);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        let d_mid = eval(mid, &mut samples)?;
        if d_mid == 0.0 {
            let p = grid.point(mid);
            return Ok((
                CrossingResult {
                    p_cross: p,
                    uncertainty: grid.step,
                    bracket: (grid.point(mid - 1), grid.point(mid + 1)),
                },
                samples,
            ));
        }
        if (d_mid > 0.0) == (d_lo > 0.0) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
            d_hi = d_mid;
        }
    }
    let (p_lo, p_hi) = (grid.point(lo), grid.point(hi));
    let t = d_lo / (d_lo - d_hi);
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok((
        CrossingResult {
            p_cross: p_lo + t * (p_hi - p_lo),
            uncertainty: p_hi - p_lo,
            bracket: (p_lo, p_hi),
        },
        samples,
    ))
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn shannon_entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| -q * q.log2())
        .sum()
}

/// `1 − H(p_I, p_X, p_Y, p_Z)` for the channel's probability vector.
pub fn hashing_bound(noise: NoiseKind, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(1.0 - shannon_entropy_bits(&noise.probabilities(p)))
}

/// Coherent information of one bare qubit; equals the hashing bound for
/// these channels.
pub fn single_qubit_ci(p: f64, noise: NoiseKind) -> Result<f64> {
    hashing_bound(noise, p)
}

/// Named search windows for the crossings this library is usually run on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub grid: Grid,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "bitflip",
        grid: Grid {
            min: 0.09,
            max: 0.13,
            step: 2e-4,
        },
    },
    Preset {
        name: "depolarizing",
        grid: Grid {
            min: 0.17,
            max: 0.20,
            step: 1e-3,
        },
    },
    Preset {
        name: "phenomenological",
        grid: Grid {
            min: 0.09,
            max: 0.13,
            step: 2e-4,
        },
    },
    Preset {
        name: "circuit",
        grid: Grid {
            min: 0.02,
            max: 0.06,
            step: 2e-4,
        },
    },
];

pub fn preset(name: &str) -> Option<Grid> {
    PRESETS.iter().find(|p| p.name == name).map(|p| p.grid)
}
