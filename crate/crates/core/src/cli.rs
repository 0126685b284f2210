//! The `qci` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::Rates;
use crate::codes::{parse_code_file, to_code_file, CodeFamily};
use crate::error::{Error, Result};
use crate::frame::StabilizerCode;
use crate::oracle::{dense_apply_channel, dense_ci, dense_encode};
use crate::pauli::{bit_flip_channel, depolarizing_channel};
use crate::report::{curve_to_csv, curves_to_svg, CrossingInfo, EngineInfo, ThresholdReport};
use crate::state::DEFAULT_MEMORY_LIMIT_BLOCKS;
use crate::threshold::{
    baseline_curve, code_capacity_ci, find_crossing, hashing_bound, locate_crossing, memory_ci,
    preset, sweep_code_capacity, sweep_memory, CiCurve, CssReduction, Grid,
    MemoryPreset, NoiseKind, SweepOptions, single_qubit_ci,
};

#[derive(Parser, Debug)]
#[command(
    name = "qci",
    version,
    about = "Exact coherent information and thresholds of stabilizer codes under Pauli noise"
)]
struct Cli {
    /// Worker threads (default: all cores). QCI_THREADS overrides this flag.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Refuse states that could need more blocks than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMORY_LIMIT_BLOCKS)]
    memory_limit_blocks: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List built-in code families or print one code.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Code-capacity coherent information at one rate or over a range.
    Ci(CiArgs),
    /// Coherent information of the repetition-code memory experiment.
    MemoryCi(MemoryArgs),
    /// Crossing of two CI curves.
    Threshold(ThresholdArgs),
    /// Single-qubit coherent information.
    Baseline(ClosedFormArgs),
    /// Hashing bound 1 − H(p_I, p_X, p_Y, p_Z).
    HashingBound(ClosedFormArgs),
    /// Dense cross-check of the engine on a small instance.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Subcommand, Debug)]
enum CodesAction {
    List,
    Show(CodeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CodeName {
    Surface,
    Color488,
    Repetition,
    File,
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Code family; `--file` alone implies `file`.
    #[arg(long, value_enum)]
    code: Option<CodeName>,
    #[arg(long)]
    distance: Option<usize>,
    /// Code file (`n <int> k <int>` header, then `S`/`LX`/`LZ` rows).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NoiseArg {
    Bitflip,
    Depolarizing,
}

impl From<NoiseArg> for NoiseKind {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::Bitflip => NoiseKind::BitFlip,
            NoiseArg::Depolarizing => NoiseKind::Depolarizing,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReductionArg {
    Auto,
    On,
    Off,
}

impl From<ReductionArg> for CssReduction {
    fn from(r: ReductionArg) -> Self {
        match r {
            ReductionArg::Auto => CssReduction::Auto,
            ReductionArg::On => CssReduction::On,
            ReductionArg::Off => CssReduction::Off,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    Phenomenological,
    Circuit,
}

impl From<PresetArg> for MemoryPreset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Phenomenological => MemoryPreset::Phenomenological,
            PresetArg::Circuit => MemoryPreset::Circuit,
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RateSelection {
    /// A single error rate.
    #[arg(long)]
    p: Option<f64>,
    /// Rates `MIN:MAX:STEP`.
    #[arg(long)]
    p_range: Option<String>,
}

impl RateSelection {
    fn grid(&self) -> Result<Grid> {
        match (self.p, &self.p_range) {
            (Some(p), _) => Grid::single(p),
            (None, Some(r)) => Grid::parse(r),
            (None, None) => Err(Error::InvalidArgument("give --p or --p-range".into())),
        }
    }
}

#[derive(Args, Debug)]
struct CiArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum)]
    noise: NoiseArg,
    #[command(flatten)]
    rates: RateSelection,
    #[arg(long, value_enum, default_value = "auto")]
    css_reduction: ReductionArg,
    /// Drop blocks whose trace falls to this value or below (inexact).
    #[arg(long, default_value_t = 0.0)]
    prune: f64,
    /// Write the curve here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MemoryArgs {
    /// 3 or 5; d = 5 already holds 2^20 blocks.
    #[arg(long, value_parser = memory_distance)]
    distance: usize,
    #[arg(long, value_enum, default_value = "phenomenological")]
    preset: PresetArg,
    /// Phenomenological rate.
    #[arg(long, group = "rate")]
    p: Option<f64>,
    /// Circuit-level rate.
    #[arg(long, group = "rate")]
    lambda: Option<f64>,
    /// Rates `MIN:MAX:STEP` for the chosen preset.
    #[arg(long, group = "rate")]
    p_range: Option<String>,
    /// Explicit rates `p_sp,p_id,p_m,p_2,p_data` (SPAM, idling,
    /// measurement, CNOT, initial data flip), overriding the preset.
    #[arg(long, group = "rate")]
    rates: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, value_enum)]
    code: Option<CodeName>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// Two distances, e.g. `3,5`.
    #[arg(long, value_delimiter = ',')]
    distances: Vec<usize>,
    /// Compare one code against a bare qubit instead.
    #[arg(long)]
    vs_single_qubit: bool,
    #[arg(long, value_enum, default_value = "bitflip")]
    noise: NoiseArg,
    /// Repetition-code memory experiment instead of code capacity.
    #[arg(long, value_enum)]
    memory: Option<PresetArg>,
    /// Search window `MIN:MAX` (default: preset for the noise).
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    /// Bisect for the crossing instead of sampling the whole window.
    #[arg(long)]
    bisect: bool,
    #[arg(long, value_enum, default_value = "auto")]
    css_reduction: ReductionArg,
    /// Curve CSVs are written next to this path, one per curve.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClosedFormArgs {
    #[arg(long, value_enum)]
    noise: NoiseArg,
    #[command(flatten)]
    rates: RateSelection,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum)]
    noise: NoiseArg,
    #[arg(long)]
    p: f64,
}

fn memory_distance(s: &str) -> std::result::Result<usize, String> {
    match s {
        "3" => Ok(3),
        "5" => Ok(5),
        _ => Err(format!("memory distance must be 3 or 5, not {s:?}")),
    }
}

fn load_code(args: &CodeArgs) -> Result<StabilizerCode> {
    let family = match (args.code, &args.file) {
        (Some(CodeName::File) | None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            return parse_code_file(&text);
        }
        (Some(CodeName::File) | None, None) => {
            return Err(Error::InvalidArgument("give --code or --file".into()))
        }
        (Some(CodeName::Surface), _) => CodeFamily::Surface,
        (Some(CodeName::Color488), _) => CodeFamily::Color488,
        (Some(CodeName::Repetition), _) => CodeFamily::Repetition,
    };
    let d = args
        .distance
        .ok_or_else(|| Error::InvalidArgument(format!("{} needs --distance", family.name())))?;
    family.build(d)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn emit_curve(out: &mut dyn Write, curve: &CiCurve, csv: Option<&Path>) -> Result<()> {
    match csv {
        Some(path) => write_file(path, &curve_to_csv(curve)),
        None if curve.grid.len() == 1 => {
            writeln!(out, "{}", curve.values[0]).map_err(io_error)
        }
        None => write!(out, "{}", curve_to_csv(curve)).map_err(io_error),
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn curve_path(base: &Path, label: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "curve".into());
    let slug: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    base.with_file_name(format!("{stem}-{slug}.csv"))
}

/// One curve of a threshold comparison, evaluable point by point or over a
/// whole grid.
struct Side {
    label: String,
    eval: Box<dyn Fn(f64) -> Result<f64>>,
    sweep: SweepFn,
}

type SweepFn = Box<dyn Fn(&[f64]) -> Result<CiCurve>>;

struct Context {
    threads: usize,
    memory_limit_blocks: u64,
}

impl Context {
    fn options(&self, reduction: CssReduction, prune: f64) -> SweepOptions {
        SweepOptions {
            css_reduction: reduction,
            threads: None,
            prune,
            memory_limit_blocks: self.memory_limit_blocks,
        }
    }
}

fn run_codes(action: CodesAction, out: &mut dyn Write) -> Result<()> {
    match action {
        CodesAction::List => {
            let rows = [
                ("surface", "rotated surface code [[d², 1, d]], odd d ≥ 3"),
                ("color488", "4.8.8 color code [[(d²−1)/2 + d, 1, d]], odd d ≥ 3"),
                ("repetition", "bit-flip repetition code [[d, 1, d]], d ≥ 2"),
                ("file", "stabilizer code read from --file"),
            ];
            for (name, what) in rows {
                writeln!(out, "{name:<12} {what}").map_err(io_error)?;
            }
        }
        CodesAction::Show(args) => {
            let code = load_code(&args)?;
            let d = code
                .distance()
                .map_or_else(|| "?".to_string(), |d| d.to_string());
            writeln!(out, "# [[{}, {}, {d}]] css={}", code.n(), code.k(), code.is_css())
                .map_err(io_error)?;
            write!(out, "{}", to_code_file(&code)).map_err(io_error)?;
        }
    }
    Ok(())
}

fn run_ci(args: CiArgs, ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let code = load_code(&args.code)?;
    let options = ctx.options(args.css_reduction.into(), args.prune);
    let grid = args.rates.grid()?;
    let curve = sweep_code_capacity(&code, args.noise.into(), &grid.points(), &options)?;
    emit_curve(out, &curve, args.csv.as_deref())
}

fn run_memory(args: MemoryArgs, ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let d = args.distance;
    let options = ctx.options(CssReduction::Off, 0.0);
    if let Some(text) = &args.rates {
        let ci = memory_ci(d, Rates::parse(text)?, &options)?;
        return writeln!(out, "{}", ci.ci_normalized).map_err(io_error);
    }
    let preset: MemoryPreset = args.preset.into();
    let grid = match (args.p.or(args.lambda), &args.p_range) {
        (Some(p), _) => Grid::single(p)?,
        (None, Some(r)) => Grid::parse(r)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "give --p, --lambda, --p-range or --rates".into(),
            ))
        }
    };
    let curve = sweep_memory(d, preset, &grid.points(), &options)?;
    emit_curve(out, &curve, args.csv.as_deref())
}

fn run_closed_form(
    args: ClosedFormArgs,
    f: impl Fn(NoiseKind, f64) -> Result<f64>,
    out: &mut dyn Write,
) -> Result<()> {
    let noise: NoiseKind = args.noise.into();
    let grid = args.rates.grid()?.points();
    let values = grid.iter().map(|&p| f(noise, p)).collect::<Result<Vec<_>>>()?;
    let curve = CiCurve::new(noise.to_string(), grid, values)?;
    emit_curve(out, &curve, args.csv.as_deref())
}

fn threshold_grid(args: &ThresholdArgs) -> Result<Grid> {
    let default = match (args.memory, args.noise) {
        (Some(PresetArg::Phenomenological), _) => preset("phenomenological"),
        (Some(PresetArg::Circuit), _) => preset("circuit"),
        (None, NoiseArg::Bitflip) => preset("bitflip"),
        (None, NoiseArg::Depolarizing) => preset("depolarizing"),
    }
    .expect("presets exist");
    let (min, max) = match &args.window {
        None => (default.min, default.max),
        Some(w) => {
            let parts: Vec<&str> = w.split(':').collect();
            let [lo, hi] = parts[..] else {
                return Err(Error::InvalidGrid(format!("window must be MIN:MAX, got {w:?}")));
            };
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidGrid(format!("bad number {s:?}")))
            };
            (parse(lo)?, parse(hi)?)
        }
    };
    Grid::new(min, max, args.step.unwrap_or(default.step))
}

fn run_threshold(args: ThresholdArgs, ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let grid = threshold_grid(&args)?;
    let noise: NoiseKind = args.noise.into();
    let options = ctx.options(args.css_reduction.into(), 0.0);
    let points = grid.points();

    let distances = args.distances.clone();
    let expected = if args.vs_single_qubit { 1 } else { 2 };
    if distances.len() != expected && args.file.is_none() {
        return Err(Error::InvalidArgument(format!(
            "expected {expected} value(s) in --distances, got {}",
            distances.len()
        )));
    }

    let mut sides: Vec<Side> = Vec::new();
    let code_name;
    let k;
    let mut css_reduction = false;
    if let Some(preset) = args.memory {
        if args.vs_single_qubit {
            return Err(Error::InvalidArgument(
                "--vs-single-qubit applies to code-capacity runs only".into(),
            ));
        }
        let preset: MemoryPreset = preset.into();
        code_name = "repetition-memory".to_string();
        k = 1;
        for &d in &distances {
            sides.push(Side {
                label: format!("repetition-d{d} {preset}"),
                eval: Box::new(move |p| {
                    Ok(memory_ci(d, preset.rates(p)?, &options)?.ci_normalized)
                }),
                sweep: Box::new(move |ps| sweep_memory(d, preset, ps, &options)),
            });
        }
    } else {
        let mut codes = Vec::new();
        if let Some(path) = &args.file {
            codes.push(load_code(&CodeArgs {
                code: Some(CodeName::File),
                distance: None,
                file: Some(path.clone()),
            })?);
        } else {
            for &d in &distances {
                codes.push(load_code(&CodeArgs {
                    code: args.code,
                    distance: Some(d),
                    file: None,
                })?);
            }
        }
        if codes.len() != expected {
            return Err(Error::InvalidArgument(
                "a code file can only be compared with --vs-single-qubit".into(),
            ));
        }
        code_name = match codes[0].name().rsplit_once("-d") {
            Some((family, _)) => family.to_string(),
            None => codes[0].name().to_string(),
        };
        k = codes[0].k();
        css_reduction = noise == NoiseKind::BitFlip
            && match options.css_reduction {
                CssReduction::On => true,
                CssReduction::Off => false,
                CssReduction::Auto => codes.iter().all(StabilizerCode::is_css),
            };
        for code in codes {
            let code = std::sync::Arc::new(code);
            let for_sweep = code.clone();
            sides.push(Side {
                label: format!("{} {noise}", code.name()),
                eval: Box::new(move |p| {
                    Ok(code_capacity_ci(&code, noise, p, &options)?.ci_normalized)
                }),
                sweep: Box::new(move |ps| sweep_code_capacity(&for_sweep, noise, ps, &options)),
            });
        }
        if args.vs_single_qubit {
            sides.push(Side {
                label: format!("single-qubit {noise}"),
                eval: Box::new(move |p| single_qubit_ci(p, noise)),
                sweep: Box::new(move |ps| baseline_curve(noise, ps)),
            });
        }
    }

    let (crossing, curves) = if args.bisect {
        let (a, b) = (&sides[0], &sides[1]);
        let mut values: Vec<(f64, f64, f64)> = Vec::new();
        let found = locate_crossing(&grid, |p| {
            let (x, y) = ((a.eval)(p)?, (b.eval)(p)?);
            values.push((p, x, y));
            Ok(x - y)
        });
        values.sort_by(|l, r| l.0.total_cmp(&r.0));
        let ps: Vec<f64> = values.iter().map(|v| v.0).collect();
        let curves = vec![
            CiCurve::new(a.label.clone(), ps.clone(), values.iter().map(|v| v.1).collect())?,
            CiCurve::new(b.label.clone(), ps, values.iter().map(|v| v.2).collect())?,
        ];
        (found.map(|(c, _)| c), curves)
    } else {
        let mut curves = Vec::new();
        for side in &sides {
            let mut curve = (side.sweep)(&points)?;
            curve.label = side.label.clone();
            curves.push(curve);
        }
        (find_crossing(&curves[0], &curves[1]), curves)
    };

    let mut curve_files = Vec::new();
    if let Some(base) = &args.csv {
        for c in &curves {
            let path = curve_path(base, &c.label);
            write_file(&path, &curve_to_csv(c))?;
            curve_files.push(path.display().to_string());
        }
    }
    if let Some(path) = &args.svg {
        let refs: Vec<&CiCurve> = curves.iter().collect();
        write_file(path, &curves_to_svg(&refs, crossing.as_ref().ok()))?;
    }
    let mut report_distances = distances.clone();
    if args.vs_single_qubit {
        report_distances.push(1);
    }
    let report = ThresholdReport {
        code: code_name,
        k,
        distances: report_distances,
        noise: if args.memory.is_some() {
            "bitflip".into()
        } else {
            noise.to_string()
        },
        rates: args.memory.map(|p| MemoryPreset::from(p).to_string()),
        grid,
        crossing: crossing.clone().ok().map(CrossingInfo::from),
        engine: EngineInfo {
            css_reduction,
            threads: ctx.threads,
        },
        curves: curve_files,
    };
    if let Some(path) = &args.json {
        write_file(path, &report.to_json())?;
    }
    let crossing = crossing?;
    writeln!(
        out,
        "p_cross = {:.6} ± {:.1e}  bracket [{:.6}, {:.6}]",
        crossing.p_cross, crossing.uncertainty, crossing.bracket.0, crossing.bracket.1
    )
    .map_err(io_error)
}

fn run_oracle(args: OracleArgs, ctx: &Context, out: &mut dyn Write) -> Result<()> {
    let code = load_code(&args.code)?;
    let noise: NoiseKind = args.noise.into();
    let n = code.n();
    let mut dense = dense_encode(&code, 0)?;
    for q in 0..n {
        let ch = match noise {
            NoiseKind::BitFlip => bit_flip_channel(q, args.p, n)?,
            NoiseKind::Depolarizing => depolarizing_channel(q, args.p, n)?,
        };
        dense = dense_apply_channel(&dense, &ch)?;
    }
    let oracle = dense_ci(&dense);
    let engine = code_capacity_ci(&code, noise, args.p, &ctx.options(CssReduction::Off, 0.0))?;
    writeln!(
        out,
        "oracle {:.15}\nengine {:.15}\ndiff   {:.3e}",
        oracle.ci_normalized,
        engine.ci_normalized,
        (oracle.ci_normalized - engine.ci_normalized).abs()
    )
    .map_err(io_error)
}

/// Parse `args` (including the program name), run, and return the exit
/// code: 0 on success, 1 for usage errors, 2 when the computation fails.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };

    let from_env = std::env::var("QCI_THREADS").ok();
    let threads = match from_env.as_deref().map(str::parse::<usize>) {
        Some(Ok(n)) => Some(n),
        Some(Err(_)) => {
            let _ = writeln!(err, "error: QCI_THREADS must be a positive integer");
            return 1;
        }
        None => cli.threads,
    };
    if threads == Some(0) {
        let _ = writeln!(err, "error: thread count must be positive");
        return 1;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let ctx = Context {
        threads: pool.current_num_threads(),
        memory_limit_blocks: cli.memory_limit_blocks,
    };

    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let out = &mut buf;
        match cli.command {
            Command::Codes { action } => run_codes(action, out),
            Command::Ci(args) => run_ci(args, &ctx, out),
            Command::MemoryCi(args) => run_memory(args, &ctx, out),
            Command::Threshold(args) => run_threshold(args, &ctx, out),
            Command::Baseline(args) => run_closed_form(args, |n, p| single_qubit_ci(p, n), out),
            Command::HashingBound(args) => run_closed_form(args, hashing_bound, out),
            Command::Oracle(args) => run_oracle(args, &ctx, out),
        }
    });
    if out.write_all(&buf).and_then(|()| out.flush()).is_err() {
        return 2;
    }
    match result {
        Ok(()) => 0,
        Err(e @ (Error::InvalidArgument(_) | Error::InvalidGrid(_) | Error::InvalidProbability(_))) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
