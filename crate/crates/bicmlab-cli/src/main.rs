//! Command-line front end: capacity curves, first-order coefficients,
//! optimality verdicts, labeling censuses, shaping sweeps, SNR gaps, the
//! asymptotic reference tables, and raw Hadamard transforms.
//!
//! All dB <-> linear conversions happen here; the library works in linear
//! SNR throughout. Output is CSV (with a header row) or pretty JSON with
//! floats at 12 significant digits, so identical invocations produce
//! byte-identical files.

use bicmlab::alphabets::{
    BitDistribution, Constellation, ConstellationFile, FadingModel, InputAlphabet,
};
use bicmlab::asymptotics::{
    alpha_bicm, alpha_bicm_ht, alpha_closed_form, alpha_cm, asymptotic_gap_db, default_snr_grid,
    is_foo, snr_gap, AlphabetKind, CurveError,
};
use bicmlab::capacity::{capacity_over_grid, CapacityKind, QuadratureSpec};
use bicmlab::enumeration::classify_labelings;
use bicmlab::labelings::{Labeling, LabelingKind};
use bicmlab::shaping::optimize_bit_pmfs;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bicmlab", version, about = "Capacity analysis for coded modulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a capacity curve over an SNR grid
    Capacity(CapacityArgs),
    /// First-order (low-SNR) coefficients of a constellation
    Alpha(AlphaArgs),
    /// Hypercube-projection verdict: does the constellation reach the
    /// Shannon-limit slope?
    FooCheck(ConstellationArgs),
    /// Classify all 40320 labelings of an 8-point alphabet
    Enumerate(EnumerateArgs),
    /// Optimize the per-bit input distribution over an SNR grid
    Shape(ShapeArgs),
    /// SNR gap to the Gaussian-input channel at a given rate
    Gap(GapArgs),
    /// Asymptotic reference tables (1: Eb/N0 limits, 2: SNR gaps)
    Tables(TablesArgs),
    /// Hadamard transform of the constellation points, as CSV
    Ht(ConstellationArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelingFlag {
    Brgc,
    Nbc,
    Bsgc,
    Fbc,
}

impl From<LabelingFlag> for LabelingKind {
    fn from(value: LabelingFlag) -> Self {
        match value {
            LabelingFlag::Brgc => LabelingKind::Brgc,
            LabelingFlag::Nbc => LabelingKind::Nbc,
            LabelingFlag::Bsgc => LabelingKind::Bsgc,
            LabelingFlag::Fbc => LabelingKind::Fbc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeFlag {
    Cm,
    Bicm,
}

impl From<ModeFlag> for CapacityKind {
    fn from(value: ModeFlag) -> Self {
        match value {
            ModeFlag::Cm => CapacityKind::Cm,
            ModeFlag::Bicm => CapacityKind::Bicm,
        }
    }
}

#[derive(Args)]
struct ConstellationArgs {
    /// Preset (pam8, psk8, qam16, qam4x8, otto, ototo, hier:1,2,6) or a
    /// JSON file path
    #[arg(long)]
    constellation: String,
    /// Labeling for presets (default brgc; otto/ototo default to nbc)
    #[arg(long)]
    labeling: Option<LabelingFlag>,
    /// Per-bit probabilities of bit value 0, comma separated (presets only)
    #[arg(long)]
    bit_p0: Option<String>,
    /// Output path; "-" for stdout
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct QuadArgs {
    /// Gauss-Hermite nodes per dimension
    #[arg(long, default_value_t = QuadratureSpec::default().gh_order)]
    gh_order: usize,
    /// Monte-Carlo fade draws per SNR point
    #[arg(long, default_value_t = QuadratureSpec::default().mc_samples)]
    mc_samples: usize,
    /// Base RNG seed
    #[arg(long, default_value_t = QuadratureSpec::default().seed)]
    seed: u64,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            gh_order: self.gh_order,
            mc_samples: self.mc_samples,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    constellation: ConstellationArgs,
    /// Channel: awgn, rayleigh, or nakagami:<shape>
    #[arg(long, default_value = "awgn")]
    fading: String,
    /// SNR grid in dB as start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    snr_db: String,
    /// Which capacity to sample
    #[arg(long, value_enum, default_value_t = ModeFlag::Bicm)]
    mode: ModeFlag,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct AlphaArgs {
    #[command(flatten)]
    constellation: ConstellationArgs,
    /// Evaluate the closed form instead of the constellation statistics
    /// (PAM/PSK presets with a named labeling only)
    #[arg(long)]
    closed_form: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Alphabet to sweep: pam8 or psk8
    #[arg(long)]
    alphabet: String,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ShapeArgs {
    #[command(flatten)]
    constellation: ConstellationArgs,
    #[arg(long, default_value = "awgn")]
    fading: String,
    /// SNR grid in dB as start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    snr_db: String,
    /// Refinement grid step for the bit probabilities
    #[arg(long, default_value_t = 0.01)]
    grid: f64,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct GapArgs {
    #[command(flatten)]
    constellation: ConstellationArgs,
    /// Rate (bit/symbol) at which to measure the gap
    #[arg(long)]
    rc: f64,
    #[arg(long, value_enum, default_value_t = ModeFlag::Bicm)]
    mode: ModeFlag,
    #[arg(long, default_value = "awgn")]
    fading: String,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct TablesArgs {
    /// 1: vanishing-rate Eb/N0 limits; 2: asymptotic SNR gaps
    #[arg(long)]
    which: u8,
    #[arg(long, default_value = "-")]
    out: String,
}

enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn numeric(msg: impl Into<String>) -> Self {
        CliError::Numeric(msg.into())
    }
}

impl From<CurveError> for CliError {
    fn from(err: CurveError) -> Self {
        match err {
            CurveError::RateOutOfRange { .. } | CurveError::BadGrid => {
                CliError::Usage(err.to_string())
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Twelve significant digits, no locale dependence.
fn fmt_f(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.11e}")
}

fn json_f(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::Value::String(if x > 0.0 { "inf".into() } else { "-inf".into() })
    }
}

struct Parsed {
    name: String,
    alphabet: InputAlphabet,
    labeling: Labeling,
    bits: BitDistribution,
    /// Set when the spec was a PAM/PSK preset with a named labeling.
    closed_form: Option<(AlphabetKind, LabelingKind, usize)>,
}

impl Parsed {
    fn constellation(&self) -> Result<Constellation, CliError> {
        Constellation::new(self.alphabet.clone(), self.labeling.clone(), self.bits.clone())
            .map_err(|e| CliError::usage(format!("invalid constellation: {e}")))
    }
}

fn parse_bit_p0(text: &str, order: usize) -> Result<BitDistribution, CliError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| CliError::usage(format!("bad --bit-p0: {e}")))?;
    if values.len() != order {
        return Err(CliError::usage(format!(
            "--bit-p0 needs {order} entries, got {}",
            values.len()
        )));
    }
    BitDistribution::new(values).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_sized_preset(spec: &str, prefix: &str) -> Option<Result<usize, CliError>> {
    let rest = spec.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(
        rest.parse::<usize>()
            .map_err(|e| CliError::usage(format!("bad size in {spec:?}: {e}"))),
    )
}

fn parse_constellation(args: &ConstellationArgs) -> Result<Parsed, CliError> {
    let spec = args.constellation.as_str();
    let lower = spec.to_ascii_lowercase();
    let flag_kind: Option<LabelingKind> = args.labeling.map(Into::into);

    // File specs carry their own labeling and bit distribution.
    if std::path::Path::new(spec).is_file() {
        if args.labeling.is_some() || args.bit_p0.is_some() {
            return Err(CliError::usage(
                "--labeling/--bit-p0 cannot override a constellation file",
            ));
        }
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::usage(format!("cannot read {spec:?}: {e}")))?;
        let file: ConstellationFile = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("malformed constellation file {spec:?}: {e}")))?;
        let alphabet = InputAlphabet::new(file.alphabet)
            .map_err(|e| CliError::usage(format!("bad alphabet in {spec:?}: {e}")))?;
        let bits = match file.bit_p0 {
            Some(p0) => BitDistribution::new(p0)
                .map_err(|e| CliError::usage(format!("bad bit_p0 in {spec:?}: {e}")))?,
            None => BitDistribution::uniform(file.labeling.order()),
        };
        return Ok(Parsed {
            name: spec.to_string(),
            alphabet,
            labeling: file.labeling,
            bits,
            closed_form: None,
        });
    }

    let mut closed_form_kind = None;
    let (alphabet, default_labeling) = if let Some(size) = parse_sized_preset(&lower, "pam") {
        closed_form_kind = Some(AlphabetKind::Pam);
        (
            InputAlphabet::pam(size?).map_err(|e| CliError::usage(e.to_string()))?,
            LabelingKind::Brgc,
        )
    } else if let Some(size) = parse_sized_preset(&lower, "psk") {
        closed_form_kind = Some(AlphabetKind::Psk);
        (
            InputAlphabet::psk(size?).map_err(|e| CliError::usage(e.to_string()))?,
            LabelingKind::Brgc,
        )
    } else if let Some(rest) = lower.strip_prefix("qam") {
        let (a, b) = match rest.split_once('x') {
            Some((a, b)) => (
                a.parse::<usize>()
                    .map_err(|e| CliError::usage(format!("bad size in {spec:?}: {e}")))?,
                b.parse::<usize>()
                    .map_err(|e| CliError::usage(format!("bad size in {spec:?}: {e}")))?,
            ),
            None => {
                let total: usize = rest
                    .parse()
                    .map_err(|e| CliError::usage(format!("bad size in {spec:?}: {e}")))?;
                let side = (total as f64).sqrt().round() as usize;
                if side * side != total {
                    return Err(CliError::usage(format!(
                        "{spec:?} is not square; use qamAxB for rectangular grids"
                    )));
                }
                (side, side)
            }
        };
        (
            InputAlphabet::qam(a, b).map_err(|e| CliError::usage(e.to_string()))?,
            LabelingKind::Brgc,
        )
    } else if lower == "otto" {
        (InputAlphabet::otto(), LabelingKind::Nbc)
    } else if lower == "ototo" {
        (InputAlphabet::ototo(), LabelingKind::Nbc)
    } else if let Some(list) = lower.strip_prefix("hier:") {
        let distances: Result<Vec<f64>, _> =
            list.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let distances =
            distances.map_err(|e| CliError::usage(format!("bad distances in {spec:?}: {e}")))?;
        (
            InputAlphabet::hierarchical(&distances).map_err(|e| CliError::usage(e.to_string()))?,
            LabelingKind::Nbc,
        )
    } else {
        return Err(CliError::usage(format!(
            "unknown constellation preset or missing file: {spec:?}"
        )));
    };

    let kind = flag_kind.unwrap_or(default_labeling);
    let order = alphabet.len().trailing_zeros() as usize;
    let labeling = Labeling::generate(kind, order)
        .map_err(|e| CliError::usage(format!("labeling for {spec:?}: {e}")))?;
    let bits = match &args.bit_p0 {
        Some(text) => parse_bit_p0(text, order)?,
        None => BitDistribution::uniform(order),
    };
    Ok(Parsed {
        name: spec.to_string(),
        alphabet,
        labeling,
        bits,
        closed_form: closed_form_kind.map(|a| (a, kind, 1usize << order)),
    })
}

fn parse_fading(text: &str) -> Result<FadingModel, CliError> {
    let lower = text.to_ascii_lowercase();
    match lower.as_str() {
        "awgn" => Ok(FadingModel::Awgn),
        "rayleigh" => Ok(FadingModel::rayleigh()),
        _ => {
            if let Some(shape) = lower.strip_prefix("nakagami:") {
                let shape: f64 = shape
                    .parse()
                    .map_err(|e| CliError::usage(format!("bad fading shape: {e}")))?;
                FadingModel::nakagami(shape).map_err(|e| CliError::usage(e.to_string()))
            } else {
                Err(CliError::usage(format!(
                    "unknown fading {text:?} (expected awgn|rayleigh|nakagami:<m>)"
                )))
            }
        }
    }
}

/// Parses "start:stop:step" in dB into a strictly increasing dB grid.
fn parse_snr_grid_db(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "bad --snr-db {text:?} (expected start:stop:step)"
        )));
    }
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.parse::<f64>()).collect();
    let nums = nums.map_err(|e| CliError::usage(format!("bad --snr-db {text:?}: {e}")))?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || stop < start {
        return Err(CliError::usage(
            "snr grid must be strictly increasing (step > 0, stop >= start)",
        ));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn write_output(path: &str, contents: &str) -> Result<(), CliError> {
    if path == "-" {
        print!("{contents}");
        Ok(())
    } else {
        std::fs::write(PathBuf::from(path), contents)
            .map_err(|e| CliError::usage(format!("cannot write {path:?}: {e}")))
    }
}

fn run_capacity(args: &CapacityArgs) -> Result<(), CliError> {
    let parsed = parse_constellation(&args.constellation)?;
    let omega = parsed.constellation()?;
    let fading = parse_fading(&args.fading)?;
    let q = args.quad.spec();
    let grid_db = parse_snr_grid_db(&args.snr_db)?;
    let grid: Vec<f64> = grid_db.iter().map(|&db| db_to_linear(db)).collect();
    let points = capacity_over_grid(&omega, args.mode.into(), &fading, &q, &grid)
        .map_err(|e| CliError::numeric(e.to_string()))?;
    if let Some(i) = points.windows(2).position(|w| w[1].rate <= w[0].rate) {
        return Err(CliError::numeric(format!(
            "capacity curve is not strictly increasing at {} dB (saturated alphabet or \
             quadrature noise); narrow the grid or raise --gh-order / --mc-samples",
            grid_db[i + 1]
        )));
    }
    let mut out = String::from("snr_db,rate_bits,ebn0_db\n");
    for (db, p) in grid_db.iter().zip(&points) {
        let ebn0 = p.snr / (fading.mean_square() * p.rate);
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f(*db),
            fmt_f(p.rate),
            fmt_f(10.0 * ebn0.log10())
        );
    }
    write_output(&args.constellation.out, &out)
}

fn run_alpha(args: &AlphaArgs) -> Result<(), CliError> {
    let parsed = parse_constellation(&args.constellation)?;
    let value = if args.closed_form {
        let (alphabet, labeling, size) = parsed.closed_form.ok_or_else(|| {
            CliError::usage("--closed-form needs a pam/psk preset with a named labeling")
        })?;
        let alpha = alpha_closed_form(alphabet, labeling, size)
            .map_err(|e| CliError::usage(e.to_string()))?;
        serde_json::json!({
            "constellation": parsed.name,
            "method": "closed-form",
            "alpha_bicm": json_f(alpha.value()),
            "alpha_bicm_normalized": json_f(alpha.normalized()),
        })
    } else {
        let bicm = if parsed.bits.is_uniform() {
            alpha_bicm_ht(&parsed.alphabet, &parsed.labeling)
        } else {
            alpha_bicm(&parsed.constellation()?)
        };
        let cm = parsed.constellation().map(|omega| alpha_cm(&omega).value());
        serde_json::json!({
            "constellation": parsed.name,
            "method": "numeric",
            "alpha_bicm": json_f(bicm.value()),
            "alpha_bicm_normalized": json_f(bicm.normalized()),
            "alpha_cm": cm.map(json_f).unwrap_or(serde_json::Value::Null),
        })
    };
    write_output(
        &args.constellation.out,
        &format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
    )
}

fn run_foo_check(args: &ConstellationArgs) -> Result<(), CliError> {
    let parsed = parse_constellation(args)?;
    let verdict = is_foo(&parsed.alphabet, &parsed.labeling);
    let projection = match &verdict.projection {
        Some(v) => serde_json::json!(v),
        None => serde_json::Value::Null,
    };
    let value = serde_json::json!({
        "constellation": parsed.name,
        "is_foo": verdict.is_foo,
        "V": projection,
        "residual": json_f(verdict.residual),
        "orthogonal_projection": verdict.orthogonal_projection,
    });
    write_output(
        &args.out,
        &format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
    )
}

fn run_enumerate(args: &EnumerateArgs) -> Result<(), CliError> {
    let alphabet = match args.alphabet.to_ascii_lowercase().as_str() {
        "pam8" => InputAlphabet::pam(8).expect("valid"),
        "psk8" => InputAlphabet::psk(8).expect("valid"),
        other => {
            return Err(CliError::usage(format!(
                "unknown --alphabet {other:?} (expected pam8|psk8)"
            )))
        }
    };
    let census = classify_labelings(&alphabet).map_err(|e| CliError::usage(e.to_string()))?;
    let mut out = String::from("alpha_normalized,count\n");
    for class in census.classes() {
        let _ = writeln!(out, "{},{}", fmt_f(class.alpha_normalized), class.count);
    }
    write_output(&args.out, &out)
}

fn run_shape(args: &ShapeArgs) -> Result<(), CliError> {
    let parsed = parse_constellation(&args.constellation)?;
    if args.constellation.bit_p0.is_some() {
        return Err(CliError::usage("--bit-p0 conflicts with shaping"));
    }
    let fading = parse_fading(&args.fading)?;
    let q = args.quad.spec();
    let grid_db = parse_snr_grid_db(&args.snr_db)?;
    let m = parsed.labeling.order();
    let mut out = String::from("snr_db,");
    for k in 0..m {
        let _ = write!(out, "p0_{k},");
    }
    out.push_str("rate_shaped,rate_uniform\n");
    for &db in &grid_db {
        let result = optimize_bit_pmfs(
            &parsed.alphabet,
            &parsed.labeling,
            db_to_linear(db),
            &fading,
            &q,
            args.grid,
        )
        .map_err(|e| match e {
            bicmlab::shaping::ShapingError::BadGridStep(_)
            | bicmlab::shaping::ShapingError::OrderTooLarge(_)
            | bicmlab::shaping::ShapingError::SizeMismatch { .. } => {
                CliError::usage(e.to_string())
            }
            other => CliError::numeric(other.to_string()),
        })?;
        let _ = write!(out, "{},", fmt_f(db));
        for p in &result.best_p0 {
            let _ = write!(out, "{},", fmt_f(*p));
        }
        let _ = writeln!(
            out,
            "{},{}",
            fmt_f(result.best_rate),
            fmt_f(result.baseline_rate)
        );
    }
    write_output(&args.constellation.out, &out)
}

/// Prefix of the default grid that stops before capacity saturation, where
/// sampled rates would no longer strictly increase.
fn trimmed_snr_grid(
    omega: &Constellation,
    kind: CapacityKind,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<Vec<f64>, CliError> {
    let base = default_snr_grid();
    let points = capacity_over_grid(omega, kind, fading, q, &base)
        .map_err(|e| CliError::numeric(e.to_string()))?;
    let mut grid = Vec::new();
    let mut prev = -1.0;
    for p in &points {
        if p.rate <= prev {
            break;
        }
        prev = p.rate;
        grid.push(p.snr);
        if p.rate >= 0.995 * omega.order() as f64 {
            break;
        }
    }
    Ok(grid)
}

fn run_gap(args: &GapArgs) -> Result<(), CliError> {
    let parsed = parse_constellation(&args.constellation)?;
    let omega = parsed.constellation()?;
    let fading = parse_fading(&args.fading)?;
    let q = args.quad.spec();
    let grid = trimmed_snr_grid(&omega, args.mode.into(), &fading, &q)?;
    let gap = snr_gap(&omega, args.rc, args.mode.into(), &fading, &q, &grid)?;
    let value = serde_json::json!({
        "constellation": parsed.name,
        "rc": json_f(args.rc),
        "mode": match args.mode { ModeFlag::Cm => "cm", ModeFlag::Bicm => "bicm" },
        "gap_db": json_f(gap),
    });
    write_output(
        &args.constellation.out,
        &format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
    )
}

const TABLE_LABELINGS: [(LabelingKind, &str); 4] = [
    (LabelingKind::Brgc, "BRGC"),
    (LabelingKind::Nbc, "NBC"),
    (LabelingKind::Bsgc, "BSGC"),
    (LabelingKind::Fbc, "FBC"),
];

fn run_tables(args: &TablesArgs) -> Result<(), CliError> {
    let out = match args.which {
        1 => {
            // Large-M limits of the closed forms, evaluated at M = 2^20.
            let size = 1usize << 20;
            let mut out = String::from("alphabet,labeling,alpha_normalized,ebn0_limit_db\n");
            for (alphabet, name) in [(AlphabetKind::Pam, "PAM"), (AlphabetKind::Psk, "PSK")] {
                for (kind, kind_name) in TABLE_LABELINGS {
                    let alpha = alpha_closed_form(alphabet, kind, size)
                        .expect("all labelings defined at this order");
                    let limit = if alpha.value() == 0.0 {
                        f64::INFINITY
                    } else {
                        10.0 * (1.0 / alpha.value()).log10()
                    };
                    let _ = writeln!(
                        out,
                        "{name},{kind_name},{},{}",
                        fmt_f(alpha.normalized()),
                        fmt_f(limit)
                    );
                }
            }
            out
        }
        2 => {
            let mut out = String::from("constellation,labeling,gap_db\n");
            let mut push = |name: &str, labeling: &str, gap: f64| {
                let _ = writeln!(out, "{name},{labeling},{}", fmt_f(gap));
            };
            for size in [4usize, 8, 16] {
                for (kind, kind_name) in TABLE_LABELINGS {
                    if let Ok(alpha) = alpha_closed_form(AlphabetKind::Pam, kind, size) {
                        push(&format!("{size}-PAM"), kind_name, asymptotic_gap_db(&alpha));
                    }
                }
            }
            for (kind, kind_name) in TABLE_LABELINGS {
                let alpha = alpha_closed_form(AlphabetKind::Psk, kind, 8).expect("defined");
                push("8-PSK", kind_name, asymptotic_gap_db(&alpha));
            }
            let nbc2 = Labeling::generate(LabelingKind::Nbc, 2).expect("valid");
            let nbc3 = Labeling::generate(LabelingKind::Nbc, 3).expect("valid");
            let hier4 = InputAlphabet::hierarchical(&[1.0, 5.0]).expect("valid");
            let hier8 = InputAlphabet::hierarchical(&[1.0, 2.0, 6.0]).expect("valid");
            push("4-PAM-hier(1,5)", "NBC", asymptotic_gap_db(&alpha_bicm_ht(&hier4, &nbc2)));
            push(
                "8-PAM-hier(1,2,6)",
                "NBC",
                asymptotic_gap_db(&alpha_bicm_ht(&hier8, &nbc3)),
            );
            push(
                "OTTO",
                "NBC",
                asymptotic_gap_db(&alpha_bicm_ht(&InputAlphabet::otto(), &nbc3)),
            );
            push(
                "OTOTO",
                "NBC",
                asymptotic_gap_db(&alpha_bicm_ht(&InputAlphabet::ototo(), &nbc3)),
            );
            out
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown table {other} (expected 1 or 2)"
            )))
        }
    };
    write_output(&args.out, &out)
}

fn run_ht(args: &ConstellationArgs) -> Result<(), CliError> {
    let parsed = parse_constellation(args)?;
    let rows = parsed.alphabet.rows();
    let transformed =
        bicmlab::hadamard::transform(&rows).map_err(|e| CliError::usage(e.to_string()))?;
    let dim = parsed.alphabet.dim();
    let mut out = String::from("index");
    for d in 0..dim {
        let _ = write!(out, ",coeff_{d}");
    }
    out.push('\n');
    for (i, row) in transformed.iter().enumerate() {
        let _ = write!(out, "{i}");
        for v in row {
            let _ = write!(out, ",{}", fmt_f(*v));
        }
        out.push('\n');
    }
    write_output(&args.out, &out)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Capacity(args) => run_capacity(args),
        Command::Alpha(args) => run_alpha(args),
        Command::FooCheck(args) => run_foo_check(args),
        Command::Enumerate(args) => run_enumerate(args),
        Command::Shape(args) => run_shape(args),
        Command::Gap(args) => run_gap(args),
        Command::Tables(args) => run_tables(args),
        Command::Ht(args) => run_ht(args),
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("BICMLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
