//! The `boolinfo` command line: argument model, function specs and the
//! subcommand implementations. The binary only parses arguments and writes
//! the output produced here.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::bounds::{self, BoundError};
use crate::channel::{self, ChannelError, NoiseParameter};
use crate::hypercube::{self, BooleanFunction, Family, FourierSpectrum, HypercubeError};
use crate::search::{self, FunctionClass, Scope, SearchError, SearchOptions, SearchReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse function spec {spec:?} at position {position}: {reason}")]
    Spec {
        spec: String,
        position: usize,
        reason: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Hypercube(#[from] HypercubeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Exact Fourier and information analysis of Boolean functions through a
/// binary symmetric channel.
#[derive(Debug, Parser)]
#[command(name = "boolinfo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Crossover probability of the channel.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Grid: a point count, or an explicit comma-separated list of alphas.
    #[arg(long, global = true)]
    pub grid: Option<GridSpec>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Allow the n = 5 balanced scan (about 6e8 functions).
    #[arg(long, global = true)]
    pub large: bool,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Count(usize),
    List(Vec<f64>),
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(count) = s.trim().parse::<usize>() {
            if count == 0 {
                return Err("grid needs at least one point".into());
            }
            return Ok(Self::Count(count));
        }
        s.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("not a number: {v:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::List)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    All,
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Conjecture,
    Theorem1,
    Moments,
    Corollary,
    Taylor,
    Hypercontractivity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum summary, mutual information, moments and every bound for one function.
    Analyze { function: String },
    /// Fourier-Walsh coefficients and weight profile.
    Spectrum {
        function: String,
        /// Include zero coefficients.
        #[arg(long)]
        all: bool,
    },
    /// Bound curves over an alpha grid.
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 0.5)]
        end: f64,
        /// conjectured, quadratic, theorem1, t<T> (general bound of order T)
        /// or mi:<function spec>. Repeat the flag for several columns.
        #[arg(long = "column")]
        columns: Vec<String>,
    },
    /// Run a verification suite; exit status 0 iff nothing is violated.
    Verify {
        #[arg(value_enum)]
        check: CheckArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        scope: Option<ScopeArg>,
        /// Moment orders for the moments check.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<usize>,
        /// Random samples (hypercontractivity), or sample balanced
        /// functions instead of enumerating them.
        #[arg(long)]
        samples: Option<u64>,
        /// Append-only checkpoint file for long scans.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = search::DEFAULT_BLOCK)]
        block_size: u64,
    },
    /// Even posterior moments over an alpha grid.
    Moments {
        function: String,
        #[arg(long, default_value_t = channel::DEFAULT_K_MAX)]
        k_max: usize,
    },
    /// Per-alpha maximizers of the mutual information over a class.
    Search {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        scope: ScopeArg,
        /// Sample this many balanced functions instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
    },
}

/// Text to emit and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            exit_code: 0,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { function } => cmd_analyze(&parse_function_spec(function)?, alpha_or_default(g)?, g.format),
        Command::Spectrum { function, all } => cmd_spectrum(&parse_function_spec(function)?, *all, g.format),
        Command::Sweep {
            start,
            end,
            columns,
        } => {
            let config = SweepConfig::from_args(*start, *end, g.grid.as_ref(), columns, g.format)?;
            cmd_sweep(&config)
        }
        Command::Verify {
            check,
            n,
            scope,
            k,
            samples,
            checkpoint,
            block_size,
        } => cmd_verify(&VerifyConfig {
            check: *check,
            n: *n,
            scope: *scope,
            k: k.clone(),
            samples: *samples,
            seed: g.seed,
            large: g.large,
            grid: g.grid.clone(),
            format: g.format.unwrap_or(Format::Json),
            options: SearchOptions {
                threads: g.threads,
                checkpoint: checkpoint.clone(),
                block_size: *block_size,
            },
        }),
        Command::Moments { function, k_max } => {
            let f = parse_function_spec(function)?;
            let grid = match (&g.grid, g.alpha) {
                (None, Some(a)) => vec![NoiseParameter::new(a)?],
                (grid, _) => resolve_grid(grid.as_ref(), 0.0, 0.5, 21)?,
            };
            cmd_moments(&f, &grid, *k_max, g.format.unwrap_or(Format::Csv))
        }
        Command::Search { n, scope, samples } => {
            let class = match samples {
                Some(samples) => FunctionClass::new(
                    *n,
                    Scope::RandomBalanced {
                        samples: *samples,
                        seed: g.seed,
                    },
                    g.large,
                )?,
                None => FunctionClass::new(*n, scope_of(*scope), g.large)?,
            };
            let grid = resolve_grid(g.grid.as_ref(), 0.0, 0.5, 21)?;
            let options = SearchOptions {
                threads: g.threads,
                ..SearchOptions::default()
            };
            cmd_search(class, &grid, &options, g.format.unwrap_or(Format::Csv))
        }
    }
}

fn alpha_or_default(g: &GlobalArgs) -> Result<NoiseParameter> {
    Ok(NoiseParameter::new(g.alpha.unwrap_or(0.25))?)
}

fn scope_of(s: ScopeArg) -> Scope {
    match s {
        ScopeArg::All => Scope::All,
        ScopeArg::Balanced => Scope::Balanced,
    }
}

/// A grid spec resolved to points; counts are spread over `[start, end]`.
pub fn resolve_grid(grid: Option<&GridSpec>, start: f64, end: f64, default_count: usize) -> Result<Vec<NoiseParameter>> {
    let points = match grid {
        Some(GridSpec::List(values)) => values
            .iter()
            .map(|&a| NoiseParameter::new(a))
            .collect::<Result<Vec<_>, _>>()?,
        Some(GridSpec::Count(count)) => search::linear_grid(start, end, *count)?,
        None => search::linear_grid(start, end, default_count)?,
    };
    Ok(points)
}

/// Parses `dictator:I@n=N`, `parity:I,J,…@n=N`, `majority@n=N`,
/// `constant:±1@n=N`, `threshold:W1,…,Wn>=T@n=N` or `table:N:HEX`.
pub fn parse_function_spec(spec: &str) -> Result<BooleanFunction> {
    let err = |position: usize, reason: &str| CliError::Spec {
        spec: spec.to_string(),
        position,
        reason: reason.to_string(),
    };
    if let Some(rest) = spec.strip_prefix("table:") {
        return rest.parse::<BooleanFunction>().map_err(|e| match e {
            HypercubeError::Parse { position, reason, .. } => err(position + "table:".len(), &reason),
            other => CliError::Hypercube(other),
        });
    }
    let at = spec
        .rfind("@n=")
        .ok_or_else(|| err(spec.len(), "expected `@n=<variables>`"))?;
    let n: usize = spec[at + 3..]
        .parse()
        .map_err(|_| err(at + 3, "variable count is not an integer"))?;
    let head = &spec[..at];
    let (name, args, args_at) = match head.find(':') {
        Some(c) => (&head[..c], Some(&head[c + 1..]), c + 1),
        None => (head, None, head.len()),
    };
    let int_list = |s: &str, offset: usize| -> Result<Vec<i64>> {
        let mut out = Vec::new();
        let mut pos = offset;
        for piece in s.split(',') {
            let v = piece
                .trim()
                .parse::<i64>()
                .map_err(|_| err(pos, "expected an integer"))?;
            out.push(v);
            pos += piece.len() + 1;
        }
        Ok(out)
    };
    let coords = |values: Vec<i64>, offset: usize| -> Result<Vec<usize>> {
        values
            .into_iter()
            .map(|v| usize::try_from(v).map_err(|_| err(offset, "coordinates are positive")))
            .collect()
    };
    let family = match (name, args) {
        ("dictator", Some(a)) => {
            let c = coords(int_list(a, args_at)?, args_at)?;
            if c.len() != 1 {
                return Err(err(args_at, "dictator takes one coordinate"));
            }
            Family::Dictator(c[0])
        }
        ("parity", Some(a)) => Family::Parity(coords(int_list(a, args_at)?, args_at)?),
        ("parity", None) => Family::Parity((1..=n).collect()),
        ("majority", None) => Family::Majority,
        ("constant", Some(a)) => match a {
            "1" | "+1" => Family::Constant(1),
            "-1" => Family::Constant(-1),
            _ => return Err(err(args_at, "constant is +1 or -1")),
        },
        ("threshold", Some(a)) => {
            let ge = a
                .find(">=")
                .ok_or_else(|| err(args_at, "expected `W1,…,Wn>=THETA`"))?;
            let weights = int_list(&a[..ge], args_at)?;
            let theta = a[ge + 2..]
                .trim()
                .parse::<i64>()
                .map_err(|_| err(args_at + ge + 2, "threshold is not an integer"))?;
            Family::Threshold { weights, theta }
        }
        _ => return Err(err(0, "unknown function family")),
    };
    Ok(hypercube::named_family(&family, n)?)
}

/// Canonical spec of `f`; always re-parses to the same table.
pub fn function_spec(f: &BooleanFunction) -> String {
    format!("table:{f}")
}

/// `x` with `digits` significant digits, trailing zeros dropped.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exponent < -4 || exponent >= digits as i32 {
        format!("{}e{}{:02}", trim(mantissa), if exponent < 0 { '-' } else { '+' }, exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

fn num(x: f64) -> String {
    format_significant(x, 9)
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn write_csv(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct AnalyzeReport {
    function: String,
    n: usize,
    balanced: bool,
    dictator: bool,
    weights: Vec<f64>,
    moments: channel::MomentReport,
    max_deviation: f64,
    bounds: bounds::BoundReport,
    nondictator: Option<f64>,
}

const ANALYZE_ORDERS: [usize; 3] = [1, 2, 3];
const ANALYZE_MOMENTS: usize = 4;

/// Everything about one function at one noise level.
pub fn cmd_analyze(f: &BooleanFunction, alpha: NoiseParameter, format: Option<Format>) -> Result<Outcome> {
    let spectrum = hypercube::fourier_transform(f);
    let weights = spectrum.weight_profile();
    let moments = channel::moment_report(f, alpha, ANALYZE_MOMENTS);
    let moment_orders: Vec<usize> = (1..=ANALYZE_MOMENTS).collect();
    let report = AnalyzeReport {
        function: function_spec(f),
        n: f.n(),
        balanced: f.is_balanced(),
        dictator: f.as_dictator().is_some(),
        weights,
        max_deviation: channel::max_posterior_deviation(f, alpha).0,
        bounds: bounds::bound_report_for(f, alpha, &ANALYZE_ORDERS, &moment_orders),
        nondictator: bounds::nondictator_mi_bound(alpha.alpha(), f.n()).ok(),
        moments,
    };
    let balanced_only = |v: Option<f64>| -> String {
        match v {
            _ if !report.balanced => "n/a (unbalanced)".into(),
            Some(v) => num(v),
            None => "n/a (premise)".into(),
        }
    };
    let moment_cell = |v: Option<f64>| -> String {
        match v {
            _ if !report.balanced => "n/a (unbalanced)".into(),
            Some(v) => num(v),
            None => "n/a (premise)".into(),
        }
    };
    let mut fields: Vec<(String, String)> = vec![
        ("function".into(), report.function.clone()),
        ("n".into(), report.n.to_string()),
        ("balanced".into(), report.balanced.to_string()),
        ("dictator".into(), report.dictator.to_string()),
        ("alpha".into(), num(alpha.alpha())),
    ];
    for (k, w) in report.weights.iter().enumerate() {
        fields.push((format!("W{k}"), num(*w)));
    }
    fields.push(("mi_bits".into(), num(report.moments.mi_bits)));
    for (i, m) in report.moments.moments.iter().enumerate() {
        fields.push((format!("m{}", 2 * (i + 1)), num(*m)));
    }
    fields.push(("max_deviation".into(), num(report.max_deviation)));
    fields.push(("conjectured".into(), num(report.bounds.conjectured)));
    fields.push(("quadratic".into(), num(report.bounds.quadratic)));
    fields.push(("theorem1".into(), balanced_only(report.bounds.theorem1)));
    for (t, v) in &report.bounds.general_t {
        fields.push((format!("general_t{t}"), balanced_only(*v)));
    }
    for (k, v) in &report.bounds.moment_bounds {
        fields.push((format!("moment_bound_k{k}"), moment_cell(*v)));
    }
    if !report.dictator {
        fields.push(("nondictator".into(), balanced_only(report.nondictator)));
    }
    let output = match format {
        Some(Format::Json) => to_json(&report),
        Some(Format::Csv) => {
            let rows: Vec<Vec<String>> = fields.into_iter().map(|(k, v)| vec![k, v]).collect();
            write_csv(&["field".into(), "value".into()], &rows)?
        }
        None => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut out = String::new();
            for (k, v) in fields {
                writeln!(out, "{k:<width$}  {v}").expect("string write");
            }
            out
        }
    };
    Ok(Outcome::ok(output))
}

fn subset_label(mask: usize, n: usize) -> String {
    let members: Vec<String> = (0..n)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| (j + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// Fourier coefficients (nonzero ones unless `all`).
pub fn cmd_spectrum(f: &BooleanFunction, all: bool, format: Option<Format>) -> Result<Outcome> {
    let spectrum: FourierSpectrum = hypercube::fourier_transform(f);
    let n = f.n();
    let entries: Vec<(usize, f64)> = spectrum
        .coeffs()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, c)| all || c.abs() > 1e-12)
        .collect();
    let output = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|&(mask, c)| {
                    vec![
                        mask.to_string(),
                        subset_label(mask, n),
                        mask.count_ones().to_string(),
                        num(c),
                    ]
                })
                .collect();
            write_csv(
                &["mask".into(), "subset".into(), "level".into(), "coefficient".into()],
                &rows,
            )?
        }
        Format::Json => to_json(&json!({
            "function": function_spec(f),
            "n": n,
            "coefficients": entries
                .iter()
                .map(|&(mask, c)| json!({"mask": mask, "subset": subset_label(mask, n), "value": c}))
                .collect::<Vec<_>>(),
            "weights": spectrum.weight_profile(),
            "parseval": spectrum.parseval_total(),
        })),
    };
    Ok(Outcome::ok(output))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepColumn {
    Conjectured,
    Quadratic,
    Theorem1,
    GeneralT(usize),
    MutualInformation(BooleanFunction),
}

impl SweepColumn {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "conjectured" => Ok(Self::Conjectured),
            "quadratic" => Ok(Self::Quadratic),
            "theorem1" => Ok(Self::Theorem1),
            _ if s.starts_with("mi:") => Ok(Self::MutualInformation(parse_function_spec(&s[3..])?)),
            _ => s
                .strip_prefix('t')
                .or_else(|| s.strip_prefix("general_t"))
                .and_then(|t| t.parse::<usize>().ok())
                .filter(|&t| t > 0)
                .map(Self::GeneralT)
                .ok_or_else(|| CliError::Usage(format!("unknown sweep column {s:?}"))),
        }
    }

    pub fn header(&self) -> String {
        match self {
            Self::Conjectured => "conjectured".into(),
            Self::Quadratic => "quadratic".into(),
            Self::Theorem1 => "theorem1".into(),
            Self::GeneralT(t) => format!("general_t{t}"),
            Self::MutualInformation(f) => format!("mi:{}", function_spec(f)),
        }
    }

    /// `None` when the bound's premise fails at `alpha`.
    pub fn value(&self, alpha: NoiseParameter) -> Option<f64> {
        let a = alpha.alpha();
        match self {
            Self::Conjectured => bounds::conjectured_bound(a).ok(),
            Self::Quadratic => bounds::quadratic_bound(a).ok(),
            Self::Theorem1 => bounds::theorem1_bound(a).ok(),
            Self::GeneralT(t) => bounds::general_t_bound(a, *t).ok(),
            Self::MutualInformation(f) => Some(channel::mutual_information(f, alpha)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid: Vec<NoiseParameter>,
    pub columns: Vec<SweepColumn>,
    pub format: Format,
}

impl SweepConfig {
    /// Default columns are the three curves of the bound comparison.
    pub fn from_args(
        start: f64,
        end: f64,
        grid: Option<&GridSpec>,
        columns: &[String],
        format: Option<Format>,
    ) -> Result<Self> {
        if !(0.0 <= start && start <= end && end <= 0.5) {
            return Err(CliError::Usage(format!(
                "sweep range must satisfy 0 <= start <= end <= 0.5, got [{start}, {end}]"
            )));
        }
        let columns = if columns.is_empty() {
            vec![SweepColumn::Conjectured, SweepColumn::Quadratic, SweepColumn::Theorem1]
        } else {
            columns.iter().map(|c| SweepColumn::parse(c)).collect::<Result<_>>()?
        };
        Ok(Self {
            grid: resolve_grid(grid, start, end, 101)?,
            columns,
            format: format.unwrap_or(Format::Csv),
        })
    }
}

/// One row per grid point; failed premises are blank (CSV) or null (JSON).
pub fn cmd_sweep(config: &SweepConfig) -> Result<Outcome> {
    let table: Vec<(NoiseParameter, Vec<Option<f64>>)> = config
        .grid
        .iter()
        .map(|&a| (a, config.columns.iter().map(|c| c.value(a)).collect()))
        .collect();
    let output = match config.format {
        Format::Csv => {
            let mut header = vec!["alpha".to_string()];
            header.extend(config.columns.iter().map(SweepColumn::header));
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|(a, values)| {
                    let mut row = vec![num(a.alpha())];
                    row.extend(values.iter().map(|v| opt_num(*v)));
                    row
                })
                .collect();
            write_csv(&header, &rows)?
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .iter()
                .map(|(a, values)| {
                    let mut row = serde_json::Map::new();
                    row.insert("alpha".into(), json!(a.alpha()));
                    for (c, v) in config.columns.iter().zip(values) {
                        row.insert(c.header(), json!(v));
                    }
                    serde_json::Value::Object(row)
                })
                .collect();
            to_json(&rows)
        }
    };
    Ok(Outcome::ok(output))
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub check: CheckArg,
    pub n: Option<usize>,
    pub scope: Option<ScopeArg>,
    pub k: Vec<usize>,
    pub samples: Option<u64>,
    pub seed: u64,
    pub large: bool,
    pub grid: Option<GridSpec>,
    pub format: Format,
    pub options: SearchOptions,
}

/// Verification outcome in a serializable form.
#[derive(Debug, Clone)]
pub enum VerifyReport {
    Search(SearchReport),
    Property(search::PropertyReport),
}

impl VerifyReport {
    pub fn is_verified(&self) -> bool {
        match self {
            Self::Search(r) => r.is_verified(),
            Self::Property(r) => r.is_verified(),
        }
    }
}

/// Runs one verification suite.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let scope_for = |n: usize, default: ScopeArg| -> Result<FunctionClass> {
        let scope = match config.samples {
            Some(samples) => Scope::RandomBalanced {
                samples,
                seed: config.seed,
            },
            None => scope_of(config.scope.unwrap_or(default)),
        };
        Ok(FunctionClass::new(n, scope, config.large)?)
    };
    let report = match config.check {
        CheckArg::Conjecture => {
            let class = scope_for(config.n.unwrap_or(3), ScopeArg::All)?;
            let grid = match &config.grid {
                None => search::default_alpha_grid(),
                g => resolve_grid(g.as_ref(), 0.0, 0.5, 21)?,
            };
            VerifyReport::Search(search::verify_conjecture(class, &grid, &config.options)?)
        }
        CheckArg::Theorem1 => {
            let class = scope_for(config.n.unwrap_or(4), ScopeArg::Balanced)?;
            let grid = match &config.grid {
                None => search::default_theorem1_grid(),
                g => resolve_grid(g.as_ref(), bounds::theorem1_threshold(), 0.5, 0)?,
            };
            VerifyReport::Search(search::verify_theorem1_on(class, &grid, &config.options)?)
        }
        CheckArg::Moments => {
            let class = scope_for(config.n.unwrap_or(4), ScopeArg::Balanced)?;
            let points = match &config.grid {
                Some(GridSpec::List(_)) => {
                    let grid = resolve_grid(config.grid.as_ref(), 0.0, 0.5, 0)?;
                    config
                        .k
                        .iter()
                        .flat_map(|&k| grid.iter().map(move |&alpha| search::GridPoint { alpha, k: Some(k) }))
                        .collect()
                }
                g => {
                    let count = match g {
                        Some(GridSpec::Count(c)) => *c,
                        _ => 21,
                    };
                    let mut points = Vec::new();
                    for &k in &config.k {
                        if k == 0 {
                            return Err(CliError::Usage("moment orders are positive".into()));
                        }
                        let grid = search::linear_grid(bounds::general_t_threshold(k), 0.5, count)?;
                        points.extend(search::moment_points(&grid, &[k]));
                    }
                    points
                }
            };
            VerifyReport::Search(search::verify_moment_points(class, &points, &config.options)?)
        }
        CheckArg::Corollary => {
            let n = config.n.unwrap_or(4);
            let grid = match &config.grid {
                Some(GridSpec::List(_)) => resolve_grid(config.grid.as_ref(), 0.0, 0.5, 0)?,
                Some(GridSpec::Count(c)) => search::corollary_grid(n, *c),
                None => search::corollary_grid(n, 11),
            };
            VerifyReport::Search(search::verify_corollary(n, &grid, config.large, &config.options)?)
        }
        CheckArg::Taylor => {
            let count = match &config.grid {
                Some(GridSpec::Count(c)) => *c,
                Some(GridSpec::List(_)) => {
                    return Err(CliError::Usage("taylor takes a point count".into()))
                }
                None => 2001,
            };
            VerifyReport::Property(search::verify_taylor(count, 5))
        }
        CheckArg::Hypercontractivity => {
            let dims: Vec<usize> = match config.n {
                Some(n) => vec![n],
                None => vec![2, 3, 4],
            };
            VerifyReport::Property(search::verify_hypercontractivity(
                &dims,
                &[4.0, 6.0],
                config.samples.unwrap_or(10_000),
                config.seed,
            )?)
        }
    };
    Ok(report)
}

/// Runs a suite; the exit status is 0 iff nothing was violated.
pub fn cmd_verify(config: &VerifyConfig) -> Result<Outcome> {
    let report = verify(config)?;
    let output = match (&report, config.format) {
        (VerifyReport::Search(r), Format::Json) => to_json(r),
        (VerifyReport::Property(r), Format::Json) => to_json(r),
        (VerifyReport::Search(r), Format::Csv) => {
            let rows: Vec<Vec<String>> = r
                .points
                .iter()
                .zip(&r.stats)
                .map(|(p, s)| {
                    vec![
                        p.key(),
                        num(p.alpha.alpha()),
                        p.k.map(|k| k.to_string()).unwrap_or_default(),
                        num(s.max_value),
                        num(s.min_margin),
                        s.maximizers.len().to_string(),
                    ]
                })
                .collect();
            write_csv(
                &[
                    "point".into(),
                    "alpha".into(),
                    "k".into(),
                    "max_value".into(),
                    "min_margin".into(),
                    "maximizers".into(),
                ],
                &rows,
            )?
        }
        (VerifyReport::Property(r), Format::Csv) => write_csv(
            &["check".into(), "checked_count".into(), "violation_count".into(), "min_margin".into()],
            &[vec![
                r.check.clone(),
                r.checked_count.to_string(),
                r.violation_count.to_string(),
                num(r.min_margin),
            ]],
        )?,
    };
    Ok(Outcome {
        output,
        exit_code: if report.is_verified() { 0 } else { 1 },
    })
}

/// Moment reports over a grid.
pub fn cmd_moments(f: &BooleanFunction, grid: &[NoiseParameter], k_max: usize, format: Format) -> Result<Outcome> {
    if k_max == 0 {
        return Err(CliError::Usage("k-max must be positive".into()));
    }
    let reports: Vec<channel::MomentReport> =
        grid.iter().map(|&a| channel::moment_report(f, a, k_max)).collect();
    let output = match format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut header = vec!["alpha".to_string()];
            header.extend((1..=k_max).map(|k| format!("m{}", 2 * k)));
            header.push("mi_bits".into());
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let mut row = vec![num(r.alpha.alpha())];
                    row.extend(r.moments.iter().map(|m| num(*m)));
                    row.push(num(r.mi_bits));
                    row
                })
                .collect();
            write_csv(&header, &rows)?
        }
    };
    Ok(Outcome::ok(output))
}

/// Mutual-information maximizers per α, compared with `1 - h(α)`.
pub fn cmd_search(
    class: FunctionClass,
    grid: &[NoiseParameter],
    options: &SearchOptions,
    format: Format,
) -> Result<Outcome> {
    let report = search::verify_conjecture(class, grid, options)?;
    let output = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .points
                .iter()
                .zip(&report.stats)
                .map(|(p, s)| {
                    let bound = bounds::conjectured_bound(p.alpha.alpha()).expect("validated alpha");
                    vec![
                        num(p.alpha.alpha()),
                        num(s.max_value),
                        num(bound),
                        num(bound - s.max_value),
                        s.maximizers.len().to_string(),
                        s.maximizers.iter().map(|m| format!("table:{m}")).collect::<Vec<_>>().join(" "),
                    ]
                })
                .collect();
            write_csv(
                &[
                    "alpha".into(),
                    "max_mi".into(),
                    "conjectured".into(),
                    "gap".into(),
                    "maximizer_count".into(),
                    "maximizers".into(),
                ],
                &rows,
            )?
        }
    };
    Ok(Outcome::ok(output))
}
