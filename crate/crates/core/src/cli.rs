//! Command-line front end: reads function families, runs one job and renders
//! the report as text or JSON.
//!
//! Exit codes: 0 for a decided verdict, 2 when the verdict is undecided on the
//! configured horizon, 1 for input errors and failed preconditions.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classify::{classify, trace_dichotomy, ClassificationReport, ClassifyConfig, CriterionConfig, DichotomyReport, Traceable};
use crate::construct::{construct, verify_construction, StaircaseConstruction, Variant, VerificationReport, VerifyConfig, DEFAULT_START, DEFAULT_STEPS};
use crate::error::Error;
use crate::function::{g_transform, rearrange, EigenvalueFunction, GFunction, LogStep, LogStepTail, PowerLog, Profile, Sampled, SpectralData, Step};
use crate::ideals::{in_kernel, in_principal_ideal, IdealConfig, IdealDecision, Membership};
use crate::indices::{regularity_of, EstimatorConfig, MatuszewskaReport};

// ---------------------------------------------------------------------------
// Function-family specifications

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    /// Breakpoints in `x`, values of `μ`.
    #[default]
    Linear,
    /// Breakpoints in `t = ln x`, values of `g = -ln μ`.
    Log,
}

/// JSON description of a function family, discriminated by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// `C·(x+s)^(-p)·ln(x+s)^(-q)` with `s = e` unless given.
    PowerLog {
        #[serde(default = "one")]
        scale: f64,
        p: f64,
        #[serde(default)]
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift: Option<f64>,
    },
    Exponential {
        alpha: f64,
    },
    /// `g(t) = intercept + slope·max(t, 0)`.
    GLinear {
        slope: f64,
        #[serde(default)]
        intercept: f64,
    },
    /// In log coordinates the first value applies before the first breakpoint
    /// and `tail` says what happens after the last one.
    Step {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        #[serde(default)]
        coordinates: Coordinates,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<LogStepTail>,
    },
    Sampled {
        grid: Vec<f64>,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<Box<FamilySpec>>,
    },
    Spectrum {
        pairs: Vec<(f64, f64)>,
    },
}

fn one() -> f64 {
    1.0
}

impl FamilySpec {
    pub fn to_profile(&self) -> Result<Profile, Error> {
        Ok(match self {
            FamilySpec::PowerLog { scale, p, q, shift } => {
                let mut pl = PowerLog::new(*scale, *p, *q);
                if let Some(s) = shift {
                    pl.shift = *s;
                }
                Profile::PowerLog(pl)
            }
            FamilySpec::Exponential { alpha } => Profile::Exponential { alpha: *alpha },
            FamilySpec::GLinear { slope, intercept } => Profile::GLinear { slope: *slope, intercept: *intercept },
            FamilySpec::Step { breakpoints, values, coordinates: Coordinates::Linear, tail } => {
                if tail.is_some() {
                    return Err(Error::InvalidFunction("tail applies to log-coordinate steps only".into()));
                }
                Profile::Step(Step::new(breakpoints.clone(), values.clone())?)
            }
            FamilySpec::Step { breakpoints, values, coordinates: Coordinates::Log, tail } => Profile::LogStep(LogStep::new(
                breakpoints.clone(),
                values.clone(),
                tail.unwrap_or(LogStepTail::Infinite),
            )?),
            FamilySpec::Sampled { grid, values, tail } => {
                let tail = tail.as_ref().map(|t| t.to_profile()).transpose()?;
                Profile::Sampled(Sampled::new(grid.clone(), values.clone(), tail)?)
            }
            FamilySpec::Spectrum { pairs } => rearrange(&SpectralData::new(pairs.clone())?).into_profile(),
        })
    }

    pub fn to_function(&self) -> Result<EigenvalueFunction, Error> {
        EigenvalueFunction::new(self.to_profile()?)
    }

    /// Step specification of a step profile.
    pub fn from_step(p: &Profile) -> Option<FamilySpec> {
        match p {
            Profile::Step(s) => Some(FamilySpec::Step {
                breakpoints: s.breakpoints().to_vec(),
                values: s.values().to_vec(),
                coordinates: Coordinates::Linear,
                tail: None,
            }),
            Profile::LogStep(s) => Some(FamilySpec::Step {
                breakpoints: s.breakpoints().to_vec(),
                values: s.values().to_vec(),
                coordinates: Coordinates::Log,
                tail: Some(s.tail()),
            }),
            _ => None,
        }
    }
}

/// Family given by flags instead of a file.
#[derive(Args, Clone, Debug, Default)]
pub struct InlineFamily {
    /// Family kind: power_log, exponential or g_linear.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Offset inside the power and the logarithm.
    #[arg(long)]
    pub shift: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub slope: Option<f64>,
    #[arg(long)]
    pub intercept: Option<f64>,
}

impl InlineFamily {
    fn to_spec(&self) -> Result<Option<FamilySpec>, CliError> {
        let Some(kind) = self.kind.as_deref() else {
            return Ok(None);
        };
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--kind {kind} needs --{name}")));
        let spec = match kind {
            "power_log" => FamilySpec::PowerLog {
                scale: self.scale.unwrap_or(1.0),
                p: need(self.p, "p")?,
                q: self.q.unwrap_or(0.0),
                shift: self.shift,
            },
            "exponential" => FamilySpec::Exponential { alpha: self.alpha.unwrap_or(1.0) },
            "g_linear" => FamilySpec::GLinear { slope: need(self.slope, "slope")?, intercept: self.intercept.unwrap_or(0.0) },
            other => return Err(CliError::Usage(format!("unknown inline kind `{other}`; use a file for {other}"))),
        };
        Ok(Some(spec))
    }
}

// ---------------------------------------------------------------------------
// Errors and input

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

/// Reads a family from a JSON file, or spectral pairs from a CSV file.
pub fn load_family(path: &Path) -> Result<FamilySpec, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_csv_spectrum(&text).map_err(|message| CliError::Parse { path: path.into(), message })
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })
    }
}

/// Two columns `value,weight`; a non-numeric first row is taken as a header.
pub fn parse_csv_spectrum(text: &str) -> Result<FamilySpec, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut pairs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() != 2 {
            return Err(format!("line {line}: expected 2 columns (value,weight), found {}", record.len()));
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => pairs.push((v[0], v[1])),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(format!("line {line}: {e}")),
        }
    }
    Ok(FamilySpec::Spectrum { pairs })
}

// ---------------------------------------------------------------------------
// Configuration

/// Every parameter a job uses. Reports carry it, and `--config` reads it back.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub estimator: EstimatorConfig,
    pub criteria: CriterionConfig,
    pub ideals: IdealConfig,
    pub lambda: f64,
    pub regularity_tol: f64,
    pub n_steps: usize,
    pub start: f64,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = ClassifyConfig::default();
        Self {
            estimator: c.estimator,
            criteria: c.criteria,
            ideals: c.ideals,
            lambda: c.lambda,
            regularity_tol: c.regularity_tol,
            n_steps: DEFAULT_STEPS,
            start: DEFAULT_START,
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn classify_config(&self) -> ClassifyConfig {
        ClassifyConfig {
            estimator: self.estimator.clone(),
            criteria: self.criteria.clone(),
            ideals: self.ideals.clone(),
            lambda: self.lambda,
            regularity_tol: self.regularity_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Clone, Debug, Default)]
pub struct GlobalOpts {
    /// JSON configuration, such as the `config` object of an earlier report.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Horizon T in t = ln x for the index estimator and the ideal checks.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Horizon for the liminf and ratio criteria.
    #[arg(long, global = true)]
    pub criteria_horizon: Option<f64>,
    /// Comma-separated window lengths h for the index estimator.
    #[arg(long, global = true, value_delimiter = ',')]
    pub h_grid: Option<Vec<f64>>,
    /// Fraction ω of the horizon left out at the start of the tail window.
    #[arg(long, global = true)]
    pub tail_window: Option<f64>,
    /// Ratio factor λ > 1.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Regularity tolerance on δ̄ - δ̲ for estimated indices.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of staircase breakpoints.
    #[arg(long, global = true)]
    pub n_steps: Option<usize>,
    /// Always estimate indices, even when closed forms are available.
    #[arg(long, global = true)]
    pub force_estimate: bool,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.clone(), message: e.to_string() })?
            }
            None => RunConfig::default(),
        };
        if let Some(h) = self.horizon {
            cfg.estimator.horizon = h;
            cfg.ideals.horizon = h;
        }
        if let Some(h) = self.criteria_horizon {
            cfg.criteria.horizon = h;
        }
        if let Some(grid) = &self.h_grid {
            cfg.estimator.h_grid = grid.clone();
        }
        if let Some(w) = self.tail_window {
            cfg.estimator.tail_window = w;
            cfg.ideals.tail_window = w;
        }
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if let Some(t) = self.tol {
            cfg.regularity_tol = t;
        }
        if let Some(n) = self.n_steps {
            cfg.n_steps = n;
        }
        if self.force_estimate {
            cfg.estimator.force_estimate = true;
        }
        cfg.estimator.validate()?;
        Ok(cfg)
    }
}

// ---------------------------------------------------------------------------
// Commands

#[derive(Parser, Debug)]
#[command(name = "singtrace", version, about = "Classify eigenvalue asymptotics of compact operators for singular traces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace class, regularity and the three traceability criteria.
    Classify {
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        family: InlineFamily,
    },
    /// Matuszewska indices and regularity.
    Indices {
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        family: InlineFamily,
    },
    /// Is A in the principal ideal generated by B?
    IdealCheck { a: PathBuf, b: PathBuf },
    /// Is A in the kernel of the principal ideal generated by B?
    KernelCheck { a: PathBuf, b: PathBuf },
    /// Build and verify a staircase for the given operator.
    Construct {
        #[arg(value_enum)]
        variant: VariantArg,
        input: Option<PathBuf>,
        #[command(flatten)]
        family: InlineFamily,
    },
    /// Non-increasing rearrangement of spectral data.
    Rearrange { input: PathBuf },
    /// Zero or infinite singular traces of A on the ideal of a δ = 1 operator B.
    #[command(alias = "thm32")]
    Dichotomy { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Vanisher,
    Dominator,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Vanisher => Variant::Vanisher,
            VariantArg::Dominator => Variant::Dominator,
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Decided,
    Undecided,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Decided => 0,
            Status::Error => 1,
            Status::Undecided => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Classification(Box<ClassificationReport>),
    Indices { matuszewska: MatuszewskaReport, regular: bool, #[serde(with = "crate::serde_ext::option")] delta: Option<f64> },
    Ideal(IdealDecision),
    Staircase {
        construction: StaircaseConstruction,
        family: FamilySpec,
        verification: Option<VerificationReport>,
        verification_error: Option<String>,
    },
    Rearranged { family: FamilySpec },
    Dichotomy(DichotomyReport),
    Failure { error: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<FamilySpec>,
    pub config: RunConfig,
    pub verdict: String,
    pub status: Status,
    pub result: Outcome,
}

fn failure(command: &str, inputs: Vec<FamilySpec>, config: &RunConfig, err: impl std::fmt::Display) -> Report {
    Report {
        command: command.into(),
        inputs,
        config: config.clone(),
        verdict: "error".into(),
        status: Status::Error,
        result: Outcome::Failure { error: err.to_string() },
    }
}

fn traceable_word(t: Traceable) -> &'static str {
    match t {
        Traceable::True => "singularly traceable",
        Traceable::False => "not singularly traceable",
        Traceable::Undecided => "undecided",
    }
}

fn membership_word(m: Membership) -> &'static str {
    match m {
        Membership::Member => "member",
        Membership::NonMember => "non-member",
        Membership::Undecided => "undecided",
    }
}

fn run_classify(spec: FamilySpec, cfg: &RunConfig) -> Report {
    let result = spec.to_function().and_then(|mu| classify(&mu, &cfg.classify_config()));
    match result {
        Ok(r) => Report {
            command: "classify".into(),
            inputs: vec![spec],
            config: cfg.clone(),
            verdict: traceable_word(r.traceable).into(),
            status: if r.traceable == Traceable::Undecided { Status::Undecided } else { Status::Decided },
            result: Outcome::Classification(Box::new(r)),
        },
        Err(e) => failure("classify", vec![spec], cfg, e),
    }
}

fn run_indices(spec: FamilySpec, cfg: &RunConfig) -> Report {
    let result = spec.to_function().and_then(|mu| regularity_of(mu.profile(), cfg.regularity_tol, &cfg.estimator));
    match result {
        Ok(r) => Report {
            command: "indices".into(),
            inputs: vec![spec],
            config: cfg.clone(),
            verdict: match r.delta {
                Some(d) if r.regular => format!("regular with index {}", sig17(d)),
                _ => "not regular".into(),
            },
            status: Status::Decided,
            result: Outcome::Indices { matuszewska: r.report, regular: r.regular, delta: r.delta },
        },
        Err(e) => failure("indices", vec![spec], cfg, e),
    }
}

fn run_ideal(command: &str, a: FamilySpec, b: FamilySpec, cfg: &RunConfig) -> Report {
    let inputs = vec![a.clone(), b.clone()];
    let result = (|| {
        let ga = g_transform(&a.to_function()?);
        let gb = g_transform(&b.to_function()?);
        if command == "kernel-check" {
            in_kernel(&ga, &gb, &cfg.ideals)
        } else {
            in_principal_ideal(&ga, &gb, &cfg.ideals)
        }
    })();
    match result {
        Ok(d) => Report {
            command: command.into(),
            inputs,
            config: cfg.clone(),
            verdict: membership_word(d.verdict).into(),
            status: if d.verdict == Membership::Undecided { Status::Undecided } else { Status::Decided },
            result: Outcome::Ideal(d),
        },
        Err(e) => failure(command, inputs, cfg, e),
    }
}

fn run_construct(variant: Variant, spec: FamilySpec, cfg: &RunConfig) -> Report {
    let built = spec.to_profile().and_then(GFunction::new).and_then(|g| construct(&g, variant, cfg.n_steps, cfg.start));
    let s = match built {
        Ok(s) => s,
        Err(e) => return failure("construct", vec![spec], cfg, e),
    };
    let family = match s.g_function() {
        Ok(g) => FamilySpec::from_step(g.profile()).expect("staircases are log steps"),
        Err(e) => return failure("construct", vec![spec], cfg, e),
    };
    let (verification, verification_error, status, verdict) = match verify_construction(&s, &cfg.verify) {
        Ok(v) => (Some(v), None, Status::Decided, "verified"),
        Err(e) => (None, Some(e.to_string()), Status::Undecided, "verification failed"),
    };
    Report {
        command: "construct".into(),
        inputs: vec![spec],
        config: cfg.clone(),
        verdict: verdict.into(),
        status,
        result: Outcome::Staircase { construction: s, family, verification, verification_error },
    }
}

fn run_rearrange(spec: FamilySpec, cfg: &RunConfig) -> Report {
    let result = match &spec {
        FamilySpec::Spectrum { .. } => spec.to_profile(),
        _ => Err(Error::InvalidArgument("rearrange needs spectral data (kind \"spectrum\" or a CSV file)".into())),
    };
    match result {
        Ok(p) => Report {
            command: "rearrange".into(),
            inputs: vec![spec],
            config: cfg.clone(),
            verdict: "rearranged".into(),
            status: Status::Decided,
            result: Outcome::Rearranged { family: FamilySpec::from_step(&p).expect("rearrangement is a step") },
        },
        Err(e) => failure("rearrange", vec![spec], cfg, e),
    }
}

fn run_dichotomy(a: FamilySpec, b: FamilySpec, cfg: &RunConfig) -> Report {
    let inputs = vec![a.clone(), b.clone()];
    let result = (|| trace_dichotomy(&a.to_function()?, &b.to_function()?, &cfg.classify_config()))();
    match result {
        Ok(d) => Report {
            command: "dichotomy".into(),
            inputs,
            config: cfg.clone(),
            verdict: format!("{:?}", d.verdict),
            status: Status::Decided,
            result: Outcome::Dichotomy(d),
        },
        Err(e) => failure("dichotomy", inputs, cfg, e),
    }
}

fn single_input(path: Option<&PathBuf>, family: &InlineFamily) -> Result<FamilySpec, CliError> {
    match (path, family.to_spec()?) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either an input file or --kind, not both".into())),
        (Some(p), None) => load_family(p),
        (None, Some(spec)) => Ok(spec),
        (None, None) => Err(CliError::Usage("no input: give a file or --kind".into())),
    }
}

fn many_inputs(paths: &[PathBuf], family: &InlineFamily) -> Result<Vec<FamilySpec>, CliError> {
    match (paths.is_empty(), family.to_spec()?) {
        (false, Some(_)) => Err(CliError::Usage("give either input files or --kind, not both".into())),
        (false, None) => paths.iter().map(|p| load_family(p)).collect(),
        (true, Some(spec)) => Ok(vec![spec]),
        (true, None) => Err(CliError::Usage("no input: give a file or --kind".into())),
    }
}

/// Independent inputs run on separate threads.
fn batch(specs: Vec<FamilySpec>, cfg: &RunConfig, job: fn(FamilySpec, &RunConfig) -> Report) -> Vec<Report> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = specs.into_iter().map(|s| scope.spawn(move || job(s, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("job thread panicked")).collect()
    })
}

/// Runs the parsed command. Input errors return `Err`; failures inside a job
/// are reported in the job's report.
pub fn run(cli: &Cli) -> Result<Vec<Report>, CliError> {
    let cfg = cli.opts.run_config()?;
    Ok(match &cli.command {
        Command::Classify { inputs, family } => batch(many_inputs(inputs, family)?, &cfg, run_classify),
        Command::Indices { inputs, family } => batch(many_inputs(inputs, family)?, &cfg, run_indices),
        Command::IdealCheck { a, b } => vec![run_ideal("ideal-check", load_family(a)?, load_family(b)?, &cfg)],
        Command::KernelCheck { a, b } => vec![run_ideal("kernel-check", load_family(a)?, load_family(b)?, &cfg)],
        Command::Construct { variant, input, family } => {
            vec![run_construct((*variant).into(), single_input(input.as_ref(), family)?, &cfg)]
        }
        Command::Rearrange { input } => vec![run_rearrange(load_family(input)?, &cfg)],
        Command::Dichotomy { a, b } => vec![run_dichotomy(load_family(a)?, load_family(b)?, &cfg)],
    })
}

pub fn status_of(reports: &[Report]) -> Status {
    reports.iter().map(|r| r.status).max().unwrap_or(Status::Decided)
}

// ---------------------------------------------------------------------------
// Rendering

/// `v` with 17 significant digits, which always reads back to the same `f64`.
pub fn sig17(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    }
}

/// Pretty JSON with every float written by [`sig17`].
struct Sig17Formatter<'a>(serde_json::ser::PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).expect("reports serialize");
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        format!("{v}")
    }
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command: {}", r.command);
    let _ = writeln!(s, "verdict: {}", r.verdict);
    match &r.result {
        Outcome::Classification(c) => {
            let _ = writeln!(s, "trace class: {:?} ({:?})", c.trace_class.verdict, c.trace_class.basis);
            if let Some(m) = &c.matuszewska {
                let _ = writeln!(s, "indices: lower {} upper {} ({:?})", num(m.delta_lower), num(m.delta_upper), m.mode);
            }
            let _ = writeln!(s, "regular: {}{}", c.regular, c.delta.map(|d| format!(" with index {}", num(d))).unwrap_or_default());
            for v in c.verdicts() {
                let ev: Vec<String> = v.evidence.iter().map(|e| format!("{}={}", e.name, num(e.value))).collect();
                let _ = writeln!(s, "  {:?}: {} [{}]", v.criterion, traceable_word(v.traceable), ev.join(", "));
            }
            let _ = writeln!(s, "agreement: {}", c.agreement);
            if c.finite_rank {
                let _ = writeln!(s, "finite rank");
            }
        }
        Outcome::Indices { matuszewska: m, .. } => {
            let _ = writeln!(s, "indices: lower {} upper {} ({:?})", num(m.delta_lower), num(m.delta_upper), m.mode);
            for row in &m.per_h_table {
                let _ = writeln!(s, "  h={} sup={} inf={} points={}", num(row.h), num(row.sup), num(row.inf), row.points);
            }
        }
        Outcome::Ideal(d) => {
            let _ = writeln!(s, "mode: {:?}", d.mode);
            if let Some(w) = &d.witness {
                let _ = writeln!(s, "witness: a={} b={} checked on [{}, {}]", num(w.a), num(w.b), num(w.t0), num(w.t_end));
            }
            if let Some(r) = &d.refutation {
                let _ = writeln!(s, "refutation: {r:?}");
            }
            for k in &d.kernel_levels {
                let _ = writeln!(s, "  c={} from t={}", num(k.c), num(k.t0));
            }
        }
        Outcome::Staircase { construction, verification, verification_error, .. } => {
            let _ = writeln!(s, "variant: {:?}, {} breakpoints", construction.variant, construction.breakpoints.len());
            let shown: Vec<String> = construction.breakpoints.iter().take(6).map(|b| num(*b)).collect();
            let _ = writeln!(s, "breakpoints: {} ...", shown.join(", "));
            if let Some(v) = verification {
                for c in &v.checks {
                    let _ = writeln!(s, "  {}: {} ({})", c.name, if c.passed { "pass" } else { "fail" }, c.detail);
                }
            }
            if let Some(e) = verification_error {
                let _ = writeln!(s, "  {e}");
            }
        }
        Outcome::Rearranged { family } => {
            if let FamilySpec::Step { breakpoints, values, .. } = family {
                for (w, v) in breakpoints.windows(2).zip(values) {
                    let _ = writeln!(s, "  [{}, {}) -> {}", num(w[0]), num(w[1]), num(*v));
                }
            }
        }
        Outcome::Dichotomy(d) => {
            let _ = writeln!(s, "A trace class: {:?}", d.a_trace_class.verdict);
            let _ = writeln!(s, "B index: {}", num(d.b_delta));
            let _ = writeln!(s, "ideal cross-check: {} (consistent: {})", membership_word(d.cross_check.verdict), d.consistent);
        }
        Outcome::Failure { error } => {
            let _ = writeln!(s, "error: {error}");
        }
    }
    s
}

pub fn render(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json if reports.len() == 1 => to_json(&reports[0]) + "\n",
        Format::Json => to_json(&reports) + "\n",
        Format::Text => reports.iter().map(render_text).collect::<Vec<_>>().join("\n"),
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let reports = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = render(&reports, cli.opts.format);
    match &cli.opts.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    let shown_on_stdout = cli.opts.format == Format::Text && cli.opts.output.is_none();
    for r in reports.iter().filter(|_| !shown_on_stdout) {
        if let Outcome::Failure { error } = &r.result {
            eprintln!("error: {error}");
        }
    }
    ExitCode::from(status_of(&reports).exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.0, 1e-300, 6.02e23, -0.0, -123.456, 5e-324, f64::MAX, 1234567890123456.7] {
            let s = sig17(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
            assert!(serde_json::from_str::<f64>(&s).is_ok(), "{s}");
        }
        assert_eq!(sig17(0.5), "0.50000000000000000");
        assert_eq!(sig17(2.0), "2.0000000000000000");
    }

    #[test]
    fn family_json() {
        let spec: FamilySpec = serde_json::from_str(r#"{"kind":"power_log","scale":1,"p":1,"q":0}"#).unwrap();
        assert_eq!(spec, FamilySpec::PowerLog { scale: 1.0, p: 1.0, q: 0.0, shift: None });
        let err = serde_json::from_str::<FamilySpec>(r#"{"kind":"power_log","q":0}"#).unwrap_err();
        assert!(err.to_string().contains("missing field `p`"));
        let spectrum: FamilySpec = serde_json::from_str(r#"{"kind":"spectrum","pairs":[[1,-2]]}"#).unwrap();
        assert!(matches!(spectrum.to_function(), Err(Error::NonpositiveWeight { index: 0, .. })));
    }

    #[test]
    fn csv_with_and_without_header() {
        let a = parse_csv_spectrum("value,weight\n2,1\n1,3\n").unwrap();
        let b = parse_csv_spectrum("2,1\n1,3\n").unwrap();
        assert_eq!(a, b);
        let err = parse_csv_spectrum("2,1\n1,x\n").unwrap_err();
        assert!(err.starts_with("line 2"), "{err}");
    }

    #[test]
    fn staircase_family_round_trips() {
        let g = GFunction::linear(1.0, 0.0).unwrap();
        let s = construct(&g, Variant::Dominator, 8, DEFAULT_START).unwrap();
        let spec = FamilySpec::from_step(s.g_function().unwrap().profile()).unwrap();
        let json = to_json(&spec);
        let back: FamilySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_profile().unwrap(), s.g_function().unwrap().into_profile());
    }

    #[test]
    fn exit_codes() {
        let cli = Cli::try_parse_from(["singtrace", "classify", "--kind", "power_log", "--p", "1"]).unwrap();
        let reports = run(&cli).unwrap();
        assert_eq!(reports[0].verdict, "singularly traceable");
        assert_eq!(status_of(&reports).exit_code(), 0);
        let cli = Cli::try_parse_from(["singtrace", "classify", "--kind", "power_log", "--p", "1", "--force-estimate"]).unwrap();
        let reports = run(&cli).unwrap();
        assert_eq!(status_of(&reports), Status::Decided, "liminf and ratio still decide");
    }
}
