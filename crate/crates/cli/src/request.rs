//! Validated requests. Every spec and weight list is checked here, before any
//! core computation runs.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use gridmono::export::GraphFormat;
use gridmono::verify::{Suite, DEFAULT_SEED, FORMULA_TOLERANCE};
use gridmono::weights::{format_rational, parse_rational, parse_rational_list, Arithmetic};
use gridmono::{GridSpec, WeightSpec};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::args::{Cli, Command, SpecArgs, WeightArgs};
use crate::error::CliError;

/// Upper bound on the number of points in one sweep.
pub const MAX_SWEEP_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSel {
    Det,
    Formula,
    Enumerate,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builder {
    Graph,
    Kronecker,
}

macro_rules! keyword_enum {
    ($t:ty, $what:literal, $($v:path => $s:literal),+ $(,)?) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($v => $s),+ })
            }
        }

        impl FromStr for $t {
            type Err = CliError;
            fn from_str(s: &str) -> Result<Self, CliError> {
                match s.trim() {
                    $($s => Ok($v),)+
                    other => Err(CliError::Usage(format!(
                        concat!("unknown ", $what, " `{}` (expected {})"),
                        other,
                        [$($s),+].join(" | ")
                    ))),
                }
            }
        }
    };
}

keyword_enum!(MethodSel, "method",
    MethodSel::Det => "det",
    MethodSel::Formula => "formula",
    MethodSel::Enumerate => "enumerate",
    MethodSel::All => "all",
);
keyword_enum!(OutputFormat, "format",
    OutputFormat::Text => "text",
    OutputFormat::Json => "json",
    OutputFormat::Csv => "csv",
);
keyword_enum!(Builder, "builder",
    Builder::Graph => "graph",
    Builder::Kronecker => "kronecker",
);

#[derive(Debug, Clone, PartialEq)]
pub struct ComputeRequest {
    pub spec: GridSpec,
    pub weights: WeightSpec,
    pub method: MethodSel,
    pub format: OutputFormat,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRequest {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub log: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub spec: GridSpec,
    pub x: Vec<BigRational>,
    /// One value set per axis.
    pub a: Vec<Vec<BigRational>>,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportRequest {
    pub spec: GridSpec,
    pub format: GraphFormat,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRequest {
    pub spec: GridSpec,
    pub weights: WeightSpec,
    pub builder: Builder,
    pub dimer: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigsRequest {
    pub spec: GridSpec,
    pub weights: WeightSpec,
    pub limit: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunRequest {
    Compute(ComputeRequest),
    Verify(VerifyRequest),
    Sweep(SweepRequest),
    Export(ExportRequest),
    Matrix(MatrixRequest),
    Configs(ConfigsRequest),
}

fn spec_of(s: &SpecArgs) -> Result<GridSpec, CliError> {
    Ok(GridSpec::parse(&s.dims, &s.mode)?)
}

fn weights_of(w: &WeightArgs, spec: &GridSpec) -> Result<WeightSpec, CliError> {
    let x = parse_rational(&w.x)?;
    let a = match &w.a {
        Some(a) => parse_rational_list(a)?,
        None => vec![BigRational::one(); spec.dim()],
    };
    let w = WeightSpec::new(x, a);
    w.check_dim(spec.dim())?;
    Ok(w)
}

fn tolerance_of(t: &Option<String>) -> Result<f64, CliError> {
    let Some(t) = t else {
        return Ok(FORMULA_TOLERANCE);
    };
    match t.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(CliError::Usage(format!(
            "tolerance `{t}` must be a finite non-negative number"
        ))),
    }
}

/// Comma separated rationals and inclusive `lo:hi:step` ranges; blank means no values.
pub fn parse_value_set(s: &str) -> Result<Vec<BigRational>, CliError> {
    let mut out = Vec::new();
    if s.trim().is_empty() {
        return Ok(out);
    }
    for item in s.split(',') {
        let item = item.trim();
        if !item.contains(':') {
            out.push(parse_rational(item)?);
            continue;
        }
        let parts: Vec<&str> = item.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(CliError::Usage(format!(
                "range `{item}` must look like lo:hi:step"
            )));
        };
        let (lo, hi, step) = (
            parse_rational(lo)?,
            parse_rational(hi)?,
            parse_rational(step)?,
        );
        if !step.is_positive() {
            return Err(CliError::Usage(format!(
                "range `{item}` needs a positive step"
            )));
        }
        if lo > hi {
            return Err(CliError::Usage(format!("range `{item}` has lo > hi")));
        }
        let count = ((&hi - &lo) / &step).floor().to_integer();
        if count >= MAX_SWEEP_POINTS.into() {
            return Err(CliError::Usage(format!("range `{item}` is too long")));
        }
        let mut v = lo;
        while v <= hi {
            out.push(v.clone());
            v += &step;
        }
    }
    Ok(out)
}

fn format_value_set(v: &[BigRational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

impl RunRequest {
    /// Parses a full argument vector, program name first.
    pub fn parse_args<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        RunRequest::try_from(cli)
    }

    /// Parses the whitespace separated textual form produced by [`RunRequest::to_line`].
    pub fn parse(line: &str) -> Result<Self, CliError> {
        RunRequest::parse_args(std::iter::once("gridmono").chain(line.split_whitespace()))
    }

    /// Arguments after the program name, in canonical form.
    pub fn to_args(&self) -> Vec<String> {
        let spec = |s: &GridSpec| {
            vec![
                format!("--dims={}", s.dims_arg()),
                format!("--mode={}", s.mode_arg()),
            ]
        };
        let weights = |w: &WeightSpec| {
            vec![
                format!("--x={}", format_rational(&w.x)),
                format!("--a={}", w.a_arg()),
            ]
        };
        let mut out = Vec::new();
        match self {
            RunRequest::Compute(r) => {
                out.push("compute".to_string());
                out.extend(spec(&r.spec));
                out.extend(weights(&r.weights));
                out.push(format!("--method={}", r.method));
                out.push(format!("--format={}", r.format));
                out.push(format!("--arithmetic={}", r.weights.arithmetic));
                out.push(format!("--tolerance={}", r.tolerance));
            }
            RunRequest::Verify(r) => {
                out.push("verify".to_string());
                out.extend(r.suites.iter().map(|s| format!("--suite={s}")));
                out.push(format!("--seed={}", r.seed));
                if let Some(p) = &r.log {
                    out.push(format!("--log={}", p.display()));
                }
            }
            RunRequest::Sweep(r) => {
                out.push("sweep".to_string());
                out.extend(spec(&r.spec));
                out.push(format!("--x={}", format_value_set(&r.x)));
                out.extend(r.a.iter().map(|v| format!("--a={}", format_value_set(v))));
                out.push(format!("--tolerance={}", r.tolerance));
                if let Some(p) = &r.output {
                    out.push(format!("--output={}", p.display()));
                }
            }
            RunRequest::Export(r) => {
                out.push("export".to_string());
                out.extend(spec(&r.spec));
                out.push(format!("--format={}", r.format));
                if let Some(p) = &r.output {
                    out.push(format!("--output={}", p.display()));
                }
            }
            RunRequest::Matrix(r) => {
                out.push("matrix".to_string());
                out.extend(spec(&r.spec));
                out.extend(weights(&r.weights));
                out.push(format!("--builder={}", r.builder));
                if r.dimer {
                    out.push("--dimer".to_string());
                }
            }
            RunRequest::Configs(r) => {
                out.push("configs".to_string());
                out.extend(spec(&r.spec));
                out.extend(weights(&r.weights));
                out.push(format!("--limit={}", r.limit));
            }
        }
        out
    }

    pub fn to_line(&self) -> String {
        self.to_args().join(" ")
    }
}

impl TryFrom<Cli> for RunRequest {
    type Error = CliError;

    fn try_from(cli: Cli) -> Result<Self, CliError> {
        Ok(match cli.command {
            Command::Compute {
                spec,
                weights,
                method,
                format,
                arithmetic,
                tolerance,
            } => {
                let spec = spec_of(&spec)?;
                let arithmetic: Arithmetic = arithmetic.parse()?;
                RunRequest::Compute(ComputeRequest {
                    weights: weights_of(&weights, &spec)?.with_arithmetic(arithmetic),
                    spec,
                    method: method.parse()?,
                    format: format.parse()?,
                    tolerance: tolerance_of(&tolerance)?,
                })
            }
            Command::Verify { suite, seed, log } => {
                let mut suites = Vec::new();
                for s in &suite {
                    let add: Vec<Suite> = if s.trim() == "all" {
                        Suite::ALL.to_vec()
                    } else {
                        vec![s.parse()?]
                    };
                    for s in add {
                        if !suites.contains(&s) {
                            suites.push(s);
                        }
                    }
                }
                RunRequest::Verify(VerifyRequest {
                    suites,
                    seed: seed.unwrap_or(DEFAULT_SEED),
                    log: log.map(PathBuf::from),
                })
            }
            Command::Sweep {
                spec,
                x,
                a,
                tolerance,
                output,
            } => {
                let spec = spec_of(&spec)?;
                let d = spec.dim();
                if a.len() > d {
                    return Err(CliError::Usage(format!(
                        "{} axis weight sets given for a {d}-dimensional grid",
                        a.len()
                    )));
                }
                let mut sets = a
                    .iter()
                    .map(|s| parse_value_set(s))
                    .collect::<Result<Vec<_>, _>>()?;
                sets.resize(d, vec![BigRational::one()]);
                let x = parse_value_set(&x)?;
                let points = sets
                    .iter()
                    .map(Vec::len)
                    .try_fold(x.len(), |acc, n| acc.checked_mul(n))
                    .filter(|&n| n <= MAX_SWEEP_POINTS);
                if points.is_none() {
                    return Err(CliError::Usage(format!(
                        "sweep grid exceeds {MAX_SWEEP_POINTS} points"
                    )));
                }
                RunRequest::Sweep(SweepRequest {
                    spec,
                    x,
                    a: sets,
                    tolerance: tolerance_of(&tolerance)?,
                    output: output.map(PathBuf::from),
                })
            }
            Command::Export {
                spec,
                format,
                output,
            } => RunRequest::Export(ExportRequest {
                spec: spec_of(&spec)?,
                format: format.parse()?,
                output: output.map(PathBuf::from),
            }),
            Command::Matrix {
                spec,
                weights,
                builder,
                dimer,
            } => {
                let spec = spec_of(&spec)?;
                RunRequest::Matrix(MatrixRequest {
                    weights: weights_of(&weights, &spec)?,
                    spec,
                    builder: builder.parse()?,
                    dimer,
                })
            }
            Command::Configs {
                spec,
                weights,
                limit,
            } => {
                let spec = spec_of(&spec)?;
                RunRequest::Configs(ConfigsRequest {
                    weights: weights_of(&weights, &spec)?,
                    spec,
                    limit,
                })
            }
        })
    }
}

impl ComputeRequest {
    /// Unit weights, every method, text output.
    pub fn unit(spec: GridSpec) -> Self {
        let d = spec.dim();
        ComputeRequest {
            spec,
            weights: WeightSpec::new(BigRational::one(), vec![BigRational::one(); d]),
            method: MethodSel::All,
            format: OutputFormat::Text,
            tolerance: FORMULA_TOLERANCE,
        }
    }
}

impl SweepRequest {
    /// Weight tuples of the grid in row order: x outermost, then a_1, …, a_d.
    pub fn points(&self) -> Vec<WeightSpec> {
        let mut out = Vec::new();
        let mut a = vec![BigRational::zero(); self.a.len()];
        for x in &self.x {
            self.fill(0, x, &mut a, &mut out);
        }
        out
    }

    fn fill(&self, i: usize, x: &BigRational, a: &mut Vec<BigRational>, out: &mut Vec<WeightSpec>) {
        if i == self.a.len() {
            out.push(WeightSpec::new(x.clone(), a.clone()));
            return;
        }
        for v in &self.a[i] {
            a[i] = v.clone();
            self.fill(i + 1, x, a, out);
        }
    }
}
