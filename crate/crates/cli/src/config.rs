//! Command-line arguments and the resolved run configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypflow_core::flat_trace::{PeriodConvention, WeightConvention};
use hypflow_core::{Complex64, Error, Result, TruncationParams};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "hypflow", version, about = "Koopman spectra of the geodesic flow on SU(1,1) quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Jacobi functions by quadrature and by binomial series
    MatrixElement,
    /// Resonances, residue amplitudes and rank-1 ratios
    Resonances,
    /// Correlation time series, direct against spectral
    Correlation,
    /// Flat-trace atoms and period tables
    FlatTrace,
    /// Forward/inverse transform round trip with Plancherel check
    Transform,
    /// Invariant suites and the discrepancy report
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MatrixElement => "matrix-element",
            Command::Resonances => "resonances",
            Command::Correlation => "correlation",
            Command::FlatTrace => "flat-trace",
            Command::Transform => "transform",
            Command::Verify => "verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    Theorem1,
    Determinant,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodArg {
    Statement,
    Proof,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Representation parameter, e.g. `-0.5+1i`, `-0.3`, `2`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Principal series `l = -1/2 + ir` (overrides --l)
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Parity of the weights, 0 or 0.5
    #[arg(long, global = true, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Row weights: `a`, `a,b,c` or `a:b`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Column weights: `a`, `a,b,c` or `a:b`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub n: Option<String>,
    /// τ values (matrix-element) or τ_max (transform): `x`, `x,y` or `start:stop:step`
    #[arg(long, global = true)]
    pub tau: Option<String>,
    /// Time grid for correlations: `x,y,...` or `start:stop:step`
    #[arg(long = "t-grid", global = true)]
    pub t_grid: Option<String>,
    /// Resonance depth J
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Fourier cutoff K
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    #[arg(long = "quad-points", global = true)]
    pub quad_points: Option<usize>,
    /// CSV with header `T_sharp,multiplicity`
    #[arg(long = "spectrum-file", global = true)]
    pub spectrum_file: Option<PathBuf>,
    /// CSV with header `r`
    #[arg(long = "r-file", global = true)]
    pub r_file: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "theorem1")]
    pub convention: ConventionArg,
    #[arg(long = "period-convention", value_enum, global = true, default_value = "statement")]
    pub period_convention: PeriodArg,
    /// Repetitions n per geodesic in flat-trace
    #[arg(long = "n-max", global = true, default_value_t = 5)]
    pub n_max: u32,
    /// Upper end of the r-grid in transform
    #[arg(long = "r-max", global = true, default_value_t = 12.0)]
    pub r_max: f64,
    /// Number of r nodes in transform
    #[arg(long = "r-nodes", global = true, default_value_t = 600)]
    pub r_nodes: usize,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cross-check results and fail with exit 1 on accuracy problems
    #[arg(long, global = true)]
    pub verify: bool,
}

/// Everything a command needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub l: Complex64,
    pub epsilon: f64,
    pub ms: Vec<i32>,
    pub ns: Vec<i32>,
    pub taus: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub params: TruncationParams,
    pub spectrum_file: Option<PathBuf>,
    pub r_file: Option<PathBuf>,
    pub convention: WeightConvention,
    pub period_convention: PeriodConvention,
    pub n_max: u32,
    pub r_max: f64,
    pub r_nodes: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub verify: bool,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// `a`, `a+bi`, `a-bi`, `bi`, `i`; spaces ignored.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad("empty complex number"));
    }
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad(format!("cannot parse '{s}' as a complex number")));
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let body = body.strip_suffix('*').unwrap_or(body);
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => num(x),
        }
    };
    match split {
        Some(i) => Ok(Complex64::new(num(&body[..i])?, imag(&body[i..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `a`, `a,b,c`, or the inclusive range `a:b`.
pub fn parse_int_list(s: &str) -> Result<Vec<i32>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once(':') {
        let a: i32 = a.trim().parse().map_err(|_| bad(format!("bad range '{s}'")))?;
        let b: i32 = b.trim().parse().map_err(|_| bad(format!("bad range '{s}'")))?;
        if b < a {
            return Err(bad(format!("empty range '{s}'")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i32>().map_err(|_| bad(format!("bad integer '{x}'"))))
        .collect()
}

/// `x`, `x,y,...`, or `start:stop:step` (stop included up to rounding).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad(format!("bad number '{x}'")));
    let v = match parts.len() {
        1 => s.split(',').map(num).collect::<Result<Vec<f64>>>()?,
        3 => {
            let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(h > 0.0) || b < a {
                return Err(bad(format!("bad grid '{s}'")));
            }
            let k = ((b - a) / h + 1e-9).floor() as usize;
            (0..=k).map(|i| a + h * i as f64).collect()
        }
        _ => return Err(bad(format!("bad grid '{s}'"))),
    };
    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return Err(bad(format!("grid '{s}' is empty or not finite")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let c = &cli.common;
        let l = match (c.r, &c.l) {
            (Some(r), _) => Complex64::new(-0.5, r),
            (None, Some(s)) => parse_complex(s)?,
            (None, None) => Complex64::new(-0.5, 1.0),
        };
        if c.epsilon != 0.0 && c.epsilon != 0.5 {
            return Err(bad(format!("epsilon must be 0 or 0.5, got {}", c.epsilon)));
        }
        let (dm, dn, dt): (Vec<i32>, Vec<i32>, Vec<f64>) = match cli.command {
            Command::Transform => (vec![0], vec![0], vec![3.0]),
            Command::Correlation => (vec![0], vec![0], vec![]),
            _ => ((-2..=2).collect(), (-2..=2).collect(), vec![0.25, 0.5, 1.0, 2.0, 4.0]),
        };
        let ms = c.m.as_deref().map(parse_int_list).transpose()?.unwrap_or(dm);
        let ns = c.n.as_deref().map(parse_int_list).transpose()?.unwrap_or(dn);
        let taus = c.tau.as_deref().map(parse_grid).transpose()?.unwrap_or(dt);
        let t_grid = c.t_grid.as_deref().map(parse_grid).transpose()?.unwrap_or_else(|| parse_grid("0:6:0.5").unwrap());
        if taus.iter().any(|t| *t < 0.0) || t_grid.iter().any(|t| *t < 0.0) {
            return Err(bad("time grids must be nonnegative"));
        }
        let mut params = TruncationParams::default();
        if let Some(j) = c.depth {
            params.resonance_depth = j;
        }
        if let Some(k) = c.cutoff {
            params.fourier_cutoff = k;
        }
        if let Some(q) = c.quad_points {
            params.quad_points = q;
        }
        params.validate()?;
        if !(c.r_max > 0.0 && c.r_max.is_finite()) || c.r_nodes < 3 {
            return Err(bad("r grid needs r-max > 0 and at least 3 nodes"));
        }
        let format = c.format.unwrap_or(match cli.command {
            Command::MatrixElement | Command::Correlation => Format::Csv,
            _ => Format::Json,
        });
        Ok(RunConfig {
            command: cli.command,
            l,
            epsilon: c.epsilon,
            ms,
            ns,
            taus,
            t_grid,
            params,
            spectrum_file: c.spectrum_file.clone(),
            r_file: c.r_file.clone(),
            convention: match c.convention {
                ConventionArg::Theorem1 => WeightConvention::Theorem1,
                ConventionArg::Determinant => WeightConvention::Determinant,
            },
            period_convention: match c.period_convention {
                PeriodArg::Statement => PeriodConvention::Statement,
                PeriodArg::Proof => PeriodConvention::Proof,
            },
            n_max: c.n_max,
            r_max: c.r_max,
            r_nodes: c.r_nodes,
            format,
            out: c.out.clone(),
            verify: c.verify,
        })
    }
}
