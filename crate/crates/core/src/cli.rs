//! The `hksym` command line: `verify`, `roots` and `eval`.
//!
//! Exit codes: 0 every check passed and every control failed, 1 some result
//! was unexpected, 2 configuration error, 3 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::context::SpaceContext;
use crate::error::{Error, Result};
use crate::fields::ops::{p_op, upsilon_star};
use crate::fields::params::{random_ad_k, HkParams};
use crate::pair::SpaceSpec;
use crate::restricted::rho_m;
use crate::verify::controls::DEFAULT_AMPLITUDE;
use crate::verify::{Campaign, TolOverrides};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hksym",
    version,
    about = "Hyperkähler structures on Hermitian symmetric pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification suites and report
    Verify(VerifyArgs),
    /// Print the positive restricted roots of a space
    Roots(RootsArgs),
    /// Print P, B and the differential of Upsilon at one point
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
        }
    }
}

#[derive(Args, Debug, Default)]
struct VerifyArgs {
    /// Space, e.g. su:2,2 or sp:3 (repeatable)
    #[arg(long = "space", allow_hyphen_values = true)]
    spaces: Vec<String>,
    /// Parameters a0,a1,a2,±1 (repeatable)
    #[arg(long = "params", allow_hyphen_values = true)]
    params: Vec<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Threshold for algebraic identities
    #[arg(long, allow_hyphen_values = true)]
    tol_alg: Option<f64>,
    /// Threshold for identities with a finite difference or quadrature
    #[arg(long, allow_hyphen_values = true)]
    tol_fd: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fault size for the negative controls (0 disables the faults)
    #[arg(long, allow_hyphen_values = true)]
    control_amplitude: Option<f64>,
    /// JSON file with the same fields as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RootsArgs {
    #[arg(long)]
    space: String,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    space: String,
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    /// Cartan coordinates x_1,...,x_r
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Seed of the random rotation applied to the Cartan point
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate at the Cartan point itself, without rotation
    #[arg(long)]
    cartan: bool,
}

/// Resolved settings of a `verify` run.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub spaces: Vec<SpaceSpec>,
    pub params: Vec<HkParams>,
    pub samples: usize,
    pub seed: u64,
    pub tol_alg: Option<f64>,
    pub tol_fd: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub control_amplitude: f64,
}

/// The JSON config file; every field is optional.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub spaces: Option<Vec<String>>,
    pub params: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol_alg: Option<f64>,
    pub tol_fd: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub control_amplitude: Option<f64>,
}

impl Config {
    fn from_args(a: VerifyArgs) -> Result<Self> {
        let file = match &a.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let spaces = if a.spaces.is_empty() {
            file.spaces.unwrap_or_default()
        } else {
            a.spaces
        };
        let params = if a.params.is_empty() {
            file.params.unwrap_or_default()
        } else {
            a.params
        };
        let cfg = Config {
            spaces: spaces.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            params: params.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            samples: a.samples.or(file.samples).unwrap_or(100),
            seed: a.seed.or(file.seed).unwrap_or(0),
            tol_alg: a.tol_alg.or(file.tol_alg),
            tol_fd: a.tol_fd.or(file.tol_fd),
            format: a.format.or(file.format).unwrap_or_default(),
            out: a.out.or(file.out),
            control_amplitude: a
                .control_amplitude
                .or(file.control_amplitude)
                .unwrap_or(DEFAULT_AMPLITUDE),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.spaces.is_empty() {
            return Err(Error::Config("at least one --space is required".into()));
        }
        for (name, t) in [("--tol-alg", self.tol_alg), ("--tol-fd", self.tol_fd)] {
            if let Some(v) = t {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Config(format!("{name} must be a positive number")));
                }
            }
        }
        if !(self.control_amplitude.is_finite() && self.control_amplitude >= 0.0) {
            return Err(Error::Config("--control-amplitude must be a nonnegative number".into()));
        }
        self.campaign().validate()
    }

    /// Parses the arguments of `hksym verify` (without the program name and subcommand).
    pub fn parse(args: &[String]) -> Result<Self> {
        let argv = ["hksym", "verify"]
            .into_iter()
            .map(String::from)
            .chain(args.iter().cloned());
        let cli = Cli::try_parse_from(argv).map_err(|e| Error::Config(e.to_string()))?;
        match cli.command {
            Command::Verify(a) => Self::from_args(a),
            _ => unreachable!("verify subcommand was given"),
        }
    }

    /// The flag form of this config; `parse(render(c)) == c`.
    pub fn render(&self) -> Vec<String> {
        let mut v = Vec::new();
        for s in &self.spaces {
            v.push(format!("--space={s}"));
        }
        for p in &self.params {
            v.push(format!("--params={p}"));
        }
        v.push(format!("--samples={}", self.samples));
        v.push(format!("--seed={}", self.seed));
        if let Some(t) = self.tol_alg {
            v.push(format!("--tol-alg={t:e}"));
        }
        if let Some(t) = self.tol_fd {
            v.push(format!("--tol-fd={t:e}"));
        }
        v.push(format!("--format={}", self.format.as_str()));
        if let Some(o) = &self.out {
            v.push(format!("--out={}", o.display()));
        }
        v.push(format!("--control-amplitude={:e}", self.control_amplitude));
        v
    }

    pub fn campaign(&self) -> Campaign {
        let mut c = Campaign::new(self.spaces.clone(), self.params.clone());
        c.seed = self.seed;
        c.samples = self.samples;
        c.tol = TolOverrides {
            alg: self.tol_alg,
            fd: self.tol_fd,
        };
        c.control_amplitude = self.control_amplitude;
        c
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Config(_) | Error::Params(_) | Error::InvalidSpace { .. } | Error::OutsideDomain(_) => EXIT_CONFIG,
        _ => EXIT_FAILED,
    }
}

/// Entry point with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a, out),
        Command::Roots(a) => roots(a, out),
        Command::Eval(a) => eval(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "hksym: {e}");
            exit_for(&e)
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = Config::from_args(a)?;
    let report = cfg.campaign().run()?;
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => report.render_text(),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(if report.all_expected() { EXIT_OK } else { EXIT_FAILED })
}

fn roots(a: RootsArgs, out: &mut dyn Write) -> Result<i32> {
    let spec: SpaceSpec = a.space.parse()?;
    let ctx = SpaceContext::build(spec)?;
    let rrs = &ctx.rrs;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "space {spec}  rank {}  type {}{}",
        ctx.rank(),
        rrs.root_type,
        ctx.rank()
    );
    let _ = writeln!(s, "{:<16} {:>5} {:<16} {:<16}", "root", "mult", "I-partner", "rho_m");
    for r in &rrs.roots {
        let partner = r
            .partner
            .map(|i| rrs.roots[i].root.to_string())
            .unwrap_or_else(|| "0".into());
        let _ = writeln!(
            s,
            "{:<16} {:>5} {:<16} {:<16}",
            r.root.to_string(),
            r.multiplicity(),
            partner,
            rho_m(&r.root).to_string()
        );
    }
    let _ = writeln!(s, "dim k^a = {}", rrs.k_zero.len());
    out.write_all(s.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

fn write_matrix(s: &mut String, name: &str, m: &DMatrix<f64>) {
    let _ = writeln!(s, "{name} ({}x{}):", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:>11.6}", m[(i, j)])).collect();
        let _ = writeln!(s, "  {}", row.join(" "));
    }
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let spec: SpaceSpec = a.space.parse()?;
    let params: HkParams = a.params.parse()?;
    params.check(spec.expected_type())?;
    let x: Vec<f64> =
        a.x.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("--x: `{t}` is not a number")))
            })
            .collect::<Result<_>>()?;
    if x.len() != spec.rank() {
        return Err(Error::Config(format!(
            "--x needs {} coordinates for {spec}",
            spec.rank()
        )));
    }
    if !params.contains(&x) {
        return Err(Error::OutsideDomain(format!(
            "x = {x:?} is outside the domain (x_j^2 must exceed {})",
            params.a_dagger()
        )));
    }
    let ctx = SpaceContext::build(spec)?;
    let base = ctx.sos.combine(&x);
    let w = if a.cartan {
        base
    } else {
        random_ad_k(&ctx.pair, &mut ChaCha8Rng::seed_from_u64(a.seed), 1.0) * base
    };
    let ops = p_op(&ctx.pair, &params, &w)?;
    let u = match ops.upsilon_star.clone() {
        Some(u) => u,
        None => upsilon_star(&ctx.pair, &w)?,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "space {spec}  params {params}  x = {x:?}  seed {}  rotated {}",
        a.seed, !a.cartan
    );
    let _ = writeln!(s, "matrices in an orthonormal basis of m");
    write_matrix(&mut s, "R = Re P", &ops.r);
    write_matrix(&mut s, "S = Im P", &ops.s);
    write_matrix(&mut s, "B", &ops.b);
    write_matrix(&mut s, "Upsilon_*", &u);
    out.write_all(s.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn defaults_and_round_trip() {
        let c = Config::parse(&args(&["--space", "su:1,1", "--params", "-0.5,0.4,0,+1"])).unwrap();
        assert_eq!(c.samples, 100);
        assert_eq!(c.seed, 0);
        assert_eq!(c.format, Format::Text);
        assert_eq!(Config::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn bc_space_rejects_a1() {
        let e = Config::parse(&args(&["--space", "su:1,2", "--params", "1,0.1,0,+1"])).unwrap_err();
        assert!(e.to_string().contains("a1 = a2 = 0"), "{e}");
    }

    #[test]
    fn missing_space_is_config_error() {
        assert!(matches!(Config::parse(&[]), Err(Error::Config(_))));
    }
}
