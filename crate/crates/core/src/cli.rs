//! The `fillcurve` command line.
//!
//! Exit codes: 0 when a result was produced (a singular verdict included),
//! 1 for unparsable input, 2 for violated preconditions, 3 for size guards
//! and scan budgets, 4 for internal failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binform::{BinForm, Guards};
use crate::construct::{construct_partner, symmetric_form, TraceJson};
use crate::curve::{build_curve, check_smoothness, verify_space_filling, ReportJson};
use crate::error::{Error, Result};
use crate::field::canonical_field;
use crate::orbits::{census, orbits, sample_stats, OrbitJson, SampleStats, CENSUS_SCHEMA_VERSION};
use crate::rng::mix;

#[derive(Debug, Parser)]
#[command(
    name = "fillcurve",
    version,
    about = "Smooth space-filling curves on P1 x P1 over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Base seed; task i uses mix(seed, i).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Lift the size guards on exhaustive operations.
    #[arg(long, global = true)]
    pub allow_large: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decide smoothness of C_{f,g}.
    Check {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Build a smooth partner g for f (odd q).
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        f: String,
    },
    /// Print a form f with C_{f,f} smooth.
    Symmetric {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        variant: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// SL2 orbits on G_q.
    Orbits {
        #[arg(long)]
        q: u64,
    },
    /// Orbit-reduced census of smooth pairs.
    Census {
        #[arg(long)]
        q: u64,
    },
    /// Count smooth curves among n random pairs.
    Sample {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
    },
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub guards: Guards,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> RunConfig {
        RunConfig {
            command: cli.command,
            seed: cli.common.seed,
            out: cli.common.out,
            format: cli.common.format,
            jobs: cli.common.jobs,
            guards: Guards::from_env(cli.common.allow_large),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub q: u64,
    pub f: Vec<String>,
    pub g: Vec<String>,
    pub space_filling: bool,
    pub f_has_rational_point: bool,
    pub g_has_rational_point: bool,
    pub report: ReportJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitsJson {
    pub schema_version: u32,
    pub q: u64,
    pub gq_size: usize,
    pub orbits: Vec<OrbitJson>,
}

fn parse_form(q: u64, s: &str) -> Result<BinForm> {
    let ctx = canonical_field(q)?;
    BinForm::parse(&ctx, s)
}

fn element_strings(f: &BinForm) -> Vec<String> {
    f.coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn cmd_check(q: u64, f: &str, g: &str, seed: u64) -> Result<CheckJson> {
    let f = parse_form(q, f)?;
    let g = parse_form(q, g)?;
    let curve = build_curve(&f, &g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0));
    let report = check_smoothness(&f, &g, &mut rng)?;
    Ok(CheckJson {
        q,
        f: element_strings(&f),
        g: element_strings(&g),
        space_filling: verify_space_filling(&curve),
        f_has_rational_point: false,
        g_has_rational_point: false,
        report: report.to_json(),
    })
}

pub fn cmd_construct(q: u64, f: &str, seed: u64) -> Result<TraceJson> {
    let f = parse_form(q, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0));
    let (g, trace) = construct_partner(&f, &mut rng)?;
    Ok(trace.to_json(&g))
}

pub fn cmd_symmetric(q: u64, variant: usize, index: usize) -> Result<String> {
    Ok(symmetric_form(q, variant, index)?.to_string())
}

pub fn cmd_orbits(q: u64, guards: &Guards) -> Result<OrbitsJson> {
    let t = orbits(q, guards)?;
    Ok(OrbitsJson {
        schema_version: CENSUS_SCHEMA_VERSION,
        q,
        gq_size: t.total,
        orbits: t
            .orbits
            .iter()
            .enumerate()
            .map(|(index, o)| OrbitJson {
                index,
                size: o.size,
                representative: element_strings(&o.representative),
                factor_type: o.factor_type(),
            })
            .collect(),
    })
}

pub fn cmd_census(
    q: u64,
    jobs: usize,
    seed: u64,
    guards: &Guards,
    format: Format,
) -> Result<String> {
    let c = census(q, jobs, seed, guards)?;
    match format {
        Format::Json => to_json_text(&c.to_json()),
        Format::Csv => {
            let mut buf = Vec::new();
            c.write_csv(&mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

pub fn cmd_sample(q: u64, n: u64, seed: u64, jobs: usize) -> Result<SampleStats> {
    sample_stats(q, n, seed, jobs)
}

fn to_json_text<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn json_only(format: Format) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::Parse(
            "csv output is only available for census".into(),
        )),
    }
}

/// Runs one command and returns its output text.
pub fn run(cfg: &RunConfig) -> Result<String> {
    match &cfg.command {
        Command::Check { q, f, g } => {
            json_only(cfg.format)?;
            to_json_text(&cmd_check(*q, f, g, cfg.seed)?)
        }
        Command::Construct { q, f } => {
            json_only(cfg.format)?;
            to_json_text(&cmd_construct(*q, f, cfg.seed)?)
        }
        Command::Symmetric { q, variant, index } => {
            json_only(cfg.format)?;
            Ok(format!("{}\n", cmd_symmetric(*q, *variant, *index)?))
        }
        Command::Orbits { q } => {
            json_only(cfg.format)?;
            to_json_text(&cmd_orbits(*q, &cfg.guards)?)
        }
        Command::Census { q } => cmd_census(*q, cfg.jobs, cfg.seed, &cfg.guards, cfg.format),
        Command::Sample { q, n } => {
            json_only(cfg.format)?;
            let s = cmd_sample(*q, *n, cfg.seed, cfg.jobs)?;
            if cfg.out.is_some() {
                to_json_text(&s)
            } else {
                Ok(format!("{}/{}\n", s.smooth, s.n))
            }
        }
    }
}

/// Parses `args`, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let cfg = RunConfig::from_cli(cli);
    let result = run(&cfg).and_then(|text| match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
