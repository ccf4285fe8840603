//! Command-line harness for `riem-alpha`: constants, certification, Newton runs,
//! basin sweeps and the lemma suite, with text, JSON or CSV output.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{CommandOutput, EXIT_CONFIG};
use crate::config::{ConfigError, ExperimentConfig, Format, Starts};

#[derive(Debug, Parser)]
#[command(name = "riem-alpha", version, about = "Newton's method and alpha-theory on Riemannian manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the theory constants and the residuals of their defining identities.
    Constants {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Alpha-test every start point.
    Certify(Common),
    /// Run Newton from every start point.
    Run(Common),
    /// Compare the empirical quadratic basin with the theoretical radius.
    Basin(Common),
    /// Check the lemma inequalities on random samples.
    Verify(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Experiment config (JSON); flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Problem id such as `quad1d` or `eigen:diag(1,2,3)`.
    #[arg(long)]
    pub problem: Option<String>,
    /// Start point as comma-separated coordinates; repeatable.
    #[arg(long = "point", value_name = "X1,X2,...", allow_hyphen_values = true)]
    pub points: Vec<String>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for every random choice (directions, samplers, sweeps).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Highest derivative order in the gamma estimate.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Number of random directions in the gamma estimate.
    #[arg(long)]
    pub dirs: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Stop once the Newton step is shorter than this.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Lemma samples (`verify`) or samples per shell (`basin`).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Index of the known zero used by `basin` and `verify`.
    #[arg(long)]
    pub zero: Option<usize>,
}

fn parse_point(s: &str) -> Result<Vec<f64>, ConfigError> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError::Invalid(format!("bad coordinate `{t}` in `{s}`")))
        })
        .collect()
}

impl Common {
    /// Config file (if any) with the flags applied on top.
    pub fn config(&self, command: &str) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = match (&self.config, &self.problem) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(p)) => ExperimentConfig::for_problem(p),
            (None, None) => return Err(ConfigError::Invalid("either --config or --problem is required".into())),
        };
        if let Some(p) = &self.problem {
            cfg.problem = p.clone();
        }
        if !self.points.is_empty() {
            let pts = self.points.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
            cfg.starts = Some(Starts::Points(pts));
        }
        if self.json {
            cfg.output.format = Format::Json;
        }
        if self.csv {
            cfg.output.format = Format::Csv;
        }
        if let Some(out) = &self.out {
            cfg.output.path = Some(out.clone());
        }
        if let Some(seed) = self.seed {
            cfg.gamma.seed = seed;
            cfg.basin.seed = seed;
            cfg.lemmas.seed = seed;
            if let Some(Starts::Sampler { sampler }) = &mut cfg.starts {
                sampler.seed = seed;
            }
        }
        if let Some(k) = self.kmax {
            cfg.gamma.k_max = k;
        }
        if let Some(d) = self.dirs {
            cfg.gamma.n_dirs = d;
        }
        if let Some(m) = self.max_iter {
            cfg.iteration.max_iter = m;
        }
        if let Some(t) = self.tol {
            cfg.iteration.stop_tol = t;
        }
        if let Some(z) = self.zero {
            cfg.zero = z;
        }
        if let Some(n) = self.samples {
            match command {
                "basin" => cfg.basin.samples_per_shell = n,
                _ => cfg.lemmas.samples = n,
            }
        }
        Ok(cfg)
    }
}

fn format_of(json: bool, csv: bool) -> Format {
    if json {
        Format::Json
    } else if csv {
        Format::Csv
    } else {
        Format::Text
    }
}

/// Runs a parsed command; returns the rendered output, its destination and the
/// exit code.
pub fn execute(cli: &Cli) -> (Result<CommandOutput, ConfigError>, Option<PathBuf>) {
    match &cli.command {
        Command::Constants { json, csv, out } => (Ok(commands::constants_cmd(format_of(*json, *csv))), out.clone()),
        Command::Certify(c) => with_config(c, "certify", commands::certify_cmd),
        Command::Run(c) => with_config(c, "run", commands::run_cmd),
        Command::Basin(c) => with_config(c, "basin", commands::basin_cmd),
        Command::Verify(c) => with_config(c, "verify", commands::verify_cmd),
    }
}

fn with_config(
    common: &Common,
    name: &str,
    f: fn(&ExperimentConfig) -> Result<CommandOutput, ConfigError>,
) -> (Result<CommandOutput, ConfigError>, Option<PathBuf>) {
    match common.config(name) {
        Ok(cfg) => {
            let path = cfg.output.path.clone();
            (f(&cfg), path)
        }
        Err(e) => (Err(e), None),
    }
}

/// Exit code for a failed command.
pub fn error_code(_e: &ConfigError) -> u8 {
    EXIT_CONFIG
}
