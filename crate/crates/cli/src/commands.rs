use rayon::prelude::*;
use serde::Serialize;

use riem_alpha::alpha::{
    alpha_certify, basin_sweep, constants, lemma_suite, AlphaCertificate, BasinReport, LemmaReport, Verdict,
};
use riem_alpha::newton::{newton_sequence, NewtonTrace};

use crate::config::{ConfigError, ExperimentConfig, Format};
use crate::output;

/// Rendered output plus the process exit code.
pub struct CommandOutput {
    pub text: String,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_FAILED: u8 = 2;
pub const EXIT_SINGULAR: u8 = 3;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn constants_cmd(format: Format) -> CommandOutput {
    let c = constants();
    let text = match format {
        Format::Json => json(c),
        Format::Csv => output::constants_csv(c),
        Format::Text => output::constants_text(c),
    };
    CommandOutput { text, code: EXIT_OK }
}

pub fn certify_cmd(cfg: &ExperimentConfig) -> Result<CommandOutput, ConfigError> {
    let problem = cfg.resolve()?;
    let starts = cfg.start_points(&problem)?;
    let certs: Vec<AlphaCertificate> = starts.par_iter().map(|z| alpha_certify(&problem, z, &cfg.gamma)).collect();
    let code = if certs.iter().any(|c| c.verdict == Verdict::SingularDerivative) {
        EXIT_SINGULAR
    } else if certs.iter().any(|c| c.verdict == Verdict::NotCertified) {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    let text = match cfg.output.format {
        Format::Json => json(&certs),
        Format::Csv => output::certificates_csv(&certs),
        Format::Text => output::certificates_text(problem.name(), &certs),
    };
    Ok(CommandOutput { text, code })
}

#[derive(Serialize)]
pub struct RunRecord {
    pub start: usize,
    pub trace: NewtonTrace,
}

pub fn run_cmd(cfg: &ExperimentConfig) -> Result<CommandOutput, ConfigError> {
    let problem = cfg.resolve()?;
    let starts = cfg.start_points(&problem)?;
    let opts = cfg.newton_options();
    let records: Vec<RunRecord> = starts
        .par_iter()
        .enumerate()
        .map(|(i, z0)| {
            let trace = newton_sequence(&problem, z0, &opts);
            // distances to the known zero the run ends nearest to
            let root = problem.nearest_zero(trace.last()).map(|(r, _)| r.clone());
            let trace = match root {
                Some(r) => trace.with_root(&r),
                None => trace,
            };
            RunRecord { start: i, trace }
        })
        .collect();
    let text = match cfg.output.format {
        Format::Json => json(&records),
        Format::Csv => output::traces_csv(&records),
        Format::Text => output::traces_text(problem.name(), &records),
    };
    Ok(CommandOutput { text, code: EXIT_OK })
}

pub fn basin_cmd(cfg: &ExperimentConfig) -> Result<CommandOutput, ConfigError> {
    let problem = cfg.resolve()?;
    let zeta = cfg.known_zero(&problem)?;
    let report: BasinReport = basin_sweep(&problem, &zeta, &cfg.gamma, &cfg.newton_options(), &cfg.basin)?;
    let code = if report.contract_holds { EXIT_OK } else { EXIT_FAILED };
    let text = match cfg.output.format {
        Format::Json => json(&report),
        Format::Csv => output::basin_csv(&report),
        Format::Text => output::basin_text(problem.name(), &report),
    };
    Ok(CommandOutput { text, code })
}

pub fn verify_cmd(cfg: &ExperimentConfig) -> Result<CommandOutput, ConfigError> {
    let problem = cfg.resolve()?;
    let center = match &cfg.lemmas.center {
        Some(c) => problem.manifold().project_point(c.clone())?,
        None => cfg.known_zero(&problem)?,
    };
    let report: LemmaReport = lemma_suite(&problem, &center, cfg.lemmas.samples, cfg.lemmas.seed, &cfg.gamma)?;
    let code = if report.all_hold { EXIT_OK } else { EXIT_FAILED };
    let text = match cfg.output.format {
        Format::Json => json(&report),
        Format::Csv => output::lemmas_csv(&report),
        Format::Text => output::lemmas_text(problem.name(), &report),
    };
    Ok(CommandOutput { text, code })
}

/// `d(z_k, root)` for the CSV column, empty when no zero is known.
pub(crate) fn dist_column(trace: &NewtonTrace, k: usize) -> Option<f64> {
    trace.distances_to_root.as_ref().map(|d| d[k])
}

