//! Experiment configuration: a JSON file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use riem_alpha::alpha::BasinOptions;
use riem_alpha::calculus::GammaOptions;
use riem_alpha::manifold::{exp_map, random_tangent_of_norm, seeded_rng};
use riem_alpha::newton::NewtonOptions;
use riem_alpha::problems::{from_id, Problem};
use riem_alpha::Point;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] riem_alpha::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Random starts at a fixed distance from a known zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampler {
    pub count: usize,
    pub radius: f64,
    #[serde(default)]
    pub seed: u64,
    /// Index into the problem's known zeros.
    #[serde(default)]
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Starts {
    Points(Vec<Vec<f64>>),
    Sampler { sampler: Sampler },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IterationConfig {
    pub max_iter: usize,
    pub stop_tol: f64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        let d = NewtonOptions::default();
        IterationConfig {
            max_iter: d.max_iter,
            stop_tol: d.stop_tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaConfig {
    pub samples: usize,
    pub seed: u64,
    /// Center of the sampled ball; a known zero when absent.
    pub center: Option<Vec<f64>>,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig {
            samples: 200,
            seed: 0,
            center: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    /// Optional check that the problem lives on this manifold.
    #[serde(default)]
    pub manifold: Option<String>,
    #[serde(default)]
    pub starts: Option<Starts>,
    /// Known zero used by `basin` and as the default lemma center.
    #[serde(default)]
    pub zero: usize,
    #[serde(default)]
    pub gamma: GammaOptions,
    #[serde(default)]
    pub iteration: IterationConfig,
    #[serde(default)]
    pub basin: BasinOptions,
    #[serde(default)]
    pub lemmas: LemmaConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn for_problem(problem: &str) -> Self {
        ExperimentConfig {
            problem: problem.to_string(),
            manifold: None,
            starts: None,
            zero: 0,
            gamma: GammaOptions::default(),
            iteration: IterationConfig::default(),
            basin: BasinOptions::default(),
            lemmas: LemmaConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn newton_options(&self) -> NewtonOptions {
        NewtonOptions {
            max_iter: self.iteration.max_iter,
            stop_tol: self.iteration.stop_tol,
        }
    }

    /// Checks the invariants and resolves the problem.
    pub fn resolve(&self) -> Result<Problem, ConfigError> {
        let problem = from_id(&self.problem)?;
        if let Some(m) = &self.manifold {
            let declared: riem_alpha::Manifold = m.parse()?;
            if declared != problem.manifold() {
                return Err(ConfigError::Invalid(format!(
                    "problem `{}` lives on {}, not {declared}",
                    self.problem,
                    problem.manifold()
                )));
            }
        }
        if let Some(Starts::Sampler { sampler }) = &self.starts {
            if !(sampler.radius > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "sampler radius must be positive, got {}",
                    sampler.radius
                )));
            }
        }
        if !(self.iteration.stop_tol >= 0.0) {
            return Err(ConfigError::Invalid("stop_tol must be nonnegative".into()));
        }
        if self.basin.distances.iter().any(|d| !(*d >= 0.0)) {
            return Err(ConfigError::Invalid("basin distances must be nonnegative".into()));
        }
        Ok(problem)
    }

    pub fn known_zero(&self, problem: &Problem) -> Result<Point, ConfigError> {
        problem
            .known_zeros()
            .get(self.zero)
            .cloned()
            .ok_or(ConfigError::Core(riem_alpha::Error::MissingRoot))
    }

    /// Explicit points, sampled points, or by default eight starts at distance
    /// 0.05 from the first known zero (the manifold's base point if none is known).
    pub fn start_points(&self, problem: &Problem) -> Result<Vec<Point>, ConfigError> {
        let m = problem.manifold();
        match &self.starts {
            // approximate coordinates are projected; the output echoes the result
            Some(Starts::Points(points)) => points
                .iter()
                .map(|p| m.project_point(p.clone()).map_err(ConfigError::from))
                .collect(),
            Some(Starts::Sampler { sampler }) => {
                let zeta = problem
                    .known_zeros()
                    .get(sampler.zero)
                    .ok_or(riem_alpha::Error::MissingRoot)?;
                let mut rng = seeded_rng(sampler.seed);
                Ok((0..sampler.count)
                    .map(|_| exp_map(zeta, &random_tangent_of_norm(zeta, sampler.radius, &mut rng)))
                    .collect())
            }
            None => match problem.known_zeros().first() {
                Some(zeta) => {
                    let mut rng = seeded_rng(0);
                    Ok((0..8)
                        .map(|_| exp_map(zeta, &random_tangent_of_norm(zeta, 0.05, &mut rng)))
                        .collect())
                }
                None => Ok(vec![m.base_point()]),
            },
        }
    }
}
