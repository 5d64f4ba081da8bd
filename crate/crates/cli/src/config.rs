//! JSON experiment configuration: parsing, canonical hashing, validation,
//! and resolution into library objects.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use surfmix::degree::{DegreeSequence, Gamma, Model};
use surfmix::gw::OffspringMethod;
use surfmix::prob::ProbVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Dcm,
    Ocm,
}

impl From<ModelName> for Model {
    fn from(name: ModelName) -> Model {
        match name {
            ModelName::Dcm => Model::Dcm,
            ModelName::Ocm => Model::Ocm,
        }
    }
}

/// Where the degree sequence comes from.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DegreeSpec {
    /// Every vertex gets out-degree (and, for the pairing model, in-degree) `d`.
    Regular { d: u32 },
    /// Degrees listed inline.
    Explicit {
        out: Vec<u32>,
        #[serde(rename = "in", default)]
        in_degrees: Option<Vec<u32>>,
    },
    /// A degree file previously written by `generate` or by hand.
    File { path: PathBuf },
}

/// Teleport-strength regime. The product `alpha * t_ent` controls which
/// mixing shape appears, so configs state the regime and the harness derives
/// `alpha` from the sequence's entropic time.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioKind {
    /// `alpha = c / (t_ent * ln t_ent)`: teleporting too weak to matter.
    GammaZero { c: f64 },
    /// `alpha = gamma / t_ent`: teleporting on the entropic scale.
    GammaFinite { gamma: f64 },
    /// Explicit constant `alpha`: teleporting dominates.
    GammaInfinite { alpha: f64 },
}

impl ScenarioKind {
    pub fn label(&self) -> String {
        match self {
            ScenarioKind::GammaZero { c } => format!("gamma_zero_c{c}"),
            ScenarioKind::GammaFinite { gamma } => format!("gamma_finite_{gamma}"),
            ScenarioKind::GammaInfinite { alpha } => format!("gamma_infinite_a{alpha}"),
        }
    }

    pub fn alpha(&self, t_ent: f64) -> Result<f64> {
        let alpha = match *self {
            ScenarioKind::GammaZero { c } => {
                ensure!(c > 0.0, "gamma_zero needs c > 0");
                ensure!(t_ent > 1.0, "gamma_zero needs t_ent > 1 so ln t_ent > 0");
                c / (t_ent * t_ent.ln())
            }
            ScenarioKind::GammaFinite { gamma } => {
                ensure!(gamma > 0.0, "gamma_finite needs gamma > 0");
                gamma / t_ent
            }
            ScenarioKind::GammaInfinite { alpha } => alpha,
        };
        ensure!(
            alpha > 0.0 && alpha < 1.0,
            "derived alpha {alpha} must lie in (0, 1)"
        );
        Ok(alpha)
    }

    pub fn gamma(&self) -> Gamma {
        match *self {
            ScenarioKind::GammaZero { .. } => Gamma::Zero,
            ScenarioKind::GammaFinite { gamma } => Gamma::Finite(gamma),
            ScenarioKind::GammaInfinite { .. } => Gamma::Infinite,
        }
    }

    /// Rescaled-time location of the profile's jump, if it has one.
    pub fn jump(&self) -> Option<f64> {
        match *self {
            ScenarioKind::GammaZero { .. } => Some(1.0),
            ScenarioKind::GammaFinite { gamma } => Some(gamma),
            ScenarioKind::GammaInfinite { .. } => None,
        }
    }

    /// Walk time for rescaled time `s`: multiples of the entropic time in
    /// the weak regime, multiples of `1/alpha` otherwise. Ties round up.
    pub fn walk_time(&self, s: f64, t_ent: f64, alpha: f64) -> u64 {
        let raw = match self {
            ScenarioKind::GammaZero { .. } => s * t_ent,
            _ => s / alpha,
        };
        raw.round() as u64
    }
}

/// A restart measure by name, point mass, in-profile, or file of weights.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Named(String),
    Dirac { dirac: u32 },
    File { file: PathBuf },
}

impl LambdaSpec {
    pub fn resolve(&self, seq: &DegreeSequence) -> Result<(ProbVector, String)> {
        let n = seq.n();
        match self {
            LambdaSpec::Named(name) => match name.as_str() {
                "uniform" => Ok((ProbVector::uniform(n), "uniform".into())),
                "mu_in" => Ok((seq.mu_in(), "mu_in".into())),
                other => bail!("unknown restart measure `{other}` (use uniform, mu_in, {{\"dirac\": z}}, or {{\"file\": path}})"),
            },
            LambdaSpec::Dirac { dirac } => {
                ensure!(
                    (*dirac as usize) < n,
                    "dirac vertex {dirac} out of range for n = {n}"
                );
                Ok((ProbVector::dirac(n, *dirac as usize), format!("dirac_{dirac}")))
            }
            LambdaSpec::File { file } => {
                let text = std::fs::read_to_string(file)
                    .with_context(|| format!("reading restart measure {}", file.display()))?;
                let weights: Vec<f64> = text
                    .split_whitespace()
                    .map(|w| w.parse::<f64>().map_err(anyhow::Error::from))
                    .collect::<Result<_>>()?;
                ensure!(
                    weights.len() == n,
                    "restart file has {} entries for n = {n}",
                    weights.len()
                );
                let label = file
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "file".into());
                Ok((ProbVector::new(weights)?, label))
            }
        }
    }
}

/// How many starting vertices to sample, or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(try_from = "StartSampleRaw")]
pub enum StartSample {
    All,
    Count(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StartSampleRaw {
    Count(usize),
    Text(String),
}

impl TryFrom<StartSampleRaw> for StartSample {
    type Error = String;

    fn try_from(raw: StartSampleRaw) -> Result<Self, String> {
        match raw {
            StartSampleRaw::Count(k) if k > 0 => Ok(StartSample::Count(k)),
            StartSampleRaw::Count(_) => Err("start_sample must be positive".into()),
            StartSampleRaw::Text(t) if t == "all" => Ok(StartSample::All),
            StartSampleRaw::Text(t) => Err(format!("start_sample must be a count or \"all\", got `{t}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    #[default]
    PerMark,
    Thinned,
}

impl From<MethodName> for OffspringMethod {
    fn from(name: MethodName) -> OffspringMethod {
        match name {
            MethodName::PerMark => OffspringMethod::PerMark,
            MethodName::Thinned => OffspringMethod::Thinned,
        }
    }
}

/// One recentred-moment job: a restart measure and the generations to test.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct L2Job {
    pub lambda: LambdaSpec,
    pub times: Vec<u32>,
}

/// Tree-likeness agreement job: how many graphs to sample and at what depth
/// to test the in-neighborhood.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingJob {
    pub t: u32,
    pub graphs: usize,
}

/// Branching-tree Monte Carlo grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MartingaleConfig {
    pub samples: usize,
    #[serde(default)]
    pub method: MethodName,
    /// Generations for the increment second-moment law.
    #[serde(default)]
    pub variance_times: Vec<u32>,
    /// Recentred second-moment jobs.
    #[serde(default)]
    pub l2: Vec<L2Job>,
    /// Depth at which to read off limit moments, if wanted.
    #[serde(default)]
    pub limit_depth: Option<u32>,
    #[serde(default)]
    pub coupling: Option<CouplingJob>,
}

/// Widespreadness thresholds for restart measures.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WidespreadThresholds {
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for WidespreadThresholds {
    fn default() -> Self {
        Self {
            delta: surfmix::degree::WIDESPREAD_DELTA,
            c1: surfmix::degree::WIDESPREAD_C1,
            c2: surfmix::degree::WIDESPREAD_C2,
        }
    }
}

/// One experiment description. Commands read the sections they need and
/// reject configs whose required sections are missing; unknown keys are
/// rejected everywhere so typos cannot silently change an experiment.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelName,
    pub degrees: DegreeSpec,
    /// Number of vertices; required with `regular` degrees.
    #[serde(default)]
    pub n: Option<usize>,
    /// Rejection-sample until the realized graph is simple (`generate`).
    #[serde(default)]
    pub simple: bool,
    #[serde(default)]
    pub max_attempts: Option<u32>,

    /// Explicit teleport probability, used when no scenario is given.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub scenario: Option<ScenarioKind>,
    /// Rescaled times for scenario sweeps.
    #[serde(default)]
    pub s_grid: Vec<f64>,
    /// Mixing thresholds for `scenario` and `profile`.
    #[serde(default)]
    pub epsilons: Vec<f64>,

    /// Explicit starting vertices; overrides `start_sample`.
    #[serde(default)]
    pub starts: Vec<u32>,
    #[serde(default)]
    pub start_sample: Option<StartSample>,
    #[serde(default)]
    pub lambda_set: Vec<LambdaSpec>,
    /// Walk times for `profile`, `widespread`, and `singularity`.
    #[serde(default)]
    pub times: Vec<u64>,
    /// Teleport probabilities for the stationary contrast in `widespread`.
    #[serde(default)]
    pub alphas: Vec<f64>,
    /// Entropic-time fraction for the in-profile push `h = ceil(eps * t_ent)`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub widespread: Option<WidespreadThresholds>,
    /// Tail tolerance for stationary series (default 1e-12).
    #[serde(default)]
    pub series_tol: Option<f64>,

    /// Exploration shape parameter in (0, 1/2) (`tree`).
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub t_max: Option<u32>,
    #[serde(default)]
    pub root: Option<u32>,
    /// Depth of the reverse neighborhood written by `tree` (defaults to t_max).
    #[serde(default)]
    pub neighborhood_depth: Option<u32>,

    #[serde(default)]
    pub martingale: Option<MartingaleConfig>,
}

impl Config {
    pub fn series_tol(&self) -> f64 {
        self.series_tol.unwrap_or(1e-12)
    }

    /// Builds the degree sequence, checking consistency with `model` and `n`.
    pub fn degree_sequence(&self) -> Result<DegreeSequence> {
        let model: Model = self.model.into();
        let seq = match &self.degrees {
            DegreeSpec::Regular { d } => {
                let n = self.n.context("regular degrees need `n`")?;
                DegreeSequence::regular(model, n, *d)?
            }
            DegreeSpec::Explicit { out, in_degrees } => {
                if let Some(n) = self.n {
                    ensure!(
                        out.len() == n,
                        "explicit degrees list {} vertices but n = {n}",
                        out.len()
                    );
                }
                DegreeSequence::new(model, out.clone(), in_degrees.clone())?
            }
            DegreeSpec::File { path } => {
                let file = File::open(path)
                    .with_context(|| format!("opening degree file {}", path.display()))?;
                let seq = DegreeSequence::from_reader(BufReader::new(file))?;
                ensure!(
                    seq.model() == model,
                    "degree file holds a {} sequence but the config says {}",
                    seq.model().as_str(),
                    model.as_str()
                );
                seq
            }
        };
        Ok(seq)
    }

    /// Teleport probability for non-scenario commands: the explicit `alpha`
    /// wins, otherwise a scenario section supplies its derived value.
    pub fn resolve_alpha(&self, t_ent: f64) -> Result<f64> {
        match (self.alpha, &self.scenario) {
            (Some(a), _) => {
                ensure!((0.0..1.0).contains(&a), "alpha {a} must lie in [0, 1)");
                Ok(a)
            }
            (None, Some(kind)) => kind.alpha(t_ent),
            (None, None) => bail!("provide `alpha` or a `scenario` section"),
        }
    }

    /// The restart measures to sweep; defaults to uniform alone.
    pub fn lambdas(&self, seq: &DegreeSequence) -> Result<Vec<(ProbVector, String)>> {
        if self.lambda_set.is_empty() {
            return Ok(vec![(ProbVector::uniform(seq.n()), "uniform".into())]);
        }
        self.lambda_set.iter().map(|s| s.resolve(seq)).collect()
    }
}

/// A parsed config plus the hash of its canonical JSON form (sorted keys,
/// minimal separators), so semantically identical files hash identically.
#[derive(Debug)]
pub struct LoadedConfig {
    pub config: Config,
    pub hash: String,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .with_context(|| format!("reading config {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let canonical = serde_json::to_string(&value).expect("re-serializing parsed JSON");
    let hash = hex(&Sha256::digest(canonical.as_bytes()));
    let config: Config = serde_json::from_value(value)
        .with_context(|| format!("interpreting {}", path.display()))?;
    Ok(LoadedConfig { config, hash })
}

fn hex(bytes: &[u8]) -> String {
    use std::fmt::Write;
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Validates strictly increasing walk-time grids.
pub fn require_times(times: &[u64]) -> Result<&[u64]> {
    ensure!(!times.is_empty(), "provide a non-empty `times` grid");
    ensure!(
        times.windows(2).all(|w| w[0] < w[1]),
        "`times` must be strictly increasing"
    );
    Ok(times)
}
