//! JSON run configuration and its conversion into library types.
//!
//! Angles are rational multiples of pi (`"gamma": {"num": 2, "den": 9}`
//! means `2 pi / 9`), so the helix closure condition `gamma L / 2 pi` is
//! an exact integer check on the rational.

use scarlab::entanglement::Fraction;
use scarlab::models::{ModelSpec, PerturbationSpec, SplittingSpec};
use scarlab::{Error as LibError, LocalOperator};
use std::collections::BTreeMap;

/// Exit classification for the process.
#[derive(Debug)]
pub enum CliError {
    /// Bad config or input file (exit 2).
    Schema(String),
    /// A requested verification missed its tolerance (exit 1).
    Tolerance(String),
    /// A resource cap was exceeded (exit 3).
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Tolerance(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Tolerance(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::DenseCapExceeded { .. } => CliError::Resource(e.to_string()),
            LibError::VerificationFailed(_) | LibError::TooFewLevels { .. } => {
                CliError::Tolerance(e.to_string())
            }
            other => CliError::Schema(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Rational multiple of pi.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct PiRational {
    pub num: i64,
    pub den: i64,
}

impl PiRational {
    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// Exact check that `gamma L / 2 pi = num L / (2 den)` is an integer.
    pub fn winding_is_integer(&self, l: usize) -> bool {
        self.den != 0 && (self.num * l as i64) % (2 * self.den) == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelPreset {
    /// Generic XXC chain built from the label partition.
    Xxc,
    /// Spinful-fermion realization (N = 4); the bond operator carries the
    /// intrinsic n = 2 perturbation block.
    Fermionic,
    /// U(1) clock model with M = n levels.
    Clock,
}

impl Default for ModelPreset {
    fn default() -> Self {
        Self::Xxc
    }
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    #[serde(default)]
    pub a: Vec<u8>,
    #[serde(default)]
    pub b: Vec<u8>,
    #[serde(default)]
    pub twists: BTreeMap<u8, i8>,
    pub gamma: Option<PiRational>,
    pub length: usize,
    #[serde(default)]
    pub preset: ModelPreset,
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomTerm {
    pub site: usize,
    pub operator: serde_json::Value,
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub kind: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub terms: Vec<CustomTerm>,
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyScalingConfig {
    pub fractions: String,
    #[serde(default)]
    pub lengths: Vec<usize>,
    pub lmax: Option<usize>,
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub perturbation: Option<PerturbationConfig>,
    pub splitting: Option<SplittingSpec>,
    pub analysis: Vec<String>,
    pub output_dir: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub dense_cap: Option<usize>,
    pub entropy_scaling: Option<EntropyScalingConfig>,
    /// Also write the tower amplitudes as `tower.bin` (little-endian
    /// `(re, im)` f64 pairs).
    #[serde(default)]
    pub dump_amplitudes: bool,
}

fn default_seed() -> u64 {
    42
}

/// The canonical stage order; dependencies run first regardless of the
/// order requested.
pub const STAGE_ORDER: [&str; 9] = [
    "verify_tl",
    "verify_scars",
    "fragmentation",
    "spectrum",
    "levelstats",
    "entanglement_scatter",
    "entropy_scaling",
    "solve_annihilators",
    "supplementary_suite",
];

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Schema(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> CliResult<()> {
        for stage in &self.analysis {
            if !STAGE_ORDER.contains(&stage.as_str()) {
                return Err(CliError::Schema(format!("unknown analysis stage '{stage}'")));
            }
        }
        if self.analysis.is_empty() {
            return Err(CliError::Schema("no analysis stages requested".into()));
        }
        let spectral_stages = ["fragmentation", "spectrum", "levelstats", "entanglement_scatter"];
        if self.model.preset == ModelPreset::Clock
            && self
                .analysis
                .iter()
                .any(|s| spectral_stages.contains(&s.as_str()) || s == "verify_tl")
        {
            return Err(CliError::Schema(
                "the clock preset supports verify_scars, entropy_scaling, solve_annihilators, supplementary_suite only".into(),
            ));
        }
        if self.model.preset != ModelPreset::Clock {
            let gamma = self
                .model
                .gamma
                .ok_or_else(|| CliError::Schema("model.gamma is required".into()))?;
            if gamma.den == 0 {
                return Err(CliError::Schema("gamma denominator is zero".into()));
            }
            if self.analysis.iter().any(|s| s == "verify_scars")
                && !gamma.winding_is_integer(self.model.length)
            {
                return Err(CliError::Schema(format!(
                    "verify_scars needs gamma L / 2 pi integer; got {} L / (2 * {})",
                    gamma.num, gamma.den
                )));
            }
        }
        Ok(())
    }

    /// Stages to execute in canonical order, with dependencies inserted.
    pub fn stage_plan(&self) -> Vec<&'static str> {
        let mut wanted: Vec<&str> = self.analysis.iter().map(String::as_str).collect();
        if wanted.iter().any(|&s| s == "levelstats" || s == "entanglement_scatter") {
            wanted.push("spectrum");
        }
        if wanted.iter().any(|&s| s == "spectrum") {
            wanted.push("fragmentation");
        }
        if wanted.iter().any(|&s| s == "entanglement_scatter") {
            wanted.push("verify_scars");
        }
        STAGE_ORDER
            .iter()
            .copied()
            .filter(|s| wanted.contains(s))
            .collect()
    }

    pub fn dense_cap(&self) -> usize {
        if let Ok(text) = std::env::var("SCARLAB_DENSE_CAP") {
            if let Ok(cap) = text.parse() {
                return cap;
            }
        }
        self.dense_cap.unwrap_or(scarlab::DEFAULT_DENSE_CAP)
    }

    pub fn model_spec(&self) -> CliResult<ModelSpec> {
        let m = &self.model;
        let gamma = m
            .gamma
            .ok_or_else(|| CliError::Schema("model.gamma is required".into()))?
            .radians();
        match m.preset {
            ModelPreset::Fermionic => {
                if m.n != 4 {
                    return Err(CliError::Schema("fermionic preset needs n = 4".into()));
                }
                Ok(scarlab::models::fermionic_spec(gamma, m.length))
            }
            ModelPreset::Clock => Err(CliError::Schema(
                "the clock preset has no XXC label partition".into(),
            )),
            ModelPreset::Xxc => {
                let (a, b) = if m.a.is_empty() && m.b.is_empty() {
                    ((1..=1u8).collect(), (2..=m.n as u8).collect())
                } else {
                    (m.a.clone(), m.b.clone())
                };
                ModelSpec::new(m.n, a, b, m.twists.clone(), gamma, m.length)
                    .map_err(|e| CliError::Schema(e.to_string()))
            }
        }
    }

    pub fn perturbation_spec(&self) -> CliResult<Option<PerturbationSpec>> {
        let Some(p) = &self.perturbation else {
            return Ok(None);
        };
        match p.kind.as_str() {
            "random_sx_neighbor" => Ok(Some(PerturbationSpec::random_sx_neighbor(
                p.seed.unwrap_or(self.seed),
                self.model.length,
            ))),
            "custom" => {
                let mut terms = Vec::new();
                for t in &p.terms {
                    let op = LocalOperator::from_json(&t.operator)
                        .map_err(|e| CliError::Schema(e.to_string()))?;
                    terms.push((t.site, op));
                }
                Ok(Some(PerturbationSpec::custom(terms)))
            }
            other => Err(CliError::Schema(format!("unknown perturbation kind '{other}'"))),
        }
    }

    /// Per-label weights of the `S^z`-like observable for eigenstates.csv.
    pub fn sz_weights(&self) -> Vec<f64> {
        match (self.model.preset, self.model.n) {
            (ModelPreset::Fermionic, _) => vec![0.0, 0.5, -0.5, 0.0],
            (_, 2) => vec![0.5, -0.5],
            (_, 3) => vec![0.0, 1.0, -1.0],
            (_, n) => (0..n).map(|c| c as f64).collect(),
        }
    }

    pub fn entropy_scaling_params(&self) -> CliResult<([Fraction; 3], Vec<usize>)> {
        let (fractions_text, lengths, lmax) = match &self.entropy_scaling {
            Some(cfg) => (
                cfg.fractions.clone(),
                cfg.lengths.clone(),
                cfg.lmax,
            ),
            None => ("1/3,1/3,1/3".to_string(), Vec::new(), None),
        };
        let fractions = scarlab::entanglement::parse_fractions(&fractions_text)
            .map_err(|e| CliError::Schema(e.to_string()))?;
        let lengths = if lengths.is_empty() {
            default_scaling_lengths(lmax.unwrap_or(3072))
        } else {
            lengths
        };
        Ok((fractions, lengths))
    }
}

/// Doublings of 12 up to `lmax`.
pub fn default_scaling_lengths(lmax: usize) -> Vec<usize> {
    let mut lengths = Vec::new();
    let mut l = 12usize;
    while l <= lmax {
        lengths.push(l);
        l *= 2;
    }
    if lengths.is_empty() {
        lengths.push(12);
    }
    lengths
}
