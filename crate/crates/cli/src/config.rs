use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use spinchaos::levelset::{AreaRule, ChaosMethod, MIN_QUADRATURE, MIN_RESOLUTION};
use spinchaos::{Region, SpectralProfile};

use crate::CliError;

/// One experiment. Every report embeds the resolved config it was run with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub profile: SpectralProfile,
    #[serde(default)]
    pub level: f64,
    /// Grid resolution per axis.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Subdivision factor for cut cells.
    #[serde(default = "default_refine")]
    pub refine: usize,
    /// Measure polar caps on a rotated copy of the field.
    #[serde(default)]
    pub two_charts: bool,
    #[serde(default)]
    pub area_rule: AreaRule,
    /// Gauss nodes in `cos θ`; twice as many are used in `φ`.
    #[serde(default = "default_quadrature")]
    pub quadrature: usize,
    /// Chaos cap `Q`.
    #[serde(default = "default_order")]
    pub max_order: u32,
    #[serde(default = "default_n")]
    pub n_realizations: usize,
    pub seed: u64,
    #[serde(default = "default_region")]
    pub region: Region,
    #[serde(default = "default_method")]
    pub method: ChaosMethod,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
}

fn default_grid() -> usize {
    32
}
fn default_refine() -> usize {
    1
}
fn default_quadrature() -> usize {
    24
}
fn default_order() -> u32 {
    6
}
fn default_n() -> usize {
    100
}
fn default_region() -> Region {
    Region::FullSphere
}
fn default_method() -> ChaosMethod {
    ChaosMethod::Fiberwise
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Built-in config used without `--config`. It has no seed on purpose.
fn default_document() -> Value {
    json!({ "profile": { "spin": 1, "bands": [{ "l": 1, "c": 1.0 }, { "l": 3, "c": 0.6 }], "normalize": true } })
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub grid: Option<usize>,
    pub order: Option<u32>,
    pub n: Option<usize>,
}

impl ExperimentConfig {
    /// Reads `path` (or the built-in default), applies `overrides` and validates.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed config {}: {e}", p.display())))?
            }
            None => default_document(),
        };
        let obj = doc.as_object_mut().ok_or_else(|| CliError::Usage("config must be a JSON object".into()))?;
        if let Some(s) = overrides.seed {
            obj.insert("seed".into(), json!(s));
        }
        if let Some(o) = &overrides.out {
            obj.insert("out_dir".into(), json!(o));
        }
        if let Some(g) = overrides.grid {
            obj.insert("grid".into(), json!(g));
        }
        if let Some(q) = overrides.order {
            obj.insert("max_order".into(), json!(q));
        }
        if let Some(n) = overrides.n {
            obj.insert("n_realizations".into(), json!(n));
        }
        if !obj.contains_key("seed") {
            return Err(CliError::Usage("no master seed: set \"seed\" in the config or pass --seed".into()));
        }
        let cfg: Self = serde_json::from_value(doc).map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !self.level.is_finite() {
            return bad(format!("level {} is not finite", self.level));
        }
        if self.grid < MIN_RESOLUTION {
            return bad(format!("grid {} below {MIN_RESOLUTION}", self.grid));
        }
        if self.refine == 0 {
            return bad("refine must be at least 1".into());
        }
        if self.quadrature < MIN_QUADRATURE {
            return bad(format!("quadrature {} below {MIN_QUADRATURE}", self.quadrature));
        }
        if self.max_order % 2 == 1 {
            return bad(format!("max_order {} must be even", self.max_order));
        }
        self.region.validate().map_err(|e| CliError::Usage(e.to_string()))
    }

    /// SHA-256 of the compact JSON form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("config serializes")))
    }
}
