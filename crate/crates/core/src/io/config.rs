//! Declarative run configuration (TOML).
//!
//! ```toml
//! seed = 42
//!
//! [input]
//! path = "stations.csv"
//!
//! [init]
//! id = "id"
//! time = "ym"
//! group = "month"
//!
//! [recipes.spi]
//! scales = [6, 12, 24, 36]
//!
//! [recipes.spei]
//! scales = [6, 12, 24, 36]
//! dists = ["gev", "glo"]
//!
//! [output]
//! path = "indexes.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::indexes::{GggiParams, SpeiParams, SpiParams};
use crate::pipeline::Step;
use crate::uncertainty::SweepSpec;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputSchema {
    /// Monthly station data; adds a `month` column.
    #[default]
    Station,
    /// Any CSV, kinds inferred.
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub schema: InputSchema,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitConfig {
    pub id: String,
    #[serde(default)]
    pub time: Option<String>,
    #[serde(default)]
    pub group: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GggiConfig {
    #[serde(flatten)]
    pub params: GggiParams,
    /// Weight table CSV; the bundled table when absent.
    #[serde(default)]
    pub weights: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RecipesConfig {
    #[serde(default)]
    pub spi: Option<SpiParams>,
    #[serde(default)]
    pub spei: Option<SpeiParams>,
    #[serde(default)]
    pub gggi: Option<GggiConfig>,
}

impl RecipesConfig {
    pub fn is_empty(&self) -> bool {
        self.spi.is_none() && self.spei.is_none() && self.gggi.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub spec: SweepSpec,
    #[serde(default)]
    pub weights: Option<PathBuf>,
}

fn one() -> usize {
    1
}

fn default_levels() -> Vec<f64> {
    crate::uncertainty::DEFAULT_LEVELS.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    /// Bootstrap replicates for the drought recipes; above 1 the output
    /// is the interval table.
    #[serde(default = "one")]
    pub n_boot: usize,
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
    /// Declared precipitation unit, recorded in the manifest only.
    #[serde(default)]
    pub prcp_unit: Option<String>,
    pub input: InputConfig,
    pub init: InitConfig,
    /// Applied to the input before any recipe.
    #[serde(default)]
    pub steps: Vec<Step>,
    #[serde(default)]
    pub recipes: RecipesConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks what can be checked before touching data.
    pub fn validate(&self) -> Result<()> {
        if self.n_boot == 0 {
            return Err(Error::Config("n_boot must be at least 1".into()));
        }
        if let Some(c) = self.levels.iter().find(|c| !(**c > 0.0 && **c < 1.0)) {
            return Err(Error::Config(format!("level {c} outside (0, 1)")));
        }
        if self.sweep.is_some() && !self.recipes.is_empty() {
            return Err(Error::Config("a config runs either recipes or a sweep, not both".into()));
        }
        for scales in [
            self.recipes.spi.as_ref().map(|p| &p.scales),
            self.recipes.spei.as_ref().map(|p| &p.scales),
        ]
        .into_iter()
        .flatten()
        {
            if scales.is_empty() || scales.contains(&0) {
                return Err(Error::Config(format!("invalid scales {scales:?}")));
            }
        }
        Ok(())
    }

    /// Makes relative paths relative to `base` instead of the working
    /// directory.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.input.path);
        fix(&mut self.output.path);
        if let Some(g) = &mut self.recipes.gggi {
            g.weights.as_mut().map(fix);
        }
        if let Some(s) = &mut self.sweep {
            s.weights.as_mut().map(fix);
        }
    }

    /// SHA-256 of the config's canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Loads a TOML config, or the config recorded in a run manifest when the
/// file ends in `.json`. Relative paths in a TOML file are resolved
/// against its directory.
pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        let c: PipelineConfig = serde_json::from_value(
            v.get("config")
                .cloned()
                .ok_or_else(|| Error::Config("manifest has no `config`".into()))?,
        )
        .map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        return Ok(c);
    }
    let mut c = PipelineConfig::from_toml(&text)?;
    c.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    Ok(c)
}
