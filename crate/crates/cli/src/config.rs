//! Experiment configuration files.

use std::path::{Path, PathBuf};

use qtl_core::divergence::TaskPair;
use qtl_core::embedding::{EmbeddingAnsatz, EmbeddingTable, ThetaGrid, DEFAULT_GRID_CAP};
use qtl_core::pipeline::BoundConfig;
use qtl_core::tasks::{quantize_pair, DiscreteTask, GaussianTaskSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

const PRESETS: [(&str, &str); 2] =
    [("fig2", include_str!("../presets/fig2.json")), ("fig3", include_str!("../presets/fig3.json"))];

/// Either a built-in ansatz name or an explicit layered circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnsatzSpec {
    Named(String),
    Custom(EmbeddingAnsatz),
}

/// Explicit discrete task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableTaskSpec {
    pub features: Vec<f64>,
    pub prior0: f64,
    pub cond0: Vec<f64>,
    pub cond1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TaskSpec {
    Gaussian(GaussianTaskSpec),
    Table(TableTaskSpec),
}

fn default_ansatz() -> AnsatzSpec {
    AnsatzSpec::Named("rx_rot_rx".into())
}
fn default_resolution() -> usize {
    16
}
fn default_mc_resolution() -> usize {
    8
}
fn default_replications() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(default = "default_ansatz")]
    pub ansatz: AnsatzSpec,
    #[serde(default = "default_resolution")]
    pub grid_resolution: usize,
    /// Grid used by the Monte-Carlo columns of the bounds table.
    #[serde(default = "default_mc_resolution")]
    pub mc_grid_resolution: usize,
    pub source: TaskSpec,
    pub target: TaskSpec,
    pub n_source: Vec<usize>,
    pub n_target: Vec<usize>,
    #[serde(default)]
    pub shifts: Vec<f64>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    pub bound: BoundConfig,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn invalid(field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config { field: field.into(), message: message.to_string() }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let field = if field == "." { "<root>".to_string() } else { field };
            invalid(&field, e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file, or a built-in preset by name (`fig2`, `fig3`).
    pub fn load(name_or_path: &str) -> Result<Self> {
        let path = Path::new(name_or_path);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), source: e })?;
            return Self::from_json(&text);
        }
        match preset(name_or_path.trim_end_matches(".json")) {
            Some(text) => Self::from_json(text),
            None => Err(invalid("--config", format!("no such file or preset: {name_or_path}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(invalid("schema", format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        self.ansatz()?;
        for (field, res) in [("grid_resolution", self.grid_resolution), ("mc_grid_resolution", self.mc_grid_resolution)] {
            if res < 2 {
                return Err(invalid(field, format!("must be >= 2, got {res}")));
            }
        }
        if self.n_source.is_empty() {
            return Err(invalid("n_source", "must list at least one sample size"));
        }
        if self.n_target.is_empty() || self.n_target.contains(&0) {
            return Err(invalid("n_target", "must list sample sizes >= 1"));
        }
        if self.replications == 0 {
            return Err(invalid("replications", "must be >= 1"));
        }
        if let Some(bad) = self.shifts.iter().find(|s| !s.is_finite()) {
            return Err(invalid("shifts", format!("non-finite shift {bad}")));
        }
        if !(self.bound.delta > 0.0 && self.bound.delta < 1.0) {
            return Err(invalid("bound.delta", format!("must be in (0, 1), got {}", self.bound.delta)));
        }
        self.bound.estimator.validate().map_err(|e| invalid("bound.estimator", e))?;
        for (field, spec) in [("source", &self.source), ("target", &self.target)] {
            if let TaskSpec::Gaussian(g) = spec {
                g.validate().map_err(|e| invalid(field, e))?;
            }
        }
        self.task_pair()?;
        Ok(())
    }

    pub fn ansatz(&self) -> Result<EmbeddingAnsatz> {
        match &self.ansatz {
            AnsatzSpec::Named(name) => {
                EmbeddingAnsatz::builtin(name).ok_or_else(|| invalid("ansatz", format!("unknown ansatz {name:?}")))
            }
            AnsatzSpec::Custom(a) => {
                a.validate().map_err(|e| invalid("ansatz", e))?;
                Ok(a.clone())
            }
        }
    }

    fn grid_at(&self, resolution: usize, field: &str) -> Result<ThetaGrid<f64>> {
        let dims = self.ansatz()?.param_count();
        ThetaGrid::uniform(dims, resolution, DEFAULT_GRID_CAP).map_err(|e| invalid(field, e))
    }

    pub fn grid(&self) -> Result<ThetaGrid<f64>> {
        self.grid_at(self.grid_resolution, "grid_resolution")
    }

    pub fn mc_grid(&self) -> Result<ThetaGrid<f64>> {
        self.grid_at(self.mc_grid_resolution, "mc_grid_resolution")
    }

    /// Source and target on one shared feature support.
    pub fn task_pair(&self) -> Result<TaskPair<f64>> {
        match (&self.source, &self.target) {
            (TaskSpec::Gaussian(s), TaskSpec::Gaussian(t)) => {
                let (s, t) = quantize_pair(s, t).map_err(|e| invalid("target", e))?;
                Ok(TaskPair::new(s, t))
            }
            (TaskSpec::Table(s), TaskSpec::Table(t)) => {
                let s = table_task(s).map_err(|e| invalid("source", e))?;
                let t = table_task(t).map_err(|e| invalid("target", e))?;
                let pair = TaskPair::new(s, t);
                if !pair.is_aligned() {
                    return Err(invalid("target.features", "must equal source.features"));
                }
                Ok(pair)
            }
            _ => Err(invalid("target", "source and target must both be Gaussian specs or both be tables")),
        }
    }

    /// Gaussian source and target for mean-shift sweeps.
    pub fn gaussian_specs(&self) -> Result<(GaussianTaskSpec, GaussianTaskSpec)> {
        match (&self.source, &self.target) {
            (TaskSpec::Gaussian(s), TaskSpec::Gaussian(t)) => Ok((*s, *t)),
            _ => Err(invalid("target", "shift sweeps need Gaussian source and target specs")),
        }
    }

    /// One embedding table over the pair's features.
    pub fn table(&self, pair: &TaskPair<f64>, grid: &ThetaGrid<f64>) -> Result<EmbeddingTable<f64>> {
        Ok(EmbeddingTable::new(&self.ansatz()?, grid, pair.source.features())?)
    }
}

fn table_task(t: &TableTaskSpec) -> qtl_core::Result<DiscreteTask<f64>> {
    DiscreteTask::new(t.features.clone(), [t.prior0, 1.0 - t.prior0], [t.cond0.clone(), t.cond1.clone()])
}

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|&(_, text)| text)
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|&(n, _)| n)
}
