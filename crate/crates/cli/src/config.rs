//! Run configuration files (TOML). Unknown keys are rejected.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TwoBall,
    HardSoft,
    Deblur,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::TwoBall => "two-ball",
            Experiment::HardSoft => "hard-soft",
            Experiment::Deblur => "deblur",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Strengthened,
    Shift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariant {
    Dy,
    Strengthened,
    Fb,
}

impl SweepVariant {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariant::Dy => "dy",
            SweepVariant::Strengthened => "strengthened",
            SweepVariant::Fb => "fb",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub experiment: Option<Experiment>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub hard_soft: HardSoftSection,
    #[serde(default)]
    pub resolvent: ResolventSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub image: ImageSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    /// Per-iteration relaxations; the last value repeats. Overrides `lambda`.
    pub lambda_table: Option<Vec<f64>>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardSoftSection {
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventSection {
    pub method: Option<Method>,
    pub theta: Option<f64>,
    pub sigma: Option<[f64; 3]>,
    pub mu: Option<f64>,
    pub q: Option<Vec<f64>>,
    pub cross_check: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variant: Option<SweepVariant>,
    pub gamma_steps: Option<usize>,
    pub lambda_steps: Option<usize>,
    pub workers: Option<usize>,
    pub max_iter: Option<usize>,
    pub shadow_tol: Option<f64>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSection {
    pub input: Option<PathBuf>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub kernel_size: Option<usize>,
    pub kernel_std: Option<f64>,
    pub noise_std: Option<f64>,
    pub seed: Option<u64>,
    pub reg_weight: Option<f64>,
    pub stages: Option<usize>,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}
