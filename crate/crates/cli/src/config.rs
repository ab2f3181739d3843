//! JSON run configuration and its command-line overrides.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};

use dicke_mf::sweep::GridSpec;
use dicke_mf::{Branch, DissipatorMode, Error, IntegrationConfig, ModelKind, Result, SystemParams, Thresholds};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    pub omega_p: f64,
    pub omega_a: f64,
    pub omega_e: f64,
    pub g: f64,
    pub xi: f64,
    pub kappa: f64,
    pub gamma_l: f64,
    pub gamma_g: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        let p = SystemParams::default();
        Self {
            omega_p: p.omega_p,
            omega_a: p.omega_a,
            omega_e: p.omega_e,
            g: p.g,
            xi: p.xi,
            kappa: p.kappa,
            gamma_l: p.gamma_l,
            gamma_g: p.gamma_g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrationSection {
    /// Omitted means 1/1000 of the drive period.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub sample_stride: usize,
    pub discard_fraction: f64,
    pub perturbation: f64,
}

impl Default for IntegrationSection {
    fn default() -> Self {
        Self { dt: None, t_end: 10000.0 * PI, sample_stride: 10, discard_fraction: 0.8, perturbation: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdsSection {
    pub eps_order: f64,
    pub eps_sigma: f64,
}

impl Default for ThresholdsSection {
    fn default() -> Self {
        let t = Thresholds::default();
        Self { eps_order: t.eps_order, eps_sigma: t.eps_sigma }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub g_min: f64,
    pub g_max: f64,
    pub g_steps: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_steps: usize,
    /// Omitted means one worker per available core.
    pub workers: Option<usize>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { g_min: 0.0, g_max: 1.2, g_steps: 30, xi_min: 0.0, xi_max: 1.0, xi_steps: 30, workers: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub trajectory: PathBuf,
    pub sweep: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { trajectory: "trajectory.csv".into(), sweep: "sweep.csv".into() }
    }
}

/// Everything a run needs. Missing keys take their defaults; unknown keys are
/// rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelKind,
    pub mode: DissipatorMode,
    pub branch: Branch,
    pub params: ParamsSection,
    pub integration: IntegrationSection,
    pub thresholds: ThresholdsSection,
    pub grid: GridSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Dicke,
            mode: DissipatorMode::Dressed,
            branch: Branch::Positive,
            params: ParamsSection::default(),
            integration: IntegrationSection::default(),
            thresholds: ThresholdsSection::default(),
            grid: GridSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fills in the drive-dependent step size so the dumped document is fully
    /// explicit.
    pub fn resolve(&mut self) {
        if self.integration.dt.is_none() {
            self.integration.dt = Some(TAU / self.params.omega_e / 1000.0);
        }
    }

    pub fn system_params(&self) -> SystemParams {
        let p = &self.params;
        SystemParams {
            omega_p: p.omega_p,
            omega_a: p.omega_a,
            omega_e: p.omega_e,
            g: p.g,
            xi: p.xi,
            kappa: p.kappa,
            gamma_l: p.gamma_l,
            gamma_g: p.gamma_g,
        }
    }

    pub fn integration_config(&self) -> IntegrationConfig {
        let i = &self.integration;
        IntegrationConfig {
            dt: i.dt.unwrap_or(TAU / self.params.omega_e / 1000.0),
            t_end: i.t_end,
            sample_stride: i.sample_stride,
            discard_fraction: i.discard_fraction,
            perturbation: i.perturbation,
        }
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds { eps_order: self.thresholds.eps_order, eps_sigma: self.thresholds.eps_sigma }
    }

    pub fn grid_spec(&self) -> GridSpec {
        let g = &self.grid;
        GridSpec {
            g_min: g.g_min,
            g_max: g.g_max,
            g_steps: g.g_steps,
            xi_min: g.xi_min,
            xi_max: g.xi_max,
            xi_steps: g.xi_steps,
            template: self.system_params(),
            model: self.model,
            mode: self.mode,
            integration: self.integration_config(),
            thresholds: self.thresholds(),
            branch: self.branch,
        }
    }

    /// Checks every invariant the simulator would otherwise reject later.
    pub fn validate(&self) -> Result<()> {
        let params = self.system_params();
        params.validate()?;
        self.integration_config().validate(&params)?;
        self.thresholds().validate()?;
        if self.grid.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        if self.mode == DissipatorMode::EffectiveSpin && self.model != ModelKind::Dicke {
            return Err(Error::InvalidConfig("effective spin mode requires the Dicke model".into()));
        }
        Ok(())
    }
}
