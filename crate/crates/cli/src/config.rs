//! Run configuration: a JSON object describing the state, the time grid,
//! the sampling grids, the oracle settings and the output sink.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use tdsts::{Displacement, OscillatorParams, Squeeze, StateSpec, Temperature, ThermalSpec};

/// Overrides `oracle.fock_cutoff` when set.
pub const FOCK_CUTOFF_ENV: &str = "TDSTS_FOCK_CUTOFF";

#[derive(Debug)]
pub struct ConfigError {
    pub source: String,
    pub message: String,
}

impl ConfigError {
    fn new(source: &str, message: impl Into<String>) -> Self {
        Self { source: source.to_string(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.source, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub state: StateConfig,
    #[serde(default)]
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub alpha: AlphaConfig,
    #[serde(default)]
    pub squeeze: SqueezeConfig,
    #[serde(default)]
    pub temps: TempsConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub kb: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Units {
    fn default() -> Self {
        Self { m: 1.0, omega: 1.0, hbar: 1.0, kb: 1.0 }
    }
}

/// Either `{re, im}` or `{mod, arg}`. Missing components default to zero.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaConfig {
    pub re: Option<f64>,
    pub im: Option<f64>,
    #[serde(rename = "mod")]
    pub modulus: Option<f64>,
    pub arg: Option<f64>,
}

impl AlphaConfig {
    pub fn is_polar(&self) -> bool {
        self.modulus.is_some() || self.arg.is_some()
    }

    fn check(&self) -> Result<(), String> {
        let cartesian = self.re.is_some() || self.im.is_some();
        if cartesian && self.is_polar() {
            return Err("state.alpha: give either {re, im} or {mod, arg}, not both".into());
        }
        Ok(())
    }

    fn to_displacement(self) -> tdsts::Result<Displacement> {
        if self.is_polar() {
            Displacement::from_polar(self.modulus.unwrap_or(0.0), self.arg.unwrap_or(0.0))
        } else {
            Displacement::new(self.re.unwrap_or(0.0), self.im.unwrap_or(0.0))
        }
    }

    /// Rewrites the entry in polar form, keeping its value.
    pub fn polar(self) -> tdsts::Result<Self> {
        let d = self.to_displacement()?;
        Ok(Self { re: None, im: None, modulus: Some(d.modulus()), arg: Some(d.phase()) })
    }

    pub fn cartesian(self) -> tdsts::Result<Self> {
        let d = self.to_displacement()?;
        Ok(Self { re: Some(d.re()), im: Some(d.im()), modulus: None, arg: None })
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezeConfig {
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TempsConfig {
    #[serde(default)]
    pub input: Vec<TempEntry>,
    #[serde(default)]
    pub detector: Vec<TempEntry>,
}

/// `{T: absolute}` or `{tau: k_bT/ħω}`.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TempEntry {
    #[serde(rename = "T")]
    pub absolute: Option<f64>,
    pub tau: Option<f64>,
}

impl TempEntry {
    fn to_temperature(self, path: &str) -> Result<Temperature, String> {
        match (self.absolute, self.tau) {
            (Some(t), None) => Ok(Temperature::Absolute(t)),
            (None, Some(tau)) => Ok(Temperature::Reduced(tau)),
            (Some(_), Some(_)) => Err(format!("{path}: give either T or tau, not both")),
            (None, None) => Err(format!("{path}: expected T or tau")),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { start: 0.0, stop: 0.0, count: 1 }
    }
}

impl TimeGrid {
    /// Evenly spaced times including both ends; a single point sits at `start`.
    pub fn times(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub halfwidth_sigmas: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { halfwidth_sigmas: 5.0, points: 101 }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default)]
    pub x: GridSpec,
    #[serde(default)]
    pub p: GridSpec,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_cutoff")]
    pub fock_cutoff: usize,
    #[serde(default = "default_quad_points")]
    pub quad_points: usize,
}

fn default_cutoff() -> usize {
    tdsts::oracle::fock::DEFAULT_CUTOFF
}

fn default_quad_points() -> usize {
    tdsts::validate::DEFAULT_QUAD_POINTS
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { fock_cutoff: default_cutoff(), quad_points: default_quad_points() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    /// Standard output when absent.
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(&source, e.to_string()))?;
        Self::parse(&text, &source)
    }

    /// Parses and checks a configuration; `source` names it in diagnostics.
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError::new(source, e.to_string()))?;
        if let Ok(raw) = std::env::var(FOCK_CUTOFF_ENV) {
            cfg.oracle.fock_cutoff = raw
                .trim()
                .parse()
                .map_err(|_| ConfigError::new(FOCK_CUTOFF_ENV, format!("expected an integer cutoff, got {raw:?}")))?;
        }
        cfg.check().map_err(|m| ConfigError::new(source, m))?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), String> {
        if self.time_grid.count == 0 {
            return Err("time_grid.count: must be at least 1".into());
        }
        if !(self.time_grid.start.is_finite() && self.time_grid.stop.is_finite()) {
            return Err("time_grid: start and stop must be finite".into());
        }
        for (name, g) in [("grids.x", self.grids.x), ("grids.p", self.grids.p)] {
            if !(g.halfwidth_sigmas.is_finite() && g.halfwidth_sigmas > 0.0) {
                return Err(format!("{name}.halfwidth_sigmas: must be positive"));
            }
            if g.points < 2 {
                return Err(format!("{name}.points: need at least 2"));
            }
        }
        self.spec().map(|_| ())
    }

    pub fn osc(&self) -> Result<OscillatorParams, String> {
        let u = self.state.units;
        OscillatorParams::new(u.m, u.omega, u.hbar, u.kb).map_err(|e| format!("state.units: {e}"))
    }

    pub fn spec(&self) -> Result<StateSpec, String> {
        let s = &self.state;
        let osc = self.osc()?;
        s.alpha.check()?;
        let alpha = s.alpha.to_displacement().map_err(|e| format!("state.alpha: {e}"))?;
        let squeeze = Squeeze::new(s.squeeze.r, s.squeeze.phi).map_err(|e| format!("state.squeeze: {e}"))?;
        let temps = |list: &[TempEntry], name: &str| -> Result<Vec<Temperature>, String> {
            list.iter()
                .enumerate()
                .map(|(k, e)| e.to_temperature(&format!("state.temps.{name}[{k}]")))
                .collect()
        };
        let thermal = ThermalSpec { input: temps(&s.temps.input, "input")?, detector: temps(&s.temps.detector, "detector")? };
        StateSpec::new(osc, alpha, squeeze, thermal).map_err(|e| format!("state: {e}"))
    }
}
