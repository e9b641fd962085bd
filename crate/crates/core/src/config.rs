//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! lattice.M = 8
//! lattice.N = 8
//! model.omega_c_mhz = 5000
//! model.g0_mhz = 150
//! sweep.delta_over_g0 = -3:3:61
//! sweep.pairs = "150:150, 100:200"
//! solver.tolerance = 1e-9
//! solver.max_krylov = 300
//! solver.max_restarts = 50
//! solver.seed = 1
//! output.path = fig3.csv
//! analytics.g_mhz = 150
//! analytics.n_max = 10
//! analytics.delta_over_g = -3:3:121
//! ```
//!
//! Every key is optional. Values may be wrapped in double quotes.

use crate::basis::{BasisError, LatticeSpec};
use crate::eigensolver::SolverOptions;
use crate::hamiltonian::DEFAULT_OMEGA_C;
use std::collections::HashSet;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no config file or bundled config named `{0}` (bundled: fig2, fig3, fig4)")]
    NotFound(String),
    #[error(transparent)]
    Lattice(#[from] BasisError),
}

/// Configs shipped with the crate, addressable by name.
pub const BUNDLED: [(&str, &str); 3] = [
    ("fig2", include_str!("../configs/fig2.conf")),
    ("fig3", include_str!("../configs/fig3.conf")),
    ("fig4", include_str!("../configs/fig4.conf")),
];

/// Evenly spaced grid `start:stop:steps`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    start: f64,
    stop: f64,
    steps: usize,
}

impl GridSpec {
    /// `steps == 1` needs `start == stop`.
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid endpoints must be finite".into());
        }
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        if steps == 1 && start != stop {
            return Err("a one-point grid needs start == stop".into());
        }
        Ok(Self { start, stop, steps })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `start + (stop - start) k / (steps - 1)`; the midpoint of a symmetric
    /// odd grid is exactly zero.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| self.start + (self.stop - self.start) * (k as f64) / last)
            .collect()
    }

    fn parse(key: &str, value: &str) -> Result<Self, ConfigError> {
        let bad = |reason: String| ConfigError::InvalidValue {
            key: key.into(),
            value: value.into(),
            reason,
        };
        let parts: Vec<&str> = value.split(':').map(str::trim).collect();
        let [start, stop, steps] = parts[..] else {
            return Err(bad("expected start:stop:steps".into()));
        };
        let start = start.parse::<f64>().map_err(|e| bad(e.to_string()))?;
        let stop = stop.parse::<f64>().map_err(|e| bad(e.to_string()))?;
        let steps = steps.parse::<usize>().map_err(|e| bad(e.to_string()))?;
        Self::new(start, stop, steps).map_err(bad)
    }
}

/// Inputs for the `U` versus detuning table.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticsConfig {
    /// Onsite coupling and detuning unit (MHz).
    pub g: f64,
    pub n_max: u32,
    /// Detuning grid in units of `g`.
    pub delta_over_g: GridSpec,
}

impl Default for AnalyticsConfig {
    fn default() -> Self {
        Self { g: 150.0, n_max: 10, delta_over_g: GridSpec { start: -3.0, stop: 3.0, steps: 121 } }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lattice: LatticeSpec,
    pub omega_c: f64,
    /// Detuning unit (MHz).
    pub g0: f64,
    pub delta_over_g0: GridSpec,
    /// `(g_l, g_r)` in MHz.
    pub coupling_pairs: Vec<(f64, f64)>,
    pub solver: SolverOptions,
    pub output_path: Option<PathBuf>,
    pub analytics: AnalyticsConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lattice: LatticeSpec::new(8, 8).expect("8 sites"),
            omega_c: DEFAULT_OMEGA_C,
            g0: 150.0,
            delta_over_g0: GridSpec { start: -3.0, stop: 3.0, steps: 61 },
            coupling_pairs: vec![(150.0, 150.0)],
            solver: SolverOptions::default(),
            output_path: None,
            analytics: AnalyticsConfig::default(),
        }
    }
}

const KEYS: [&str; 14] = [
    "lattice.M",
    "lattice.N",
    "model.omega_c_mhz",
    "model.g0_mhz",
    "sweep.delta_over_g0",
    "sweep.pairs",
    "solver.tolerance",
    "solver.max_krylov",
    "solver.max_restarts",
    "solver.seed",
    "output.path",
    "analytics.g_mhz",
    "analytics.n_max",
    "analytics.delta_over_g",
];

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::InvalidValue {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn parse_pairs(key: &str, value: &str) -> Result<Vec<(f64, f64)>, ConfigError> {
    let bad = |reason: &str| ConfigError::InvalidValue {
        key: key.into(),
        value: value.into(),
        reason: reason.into(),
    };
    let mut pairs = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (l, r) = item.split_once(':').ok_or_else(|| bad("expected gl:gr"))?;
        let gl: f64 = number(key, l.trim())?;
        let gr: f64 = number(key, r.trim())?;
        if !(gl.is_finite() && gr.is_finite() && gl >= 0.0 && gr >= 0.0) {
            return Err(bad("couplings must be finite and non-negative"));
        }
        pairs.push((gl, gr));
    }
    if pairs.is_empty() {
        return Err(bad("at least one coupling pair is required"));
    }
    Ok(pairs)
}

fn positive(key: &str, value: &str, x: f64) -> Result<f64, ConfigError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(ConfigError::InvalidValue { key: key.into(), value: value.into(), reason: "must be positive".into() })
    }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let (mut sites, mut excitations) = (cfg.lattice.sites(), cfg.lattice.excitations());
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, text: raw.trim().into() })?;
            let key = key.trim();
            let value = value.trim();
            let value = value
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .unwrap_or(value);
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: key.into() });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey { line, key: key.into() });
            }
            match key {
                "lattice.M" => sites = number(key, value)?,
                "lattice.N" => excitations = number(key, value)?,
                "model.omega_c_mhz" => cfg.omega_c = positive(key, value, number(key, value)?)?,
                "model.g0_mhz" => cfg.g0 = positive(key, value, number(key, value)?)?,
                "sweep.delta_over_g0" => cfg.delta_over_g0 = GridSpec::parse(key, value)?,
                "sweep.pairs" => cfg.coupling_pairs = parse_pairs(key, value)?,
                "solver.tolerance" => cfg.solver.tolerance = positive(key, value, number(key, value)?)?,
                "solver.max_krylov" => cfg.solver.max_krylov = number(key, value)?,
                "solver.max_restarts" => cfg.solver.max_restarts = number(key, value)?,
                "solver.seed" => cfg.solver.seed = number(key, value)?,
                "output.path" => cfg.output_path = Some(PathBuf::from(value)),
                "analytics.g_mhz" => cfg.analytics.g = positive(key, value, number(key, value)?)?,
                "analytics.n_max" => {
                    cfg.analytics.n_max = number(key, value)?;
                    if cfg.analytics.n_max == 0 {
                        return Err(ConfigError::InvalidValue {
                            key: key.into(),
                            value: value.into(),
                            reason: "must be at least 1".into(),
                        });
                    }
                }
                "analytics.delta_over_g" => cfg.analytics.delta_over_g = GridSpec::parse(key, value)?,
                _ => unreachable!("key list and match arms agree"),
            }
        }
        cfg.lattice = LatticeSpec::new(sites, excitations)?;
        if cfg.lattice.sites() < 2 {
            return Err(ConfigError::InvalidValue {
                key: "lattice.M".into(),
                value: sites.to_string(),
                reason: "the ring needs at least two sites".into(),
            });
        }
        cfg.solver.validate().map_err(|e| ConfigError::InvalidValue {
            key: "solver".into(),
            value: format!("{:?}", cfg.solver),
            reason: e.to_string(),
        })?;
        Ok(cfg)
    }

    /// A path to an existing file, else the name of a bundled config.
    pub fn load(name_or_path: &str) -> Result<Self, ConfigError> {
        let path = Path::new(name_or_path);
        if path.is_file() {
            let text = std::fs::read_to_string(path)
                .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
            return Self::parse(&text);
        }
        match bundled(name_or_path) {
            Some(text) => Self::parse(text),
            None => Err(ConfigError::NotFound(name_or_path.into())),
        }
    }

    /// Detunings in MHz.
    pub fn deltas(&self) -> Vec<f64> {
        self.delta_over_g0.points().into_iter().map(|r| r * self.g0).collect()
    }

    pub fn point_count(&self) -> usize {
        self.coupling_pairs.len() * self.delta_over_g0.steps()
    }
}

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
