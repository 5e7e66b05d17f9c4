//! Run configuration: window sizes, quadrature resolutions, sampling grids,
//! the boundary-approach schedule, and per-check tolerances.
//!
//! The checked-in `config/reference.json` must stay equal to
//! [`Config::reference`]; a test enforces this so the file and the built-in
//! defaults cannot drift apart.

use crate::error::{Error, Result};
use crate::fields::FieldGrid;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub schema_version: u32,
    /// K-type window bound shared by the suites unless overridden.
    pub max_index: u32,
    /// Angular quadrature points for matrix elements.
    pub circle_points: usize,
    /// Radial quadrature points per profile support.
    pub t_points: usize,
    /// Per-axis resolution of the Haar consistency checks.
    pub haar_resolution: usize,
    /// Sampling grids of the field model.
    pub field_grid: FieldGrid,
    /// Distances to the boundary walked by the dual-limit suites.
    pub boundary_schedule: Vec<f64>,
    /// Decay threshold of the field tail report.
    pub tail_threshold: f64,
    /// Tolerance per named check.
    pub tolerances: BTreeMap<String, f64>,
}

impl Config {
    /// The reference configuration every acceptance run uses.
    pub fn reference() -> Self {
        let tolerances = BTreeMap::from(
            [
                ("haar", 1e-6),
                ("unitarity", 1e-8),
                ("cn-ratios", 1e-5),
                ("cn-endpoint", 1e-5),
                ("gamma", 1e-12),
                ("intertwining", 1e-6),
                ("casimir", 1e-3),
                ("casimir-variance", 1e-4),
                ("topology", 0.0),
                ("ncdl-i", 1e-3),
                ("ncdl-ii", 1e-3),
                ("ncdl-iii", 1e-3),
                ("ncdl-bounded", 1e-10),
                ("ncdl-involutive", 1e-12),
                ("fields-roundtrip", 1e-8),
                ("fields-commutation", 1e-10),
                ("fields-parity", 0.0),
                ("fields-vanishing", 0.0),
            ]
            .map(|(k, v)| (k.to_string(), v)),
        );
        Config {
            schema_version: 1,
            max_index: 8,
            circle_points: 1024,
            t_points: 64,
            haar_resolution: 64,
            field_grid: FieldGrid::reference(),
            boundary_schedule: vec![0.3, 0.1, 0.03, 0.01, 0.003, 0.001],
            tail_threshold: 1.0,
            tolerances,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Config(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        if self.circle_points < 8 || self.t_points < 2 || self.haar_resolution < 2 {
            return Err(Error::Config("quadrature resolutions too small".into()));
        }
        self.field_grid.validate()?;
        if self.boundary_schedule.is_empty()
            || self.boundary_schedule.windows(2).any(|w| w[0] <= w[1])
            || self.boundary_schedule.iter().any(|d| !(0.0 < *d && *d < 1.0))
        {
            return Err(Error::Config(
                "boundary schedule must decrease strictly inside (0,1)".into(),
            ));
        }
        if !(self.tail_threshold > 0.0) {
            return Err(Error::Config("tail threshold must be positive".into()));
        }
        for (k, v) in &self.tolerances {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::Config(format!("tolerance {k} must be finite and >= 0")));
            }
        }
        crate::harmonics::KTypeWindow::new(crate::harmonics::Parity::Even, self.max_index)?;
        Ok(())
    }

    /// Named tolerance, failing loudly on unknown keys.
    pub fn tolerance(&self, key: &str) -> Result<f64> {
        self.tolerances
            .get(key)
            .copied()
            .ok_or_else(|| Error::Config(format!("no tolerance named {key}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Config = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
