//! Config files (TOML) with dotted `key=value` overrides, and the per-mode
//! file schemas.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{ConeRegion, EnergyMode};
use crate::error::{Error, Result};
use crate::experiments::{ConvergenceConfig, PerturbationSpec, SweepConfig};
use crate::geometry::Background;
use crate::solver::cylindrical::CylConfig;
use crate::solver::picard::PicardConfig;
use crate::solver::EvolveConfig;

/// Reads `path` (an empty table when absent) and applies the overrides in order.
pub fn load_value(path: Option<&Path>, overrides: &[String]) -> Result<toml::Table> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            toml::from_str::<toml::Table>(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    Ok(table)
}

/// `a.b.c=value`; the value is read as a TOML literal and falls back to a string.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::Config(format!("override `{assignment}` has an empty key")));
    }
    let value = toml::from_str::<toml::Table>(&format!("v = {}", raw.trim()))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{p}` in `{key}` is not a table")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

pub fn typed<T: DeserializeOwned>(table: toml::Table) -> Result<T> {
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| Error::Config(e.to_string()))
}

/// `evolve`: one radial run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveFile {
    pub data: PerturbationSpec,
    /// When set, the amplitude is chosen so that `kappa0` equals it.
    pub kappa: Option<f64>,
    pub dr: f64,
    pub eta: f64,
    pub background: Background,
    /// Write every recorded snapshot as a checkpoint for later audits.
    pub save_snapshots: bool,
    pub run: EvolveConfig,
}

impl Default for EvolveFile {
    fn default() -> Self {
        Self {
            data: PerturbationSpec {
                lambda: 20.0,
                ..PerturbationSpec::default()
            },
            kappa: None,
            dr: 0.05,
            eta: 0.25,
            background: Background::Catenoid,
            save_snapshots: true,
            run: EvolveConfig {
                t_end: 15.0,
                record_every: 20,
                ..EvolveConfig::default()
            },
        }
    }
}

/// `evolve-cyl`: `w = amplitude * exp(-((z - center) / width)^2)`,
/// `w_t = velocity * exp(-((z - center) / width)^2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CylFile {
    pub z_max: f64,
    pub n: usize,
    pub amplitude: f64,
    pub velocity: f64,
    pub center: f64,
    pub width: f64,
    pub run: CylConfig,
}

impl Default for CylFile {
    fn default() -> Self {
        Self {
            z_max: 5.0,
            n: 501,
            amplitude: 0.0,
            velocity: 0.0,
            center: 0.0,
            width: 1.0,
            run: CylConfig::default(),
        }
    }
}

/// `picard`: `eps = amplitude * bump((r - center) / width)`, `eps_t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PicardFile {
    pub r_min: f64,
    pub r_max: f64,
    pub dr: f64,
    pub background: Background,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    /// Ratios with a denominator below this are not reported.
    pub ratio_floor: f64,
    pub run: PicardConfig,
}

impl Default for PicardFile {
    fn default() -> Self {
        Self {
            r_min: 1.0,
            r_max: 11.0,
            dr: 0.02,
            background: Background::Flat,
            amplitude: 1e-3,
            center: 5.0,
            width: 2.0,
            ratio_floor: 1e-13,
            run: PicardConfig::default(),
        }
    }
}

/// `audit`: settings on top of the stored evolve config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditFile {
    /// Largest accepted null-form residual.
    pub nullform_tolerance: f64,
    /// Replaces the stored light-cone exclusion exponent.
    pub delta1: Option<f64>,
    /// Cone for the energy balance; the stored one when absent.
    pub cone: Option<ConeRegion>,
    pub energy_mode: Option<EnergyMode>,
}

impl Default for AuditFile {
    fn default() -> Self {
        Self {
            nullform_tolerance: 1e-12,
            delta1: None,
            cone: None,
            energy_mode: None,
        }
    }
}

pub type SweepFile = SweepConfig;
pub type ConvergeFile = ConvergenceConfig;
