//! Identities and norms evaluated on recorded snapshots.

pub mod energy;
pub mod norms;
pub mod vector_fields;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::BackgroundCoeffs;
use crate::solver::{min_slack, RadialState};
use crate::stencil::MAX_ORDER;

pub use energy::{cone_terms, energy, energy_audit, ConeRegion, ConeTerms, EnergyAudit, EnergyMode, Region};
pub use norms::{
    bootstrap_norms, derivative_table, japanese, snapshot_norms, sobolev_norm, support_radius, BootstrapNorms,
    DerivativeTable, SnapshotNorms,
};
pub use vector_fields::{
    commutator_residual, gamma_apply, nullform_pair_residual, nullform_residual, CommutatorGrid, Gamma,
    NullformResidual,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagnosticsConfig {
    /// Decay exponent of the energy weights.
    pub delta: f64,
    /// Exponent of the light-cone exclusion `t^{1 - delta1}`.
    pub delta1: f64,
    /// Highest derivative order in the bootstrap norms.
    pub order: usize,
    pub energy_mode: EnergyMode,
    /// Cone for energy and cumulative flux; the full grid when absent.
    pub cone: Option<ConeRegion>,
    /// Skip the derivative norms when false.
    pub norms: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            delta: 0.1,
            delta1: 0.25,
            order: MAX_ORDER,
            energy_mode: EnergyMode::FullGradient,
            cone: None,
            norms: true,
        }
    }
}

/// Diagnostics of one snapshot.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub flux_cumulative: f64,
    pub plain_norms: Vec<f64>,
    pub boosted_norms: Vec<f64>,
    pub linf_weighted: f64,
    pub support: (f64, f64),
    pub hyperbolicity_slack: f64,
    pub nullform_residual: f64,
}

impl DiagnosticsRecord {
    /// CSV column names, with one column per derivative order.
    pub fn csv_header(order: usize) -> Vec<String> {
        let mut h = vec!["t".to_string(), "energy".into(), "flux_cumulative".into()];
        h.extend((1..=order).map(|k| format!("plain_norm_{k}")));
        h.extend((1..order).map(|k| format!("boosted_norm_{k}")));
        h.extend(
            ["linf_weighted", "support_lo", "support_hi", "hyperbolicity_slack", "nullform_residual"]
                .iter()
                .map(|s| s.to_string()),
        );
        h
    }

    /// Values in the order of [`DiagnosticsRecord::csv_header`]; missing norms are 0.
    pub fn csv_values(&self, order: usize) -> Vec<f64> {
        let mut v = vec![self.t, self.energy, self.flux_cumulative];
        v.extend((0..order).map(|k| self.plain_norms.get(k).copied().unwrap_or(0.0)));
        v.extend((0..order.saturating_sub(1)).map(|k| self.boosted_norms.get(k).copied().unwrap_or(0.0)));
        v.extend([
            self.linf_weighted,
            self.support.0,
            self.support.1,
            self.hyperbolicity_slack,
            self.nullform_residual,
        ]);
        v
    }
}

/// One record per snapshot. Snapshots are processed in parallel; the
/// cumulative flux is then accumulated in time order.
pub fn records_for(
    snapshots: &[RadialState],
    bg: &BackgroundCoeffs,
    config: &DiagnosticsConfig,
    support_threshold: f64,
) -> Vec<DiagnosticsRecord> {
    let order = config.order.min(MAX_ORDER);
    let region = config.cone.map_or(Region::Full, Region::Cone);
    let parts: Vec<(DiagnosticsRecord, ConeTerms)> = snapshots
        .par_iter()
        .map(|s| {
            let terms = cone_terms(s, bg, region, config.energy_mode);
            let norms = if config.norms {
                snapshot_norms(s, bg, order).unwrap_or_default()
            } else {
                SnapshotNorms::default()
            };
            let rec = DiagnosticsRecord {
                t: s.t,
                energy: terms.energy,
                flux_cumulative: 0.0,
                plain_norms: norms.plain,
                boosted_norms: norms.boosted,
                linf_weighted: norms::weighted_linf(s.t, norms.linf),
                support: support_radius(s, support_threshold),
                hyperbolicity_slack: min_slack(s, bg).0,
                nullform_residual: nullform_residual(s, bg, config.delta1).max(),
            };
            (rec, terms)
        })
        .collect();
    let t: Vec<f64> = parts.iter().map(|(r, _)| r.t).collect();
    let terms: Vec<ConeTerms> = parts.iter().map(|(_, c)| *c).collect();
    let audit = EnergyAudit::from_terms(&t, &terms);
    parts
        .into_iter()
        .zip(audit.flux)
        .map(|((mut rec, _), h)| {
            rec.flux_cumulative = h;
            rec
        })
        .collect()
}
