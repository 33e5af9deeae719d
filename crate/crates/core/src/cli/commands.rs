//! One function per mode. Each reads its typed config, records the
//! effective config for the manifest and writes its artifacts.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::{self, AuditFile, ConvergeFile, CylFile, EvolveFile, PicardFile, SweepFile};
use super::output::{Cell, OutDir};
use super::plot::{line_plot, Series};
use super::{Cli, Mode, Outcome};
use crate::diagnostics::{
    energy_audit, nullform_residual, records_for, BootstrapNorms, DiagnosticsRecord, NullformResidual,
};
use crate::error::{Error, Result};
use crate::experiments::{convergence_study, existence_window, grid_for, make_initial_data, SweepRow};
use crate::geometry::BackgroundCoeffs;
use crate::solver::checkpoint;
use crate::solver::cylindrical::evolve_cylindrical;
use crate::solver::picard::{energy_difference, picard_iterate};
use crate::solver::{evolve, CylState, EvolveConfig, RadialGrid, RadialState, Termination, ZGrid};
use crate::stencil::MAX_ORDER;

pub fn dispatch(cli: &Cli, out: &mut OutDir, effective: &mut serde_json::Value) -> Result<Outcome> {
    let table = config::load_value(cli.common.config.as_deref(), &cli.common.overrides)?;
    match &cli.mode {
        Mode::Evolve => {
            let cfg: EvolveFile = config::typed(table)?;
            record_config(&cfg, out, effective)?;
            run_evolve(&cfg, out)
        }
        Mode::EvolveCyl => {
            let cfg: CylFile = config::typed(table)?;
            record_config(&cfg, out, effective)?;
            run_cyl(&cfg, out)
        }
        Mode::Picard => {
            let cfg: PicardFile = config::typed(table)?;
            record_config(&cfg, out, effective)?;
            run_picard(&cfg, out)
        }
        Mode::Sweep => {
            let cfg: SweepFile = config::typed(table)?;
            record_config(&cfg, out, effective)?;
            run_sweep(&cfg, out)
        }
        Mode::Audit { trajectory } => {
            let cfg: AuditFile = config::typed(table)?;
            record_config(&cfg, out, effective)?;
            run_audit(&cfg, trajectory, out)
        }
        Mode::Converge => {
            let cfg: ConvergeFile = config::typed(table)?;
            record_config(&cfg, out, effective)?;
            run_converge(&cfg, out)
        }
    }
}

/// Echoes the effective config into the manifest and as `config.toml`,
/// which re-runs the command unchanged.
fn record_config<T: Serialize>(cfg: &T, out: &mut OutDir, effective: &mut serde_json::Value) -> Result<()> {
    *effective = serde_json::to_value(cfg)?;
    let text = toml::to_string(cfg).map_err(|e| Error::Config(e.to_string()))?;
    out.write("config.toml", &text)
}

fn termination_outcome(t: &Termination) -> Outcome {
    if t.is_completed() {
        Outcome::ok()
    } else {
        Outcome::numerical(t.reason.tag())
    }
}

fn diagnostics_rows(records: &[DiagnosticsRecord], order: usize) -> Vec<Vec<Cell>> {
    records
        .iter()
        .map(|r| r.csv_values(order).into_iter().map(Cell::Num).collect())
        .collect()
}

fn log10_or_nan(v: f64) -> f64 {
    if v > 0.0 {
        v.log10()
    } else {
        f64::NAN
    }
}

fn evolve_plots(records: &[DiagnosticsRecord], lambda: f64, out: &mut OutDir) -> Result<()> {
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let energy: Vec<f64> = records.iter().map(|r| r.energy).collect();
    let flux: Vec<f64> = records.iter().map(|r| r.flux_cumulative).collect();
    out.write(
        "plots/energy.svg",
        &line_plot(
            "energy and cumulative flux",
            "t",
            &[
                Series { name: "E(t)", x: &t, y: &energy },
                Series { name: "flux", x: &t, y: &flux },
            ],
        ),
    )?;

    let plain: Vec<f64> = records.iter().map(|r| log10_or_nan(r.plain_norms.iter().sum())).collect();
    let boosted: Vec<f64> = records.iter().map(|r| log10_or_nan(r.boosted_norms.iter().sum())).collect();
    let linf: Vec<f64> = records.iter().map(|r| log10_or_nan(r.linf_weighted)).collect();
    out.write(
        "plots/bootstrap.svg",
        &line_plot(
            "log10 of the norm sums",
            "t",
            &[
                Series { name: "plain", x: &t, y: &plain },
                Series { name: "boosted", x: &t, y: &boosted },
                Series { name: "weighted sup", x: &t, y: &linf },
            ],
        ),
    )?;

    let lo: Vec<f64> = records.iter().map(|r| r.support.0).collect();
    let hi: Vec<f64> = records.iter().map(|r| r.support.1).collect();
    let inner: Vec<f64> = t.iter().map(|t| lambda - t).collect();
    let outer: Vec<f64> = t.iter().map(|t| 2.0 * lambda + t).collect();
    out.write(
        "plots/support.svg",
        &line_plot(
            "support against the light cone",
            "t",
            &[
                Series { name: "support lo", x: &t, y: &lo },
                Series { name: "support hi", x: &t, y: &hi },
                Series { name: "lambda - t", x: &t, y: &inner },
                Series { name: "2 lambda + t", x: &t, y: &outer },
            ],
        ),
    )
}

fn write_snapshots(snaps: &[RadialState], out: &mut OutDir) -> Result<()> {
    std::fs::create_dir_all(out.path("snapshots"))?;
    for (k, s) in snaps.iter().enumerate() {
        let rel = format!("snapshots/{k:05}.ckpt");
        checkpoint::save(s, out.path(&rel))?;
        out.written.push(rel);
    }
    Ok(())
}

#[derive(Serialize)]
struct EvolveSummary<'a> {
    termination: &'a Termination,
    steps: usize,
    kappa0: f64,
    kappa_physical: f64,
    amplitude: f64,
    bootstrap: BootstrapNorms,
    grid: [f64; 3],
}

fn run_evolve(cfg: &EvolveFile, out: &mut OutDir) -> Result<Outcome> {
    let spec = match cfg.kappa {
        Some(k) => cfg.data.with_kappa(k),
        None => cfg.data.clone(),
    };
    let grid = grid_for(spec.lambda, cfg.run.t_end, cfg.eta, cfg.dr)?;
    let bg = BackgroundCoeffs::new(cfg.background, grid.clone())?;
    let (init, kappa) = make_initial_data(&spec, grid.clone())?;
    let traj = evolve(&init, &bg, &cfg.run);

    let order = cfg.run.diagnostics.order.min(MAX_ORDER);
    out.csv(
        "diagnostics.csv",
        &DiagnosticsRecord::csv_header(order),
        &diagnostics_rows(&traj.records, order),
    )?;
    if cfg.save_snapshots {
        write_snapshots(&traj.snapshots, out)?;
    }
    evolve_plots(&traj.records, spec.lambda, out)?;
    out.json(
        "summary.json",
        &EvolveSummary {
            termination: &traj.termination,
            steps: traj.steps,
            kappa0: kappa.kappa0,
            kappa_physical: kappa.physical,
            amplitude: spec.amplitude,
            bootstrap: BootstrapNorms::from_records(&traj.records, cfg.run.diagnostics.delta),
            grid: [grid.r_min(), grid.r_max(), grid.len() as f64],
        },
    )?;
    Ok(termination_outcome(&traj.termination))
}

fn run_cyl(cfg: &CylFile, out: &mut OutDir) -> Result<Outcome> {
    let grid = Arc::new(ZGrid::new(cfg.z_max, cfg.n)?);
    let shape = |z: f64| (-((z - cfg.center) / cfg.width).powi(2)).exp();
    let init = CylState::from_fn(grid, |z| cfg.amplitude * shape(z), |z| cfg.velocity * shape(z))?;
    let traj = evolve_cylindrical(&init, &cfg.run);
    let rows: Vec<Vec<Cell>> = traj
        .records
        .iter()
        .map(|r| {
            vec![
                Cell::Num(r.t),
                Cell::Num(r.max_abs_w),
                Cell::Num(r.min_psi),
                Cell::Num(r.min_slack),
                Cell::Int(r.positive as i64),
            ]
        })
        .collect();
    out.csv("cyl.csv", &["t", "max_abs_w", "min_psi", "min_slack", "positive"], &rows)?;
    out.json("termination.json", &traj.termination)?;
    let t: Vec<f64> = traj.records.iter().map(|r| r.t).collect();
    let psi: Vec<f64> = traj.records.iter().map(|r| r.min_psi).collect();
    let slack: Vec<f64> = traj.records.iter().map(|r| r.min_slack).collect();
    out.write(
        "plots/neck.svg",
        &line_plot(
            "neck radius and hyperbolicity slack",
            "t",
            &[
                Series { name: "min psi", x: &t, y: &psi },
                Series { name: "min slack", x: &t, y: &slack },
            ],
        ),
    )?;
    Ok(termination_outcome(&traj.termination))
}

fn unit_bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

#[derive(Serialize)]
struct PicardSummary {
    dt: f64,
    steps: usize,
    deltas: Vec<f64>,
    ratios: Vec<(usize, f64)>,
    /// Energy-norm distance of the last iterate to the nonlinear evolution.
    distance_to_evolve: Option<f64>,
    evolve_termination: Termination,
}

fn run_picard(cfg: &PicardFile, out: &mut OutDir) -> Result<Outcome> {
    let grid = Arc::new(RadialGrid::with_spacing(cfg.r_min, cfg.r_max, cfg.dr)?);
    let bg = BackgroundCoeffs::new(cfg.background, grid.clone())?;
    let init = RadialState::from_fn(
        grid,
        0.0,
        |r| cfg.amplitude * unit_bump((r - cfg.center) / cfg.width),
        |_| 0.0,
    )?;
    let res = picard_iterate(&init, &bg, &cfg.run)?;
    let ratios = res.ratios(cfg.ratio_floor);

    let ev = crate::solver::integrate(
        &init,
        &bg,
        &EvolveConfig {
            t_end: cfg.run.t_end,
            cfl: cfg.run.cfl,
            margin: cfg.run.margin,
            record_every: usize::MAX,
            ..EvolveConfig::default()
        },
    );
    let distance = match (ev.1.is_completed(), ev.0.last(), res.iterates.last()) {
        (true, Some(a), Some(b)) => Some(energy_difference(a, b)),
        _ => None,
    };

    let rows: Vec<Vec<Cell>> = res
        .deltas
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            let ratio = ratios.iter().find(|(j, _)| *j == k + 1).map(|(_, r)| *r);
            vec![Cell::Int(k as i64 + 1), Cell::Num(d), ratio.into()]
        })
        .collect();
    out.csv("picard.csv", &["k", "delta", "ratio"], &rows)?;
    out.json(
        "picard.json",
        &PicardSummary {
            dt: res.dt,
            steps: res.steps,
            deltas: res.deltas.clone(),
            ratios,
            distance_to_evolve: distance,
            evolve_termination: ev.1,
        },
    )?;
    Ok(Outcome::ok())
}

fn sweep_cells(r: &SweepRow) -> Vec<Cell> {
    vec![
        Cell::Num(r.lambda),
        Cell::Num(r.amplitude),
        Cell::Num(r.kappa0),
        Cell::Num(r.kappa_physical),
        Cell::Num(r.t_target),
        Cell::Num(r.t_final),
        Cell::Text(r.termination.tag().into()),
        Cell::Num(r.b1),
        Cell::Num(r.b2),
        Cell::Num(r.b3),
        Cell::Num(r.min_slack),
        Cell::Num(r.huygens_leak),
        Cell::Num(r.nullform_max),
        Cell::Int(r.steps as i64),
    ]
}

fn run_sweep(cfg: &SweepFile, out: &mut OutDir) -> Result<Outcome> {
    let result = existence_window(&cfg.specs(), &cfg.window)?;
    let rows: Vec<Vec<Cell>> = result.rows.iter().map(sweep_cells).collect();
    out.csv("sweep.csv", &SweepRow::HEADER, &rows)?;
    out.json("sweep.json", &result)?;
    if result.all_completed() {
        Ok(Outcome::ok())
    } else {
        let tags: Vec<&str> = result.rows.iter().map(|r| r.termination.tag()).collect();
        Ok(Outcome::numerical(tags.join(";")))
    }
}

/// The part of an `evolve` manifest the audit needs.
#[derive(Deserialize)]
struct StoredManifest {
    mode: String,
    config: EvolveFile,
}

fn load_trajectory(dir: &Path) -> Result<(EvolveFile, Vec<RadialState>)> {
    let text = std::fs::read_to_string(dir.join("manifest.json"))?;
    let m: StoredManifest = serde_json::from_str(&text)?;
    if m.mode != "evolve" {
        return Err(Error::Config(format!("{} holds a `{}` run, not `evolve`", dir.display(), m.mode)));
    }
    let mut files: Vec<_> = std::fs::read_dir(dir.join("snapshots"))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ckpt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Checkpoint(format!("no snapshots under {}", dir.display())));
    }
    let snaps = files.iter().map(checkpoint::load).collect::<Result<Vec<_>>>()?;
    Ok((m.config, snaps))
}

#[derive(Serialize)]
struct AuditSummary {
    snapshots: usize,
    nullform_tolerance: f64,
    nullform_max: NullformResidual,
    nullform_pass: bool,
    energy_balance_max_relative: Option<f64>,
    energy_min_flux: Option<f64>,
}

fn run_audit(cfg: &AuditFile, dir: &Path, out: &mut OutDir) -> Result<Outcome> {
    let (stored, snaps) = load_trajectory(dir)?;
    let grid = snaps[0].grid.clone();
    let bg = BackgroundCoeffs::new(stored.background, grid)?;
    let mut diag = stored.run.diagnostics.clone();
    if let Some(d) = cfg.delta1 {
        diag.delta1 = d;
    }
    if let Some(c) = cfg.cone {
        diag.cone = Some(c);
    }
    if let Some(m) = cfg.energy_mode {
        diag.energy_mode = m;
    }
    let threshold = stored.run.support_threshold_rel * snaps[0].max_amplitude();
    let records = records_for(&snaps, &bg, &diag, threshold);
    let residuals: Vec<NullformResidual> = {
        use rayon::prelude::*;
        snaps.par_iter().map(|s| nullform_residual(s, &bg, diag.delta1)).collect()
    };

    let rows: Vec<Vec<Cell>> = records
        .iter()
        .zip(&residuals)
        .map(|(r, n)| {
            vec![
                Cell::Num(r.t),
                Cell::Num(r.energy),
                Cell::Num(r.flux_cumulative),
                Cell::Num(r.hyperbolicity_slack),
                Cell::Num(n.sum_factor),
                Cell::Num(n.quotient),
                Cell::Num(n.bilinear),
            ]
        })
        .collect();
    out.csv(
        "audit.csv",
        &["t", "energy", "flux_cumulative", "hyperbolicity_slack", "nullform_sum_factor", "nullform_quotient", "nullform_bilinear"],
        &rows,
    )?;

    let worst = residuals.iter().fold(NullformResidual::default(), |a, b| NullformResidual {
        sum_factor: a.sum_factor.max(b.sum_factor),
        quotient: a.quotient.max(b.quotient),
        bilinear: a.bilinear.max(b.bilinear),
    });
    let pass = worst.max() < cfg.nullform_tolerance;

    let mut balance = None;
    let mut min_flux = None;
    if let Some(cone) = diag.cone {
        let audit = energy_audit(&snaps, &bg, cone, diag.energy_mode);
        let rows: Vec<Vec<Cell>> = (0..audit.t.len())
            .map(|k| {
                vec![
                    Cell::Num(audit.t[k]),
                    Cell::Num(audit.energy[k]),
                    Cell::Num(audit.flux[k]),
                    Cell::Num(audit.remainder[k]),
                    Cell::Num(audit.forcing[k]),
                    Cell::Num(audit.balance_residual[k]),
                ]
            })
            .collect();
        out.csv(
            "energy_audit.csv",
            &["t", "energy", "flux", "remainder", "forcing", "balance_residual"],
            &rows,
        )?;
        balance = Some(audit.max_relative_residual());
        min_flux = Some(audit.min_flux());
    }
    out.json(
        "audit.json",
        &AuditSummary {
            snapshots: snaps.len(),
            nullform_tolerance: cfg.nullform_tolerance,
            nullform_max: worst,
            nullform_pass: pass,
            energy_balance_max_relative: balance,
            energy_min_flux: min_flux,
        },
    )?;
    Ok(if pass {
        Outcome::ok()
    } else {
        Outcome::numerical("nullform_residual_above_tolerance")
    })
}

fn run_converge(cfg: &ConvergeFile, out: &mut OutDir) -> Result<Outcome> {
    let table = convergence_study(cfg)?;
    let rows: Vec<Vec<Cell>> = table
        .rows
        .iter()
        .map(|r| vec![Cell::Num(r.dr), Cell::Num(r.error), r.order.into()])
        .collect();
    out.csv("convergence.csv", &["dr", "error", "order"], &rows)?;
    out.json("convergence.json", &table)?;
    Ok(Outcome::ok())
}
