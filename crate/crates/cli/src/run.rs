//! Subcommand bodies. Each computes everything first, then writes its files.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qtl_core::complexity::{cap_from_mi, max_of, rademacher_cap_dim, rademacher_estimates, renyi2_mi_profile, RademacherPair};
use qtl_core::divergence::{dst_trace_from_profiles, dst_tv};
use qtl_core::classifier::min_risk_profile;
use qtl_core::embedding::EmbeddingTable;
use qtl_core::pipeline::{bound_no_transfer, bound_transfer, replicate, shift_sweep, Experiment, RiskReport, ShiftPoint, ShiftSweep};
use qtl_core::validation::{run_suite, PropertyResult, SuiteOptions, SuiteSize};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::plot::{risk_curve_svg, shift_sweep_svg};
use crate::table::{risk_curve_header, to_csv, Cell, BOUNDS_HEADER, BOUND_COMPONENTS, SHIFT_SWEEP_HEADER};

fn config_error(field: &str, message: &str) -> CliError {
    CliError::Config { field: field.into(), message: message.into() }
}

/// Every (N^S, N^T) cell, in config order.
pub fn cells(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    cfg.n_source.iter().flat_map(|&s| cfg.n_target.iter().map(move |&t| (s, t))).collect()
}

pub fn risk_curve(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<RiskReport<f64>>> {
    let ansatz = cfg.ansatz()?;
    let pair = cfg.task_pair()?;
    let table = cfg.table(&pair, &cfg.grid()?)?;
    let exp = Experiment { embedding: &ansatz, table: &table, pair: &pair, bound: cfg.bound, replications: cfg.replications };
    Ok(replicate(&exp, &cells(cfg), seed)?)
}

pub fn risk_curve_csv(reports: &[RiskReport<f64>]) -> Result<String> {
    let rows: Vec<Vec<Cell>> = reports
        .iter()
        .map(|r| {
            let mut row = vec![
                Cell::Int(r.n_source),
                Cell::Int(r.n_target),
                Cell::Int(r.replications),
                Cell::Real(r.median),
                Cell::Real(r.q25),
                Cell::Real(r.q75),
                Cell::Real(r.excess_raw_mean),
                Cell::Real(r.bound.value),
            ];
            row.extend(BOUND_COMPONENTS.iter().map(|c| r.bound.component(c).map_or(Cell::Empty, Cell::Real)));
            row
        })
        .collect();
    to_csv(&risk_curve_header(), &rows)
}

pub fn shift_points(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<ShiftPoint<f64>>> {
    let (source, target) = cfg.gaussian_specs()?;
    let [n_source] = cfg.n_source[..] else {
        return Err(config_error("n_source", "a shift sweep takes exactly one source sample size"));
    };
    let [n_target] = cfg.n_target[..] else {
        return Err(config_error("n_target", "a shift sweep takes exactly one target sample size"));
    };
    if n_source == 0 {
        return Err(config_error("n_source", "a shift sweep needs source data (>= 1)"));
    }
    if cfg.shifts.is_empty() {
        return Err(config_error("shifts", "must list at least one shift"));
    }
    let sweep =
        ShiftSweep { source, target, shifts: cfg.shifts.clone(), n_source, n_target, replications: cfg.replications, bound: cfg.bound };
    Ok(shift_sweep(&cfg.ansatz()?, &cfg.grid()?, &sweep, seed)?)
}

pub fn shift_sweep_csv(points: &[ShiftPoint<f64>]) -> Result<String> {
    let rows: Vec<Vec<Cell>> = points
        .iter()
        .map(|p| {
            [p.shift, p.report.median, p.report.q25, p.report.q75, p.report.bound.value, p.dst_trace, p.dst_tv]
                .map(Cell::Real)
                .to_vec()
        })
        .collect();
    to_csv(&SHIFT_SWEEP_HEADER, &rows)
}

/// One row of the bounds table.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub n_source: usize,
    pub n_target: usize,
    pub mi_sup_source: f64,
    pub mi_sup_target: f64,
    pub cap_mi: f64,
    pub cap_dim: f64,
    pub mc: RademacherPair<f64>,
    pub dst_trace: f64,
    pub dst_tv: f64,
    pub bound_no_transfer: f64,
    /// Absent for the N^S = 0 baseline.
    pub bound_transfer: Option<f64>,
}

/// Bound terms for every cell. Monte-Carlo complexities of the target task
/// are estimated at N^T on the coarser `mc_grid_resolution` grid.
pub fn bounds(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<BoundsRow>> {
    let ansatz = cfg.ansatz()?;
    let pair = cfg.task_pair()?;
    let table = cfg.table(&pair, &cfg.grid()?)?;
    let mc_table = EmbeddingTable::new(&ansatz, &cfg.mc_grid()?, pair.source.features())?;
    let mut bound_cfg = cfg.bound;
    bound_cfg.seed = seed;

    let mi_sup_source = max_of(&renyi2_mi_profile(&pair.source, &table)?);
    let mi_sup_target = max_of(&renyi2_mi_profile(&pair.target, &table)?);
    let cap_mi = cap_from_mi(mi_sup_target);
    let cap_dim = rademacher_cap_dim(&ansatz, &pair.target);
    let dst_trace = dst_trace_from_profiles(&min_risk_profile(&pair.source, &table)?, &min_risk_profile(&pair.target, &table)?);
    let dst_tv = dst_tv(&pair)?;

    let mut mc = BTreeMap::new();
    for &n in &cfg.n_target {
        if let Entry::Vacant(slot) = mc.entry(n) {
            slot.insert(rademacher_estimates(&pair.target, &mc_table, n, &cfg.bound.estimator, seed)?);
        }
    }
    cells(cfg)
        .into_iter()
        .map(|(n_source, n_target)| {
            let no_transfer = bound_no_transfer(&bound_cfg, &pair.target, &ansatz, &table, n_target)?;
            let transfer = match n_source {
                0 => None,
                n => Some(bound_transfer(&bound_cfg, &pair, &ansatz, &table, n, n_target)?.value),
            };
            Ok(BoundsRow {
                n_source,
                n_target,
                mi_sup_source,
                mi_sup_target,
                cap_mi,
                cap_dim,
                mc: mc[&n_target],
                dst_trace,
                dst_tv,
                bound_no_transfer: no_transfer.value,
                bound_transfer: transfer,
            })
        })
        .collect()
}

pub fn bounds_csv(rows: &[BoundsRow]) -> Result<String> {
    let rows: Vec<Vec<Cell>> = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.n_source),
                Cell::Int(r.n_target),
                Cell::Real(r.mi_sup_source),
                Cell::Real(r.mi_sup_target),
                Cell::Real(r.cap_mi),
                Cell::Real(r.cap_dim),
                Cell::Real(r.mc.povm.value),
                Cell::Real(r.mc.joint.value),
                Cell::Real(r.dst_trace),
                Cell::Real(r.dst_tv),
                Cell::Real(r.bound_no_transfer),
                r.bound_transfer.map_or(Cell::Empty, Cell::Real),
            ]
        })
        .collect();
    to_csv(&BOUNDS_HEADER, &rows)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.into(), source: e })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
    Ok(path)
}

pub fn run_risk_curve(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    let csv = risk_curve_csv(&risk_curve(cfg, seed)?)?;
    let svg = risk_curve_svg(&csv)?;
    Ok(vec![write(out, "risk_curve.csv", &csv)?, write(out, "risk_curve.svg", &svg)?])
}

pub fn run_shift_sweep(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    let csv = shift_sweep_csv(&shift_points(cfg, seed)?)?;
    let svg = shift_sweep_svg(&csv)?;
    Ok(vec![write(out, "shift_sweep.csv", &csv)?, write(out, "shift_sweep.svg", &svg)?])
}

pub fn run_bounds(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    let csv = bounds_csv(&bounds(cfg, seed)?)?;
    Ok(vec![write(out, "bounds.csv", &csv)?])
}

pub fn run_validate(seed: u64, quick: bool, corrupt_helstrom: bool) -> Result<Vec<PropertyResult>> {
    let size = if quick { SuiteSize::quick() } else { SuiteSize::default() };
    Ok(run_suite(seed, &SuiteOptions { size, corrupt_helstrom })?)
}

pub fn format_property(r: &PropertyResult) -> String {
    format!(
        "{} {:<34} cases={:<8} max_violation={:.3e} tolerance={:.1e}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.name,
        r.cases,
        r.max_violation,
        r.tolerance
    )
}
