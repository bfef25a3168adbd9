//! Bond disorder, escape mass and seeded trial ensembles.
//!
//! A trial removes a fixed random set of edges, evolves a walker from a
//! single vertex on what remains, and tracks how much probability has left a
//! hop zone measured on the intact patch. Ensembles average trials whose
//! seeds are derived from a base seed and the trial index.

mod disorder;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{center_vertex, classify_vertices, make_zone, Family, HopZone, LatticePatch};
use crate::spectral::{laplacian, localized_state, ChebyshevPropagator};

pub use disorder::{removal_count, remove_edges, trial_seed, DisorderRealization};

pub const DEFAULT_THRESHOLD: f64 = 0.02;
pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_ZONE_RADIUS: usize = 40;

/// Probability outside the zone.
pub fn escape_mass(prob: &[f64], zone: &HopZone) -> f64 {
    prob.iter()
        .zip(zone.membership())
        .filter(|(_, &inside)| !inside)
        .map(|(p, _)| p)
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// Inclusive: a mass exactly at the threshold counts as percolated.
pub fn percolated(prob: &[f64], zone: &HopZone, threshold: f64) -> bool {
    escape_mass(prob, zone) >= threshold
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "threshold",
            format!("must lie in (0, 1), got {threshold}"),
        ))
    }
}

/// Evenly spaced sample times `start + k·step` for `k = 0, 1, …` up to `stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && start >= 0.0) {
            return Err(Error::invalid(
                "t_start",
                format!("must be finite and >= 0, got {start}"),
            ));
        }
        if !(stop.is_finite() && stop >= start) {
            return Err(Error::invalid(
                "t_stop",
                format!("must be finite and >= t_start, got {stop}"),
            ));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::invalid(
                "t_step",
                format!("must be finite and > 0, got {step}"),
            ));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        // Slack so that e.g. 0..=0.3 step 0.1 keeps its last point.
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("times", "time grid is empty"));
    }
    if !times.iter().all(|t| t.is_finite() && *t >= 0.0) {
        return Err(Error::invalid("times", "times must be finite and >= 0"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("times", "times must be strictly increasing"));
    }
    Ok(())
}

/// How the walker's starting vertex is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Vertex nearest the patch centroid.
    Center,
    /// Interior vertex with this class label nearest the centroid.
    Class(String),
    Vertex(usize),
}

impl Origin {
    pub fn resolve(&self, patch: &LatticePatch) -> Result<usize> {
        match self {
            Origin::Center => center_vertex(patch),
            Origin::Vertex(v) if *v < patch.len() => Ok(*v),
            Origin::Vertex(v) => Err(Error::invalid(
                "origin",
                format!("vertex {v} not in patch of {}", patch.len()),
            )),
            Origin::Class(label) => {
                let classes = classify_vertices(patch);
                let n = patch.len() as f64;
                let (sx, sy) = patch
                    .positions()
                    .iter()
                    .fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
                let (cx, cy) = (sx / n, sy / n);
                let mut best: Option<(f64, usize)> = None;
                for (v, c) in classes.iter().enumerate() {
                    if !c.interior || c.label != *label {
                        continue;
                    }
                    let p = patch.position(v);
                    let d = (p[0] - cx).hypot(p[1] - cy);
                    if best.is_none_or(|(bd, _)| d < bd - 1e-9) {
                        best = Some((d, v));
                    }
                }
                best.map(|(_, v)| v).ok_or_else(|| {
                    Error::invalid(
                        "origin_class",
                        format!("no interior vertex of class {label:?} in patch"),
                    )
                })
            }
        }
    }
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Center => f.write_str("center"),
            Origin::Class(label) => f.write_str(label),
            Origin::Vertex(v) => write!(f, "vertex:{v}"),
        }
    }
}

/// Per-time records of a single disorder realization.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub removed_edges: usize,
    pub escape_mass: Vec<f64>,
    pub percolated: Vec<bool>,
}

/// One trial: remove edges, build H on the remaining graph, evolve the
/// walker localized at the zone origin through `times`.
pub fn run_trial(
    patch: &LatticePatch,
    zone: &HopZone,
    f: f64,
    seed: u64,
    times: &[f64],
    gamma: f64,
    threshold: f64,
) -> Result<TrialRecord> {
    check_times(times)?;
    check_threshold(threshold)?;
    if zone.membership().len() != patch.len() {
        return Err(Error::invalid(
            "zone",
            "zone was built on a different patch",
        ));
    }
    let disorder = remove_edges(patch, f, seed)?;
    let h = laplacian(patch.len(), &disorder.remaining_edges(patch), gamma)?;
    let mut psi = localized_state(patch.len(), zone.origin())?;

    // Uniform grids reuse one propagator.
    let mut cache: Vec<ChebyshevPropagator<'_>> = Vec::new();
    let mut escape = Vec::with_capacity(times.len());
    let mut flags = Vec::with_capacity(times.len());
    let mut now = 0.0;
    for &t in times {
        let dt = t - now;
        if dt > 0.0 {
            let prop = match cache.iter().position(|p| p.dt() == dt) {
                Some(i) => &cache[i],
                None => {
                    cache.push(ChebyshevPropagator::new(&h, dt)?);
                    cache.last().expect("just pushed")
                }
            };
            psi = prop.apply(&psi)?;
            now = t;
        }
        let m = escape_mass(&psi.probabilities(), zone);
        escape.push(m);
        flags.push(m >= threshold);
    }
    Ok(TrialRecord {
        seed,
        removed_edges: disorder.removed.len(),
        escape_mass: escape,
        percolated: flags,
    })
}

/// Inputs shared by every trial of an ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleParams {
    pub origin: Origin,
    pub zone_radius: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub gamma: f64,
    pub threshold: f64,
}

impl Default for EnsembleParams {
    fn default() -> Self {
        Self {
            origin: Origin::Center,
            zone_radius: DEFAULT_ZONE_RADIUS,
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            gamma: 1.0,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

/// Identifies what an ensemble was run on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleMetadata {
    pub family: Family,
    pub patch_params: String,
    pub origin_vertex: usize,
    pub origin_class: String,
    pub zone_radius: usize,
    pub zone_size: usize,
    pub base_seed: u64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PercolationSeries {
    pub fraction: f64,
    pub times: Vec<f64>,
    /// Mean over trials of the escape mass.
    pub escape_mass: Vec<f64>,
    /// Standard error of that mean; zero for a single trial.
    pub escape_mass_stderr: Vec<f64>,
    /// Share of trials at or above the threshold.
    pub indicator_fraction: Vec<f64>,
    pub trials: usize,
    pub threshold: f64,
    pub metadata: EnsembleMetadata,
}

struct Prepared {
    zone: HopZone,
    metadata: EnsembleMetadata,
}

fn prepare(patch: &LatticePatch, params: &EnsembleParams) -> Result<Prepared> {
    if params.trials == 0 {
        return Err(Error::invalid("trials", "need at least one trial"));
    }
    check_threshold(params.threshold)?;
    if !(params.gamma.is_finite() && params.gamma > 0.0) {
        return Err(Error::invalid(
            "gamma",
            format!("must be finite and > 0, got {}", params.gamma),
        ));
    }
    let origin = params.origin.resolve(patch)?;
    let zone_radius = i64::try_from(params.zone_radius)
        .map_err(|_| Error::invalid("zone_radius", "radius too large"))?;
    let zone = make_zone(patch, origin, zone_radius)?;
    let origin_class = classify_vertices(patch).swap_remove(origin).label;
    let metadata = EnsembleMetadata {
        family: patch.family(),
        patch_params: patch.params().describe(),
        origin_vertex: origin,
        origin_class,
        zone_radius: params.zone_radius,
        zone_size: zone.inside_count(),
        base_seed: params.base_seed,
        gamma: params.gamma,
    };
    Ok(Prepared { zone, metadata })
}

fn run_prepared(
    patch: &LatticePatch,
    prep: &Prepared,
    params: &EnsembleParams,
    f: f64,
    times: &[f64],
) -> Result<PercolationSeries> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::invalid(
            "fraction",
            format!("must lie in [0, 1], got {f}"),
        ));
    }
    let k = removal_count(f, patch.edges().len());
    let trial = |i: usize| {
        let seed = trial_seed(params.base_seed, i as u64);
        run_trial(
            patch,
            &prep.zone,
            f,
            seed,
            times,
            params.gamma,
            params.threshold,
        )
    };
    // With nothing or everything removed every realization is the same graph.
    let records: Vec<TrialRecord> = if k == 0 || k == patch.edges().len() {
        let first = trial(0)?;
        let mut all = Vec::with_capacity(params.trials);
        all.push(first.clone());
        all.extend((1..params.trials).map(|i| TrialRecord {
            seed: trial_seed(params.base_seed, i as u64),
            ..first.clone()
        }));
        all
    } else {
        (0..params.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<_>>()?
    };

    // Reduction runs in trial order so the sums do not depend on scheduling.
    let n = records.len() as f64;
    let mut mean = vec![0.0; times.len()];
    let mut hits = vec![0usize; times.len()];
    for r in &records {
        for (j, (&m, &p)) in r.escape_mass.iter().zip(&r.percolated).enumerate() {
            mean[j] += m;
            hits[j] += usize::from(p);
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let stderr = (0..times.len())
        .map(|j| {
            if records.len() < 2 {
                return 0.0;
            }
            let ss: f64 = records
                .iter()
                .map(|r| (r.escape_mass[j] - mean[j]).powi(2))
                .sum();
            (ss / (n - 1.0) / n).sqrt()
        })
        .collect();
    Ok(PercolationSeries {
        fraction: f,
        times: times.to_vec(),
        escape_mass: mean.into_iter().map(|m| m.clamp(0.0, 1.0)).collect(),
        escape_mass_stderr: stderr,
        indicator_fraction: hits.into_iter().map(|h| h as f64 / n).collect(),
        trials: records.len(),
        threshold: params.threshold,
        metadata: prep.metadata.clone(),
    })
}

/// Averages `params.trials` trials at disorder fraction `f` over `times`.
pub fn ensemble(
    patch: &LatticePatch,
    params: &EnsembleParams,
    f: f64,
    times: &[f64],
) -> Result<PercolationSeries> {
    check_times(times)?;
    let prep = prepare(patch, params)?;
    run_prepared(patch, &prep, params, f, times)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub fraction: f64,
    pub mean_escape_mass: f64,
    pub escape_mass_stderr: f64,
    pub indicator_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub t_eval: f64,
    pub trials: usize,
    pub threshold: f64,
    /// Ascending in fraction.
    pub rows: Vec<SweepRow>,
    pub metadata: EnsembleMetadata,
}

/// One ensemble per fraction, each evaluated at `t_eval`.
pub fn sweep_fraction(
    patch: &LatticePatch,
    params: &EnsembleParams,
    fractions: &[f64],
    t_eval: f64,
) -> Result<SweepTable> {
    if !(t_eval.is_finite() && t_eval > 0.0) {
        return Err(Error::invalid(
            "t_eval",
            format!("must be finite and > 0, got {t_eval}"),
        ));
    }
    if fractions.is_empty() {
        return Err(Error::invalid("fractions", "no fractions given"));
    }
    if let Some(bad) = fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::invalid(
            "fractions",
            format!("{bad} is outside [0, 1]"),
        ));
    }
    let mut sorted = fractions.to_vec();
    sorted.sort_by(f64::total_cmp);
    let prep = prepare(patch, params)?;
    let rows = sorted
        .iter()
        .map(|&f| {
            let s = run_prepared(patch, &prep, params, f, &[t_eval])?;
            Ok(SweepRow {
                fraction: f,
                mean_escape_mass: s.escape_mass[0],
                escape_mass_stderr: s.escape_mass_stderr[0],
                indicator_fraction: s.indicator_fraction[0],
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        t_eval,
        trials: params.trials,
        threshold: params.threshold,
        rows,
        metadata: prep.metadata,
    })
}

/// Quotes a CSV field when it contains a delimiter or quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const SERIES_CSV_HEADER: &str =
    "t,mean_escape_mass,indicator_fraction,trials,f,zone_radius,origin_class,family,seed";
pub const SWEEP_CSV_HEADER: &str =
    "f,t_eval,mean_escape_mass,indicator_fraction,trials,escape_mass_stderr,zone_radius,origin_class,family,seed";

/// One block of rows per series under a single header.
pub fn write_series_csv<W: Write>(mut w: W, series: &[PercolationSeries]) -> Result<()> {
    writeln!(w, "{SERIES_CSV_HEADER}")?;
    for s in series {
        let m = &s.metadata;
        let class = csv_field(&m.origin_class);
        for j in 0..s.times.len() {
            writeln!(
                w,
                "{},{:.12e},{:.12e},{},{},{},{},{},{}",
                s.times[j],
                s.escape_mass[j],
                s.indicator_fraction[j],
                s.trials,
                s.fraction,
                m.zone_radius,
                class,
                m.family,
                m.base_seed
            )?;
        }
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut w: W, table: &SweepTable) -> Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    let m = &table.metadata;
    let class = csv_field(&m.origin_class);
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{:.12e},{:.12e},{},{:.12e},{},{},{},{}",
            r.fraction,
            table.t_eval,
            r.mean_escape_mass,
            r.indicator_fraction,
            table.trials,
            r.escape_mass_stderr,
            m.zone_radius,
            class,
            m.family,
            m.base_seed
        )?;
    }
    Ok(())
}
