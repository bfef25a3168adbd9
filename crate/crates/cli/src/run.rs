//! Executes a resolved [`ExperimentConfig`] and writes its artifacts.
//!
//! Every artifact is rendered in memory, written into the output directory,
//! and listed with its SHA-256 in `manifest.json`, which is written last. If
//! anything fails, files written by this run are removed again.

use std::fs;
use std::path::{Path, PathBuf};

use quasiperc::lattice::{
    build_ammann_beenker, build_penrose, build_square, classify_vertices, make_zone,
};
use quasiperc::percolation::{
    ensemble, sweep_fraction, write_series_csv, write_sweep_csv, EnsembleParams, TimeGrid,
};
use quasiperc::spectral::{
    localized_state, write_distribution_csv, ChebyshevPropagator, Hamiltonian,
};
use quasiperc::{Family, LatticePatch};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, Mode};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] quasiperc::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Core(quasiperc::Error::InvalidParameter { .. }) => 2,
            RunError::Core(quasiperc::Error::ResourceLimit(_)) => 3,
            RunError::Core(quasiperc::Error::Accuracy(_)) => 4,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Core(quasiperc::Error::InvalidParameter { .. }) => "invalid-parameter",
            RunError::Core(quasiperc::Error::ResourceLimit(_)) => "resource-limit",
            RunError::Core(quasiperc::Error::Accuracy(_)) => "accuracy",
            RunError::Core(quasiperc::Error::MalformedPatch(_)) => "malformed-patch",
            RunError::Core(_) | RunError::Io { .. } => "io",
        }
    }

    fn key(&self) -> Option<&str> {
        match self {
            RunError::Config(e) => e.key(),
            RunError::Core(quasiperc::Error::InvalidParameter { name, .. }) => Some(name),
            _ => None,
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json_line(&self) -> String {
        let mut v = json!({ "error": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() });
        if let Some(key) = self.key() {
            v["key"] = json!(key);
        }
        v.to_string()
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> RunError {
    let context = context.into();
    move |source| RunError::Io { context, source }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub artifacts: Vec<Artifact>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Tracks what a run has written so it can be rolled back.
struct Output {
    dir: PathBuf,
    created_dir: bool,
    written: Vec<PathBuf>,
    artifacts: Vec<Artifact>,
}

impl Output {
    fn open(dir: &Path) -> Result<Self, RunError> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(io_err(format!("creating {}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            created_dir,
            written: Vec::new(),
            artifacts: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        self.written.push(path.clone());
        fs::write(&path, bytes).map_err(io_err(format!("writing {}", path.display())))?;
        Ok(())
    }

    fn artifact(&mut self, name: String, bytes: Vec<u8>) -> Result<(), RunError> {
        self.write(&name, &bytes)?;
        self.artifacts.push(Artifact {
            sha256: sha256_hex(&bytes),
            bytes: bytes.len(),
            file: name,
        });
        Ok(())
    }

    fn rollback(self) {
        for path in &self.written {
            let _ = fs::remove_file(path);
        }
        if self.created_dir {
            // Only succeeds if nothing else ended up in there.
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

pub fn build_patch(cfg: &ExperimentConfig) -> Result<LatticePatch, RunError> {
    let patch = match cfg.family {
        Family::Square => build_square(cfg.size.expect("finish() fills size"))?,
        Family::AmmannBeenker => {
            build_ammann_beenker(cfg.iterations.expect("finish() fills iterations"))?
        }
        Family::Penrose => build_penrose(cfg.iterations.expect("finish() fills iterations"))?,
    };
    Ok(patch)
}

fn time_label(t: f64) -> String {
    format!("distribution_t{t}.csv")
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary, RunError> {
    let mut out = Output::open(&cfg.out)?;
    match produce(cfg, &mut out) {
        Ok(()) => Ok(RunSummary {
            out_dir: out.dir.clone(),
            artifacts: out.artifacts,
        }),
        Err(e) => {
            out.rollback();
            Err(e)
        }
    }
}

fn produce(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), RunError> {
    let patch = build_patch(cfg)?;
    let origin = cfg.origin.resolve(&patch)?;
    let origin_class = classify_vertices(&patch).swap_remove(origin).label;
    let zone_radius = i64::try_from(cfg.zone_radius).map_err(|_| {
        RunError::Config(ConfigError::Invalid {
            key: "zone_radius",
            message: "too large".into(),
        })
    })?;
    let zone = make_zone(&patch, origin, zone_radius)?;
    let grid = TimeGrid::new(cfg.t_start, cfg.t_stop, cfg.t_step)?;
    let params = EnsembleParams {
        origin: cfg.origin.clone(),
        zone_radius: cfg.zone_radius,
        trials: cfg.trials,
        base_seed: cfg.seed,
        gamma: cfg.gamma,
        threshold: cfg.threshold,
    };

    match cfg.mode {
        Mode::PatchExport => {
            let mut bytes = Vec::new();
            patch.write_json(&mut bytes)?;
            out.artifact("patch.json".into(), bytes)?;
        }
        Mode::DumpDistribution => {
            let h = Hamiltonian::from_patch(&patch, cfg.gamma)?;
            let mut psi = localized_state(patch.len(), origin)?;
            let mut propagators: Vec<ChebyshevPropagator<'_>> = Vec::new();
            for t in grid.points() {
                let dt = t - psi.time;
                if dt > 0.0 {
                    let i = match propagators.iter().position(|p| p.dt() == dt) {
                        Some(i) => i,
                        None => {
                            propagators.push(ChebyshevPropagator::new(&h, dt)?);
                            propagators.len() - 1
                        }
                    };
                    psi = propagators[i].apply(&psi)?;
                    // Pin the clock to the grid rather than the running sum.
                    psi.time = t;
                }
                let mut bytes = Vec::new();
                write_distribution_csv(&mut bytes, &patch, &psi.probabilities())?;
                out.artifact(time_label(t), bytes)?;
            }
        }
        Mode::Timeseries => {
            let times = grid.points();
            let series = cfg
                .fractions
                .iter()
                .map(|&f| ensemble(&patch, &params, f, &times))
                .collect::<Result<Vec<_>, _>>()?;
            let mut bytes = Vec::new();
            write_series_csv(&mut bytes, &series)?;
            out.artifact("timeseries.csv".into(), bytes)?;
        }
        Mode::Sweep => {
            let table = sweep_fraction(&patch, &params, &cfg.fractions, cfg.t_stop)?;
            let mut bytes = Vec::new();
            write_sweep_csv(&mut bytes, &table)?;
            out.artifact("sweep.csv".into(), bytes)?;
        }
    }

    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "config_text": cfg.to_text(),
        "patch": {
            "family": patch.family(),
            "generation_params": patch.params(),
            "vertices": patch.len(),
            "edges": patch.edges().len(),
        },
        "origin": { "vertex": origin, "class": origin_class },
        "zone": { "radius": cfg.zone_radius, "vertices": zone.inside_count() },
        "t_eval": if cfg.mode == Mode::Sweep { json!(cfg.t_stop) } else { json!(null) },
        "artifacts": out.artifacts,
    });
    let mut text = serde_json::to_string_pretty(&manifest).map_err(quasiperc::Error::from)?;
    text.push('\n');
    out.write(MANIFEST, text.as_bytes())
}
