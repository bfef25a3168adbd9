//! Experiment configuration: a flat `key = value` file overlaid by flags.
//!
//! Keys mirror the long flag names (`t-stop`, `zone`, ...); underscores are
//! accepted in place of dashes and `zone-radius` is an alias of `zone`.
//! Lines starting with `#` are comments. Unknown or repeated keys are errors.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quasiperc::percolation::{Origin, DEFAULT_THRESHOLD, DEFAULT_TRIALS, DEFAULT_ZONE_RADIUS};
use quasiperc::Family;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub const DEFAULT_SQUARE_SIZE: usize = 30;
pub const DEFAULT_AMMANN_BEENKER_ITERATIONS: usize = 3;
pub const DEFAULT_PENROSE_ITERATIONS: usize = 4;
pub const DEFAULT_FRACTIONS: [f64; 5] = [0.0, 0.01, 0.05, 0.1, 0.3];

/// Keys in file order.
pub const KEYS: [&str; 15] = [
    "mode",
    "family",
    "size",
    "iterations",
    "origin",
    "zone",
    "gamma",
    "threshold",
    "t-start",
    "t-stop",
    "t-step",
    "fractions",
    "trials",
    "seed",
    "out",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ConfigError {
    /// The configuration field the error is about, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey(k) => Some(k),
            ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }
}

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    DumpDistribution,
    #[default]
    Timeseries,
    Sweep,
    PatchExport,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::DumpDistribution => "dump-distribution",
            Mode::Timeseries => "timeseries",
            Mode::Sweep => "sweep",
            Mode::PatchExport => "patch-export",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [
            Mode::DumpDistribution,
            Mode::Timeseries,
            Mode::Sweep,
            Mode::PatchExport,
        ]
        .into_iter()
        .find(|m| m.name() == s.replace('_', "-"))
        .ok_or_else(|| format!("unknown mode {s:?}"))
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// `center`, `vertex:<id>` (or a bare id), or an interior class label.
pub fn parse_origin(s: &str) -> Result<Origin, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("center") {
        return Ok(Origin::Center);
    }
    let id = s.strip_prefix("vertex:").unwrap_or(s);
    if let Ok(v) = id.parse::<usize>() {
        return Ok(Origin::Vertex(v));
    }
    if s.starts_with("vertex:") || s.is_empty() {
        return Err(format!("cannot parse origin {s:?}"));
    }
    Ok(Origin::Class(s.to_string()))
}

fn serialize_origin<S: Serializer>(o: &Origin, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(o)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub family: Family,
    /// Square side length; square only.
    pub size: Option<usize>,
    /// Substitution steps; quasicrystals only.
    pub iterations: Option<usize>,
    #[serde(serialize_with = "serialize_origin")]
    pub origin: Origin,
    pub zone_radius: usize,
    pub gamma: f64,
    pub threshold: f64,
    pub t_start: f64,
    pub t_stop: f64,
    pub t_step: f64,
    pub fractions: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::default(),
            family: Family::Square,
            size: None,
            iterations: None,
            origin: Origin::Center,
            zone_radius: DEFAULT_ZONE_RADIUS,
            gamma: 1.0,
            threshold: DEFAULT_THRESHOLD,
            t_start: 0.0,
            t_stop: 200.0,
            t_step: 1.0,
            fractions: DEFAULT_FRACTIONS.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

fn canonical_key(key: &str) -> Result<&'static str, ConfigError> {
    let k = key.trim().to_ascii_lowercase().replace('_', "-");
    let k = if k == "zone-radius" {
        "zone".to_string()
    } else {
        k
    };
    KEYS.iter()
        .copied()
        .find(|&known| known == k)
        .ok_or_else(|| ConfigError::UnknownKey(key.trim().to_string()))
}

/// Field name used in error messages.
fn field_name(key: &'static str) -> &'static str {
    match key {
        "zone" => "zone_radius",
        "t-start" => "t_start",
        "t-stop" => "t_stop",
        "t-step" => "t_step",
        "seed" => "base_seed",
        other => other,
    }
}

fn number<T: FromStr>(field: &'static str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| invalid(field, format!("{value:?}: {e}")))
}

fn finite(field: &'static str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = number(field, value)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(field, "must be finite"))
    }
}

impl ExperimentConfig {
    /// Sets one key from its text form, checking the value's own range.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = canonical_key(key)?;
        let field = field_name(key);
        let value = value.trim();
        match key {
            "mode" => self.mode = value.parse().map_err(|e| invalid(field, e))?,
            "family" => {
                self.family = value
                    .parse()
                    .map_err(|e: quasiperc::Error| invalid(field, e.to_string()))?
            }
            "size" => {
                let n: usize = number(field, value)?;
                if n == 0 {
                    return Err(invalid(field, "must be >= 1"));
                }
                self.size = Some(n);
            }
            "iterations" => self.iterations = Some(number(field, value)?),
            "origin" => self.origin = parse_origin(value).map_err(|e| invalid(field, e))?,
            "zone" => {
                let r: i64 = number(field, value)?;
                if r < 0 {
                    return Err(invalid(field, format!("must be >= 0, got {r}")));
                }
                self.zone_radius = r as usize;
            }
            "gamma" => {
                let g = finite(field, value)?;
                if g <= 0.0 {
                    return Err(invalid(field, format!("must be > 0, got {g}")));
                }
                self.gamma = g;
            }
            "threshold" => {
                let t = finite(field, value)?;
                if !(t > 0.0 && t < 1.0) {
                    return Err(invalid(field, format!("must lie in (0, 1), got {t}")));
                }
                self.threshold = t;
            }
            "t-start" => {
                let t = finite(field, value)?;
                if t < 0.0 {
                    return Err(invalid(field, format!("must be >= 0, got {t}")));
                }
                self.t_start = t;
            }
            "t-stop" => {
                let t = finite(field, value)?;
                if t < 0.0 {
                    return Err(invalid(field, format!("must be >= 0, got {t}")));
                }
                self.t_stop = t;
            }
            "t-step" => {
                let t = finite(field, value)?;
                if t <= 0.0 {
                    return Err(invalid(field, format!("must be > 0, got {t}")));
                }
                self.t_step = t;
            }
            "fractions" => {
                let fs = value
                    .split(',')
                    .map(|f| finite(field, f))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(bad) = fs.iter().find(|f| !(0.0..=1.0).contains(*f)) {
                    return Err(invalid(field, format!("{bad} is outside [0, 1]")));
                }
                self.fractions = fs;
            }
            "trials" => {
                let n: usize = number(field, value)?;
                if n == 0 {
                    return Err(invalid(field, "must be >= 1"));
                }
                self.trials = n;
            }
            "seed" => self.seed = number(field, value)?,
            "out" => {
                if value.is_empty() {
                    return Err(invalid(field, "must not be empty"));
                }
                self.out = PathBuf::from(value);
            }
            _ => unreachable!("key list and match arms disagree on {key}"),
        }
        Ok(())
    }

    /// Cross-field checks and family-dependent defaults.
    pub fn finish(mut self) -> Result<Self, ConfigError> {
        if self.t_stop < self.t_start {
            return Err(invalid(
                "t_stop",
                format!("{} is before t_start {}", self.t_stop, self.t_start),
            ));
        }
        match self.family {
            Family::Square => {
                if self.iterations.is_some() {
                    return Err(invalid(
                        "iterations",
                        "applies to ammann-beenker and penrose only",
                    ));
                }
                self.size.get_or_insert(DEFAULT_SQUARE_SIZE);
            }
            Family::AmmannBeenker | Family::Penrose => {
                if self.size.is_some() {
                    return Err(invalid("size", "applies to the square family only"));
                }
                self.iterations.get_or_insert(match self.family {
                    Family::AmmannBeenker => DEFAULT_AMMANN_BEENKER_ITERATIONS,
                    _ => DEFAULT_PENROSE_ITERATIONS,
                });
            }
        }
        if matches!(self.mode, Mode::Timeseries | Mode::Sweep) && self.fractions.is_empty() {
            return Err(invalid("fractions", "no fractions given"));
        }
        Ok(self)
    }

    /// Reads `path` (if any), then applies `flags` on top.
    pub fn load(path: Option<&Path>, flags: &[(&str, String)]) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            cfg.apply_text(&text)?;
        }
        for (key, value) in flags {
            cfg.set(key, value)?;
        }
        cfg.finish()
    }

    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.finish()
    }

    fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: i + 1,
                    message: format!("expected `key = value`, got {line:?}"),
                });
            };
            let canonical = canonical_key(key)?;
            if seen.contains(&canonical) {
                return Err(ConfigError::Malformed {
                    line: i + 1,
                    message: format!("`{canonical}` given twice"),
                });
            }
            seen.push(canonical);
            self.set(canonical, value)?;
        }
        Ok(())
    }

    /// File form of the config; `parse_text` reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("mode", self.mode.to_string());
        line("family", self.family.to_string());
        if let Some(n) = self.size {
            line("size", n.to_string());
        }
        if let Some(k) = self.iterations {
            line("iterations", k.to_string());
        }
        line("origin", self.origin.to_string());
        line("zone", self.zone_radius.to_string());
        line("gamma", self.gamma.to_string());
        line("threshold", self.threshold.to_string());
        line("t-start", self.t_start.to_string());
        line("t-stop", self.t_stop.to_string());
        line("t-step", self.t_step.to_string());
        line(
            "fractions",
            self.fractions
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        line("trials", self.trials.to_string());
        line("seed", self.seed.to_string());
        line("out", self.out.display().to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        let c = ExperimentConfig::parse_text("").unwrap();
        assert_eq!(c.zone_radius, 40);
        assert_eq!(c.gamma, 1.0);
        assert_eq!(c.threshold, 0.02);
        assert_eq!(c.trials, 50);
        assert_eq!(c.t_stop, 200.0);
        assert_eq!(c.t_step, 1.0);
        assert_eq!(c.size, Some(DEFAULT_SQUARE_SIZE));
    }

    #[test]
    fn negative_zone_names_zone_radius() {
        let e = ExperimentConfig::parse_text("zone = -1").unwrap_err();
        assert_eq!(e.key(), Some("zone_radius"));
        let e = ExperimentConfig::parse_text("zone_radius = -1").unwrap_err();
        assert_eq!(e.key(), Some("zone_radius"));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# base\ntrials = 50\nzone = 7\n").unwrap();
        let c = ExperimentConfig::load(Some(&path), &[("trials", "10".into())]).unwrap();
        assert_eq!(c.trials, 10);
        assert_eq!(c.zone_radius, 7);
    }

    #[test]
    fn unknown_and_repeated_keys_fail() {
        assert!(
            matches!(ExperimentConfig::parse_text("zoom = 3"), Err(ConfigError::UnknownKey(k)) if k == "zoom")
        );
        assert!(matches!(
            ExperimentConfig::parse_text("seed = 1\nseed = 2"),
            Err(ConfigError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse_text("just words"),
            Err(ConfigError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn family_specific_size_keys() {
        let c = ExperimentConfig::parse_text("family = penrose").unwrap();
        assert_eq!(c.iterations, Some(DEFAULT_PENROSE_ITERATIONS));
        assert_eq!(c.size, None);
        assert_eq!(
            ExperimentConfig::parse_text("family = penrose\nsize = 3")
                .unwrap_err()
                .key(),
            Some("size")
        );
        assert_eq!(
            ExperimentConfig::parse_text("iterations = 3")
                .unwrap_err()
                .key(),
            Some("iterations")
        );
    }

    #[test]
    fn range_errors_name_the_field() {
        for (text, field) in [
            ("gamma = 0", "gamma"),
            ("threshold = 1", "threshold"),
            ("t-step = 0", "t_step"),
            ("t_start = 5\nt_stop = 1", "t_stop"),
            ("fractions = 0.1,1.5", "fractions"),
            ("trials = 0", "trials"),
            ("seed = -3", "base_seed"),
            ("mode = plot", "mode"),
            ("family = hexagonal", "family"),
        ] {
            assert_eq!(
                ExperimentConfig::parse_text(text).unwrap_err().key(),
                Some(field),
                "{text}"
            );
        }
    }

    #[test]
    fn origins() {
        assert_eq!(parse_origin("center").unwrap(), Origin::Center);
        assert_eq!(parse_origin("vertex:12").unwrap(), Origin::Vertex(12));
        assert_eq!(parse_origin("12").unwrap(), Origin::Vertex(12));
        assert_eq!(
            parse_origin("AB:d8:s(45,45,45,45,45,45,45,45)").unwrap(),
            Origin::Class("AB:d8:s(45,45,45,45,45,45,45,45)".into())
        );
        assert!(parse_origin("vertex:x").is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut c = ExperimentConfig::default();
        for (k, v) in [
            ("mode", "sweep"),
            ("family", "ammann-beenker"),
            ("iterations", "2"),
            ("origin", "AB:d5:s(45,45,90,90,90)"),
            ("zone", "12"),
            ("gamma", "0.7"),
            ("threshold", "0.015"),
            ("t-start", "0.25"),
            ("t-stop", "33.3"),
            ("t-step", "0.1"),
            ("fractions", "0.3,0,0.123456789012345"),
            ("trials", "17"),
            ("seed", "18446744073709551615"),
            ("out", "results/run 1"),
        ] {
            c.set(k, v).unwrap();
        }
        let c = c.finish().unwrap();
        let back = ExperimentConfig::parse_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), c.to_text());
    }
}
