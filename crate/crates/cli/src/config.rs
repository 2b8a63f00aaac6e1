//! Experiment configuration: a flat `key = value` file, overridden by flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ringwalk::{linspace, Config, WalkError};

use crate::error::{ConfigError, ConfigErrorKind};

pub const KEYS: &[&str] = &[
    "n",
    "delta",
    "phi",
    "phi_over_pin",
    "tau",
    "total_time",
    "phi_grid",
    "tau_grid",
    "time_grid",
    "n_list",
    "t_list",
    "k_max",
    "out",
    "workers",
    "tol_degenerate",
    "tol_unit",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEntry {
    pub value: String,
    /// Line in the config file; `None` for command-line flags.
    pub line: Option<usize>,
}

/// Unvalidated key/value pairs from a file and flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, RawEntry>,
}

impl RawConfig {
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::new(
                    ConfigErrorKind::Syntax,
                    None,
                    Some(lineno),
                    format!("expected `key = value`, got `{content}`"),
                ));
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::new(
                    ConfigErrorKind::UnknownKey,
                    Some(&key),
                    Some(lineno),
                    format!("unknown key `{key}`"),
                ));
            }
            if value.is_empty() {
                return Err(ConfigError::new(ConfigErrorKind::Malformed, Some(&key), Some(lineno), "empty value"));
            }
            if let Some(prev) = raw.entries.get(&key) {
                return Err(ConfigError::new(
                    ConfigErrorKind::Syntax,
                    Some(&key),
                    Some(lineno),
                    format!("duplicate key, first set on line {}", prev.line.unwrap_or(0)),
                ));
            }
            raw.entries.insert(
                key,
                RawEntry {
                    value: value.to_owned(),
                    line: Some(lineno),
                },
            );
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new(ConfigErrorKind::Io, None, None, format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse_str(&text)
    }

    /// Command-line value; replaces any file value for the same quantity.
    pub fn set_flag(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::new(ConfigErrorKind::UnknownKey, Some(&key), None, format!("unknown key `{key}`")));
        }
        // the two phase spellings describe one quantity
        match key.as_str() {
            "phi" => {
                self.entries.remove("phi_over_pin");
            }
            "phi_over_pin" => {
                self.entries.remove("phi");
            }
            _ => {}
        }
        self.entries.insert(
            key,
            RawEntry {
                value: value.trim().to_owned(),
                line: None,
            },
        );
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&RawEntry> {
        self.entries.get(key)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Inclusive evenly spaced axis, written `LO:HI:COUNT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.count)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.16e}:{:.16e}:{}", self.lo, self.hi, self.count)
    }
}

/// Resolved, validated configuration. Fields a subcommand does not need may
/// stay unset; the subcommand asks for what it requires.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub delta: Option<usize>,
    pub phi: Option<f64>,
    pub tau: Option<f64>,
    pub total_time: Option<f64>,
    pub phi_grid: Option<GridSpec>,
    pub tau_grid: Option<GridSpec>,
    pub time_grid: Option<GridSpec>,
    pub n_list: Option<Vec<usize>>,
    pub t_list: Option<Vec<f64>>,
    pub k_max: Option<usize>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub tol_degenerate: Option<f64>,
    pub tol_unit: Option<f64>,
}

fn err(kind: ConfigErrorKind, key: &str, e: &RawEntry, msg: impl Into<String>) -> ConfigError {
    ConfigError::new(kind, Some(key), e.line, msg)
}

fn parse_usize(key: &str, e: &RawEntry) -> Result<usize, ConfigError> {
    e.value
        .parse()
        .map_err(|_| err(ConfigErrorKind::Malformed, key, e, format!("expected a nonnegative integer, got `{}`", e.value)))
}

fn parse_float(key: &str, e: &RawEntry, text: &str) -> Result<f64, ConfigError> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(ConfigErrorKind::Malformed, key, e, format!("expected a finite number, got `{text}`"))),
    }
}

fn parse_grid(key: &str, e: &RawEntry) -> Result<GridSpec, ConfigError> {
    let parts: Vec<&str> = e.value.split(':').collect();
    if parts.len() != 3 {
        return Err(err(ConfigErrorKind::Malformed, key, e, format!("expected LO:HI:COUNT, got `{}`", e.value)));
    }
    let lo = parse_float(key, e, parts[0])?;
    let hi = parse_float(key, e, parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| err(ConfigErrorKind::Malformed, key, e, format!("bad point count `{}`", parts[2])))?;
    if count == 0 {
        return Err(err(ConfigErrorKind::OutOfRange, key, e, "point count must be at least 1"));
    }
    if lo > hi {
        return Err(err(ConfigErrorKind::OutOfRange, key, e, "grid requires LO <= HI"));
    }
    Ok(GridSpec { lo, hi, count })
}

fn parse_list<T>(key: &str, e: &RawEntry, item: impl Fn(&str) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    let out: Vec<T> = e.value.split(',').map(|s| item(s.trim())).collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(err(ConfigErrorKind::Malformed, key, e, "empty list"));
    }
    Ok(out)
}

fn phase_bound(n: usize) -> f64 {
    PI / n as f64 * (1.0 + 8.0 * f64::EPSILON)
}

impl ExperimentConfig {
    pub fn resolve(raw: &RawConfig) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        let get = |k: &str| raw.get(k);

        if let Some(e) = get("n") {
            let n = parse_usize("n", e)?;
            if n < 3 {
                return Err(err(ConfigErrorKind::OutOfRange, "n", e, format!("ring needs at least 3 sites, got {n}")));
            }
            c.n = Some(n);
        }
        if let Some(e) = get("delta") {
            let d = parse_usize("delta", e)?;
            let n = c.n.ok_or_else(|| ConfigError::missing("n"))?;
            if d == 0 || d >= n {
                return Err(err(ConfigErrorKind::OutOfRange, "delta", e, format!("target site {d} must satisfy 0 < delta < {n}")));
            }
            c.delta = Some(d);
        }
        if let Some(e) = get("phi") {
            let phi = parse_float("phi", e, &e.value)?;
            if let Some(n) = c.n {
                if phi.abs() > phase_bound(n) {
                    return Err(err(ConfigErrorKind::OutOfRange, "phi", e, format!("|phi| = {} exceeds pi/{n}", phi.abs())));
                }
            }
            c.phi = Some(phi);
        }
        if let Some(e) = get("phi_over_pin") {
            let x = parse_float("phi_over_pin", e, &e.value)?;
            if x.abs() > 1.0 {
                return Err(err(ConfigErrorKind::OutOfRange, "phi_over_pin", e, "phi*N/pi must lie in [-1, 1]"));
            }
            let n = c.n.ok_or_else(|| ConfigError::missing("n"))?;
            c.phi = Some(x * PI / n as f64);
        }
        for (key, slot) in [("tau", &mut c.tau), ("total_time", &mut c.total_time)] {
            if let Some(e) = get(key) {
                let v = parse_float(key, e, &e.value)?;
                if v <= 0.0 {
                    return Err(err(ConfigErrorKind::OutOfRange, key, e, format!("{key} must be positive, got {v}")));
                }
                *slot = Some(v);
            }
        }
        if let (Some(tau), Some(t)) = (c.tau, c.total_time) {
            if t < tau {
                let e = get("total_time").expect("set above");
                return Err(err(ConfigErrorKind::OutOfRange, "total_time", e, format!("budget {t} admits no attempt at tau = {tau}")));
            }
        }
        if let Some(e) = get("phi_grid") {
            let g = parse_grid("phi_grid", e)?;
            if let Some(n) = c.n {
                if g.lo.abs() > phase_bound(n) || g.hi.abs() > phase_bound(n) {
                    return Err(err(ConfigErrorKind::OutOfRange, "phi_grid", e, format!("phases must lie in [-pi/{n}, pi/{n}]")));
                }
            }
            c.phi_grid = Some(g);
        }
        for (key, slot) in [("tau_grid", &mut c.tau_grid), ("time_grid", &mut c.time_grid)] {
            if let Some(e) = get(key) {
                let g = parse_grid(key, e)?;
                let floor_ok = if key == "tau_grid" { g.lo > 0.0 } else { g.lo >= 0.0 };
                if !floor_ok {
                    return Err(err(ConfigErrorKind::OutOfRange, key, e, "grid start out of range"));
                }
                *slot = Some(g);
            }
        }
        if let Some(e) = get("n_list") {
            let list = parse_list("n_list", e, |s| {
                let v: usize = s
                    .parse()
                    .map_err(|_| err(ConfigErrorKind::Malformed, "n_list", e, format!("bad ring size `{s}`")))?;
                if v < 3 {
                    return Err(err(ConfigErrorKind::OutOfRange, "n_list", e, format!("ring size {v} below 3")));
                }
                Ok(v)
            })?;
            c.n_list = Some(list);
        }
        if let Some(e) = get("t_list") {
            let list = parse_list("t_list", e, |s| {
                let v = parse_float("t_list", e, s)?;
                if v <= 0.0 {
                    return Err(err(ConfigErrorKind::OutOfRange, "t_list", e, "budgets must be positive"));
                }
                Ok(v)
            })?;
            c.t_list = Some(list);
        }
        for (key, slot) in [("k_max", &mut c.k_max), ("workers", &mut c.workers)] {
            if let Some(e) = get(key) {
                let v = parse_usize(key, e)?;
                if v == 0 {
                    return Err(err(ConfigErrorKind::OutOfRange, key, e, format!("{key} must be at least 1")));
                }
                *slot = Some(v);
            }
        }
        for (key, slot) in [("tol_degenerate", &mut c.tol_degenerate), ("tol_unit", &mut c.tol_unit)] {
            if let Some(e) = get(key) {
                let v = parse_float(key, e, &e.value)?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(err(ConfigErrorKind::OutOfRange, key, e, "tolerance must lie in (0, 1)"));
                }
                *slot = Some(v);
            }
        }
        if let Some(e) = get("out") {
            c.out = Some(PathBuf::from(&e.value));
        }
        Ok(c)
    }

    pub fn require_n(&self) -> Result<usize, ConfigError> {
        self.n.ok_or_else(|| ConfigError::missing("n"))
    }

    pub fn require_total_time(&self) -> Result<f64, ConfigError> {
        self.total_time.ok_or_else(|| ConfigError::missing("total_time"))
    }

    pub fn require_tau(&self) -> Result<f64, ConfigError> {
        self.tau.ok_or_else(|| ConfigError::missing("tau"))
    }

    /// Explicit target, or the site opposite the start.
    pub fn delta_or_default(&self) -> Result<usize, ConfigError> {
        Ok(self.delta.unwrap_or(Config::opposite_site(self.require_n()?)))
    }

    pub fn phi_or_zero(&self) -> f64 {
        self.phi.unwrap_or(0.0)
    }

    pub fn phi_values(&self, n: usize) -> Vec<f64> {
        match self.phi_grid {
            Some(g) => g.values(),
            None => ringwalk::default_phi_grid(n),
        }
    }

    pub fn tau_values(&self) -> Vec<f64> {
        match self.tau_grid {
            Some(g) => g.values(),
            None => ringwalk::default_tau_grid(),
        }
    }

    /// Fully specified walk, with tolerance overrides applied.
    pub fn walk_config(&self) -> Result<Config, ConfigError> {
        let n = self.require_n()?;
        let tau = self.require_tau()?;
        let total_time = self.require_total_time()?;
        let mut cfg = Config::new(n, self.delta_or_default()?, self.phi_or_zero(), tau, total_time).map_err(walk_to_config)?;
        if let Some(t) = self.tol_degenerate {
            cfg.tol_degenerate = t;
        }
        if let Some(t) = self.tol_unit {
            cfg.tol_unit = t;
        }
        Ok(cfg)
    }

    /// `key = value` lines describing every resolved field.
    pub fn echo(&self) -> Vec<String> {
        let mut out = vec![];
        let mut put = |k: &str, v: String| out.push(format!("{k} = {v}"));
        if let Some(v) = self.n {
            put("n", v.to_string());
        }
        if let Ok(v) = self.delta_or_default() {
            put("delta", v.to_string());
        }
        if let Some(v) = self.phi {
            put("phi", format!("{v:.16e}"));
        }
        if let Some(v) = self.tau {
            put("tau", format!("{v:.16e}"));
        }
        if let Some(v) = self.total_time {
            put("total_time", format!("{v:.16e}"));
        }
        for (k, g) in [("phi_grid", self.phi_grid), ("tau_grid", self.tau_grid), ("time_grid", self.time_grid)] {
            if let Some(g) = g {
                put(k, g.to_string());
            }
        }
        if let Some(v) = &self.n_list {
            put("n_list", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        }
        if let Some(v) = &self.t_list {
            put("t_list", v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(","));
        }
        if let Some(v) = self.k_max {
            put("k_max", v.to_string());
        }
        if let Some(v) = self.tol_degenerate {
            put("tol_degenerate", format!("{v:.16e}"));
        }
        if let Some(v) = self.tol_unit {
            put("tol_unit", format!("{v:.16e}"));
        }
        out
    }
}

/// Map a validation failure from the core onto the key responsible.
pub fn walk_to_config(e: WalkError) -> ConfigError {
    let key = match &e {
        WalkError::TooFewSites(_) => "n",
        WalkError::InvalidTarget { .. } => "delta",
        WalkError::PhaseOutOfRange { .. } => "phi",
        WalkError::NonPositive { name, .. } => name,
        WalkError::InvalidBudget { .. } => "total_time",
        _ => return ConfigError::new(ConfigErrorKind::OutOfRange, None, None, e.to_string()),
    };
    ConfigError::new(ConfigErrorKind::OutOfRange, Some(key), None, e.to_string())
}
