//! Experiment configuration: line-oriented `key = value` text plus a
//! `[pmf]` section of `value:probability` atoms.
//!
//! ```text
//! mode = compare
//! a = 0
//! n_list = 10000, 100000
//! replicas = 2000
//! seed = 42
//!
//! [pmf]
//! 0:3/4, 2:1/4
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use critgraph::dist::{
    compute_moments, DistError, MomentSummary, TypePmf, TypeValue, CRITICALITY_TOLERANCE,
};
use critgraph::limit::{LimitError, LimitParams, DEFAULT_DT, DEFAULT_S0};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_K: usize = 10;
pub const DEFAULT_N_LIST: [u64; 3] = [10_000, 30_000, 100_000];
pub const DEFAULT_REPLICAS: usize = 100;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Census,
    Path,
    Limit,
    Compare,
    Invariants,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Census => "census",
            Mode::Path => "path",
            Mode::Limit => "limit",
            Mode::Compare => "compare",
            Mode::Invariants => "invariants",
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

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "census" => Mode::Census,
            "path" => Mode::Path,
            "limit" => Mode::Limit,
            "compare" => Mode::Compare,
            "invariants" => Mode::Invariants,
            other => return Err(format!("unknown mode {other:?}")),
        })
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("pmf: {0}")]
    Pmf(#[from] DistError),
    #[error("limit parameters: {0}")]
    Limit(#[from] LimitError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A validated experiment configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub pmf: Vec<(TypeValue, f64)>,
    pub a: f64,
    pub n_list: Vec<u64>,
    pub replicas: usize,
    pub s0: f64,
    pub dt: f64,
    pub k: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Not part of the summary, so reruns into other directories compare equal.
    #[serde(skip)]
    pub out: PathBuf,
    pub allow_noncritical: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pmf: vec![(1, 1.0)],
            a: 0.0,
            n_list: DEFAULT_N_LIST.to_vec(),
            replicas: DEFAULT_REPLICAS,
            s0: DEFAULT_S0,
            dt: DEFAULT_DT,
            k: DEFAULT_K,
            seed: DEFAULT_SEED,
            mode: Mode::Compare,
            out: PathBuf::from("results"),
            allow_noncritical: false,
        }
    }
}

impl ExperimentConfig {
    pub fn type_pmf(&self) -> Result<TypePmf, ConfigError> {
        Ok(TypePmf::from_atoms(&self.pmf)?)
    }

    pub fn moments(&self) -> Result<MomentSummary, ConfigError> {
        Ok(compute_moments(&self.type_pmf()?, CRITICALITY_TOLERANCE)?)
    }

    pub fn limit_params(&self) -> Result<LimitParams, ConfigError> {
        Ok(LimitParams::from_moments(
            self.a,
            &self.moments()?,
            self.s0,
            self.dt,
        )?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_list.is_empty() {
            return Err(ConfigError::Invalid("n_list must be non-empty".into()));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::Invalid(
                "n_list must be strictly ascending".into(),
            ));
        }
        if self.n_list[0] == 0 {
            return Err(ConfigError::Invalid(
                "n_list entries must be positive".into(),
            ));
        }
        if self.replicas == 0 {
            return Err(ConfigError::Invalid("replicas must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(ConfigError::Invalid("k must be at least 1".into()));
        }
        if !self.a.is_finite() {
            return Err(ConfigError::Invalid("a must be finite".into()));
        }
        let m = self.moments()?;
        self.limit_params()?;
        if self.mode == Mode::Compare && !m.critical && !self.allow_noncritical {
            return Err(ConfigError::Invalid(format!(
                "compare mode needs a critical pmf (E X^2 = {}); pass --allow-noncritical to override",
                m.ex2
            )));
        }
        Ok(())
    }
}

/// `3/4`, `0.75` or `1e-4`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if den == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            num / den
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// Non-negative integer; accepts `100_000` and exact forms like `1e5`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = t.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
        Ok(v as u64)
    } else {
        Err(format!("not a count: {s:?}"))
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("not a boolean: {other:?}")),
    }
}

fn parse_atoms(s: &str, into: &mut Vec<(TypeValue, f64)>) -> Result<(), String> {
    for atom in s.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        let (v, p) = atom
            .split_once(':')
            .ok_or_else(|| format!("expected value:probability, got {atom:?}"))?;
        let v: TypeValue = v
            .trim()
            .parse()
            .map_err(|_| format!("bad type value {v:?}"))?;
        into.push((v, parse_real(p)?));
    }
    Ok(())
}

/// Parse and validate config text.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg = parse_config_unchecked(text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parse without validating, for callers that override fields first.
pub fn parse_config_unchecked(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut pmf = Vec::new();
    let mut in_pmf = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| ConfigError::Parse { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('[') {
            match body {
                "[pmf]" => in_pmf = true,
                other => return Err(err(format!("unknown section {other}"))),
            }
            continue;
        }
        if in_pmf {
            parse_atoms(body, &mut pmf).map_err(err)?;
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {body:?}")))?;
        let value = value.trim();
        match key.trim() {
            "pmf" => parse_atoms(value, &mut pmf).map_err(err)?,
            "a" => cfg.a = parse_real(value).map_err(err)?,
            "n_list" => {
                cfg.n_list = value
                    .split(',')
                    .map(parse_count)
                    .collect::<Result<_, _>>()
                    .map_err(err)?
            }
            "replicas" => cfg.replicas = parse_count(value).map_err(err)? as usize,
            "s0" => cfg.s0 = parse_real(value).map_err(err)?,
            "dt" => cfg.dt = parse_real(value).map_err(err)?,
            "k" | "K" => cfg.k = parse_count(value).map_err(err)? as usize,
            "seed" => cfg.seed = parse_count(value).map_err(err)?,
            "mode" => cfg.mode = value.parse().map_err(err)?,
            "out" => cfg.out = PathBuf::from(value),
            "allow_noncritical" => cfg.allow_noncritical = parse_bool(value).map_err(err)?,
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    if !pmf.is_empty() {
        cfg.pmf = pmf;
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    parse_config(&read(path)?)
}

pub fn load_config_unchecked(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    parse_config_unchecked(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_is_critical() {
        let cfg = parse_config("a = 0\nn_list = 1000\n[pmf]\n1:1\n").unwrap();
        assert!(cfg.moments().unwrap().critical);
        assert_eq!(cfg.n_list, vec![1000]);
        assert_eq!((cfg.dt, cfg.s0, cfg.k), (1e-4, 8.0, 10));
    }

    #[test]
    fn two_atom_pmf_is_exactly_critical() {
        for text in ["pmf = 0:0.75, 2:0.25", "[pmf]\n0:3/4\n2:1/4"] {
            let m = parse_config(text).unwrap().moments().unwrap();
            assert!(m.critical);
            assert_eq!(m.ex2, 1.0);
            assert_eq!(m.beta, 4.0);
        }
    }

    #[test]
    fn supercritical_pmf_needs_override_in_compare_mode() {
        let text = "mode = compare\npmf = 1:0.9, 2:0.1";
        assert!(matches!(parse_config(text), Err(ConfigError::Invalid(_))));
        let cfg = parse_config(&format!("{text}\nallow_noncritical = true")).unwrap();
        assert!((cfg.moments().unwrap().ex2 - 1.3).abs() < 1e-12);
        assert!(parse_config("mode = census\npmf = 1:0.9, 2:0.1").is_ok());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_config("a = 0\n\nreplicas = many\n") {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_config("[pmf]\n1:1\n2-0.5\n") {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config("colour = blue"),
            Err(ConfigError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn validation_names_the_invariant() {
        let msg = |t: &str| parse_config(t).unwrap_err().to_string();
        assert!(msg("n_list = 100, 50").contains("ascending"));
        assert!(msg("replicas = 0").contains("replicas"));
        assert!(msg("k = 0").contains("k must"));
        assert!(msg("pmf = 1:0.5").contains("pmf"));
    }

    #[test]
    fn counts_accept_exponent_and_underscores() {
        assert_eq!(parse_count("1e5"), Ok(100_000));
        assert_eq!(parse_count("30_000"), Ok(30_000));
        assert!(parse_count("1.5").is_err());
        assert_eq!(parse_real("3/4"), Ok(0.75));
        assert!(parse_real("1/0").is_err());
    }
}
