//! TOML run configuration.
//!
//! ```toml
//! [geometry]
//! T = 2.5
//! m_steps = 16
//! degree = 0
//!
//! [spectral]
//! n_modes = 256
//!
//! [problem]
//! kind = "dirichlet"      # or "neumann"
//! profile = 3             # F(s) = s^p for s > 0
//! method = "ht"           # or "energetic"
//! rhs_operator = "K'"     # or "K"
//!
//! [study]
//! levels = [8, 16, 32, 64]
//! norms = ["l2", "dual_proxy"]
//! output = "convergence.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::solvers::{DirichletMethod, NeumannRhs};
use crate::spectral::DEFAULT_MODES;

/// Invalid or unreadable configuration, anchored to a line when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.path.display(), line, self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    DualProxy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub final_time: f64,
    pub m_steps: usize,
    pub degree: usize,
    pub n_modes: usize,
    pub problem: ProblemKind,
    pub profile: u32,
    pub method: DirichletMethod,
    pub rhs: NeumannRhs,
    pub levels: Vec<usize>,
    pub norms: Vec<NormKind>,
    pub output: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            final_time: 2.5,
            m_steps: 16,
            degree: 0,
            n_modes: DEFAULT_MODES,
            problem: ProblemKind::Dirichlet,
            profile: 3,
            method: DirichletMethod::Hilbert,
            rhs: NeumannRhs::AdjointDoubleLayer,
            levels: vec![8, 16, 32, 64],
            norms: vec![NormKind::L2, NormKind::DualProxy],
            output: PathBuf::from("convergence.csv"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    geometry: RawGeometry,
    #[serde(default)]
    spectral: RawSpectral,
    problem: RawProblem,
    #[serde(default)]
    study: RawStudy,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    #[serde(rename = "T")]
    final_time: f64,
    m_steps: i64,
    degree: Option<i64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSpectral {
    n_modes: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: String,
    profile: Option<i64>,
    method: Option<String>,
    rhs_operator: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    levels: Option<Vec<i64>>,
    norms: Option<Vec<String>>,
    output: Option<String>,
}

/// 1-based line of `key` inside `[section]`, if present.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = "";
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            current = name.trim();
            if key.is_empty() && current == section {
                return Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some((k, _)) = trimmed.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.to_path_buf(),
            line: None,
            message: format!("cannot read config: {e}"),
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let err = |section: &str, key: &str, message: String| ConfigError {
            path: path.to_path_buf(),
            line: locate(text, section, key).or_else(|| locate(text, section, "")),
            message,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1));
            ConfigError { path: path.to_path_buf(), line, message: e.message().to_string() }
        })?;
        let defaults = Config::default();

        let g = raw.geometry;
        if !(g.final_time.is_finite() && g.final_time > 0.0) {
            return Err(err("geometry", "T", format!("T must be positive, got {}", g.final_time)));
        }
        if g.m_steps < 1 {
            return Err(err("geometry", "m_steps", format!("m_steps must be at least 1, got {}", g.m_steps)));
        }

        let problem = match raw.problem.kind.as_str() {
            "dirichlet" => ProblemKind::Dirichlet,
            "neumann" => ProblemKind::Neumann,
            other => {
                return Err(err("problem", "kind", format!("kind must be \"dirichlet\" or \"neumann\", got {other:?}")))
            }
        };
        let expected_degree = match problem {
            ProblemKind::Dirichlet => 0,
            ProblemKind::Neumann => 1,
        };
        let degree = g.degree.unwrap_or(expected_degree);
        if degree != expected_degree {
            return Err(err(
                "geometry",
                "degree",
                format!("the {problem:?} solver uses degree {expected_degree} unknowns, got {degree}").to_lowercase(),
            ));
        }

        let n_modes = raw.spectral.n_modes.unwrap_or(defaults.n_modes as i64);
        if n_modes < 1 {
            return Err(err("spectral", "n_modes", format!("n_modes must be at least 1, got {n_modes}")));
        }

        let profile = raw.problem.profile.unwrap_or(defaults.profile as i64);
        if !(1..=12).contains(&profile) {
            return Err(err("problem", "profile", format!("profile exponent must be in 1..=12, got {profile}")));
        }
        let method = match raw.problem.method.as_deref() {
            None | Some("ht") => DirichletMethod::Hilbert,
            Some("energetic") => DirichletMethod::Energetic,
            Some(other) => {
                return Err(err("problem", "method", format!("method must be \"ht\" or \"energetic\", got {other:?}")))
            }
        };
        let rhs = match raw.problem.rhs_operator.as_deref() {
            None | Some("K'") | Some("K′") => NeumannRhs::AdjointDoubleLayer,
            Some("K") => NeumannRhs::DoubleLayer,
            Some(other) => {
                return Err(err("problem", "rhs_operator", format!("rhs_operator must be \"K'\" or \"K\", got {other:?}")))
            }
        };

        let levels = match raw.study.levels {
            None => defaults.levels,
            Some(levels) => {
                if levels.is_empty() || levels.iter().any(|&l| l < 1) {
                    return Err(err("study", "levels", "levels must be a non-empty list of positive step counts".into()));
                }
                if levels.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(err("study", "levels", "levels must be strictly increasing".into()));
                }
                levels.into_iter().map(|l| l as usize).collect()
            }
        };
        let norms = match raw.study.norms {
            None => defaults.norms,
            Some(names) => names
                .iter()
                .map(|n| match n.as_str() {
                    "l2" => Ok(NormKind::L2),
                    "dual_proxy" => Ok(NormKind::DualProxy),
                    other => Err(err("study", "norms", format!("unknown norm {other:?} (use \"l2\", \"dual_proxy\")"))),
                })
                .collect::<Result<_, _>>()?,
        };
        let output = raw.study.output.map(PathBuf::from).unwrap_or(defaults.output);

        Ok(Self {
            final_time: g.final_time,
            m_steps: g.m_steps as usize,
            degree: degree as usize,
            n_modes: n_modes as usize,
            problem,
            profile: profile as u32,
            method,
            rhs,
            levels,
            norms,
            output,
        })
    }
}
