//! Experiment configuration files.
//!
//! A config is a TOML document:
//!
//! ```toml
//! scenario = "epsilon_scan"        # optional, must match the subcommand
//! output_path = "epsilon_scan.csv" # optional, `--out` wins
//!
//! [solver]                         # optional
//! constraint_tol = 1e-10
//! tail_tol = 1e-12
//!
//! [parameters]                     # scenario specific, see the *Params types
//! n_list = [50, 100, 200, 400, 800]
//! xi = 0.5
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::ExperimentError;
use crate::maxent::{CutoffPolicy, SolverOptions, DEFAULT_MAX_CUTOFF, DEFAULT_TAIL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Example1,
    Spread,
    EpsilonScan,
    CostGrid,
    GeneralPair,
}

impl ScenarioKind {
    /// Name used in config files and default output file names.
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Example1 => "example1",
            ScenarioKind::Spread => "spread",
            ScenarioKind::EpsilonScan => "epsilon_scan",
            ScenarioKind::CostGrid => "cost_grid",
            ScenarioKind::GeneralPair => "general_pair",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            ScenarioKind::Example1,
            ScenarioKind::Spread,
            ScenarioKind::EpsilonScan,
            ScenarioKind::CostGrid,
            ScenarioKind::GeneralPair,
        ]
        .into_iter()
        .find(|k| k.name() == name)
    }
}

fn default_width() -> f64 {
    1.0
}

fn default_xi() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example1Params {
    #[serde(default = "default_width")]
    pub width: f64,
    /// Explicit target width; defaults to the minimum feasible width.
    pub new_width: Option<f64>,
    /// Added to the target width.
    #[serde(default)]
    pub width_offset: f64,
}

impl Default for Example1Params {
    fn default() -> Self {
        Self {
            width: 1.0,
            new_width: None,
            width_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadParams {
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_spread_n")]
    pub n: usize,
    /// Defaults to `√(2/5) · width`.
    pub new_width: Option<f64>,
}

fn default_spread_n() -> usize {
    100
}

impl Default for SpreadParams {
    fn default() -> Self {
        Self {
            width: 1.0,
            n: default_spread_n(),
            new_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonScanParams {
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    /// Defaults to `√(2/5) · width`.
    pub new_width: Option<f64>,
}

fn default_n_list() -> Vec<usize> {
    vec![50, 100, 200, 400, 800]
}

impl Default for EpsilonScanParams {
    fn default() -> Self {
        Self {
            n_list: default_n_list(),
            xi: 0.5,
            width: 1.0,
            new_width: None,
        }
    }
}

/// Either `{ start, stop, points }` (inclusive, evenly spaced) or
/// `{ values = [...] }`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Linear(LinearGrid),
    Values(ValueGrid),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueGrid {
    pub values: Vec<f64>,
}

impl Grid {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Grid::Linear(LinearGrid {
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.values.clone(),
            // Points are snapped to 15 significant digits so decimal grids
            // such as 0.01..0.99 come out as the decimals they name.
            Grid::Linear(LinearGrid {
                start,
                stop,
                points,
            }) => match *points {
                0 => Vec::new(),
                1 => vec![*start],
                p => (0..p)
                    .map(|i| {
                        if i + 1 == p {
                            *stop
                        } else {
                            snap(start + (stop - start) * i as f64 / (p - 1) as f64)
                        }
                    })
                    .collect(),
            },
        }
    }
}

fn snap(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostGridParams {
    #[serde(default = "default_xi_grid")]
    pub xi: Grid,
    #[serde(default = "default_epsilon_grid")]
    pub epsilon: Grid,
    /// Squared overlap before compression.
    #[serde(default = "default_overlap_before")]
    pub overlap_before: f64,
}

fn default_xi_grid() -> Grid {
    Grid::linear(0.01, 0.99, 99)
}

fn default_epsilon_grid() -> Grid {
    Grid::linear(0.0, 0.5, 51)
}

fn default_overlap_before() -> f64 {
    0.5
}

impl Default for CostGridParams {
    fn default() -> Self {
        Self {
            xi: default_xi_grid(),
            epsilon: default_epsilon_grid(),
            overlap_before: default_overlap_before(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralPairParams {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_pair_n")]
    pub n: usize,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    /// Defaults to `√(2/5) · width`.
    pub new_width: Option<f64>,
}

fn default_alpha() -> f64 {
    0.6
}

fn default_pair_n() -> usize {
    50
}

impl Default for GeneralPairParams {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            n: default_pair_n(),
            xi: 0.5,
            width: 1.0,
            new_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Example1(Example1Params),
    Spread(SpreadParams),
    EpsilonScan(EpsilonScanParams),
    CostGrid(CostGridParams),
    GeneralPair(GeneralPairParams),
}

impl Scenario {
    pub fn default_for(kind: ScenarioKind) -> Self {
        match kind {
            ScenarioKind::Example1 => Scenario::Example1(Default::default()),
            ScenarioKind::Spread => Scenario::Spread(Default::default()),
            ScenarioKind::EpsilonScan => Scenario::EpsilonScan(Default::default()),
            ScenarioKind::CostGrid => Scenario::CostGrid(Default::default()),
            ScenarioKind::GeneralPair => Scenario::GeneralPair(Default::default()),
        }
    }

    pub fn kind(&self) -> ScenarioKind {
        match self {
            Scenario::Example1(_) => ScenarioKind::Example1,
            Scenario::Spread(_) => ScenarioKind::Spread,
            Scenario::EpsilonScan(_) => ScenarioKind::EpsilonScan,
            Scenario::CostGrid(_) => ScenarioKind::CostGrid,
            Scenario::GeneralPair(_) => ScenarioKind::GeneralPair,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub solver: SolverOptions,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn default_for(kind: ScenarioKind) -> Self {
        Self {
            scenario: Scenario::default_for(kind),
            solver: SolverOptions::default(),
            output_path: PathBuf::from(format!("{}.csv", kind.name())),
        }
    }

    pub fn from_file(kind: ScenarioKind, path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(kind, &text)
    }

    pub fn from_toml(kind: ScenarioKind, text: &str) -> Result<Self, ExperimentError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        if let Some(name) = &raw.scenario {
            match ScenarioKind::from_name(name) {
                Some(k) if k == kind => {}
                Some(_) => {
                    return Err(ExperimentError::Config(format!(
                        "config is for scenario `{name}`, not `{}`",
                        kind.name()
                    )))
                }
                None => {
                    return Err(ExperimentError::Config(format!(
                        "unknown scenario `{name}`"
                    )))
                }
            }
        }
        let params = toml::Value::Table(raw.parameters.unwrap_or_default());
        let bad = |e: toml::de::Error| ExperimentError::Config(format!("[parameters]: {e}"));
        let scenario = match kind {
            ScenarioKind::Example1 => Scenario::Example1(params.try_into().map_err(bad)?),
            ScenarioKind::Spread => Scenario::Spread(params.try_into().map_err(bad)?),
            ScenarioKind::EpsilonScan => Scenario::EpsilonScan(params.try_into().map_err(bad)?),
            ScenarioKind::CostGrid => Scenario::CostGrid(params.try_into().map_err(bad)?),
            ScenarioKind::GeneralPair => Scenario::GeneralPair(params.try_into().map_err(bad)?),
        };
        let mut solver = SolverOptions::default();
        if let Some(s) = raw.solver {
            if let Some(tol) = s.constraint_tol {
                solver.constraint_tol = tol;
            }
            if s.tail_tol.is_some() || s.max_cutoff.is_some() {
                solver.cutoff = CutoffPolicy::Adaptive {
                    tail_tol: s.tail_tol.unwrap_or(DEFAULT_TAIL_TOL),
                    max_cutoff: s.max_cutoff.unwrap_or(DEFAULT_MAX_CUTOFF),
                };
            }
            if let Some(b) = s.max_bisections {
                solver.max_bisections = b;
            }
        }
        Ok(Self {
            scenario,
            solver,
            output_path: raw
                .output_path
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", kind.name()))),
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    output_path: Option<PathBuf>,
    solver: Option<SolverSection>,
    parameters: Option<toml::Table>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSection {
    constraint_tol: Option<f64>,
    tail_tol: Option<f64>,
    max_cutoff: Option<usize>,
    max_bisections: Option<usize>,
}
