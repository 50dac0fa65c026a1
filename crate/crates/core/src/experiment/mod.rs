//! Reproducible scenarios behind the `isowell` command line tool.
//!
//! Each scenario turns an [`ExperimentConfig`] into a CSV [`Table`] and a
//! plain-text summary. Rows are validated (normalization and energy
//! conservation) before they are emitted.

pub mod config;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

pub use config::{
    CostGridParams, EpsilonScanParams, Example1Params, ExperimentConfig, GeneralPairParams, Grid,
    Scenario, ScenarioKind, SpreadParams,
};

use crate::compression::{
    compress, min_feasible_width, probe_weight, CompressedState, WIDTH_SLACK,
};
use crate::discrimination::{
    cost_delta, discriminate_report, helstrom_cost, make_general_pair, Prior,
};
use crate::fit::loglog_slope;
use crate::maxent::SolverOptions;
use crate::well::{StateVector, WellGeometry, NORM_TOL};

/// Version written in the first column of every CSV this module emits.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Tolerance on the cost-difference sign check in `cost-grid`.
pub const DELTA_SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("output error: {0}")]
    Io(String),
}

impl ExperimentError {
    /// 0 success, 2 invalid config, 3 infeasible physics, 4 solver or
    /// invariant failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Model(e) if e.is_infeasible() => 3,
            ExperimentError::Model(e) if e.is_solver_failure() => 4,
            ExperimentError::Model(_) => 2,
            ExperimentError::Invariant(_) | ExperimentError::Io(_) => 4,
        }
    }
}

type Result<T> = std::result::Result<T, ExperimentError>;

/// 17 significant digits, so values survive a text round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        let mut header = vec!["schema_version"];
        header.extend_from_slice(columns);
        Self {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, cells: Vec<String>) {
        let mut row = vec![CSV_SCHEMA_VERSION.to_string()];
        row.extend(cells);
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| ExperimentError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.into_inner()
            .map_err(|e| ExperimentError::Io(e.to_string()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let bytes = self.to_csv_bytes()?;
        std::fs::write(path, bytes)
            .map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: String,
    pub table: Table,
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    check_solver(&config.solver)?;
    match &config.scenario {
        Scenario::Example1(p) => run_example1(p, &config.solver),
        Scenario::Spread(p) => run_spread(p, &config.solver),
        Scenario::EpsilonScan(p) => run_epsilon_scan(p, &config.solver),
        Scenario::CostGrid(p) => run_cost_grid(p),
        Scenario::GeneralPair(p) => run_general_pair(p, &config.solver),
    }
}

fn check_solver(solver: &SolverOptions) -> Result<()> {
    let tol = solver.constraint_tol;
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(ExperimentError::Config(format!(
            "constraint tolerance {tol} must lie in (0, 1)"
        )));
    }
    if let crate::maxent::CutoffPolicy::Adaptive { tail_tol, .. } = solver.cutoff {
        if !(tail_tol.is_finite() && tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(ExperimentError::Config(format!(
                "tail tolerance {tail_tol} must lie in (0, 1)"
            )));
        }
    }
    Ok(())
}

fn well(width: f64) -> Result<WellGeometry> {
    WellGeometry::new(width).map_err(|e| ExperimentError::Config(e.to_string()))
}

fn prior(xi: f64) -> Result<Prior> {
    Prior::new(xi).map_err(|e| ExperimentError::Config(e.to_string()))
}

fn default_new_width(width: f64, new_width: Option<f64>) -> f64 {
    new_width.unwrap_or_else(|| (2.0f64 / 5.0).sqrt() * width)
}

/// Re-checks normalization and energy conservation of a compressed state.
pub fn validate_compressed(c: &CompressedState, solver: &SolverOptions) -> Result<()> {
    let total: f64 = c.weights().as_slice().iter().sum();
    if (total - 1.0).abs() > NORM_TOL {
        return Err(ExperimentError::Invariant(format!(
            "compressed weights sum to {total}"
        )));
    }
    let e0 = c.source_energy();
    let rel = (c.energy() - e0).abs() / e0;
    let allowed = if c.degenerate() {
        // Degenerate outcomes may absorb the width slack at the boundary.
        1e-9 + 2.0 * WIDTH_SLACK / c.well().width()
    } else {
        (10.0 * solver.constraint_tol).max(1e-9)
    };
    if rel > allowed {
        return Err(ExperimentError::Invariant(format!(
            "energy not conserved: {e0} -> {} (relative {rel:e})",
            c.energy()
        )));
    }
    Ok(())
}

fn weight_table(c: &CompressedState) -> Table {
    let mut t = Table::new(&["level", "weight"]);
    for (i, p) in c.weights().as_slice().iter().enumerate() {
        t.push(vec![(i + 1).to_string(), fmt_f64(*p)]);
    }
    t
}

pub fn run_example1(params: &Example1Params, solver: &SolverOptions) -> Result<Outcome> {
    let w = well(params.width)?;
    let phi = StateVector::equal_superposition(w, 1, 2)?;
    let minimum = min_feasible_width(&phi);
    let new_width = params.new_width.unwrap_or(minimum) + params.width_offset;
    let expect_degenerate = params.new_width.is_none() && params.width_offset == 0.0;

    let c = compress(&phi, new_width, solver)?;
    validate_compressed(&c, solver)?;
    if expect_degenerate && !c.degenerate() {
        return Err(ExperimentError::Invariant(
            "compression to the minimum width did not land on the new ground level".into(),
        ));
    }

    let mut s = String::new();
    writeln!(s, "scenario: example1").ok();
    writeln!(
        s,
        "initial state: (|1> + |2>)/sqrt(2) in width {}",
        fmt_f64(w.width())
    )
    .ok();
    writeln!(s, "initial energy: {}", fmt_f64(phi.energy())).ok();
    writeln!(s, "min feasible width: {}", fmt_f64(minimum)).ok();
    writeln!(s, "new width: {}", fmt_f64(new_width)).ok();
    writeln!(s, "final energy: {}", fmt_f64(c.energy())).ok();
    writeln!(s, "degenerate: {}", c.degenerate()).ok();
    writeln!(s, "beta: {}", fmt_f64(c.beta())).ok();
    writeln!(s, "entropy: {}", fmt_f64(c.weights().entropy())).ok();
    let head: Vec<String> = (1..=4).map(|n| fmt_f64(probe_weight(&c, n))).collect();
    writeln!(s, "final weights (levels 1-4): ({}, ...)", head.join(", ")).ok();
    Ok(Outcome {
        summary: s,
        table: weight_table(&c),
    })
}

pub fn run_spread(params: &SpreadParams, solver: &SolverOptions) -> Result<Outcome> {
    if params.n < 2 {
        return Err(ExperimentError::Config(format!(
            "spread level n = {} must be at least 2",
            params.n
        )));
    }
    let w = well(params.width)?;
    let psi = StateVector::equal_superposition(w, 1, params.n)?;
    let new_width = default_new_width(params.width, params.new_width);
    let c = compress(&psi, new_width, solver)?;
    validate_compressed(&c, solver)?;
    let sol = c.solution();

    let mut s = String::new();
    writeln!(s, "scenario: spread").ok();
    writeln!(
        s,
        "initial state: (|1> + |{}>)/sqrt(2) in width {}",
        params.n,
        fmt_f64(w.width())
    )
    .ok();
    writeln!(s, "initial energy: {}", fmt_f64(psi.energy())).ok();
    writeln!(s, "new width: {}", fmt_f64(new_width)).ok();
    writeln!(
        s,
        "target <n^2>: {}",
        fmt_f64(psi.energy() * new_width * new_width)
    )
    .ok();
    writeln!(s, "achieved <n^2>: {}", fmt_f64(sol.achieved_mean_nsq)).ok();
    writeln!(s, "beta: {}", fmt_f64(sol.beta)).ok();
    writeln!(
        s,
        "epsilon (weight on |1'>): {}",
        fmt_f64(probe_weight(&c, 1))
    )
    .ok();
    writeln!(s, "entropy: {}", fmt_f64(sol.entropy())).ok();
    writeln!(s, "cutoff: {}", sol.cutoff()).ok();
    writeln!(s, "tail mass bound: {}", fmt_f64(sol.tail_mass)).ok();
    writeln!(s, "tail <n^2> bound: {}", fmt_f64(sol.tail_nsq)).ok();
    Ok(Outcome {
        summary: s,
        table: weight_table(&c),
    })
}

/// One point of the ε(N) scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub epsilon: f64,
    pub cost_after: f64,
    pub cost_delta: f64,
    pub beta: f64,
    pub cutoff_used: usize,
}

/// Compresses `(|1⟩+|2⟩)/√2` and `(|1⟩+|N⟩)/√2` for every `N`, in input order.
pub fn epsilon_scan(params: &EpsilonScanParams, solver: &SolverOptions) -> Result<Vec<ScanRow>> {
    if params.n_list.is_empty() {
        return Err(ExperimentError::Config("n_list is empty".into()));
    }
    if let Some(n) = params.n_list.iter().find(|&&n| n < 3) {
        return Err(ExperimentError::Config(format!(
            "N = {n} must be at least 3"
        )));
    }
    let prior = prior(params.xi)?;
    let w = well(params.width)?;
    let new_width = default_new_width(params.width, params.new_width);
    let phi = StateVector::equal_superposition(w, 1, 2)?;

    let rows: Vec<Result<ScanRow>> = params
        .n_list
        .par_iter()
        .map(|&n| {
            let psi = StateVector::equal_superposition(w, 1, n)?;
            let r = discriminate_report(prior, &phi, &psi, new_width, solver)
                .map_err(|e| annotate(e, n))?;
            validate_compressed(&r.phi_after, solver)?;
            validate_compressed(&r.psi_after, solver)?;
            Ok(ScanRow {
                n,
                epsilon: r.epsilon,
                cost_after: r.cost_after,
                cost_delta: r.cost_delta,
                beta: r.beta_psi(),
                cutoff_used: r.psi_after.solution().cutoff(),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let mut sorted: Vec<&ScanRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.n);
    for pair in sorted.windows(2) {
        if pair[0].n < pair[1].n && pair[1].epsilon >= pair[0].epsilon {
            return Err(ExperimentError::Invariant(format!(
                "epsilon did not decrease from N = {} to N = {}",
                pair[0].n, pair[1].n
            )));
        }
    }
    Ok(rows)
}

fn annotate(e: crate::Error, n: usize) -> ExperimentError {
    match e {
        e if e.is_infeasible() || e.is_solver_failure() => ExperimentError::Model(e),
        other => ExperimentError::Config(format!("N = {n}: {other}")),
    }
}

/// Least-squares slope of `ln ε` against `ln N`, if at least two distinct `N`.
pub fn scan_slope(rows: &[ScanRow]) -> Option<f64> {
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    loglog_slope(&xs, &ys)
}

pub fn run_epsilon_scan(params: &EpsilonScanParams, solver: &SolverOptions) -> Result<Outcome> {
    let rows = epsilon_scan(params, solver)?;
    let mut t = Table::new(&[
        "n",
        "epsilon",
        "cost_after",
        "cost_delta",
        "beta",
        "cutoff_used",
    ]);
    for r in &rows {
        t.push(vec![
            r.n.to_string(),
            fmt_f64(r.epsilon),
            fmt_f64(r.cost_after),
            fmt_f64(r.cost_delta),
            fmt_f64(r.beta),
            r.cutoff_used.to_string(),
        ]);
    }
    let mut s = String::new();
    writeln!(s, "scenario: epsilon_scan").ok();
    writeln!(
        s,
        "states: phi = (|1> + |2>)/sqrt(2), psi = (|1> + |N>)/sqrt(2); xi = {}; new width = {}",
        fmt_f64(params.xi),
        fmt_f64(default_new_width(params.width, params.new_width))
    )
    .ok();
    writeln!(
        s,
        "costs after compression are model costs under the compression map"
    )
    .ok();
    for r in &rows {
        writeln!(
            s,
            "N = {:>6}  epsilon = {}  cost_after = {}  delta = {}",
            r.n,
            fmt_f64(r.epsilon),
            fmt_f64(r.cost_after),
            fmt_f64(r.cost_delta)
        )
        .ok();
    }
    match scan_slope(&rows) {
        Some(slope) => writeln!(s, "log-log slope of epsilon vs N: {}", fmt_f64(slope)).ok(),
        None => writeln!(s, "log-log slope: omitted (fewer than two distinct N)").ok(),
    };
    Ok(Outcome {
        summary: s,
        table: t,
    })
}

pub fn run_cost_grid(params: &CostGridParams) -> Result<Outcome> {
    let xis = params.xi.values();
    let eps = params.epsilon.values();
    if xis.is_empty() || eps.is_empty() {
        return Err(ExperimentError::Config("empty grid".into()));
    }
    let priors = xis.iter().map(|&x| prior(x)).collect::<Result<Vec<_>>>()?;
    if let Some(e) = eps.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(ExperimentError::Config(format!(
            "epsilon {e} must lie in [0, 1]"
        )));
    }
    let before = params.overlap_before;
    if !(0.0..=1.0).contains(&before) {
        return Err(ExperimentError::Config(format!(
            "overlap_before {before} must lie in [0, 1]"
        )));
    }

    let mut t = Table::new(&["xi", "epsilon", "cost_before", "cost_after", "cost_delta"]);
    let mut min_covered = f64::INFINITY;
    let mut negatives_beyond = 0usize;
    for p in &priors {
        let c0 = helstrom_cost(*p, before)?;
        for &e in &eps {
            let c1 = helstrom_cost(*p, e)?;
            let d = cost_delta(*p, before, e)?;
            if e <= before {
                min_covered = min_covered.min(d);
            } else if d < 0.0 {
                negatives_beyond += 1;
            }
            t.push(vec![
                fmt_f64(p.xi()),
                fmt_f64(e),
                fmt_f64(c0),
                fmt_f64(c1),
                fmt_f64(d),
            ]);
        }
    }

    let mut s = String::new();
    writeln!(s, "scenario: cost_grid").ok();
    writeln!(s, "overlap before: {}", fmt_f64(before)).ok();
    writeln!(s, "grid: {} priors x {} epsilons", xis.len(), eps.len()).ok();
    if min_covered.is_finite() {
        writeln!(
            s,
            "min delta over epsilon <= overlap before: {}",
            fmt_f64(min_covered)
        )
        .ok();
        if min_covered < -DELTA_SIGN_TOL {
            return Err(ExperimentError::Invariant(format!(
                "cost difference {min_covered:e} is negative for epsilon <= {before}"
            )));
        }
    }
    writeln!(
        s,
        "negative deltas with epsilon > overlap before: {negatives_beyond}"
    )
    .ok();
    Ok(Outcome {
        summary: s,
        table: t,
    })
}

pub fn run_general_pair(params: &GeneralPairParams, solver: &SolverOptions) -> Result<Outcome> {
    let prior = prior(params.xi)?;
    let w = well(params.width)?;
    let (phi, psi) = make_general_pair(w, params.alpha, params.n)
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let new_width = default_new_width(params.width, params.new_width);
    let r = discriminate_report(prior, &phi, &psi, new_width, solver)?;
    validate_compressed(&r.phi_after, solver)?;
    validate_compressed(&r.psi_after, solver)?;

    let mut t = Table::new(&[
        "alpha",
        "n",
        "xi",
        "new_width",
        "overlap_before",
        "overlap_after",
        "overlap_kind",
        "epsilon",
        "cost_before",
        "cost_after",
        "cost_delta",
        "probe_cost",
        "beta_phi",
        "beta_psi",
        "cutoff_phi",
        "cutoff_psi",
    ]);
    t.push(vec![
        fmt_f64(params.alpha),
        params.n.to_string(),
        fmt_f64(params.xi),
        fmt_f64(new_width),
        fmt_f64(r.overlap_before),
        fmt_f64(r.overlap_after),
        r.overlap_kind.label().to_string(),
        fmt_f64(r.epsilon),
        fmt_f64(r.cost_before),
        fmt_f64(r.cost_after),
        fmt_f64(r.cost_delta),
        fmt_f64(r.probe_cost),
        fmt_f64(r.beta_phi()),
        fmt_f64(r.beta_psi()),
        r.phi_after.solution().cutoff().to_string(),
        r.psi_after.solution().cutoff().to_string(),
    ]);

    let mut s = String::new();
    writeln!(s, "scenario: general_pair").ok();
    writeln!(
        s,
        "phi = (|1> + |2>)/sqrt(2), psi = alpha (|1> + |2>)/sqrt(2) + sqrt(1 - alpha^2) |{}>",
        params.n
    )
    .ok();
    writeln!(
        s,
        "alpha = {}, xi = {}, new width = {}",
        fmt_f64(params.alpha),
        fmt_f64(params.xi),
        fmt_f64(new_width)
    )
    .ok();
    writeln!(s, "overlap before: {}", fmt_f64(r.overlap_before)).ok();
    writeln!(
        s,
        "overlap after ({}): {}",
        r.overlap_kind.label(),
        fmt_f64(r.overlap_after)
    )
    .ok();
    writeln!(s, "helstrom cost before: {}", fmt_f64(r.cost_before)).ok();
    writeln!(s, "model cost after: {}", fmt_f64(r.cost_after)).ok();
    writeln!(s, "cost delta: {}", fmt_f64(r.cost_delta)).ok();
    writeln!(s, "projective probe cost: {}", fmt_f64(r.probe_cost)).ok();
    Ok(Outcome {
        summary: s,
        table: t,
    })
}
