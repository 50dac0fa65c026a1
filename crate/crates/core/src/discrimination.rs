//! Bayes costs for telling two pure states apart under a 0–1 loss.
//!
//! Costs computed after compression are model costs: they hold under the
//! premise that the isoenergetic compression map of [`crate::compression`]
//! acts on each hypothesis before the probe.

use num_complex::Complex64;

use crate::compression::{compress, convention_overlap, probe_weight, CompressedState};
use crate::error::{Error, Result};
use crate::maxent::SolverOptions;
use crate::well::{same_well_overlap, StateVector, WellGeometry};

/// Probability `ξ` that `φ` was prepared; `ψ` has `1 − ξ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Prior(f64);

impl Prior {
    pub fn new(xi: f64) -> Result<Self> {
        if xi > 0.0 && xi < 1.0 {
            Ok(Self(xi))
        } else {
            Err(Error::InvalidInput(format!(
                "prior {xi} must lie in (0, 1)"
            )))
        }
    }

    pub fn xi(self) -> f64 {
        self.0
    }
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} {value} must lie in [0, 1]"
        )))
    }
}

/// Minimum error probability for two pure states with squared overlap
/// `overlap_sq`: `½ − ½ √(1 − 4ξ(1−ξ)|⟨φ|ψ⟩|²)`.
pub fn helstrom_cost(prior: Prior, overlap_sq: f64) -> Result<f64> {
    check_unit("overlap", overlap_sq)?;
    let xi = prior.0;
    let radicand = (1.0 - 4.0 * xi * (1.0 - xi) * overlap_sq).max(0.0);
    Ok(0.5 - 0.5 * radicand.sqrt())
}

/// `C(ξ, overlap_before) − C(ξ, epsilon)`; positive when the second cost is lower.
pub fn cost_delta(prior: Prior, overlap_before: f64, epsilon: f64) -> Result<f64> {
    Ok(helstrom_cost(prior, overlap_before)? - helstrom_cost(prior, epsilon)?)
}

/// Error probability of projecting onto the new ground level and guessing
/// `φ` on a click, when `φ` sits entirely on that level and `ψ` has weight
/// `epsilon` there.
pub fn projective_probe_cost(prior: Prior, epsilon: f64) -> Result<f64> {
    check_unit("epsilon", epsilon)?;
    Ok((1.0 - prior.0) * epsilon)
}

/// The pair `φ = (|1⟩+|2⟩)/√2`, `ψ = α(|1⟩+|2⟩)/√2 + √(1−α²)|N⟩` with
/// `⟨φ|ψ⟩ = α`.
pub fn make_general_pair(
    well: WellGeometry,
    alpha: f64,
    n: usize,
) -> Result<(StateVector, StateVector)> {
    check_unit("alpha", alpha)?;
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "high level N = {n} must be at least 3"
        )));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi = StateVector::equal_superposition(well, 1, 2)?;
    let psi = StateVector::from_sparse(
        well,
        &[
            (1, Complex64::new(alpha * h, 0.0)),
            (2, Complex64::new(alpha * h, 0.0)),
            (n, Complex64::new((1.0 - alpha * alpha).sqrt(), 0.0)),
        ],
    )?;
    Ok((phi, psi))
}

/// How `overlap_after` in a [`CostReport`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    /// `φ` compressed onto the new ground level; the overlap is `ψ`'s weight
    /// there and does not depend on phases.
    ProbeWeight,
    /// Neither outcome is the ground-level delta; the overlap uses the
    /// all-real-nonnegative phase convention and is not phase independent.
    ConventionDependent,
}

impl OverlapKind {
    pub fn label(self) -> &'static str {
        match self {
            OverlapKind::ProbeWeight => "probe-weight",
            OverlapKind::ConventionDependent => "convention-dependent",
        }
    }
}

/// Full arithmetic trail of one before/after cost comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub prior: Prior,
    pub new_width: f64,
    pub overlap_before_amplitude: Complex64,
    pub overlap_before: f64,
    pub overlap_after: f64,
    pub overlap_kind: OverlapKind,
    /// Weight of the compressed `ψ` on the new ground level.
    pub epsilon: f64,
    pub cost_before: f64,
    pub cost_after: f64,
    pub cost_delta: f64,
    /// Error of the ground-level projective probe.
    pub probe_cost: f64,
    pub phi_after: CompressedState,
    pub psi_after: CompressedState,
}

impl CostReport {
    pub fn beta_phi(&self) -> f64 {
        self.phi_after.beta()
    }

    pub fn beta_psi(&self) -> f64 {
        self.psi_after.beta()
    }
}

/// Compresses both hypotheses to `new_width` and compares Bayes costs.
pub fn discriminate_report(
    prior: Prior,
    phi: &StateVector,
    psi: &StateVector,
    new_width: f64,
    options: &SolverOptions,
) -> Result<CostReport> {
    let before = same_well_overlap(phi, psi)?;
    let tag = |label| {
        move |e| Error::Hypothesis {
            label,
            source: Box::new(e),
        }
    };
    let phi_after = compress(phi, new_width, options).map_err(tag("phi"))?;
    let psi_after = compress(psi, new_width, options).map_err(tag("psi"))?;

    let epsilon = probe_weight(&psi_after, 1);
    let (overlap_after, overlap_kind) = if phi_after.degenerate() {
        (epsilon, OverlapKind::ProbeWeight)
    } else {
        (
            convention_overlap(&phi_after, &psi_after)?,
            OverlapKind::ConventionDependent,
        )
    };

    let cost_before = helstrom_cost(prior, before.probability)?;
    let cost_after = helstrom_cost(prior, overlap_after)?;
    let xi = prior.xi();
    // Click on the ground level ⇒ guess φ.
    let probe_cost = xi * (1.0 - probe_weight(&phi_after, 1)) + (1.0 - xi) * epsilon;

    Ok(CostReport {
        prior,
        new_width,
        overlap_before_amplitude: before.amplitude,
        overlap_before: before.probability,
        overlap_after,
        overlap_kind,
        epsilon,
        cost_before,
        cost_after,
        cost_delta: cost_before - cost_after,
        probe_cost,
        phi_after,
        psi_after,
    })
}
