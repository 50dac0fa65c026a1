//! The isoenergetic compression map.
//!
//! A state in a well of width `L` is moved into a well of width `L′` while
//! keeping its mean energy. With `e_n(L′) = n²/L′²`, energy conservation fixes
//! the new second moment at `⟨n²⟩′ = E · L′²`; the new level weights are the
//! maximum-entropy distribution with that moment.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maxent::{solve_gibbs, GibbsSolution, ProbabilityWeights, SolverOptions};
use crate::well::{StateVector, WellGeometry};

/// Tag for the representative chosen from the equivalence class of optimal
/// amplitude vectors: `bₙ = +√pₙ`.
pub const PHASE_CONVENTION: &str = "all-real-nonnegative";

/// Widths this close below the minimum feasible width resolve to the
/// degenerate ground-level outcome.
pub const WIDTH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedState {
    well: WellGeometry,
    source_width: f64,
    source_energy: f64,
    solution: GibbsSolution,
}

impl CompressedState {
    pub fn well(&self) -> &WellGeometry {
        &self.well
    }

    pub fn weights(&self) -> &ProbabilityWeights {
        &self.solution.weights
    }

    pub fn beta(&self) -> f64 {
        self.solution.beta
    }

    pub fn degenerate(&self) -> bool {
        self.solution.degenerate
    }

    pub fn solution(&self) -> &GibbsSolution {
        &self.solution
    }

    /// True when the new well is wider than the old one.
    pub fn expanded(&self) -> bool {
        self.well.width() > self.source_width
    }

    pub fn phase_convention(&self) -> &'static str {
        PHASE_CONVENTION
    }

    /// Energy of the input state.
    pub fn source_energy(&self) -> f64 {
        self.source_energy
    }

    /// `Σ pₙ n² / L′²` of the compressed weights.
    pub fn energy(&self) -> f64 {
        let w = self.well.width();
        self.solution.weights.mean_nsq() / (w * w)
    }

    /// The compressed state as amplitudes under [`PHASE_CONVENTION`].
    pub fn to_state(&self) -> Result<StateVector> {
        let amps = self
            .solution
            .weights
            .as_slice()
            .iter()
            .map(|p| Complex64::new(p.sqrt(), 0.0))
            .collect();
        StateVector::new(self.well, amps)
    }
}

/// Smallest width reachable isoenergetically: `L / √⟨n²⟩`, where the whole
/// energy fits in the new ground level.
pub fn min_feasible_width(state: &StateVector) -> f64 {
    1.0 / state.energy().sqrt()
}

/// Compresses (or, for `new_width > L`, expands) `state` into a well of width
/// `new_width`, conserving energy and maximizing level entropy.
pub fn compress(
    state: &StateVector,
    new_width: f64,
    options: &SolverOptions,
) -> Result<CompressedState> {
    let well = WellGeometry::new(new_width)?;
    let source_width = state.well().width();
    let source_energy = state.energy();
    let minimum = min_feasible_width(state);

    let infeasible = Error::InfeasibleWidth {
        requested: new_width,
        minimum,
    };
    // A pure ground state has no energy to spare: any narrowing is rejected
    // outright, independent of the boundary slack.
    if state.is_ground_only() && new_width < source_width {
        return Err(infeasible);
    }
    let solution = if new_width < minimum {
        if minimum - new_width > WIDTH_SLACK {
            return Err(infeasible);
        }
        GibbsSolution::degenerate(1)
    } else {
        let target = source_energy * new_width * new_width;
        solve_gibbs(target, options).map_err(|e| match e {
            Error::InfeasibleMoment { .. } => infeasible,
            other => other,
        })?
    };
    Ok(CompressedState {
        well,
        source_width,
        source_energy,
        solution,
    })
}

/// Weight of the compressed state on level `level` of the new well.
pub fn probe_weight(cstate: &CompressedState, level: usize) -> f64 {
    cstate.weights().get(level)
}

/// `(Σ √(pₙ qₙ))²`: the squared overlap of two compressed states when both
/// use [`PHASE_CONVENTION`]. Depends on that convention except when one of
/// the states is the ground-level delta.
pub fn convention_overlap(a: &CompressedState, b: &CompressedState) -> Result<f64> {
    if a.well.width() != b.well.width() {
        return Err(Error::WidthMismatch {
            left: a.well.width(),
            right: b.well.width(),
        });
    }
    let amp: f64 = a
        .weights()
        .as_slice()
        .iter()
        .zip(b.weights().as_slice())
        .map(|(p, q)| (p * q).sqrt())
        .sum();
    Ok((amp * amp).min(1.0))
}
