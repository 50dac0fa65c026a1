//! Isoenergetic compression of infinite-square-well states and the Bayes
//! costs of binary state discrimination before and after compression.
//!
//! Units are reduced (`ℏ²π²/2M = 1`), so level `n` of a well of width `L`
//! has energy `n²/L²`.

pub mod compression;
pub mod discrimination;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod maxent;
pub mod well;

pub use compression::{compress, min_feasible_width, probe_weight, CompressedState};
pub use discrimination::{
    cost_delta, discriminate_report, helstrom_cost, make_general_pair, projective_probe_cost,
    CostReport, OverlapKind, Prior,
};
pub use error::{Error, Result};
pub use maxent::{
    classify_feasibility, mean_nsq, shannon_entropy, solve_gibbs, CutoffPolicy, Feasibility,
    GibbsSolution, ProbabilityWeights, SolverOptions,
};
pub use well::{
    cross_overlap, eigen_energy, project_onto, same_well_overlap, state_energy, Overlap,
    StateVector, WellGeometry,
};
