//! Maximum-entropy level distributions under a fixed second moment.
//!
//! Among weights `pₙ` on levels `n ≥ 1` with `Σ pₙ = 1` and `Σ pₙ n² = T`,
//! the entropy maximizer has the Gibbs form `pₙ = exp(−β n²) / Z`. The
//! multiplier `β` is found by bracketing and bisection on the Gibbs mean,
//! which decreases strictly in `β`.

use crate::error::{Error, Result};

/// Absolute slack on the target moment within which `T = 1` is treated as
/// the degenerate boundary.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Default relative tolerance on `Σ pₙ n² = T`.
pub const DEFAULT_CONSTRAINT_TOL: f64 = 1e-10;
/// Default bound on the truncated tail mass and tail second moment.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_BISECTIONS: usize = 200;
pub const DEFAULT_MAX_CUTOFF: usize = 5_000_000;
const MAX_BRACKET_STEPS: usize = 200;

/// Non-negative weights over levels `1..=cutoff` summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityWeights {
    weights: Vec<f64>,
}

impl ProbabilityWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no levels".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidWeights(format!(
                "level {} has weight {w}",
                i + 1
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > crate::well::NORM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// All weight on the ground level.
    pub fn ground(cutoff: usize) -> Self {
        let mut weights = vec![0.0; cutoff.max(1)];
        weights[0] = 1.0;
        Self { weights }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn cutoff(&self) -> usize {
        self.weights.len()
    }

    /// Weight of level `n`; zero for `n = 0` and past the cutoff.
    pub fn get(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.weights.get(n - 1).copied().unwrap_or(0.0)
    }

    pub fn mean_nsq(&self) -> f64 {
        mean_nsq(self)
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(self)
    }
}

/// `Σ pₙ n²`
pub fn mean_nsq(weights: &ProbabilityWeights) -> f64 {
    weights
        .weights
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let n = (i + 1) as f64;
            p * n * n
        })
        .sum()
}

/// Natural-log Shannon entropy with `0 · ln 0 = 0`.
pub fn shannon_entropy(weights: &ProbabilityWeights) -> f64 {
    weights
        .weights
        .iter()
        .filter(|&&p| p > 0.0)
        .fold(0.0, |h, &p| h - p * p.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// Target below the ground-level moment; no distribution reaches it.
    Infeasible,
    /// Target equals the ground-level moment; only `(1, 0, 0, …)` reaches it.
    Degenerate,
    Feasible,
}

pub fn classify_feasibility(target_mean_nsq: f64) -> Result<Feasibility> {
    if !target_mean_nsq.is_finite() {
        return Err(Error::InvalidInput(format!(
            "target second moment {target_mean_nsq} is not finite"
        )));
    }
    Ok(if (target_mean_nsq - 1.0).abs() <= DEGENERACY_TOL {
        Feasibility::Degenerate
    } else if target_mean_nsq < 1.0 {
        Feasibility::Infeasible
    } else {
        Feasibility::Feasible
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffPolicy {
    /// Grow the retained levels until both the discarded probability and the
    /// discarded contribution to `Σ pₙ n²` are bounded by `tail_tol`.
    Adaptive { tail_tol: f64, max_cutoff: usize },
    /// Solve the problem restricted to levels `1..=K`. The multiplier may be
    /// negative here when the target exceeds the uniform mean.
    Fixed(usize),
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy::Adaptive {
            tail_tol: DEFAULT_TAIL_TOL,
            max_cutoff: DEFAULT_MAX_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance on the achieved second moment.
    pub constraint_tol: f64,
    pub cutoff: CutoffPolicy,
    pub max_bisections: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            constraint_tol: DEFAULT_CONSTRAINT_TOL,
            cutoff: CutoffPolicy::default(),
            max_bisections: DEFAULT_MAX_BISECTIONS,
        }
    }
}

impl SolverOptions {
    pub fn with_constraint_tol(mut self, tol: f64) -> Self {
        self.constraint_tol = tol;
        self
    }

    pub fn fixed_cutoff(cutoff: usize) -> Self {
        Self {
            cutoff: CutoffPolicy::Fixed(cutoff),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GibbsSolution {
    /// Lagrange multiplier of the second-moment constraint. Infinite for the
    /// degenerate solution.
    pub beta: f64,
    /// `Σ exp(−β n²)` over the retained levels; zero when degenerate.
    pub partition_sum: f64,
    /// `ln partition_sum`, kept separately to avoid under/overflow.
    pub log_partition: f64,
    pub weights: ProbabilityWeights,
    pub achieved_mean_nsq: f64,
    pub degenerate: bool,
    /// Upper bound on the probability discarded past the cutoff.
    pub tail_mass: f64,
    /// Upper bound on `Σ_{n > cutoff} pₙ n²`.
    pub tail_nsq: f64,
    pub bisections: usize,
}

impl GibbsSolution {
    pub(crate) fn degenerate(cutoff: usize) -> Self {
        Self {
            beta: f64::INFINITY,
            partition_sum: 0.0,
            log_partition: f64::NEG_INFINITY,
            weights: ProbabilityWeights::ground(cutoff),
            achieved_mean_nsq: 1.0,
            degenerate: true,
            tail_mass: 0.0,
            tail_nsq: 0.0,
            bisections: 0,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.weights.cutoff()
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.weights)
    }

    /// Gibbs weight `exp(−β n²) / Z` evaluated at any level, including past
    /// the cutoff.
    pub fn weight_at(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        if self.degenerate {
            return if n == 1 { 1.0 } else { 0.0 };
        }
        let n = n as f64;
        (-self.beta * n * n - self.log_partition).exp()
    }

    /// Upper bound on the entropy carried by the discarded levels.
    pub fn tail_entropy_bound(&self) -> f64 {
        if self.degenerate || self.tail_mass == 0.0 {
            return 0.0;
        }
        // −ln pₙ = β(n² − 1) + ln(Z e^β) ≤ β n² + ln(Z e^β) for β > 0.
        let log_shifted = (self.log_partition + self.beta).max(0.0);
        self.beta.abs() * self.tail_nsq + log_shifted * self.tail_mass
    }
}

/// Unnormalized Gibbs sums at one value of `β`.
struct Evaluation {
    terms: Vec<f64>,
    /// `Σ terms`, where `terms[n-1] = exp(−β n² + shift)`.
    z: f64,
    nsq: f64,
    shift: f64,
    tail_mass: f64,
    tail_nsq: f64,
}

impl Evaluation {
    fn mean(&self) -> f64 {
        self.nsq / self.z
    }
}

fn evaluate(beta: f64, policy: CutoffPolicy) -> Result<Evaluation> {
    match policy {
        CutoffPolicy::Fixed(k) => {
            let kf = k as f64;
            let shift = if beta >= 0.0 { beta } else { beta * kf * kf };
            let terms: Vec<f64> = (1..=k)
                .map(|n| {
                    let n = n as f64;
                    (-(beta * n * n) + shift).exp()
                })
                .collect();
            let (z, nsq) = sums(&terms);
            Ok(Evaluation {
                terms,
                z,
                nsq,
                shift,
                tail_mass: 0.0,
                tail_nsq: 0.0,
            })
        }
        CutoffPolicy::Adaptive {
            tail_tol,
            max_cutoff,
        } => {
            debug_assert!(beta > 0.0);
            let mut terms = Vec::new();
            let (mut z, mut nsq) = (0.0, 0.0);
            let mut k = 0usize;
            loop {
                k += 1;
                if k > max_cutoff {
                    return Err(Error::Solver(format!(
                        "cutoff exceeded {max_cutoff} levels at beta = {beta:e}"
                    )));
                }
                let kf = k as f64;
                let t = (-beta * (kf * kf - 1.0)).exp();
                terms.push(t);
                z += t;
                nsq += t * kf * kf;

                // Successive-term ratios of n² e^{−βn²} shrink with n, so the
                // tail past k is dominated by a geometric series.
                let next = kf + 1.0;
                let t_next = (-beta * (next * next - 1.0)).exp();
                let decay = (-beta * (2.0 * next + 1.0)).exp();
                let ratio = ((next + 1.0) / next).powi(2) * decay;
                if ratio >= 1.0 {
                    continue;
                }
                let tail_mass = t_next / (1.0 - decay) / z;
                let tail_nsq = next * next * t_next / (1.0 - ratio) / z;
                if tail_mass < tail_tol && tail_nsq < tail_tol {
                    return Ok(Evaluation {
                        terms,
                        z,
                        nsq,
                        shift: beta,
                        tail_mass,
                        tail_nsq,
                    });
                }
            }
        }
    }
}

fn sums(terms: &[f64]) -> (f64, f64) {
    terms.iter().enumerate().fold((0.0, 0.0), |(z, m), (i, t)| {
        let n = (i + 1) as f64;
        (z + t, m + t * n * n)
    })
}

fn finish(beta: f64, eval: Evaluation, bisections: usize) -> Result<GibbsSolution> {
    let Evaluation {
        terms,
        z,
        shift,
        tail_mass,
        tail_nsq,
        ..
    } = eval;
    let weights = ProbabilityWeights::new(terms.iter().map(|t| t / z).collect())?;
    let achieved_mean_nsq = weights.mean_nsq();
    let log_partition = z.ln() - shift;
    Ok(GibbsSolution {
        beta,
        partition_sum: log_partition.exp(),
        log_partition,
        weights,
        achieved_mean_nsq,
        degenerate: false,
        tail_mass,
        tail_nsq,
        bisections,
    })
}

/// Finds the maximum-entropy weights with `Σ pₙ n² = target_mean_nsq`.
///
/// Targets within [`DEGENERACY_TOL`] of one return the ground-level delta.
/// Targets below one are infeasible. Failing to bracket or to converge
/// within the iteration budget is an error.
pub fn solve_gibbs(target_mean_nsq: f64, options: &SolverOptions) -> Result<GibbsSolution> {
    let target = target_mean_nsq;
    let fixed_cutoff = match options.cutoff {
        CutoffPolicy::Fixed(0) => {
            return Err(Error::InvalidInput(
                "fixed cutoff must be at least 1".into(),
            ))
        }
        CutoffPolicy::Fixed(k) => Some(k),
        CutoffPolicy::Adaptive { .. } => None,
    };
    if options.constraint_tol.is_nan() || options.constraint_tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "constraint tolerance {} must be positive",
            options.constraint_tol
        )));
    }
    match classify_feasibility(target)? {
        Feasibility::Infeasible => return Err(Error::InfeasibleMoment { target }),
        Feasibility::Degenerate => return Ok(GibbsSolution::degenerate(fixed_cutoff.unwrap_or(1))),
        Feasibility::Feasible => {}
    }
    if let Some(k) = fixed_cutoff {
        let kf = k as f64;
        if target >= kf * kf {
            return Err(Error::InvalidInput(format!(
                "target {target} is unreachable with {k} levels (maximum {})",
                kf * kf
            )));
        }
    }

    let tol = options.constraint_tol * target;
    let eval = |beta: f64| evaluate(beta, options.cutoff);

    let beta0 = 1.0 / (2.0 * target);
    let e0 = eval(beta0)?;
    let m0 = e0.mean();
    if (m0 - target).abs() <= tol {
        return finish(beta0, e0, 0);
    }

    // Bracket [lo, hi] with mean(lo) > target > mean(hi).
    let (mut lo, mut hi);
    let mut steps = 0;
    if m0 > target {
        lo = beta0;
        hi = 2.0 * beta0;
        while eval(hi)?.mean() > target {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > MAX_BRACKET_STEPS {
                return Err(Error::Solver(format!(
                    "failed to bracket beta for target {target} (upper search)"
                )));
            }
        }
    } else {
        hi = beta0;
        let mut step = beta0;
        lo = if fixed_cutoff.is_some() {
            beta0 - step
        } else {
            beta0 / 2.0
        };
        while eval(lo)?.mean() < target {
            hi = lo;
            if fixed_cutoff.is_some() {
                step *= 2.0;
                lo = beta0 - step;
            } else {
                lo /= 2.0;
            }
            steps += 1;
            if steps > MAX_BRACKET_STEPS {
                return Err(Error::Solver(format!(
                    "failed to bracket beta for target {target} (lower search)"
                )));
            }
        }
    }

    for i in 1..=options.max_bisections {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let e = eval(mid)?;
        let m = e.mean();
        if (m - target).abs() <= tol {
            return finish(mid, e, i);
        }
        if m > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Solver(format!(
        "no convergence for target {target} within {} bisections (beta in [{lo:e}, {hi:e}])",
        options.max_bisections
    )))
}
