//! Eigenbasis algebra for the one-dimensional infinite square well.
//!
//! Units are reduced so that level `n` of a well of width `L` has energy
//! `n² / L²`. States are dense amplitude vectors over levels `1..=cutoff`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `Σ|aₙ|² = 1` accepted when building a [`StateVector`].
pub const NORM_TOL: f64 = 1e-9;

/// Relative wavenumber separation below which the cross-width overlap uses
/// its coincident-wavenumber limit.
const DEGENERATE_WAVENUMBER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellGeometry {
    width: f64,
}

impl WellGeometry {
    pub fn new(width: f64) -> Result<Self> {
        if width.is_finite() && width > 0.0 {
            Ok(Self { width })
        } else {
            Err(Error::InvalidWidth(width))
        }
    }

    /// The reference well of unit width.
    pub fn unit() -> Self {
        Self { width: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        eigen_energy(n, self)
    }
}

/// Energy of level `n` in reduced units, `n² / width²`.
pub fn eigen_energy(n: usize, well: &WellGeometry) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidLevel(n));
    }
    let n = n as f64;
    Ok(n * n / (well.width * well.width))
}

/// A normalized pure state expanded in the eigenbasis of one well.
///
/// `amplitudes[i]` is the coefficient of level `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    well: WellGeometry,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(well: WellGeometry, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("state needs at least one level".into()));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq,
                tol: NORM_TOL,
            });
        }
        Ok(Self { well, amplitudes })
    }

    /// Builds a state from `(level, amplitude)` pairs; unlisted levels are zero.
    /// Repeated levels accumulate.
    pub fn from_sparse(well: WellGeometry, terms: &[(usize, Complex64)]) -> Result<Self> {
        let cutoff = terms.iter().map(|&(n, _)| n).max().unwrap_or(0);
        if let Some(&(n, _)) = terms.iter().find(|&&(n, _)| n == 0) {
            return Err(Error::InvalidLevel(n));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
        for &(n, a) in terms {
            amplitudes[n - 1] += a;
        }
        Self::new(well, amplitudes)
    }

    /// The eigenstate `|n⟩`.
    pub fn basis(well: WellGeometry, n: usize) -> Result<Self> {
        Self::from_sparse(well, &[(n, Complex64::new(1.0, 0.0))])
    }

    /// Equal-weight superposition `(|m⟩ + |n⟩)/√2` of two distinct levels.
    pub fn equal_superposition(well: WellGeometry, m: usize, n: usize) -> Result<Self> {
        if m == n {
            return Err(Error::InvalidInput(format!(
                "equal superposition needs distinct levels, got {m} twice"
            )));
        }
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_sparse(well, &[(m, c), (n, c)])
    }

    pub fn well(&self) -> &WellGeometry {
        &self.well
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of level `n`, zero past the cutoff.
    pub fn amplitude(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes
            .get(n - 1)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Level occupation probabilities `|aₙ|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Second moment of the level index, `Σ |aₙ|² n²`.
    pub fn mean_nsq(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let n = (i + 1) as f64;
                a.norm_sqr() * n * n
            })
            .sum()
    }

    pub fn energy(&self) -> f64 {
        state_energy(self)
    }

    /// True when every level above the ground level has exactly zero amplitude.
    pub fn is_ground_only(&self) -> bool {
        self.amplitudes
            .iter()
            .skip(1)
            .all(|a| a.re == 0.0 && a.im == 0.0)
    }
}

/// Mean energy `Σ |aₙ|² n² / width²`.
pub fn state_energy(state: &StateVector) -> f64 {
    state.mean_nsq() / (state.well.width * state.well.width)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    /// `⟨a|b⟩ = Σ aₙ* bₙ`
    pub amplitude: Complex64,
    /// `|⟨a|b⟩|²`, the transition probability.
    pub probability: f64,
}

/// Inner product of two states expanded in the same well.
pub fn same_well_overlap(a: &StateVector, b: &StateVector) -> Result<Overlap> {
    if a.well.width != b.well.width {
        return Err(Error::WidthMismatch {
            left: a.well.width,
            right: b.well.width,
        });
    }
    let amplitude: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(Overlap {
        amplitude,
        probability: amplitude.norm_sqr().min(1.0),
    })
}

/// `⟨n′; target | m; source⟩`: overlap of level `m` of the source well with
/// level `n_target` of a narrower well sharing the wall at `x = 0`.
///
/// The integral runs over `[0, target.width]`, where the target eigenfunction
/// is supported, and is evaluated in closed form.
pub fn cross_overlap(
    m: usize,
    n_target: usize,
    source: &WellGeometry,
    target: &WellGeometry,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidLevel(m));
    }
    if n_target == 0 {
        return Err(Error::InvalidLevel(n_target));
    }
    let (l, lp) = (source.width, target.width);
    if lp > l {
        return Err(Error::TargetWiderThanSource {
            target: lp,
            source_width: l,
        });
    }
    let pi = std::f64::consts::PI;
    let k_src = m as f64 * pi / l;
    let k_tgt = n_target as f64 * pi / lp;
    let sum = k_tgt + k_src;
    let diff = k_tgt - k_src;

    // 2/√(L L′) ∫₀^{L′} sin(k₁x) sin(k₂x) dx, via product-to-sum.
    let diff_term = if diff.abs() < DEGENERATE_WAVENUMBER_TOL * sum {
        lp
    } else {
        (diff * lp).sin() / diff
    };
    let sum_term = (sum * lp).sin() / sum;
    Ok((diff_term - sum_term) / (l * lp).sqrt())
}

/// Coefficients of `state` in the eigenbasis of a narrower `target` well,
/// levels `1..=max_level`. Probability outside `[0, target.width]` is lost,
/// so the squared norm of the result never exceeds one.
pub fn project_onto(
    state: &StateVector,
    target: &WellGeometry,
    max_level: usize,
) -> Result<Vec<Complex64>> {
    (1..=max_level)
        .map(|np| {
            state
                .amplitudes
                .iter()
                .enumerate()
                .try_fold(Complex64::new(0.0, 0.0), |acc, (i, a)| {
                    Ok(acc + a * cross_overlap(i + 1, np, &state.well, target)?)
                })
        })
        .collect()
}
