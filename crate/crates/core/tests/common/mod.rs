#![allow(dead_code, clippy::excessive_precision)]

//! Oracles shared by the integration tests. None of these call into the
//! code paths they are used to check.

/// Weight of `(|1⟩+|100⟩)/√2` on the new ground level after compression to
/// width `√(2/5)`, i.e. the Gibbs weight `p₁` at target `⟨n²⟩ = 2000.2`.
/// Computed at 40 digits with a Poisson-summed theta series (mpmath).
pub const EPSILON_N100: f64 = 0.018_078_287_939_307_775_517;
pub const BETA_N100: f64 = 0.000_252_235_132_548_470_684_27;

/// Same oracle for N = 50, 200, 400, 800.
pub const EPSILON_SCAN: [(usize, f64); 5] = [
    (50, 0.036_623_444_194_176_703_239),
    (100, EPSILON_N100),
    (200, 0.008_980_096_741_898_021_757_5),
    (400, 0.004_475_205_433_286_326_017_9),
    (800, 0.002_233_882_149_707_844_951_2),
];

/// Unrestricted Gibbs solution at target 2.5 (mpmath, 40 digits).
pub const BETA_T25: f64 = 0.286_534_920_950_008_367_17;
pub const P1_T25: f64 = 0.649_756_849_308_394_573_83;

/// Three-level Gibbs solution at target 2.5 (mpmath, 40 digits).
pub const BETA_K3_T25: f64 = 0.259_959_744_286_920_322_84;
pub const WEIGHTS_K3_T25: [f64; 3] = [
    0.631_539_661_501_077_069_37,
    0.289_536_541_598_276_689,
    0.078_923_796_900_646_241_624,
];
pub const ENTROPY_K3_T25: f64 = 0.849_534_150_366_778_674_41;

/// Best entropy found by a dense scan of the three-level feasible family
/// `{p : Σp = 1, Σ p n² = target, p ≥ 0}`, parametrized by `t = p₃`.
pub fn scan_three_level_entropy(target: f64, points: usize) -> f64 {
    let t_lo = ((target - 4.0) / 5.0).max(0.0);
    let t_hi = ((target - 1.0) / 8.0).min(1.0);
    assert!(t_hi >= t_lo, "target {target} infeasible at three levels");
    let entropy = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    (0..points)
        .map(|i| {
            let t = t_lo + (t_hi - t_lo) * i as f64 / (points - 1) as f64;
            let p2 = ((target - 1.0 - 8.0 * t) / 3.0).max(0.0);
            let p1 = (1.0 - p2 - t).max(0.0);
            entropy(p1) + entropy(p2) + entropy(t)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Gauss–Kronrod 7/15 on one interval: (Kronrod estimate, |K − G|).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Kronrod quadrature of `f` on `[a, b]`, started from
/// `pieces` equal panels.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + h };
            adapt(f, lo, hi, tol / pieces as f64, 40)
        })
        .sum()
}

/// `∫₀^{L′} √(2/L′) sin(n′πx/L′) √(2/L) sin(mπx/L) dx` by quadrature.
pub fn cross_overlap_quadrature(m: usize, n_target: usize, l: f64, lp: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let f = move |x: f64| {
        (2.0 / lp).sqrt()
            * (n_target as f64 * pi * x / lp).sin()
            * (2.0 / l).sqrt()
            * (m as f64 * pi * x / l).sin()
    };
    let pieces = 4 * (m + n_target).max(4);
    integrate(&f, 0.0, lp, pieces, 1e-13)
}
