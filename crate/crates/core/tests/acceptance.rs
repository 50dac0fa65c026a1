//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the report is always printed.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use isowell::compression::{compress, min_feasible_width, probe_weight};
use isowell::discrimination::{cost_delta, helstrom_cost, projective_probe_cost, Prior};
use isowell::fit::loglog_slope;
use isowell::maxent::{solve_gibbs, SolverOptions};
use isowell::{cross_overlap, StateVector, WellGeometry};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn narrow() -> f64 {
    (2.0f64 / 5.0).sqrt()
}

fn criterion_grid() -> (Vec<Prior>, Vec<f64>) {
    let xis = (1..=99)
        .map(|i| Prior::new(i as f64 / 100.0).unwrap())
        .collect();
    let eps = (0..=50).map(|i| i as f64 / 100.0).collect();
    (xis, eps)
}

fn example1_reproduction() -> Check {
    let w = WellGeometry::unit();
    let phi = StateVector::equal_superposition(w, 1, 2).map_err(|e| e.to_string())?;
    let c = compress(&phi, narrow(), &SolverOptions::default()).map_err(|e| e.to_string())?;
    let p1 = probe_weight(&c, 1);
    let rest: f64 = c.weights().as_slice().iter().skip(1).sum();
    let e_rel = (c.energy() - 2.5).abs() / 2.5;
    ensure((p1 - 1.0).abs() < 1e-9, || format!("p1 = {p1}"))?;
    ensure(rest == 0.0, || format!("weight above ground {rest}"))?;
    ensure(e_rel < 1e-10, || format!("energy relative error {e_rel:e}"))?;
    Ok(format!("p1 = {p1}, energy = {}", c.energy()))
}

fn ground_state_rigidity() -> Check {
    let ground = StateVector::basis(WellGeometry::unit(), 1).map_err(|e| e.to_string())?;
    let mut deltas = vec![f64::EPSILON / 2.0, 1e-15, 1e-12, 1e-10, 5e-10, 1e-9, 2e-9];
    deltas.extend((0..60).map(|i| 1e-8 * (0.99f64 / 1e-8).powf(i as f64 / 59.0)));
    for &d in &deltas {
        match compress(&ground, 1.0 - d, &SolverOptions::default()) {
            Err(e) if e.is_infeasible() => {}
            other => return Err(format!("delta {d:e}: {other:?}")),
        }
    }
    Ok(format!(
        "{} deltas in [{:e}, 0.99] all infeasible",
        deltas.len(),
        f64::EPSILON / 2.0
    ))
}

fn epsilon_scaling() -> Check {
    let ns = [50usize, 100, 200, 400, 800];
    let mut eps = Vec::new();
    for &n in &ns {
        let psi = StateVector::equal_superposition(WellGeometry::unit(), 1, n)
            .map_err(|e| e.to_string())?;
        let c = compress(&psi, narrow(), &SolverOptions::default()).map_err(|e| e.to_string())?;
        eps.push(probe_weight(&c, 1));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&xs, &eps).ok_or("no slope")?;
    ensure((slope + 1.0).abs() <= 0.1, || format!("slope {slope}"))?;
    Ok(format!("slope = {slope:.6}"))
}

fn cost_difference_positivity() -> Check {
    let (xis, eps) = criterion_grid();
    let mut min = f64::INFINITY;
    for &p in &xis {
        for &e in &eps {
            min = min.min(cost_delta(p, 0.5, e).map_err(|e| e.to_string())?);
        }
    }
    ensure(min >= -1e-12, || format!("min delta {min:e}"))?;
    Ok(format!("min delta = {min:e}"))
}

fn entropy_maximality() -> Check {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let target = 1.0 + 8.0 * (i as f64 + 0.5) / 10.0;
        let sol =
            solve_gibbs(target, &SolverOptions::fixed_cutoff(3)).map_err(|e| e.to_string())?;
        let scan = common::scan_three_level_entropy(target, 100_001);
        let gap = (sol.entropy() - scan).abs();
        worst = worst.max(gap);
        ensure(gap < 1e-6, || format!("target {target}: gap {gap:e}"))?;
    }
    Ok(format!("worst gap = {worst:e} over 10 targets"))
}

fn random_state(rng: &mut ChaCha8Rng) -> StateVector {
    let cutoff = rng.gen_range(1..=20);
    loop {
        let amps: Vec<Complex64> = (0..cutoff)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            })
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let width = rng.gen_range(0.2..3.0);
            return StateVector::new(
                WellGeometry::new(width).unwrap(),
                amps.into_iter().map(|a| a / norm).collect(),
            )
            .unwrap();
        }
    }
}

fn constraint_and_tail_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_energy: f64 = 0.0;
    let mut worst_tail_entropy: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 100 {
        let state = random_state(&mut rng);
        // log-uniform stretch in [1.001, 20] above the minimum width
        let stretch = (rng.gen_range(0.001f64.ln()..20f64.ln())).exp().max(1.001);
        let new_width = min_feasible_width(&state) * stretch;
        let c = compress(&state, new_width, &SolverOptions::default())
            .map_err(|e| format!("pair {pairs}: {e}"))?;
        let sol = c.solution();
        let e0 = state.energy();
        let rel = (c.energy() - e0).abs() / e0;
        worst_energy = worst_energy.max(rel);
        ensure(rel < 1e-9, || format!("pair {pairs}: energy rel {rel:e}"))?;
        ensure(!sol.degenerate && sol.beta > 0.0, || {
            format!("pair {pairs}: beta {}", sol.beta)
        })?;
        let w = sol.weights.as_slice();
        ensure(w.windows(2).all(|p| p[1] < p[0]), || {
            format!("pair {pairs}: not decreasing")
        })?;
        let start = (10.0 / sol.beta.sqrt()).ceil() as usize;
        for n in start..start + 1000 {
            let n3 = (n as f64).powi(3);
            ensure(
                sol.weight_at(n) * n3 < 1e-6 && sol.weights.get(n) * n3 < 1e-6,
                || format!("pair {pairs}: p_n n^3 too large at n = {n}"),
            )?;
        }
        let h = sol.entropy();
        let tail = sol.tail_entropy_bound();
        worst_tail_entropy = worst_tail_entropy.max(tail);
        ensure(h.is_finite(), || format!("pair {pairs}: entropy {h}"))?;
        ensure(tail < 1e-8, || {
            format!("pair {pairs}: tail entropy {tail:e}")
        })?;
        pairs += 1;
    }
    Ok(format!(
        "100 pairs; worst energy rel {worst_energy:e}; worst tail entropy {worst_tail_entropy:e}"
    ))
}

fn overlap_kernel_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let m = rng.gen_range(1..=40);
        let n = rng.gen_range(1..=40);
        let l: f64 = rng.gen_range(0.5..2.0);
        let lp = l * rng.gen_range(0.05..=1.0);
        let closed = cross_overlap(
            m,
            n,
            &WellGeometry::new(l).unwrap(),
            &WellGeometry::new(lp).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let quad = common::cross_overlap_quadrature(m, n, l, lp);
        let diff = (closed - quad).abs();
        worst = worst.max(diff);
        ensure(diff < 1e-8, || {
            format!("m={m} n={n} L={l} L'={lp}: diff {diff:e}")
        })?;
    }
    Ok(format!("worst |closed - quadrature| = {worst:e}"))
}

fn probe_suboptimality() -> Check {
    let (xis, eps) = criterion_grid();
    let mut min_gap = f64::INFINITY;
    for &p in &xis {
        for &e in &eps {
            let gap = projective_probe_cost(p, e).map_err(|e| e.to_string())?
                - helstrom_cost(p, e).map_err(|e| e.to_string())?;
            min_gap = min_gap.min(gap);
            ensure(gap >= 0.0, || format!("xi={} eps={e}: gap {gap:e}", p.xi()))?;
        }
    }
    Ok(format!("min (probe - helstrom) = {min_gap:e}"))
}

fn helstrom_endpoints() -> Check {
    for i in 1..=99 {
        let p = Prior::new(i as f64 / 100.0).unwrap();
        let c = helstrom_cost(p, 0.0).map_err(|e| e.to_string())?;
        ensure(c == 0.0, || format!("C({}, 0) = {c}", p.xi()))?;
    }
    let half = Prior::new(0.5).unwrap();
    let c1 = helstrom_cost(half, 1.0).map_err(|e| e.to_string())?;
    ensure(c1 == 0.5, || format!("C(1/2, 1) = {c1}"))?;
    let ch = helstrom_cost(half, 0.5).map_err(|e| e.to_string())?;
    let expected = 0.5 - 2f64.sqrt() / 4.0;
    ensure((ch - expected).abs() < 1e-12, || {
        format!("C(1/2, 1/2) = {ch}")
    })?;
    Ok(format!("C(1/2,1/2) = {ch}"))
}

fn scan_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |out: &str| -> Result<Vec<u8>, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_isowell"))
            .args(["epsilon-scan", "--quiet", "--out", out])
            .current_dir(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.success(), || format!("exit {:?}", o.status.code()))?;
        std::fs::read(dir.path().join(out)).map_err(|e| e.to_string())
    };
    let a = run("first.csv")?;
    let b = run("second.csv")?;
    ensure(a == b, || "CSV outputs differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1 example-1 reproduction",
            example1_reproduction,
            Duration::from_secs(1),
        ),
        (
            "2 ground-state rigidity",
            ground_state_rigidity,
            Duration::from_secs(1),
        ),
        (
            "3 epsilon(N) scaling",
            epsilon_scaling,
            Duration::from_secs(10),
        ),
        (
            "4 cost-difference positivity",
            cost_difference_positivity,
            Duration::from_secs(1),
        ),
        (
            "5 entropy-maximality oracle",
            entropy_maximality,
            Duration::from_secs(30),
        ),
        (
            "6 constraint/tail suite",
            constraint_and_tail_suite,
            Duration::from_secs(30),
        ),
        (
            "7 overlap kernel oracle",
            overlap_kernel_oracle,
            Duration::from_secs(10),
        ),
        (
            "8 probe suboptimality",
            probe_suboptimality,
            Duration::from_secs(1),
        ),
        (
            "9 helstrom endpoint values",
            helstrom_endpoints,
            Duration::from_secs(1),
        ),
        (
            "10 scan determinism",
            scan_determinism,
            Duration::from_secs(20),
        ),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
