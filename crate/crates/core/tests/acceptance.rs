//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64 as C64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use dapsim::analysis::{
    analytic_no_photon_probability, bright_eigensystem, dark_state, df_subspace, single_excitation_block,
    zeno_projector_distance,
};
use dapsim::dynamics::{
    fidelity, integrate_conditional, integrate_fixed, no_photon_probability, ConstantGenerator, Generator,
    IntegratorSettings,
};
use dapsim::experiments::{figure, run, CurveData, FigureName, RunResult, ScenarioSpec, FIG4_V_MAX};
use dapsim::model::{
    build_h_cond_two_level, CouplingProfile, LaserProfile, LaserSchedule, Scheme, SystemConfig, Trajectory,
};
use dapsim::quantum::{Basis, StateVector};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn settings() -> IntegratorSettings {
    IntegratorSettings::default()
}

fn direct(v_max: f64, kappa: f64) -> RunResult {
    run(&ScenarioSpec::two_atom_direct(v_max, kappa, settings()).unwrap()).unwrap()
}

fn analytic_p0(r: &RunResult) -> f64 {
    let c = &r.spec().config;
    analytic_no_photon_probability(&c.trajectory, &c.coupling, c.kappa, r.duration).unwrap().exponential
}

fn fig7_reproduction() -> Outcome {
    let r = run(&ScenarioSpec::three_atom(0.002, 20.0, 0.02, 0.05, settings()).unwrap()).unwrap();
    let ok = (r.fidelity - 0.997).abs() <= 0.003 && (r.p0 - 0.876).abs() <= 0.010;
    outcome(ok, format!("F = {:.5} (0.997 ± 0.003), P0 = {:.5} (0.876 ± 0.010)", r.fidelity, r.p0))
}

fn adiabatic_limit() -> Outcome {
    let lossless = direct(0.1, 0.0);
    let lossy = direct(0.1, 0.1);
    let a = analytic_p0(&lossy);
    let ok = lossless.fidelity >= 0.999 && lossy.fidelity >= 0.999 && (lossy.p0 - a).abs() <= 0.01;
    outcome(
        ok,
        format!(
            "F(κ=0) = {:.6}, F(κ=0.1) = {:.6}, P0 = {:.6} vs analytic {:.6}",
            lossless.fidelity, lossy.fidelity, lossy.p0, a
        ),
    )
}

fn analytic_numeric_agreement() -> Outcome {
    let mut worst: f64 = 0.0;
    for v_max in [0.1, 0.25, 0.5] {
        for kappa in [0.02, 0.05, 0.1] {
            let r = direct(v_max, kappa);
            worst = worst.max((r.p0 - analytic_p0(&r)).abs());
        }
    }
    outcome(worst <= 0.01, format!("max |P0 - analytic| = {worst:.2e} over 9 runs (≤ 0.01)"))
}

fn sweep_fidelities(curve: &CurveData) -> Vec<f64> {
    match curve {
        CurveData::Sweep(rows) => rows.iter().map(|r| r.outcome.as_ref().expect("row converged").fidelity).collect(),
        CurveData::Series { .. } => panic!("expected a sweep"),
    }
}

fn dissipation_assisted() -> Outcome {
    let f0 = direct(5.0, 0.0).fidelity;
    let f2 = direct(5.0, 0.2).fidelity;
    let curves = figure(FigureName::Fig4, settings()).unwrap();
    let by_stem = |stem: &str| sweep_fidelities(&curves.iter().find(|c| c.stem == stem).unwrap().data);
    let (k0, k01) = (by_stem("fig4_kappa0"), by_stem("fig4_kappa0.1"));
    // slack at the level of the integrator tolerance
    let monotone = k0.windows(2).all(|w| w[1] <= w[0] + 1e-8);
    let assisted = FIG4_V_MAX.iter().zip(k0.iter().zip(&k01)).filter(|(v, _)| **v >= 2.0).all(|(_, (a, b))| b >= a);
    outcome(
        f2 > f0 && monotone && assisted,
        format!(
            "v_max=5: F(κ=0.2) = {f2:.5} vs F(κ=0) = {f0:.5}; κ=0 grid {k0:.4?} non-increasing: {monotone}; \
             κ=0.1 ≥ κ=0 for v_max ≥ 2: {assisted}"
        ),
    )
}

fn success_rate_claims() -> Outcome {
    let a = run(&ScenarioSpec::two_atom_lambda(0.005, 10.0, 0.1, 0.1, settings()).unwrap()).unwrap();
    let b = run(&ScenarioSpec::two_atom_lambda(0.002, 20.0, 0.05, 0.05, settings()).unwrap()).unwrap();
    let ok = (a.p0 - 0.80).abs() <= 0.05 && b.p0 >= 0.85;
    outcome(ok, format!("g²=100κΓ: P0 = {:.4} (0.80 ± 0.05); g²=200κΓ: P0 = {:.4} (≥ 0.85)", a.p0, b.p0))
}

fn numeric_eigenvalues(g1: f64, g2: f64, kappa: f64) -> [C64; 3] {
    let b = single_excitation_block(g1, g2, kappa).unwrap();
    let m = Matrix3::from_fn(|i, j| b[[i, j]]);
    let e = m.schur().eigenvalues().expect("triangular Schur form");
    [e[0], e[1], e[2]]
}

/// Largest distance between `{0, λ2, λ3}` and the numeric spectrum after
/// nearest matching. At the exceptional point the double eigenvalue is
/// compared through the mean of its numeric pair, which unlike the
/// individual members is well conditioned.
fn eigen_mismatch(g1: f64, g2: f64, kappa: f64) -> f64 {
    let e = bright_eigensystem(g1, g2, kappa).unwrap();
    let mut numeric = numeric_eigenvalues(g1, g2, kappa).to_vec();
    numeric.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let zero = numeric.remove(0);
    let (l2, l3) = (e.lambda2, e.lambda3);
    if l2 == l3 {
        let mean = (numeric[0] + numeric[1]) / 2.0;
        return zero.norm().max((mean - l2).norm());
    }
    let direct = (numeric[0] - l2).norm().max((numeric[1] - l3).norm());
    let swapped = (numeric[0] - l3).norm().max((numeric[1] - l2).norm());
    zero.norm().max(direct.min(swapped))
}

fn closed_form_eigenvalues() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut points: Vec<(f64, f64, f64)> =
        (0..99).map(|_| (rng.random_range(0.01..1.0), rng.random_range(0.01..1.0), rng.random_range(0.0..2.0))).collect();
    // exact binary fractions with R = κ/4
    points.push((0.375, 0.5, 2.5));
    let mismatch: Vec<f64> = points.iter().map(|&(a, b, k)| eigen_mismatch(a, b, k)).collect();
    let worst = mismatch.iter().copied().fold(0.0, f64::max);
    let degenerate = *mismatch.last().unwrap();
    outcome(worst <= 1e-10, format!("max mismatch {worst:.2e} over 100 points, exceptional point {degenerate:.2e}"))
}

fn dark_state_stationarity() -> Outcome {
    let basis = std::sync::Arc::new(Basis::new(2, 2, 1).unwrap());
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst_h: f64 = 0.0;
    let (mut worst_f, mut worst_p): (f64, f64) = (0.0, 0.0);
    for k in 0..100 {
        let (g1, g2, kappa) = (rng.random_range(0.01..1.0), rng.random_range(0.01..1.0), rng.random_range(0.0..2.0));
        let h = build_h_cond_two_level(&[g1, g2], kappa, &basis).unwrap();
        let d = dark_state(g1, g2).unwrap();
        worst_h = worst_h.max(h.apply(&d).unwrap().norm());
        if k % 10 == 0 {
            let r = integrate_conditional(&ConstantGenerator(h), &d, (0.0, 100.0), &settings()).unwrap();
            worst_f = worst_f.max((1.0 - fidelity(&r.final_state, &d).unwrap()).abs());
            worst_p = worst_p.max((1.0 - no_photon_probability(&r)).abs());
        }
    }
    outcome(
        worst_h <= 1e-14 && worst_f <= 1e-9 && worst_p <= 1e-9,
        format!("max ||H d|| = {worst_h:.2e}, max |1-F| = {worst_f:.2e}, max |1-P0| = {worst_p:.2e}"),
    )
}

/// Piecewise exponential propagation with the two-point fourth-order
/// Magnus step, using nalgebra's matrix exponential. `H` conserves the
/// excitation number, so only the sector of the initial state is
/// propagated; all other amplitudes stay zero.
fn magnus_reference(gen: &dyn Generator, psi0: &StateVector, t1: f64, dt: f64) -> Vec<C64> {
    let basis = psi0.basis();
    let n = basis.dim();
    let occupied: Vec<usize> =
        (0..n).filter(|&i| psi0.amplitudes()[i].norm() > 0.0).map(|i| basis.excitation(i)).collect();
    let sector: Vec<usize> = (0..n).filter(|&i| occupied.contains(&basis.excitation(i))).collect();
    let m = sector.len();
    let steps = (t1 / dt).ceil() as usize;
    let h = t1 / steps as f64;
    let mut buf = ndarray::Array2::zeros((n, n));
    let mut a_at = |t: f64| {
        gen.fill(t, 0.0, &mut buf);
        DMatrix::from_fn(m, m, |i, j| -C64::i() * buf[[sector[i], sector[j]]])
    };
    let c = 3f64.sqrt() / 6.0;
    let mut psi = nalgebra::DVector::from_iterator(m, sector.iter().map(|&i| psi0.amplitudes()[i]));
    for s in 0..steps {
        let t = s as f64 * h;
        let a1 = a_at(t + (0.5 - c) * h);
        let a2 = a_at(t + (0.5 + c) * h);
        let comm = &a2 * &a1 - &a1 * &a2;
        let omega = (&a1 + &a2) * C64::from(h / 2.0) + comm * C64::from(3f64.sqrt() * h * h / 12.0);
        psi = omega.exp() * psi;
    }
    let mut full = vec![C64::new(0.0, 0.0); n];
    for (k, &i) in sector.iter().enumerate() {
        full[i] = psi[k];
    }
    full
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ")
}

fn max_diff(a: &StateVector, b: &[C64]) -> f64 {
    a.amplitudes().iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn integrator_oracle() -> Outcome {
    let spec = ScenarioSpec::two_atom_direct(5.0, 0.2, settings()).unwrap();
    let basis = spec.basis().unwrap();
    let t1 = spec.duration().unwrap();
    let h = spec.config.hamiltonian(basis.clone(), t1).unwrap();
    let psi0 = spec.initial_state(&basis).unwrap();
    assert!(h.breakpoints().iter().all(|&b| b >= t1), "reference assumes a smooth generator on (0, T)");
    let reference = magnus_reference(&h, &psi0, t1, 1e-4);
    let converged = integrate_conditional(&h, &psi0, (0.0, t1), &settings()).unwrap();
    let agreement = max_diff(&converged.final_state, &reference);

    // steps whose errors stay far above the round-off floor of the reference
    let runs: Vec<_> = [0.06, 0.045, 0.034, 0.025]
        .iter()
        .map(|&dt| integrate_fixed(&h, &psi0, (0.0, t1), dt, usize::MAX).unwrap())
        .collect();
    let dts: Vec<f64> = runs.iter().map(|r| r.dt_used).collect();
    let errs: Vec<f64> = runs.iter().map(|r| max_diff(&r.final_state, &reference)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = dts.iter().zip(&errs).map(|(d, e)| (d.ln(), e.ln())).unzip();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let order = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    outcome(
        agreement <= 1e-8 && (order - 4.0).abs() <= 0.5,
        format!(
            "T = {t1:.2}, max |ψ - ψ_ref| = {agreement:.2e}; steps [{}] give errors [{}], fitted order {order:.3}",
            sci(&dts),
            sci(&errs)
        ),
    )
}

fn effective_model_validity() -> Outcome {
    let full = ScenarioSpec::two_atom_lambda(0.002, 20.0, 0.025, 0.0, settings()).unwrap();
    let eff = full.clone().with_scheme(Scheme::EffectiveTwoLevel);
    let (a, b) = (run(&full).unwrap(), run(&eff).unwrap());
    let (df, dp) = ((a.fidelity - b.fidelity).abs(), (a.p0 - b.p0).abs());
    outcome(
        df <= 0.02 && dp <= 0.03,
        format!(
            "full F = {:.5}, P0 = {:.5}; effective F = {:.5}, P0 = {:.5}; |dF| = {df:.4}, |dP0| = {dp:.4}",
            a.fidelity, a.p0, b.fidelity, b.p0
        ),
    )
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn df_dimensions() -> Outcome {
    let gs = [0.83, 0.41, 0.67, 0.29];
    let mut report = Vec::new();
    let mut ok = true;
    for n in 2..=4usize {
        let config = SystemConfig {
            num_atoms: n,
            scheme: Scheme::TwoLevelDirect,
            kappa: 0.1,
            gamma: 0.0,
            delta: 0.0,
            coupling: CouplingProfile::default(),
            laser: LaserProfile::default(),
            trajectory: Trajectory::constant(vec![0.0; n], 0.0).unwrap(),
            schedule: LaserSchedule::Never,
            photon_cutoff: None,
        };
        let df = df_subspace(&config, &gs[..n], &[]).unwrap();
        let expected = if n % 2 == 0 { binomial(n, n / 2) } else { binomial(n, n.div_ceil(2)) };
        ok &= df.dim() == expected;
        report.push(format!("N={n}: {} (expected {expected})", df.dim()));
    }
    outcome(ok, report.join(", "))
}

fn zeno_projector() -> Outcome {
    let dts = [1.0, 5.0, 10.0, 20.0, 50.0, 75.0, 100.0, 200.0];
    let d: Vec<f64> = dts.iter().map(|&dt| zeno_projector_distance(1.0, 1.0, 1.0, dt).unwrap()).collect();
    let decays = d.windows(2).all(|w| w[1] < w[0]);
    let below = dts.iter().zip(&d).filter(|(t, _)| **t >= 50.0).all(|(_, x)| *x < 1e-3);
    outcome(decays && below, format!("distances [{}] at dt = {dts:?}", sci(&d)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("three-atom entangler reproduces F and P0", fig7_reproduction),
        ("adiabatic limit of the direct scheme", adiabatic_limit),
        ("no-photon probability: closed form vs numerics", analytic_numeric_agreement),
        ("dissipation-assisted regime", dissipation_assisted),
        ("success rates of the Λ scheme", success_rate_claims),
        ("closed-form eigenvalues", closed_form_eigenvalues),
        ("dark-state stationarity", dark_state_stationarity),
        ("integrator vs piecewise exponential", integrator_oracle),
        ("effective two-level model", effective_model_validity),
        ("decoherence-free subspace dimensions", df_dimensions),
        ("Zeno projector limit", zeno_projector),
    ];
    // numeric arguments select criteria, e.g. `cargo test --test acceptance -- 1 8`
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !selected.is_empty() && !selected.contains(&(k + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| outcome(false, "panicked".to_string()));
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.1} s]",
            if o.passed { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
