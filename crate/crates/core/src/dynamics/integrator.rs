use std::sync::Arc;

use ndarray::Array2;

use super::{DynamicsError, Result};
use crate::quantum::{Basis, Operator, StateVector, C64};

/// A time-dependent generator `H(t)` on a fixed basis.
///
/// Breakpoints split the time span into segments on which `H` is smooth.
/// `fill` also receives the start time of the segment being integrated, so
/// an evaluation exactly at a breakpoint can pick the one-sided value.
pub trait Generator: Sync {
    fn basis(&self) -> &Arc<Basis>;

    /// Write `H(t)` into `out`, overwriting it.
    fn fill(&self, t: f64, segment_start: f64, out: &mut Array2<C64>);

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Matrix entries that may be non-zero at some time, row-major without
    /// duplicates; `None` means dense.
    fn pattern(&self) -> Option<Vec<(usize, usize)>> {
        None
    }

    /// Values of the `pattern` entries at `t`, in pattern order. The default
    /// goes through `fill` and is only valid for dense generators.
    fn fill_pattern(&self, t: f64, segment_start: f64, values: &mut [C64]) {
        let n = self.basis().dim();
        let mut h = Array2::zeros((n, n));
        self.fill(t, segment_start, &mut h);
        values.copy_from_slice(h.as_slice().expect("standard layout"));
    }
}

/// Time-independent generator.
pub struct ConstantGenerator(pub Operator);

impl Generator for ConstantGenerator {
    fn basis(&self) -> &Arc<Basis> {
        self.0.basis()
    }

    fn fill(&self, _t: f64, _segment_start: f64, out: &mut Array2<C64>) {
        out.assign(self.0.matrix());
    }
}

/// Adapter for a closure `t -> H(t)`.
pub struct FnGenerator<F> {
    basis: Arc<Basis>,
    f: F,
}

impl<F: Fn(f64) -> Operator + Sync> FnGenerator<F> {
    pub fn new(basis: Arc<Basis>, f: F) -> Self {
        Self { basis, f }
    }
}

impl<F: Fn(f64) -> Operator + Sync> Generator for FnGenerator<F> {
    fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    fn fill(&self, t: f64, _segment_start: f64, out: &mut Array2<C64>) {
        out.assign((self.f)(t).matrix());
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSettings {
    /// Base step; the actual step divides each segment evenly and is kept
    /// below `0.1 / ||H||_inf`.
    pub dt: f64,
    /// Maximum amplitude change tolerated between a run and its half-step
    /// refinement.
    pub tolerance: f64,
    /// Store a snapshot every `stride` base steps.
    pub stride: usize,
    /// Halvings allowed after the first `dt` vs `dt/2` comparison.
    pub max_halvings: u32,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self { dt: 0.05, tolerance: 1e-8, stride: 100, max_halvings: 7 }
    }
}

impl IntegratorSettings {
    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::Settings(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.tolerance > 0.0) {
            return Err(DynamicsError::Settings(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.stride == 0 {
            return Err(DynamicsError::Settings("stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Unnormalized no-photon trajectory.
#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub snapshots: Vec<StateVector>,
    pub norm_sqr: Vec<f64>,
    pub final_state: StateVector,
    /// Largest step actually taken.
    pub dt_used: f64,
    pub steps: usize,
    /// Max final-amplitude difference to the next coarser run (NaN for a
    /// single fixed-step run).
    pub residual: f64,
    pub halvings: u32,
}

impl EvolutionResult {
    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("at least one snapshot")
    }

    fn max_diff(&self, other: &Self) -> f64 {
        self.final_state.max_abs_diff(&other.final_state)
    }
}

/// Largest `dt * ||H||_inf` allowed for the base step. Coarser steps let
/// the scheme damp unresolved fast oscillations at both resolutions alike,
/// which can pass the halving test with a wrong answer.
const MAX_STEP_PHASE: f64 = 0.1;
/// Generator samples per segment for the step bound.
const STIFFNESS_SAMPLES: usize = 16;

struct Segment {
    start: f64,
    end: f64,
    steps: usize,
}

fn max_row_sum(h: &Array2<C64>) -> f64 {
    h.rows().into_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn segments(gen: &dyn Generator, t_span: (f64, f64), dt: f64) -> Vec<Segment> {
    let (t0, t1) = t_span;
    let mut cuts = vec![t0];
    let mut bps: Vec<f64> = gen.breakpoints().into_iter().filter(|&b| b > t0 && b < t1).collect();
    bps.sort_by(f64::total_cmp);
    cuts.extend(bps);
    cuts.push(t1);
    let n = gen.basis().dim();
    let mut h = Array2::<C64>::zeros((n, n));
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let mut norm: f64 = 0.0;
            for k in 0..=STIFFNESS_SAMPLES {
                gen.fill(a + (b - a) * k as f64 / STIFFNESS_SAMPLES as f64, a, &mut h);
                norm = norm.max(max_row_sum(&h));
            }
            let step = if norm > 0.0 { dt.min(MAX_STEP_PHASE / norm) } else { dt };
            Segment { start: a, end: b, steps: (((b - a) / step) - 1e-9).ceil().max(1.0) as usize }
        })
        .collect()
}

/// Row-compressed positions of the entries that can be non-zero.
struct Pattern {
    row_start: Vec<usize>,
    cols: Vec<usize>,
}

impl Pattern {
    fn new(gen: &dyn Generator) -> Result<Self> {
        let n = gen.basis().dim();
        let entries = gen.pattern().unwrap_or_else(|| (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect());
        if entries.windows(2).any(|w| w[0] >= w[1]) || entries.iter().any(|&(i, j)| i >= n || j >= n) {
            return Err(DynamicsError::Settings("generator pattern must be row-major, unique and in range".into()));
        }
        let mut row_start = vec![0; n + 1];
        for &(i, _) in &entries {
            row_start[i + 1] += 1;
        }
        for i in 0..n {
            row_start[i + 1] += row_start[i];
        }
        Ok(Self { row_start, cols: entries.into_iter().map(|(_, j)| j).collect() })
    }

    fn len(&self) -> usize {
        self.cols.len()
    }

    /// `out = -i H x` with `h` holding the pattern values.
    #[inline]
    fn derivative(&self, h: &[C64], x: &[C64], out: &mut [C64]) {
        for (o, r) in out.iter_mut().zip(self.row_start.windows(2)) {
            let mut acc = C64::new(0.0, 0.0);
            for (v, &j) in h[r[0]..r[1]].iter().zip(&self.cols[r[0]..r[1]]) {
                acc += v * x[j];
            }
            *o = C64::new(acc.im, -acc.re);
        }
    }
}

fn check_finite(psi: &[C64], t: f64) -> Result<()> {
    if psi.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(DynamicsError::NonFinite(t))
    }
}

fn run_fixed(
    gen: &dyn Generator,
    psi0: &StateVector,
    segs: &[Segment],
    refine: usize,
    stride: usize,
) -> Result<EvolutionResult> {
    let basis = gen.basis().clone();
    let n = basis.dim();
    let pattern = Pattern::new(gen)?;
    let mut psi: Vec<C64> = psi0.amplitudes().to_vec();
    // compensation terms of the summed updates
    let mut carry = vec![C64::default(); n];
    let zero = C64::default();
    let nnz = pattern.len();
    let (mut h_start, mut h_mid, mut h_end) = (vec![zero; nnz], vec![zero; nnz], vec![zero; nnz]);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);

    let snapshot = |psi: &[C64]| StateVector::new(basis.clone(), ndarray::Array1::from(psi.to_vec()));
    let mut times = vec![segs[0].start];
    let mut snapshots = vec![snapshot(&psi)?];
    let mut norm_sqr = vec![psi0.norm_sqr()];
    let mut global = 0usize;
    let mut dt_used: f64 = 0.0;
    let total_steps: usize = segs.iter().map(|s| s.steps * refine).sum();

    for seg in segs {
        let steps = seg.steps * refine;
        let dt = (seg.end - seg.start) / steps as f64;
        dt_used = dt_used.max(dt);
        gen.fill_pattern(seg.start, seg.start, &mut h_start);
        for j in 0..steps {
            let t = seg.start + j as f64 * dt;
            let t_end = if j + 1 == steps { seg.end } else { seg.start + (j + 1) as f64 * dt };
            gen.fill_pattern(t + 0.5 * dt, seg.start, &mut h_mid);
            gen.fill_pattern(t_end, seg.start, &mut h_end);
            let (hs, hm, he) = (&h_start[..], &h_mid[..], &h_end[..]);

            pattern.derivative(hs, &psi, &mut k1);
            for i in 0..n {
                tmp[i] = psi[i] + k1[i] * (0.5 * dt);
            }
            pattern.derivative(hm, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = psi[i] + k2[i] * (0.5 * dt);
            }
            pattern.derivative(hm, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = psi[i] + k3[i] * dt;
            }
            pattern.derivative(he, &tmp, &mut k4);
            for i in 0..n {
                let inc = (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0) - carry[i];
                let next = psi[i] + inc;
                carry[i] = (next - psi[i]) - inc;
                psi[i] = next;
            }
            std::mem::swap(&mut h_start, &mut h_end);

            global += 1;
            if global.is_multiple_of(stride) || global == total_steps {
                check_finite(&psi, t_end)?;
                let s = snapshot(&psi)?;
                norm_sqr.push(s.norm_sqr());
                snapshots.push(s);
                times.push(t_end);
            }
        }
    }
    let final_state = snapshots.last().expect("final snapshot").clone();
    Ok(EvolutionResult {
        times,
        snapshots,
        norm_sqr,
        final_state,
        dt_used,
        steps: total_steps,
        residual: f64::NAN,
        halvings: 0,
    })
}

fn check_inputs(gen: &dyn Generator, psi0: &StateVector, t_span: (f64, f64)) -> Result<()> {
    if psi0.basis() != gen.basis() {
        return Err(crate::quantum::QuantumError::BasisMismatch.into());
    }
    let n2 = psi0.norm_sqr();
    if !(n2 > 0.0 && n2 <= 1.0 + 1e-8) {
        return Err(DynamicsError::InitialNorm(n2));
    }
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(DynamicsError::Settings(format!("invalid time span ({t0}, {t1})")));
    }
    Ok(())
}

/// One fourth-order Runge-Kutta run with fixed step, no convergence control.
pub fn integrate_fixed<G: Generator>(
    gen: &G,
    psi0: &StateVector,
    t_span: (f64, f64),
    dt: f64,
    stride: usize,
) -> Result<EvolutionResult> {
    IntegratorSettings { dt, stride, ..Default::default() }.validate()?;
    check_inputs(gen, psi0, t_span)?;
    if t_span.1 == t_span.0 {
        return Ok(trivial(psi0, t_span.0));
    }
    run_fixed(gen, psi0, &segments(gen, t_span, dt), 1, stride)
}

fn trivial(psi0: &StateVector, t: f64) -> EvolutionResult {
    EvolutionResult {
        times: vec![t],
        snapshots: vec![psi0.clone()],
        norm_sqr: vec![psi0.norm_sqr()],
        final_state: psi0.clone(),
        dt_used: 0.0,
        steps: 0,
        residual: 0.0,
        halvings: 0,
    }
}

/// Fourth-order Runge-Kutta with `H` sampled at step start, midpoint and
/// end, repeated with halved steps until every amplitude changes by
/// less than `settings.tolerance` in the final state. Returns the finest run.
pub fn integrate_conditional<G: Generator>(
    gen: &G,
    psi0: &StateVector,
    t_span: (f64, f64),
    settings: &IntegratorSettings,
) -> Result<EvolutionResult> {
    settings.validate()?;
    check_inputs(gen, psi0, t_span)?;
    if t_span.1 == t_span.0 {
        return Ok(trivial(psi0, t_span.0));
    }
    let segs = segments(gen, t_span, settings.dt);
    let mut coarse = run_fixed(gen, psi0, &segs, 1, settings.stride)?;
    let mut residual = f64::INFINITY;
    for level in 1..=settings.max_halvings + 1 {
        let refine = 1usize << level;
        let mut fine = run_fixed(gen, psi0, &segs, refine, settings.stride * refine)?;
        residual = fine.max_diff(&coarse);
        if residual < settings.tolerance {
            fine.residual = residual;
            fine.halvings = level;
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(DynamicsError::NotConverged { residual, dt: coarse.dt_used, tolerance: settings.tolerance })
}
