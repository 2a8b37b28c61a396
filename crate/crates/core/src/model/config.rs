use std::sync::Arc;

use ndarray::Array2;

use super::hamiltonian::{fill_h_cond_lambda, fill_two_level};
use super::{check_rate, CouplingProfile, LaserProfile, ModelError, Result, Trajectory};
use crate::dynamics::Generator;
use crate::quantum::{Basis, Label, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Two-level atoms coupled directly to the cavity.
    TwoLevelDirect,
    /// Three-level Λ atoms, laser on 2-3, cavity on 1-3.
    Lambda,
    /// Two-level model obtained by eliminating level 3 of the Λ scheme.
    EffectiveTwoLevel,
}

impl Scheme {
    pub fn levels_per_atom(self) -> u8 {
        match self {
            Scheme::Lambda => 3,
            Scheme::TwoLevelDirect | Scheme::EffectiveTwoLevel => 2,
        }
    }

    pub fn uses_laser(self) -> bool {
        !matches!(self, Scheme::TwoLevelDirect)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LaserSchedule {
    Never,
    /// When `x1 + x2` changes sign, i.e. both atoms see the same coupling.
    AtSymmetricPoint,
    AtTime(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    pub num_atoms: usize,
    pub scheme: Scheme,
    pub kappa: f64,
    pub gamma: f64,
    pub delta: f64,
    pub coupling: CouplingProfile,
    pub laser: LaserProfile,
    pub trajectory: Trajectory,
    pub schedule: LaserSchedule,
    /// `None` means: total excitation of the initial state.
    pub photon_cutoff: Option<usize>,
}

const SCAN_POINTS: usize = 4096;

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_atoms == 0 {
            return Err(ModelError::Invalid("at least one atom required".into()));
        }
        if self.trajectory.num_atoms() != self.num_atoms {
            return Err(ModelError::AtomCount { expected: self.num_atoms, found: self.trajectory.num_atoms() });
        }
        check_rate("kappa", self.kappa)?;
        check_rate("gamma", self.gamma)?;
        if self.scheme.uses_laser() && (self.delta == 0.0 || !self.delta.is_finite()) {
            return Err(ModelError::ZeroDetuning);
        }
        match self.schedule {
            LaserSchedule::AtTime(t) if !(t >= 0.0 && t.is_finite()) => {
                return Err(ModelError::Invalid(format!("laser turn-off time must be >= 0, got {t}")));
            }
            LaserSchedule::AtSymmetricPoint if self.num_atoms < 2 => {
                return Err(ModelError::Invalid("symmetric-point turn-off needs two atoms".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Basis large enough for `initial`; errors if an explicit cutoff is below
    /// its excitation.
    pub fn basis_for(&self, initial: &Label) -> Result<Arc<Basis>> {
        self.validate()?;
        if initial.levels.len() != self.num_atoms {
            return Err(ModelError::AtomCount { expected: self.num_atoms, found: initial.levels.len() });
        }
        let excitation = initial.excitation();
        let cutoff = self.photon_cutoff.unwrap_or(excitation);
        if cutoff < excitation.max(initial.photons) {
            return Err(ModelError::Invalid(format!(
                "photon cutoff {cutoff} below initial excitation {excitation}"
            )));
        }
        Ok(Arc::new(Basis::new(self.num_atoms, self.scheme.levels_per_atom(), cutoff)?))
    }

    pub fn couplings_at(&self, t: f64) -> Vec<f64> {
        self.trajectory.positions_at(t).iter().map(|&x| self.coupling.at(x)).collect()
    }

    /// Laser amplitudes ignoring the schedule.
    pub fn laser_profile_at(&self, t: f64) -> Vec<f64> {
        self.trajectory.positions_at(t).iter().map(|&x| self.laser.at(x)).collect()
    }

    /// Laser turn-off time within `[0, horizon]`, if any.
    pub fn laser_off_time(&self, horizon: f64) -> Option<f64> {
        match self.schedule {
            LaserSchedule::Never => None,
            LaserSchedule::AtTime(t) => Some(t),
            LaserSchedule::AtSymmetricPoint => {
                let f = |t: f64| {
                    let x = self.trajectory.positions_at(t);
                    x[0] + x[1]
                };
                let h = horizon / SCAN_POINTS as f64;
                let mut prev = f(0.0);
                if prev == 0.0 {
                    return Some(0.0);
                }
                for k in 1..=SCAN_POINTS {
                    let t = k as f64 * h;
                    let cur = f(t);
                    if cur == 0.0 || cur.signum() != prev.signum() {
                        let t0 = t - h;
                        return Some(t0 + h * prev / (prev - cur));
                    }
                    prev = cur;
                }
                None
            }
        }
    }

    pub fn hamiltonian(&self, basis: Arc<Basis>, horizon: f64) -> Result<ConditionalHamiltonian> {
        self.validate()?;
        if basis.levels_per_atom() != self.scheme.levels_per_atom() {
            return Err(ModelError::LevelMismatch {
                expected: self.scheme.levels_per_atom(),
                found: basis.levels_per_atom(),
            });
        }
        if basis.num_atoms() != self.num_atoms {
            return Err(ModelError::AtomCount { expected: self.num_atoms, found: basis.num_atoms() });
        }
        let laser_off = if self.scheme.uses_laser() { self.laser_off_time(horizon) } else { None };
        let terms = Terms::new(self, &basis);
        Ok(ConditionalHamiltonian { config: self.clone(), basis, laser_off, terms })
    }
}

/// `H(t) = C + Σ_k p_k(t) M_k` with the parameters `p` of the scheme:
/// `g_i` (direct), `g_i, Ω_i` (Λ) or `g~_i, Γ~_i` (effective).
struct Terms {
    /// Structurally non-zero entries, row-major.
    entries: Vec<(usize, usize)>,
    /// Constant part of each entry.
    base: Vec<C64>,
    /// `(entry, parameter, coefficient)`
    linear: Vec<(usize, usize, C64)>,
    num_params: usize,
}

impl Terms {
    fn new(c: &SystemConfig, basis: &Basis) -> Self {
        let n = basis.dim();
        let atoms = c.num_atoms;
        let fill = |params: &[f64], constants: bool, out: &mut Array2<C64>| {
            let (k, g, d) = if constants { (c.kappa, c.gamma, c.delta) } else { (0.0, 0.0, 0.0) };
            match c.scheme {
                Scheme::TwoLevelDirect => fill_two_level(params, None, k, basis, out),
                Scheme::EffectiveTwoLevel => fill_two_level(&params[..atoms], Some(&params[atoms..]), k, basis, out),
                Scheme::Lambda => fill_h_cond_lambda(&params[..atoms], &params[atoms..], d, g, k, basis, out),
            }
        };
        let num_params = match c.scheme {
            Scheme::TwoLevelDirect => atoms,
            Scheme::Lambda | Scheme::EffectiveTwoLevel => 2 * atoms,
        };
        let mut constant = Array2::<C64>::zeros((n, n));
        fill(&vec![0.0; num_params], true, &mut constant);
        let mut nonzero = constant.mapv(|z| z.norm() > 0.0);
        let mut coefficients = Vec::with_capacity(num_params);
        for k in 0..num_params {
            let mut p = vec![0.0; num_params];
            p[k] = 1.0;
            let mut m = Array2::<C64>::zeros((n, n));
            fill(&p, false, &mut m);
            nonzero.zip_mut_with(&m, |nz, z| *nz |= z.norm() > 0.0);
            coefficients.push(m);
        }
        let entries: Vec<(usize, usize)> =
            nonzero.indexed_iter().filter(|(_, &nz)| nz).map(|(ij, _)| ij).collect();
        let base = entries.iter().map(|&ij| constant[ij]).collect();
        let mut linear = Vec::new();
        for (e, &ij) in entries.iter().enumerate() {
            for (k, m) in coefficients.iter().enumerate() {
                if m[ij].norm() > 0.0 {
                    linear.push((e, k, m[ij]));
                }
            }
        }
        Self { entries, base, linear, num_params }
    }
}

/// `H_cond(t)` of a [`SystemConfig`] along its trajectory.
pub struct ConditionalHamiltonian {
    config: SystemConfig,
    basis: Arc<Basis>,
    laser_off: Option<f64>,
    terms: Terms,
}

impl ConditionalHamiltonian {
    pub fn laser_off(&self) -> Option<f64> {
        self.laser_off
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    fn laser_on(&self, t: f64, segment_start: f64) -> bool {
        match self.laser_off {
            None => true,
            Some(off) => t < off || (t == off && segment_start < off),
        }
    }

    /// Laser amplitudes including the schedule.
    pub fn omegas_at(&self, t: f64, segment_start: f64) -> Vec<f64> {
        if self.laser_on(t, segment_start) {
            self.config.laser_profile_at(t)
        } else {
            vec![0.0; self.config.num_atoms]
        }
    }

    /// Scheme parameters at `t`; `p` holds `num_params` entries and
    /// `x` one per atom.
    fn params_into(&self, t: f64, segment_start: f64, x: &mut [f64], p: &mut [f64]) {
        let c = &self.config;
        c.trajectory.positions_into(t, x);
        let on = self.laser_on(t, segment_start);
        let (first, second) = p.split_at_mut(x.len());
        match c.scheme {
            Scheme::TwoLevelDirect => {
                for (p, &x) in first.iter_mut().zip(x.iter()) {
                    *p = c.coupling.at(x);
                }
            }
            Scheme::Lambda => {
                for ((g, o), &x) in first.iter_mut().zip(second.iter_mut()).zip(x.iter()) {
                    *g = c.coupling.at(x);
                    *o = if on { c.laser.at(x) } else { 0.0 };
                }
            }
            Scheme::EffectiveTwoLevel => {
                for ((g, r), &x) in first.iter_mut().zip(second.iter_mut()).zip(x.iter()) {
                    let ratio = if on { c.laser.at(x) / (2.0 * c.delta) } else { 0.0 };
                    *g = ratio * c.coupling.at(x);
                    *r = ratio * ratio * c.gamma;
                }
            }
        }
    }
}

impl Generator for ConditionalHamiltonian {
    fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    fn fill(&self, t: f64, segment_start: f64, out: &mut Array2<C64>) {
        let mut values = vec![C64::new(0.0, 0.0); self.terms.entries.len()];
        self.fill_pattern(t, segment_start, &mut values);
        out.fill(C64::new(0.0, 0.0));
        for (&ij, z) in self.terms.entries.iter().zip(values) {
            out[ij] = z;
        }
    }

    fn fill_pattern(&self, t: f64, segment_start: f64, values: &mut [C64]) {
        const STACK: usize = 8;
        let atoms = self.config.num_atoms;
        let (mut xs, mut ps) = ([0.0; STACK], [0.0; 2 * STACK]);
        let mut heap;
        let (x, p) = if atoms <= STACK {
            (&mut xs[..atoms], &mut ps[..self.terms.num_params])
        } else {
            heap = vec![0.0; atoms + self.terms.num_params];
            heap.split_at_mut(atoms)
        };
        self.params_into(t, segment_start, x, p);
        values.copy_from_slice(&self.terms.base);
        for &(e, k, z) in &self.terms.linear {
            values[e] += z * p[k];
        }
    }

    fn pattern(&self) -> Option<Vec<(usize, usize)>> {
        Some(self.terms.entries.clone())
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.laser_off.into_iter().collect();
        b.extend(self.config.trajectory.stop_time());
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_h_cond_lambda, build_h_cond_two_level, build_h_eff, effective_params};

    fn lambda_config(schedule: LaserSchedule) -> SystemConfig {
        SystemConfig {
            num_atoms: 2,
            scheme: Scheme::Lambda,
            kappa: 0.1,
            gamma: 0.05,
            delta: 20.0,
            coupling: CouplingProfile::default(),
            laser: LaserProfile::new(40.0, 5.0).unwrap(),
            trajectory: Trajectory::constant(vec![-4.0, -5.0], 0.01).unwrap(),
            schedule,
            photon_cutoff: None,
        }
    }

    #[test]
    fn symmetric_point_of_linear_motion() {
        let c = lambda_config(LaserSchedule::AtSymmetricPoint);
        let t = c.laser_off_time(1000.0).unwrap();
        assert!((t - 450.0).abs() < 1e-9);
        assert_eq!(lambda_config(LaserSchedule::Never).laser_off_time(1000.0), None);
        assert_eq!(lambda_config(LaserSchedule::AtTime(3.0)).laser_off_time(1000.0), Some(3.0));
    }

    #[test]
    fn validation() {
        let mut c = lambda_config(LaserSchedule::Never);
        c.delta = 0.0;
        assert_eq!(c.validate(), Err(ModelError::ZeroDetuning));
        let mut c = lambda_config(LaserSchedule::AtTime(-1.0));
        assert!(c.validate().is_err());
        c.schedule = LaserSchedule::Never;
        c.kappa = -0.1;
        assert!(matches!(c.validate(), Err(ModelError::NegativeRate { .. })));
        let mut c = lambda_config(LaserSchedule::Never);
        c.photon_cutoff = Some(0);
        assert!(c.basis_for(&Label::new(&[1, 1], 1)).is_err());
        assert!(c.basis_for(&Label::new(&[2, 1], 0)).is_err());
        assert_eq!(c.basis_for(&Label::new(&[1, 1], 0)).unwrap().photon_cutoff(), 0);
        c.photon_cutoff = None;
        assert_eq!(c.basis_for(&Label::new(&[2, 2], 0)).unwrap().photon_cutoff(), 2);
        assert_eq!(c.basis_for(&Label::new(&[1, 1], 1)).unwrap().photon_cutoff(), 1);
    }

    #[test]
    fn generator_matches_builders() {
        let c = lambda_config(LaserSchedule::AtSymmetricPoint);
        let basis = c.basis_for(&Label::new(&[2, 1], 0)).unwrap();
        let h = c.hamiltonian(basis.clone(), 1000.0).unwrap();
        let t = 120.0;
        let mut out = Array2::zeros((basis.dim(), basis.dim()));
        h.fill(t, 0.0, &mut out);
        let op = build_h_cond_lambda(&c.couplings_at(t), &c.laser_profile_at(t), 20.0, 0.05, 0.1, &basis).unwrap();
        assert!(close(&out, op.matrix()));

        let off = h.laser_off().unwrap();
        h.fill(off, 0.0, &mut out);
        assert!(close(&out, build_h_cond_lambda(&c.couplings_at(off), &c.laser_profile_at(off), 20.0, 0.05, 0.1, &basis).unwrap().matrix()));
        h.fill(off, off, &mut out);
        assert!(close(&out, build_h_cond_lambda(&c.couplings_at(off), &[0.0, 0.0], 20.0, 0.05, 0.1, &basis).unwrap().matrix()));

        let mut d = c.clone();
        d.scheme = Scheme::TwoLevelDirect;
        let b2 = d.basis_for(&Label::new(&[2, 1], 0)).unwrap();
        let h2 = d.hamiltonian(b2.clone(), 1000.0).unwrap();
        assert!(h2.breakpoints().is_empty());
        let mut out2 = Array2::zeros((b2.dim(), b2.dim()));
        h2.fill(t, 0.0, &mut out2);
        assert!(close(&out2, build_h_cond_two_level(&d.couplings_at(t), 0.1, &b2).unwrap().matrix()));

        let mut e = c.clone();
        e.scheme = Scheme::EffectiveTwoLevel;
        let h3 = e.hamiltonian(b2.clone(), 1000.0).unwrap();
        h3.fill(t, 0.0, &mut out2);
        let eff = effective_params(&e.couplings_at(t), &e.laser_profile_at(t), 20.0, 0.05, 0.1).unwrap();
        assert!(close(&out2, build_h_eff(&eff, &b2).unwrap().matrix()));
    }

    fn close(a: &Array2<C64>, b: &Array2<C64>) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= 1e-15 * (1.0 + y.norm()))
    }

    #[test]
    fn pattern_covers_all_entries() {
        let c = lambda_config(LaserSchedule::Never);
        let basis = c.basis_for(&Label::new(&[2, 1], 0)).unwrap();
        let h = c.hamiltonian(basis.clone(), 1000.0).unwrap();
        let pattern = h.pattern().unwrap();
        let mut out = Array2::zeros((basis.dim(), basis.dim()));
        h.fill(300.0, 0.0, &mut out);
        for ((i, j), z) in out.indexed_iter() {
            if z.norm() > 0.0 {
                assert!(pattern.contains(&(i, j)));
            }
        }
        assert!(pattern.len() < basis.dim() * basis.dim() / 2);
    }
}
