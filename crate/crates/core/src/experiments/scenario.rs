use std::f64::consts::SQRT_2;
use std::sync::Arc;

use crate::dynamics::{
    fidelity, integrate_conditional, no_photon_probability, photon_population, population, EvolutionResult,
    IntegratorSettings, Subspace,
};
use crate::model::{CouplingProfile, LaserProfile, LaserSchedule, MotionLaw, Scheme, SystemConfig, Trajectory};
use crate::quantum::{Basis, Label, StateVector, C64};

use super::{ExperimentError, Result};

/// Atoms count as having left the cavity beyond this position.
pub const EXIT_POSITION: f64 = 4.0;
/// Start of the leading atom in the constant-speed two-atom scheme.
pub const LAMBDA_LEAD_START: f64 = -4.0;
/// Start of the co-moving pair in the three-atom scheme.
pub const THREE_ATOM_START: f64 = -4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    TwoAtomDirect,
    TwoAtomLambda,
    ThreeAtom,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::TwoAtomDirect => "two-atom-direct",
            ScenarioKind::TwoAtomLambda => "two-atom-lambda",
            ScenarioKind::ThreeAtom => "three-atom",
        }
    }
}

/// End of the integration window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    /// When the trajectory stops.
    UntilStop,
    /// When every atom has passed the given position.
    UntilExit(f64),
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub config: SystemConfig,
    pub initial: Label,
    /// Target as a superposition of basis labels; normalized on use.
    pub target: Vec<(Label, C64)>,
    pub settings: IntegratorSettings,
    pub horizon: Horizon,
}

fn antisymmetric() -> Vec<(Label, C64)> {
    let c = 1.0 / SQRT_2;
    vec![(Label::new(&[1, 2], 0), C64::new(c, 0.0)), (Label::new(&[2, 1], 0), C64::new(-c, 0.0))]
}

fn lambda_config(num_atoms: usize, initial: Vec<f64>, v: f64, delta: f64, kappa: f64, gamma: f64) -> Result<SystemConfig> {
    Ok(SystemConfig {
        num_atoms,
        scheme: Scheme::Lambda,
        kappa,
        gamma,
        delta,
        coupling: CouplingProfile::default(),
        laser: LaserProfile::default(),
        trajectory: Trajectory::constant(initial, v)?,
        schedule: LaserSchedule::Never,
        photon_cutoff: None,
    })
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ExperimentError::Invalid(format!("{name} must be positive, got {v}")))
    }
}

impl ScenarioSpec {
    /// Two two-level atoms two waists apart with shaped velocity, from
    /// `|12;0>` to `(|12;0> - |21;0>)/√2`.
    pub fn two_atom_direct(v_max: f64, kappa: f64, settings: IntegratorSettings) -> Result<Self> {
        require_positive("v_max", v_max)?;
        let config = SystemConfig {
            num_atoms: 2,
            scheme: Scheme::TwoLevelDirect,
            kappa,
            gamma: 0.0,
            delta: 0.0,
            coupling: CouplingProfile::default(),
            laser: LaserProfile::default(),
            trajectory: Trajectory::shaped(v_max, &[0.0, -2.0], 1.0)?,
            schedule: LaserSchedule::Never,
            photon_cutoff: None,
        };
        config.validate()?;
        Ok(Self {
            kind: ScenarioKind::TwoAtomDirect,
            config,
            initial: Label::new(&[1, 2], 0),
            target: antisymmetric(),
            settings,
            horizon: Horizon::UntilStop,
        })
    }

    /// Two Λ atoms one waist apart at constant speed; the laser goes off
    /// once both see the same coupling.
    pub fn two_atom_lambda(v: f64, delta: f64, kappa: f64, gamma: f64, settings: IntegratorSettings) -> Result<Self> {
        require_positive("v", v)?;
        let mut config =
            lambda_config(2, vec![LAMBDA_LEAD_START, LAMBDA_LEAD_START - 1.0], v, delta, kappa, gamma)?;
        config.schedule = LaserSchedule::AtSymmetricPoint;
        config.validate()?;
        Ok(Self {
            kind: ScenarioKind::TwoAtomLambda,
            config,
            initial: Label::new(&[1, 2], 0),
            target: antisymmetric(),
            settings,
            horizon: Horizon::UntilExit(EXIT_POSITION),
        })
    }

    /// Atoms 1 and 2 side by side, atom 3 one waist behind carrying the
    /// excitation; target `|s1;0>`.
    pub fn three_atom(v: f64, delta: f64, kappa: f64, gamma: f64, settings: IntegratorSettings) -> Result<Self> {
        require_positive("v", v)?;
        let x = THREE_ATOM_START;
        let config = lambda_config(3, vec![x, x, x - 1.0], v, delta, kappa, gamma)?;
        config.validate()?;
        let c = C64::new(1.0 / SQRT_2, 0.0);
        Ok(Self {
            kind: ScenarioKind::ThreeAtom,
            config,
            initial: Label::new(&[1, 1, 2], 0),
            target: vec![(Label::new(&[1, 2, 1], 0), c), (Label::new(&[2, 1, 1], 0), c)],
            settings,
            horizon: Horizon::UntilExit(EXIT_POSITION),
        })
    }

    /// Same scenario with the Λ atoms replaced by the effective two-level model.
    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.config.scheme = scheme;
        self
    }

    pub fn with_settings(mut self, settings: IntegratorSettings) -> Self {
        self.settings = settings;
        self
    }

    /// Parameter choices outside the validity range of the model.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.config.scheme.uses_laser() {
            let scale = self.config.coupling.g_max.max(self.config.laser.omega_max).max(self.config.gamma);
            if self.config.delta.abs() < 10.0 * scale {
                w.push(format!(
                    "detuning {} is below ten times the largest other rate {}; level 3 is not well eliminated",
                    self.config.delta, scale
                ));
            }
        }
        w
    }

    pub fn duration(&self) -> Result<f64> {
        let tr = &self.config.trajectory;
        let t = match self.horizon {
            Horizon::Fixed(t) => t,
            Horizon::UntilStop => tr.stop_time().ok_or_else(|| {
                ExperimentError::Invalid("trajectory never reaches its stop position".into())
            })?,
            Horizon::UntilExit(x_exit) => match tr.law() {
                MotionLaw::Constant { velocity } if velocity > 0.0 => {
                    let last = tr.initial_positions().iter().copied().fold(f64::INFINITY, f64::min);
                    let t = (x_exit - last) / velocity;
                    match tr.stop_time() {
                        Some(ts) if ts < t => ts,
                        _ => t,
                    }
                }
                _ => return Err(ExperimentError::Invalid("exit horizon needs constant positive velocity".into())),
            },
        };
        if !(t >= 0.0 && t.is_finite()) {
            return Err(ExperimentError::Invalid(format!("invalid duration {t}")));
        }
        Ok(t)
    }

    pub fn basis(&self) -> Result<Arc<Basis>> {
        Ok(self.config.basis_for(&self.initial)?)
    }

    pub fn initial_state(&self, basis: &Arc<Basis>) -> Result<StateVector> {
        Ok(StateVector::basis_state(basis.clone(), &self.initial)?)
    }

    pub fn target_state(&self, basis: &Arc<Basis>) -> Result<StateVector> {
        Ok(StateVector::from_terms(basis.clone(), &self.target)?.normalized()?)
    }
}

/// Scalar outcome of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSummary {
    pub fidelity: f64,
    pub p0: f64,
    pub duration: f64,
    pub dt_used: f64,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub fidelity: f64,
    pub p0: f64,
    pub duration: f64,
    pub laser_off: Option<f64>,
    pub evolution: EvolutionResult,
    pub target: StateVector,
    pub initial: StateVector,
    spec: ScenarioSpec,
}

/// Observables along a run, one entry per stored snapshot.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    /// `positions[i][k]`: atom `i` at snapshot `k`.
    pub positions: Vec<Vec<f64>>,
    pub couplings: Vec<Vec<f64>>,
    pub norm_sq: Vec<f64>,
    pub pop_target: Vec<f64>,
    pub pop_initial: Vec<f64>,
    pub pop_cavity_photon: Vec<f64>,
}

impl RunResult {
    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn summary(&self) -> RunSummary {
        RunSummary {
            fidelity: self.fidelity,
            p0: self.p0,
            duration: self.duration,
            dt_used: self.evolution.dt_used,
            converged: true,
        }
    }

    pub fn time_series(&self) -> Result<TimeSeries> {
        let ev = &self.evolution;
        let n = self.spec.config.num_atoms;
        let mut ts = TimeSeries {
            t: ev.times.clone(),
            positions: vec![Vec::with_capacity(ev.times.len()); n],
            couplings: vec![Vec::with_capacity(ev.times.len()); n],
            norm_sq: ev.norm_sqr.clone(),
            ..Default::default()
        };
        let initial = [self.spec.initial.clone()];
        for (&t, psi) in ev.times.iter().zip(&ev.snapshots) {
            let x = self.spec.config.trajectory.positions_at(t);
            for i in 0..n {
                ts.positions[i].push(x[i]);
                ts.couplings[i].push(self.spec.config.coupling.at(x[i]));
            }
            if psi.norm_sqr() > 0.0 {
                ts.pop_target.push(population(psi, Subspace::Vector(&self.target))?);
                ts.pop_initial.push(population(psi, Subspace::Labels(&initial))?);
                ts.pop_cavity_photon.push(photon_population(psi)?);
            } else {
                ts.pop_target.push(f64::NAN);
                ts.pop_initial.push(f64::NAN);
                ts.pop_cavity_photon.push(f64::NAN);
            }
        }
        Ok(ts)
    }

    /// Population of an arbitrary state at every snapshot.
    pub fn population_series(&self, f: impl Fn(f64) -> Result<StateVector>) -> Result<Vec<f64>> {
        self.evolution
            .times
            .iter()
            .zip(&self.evolution.snapshots)
            .map(|(&t, psi)| Ok(population(psi, Subspace::Vector(&f(t)?))?))
            .collect()
    }
}

/// Integrate a scenario and evaluate fidelity and no-photon probability.
pub fn run(spec: &ScenarioSpec) -> Result<RunResult> {
    let basis = spec.basis()?;
    let duration = spec.duration()?;
    let h = spec.config.hamiltonian(basis.clone(), duration)?;
    let initial = spec.initial_state(&basis)?;
    let target = spec.target_state(&basis)?;
    let evolution = integrate_conditional(&h, &initial, (0.0, duration), &spec.settings)?;
    let fidelity = fidelity(&evolution.final_state, &target)?;
    let p0 = no_photon_probability(&evolution);
    Ok(RunResult { fidelity, p0, duration, laser_off: h.laser_off(), evolution, target, initial, spec: spec.clone() })
}

pub fn run_two_atom_direct(v_max: f64, kappa: f64, settings: IntegratorSettings) -> Result<RunResult> {
    run(&ScenarioSpec::two_atom_direct(v_max, kappa, settings)?)
}

pub fn run_two_atom_lambda(v: f64, delta: f64, kappa: f64, gamma: f64, settings: IntegratorSettings) -> Result<RunResult> {
    run(&ScenarioSpec::two_atom_lambda(v, delta, kappa, gamma, settings)?)
}

pub fn run_three_atom(v: f64, delta: f64, kappa: f64, gamma: f64, settings: IntegratorSettings) -> Result<RunResult> {
    run(&ScenarioSpec::three_atom(v, delta, kappa, gamma, settings)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::symmetric_target;

    #[test]
    fn durations() {
        let s = IntegratorSettings::default();
        let l = ScenarioSpec::two_atom_lambda(0.002, 20.0, 0.025, 0.0, s).unwrap();
        assert!((l.duration().unwrap() - 4500.0).abs() < 1e-9);
        let t = ScenarioSpec::three_atom(0.002, 20.0, 0.02, 0.05, s).unwrap();
        assert!((t.duration().unwrap() - 4500.0).abs() < 1e-9);
        let d = ScenarioSpec::two_atom_direct(1.0, 0.0, s).unwrap();
        assert_eq!(d.duration().unwrap(), d.config.trajectory.stop_time().unwrap());
    }

    #[test]
    fn targets_are_normalized() {
        let s = IntegratorSettings::default();
        for spec in [
            ScenarioSpec::two_atom_direct(1.0, 0.0, s).unwrap(),
            ScenarioSpec::two_atom_lambda(0.01, 20.0, 0.025, 0.0, s).unwrap(),
            ScenarioSpec::three_atom(0.01, 20.0, 0.02, 0.05, s).unwrap(),
        ] {
            let b = spec.basis().unwrap();
            assert!((spec.target_state(&b).unwrap().norm() - 1.0).abs() < 1e-15);
            assert_eq!(spec.initial_state(&b).unwrap().norm(), 1.0);
        }
        let t = ScenarioSpec::three_atom(0.01, 20.0, 0.02, 0.05, s).unwrap();
        let b = t.basis().unwrap();
        assert!(t.target_state(&b).unwrap().max_abs_diff(&symmetric_target(&b).unwrap()) < 1e-15);
    }

    #[test]
    fn invalid_parameters() {
        let s = IntegratorSettings::default();
        assert!(ScenarioSpec::two_atom_direct(0.0, 0.1, s).is_err());
        assert!(ScenarioSpec::two_atom_direct(1.0, -0.1, s).is_err());
        assert!(ScenarioSpec::two_atom_lambda(0.01, 0.0, 0.1, 0.1, s).is_err());
        assert!(ScenarioSpec::three_atom(-0.01, 20.0, 0.1, 0.1, s).is_err());
        assert!(!ScenarioSpec::two_atom_lambda(0.01, 5.0, 0.1, 0.1, s).unwrap().warnings().is_empty());
        assert!(ScenarioSpec::two_atom_lambda(0.01, 20.0, 0.1, 0.1, s).unwrap().warnings().is_empty());
    }

    #[test]
    fn lossless_direct_run_keeps_norm() {
        let r = run_two_atom_direct(2.0, 0.0, IntegratorSettings::default()).unwrap();
        assert!((r.p0 - 1.0).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&r.fidelity));
        let ts = r.time_series().unwrap();
        assert_eq!(ts.t.len(), ts.pop_target.len());
        assert!((ts.pop_initial[0] - 1.0).abs() < 1e-15);
    }
}
