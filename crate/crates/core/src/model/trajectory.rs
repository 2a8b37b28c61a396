use std::f64::consts::PI;

use super::{ModelError, Result};

/// Offset of the shaped-velocity start from its fixed point at `-4 w0`, and of
/// the stop point from `w0`, in units of `w0`.
///
/// The velocity profile vanishes at both ends, so a start exactly at `-4 w0`
/// never moves and `w0` is only reached asymptotically.
pub const ENTRY_OFFSET: f64 = 1e-3;
/// Lower end of the shaped-velocity domain, in units of `w0`.
pub const SHAPED_START: f64 = -4.0;
/// Upper end of the shaped-velocity domain, in units of `w0`.
pub const SHAPED_STOP: f64 = 1.0;

const DOMAIN_SLACK: f64 = 1e-12;

/// Shaped velocity `v_max sin^2(pi (x1 + 4 w0) / (5 w0))` with `w0 = 1`.
pub fn velocity_at(x1: f64, v_max: f64) -> Result<f64> {
    shaped_velocity(x1, v_max, 1.0)
}

fn shaped_velocity(x1: f64, v_max: f64, waist: f64) -> Result<f64> {
    let lo = SHAPED_START * waist;
    let hi = SHAPED_STOP * waist;
    let slack = DOMAIN_SLACK * waist;
    if !x1.is_finite() || x1 < lo - slack || x1 > hi + slack {
        return Err(ModelError::OutOfDomain(x1 / waist));
    }
    let s = (PI * (x1 - lo) / ((SHAPED_STOP - SHAPED_START) * waist)).sin();
    Ok(v_max * s * s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MotionLaw {
    /// All atoms move with the same constant velocity.
    Constant { velocity: f64 },
    /// All atoms move with the velocity the shaped profile assigns to the
    /// position of atom 1.
    Shaped { v_max: f64 },
}

/// Prescribed motion of all atoms along the cavity's transverse axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    initial: Vec<f64>,
    law: MotionLaw,
    waist: f64,
    stop: Option<f64>,
}

impl Trajectory {
    pub fn constant(initial: Vec<f64>, velocity: f64) -> Result<Self> {
        if initial.is_empty() || initial.iter().any(|x| !x.is_finite()) || !velocity.is_finite() {
            return Err(ModelError::Invalid("constant trajectory needs finite positions and velocity".into()));
        }
        Ok(Self { initial, law: MotionLaw::Constant { velocity }, waist: 1.0, stop: None })
    }

    /// Shaped motion starting at `x1(0) = (-4 + ENTRY_OFFSET) w0` and stopping
    /// at `x1 = (1 - ENTRY_OFFSET) w0`. `offsets[i]` is `x_i - x1`
    /// (so `offsets[0]` must be 0).
    pub fn shaped(v_max: f64, offsets: &[f64], waist: f64) -> Result<Self> {
        if !(v_max > 0.0 && v_max.is_finite()) {
            return Err(ModelError::Invalid(format!("v_max must be positive, got {v_max}")));
        }
        if offsets.first() != Some(&0.0) || offsets.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::Invalid("shaped offsets must start with 0 and be finite".into()));
        }
        if !(waist > 0.0) {
            return Err(ModelError::Invalid("waist must be positive".into()));
        }
        let x1 = (SHAPED_START + ENTRY_OFFSET) * waist;
        Ok(Self {
            initial: offsets.iter().map(|d| x1 + d).collect(),
            law: MotionLaw::Shaped { v_max },
            waist,
            stop: Some((SHAPED_STOP - ENTRY_OFFSET) * waist),
        })
    }

    /// Clamp all positions once atom 1 reaches `x_stop`.
    pub fn with_stop(mut self, x_stop: Option<f64>) -> Self {
        self.stop = x_stop;
        self
    }

    pub fn num_atoms(&self) -> usize {
        self.initial.len()
    }

    pub fn law(&self) -> MotionLaw {
        self.law
    }

    pub fn initial_positions(&self) -> &[f64] {
        &self.initial
    }

    pub fn stop_position(&self) -> Option<f64> {
        self.stop
    }

    /// Time at which atom 1 reaches its stop position, if it ever does.
    pub fn stop_time(&self) -> Option<f64> {
        let stop = self.stop?;
        let x0 = self.initial[0];
        match self.law {
            MotionLaw::Constant { velocity } => {
                let t = (stop - x0) / velocity;
                (t.is_finite() && t >= 0.0).then_some(t)
            }
            MotionLaw::Shaped { v_max } => {
                let k = self.shaped_wavenumber();
                let lo = SHAPED_START * self.waist;
                if stop <= x0 || stop >= SHAPED_STOP * self.waist {
                    return None;
                }
                Some((cot(k * (x0 - lo)) - cot(k * (stop - lo))) / (k * v_max))
            }
        }
    }

    fn shaped_wavenumber(&self) -> f64 {
        PI / ((SHAPED_STOP - SHAPED_START) * self.waist)
    }

    /// Position of atom 1 with no stop applied.
    fn free_lead(&self, t: f64) -> f64 {
        let x0 = self.initial[0];
        match self.law {
            MotionLaw::Constant { velocity } => x0 + velocity * t,
            MotionLaw::Shaped { v_max } => {
                // dx/dt = v sin^2(k u) integrates to cot(k u) = cot(k u0) - k v t
                let k = self.shaped_wavenumber();
                let lo = SHAPED_START * self.waist;
                let c = cot(k * (x0 - lo)) - k * v_max * t;
                lo + 1.0_f64.atan2(c) / k
            }
        }
    }

    fn clamped_time(&self, t: f64) -> f64 {
        match self.stop_time() {
            Some(ts) if t > ts => ts,
            _ => t,
        }
    }

    /// Positions of all atoms at `t >= 0`.
    pub fn positions_at(&self, t: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.initial.len()];
        self.positions_into(t, &mut x);
        x
    }

    /// Allocation-free [`Trajectory::positions_at`]; `out` must hold one
    /// entry per atom.
    pub fn positions_into(&self, t: f64, out: &mut [f64]) {
        let t = t.max(0.0);
        let stopped = self.stop_time().is_some_and(|ts| t >= ts);
        match self.law {
            MotionLaw::Constant { velocity } => {
                let t = self.clamped_time(t);
                for (o, x) in out.iter_mut().zip(&self.initial) {
                    *o = x + velocity * t;
                }
            }
            MotionLaw::Shaped { .. } => {
                let lead = if stopped { self.stop.unwrap_or(f64::NAN) } else { self.free_lead(t) };
                for (o, x) in out.iter_mut().zip(&self.initial) {
                    *o = lead + (x - self.initial[0]);
                }
            }
        }
    }

    /// Velocities of all atoms at `t >= 0`; zero after the stop.
    pub fn velocities_at(&self, t: f64) -> Vec<f64> {
        if let Some(ts) = self.stop_time() {
            if t >= ts {
                return vec![0.0; self.initial.len()];
            }
        }
        let v = match self.law {
            MotionLaw::Constant { velocity } => velocity,
            MotionLaw::Shaped { v_max } => {
                shaped_velocity(self.free_lead(t.max(0.0)), v_max, self.waist).unwrap_or(0.0)
            }
        };
        vec![v; self.initial.len()]
    }
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}
