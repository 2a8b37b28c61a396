use super::{ModelError, Result};

/// Laser waist in units of the cavity waist.
pub const LASER_WAIST_RATIO: f64 = 5.0;

/// Gaussian transverse profile of the cavity mode, `g(x) = g_max exp(-(x/w0)^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingProfile {
    pub g_max: f64,
    pub waist: f64,
}

impl Default for CouplingProfile {
    fn default() -> Self {
        Self { g_max: 1.0, waist: 1.0 }
    }
}

impl CouplingProfile {
    pub fn new(g_max: f64, waist: f64) -> Result<Self> {
        if !(g_max > 0.0 && g_max.is_finite()) || !(waist > 0.0 && waist.is_finite()) {
            return Err(ModelError::Invalid(format!("coupling profile g_max={g_max}, waist={waist}")));
        }
        Ok(Self { g_max, waist })
    }

    pub fn at(&self, x: f64) -> f64 {
        let u = x / self.waist;
        self.g_max * (-u * u).exp()
    }

    /// `dg/dx`
    pub fn slope(&self, x: f64) -> f64 {
        -2.0 * x / (self.waist * self.waist) * self.at(x)
    }
}

pub fn coupling_at(profile: &CouplingProfile, x: f64) -> f64 {
    profile.at(x)
}

/// Gaussian profile of the classical laser driving the 2-3 transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaserProfile {
    pub omega_max: f64,
    pub waist: f64,
}

impl Default for LaserProfile {
    fn default() -> Self {
        Self { omega_max: 1.0, waist: LASER_WAIST_RATIO }
    }
}

impl LaserProfile {
    pub fn new(omega_max: f64, waist: f64) -> Result<Self> {
        if !(omega_max >= 0.0 && omega_max.is_finite()) || !(waist > 0.0 && waist.is_finite()) {
            return Err(ModelError::Invalid(format!("laser profile omega_max={omega_max}, waist={waist}")));
        }
        Ok(Self { omega_max, waist })
    }

    pub fn at(&self, x: f64) -> f64 {
        let u = x / self.waist;
        self.omega_max * (-u * u).exp()
    }
}

pub fn laser_at(profile: &LaserProfile, x: f64) -> f64 {
    profile.at(x)
}
