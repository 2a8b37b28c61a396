use rayon::prelude::*;

use super::{run, ExperimentError, Result, RunSummary, ScenarioSpec};
use crate::model::{MotionLaw, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    /// Peak speed of shaped motion.
    VMax,
    /// Speed of constant motion.
    V,
    Kappa,
    Gamma,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::VMax => "v_max",
            SweepParameter::V => "v",
            SweepParameter::Kappa => "kappa",
            SweepParameter::Gamma => "gamma",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "v_max" => Some(SweepParameter::VMax),
            "v" => Some(SweepParameter::V),
            "kappa" => Some(SweepParameter::Kappa),
            "gamma" => Some(SweepParameter::Gamma),
            _ => None,
        }
    }

    /// Copy of `template` with this parameter set to `value`.
    pub fn apply(self, template: &ScenarioSpec, value: f64) -> Result<ScenarioSpec> {
        let mut spec = template.clone();
        let c = &mut spec.config;
        match self {
            SweepParameter::Kappa => c.kappa = value,
            SweepParameter::Gamma => c.gamma = value,
            SweepParameter::VMax | SweepParameter::V => {
                let tr = &c.trajectory;
                let x0 = tr.initial_positions().to_vec();
                c.trajectory = match (self, tr.law()) {
                    (SweepParameter::VMax, MotionLaw::Shaped { .. }) => {
                        let offsets: Vec<f64> = x0.iter().map(|x| x - x0[0]).collect();
                        Trajectory::shaped(value, &offsets, 1.0)?.with_stop(tr.stop_position())
                    }
                    (SweepParameter::V, MotionLaw::Constant { .. }) => {
                        Trajectory::constant(x0, value)?.with_stop(tr.stop_position())
                    }
                    _ => {
                        return Err(ExperimentError::Invalid(format!(
                            "cannot sweep {} on this motion law",
                            self.name()
                        )))
                    }
                };
            }
        }
        c.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub template: ScenarioSpec,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub parameter: SweepParameter,
    pub value: f64,
    /// Failures are kept per row as their message.
    pub outcome: std::result::Result<RunSummary, String>,
}

impl SweepRow {
    /// Summary with NaN outcomes and `converged = false` for failed rows.
    pub fn summary(&self) -> RunSummary {
        match &self.outcome {
            Ok(s) => *s,
            Err(_) => RunSummary { fidelity: f64::NAN, p0: f64::NAN, duration: f64::NAN, dt_used: f64::NAN, converged: false },
        }
    }
}

/// One run per grid value, in parallel, returned in grid order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.is_empty() {
        return Err(ExperimentError::Invalid("sweep grid is empty".into()));
    }
    if let Some(v) = spec.values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(ExperimentError::Invalid(format!("sweep values must be >= 0, got {v}")));
    }
    Ok(spec
        .values
        .par_iter()
        .map(|&value| {
            let outcome = spec
                .parameter
                .apply(&spec.template, value)
                .and_then(|s| run(&s))
                .map(|r| r.summary())
                .map_err(|e| e.to_string());
            SweepRow { parameter: spec.parameter, value, outcome }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::IntegratorSettings;

    #[test]
    fn single_point_equals_direct_run() {
        let s = IntegratorSettings::default();
        let template = ScenarioSpec::two_atom_direct(3.0, 0.0, s).unwrap();
        let rows = sweep(&SweepSpec { template, parameter: SweepParameter::Kappa, values: vec![0.2] }).unwrap();
        let direct = crate::experiments::run_two_atom_direct(3.0, 0.2, s).unwrap();
        assert_eq!(rows[0].outcome.as_ref().unwrap(), &direct.summary());
    }

    #[test]
    fn rows_keep_grid_order_and_errors() {
        let s = IntegratorSettings::default();
        let template = ScenarioSpec::two_atom_direct(3.0, 0.1, s).unwrap();
        let rows = sweep(&SweepSpec { template: template.clone(), parameter: SweepParameter::VMax, values: vec![4.0, 0.0, 3.0] }).unwrap();
        assert_eq!(rows.iter().map(|r| r.value).collect::<Vec<_>>(), vec![4.0, 0.0, 3.0]);
        assert!(rows[1].outcome.is_err());
        assert!(!rows[1].summary().converged);
        assert!(rows[0].outcome.is_ok() && rows[2].outcome.is_ok());
        assert!(SweepParameter::V.apply(&template, 1.0).is_err());
        assert!(sweep(&SweepSpec { template: template.clone(), parameter: SweepParameter::Kappa, values: vec![] }).is_err());
        assert!(sweep(&SweepSpec { template, parameter: SweepParameter::Kappa, values: vec![-1.0] }).is_err());
    }
}
