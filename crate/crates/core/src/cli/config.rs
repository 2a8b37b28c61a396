//! Scenario configuration files.
//!
//! ```toml
//! # Units: g_max = 1 (rates), w0 = 1 (lengths), times in 1/g_max.
//! [scenario]
//! kind = "three-atom"          # two-atom-direct | two-atom-lambda | three-atom
//! sweep = "gamma"              # optional: v_max | v | kappa | gamma
//! values = [0.0, 0.05, 0.1]    # grid for the sweep
//!
//! [physics]
//! kappa = 0.02                 # cavity decay rate
//! gamma = 0.05                 # spontaneous decay rate of level 3
//! delta = 20.0                 # detuning of level 3
//! scheme = "lambda"            # direct | lambda | effective
//!
//! [motion]
//! velocity = 0.002             # v (constant) or v_max (shaped), in w0 g
//! positions = [-4.0, -4.0, -5.0]   # optional start positions
//! separation = 1.0             # optional, two-atom spacing
//!
//! [laser]
//! schedule = "symmetric-point" # never | symmetric-point | at-time
//! off_time = 450.0             # with `at-time`
//!
//! [integrator]
//! dt = 0.05
//! tolerance = 1e-8
//! stride = 100
//! max_halvings = 7
//!
//! [output]
//! dir = "out"
//! summary = "summary.csv"
//! timeseries = "timeseries.csv"   # optional
//! stride = 10                     # keep every 10th stored snapshot
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dynamics::IntegratorSettings;
use crate::experiments::{ScenarioKind, ScenarioSpec, SweepParameter, SweepSpec};
use crate::model::{LaserSchedule, MotionLaw, Scheme, Trajectory};

use super::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    #[serde(default)]
    pub motion: MotionSection,
    #[serde(default)]
    pub laser: LaserSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum KindName {
    #[default]
    TwoAtomDirect,
    TwoAtomLambda,
    ThreeAtom,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(default)]
    pub kind: KindName,
    pub sweep: Option<String>,
    #[serde(default)]
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Direct,
    Lambda,
    Effective,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub scheme: Option<SchemeName>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MotionSection {
    pub velocity: Option<f64>,
    pub positions: Option<Vec<f64>>,
    pub separation: Option<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleName {
    Never,
    SymmetricPoint,
    AtTime,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LaserSection {
    pub schedule: Option<ScheduleName>,
    pub off_time: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: Option<f64>,
    pub tolerance: Option<f64>,
    pub stride: Option<usize>,
    pub max_halvings: Option<u32>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub timeseries: Option<PathBuf>,
    pub stride: Option<usize>,
}

/// What a config asks for, ready to execute.
#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Single(ScenarioSpec),
    Sweep(SweepSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputPlan {
    pub summary: PathBuf,
    pub timeseries: Option<PathBuf>,
    pub stride: usize,
}

/// Defaults of each scenario, used for keys the file leaves out.
fn defaults(kind: KindName) -> (f64, f64, f64, f64) {
    // (velocity, kappa, gamma, delta)
    match kind {
        KindName::TwoAtomDirect => (1.0, 0.0, 0.0, 0.0),
        KindName::TwoAtomLambda => (0.002, 0.025, 0.0, 20.0),
        KindName::ThreeAtom => (0.002, 0.02, 0.05, 20.0),
    }
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// Library errors raised while building from a document are schema errors.
fn invalid(e: impl std::fmt::Display) -> CliError {
    schema(e.to_string())
}

fn non_negative(name: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(x) if !(x >= 0.0 && x.is_finite()) => Err(schema(format!("{name} must be a non-negative number, got {x}"))),
        _ => Ok(()),
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = toml::from_str(text).map_err(|e| schema(e.to_string()))?;
        doc.check()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn check(&self) -> Result<(), CliError> {
        let p = &self.physics;
        non_negative("physics.kappa", p.kappa)?;
        non_negative("physics.gamma", p.gamma)?;
        non_negative("physics.delta", p.delta)?;
        non_negative("motion.velocity", self.motion.velocity)?;
        non_negative("motion.separation", self.motion.separation)?;
        non_negative("laser.off_time", self.laser.off_time)?;
        if let Some(v) = self.scenario.values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(schema(format!("scenario.values must be non-negative, got {v}")));
        }
        if self.scenario.sweep.is_some() && self.scenario.values.is_empty() {
            return Err(schema("scenario.sweep needs a non-empty scenario.values"));
        }
        if self.scenario.sweep.is_none() && !self.scenario.values.is_empty() {
            return Err(schema("scenario.values given without scenario.sweep"));
        }
        if let Some(name) = &self.scenario.sweep {
            if SweepParameter::parse(name).is_none() {
                return Err(schema(format!("unknown sweep parameter '{name}' (v_max, v, kappa, gamma)")));
            }
        }
        if self.laser.schedule == Some(ScheduleName::AtTime) && self.laser.off_time.is_none() {
            return Err(schema("laser.schedule = \"at-time\" needs laser.off_time"));
        }
        for (name, v) in [("integrator.dt", self.integrator.dt), ("integrator.tolerance", self.integrator.tolerance)] {
            if let Some(x) = v.filter(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(schema(format!("{name} must be positive, got {x}")));
            }
        }
        if self.output.stride == Some(0) || self.integrator.stride == Some(0) {
            return Err(schema("stride must be at least 1"));
        }
        Ok(())
    }

    /// Integrator settings from the file, with `dt_override` taking
    /// precedence over `[integrator] dt`.
    pub fn settings(&self, dt_override: Option<f64>) -> IntegratorSettings {
        let d = IntegratorSettings::default();
        let i = &self.integrator;
        IntegratorSettings {
            dt: dt_override.or(i.dt).unwrap_or(d.dt),
            tolerance: i.tolerance.unwrap_or(d.tolerance),
            stride: i.stride.unwrap_or(d.stride),
            max_halvings: i.max_halvings.unwrap_or(d.max_halvings),
        }
    }

    pub fn scenario(&self, dt_override: Option<f64>) -> Result<ScenarioSpec, CliError> {
        let kind = self.scenario.kind;
        let (v0, k0, g0, d0) = defaults(kind);
        let p = &self.physics;
        let v = self.motion.velocity.unwrap_or(v0);
        let (kappa, gamma, delta) = (p.kappa.unwrap_or(k0), p.gamma.unwrap_or(g0), p.delta.unwrap_or(d0));
        let settings = self.settings(dt_override);
        let mut spec = match kind {
            KindName::TwoAtomDirect => {
                if p.gamma.is_some_and(|g| g != 0.0) || p.delta.is_some_and(|d| d != 0.0) {
                    return Err(schema("two-atom-direct has no gamma or delta"));
                }
                ScenarioSpec::two_atom_direct(v, kappa, settings).map_err(invalid)?
            }
            KindName::TwoAtomLambda => ScenarioSpec::two_atom_lambda(v, delta, kappa, gamma, settings).map_err(invalid)?,
            KindName::ThreeAtom => ScenarioSpec::three_atom(v, delta, kappa, gamma, settings).map_err(invalid)?,
        };
        self.apply_motion(&mut spec)?;
        if let Some(s) = p.scheme {
            spec = apply_scheme(spec, s)?;
        }
        if let Some(s) = self.laser.schedule {
            if !spec.config.scheme.uses_laser() && s != ScheduleName::Never {
                return Err(schema("laser schedule given for a scheme without laser"));
            }
            spec.config.schedule = match s {
                ScheduleName::Never => LaserSchedule::Never,
                ScheduleName::SymmetricPoint => LaserSchedule::AtSymmetricPoint,
                ScheduleName::AtTime => LaserSchedule::AtTime(self.laser.off_time.unwrap_or(f64::NAN)),
            };
        }
        spec.config.validate().map_err(invalid)?;
        Ok(spec)
    }

    fn apply_motion(&self, spec: &mut ScenarioSpec) -> Result<(), CliError> {
        let m = &self.motion;
        if m.positions.is_none() && m.separation.is_none() {
            return Ok(());
        }
        let tr = &spec.config.trajectory;
        let mut x = m.positions.clone().unwrap_or_else(|| tr.initial_positions().to_vec());
        if x.len() != spec.config.num_atoms {
            return Err(schema(format!("motion.positions needs {} entries, got {}", spec.config.num_atoms, x.len())));
        }
        if let Some(s) = m.separation {
            if x.len() != 2 {
                return Err(schema("motion.separation only applies to two-atom scenarios"));
            }
            x[1] = x[0] - s;
        }
        spec.config.trajectory = match tr.law() {
            MotionLaw::Constant { velocity } => Trajectory::constant(x, velocity).map_err(invalid)?,
            MotionLaw::Shaped { v_max } => {
                let offsets: Vec<f64> = x.iter().map(|xi| xi - x[0]).collect();
                if x[0] != 0.0 {
                    return Err(schema("shaped motion starts the leading atom at the centre; use offsets with x1 = 0"));
                }
                Trajectory::shaped(v_max, &offsets, 1.0).map_err(invalid)?
            }
        }
        .with_stop(tr.stop_position());
        Ok(())
    }

    pub fn job(&self, dt_override: Option<f64>) -> Result<Job, CliError> {
        let spec = self.scenario(dt_override)?;
        Ok(match &self.scenario.sweep {
            None => Job::Single(spec),
            Some(name) => Job::Sweep(SweepSpec {
                template: spec,
                parameter: SweepParameter::parse(name).expect("checked on load"),
                values: self.scenario.values.clone(),
            }),
        })
    }

    /// Output files, relative to `[output] dir`.
    pub fn output(&self) -> OutputPlan {
        let o = &self.output;
        let dir = o.dir.clone().unwrap_or_else(|| PathBuf::from("."));
        OutputPlan {
            summary: dir.join(o.summary.clone().unwrap_or_else(|| PathBuf::from("summary.csv"))),
            timeseries: o.timeseries.as_ref().map(|t| dir.join(t)),
            stride: o.stride.unwrap_or(1),
        }
    }
}

fn apply_scheme(spec: ScenarioSpec, s: SchemeName) -> Result<ScenarioSpec, CliError> {
    let direct = spec.kind == ScenarioKind::TwoAtomDirect;
    match (s, direct) {
        (SchemeName::Direct, true) => Ok(spec),
        (SchemeName::Lambda, false) => Ok(spec.with_scheme(Scheme::Lambda)),
        (SchemeName::Effective, false) => Ok(spec.with_scheme(Scheme::EffectiveTwoLevel)),
        _ => Err(schema(format!("scheme {s:?} does not fit scenario {}", spec.kind.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_uses_scenario_defaults() {
        let doc = ConfigDocument::parse("[scenario]\nkind = \"three-atom\"\n").unwrap();
        let spec = doc.scenario(None).unwrap();
        assert_eq!(spec, ScenarioSpec::three_atom(0.002, 20.0, 0.02, 0.05, IntegratorSettings::default()).unwrap());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(ConfigDocument::parse("[scenario]\nkind = \"three-atom\"\ncolour = 1\n"), Err(CliError::Schema(_))));
        assert!(matches!(ConfigDocument::parse("[scenario]\n[physics]\nkapa = 0.1\n"), Err(CliError::Schema(_))));
    }

    #[test]
    fn negative_rates_are_schema_errors() {
        let err = ConfigDocument::parse("[scenario]\n[physics]\nkappa = -1.0\n").unwrap_err();
        assert!(matches!(err, CliError::Schema(ref m) if m.contains("kappa")));
    }

    #[test]
    fn overrides_and_sweeps() {
        let text = r#"
            [scenario]
            kind = "two-atom-lambda"
            sweep = "gamma"
            values = [0.0, 0.1]
            [physics]
            kappa = 0.05
            scheme = "effective"
            [motion]
            velocity = 0.005
            separation = 2.0
            [integrator]
            dt = 0.01
            max_halvings = 0
        "#;
        let doc = ConfigDocument::parse(text).unwrap();
        match doc.job(Some(0.02)).unwrap() {
            Job::Sweep(s) => {
                assert_eq!(s.parameter, SweepParameter::Gamma);
                assert_eq!(s.values, vec![0.0, 0.1]);
                let c = &s.template.config;
                assert_eq!(c.scheme, Scheme::EffectiveTwoLevel);
                assert_eq!(c.kappa, 0.05);
                assert_eq!(c.trajectory.initial_positions(), &[-4.0, -6.0]);
                assert_eq!(s.template.settings.dt, 0.02);
                assert_eq!(s.template.settings.max_halvings, 0);
            }
            other => panic!("expected sweep, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_documents() {
        for text in [
            "[scenario]\nsweep = \"gamma\"\n",
            "[scenario]\nvalues = [1.0]\n",
            "[scenario]\nsweep = \"omega\"\nvalues = [1.0]\n",
            "[scenario]\nkind = \"two-atom-lambda\"\n[laser]\nschedule = \"at-time\"\n",
        ] {
            assert!(ConfigDocument::parse(text).is_err(), "{text}");
        }
        let doc = ConfigDocument::parse("[scenario]\n[physics]\nscheme = \"lambda\"\n").unwrap();
        assert!(doc.scenario(None).is_err());
        let doc = ConfigDocument::parse("[scenario]\nkind = \"three-atom\"\n[motion]\npositions = [0.0]\n").unwrap();
        assert!(doc.scenario(None).is_err());
    }

    #[test]
    fn output_paths_resolve_against_dir() {
        let doc = ConfigDocument::parse("[scenario]\n[output]\ndir = \"res\"\ntimeseries = \"ts.csv\"\n").unwrap();
        let o = doc.output();
        assert_eq!(o.summary, PathBuf::from("res/summary.csv"));
        assert_eq!(o.timeseries, Some(PathBuf::from("res/ts.csv")));
        assert_eq!(o.stride, 1);
    }
}
