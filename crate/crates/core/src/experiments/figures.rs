use std::str::FromStr;

use super::{run, sweep, ExperimentError, Result, RunResult, ScenarioSpec, SweepParameter, SweepRow, SweepSpec};
use crate::analysis::dark_state_in;
use crate::dynamics::IntegratorSettings;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureName {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl FromStr for FigureName {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(FigureName::Fig3),
            "fig4" => Ok(FigureName::Fig4),
            "fig5" => Ok(FigureName::Fig5),
            "fig6" => Ok(FigureName::Fig6),
            "fig7" => Ok(FigureName::Fig7),
            other => Err(ExperimentError::Invalid(format!("unknown figure '{other}' (expected fig3..fig7)"))),
        }
    }
}

/// Peak speeds of the velocity scan.
pub const FIG4_V_MAX: [f64; 7] = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
pub const FIG4_KAPPA: [f64; 4] = [0.0, 0.01, 0.05, 0.1];
pub const FIG5_V_MAX: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const FIG5_KAPPA: [f64; 8] = [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0];
pub const FIG6_GAMMA: [f64; 6] = [0.0, 0.02, 0.04, 0.06, 0.08, 0.1];
/// `(panel, v, Δ, κ)`
pub const FIG6_PANELS: [(&str, f64, f64, f64); 4] =
    [("a", 0.002, 20.0, 0.025), ("b", 0.002, 20.0, 0.05), ("c", 0.005, 10.0, 0.05), ("d", 0.005, 10.0, 0.1)];

#[derive(Clone, Debug)]
pub enum CurveData {
    Series { columns: Vec<String>, rows: Vec<Vec<f64>> },
    Sweep(Vec<SweepRow>),
}

#[derive(Clone, Debug)]
pub struct Curve {
    /// File stem, e.g. `fig4_kappa0.05`.
    pub stem: String,
    pub data: CurveData,
}

fn series(result: &RunResult, extra: Vec<(String, Vec<f64>)>) -> Result<CurveData> {
    let ts = result.time_series()?;
    let n = ts.positions.len();
    let mut columns = vec!["t".to_string()];
    columns.extend((1..=n).map(|i| format!("x{i}")));
    columns.extend(["norm_sq", "pop_target", "pop_initial", "pop_cavity_photon"].map(String::from));
    columns.extend(extra.iter().map(|(name, _)| name.clone()));
    let rows = (0..ts.t.len())
        .map(|k| {
            let mut row = vec![ts.t[k]];
            row.extend(ts.positions.iter().map(|x| x[k]));
            row.extend([ts.norm_sq[k], ts.pop_target[k], ts.pop_initial[k], ts.pop_cavity_photon[k]]);
            row.extend(extra.iter().map(|(_, v)| v[k]));
            row
        })
        .collect();
    Ok(CurveData::Series { columns, rows })
}

fn fig3(settings: IntegratorSettings) -> Result<Vec<Curve>> {
    // the crossing itself lasts only a few time units
    let settings = IntegratorSettings { stride: settings.stride.min(2), ..settings };
    [0.0, 0.2]
        .iter()
        .map(|&kappa| {
            let r = run(&ScenarioSpec::two_atom_direct(5.0, kappa, settings)?)?;
            let cfg = &r.spec().config;
            let basis = r.initial.basis().clone();
            // (g2|12;0> + g1|21;0>)/R
            let bright = r.population_series(|t| {
                let g = cfg.couplings_at(t);
                Ok(dark_state_in(g[1], -g[0], &basis)?)
            })?;
            Ok(Curve { stem: format!("fig3_kappa{kappa}"), data: series(&r, vec![("pop_bright".into(), bright)])? })
        })
        .collect()
}

fn sweep_curve(stem: String, template: ScenarioSpec, parameter: SweepParameter, values: &[f64]) -> Result<Curve> {
    let rows = sweep(&SweepSpec { template, parameter, values: values.to_vec() })?;
    Ok(Curve { stem, data: CurveData::Sweep(rows) })
}

fn fig7(settings: IntegratorSettings) -> Result<Vec<Curve>> {
    let r = run(&ScenarioSpec::three_atom(0.002, 20.0, 0.02, 0.05, settings)?)?;
    let ts = r.time_series()?;
    let extra = vec![("g1".to_string(), ts.couplings[0].clone()), ("g2".to_string(), ts.couplings[1].clone()), ("g3".to_string(), ts.couplings[2].clone())];
    Ok(vec![Curve { stem: "fig7_timeseries".into(), data: series(&r, extra)? }])
}

/// Runs the preset behind a figure and returns one table per curve.
pub fn figure(name: FigureName, settings: IntegratorSettings) -> Result<Vec<Curve>> {
    match name {
        FigureName::Fig3 => fig3(settings),
        FigureName::Fig4 => FIG4_KAPPA
            .iter()
            .map(|&k| {
                let t = ScenarioSpec::two_atom_direct(FIG4_V_MAX[0], k, settings)?;
                sweep_curve(format!("fig4_kappa{k}"), t, SweepParameter::VMax, &FIG4_V_MAX)
            })
            .collect(),
        FigureName::Fig5 => FIG5_V_MAX
            .iter()
            .map(|&v| {
                let t = ScenarioSpec::two_atom_direct(v, 0.0, settings)?;
                sweep_curve(format!("fig5_vmax{v}"), t, SweepParameter::Kappa, &FIG5_KAPPA)
            })
            .collect(),
        FigureName::Fig6 => FIG6_PANELS
            .iter()
            .map(|&(panel, v, delta, kappa)| {
                let t = ScenarioSpec::two_atom_lambda(v, delta, kappa, 0.0, settings)?;
                sweep_curve(format!("fig6_{panel}"), t, SweepParameter::Gamma, &FIG6_GAMMA)
            })
            .collect(),
        FigureName::Fig7 => fig7(settings),
    }
}
