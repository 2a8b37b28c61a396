//! CSV tables written by the command-line tool.

use std::io::Write;
use std::path::Path;

use crate::experiments::{Curve, CurveData, RunSummary, SweepRow, TimeSeries};

use super::CliError;

/// Header of result tables.
pub const RESULT_COLUMNS: [&str; 7] = ["param_name", "param_value", "fidelity", "p0", "duration_T", "dt_used", "converged"];

/// One summary line; single runs leave the parameter fields empty.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub param_name: String,
    pub param_value: Option<f64>,
    pub summary: RunSummary,
}

impl ResultRow {
    pub fn single(summary: RunSummary) -> Self {
        Self { param_name: String::new(), param_value: None, summary }
    }
}

impl From<&SweepRow> for ResultRow {
    fn from(row: &SweepRow) -> Self {
        Self { param_name: row.parameter.name().to_string(), param_value: Some(row.value), summary: row.summary() }
    }
}

pub fn number(x: f64) -> String {
    format!("{x:.14e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_table<W: Write>(out: W, header: &[String], rows: impl Iterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn to_file(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    write_table(std::io::BufWriter::new(file), header, rows).map_err(|e| io_err(path, e))
}

fn result_record(r: &ResultRow) -> Vec<String> {
    let s = &r.summary;
    vec![
        r.param_name.clone(),
        r.param_value.map(number).unwrap_or_default(),
        number(s.fidelity),
        number(s.p0),
        number(s.duration),
        number(s.dt_used),
        s.converged.to_string(),
    ]
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let header: Vec<String> = RESULT_COLUMNS.iter().map(|c| c.to_string()).collect();
    to_file(path, &header, rows.iter().map(result_record))
}

/// Time series with columns `t, x1..xN, norm_sq, pop_target, pop_initial,
/// pop_cavity_photon`, keeping every `stride`-th row and the last one.
pub fn write_time_series(path: &Path, ts: &TimeSeries, stride: usize) -> Result<(), CliError> {
    let n = ts.positions.len();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend(["norm_sq", "pop_target", "pop_initial", "pop_cavity_photon"].map(String::from));
    let last = ts.t.len().saturating_sub(1);
    let rows = (0..ts.t.len()).filter(|k| k % stride.max(1) == 0 || *k == last).map(|k| {
        let mut r = vec![number(ts.t[k])];
        r.extend(ts.positions.iter().map(|x| number(x[k])));
        r.extend([ts.norm_sq[k], ts.pop_target[k], ts.pop_initial[k], ts.pop_cavity_photon[k]].map(number));
        r
    });
    to_file(path, &header, rows)
}

/// Writes `<dir>/<stem>.csv` and returns its path.
pub fn write_curve(dir: &Path, curve: &Curve) -> Result<std::path::PathBuf, CliError> {
    let path = dir.join(format!("{}.csv", curve.stem));
    match &curve.data {
        CurveData::Series { columns, rows } => {
            to_file(&path, columns, rows.iter().map(|r| r.iter().map(|&x| number(x)).collect()))?
        }
        CurveData::Sweep(rows) => {
            let rows: Vec<ResultRow> = rows.iter().map(ResultRow::from).collect();
            write_results(&path, &rows)?
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(f: f64) -> RunSummary {
        RunSummary { fidelity: f, p0: 0.5, duration: 10.0, dt_used: 0.01, converged: true }
    }

    #[test]
    fn numbers_keep_fifteen_digits() {
        assert_eq!(number(0.1), "1.00000000000000e-1");
        assert_eq!(number(1.0 / 3.0).parse::<f64>().unwrap(), 0.333333333333333);
    }

    #[test]
    fn result_table_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/summary.csv");
        write_results(&path, &[ResultRow::single(summary(0.25))]).unwrap();
        let mut r = csv::Reader::from_path(&path).unwrap();
        assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), RESULT_COLUMNS);
        let rec = r.records().next().unwrap().unwrap();
        assert_eq!(&rec[0], "");
        assert_eq!(rec[2].parse::<f64>().unwrap(), 0.25);
        assert_eq!(&rec[6], "true");
    }

    #[test]
    fn series_stride_keeps_last_row() {
        let ts = TimeSeries {
            t: vec![0.0, 1.0, 2.0, 3.0],
            positions: vec![vec![0.0; 4]],
            couplings: vec![vec![0.0; 4]],
            norm_sq: vec![1.0; 4],
            pop_target: vec![0.0; 4],
            pop_initial: vec![1.0; 4],
            pop_cavity_photon: vec![0.0; 4],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        write_time_series(&path, &ts, 2).unwrap();
        let mut r = csv::Reader::from_path(&path).unwrap();
        assert_eq!(r.headers().unwrap().len(), 6);
        let t: Vec<f64> = r.records().map(|x| x.unwrap()[0].parse().unwrap()).collect();
        assert_eq!(t, vec![0.0, 2.0, 3.0]);
    }
}
