//! Time sweeps of `M(t)` and their CSV form.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{Model, Sample};

pub const CSV_HEADER: [&str; 6] = ["t", "M", "D", "ratio", "err", "segments"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub t: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub ratio: f64,
    pub err: f64,
    pub segments: usize,
}

#[derive(Debug)]
pub enum SweepError {
    /// The model is in the finite-time blow-up regime or an evaluation
    /// returned a divergent verdict.
    Blowup { t: Option<f64>, origin_exponent: f64 },
    Core(wavenorm_core::Error),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Blowup { t: Some(t), origin_exponent } => write!(
                f,
                "Divergent at t = {t}: integrand ~ r^{origin_exponent} at the origin"
            ),
            SweepError::Blowup { t: None, origin_exponent } => write!(
                f,
                "Divergent: integrand ~ r^{origin_exponent} at the origin"
            ),
            SweepError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<wavenorm_core::Error> for SweepError {
    fn from(e: wavenorm_core::Error) -> Self {
        match e {
            wavenorm_core::Error::BlowupRegime { origin_exponent } => SweepError::Blowup {
                t: None,
                origin_exponent,
            },
            other => SweepError::Core(other),
        }
    }
}

/// Evaluate the model on every grid point. Points are processed in
/// parallel but each one is computed independently, so the rows do not
/// depend on the thread count.
pub fn run(model: &Model, grid: &[f64], tol: f64) -> Result<Vec<Row>, SweepError> {
    if let wavenorm_core::RegimeTag::FiniteTimeBlowup = model.prediction.regime.tag {
        let exponent = wavenorm_core::origin_exponent(&model.solution, 1.0);
        return Err(SweepError::Blowup {
            t: None,
            origin_exponent: exponent,
        });
    }
    let samples: Vec<wavenorm_core::Result<Sample>> =
        grid.par_iter().map(|&t| model.evaluate(t, tol)).collect();
    let mut rows = Vec::with_capacity(grid.len());
    for sample in samples {
        match sample? {
            Sample::Divergent { t, origin_exponent } => {
                return Err(SweepError::Blowup {
                    t: Some(t),
                    origin_exponent,
                })
            }
            Sample::Finite { t, m, err, segments } => {
                let d = model.envelope(t)?;
                rows.push(Row {
                    t,
                    m,
                    d,
                    ratio: m / d,
                    err,
                    segments,
                });
            }
        }
    }
    Ok(rows)
}

fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            fmt_float(r.t),
            fmt_float(r.m),
            fmt_float(r.d),
            fmt_float(r.ratio),
            fmt_float(r.err),
            r.segments.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// Read `(t, M)` pairs from a sweep CSV. Only the `t` and `M` columns are
/// required, so hand-made files work as fit input too.
pub fn read_samples<R: Read>(input: R) -> Result<Vec<(f64, f64)>, String> {
    #[derive(Deserialize)]
    struct TM {
        t: f64,
        #[serde(rename = "M")]
        m: f64,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for rec in rdr.deserialize::<TM>() {
        let rec = rec.map_err(|e| e.to_string())?;
        out.push((rec.t, rec.m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let rows = vec![Row {
            t: 100.0,
            m: 17.5,
            d: 10.0,
            ratio: 1.75,
            err: 1e-9,
            segments: 42,
        }];
        let text = to_csv_string(&rows);
        assert!(text.starts_with("t,M,D,ratio,err,segments\n"));
        assert!(text.contains("1.000000000000e2,1.750000000000e1"));
        assert_eq!(read_samples(text.as_bytes()).unwrap(), vec![(100.0, 17.5)]);
    }

    #[test]
    fn bad_csv_is_an_error() {
        assert!(read_samples("t,M\n1,abc\n".as_bytes()).is_err());
        assert!(read_samples("x,y\n1,2\n".as_bytes()).is_err());
    }
}
