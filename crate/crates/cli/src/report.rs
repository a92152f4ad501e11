//! JSON reports and the gnuplot script written next to a fit.

use serde::Serialize;
use wavenorm_core::{FitModel, RateFit, Regime};

use crate::model::Model;

#[derive(Debug, Serialize)]
pub struct RegimeReport {
    pub model: String,
    pub n: u32,
    pub sigma: f64,
    pub s: f64,
    pub data_order: f64,
    pub time_weight_decay: f64,
    pub tag: &'static str,
    pub rate: Option<f64>,
    pub inequality: String,
    pub effective_s: f64,
}

impl RegimeReport {
    pub fn new(model: &Model) -> Self {
        let spec = model.spec();
        let Regime {
            tag,
            inequality,
            effective_s,
        } = model.prediction.regime.clone();
        RegimeReport {
            model: model.name.clone(),
            n: spec.n,
            sigma: spec.sigma,
            s: spec.s,
            data_order: model.prediction.data_order,
            time_weight_decay: model.prediction.decay,
            tag: tag.name(),
            rate: tag.rate(),
            inequality,
            effective_s,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitModelReport {
    pub name: &'static str,
    /// Exponent `a` of `C t^a`; absent for the other models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    pub c: f64,
    /// Intercept of the `M² ≈ C² ln t + offset` regression.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
}

impl From<FitModel> for FitModelReport {
    fn from(m: FitModel) -> Self {
        match m {
            FitModel::PowerLaw { a, c } => FitModelReport {
                name: m.name(),
                exponent: Some(a),
                c,
                offset: None,
            },
            FitModel::SqrtLog { c, offset } => FitModelReport {
                name: m.name(),
                exponent: None,
                c,
                offset: Some(offset),
            },
            FitModel::Constant { c } => FitModelReport {
                name: m.name(),
                exponent: None,
                c,
                offset: None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Candidate {
    #[serde(flatten)]
    pub model: FitModelReport,
    /// `null` when the candidate could not be fitted.
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub selected: FitModelReport,
    pub residual: f64,
    pub window: (f64, f64),
    pub sample_count: usize,
    pub candidates: Vec<Candidate>,
}

impl From<&RateFit> for FitReport {
    fn from(fit: &RateFit) -> Self {
        FitReport {
            selected: fit.model.into(),
            residual: fit.residual,
            window: fit.window,
            sample_count: fit.sample_count,
            candidates: fit
                .candidates
                .iter()
                .map(|&(m, r)| Candidate {
                    model: m.into(),
                    residual: r.is_finite().then_some(r),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn gnuplot_expr(model: &FitModel) -> String {
    match *model {
        FitModel::PowerLaw { a, c } => format!("{c:.17e} * x**({a:.17e})"),
        FitModel::SqrtLog { c, offset } => {
            format!("sqrt(max(0, {c:.17e}**2 * log(x) + ({offset:.17e})))")
        }
        FitModel::Constant { c } => format!("{c:.17e}"),
    }
}

/// A gnuplot script plotting the sweep data, the fitted law and, when the
/// CSV has it, the envelope column.
pub fn gnuplot_script(fit: &RateFit, csv_name: &str, with_envelope: bool, title: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set logscale xy\n");
    s.push_str("set key left top\n");
    s.push_str("set xlabel 't'\nset ylabel 'M(t)'\n");
    s.push_str(&format!("set title '{}'\n", title.replace('\'', "")));
    s.push_str("max(a, b) = a > b ? a : b\n");
    s.push_str(&format!("fit_law(x) = {}\n", gnuplot_expr(&fit.model)));
    s.push_str(&format!(
        "set arrow from {w0:e}, graph 0 to {w0:e}, graph 1 nohead dt 2\n\
         set arrow from {w1:e}, graph 0 to {w1:e}, graph 1 nohead dt 2\n",
        w0 = fit.window.0,
        w1 = fit.window.1
    ));
    s.push_str(&format!(
        "plot '{csv_name}' using 1:2 skip 1 with points pt 7 title 'M(t)', \\\n     fit_law(x) with lines title '{} fit'",
        fit.model.name()
    ));
    if with_envelope {
        s.push_str(&format!(
            ", \\\n     '{csv_name}' using 1:3 skip 1 with lines dt 3 title 'envelope D(t)'"
        ));
    }
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use wavenorm_core::fit_growth;

    #[test]
    fn fit_report_shape() {
        let samples: Vec<(f64, f64)> = wavenorm_core::asymptotics::log_spaced(1e2, 1e6, 25)
            .into_iter()
            .map(|t| (t, 2.0 * t.sqrt()))
            .collect();
        let fit = fit_growth(&samples, (1e2, 1e6)).unwrap();
        let json = to_json(&FitReport::from(&fit));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["selected"]["name"], "PowerLaw");
        assert!((v["selected"]["exponent"].as_f64().unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(v["candidates"].as_array().unwrap().len(), 3);
        let script = gnuplot_script(&fit, "sweep.csv", true, "demo");
        assert!(script.contains("using 1:3"));
        assert!(script.contains("fit_law(x) = "));
    }
}
