//! Envelopes, regime classification, growth-law fitting and the two-sided
//! ratio check.
//!
//! Everything here works with the effective regularity `s' = s - m`, where
//! `m` is the small-`r` order of the singular profile. With `m = 0` this is
//! the plain four-branch table for data whose Fourier transform does not
//! vanish at the origin.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::spectral::ModelSpec;

/// Default fit window.
pub const DEFAULT_WINDOW: (f64, f64) = (1e2, 1e6);
/// Default number of log-spaced samples in a sweep.
pub const DEFAULT_SAMPLES: usize = 25;
/// Fewest samples accepted by [`fit_growth`].
pub const MIN_FIT_SAMPLES: usize = 8;
/// Relative residual margin granted to the simpler model.
pub const PREFERENCE_FACTOR: f64 = 1.05;
/// Absolute residual margin granted to the simpler model.
pub const PREFERENCE_FLOOR: f64 = 0.005;

const CRITICAL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeTag {
    FiniteTimeBlowup,
    PolynomialGrowth { rate: f64 },
    LogGrowth,
    /// The logarithmic branch reached only because the data vanish to order `m ≥ 1`.
    CriticalLogGrowth,
    Bounded,
    /// Net algebraic decay `t^{-rate}`; only produced by damped reductions.
    Decay { rate: f64 },
}

impl RegimeTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeTag::FiniteTimeBlowup => "FiniteTimeBlowup",
            RegimeTag::PolynomialGrowth { .. } => "PolynomialGrowth",
            RegimeTag::LogGrowth => "LogGrowth",
            RegimeTag::CriticalLogGrowth => "CriticalLogGrowth",
            RegimeTag::Bounded => "Bounded",
            RegimeTag::Decay { .. } => "Decay",
        }
    }

    /// Growth exponent where one exists (negative for decay).
    pub fn rate(&self) -> Option<f64> {
        match *self {
            RegimeTag::PolynomialGrowth { rate } => Some(rate),
            RegimeTag::Decay { rate } => Some(-rate),
            RegimeTag::Bounded => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    /// The inequality that selected `tag`, with numbers substituted.
    pub inequality: String,
    /// Effective regularity `s - m`.
    pub effective_s: f64,
}

fn is_critical(n: f64, sigma: f64, s_eff: f64) -> bool {
    (n - (2.0 * sigma + 2.0 * s_eff)).abs() <= CRITICAL_EPS * n.max(1.0)
}

/// Classify by a real-valued leading order of the singular profile.
pub fn classify_regime_order(spec: &ModelSpec, order: f64) -> Regime {
    let n = spec.dim();
    let sigma = spec.sigma;
    let s_eff = spec.s - order;
    let two_s = 2.0 * s_eff;
    let upper = 2.0 * sigma + two_s;
    let (tag, inequality) = if n <= two_s {
        (RegimeTag::FiniteTimeBlowup, format!("n <= 2s' ({n} <= {two_s})"))
    } else if is_critical(n, sigma, s_eff) {
        let tag = if order >= 1.0 {
            RegimeTag::CriticalLogGrowth
        } else {
            RegimeTag::LogGrowth
        };
        (tag, format!("n = 2sigma + 2s' ({n} = {upper})"))
    } else if n < upper {
        let rate = 1.0 - (n - two_s) / (2.0 * sigma);
        (
            RegimeTag::PolynomialGrowth { rate },
            format!("2s' < n < 2sigma + 2s' ({two_s} < {n} < {upper})"),
        )
    } else {
        (RegimeTag::Bounded, format!("n > 2sigma + 2s' ({n} > {upper})"))
    };
    Regime {
        tag,
        inequality,
        effective_s: s_eff,
    }
}

/// Classify with integer data moment order `m` (`m = 0` when the singular
/// profile is non-zero at the origin).
pub fn classify_regime(spec: &ModelSpec, m: u32) -> Regime {
    classify_regime_order(spec, m as f64)
}

/// `D_{n,σ,s}(t)` for `t ≥ e`.
pub fn envelope(spec: &ModelSpec, t: f64) -> Result<f64> {
    envelope_for_order(spec, 0.0, t)
}

/// `D_{n,σ,s'}(t)` with `s' = s - order`.
pub fn envelope_for_order(spec: &ModelSpec, order: f64, t: f64) -> Result<f64> {
    if !(t >= core::f64::consts::E) || !t.is_finite() {
        return Err(Error::Domain("envelope needs finite t >= e"));
    }
    let n = spec.dim();
    let s_eff = spec.s - order;
    if n <= 2.0 * s_eff {
        return Err(Error::BlowupRegime {
            origin_exponent: n - 1.0 - 2.0 * s_eff,
        });
    }
    let upper = 2.0 * spec.sigma + 2.0 * s_eff;
    Ok(if is_critical(n, spec.sigma, s_eff) {
        math::sqrt(math::ln(t))
    } else if n < upper {
        math::powf(t, 1.0 - (n - 2.0 * s_eff) / (2.0 * spec.sigma))
    } else {
        1.0
    })
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let (a, b) = (math::ln(lo), math::ln(hi));
            let step = (b - a) / (count - 1) as f64;
            (0..count)
                .map(|i| match i {
                    0 => lo,
                    i if i == count - 1 => hi,
                    i => math::exp(a + step * i as f64),
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitModel {
    /// `M = c · t^a`
    PowerLaw { a: f64, c: f64 },
    /// `M² = c² ln t + offset`
    SqrtLog { c: f64, offset: f64 },
    /// `M = c`
    Constant { c: f64 },
}

impl FitModel {
    pub fn name(&self) -> &'static str {
        match self {
            FitModel::PowerLaw { .. } => "PowerLaw",
            FitModel::SqrtLog { .. } => "SqrtLog",
            FitModel::Constant { .. } => "Constant",
        }
    }

    /// Model value at `t`; `NaN` where the log model goes non-positive.
    pub fn predict(&self, t: f64) -> f64 {
        match *self {
            FitModel::PowerLaw { a, c } => c * math::powf(t, a),
            FitModel::SqrtLog { c, offset } => {
                let sq = c * c * math::ln(t) + offset;
                if sq > 0.0 {
                    math::sqrt(sq)
                } else {
                    f64::NAN
                }
            }
            FitModel::Constant { c } => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub model: FitModel,
    /// RMS of `ln M - ln model`.
    pub residual: f64,
    pub window: (f64, f64),
    pub sample_count: usize,
    /// Every candidate with its residual, simplest first; infinite residual
    /// marks a candidate that could not be fitted.
    pub candidates: Vec<(FitModel, f64)>,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

fn log_rms(model: &FitModel, ts: &[f64], log_m: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&t, &lm) in ts.iter().zip(log_m) {
        let p = model.predict(t);
        if !(p > 0.0) {
            return f64::INFINITY;
        }
        let d = lm - math::ln(p);
        acc += d * d;
    }
    math::sqrt(acc / ts.len() as f64)
}

/// Fit `Constant`, `SqrtLog` and `PowerLaw` to the samples inside `window`
/// and keep the simplest one whose residual is within the preference margin.
pub fn fit_growth(samples: &[(f64, f64)], window: (f64, f64)) -> Result<RateFit> {
    if !(window.0 > 0.0 && window.0 < window.1) {
        return Err(Error::Config("fit window needs 0 < t_min < t_max"));
    }
    let inside: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(t, _)| t >= window.0 && t <= window.1)
        .collect();
    if inside.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            got: inside.len(),
        });
    }
    if inside.iter().any(|&(_, m)| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::Domain("fit samples need finite M > 0"));
    }
    let ts: Vec<f64> = inside.iter().map(|p| p.0).collect();
    let log_t: Vec<f64> = ts.iter().map(|&t| math::ln(t)).collect();
    let log_m: Vec<f64> = inside.iter().map(|p| math::ln(p.1)).collect();
    let m_sq: Vec<f64> = inside.iter().map(|p| p.1 * p.1).collect();

    let constant = FitModel::Constant {
        c: math::exp(log_m.iter().sum::<f64>() / log_m.len() as f64),
    };
    let (c2, offset) = linear_fit(&log_t, &m_sq);
    let sqrt_log = FitModel::SqrtLog {
        c: math::sqrt(c2.max(0.0)),
        offset,
    };
    let (a, b) = linear_fit(&log_t, &log_m);
    let power = FitModel::PowerLaw {
        a,
        c: math::exp(b),
    };

    let candidates: Vec<(FitModel, f64)> = [
        (constant, log_rms(&constant, &ts, &log_m)),
        (
            sqrt_log,
            if c2 > 0.0 {
                log_rms(&sqrt_log, &ts, &log_m)
            } else {
                f64::INFINITY
            },
        ),
        (power, log_rms(&power, &ts, &log_m)),
    ]
    .into();

    let mut best = candidates[0];
    for &cand in &candidates[1..] {
        let keep_simpler =
            best.1.is_finite() && best.1 <= PREFERENCE_FACTOR * cand.1 + PREFERENCE_FLOOR;
        if !keep_simpler && cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(RateFit {
        model: best.0,
        residual: best.1,
        window,
        sample_count: inside.len(),
        candidates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichOutcome {
    pub pass: bool,
    pub min_ratio: f64,
    pub t_at_min: f64,
    pub max_ratio: f64,
    pub t_at_max: f64,
    /// Whichever extreme ratio is further from 1 on a log scale.
    pub worst_ratio: f64,
    pub t_at_worst: f64,
}

/// Check `lo ≤ M(t)/D(t) ≤ hi` on a shared grid.
pub fn sandwich_check(
    samples: &[(f64, f64)],
    envelope: &[(f64, f64)],
    band: (f64, f64),
) -> Result<SandwichOutcome> {
    if !(band.0 > 0.0 && band.0 < band.1) {
        return Err(Error::Config("band needs 0 < c_low < c_high"));
    }
    if samples.len() != envelope.len() {
        return Err(Error::Config("samples and envelope have different grids"));
    }
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut out = SandwichOutcome {
        pass: true,
        min_ratio: f64::INFINITY,
        t_at_min: f64::NAN,
        max_ratio: f64::NEG_INFINITY,
        t_at_max: f64::NAN,
        worst_ratio: 1.0,
        t_at_worst: f64::NAN,
    };
    for (&(t, m), &(te, d)) in samples.iter().zip(envelope) {
        if (t - te).abs() > 1e-12 * t.abs().max(te.abs()) {
            return Err(Error::Config("samples and envelope have different grids"));
        }
        let ratio = m / d;
        if !(ratio >= band.0 && ratio <= band.1) {
            out.pass = false;
        }
        if ratio < out.min_ratio {
            out.min_ratio = ratio;
            out.t_at_min = t;
        }
        if ratio > out.max_ratio {
            out.max_ratio = ratio;
            out.t_at_max = t;
        }
    }
    let low_dev = math::ln(out.min_ratio).abs();
    let high_dev = math::ln(out.max_ratio).abs();
    if low_dev.is_nan() || high_dev.is_nan() || low_dev > high_dev {
        out.worst_ratio = out.min_ratio;
        out.t_at_worst = out.t_at_min;
    } else {
        out.worst_ratio = out.max_ratio;
        out.t_at_worst = out.t_at_max;
    }
    Ok(out)
}
