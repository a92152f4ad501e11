//! Radial frequency-side profiles `r ↦ φ(r)` with declared small-`r` and
//! large-`r` behavior.
//!
//! Physical-space hypotheses on the data (integrability, vanishing moments)
//! enter only through their Fourier-side consequences: the leading order `m`
//! and coefficient `c` in `φ(r) = c·r^m + O(r^ρ)` near the origin, and a
//! decay bound `|φ(r)| ≤ A(1+r)^{-p}` at infinity. A nonzero zeroth moment
//! is `m = 0, c ≠ 0`; vanishing moments below order `k` give `m = k`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

/// `|φ(r)| ≤ amplitude · (1 + r)^{-power}` for `r ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub amplitude: f64,
    pub power: f64,
}

impl DecayBound {
    pub fn new(amplitude: f64, power: f64) -> Self {
        Self { amplitude, power }
    }

    #[inline]
    pub fn at(&self, r: f64) -> f64 {
        self.amplitude * math::powf(1.0 + r, -self.power)
    }
}

/// Power used for the polynomial decay bound of Gaussian-type profiles.
const GAUSSIAN_DECAY_POWER: f64 = 16.0;

#[derive(Clone)]
pub struct RadialProfile {
    eval: Arc<EvalFn>,
    leading_order: f64,
    leading_coeff: f64,
    remainder_exponent: f64,
    decay: DecayBound,
    support_radius: Option<f64>,
    zero: bool,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("leading_order", &self.leading_order)
            .field("leading_coeff", &self.leading_coeff)
            .field("remainder_exponent", &self.remainder_exponent)
            .field("decay", &self.decay)
            .field("support_radius", &self.support_radius)
            .finish()
    }
}

impl RadialProfile {
    /// Build a profile from a closure and its declared asymptotic data.
    ///
    /// `remainder_exponent` must exceed `leading_order`; `support_radius`,
    /// when given, asserts `φ ≡ 0` beyond it.
    pub fn new<F>(
        eval: F,
        leading_order: f64,
        leading_coeff: f64,
        remainder_exponent: f64,
        decay: DecayBound,
        support_radius: Option<f64>,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !leading_order.is_finite() || !leading_coeff.is_finite() {
            return Err(Error::Config("leading data must be finite"));
        }
        if !(remainder_exponent > leading_order) {
            return Err(Error::Config("remainder exponent must exceed the leading order"));
        }
        if !(decay.amplitude >= 0.0) || !decay.power.is_finite() {
            return Err(Error::Config("decay bound needs amplitude >= 0 and finite power"));
        }
        if let Some(radius) = support_radius {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::Config("support radius must be positive"));
            }
        }
        Ok(Self {
            eval: Arc::new(eval),
            leading_order,
            leading_coeff,
            remainder_exponent,
            decay,
            support_radius,
            zero: false,
            label: String::from("custom"),
        })
    }

    /// The identically vanishing profile.
    pub fn zero() -> Self {
        Self {
            eval: Arc::new(|_| 0.0),
            leading_order: f64::INFINITY,
            leading_coeff: 0.0,
            remainder_exponent: f64::INFINITY,
            decay: DecayBound::new(0.0, 0.0),
            support_radius: None,
            zero: true,
            label: String::from("zero"),
        }
    }

    /// `e^{-a r²}`.
    pub fn gaussian(a: f64) -> Result<Self> {
        Self::monomial_gauss(0, a).map(|p| p.with_label(format!("gaussian({a})")))
    }

    /// `r^m e^{-a r²}`.
    pub fn monomial_gauss(m: u32, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Config("gaussian width must be positive"));
        }
        let order = m as f64;
        let decay = gaussian_decay(a, order);
        let profile = Self::new(
            move |r| math::powf(r, order) * math::exp(-a * r * r),
            order,
            1.0,
            order + 2.0,
            decay,
            None,
        )?;
        Ok(profile.with_label(format!("monomial_gauss({m}, {a})")))
    }

    /// `1` on `(0, R]`, `0` beyond.
    pub fn bump(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config("bump radius must be positive"));
        }
        let profile = Self::new(
            move |r| if r <= radius { 1.0 } else { 0.0 },
            0.0,
            1.0,
            2.0,
            DecayBound::new(1.0, 0.0),
            Some(radius),
        )?;
        Ok(profile.with_label(format!("bump({radius})")))
    }

    /// `r^{-p}` on `(0, R]`, `0` beyond.
    pub fn power_sing(p: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !p.is_finite() {
            return Err(Error::Config("power_sing needs finite p and positive radius"));
        }
        let amplitude = if radius >= 1.0 {
            // sup of r^{-p} over [1, R]
            math::powf(radius, -p).max(1.0)
        } else {
            0.0
        };
        let profile = Self::new(
            move |r| if r <= radius { math::powf(r, -p) } else { 0.0 },
            -p,
            1.0,
            -p + 2.0,
            DecayBound::new(amplitude, 0.0),
            Some(radius),
        )?;
        Ok(profile.with_label(format!("power_sing({p}, {radius})")))
    }

    /// `Σ cᵢ φᵢ`. Leading data come from the lowest order present; the
    /// remainder exponent is the next order or remainder, whichever is smaller.
    pub fn linear_combination(terms: &[(f64, RadialProfile)]) -> Self {
        let live: Vec<(f64, RadialProfile)> = terms
            .iter()
            .filter(|(c, p)| *c != 0.0 && !p.zero)
            .cloned()
            .collect();
        match live.len() {
            0 => return Self::zero(),
            1 => return live[0].1.scaled(live[0].0),
            _ => {}
        }
        let order = live
            .iter()
            .map(|(_, p)| p.leading_order)
            .fold(f64::INFINITY, f64::min);
        let mut coeff = 0.0;
        let mut remainder = f64::INFINITY;
        for (c, p) in &live {
            if p.leading_order == order {
                coeff += c * p.leading_coeff;
                remainder = remainder.min(p.remainder_exponent);
            } else {
                remainder = remainder.min(p.leading_order);
            }
        }
        // The decay power comes from the terms without compact support when
        // there are any. A term supported on [0, R] with a weaker power p
        // is still below A·(1+R)^{q-p}·(1+r)^{-q} on [1, R] for any q > p.
        let unbounded_power = live
            .iter()
            .filter(|(_, p)| p.decay.amplitude > 0.0 && p.support_radius.is_none())
            .map(|(_, p)| p.decay.power)
            .fold(f64::INFINITY, f64::min);
        let power = if unbounded_power.is_finite() {
            unbounded_power
        } else {
            live.iter()
                .filter(|(_, p)| p.decay.amplitude > 0.0)
                .map(|(_, p)| p.decay.power)
                .fold(f64::INFINITY, f64::min)
        };
        let power = if power.is_finite() { power } else { 0.0 };
        let amplitude = live
            .iter()
            .map(|(c, p)| {
                let a = c.abs() * p.decay.amplitude;
                match p.support_radius {
                    Some(radius) if p.decay.power < power => {
                        if radius < 1.0 {
                            0.0
                        } else {
                            a * math::powf(1.0 + radius, power - p.decay.power)
                        }
                    }
                    _ => a,
                }
            })
            .sum();
        let support = live
            .iter()
            .map(|(_, p)| p.support_radius)
            .try_fold(0.0_f64, |acc, s| s.map(|s| acc.max(s)));
        let label = live
            .iter()
            .map(|(c, p)| format!("{c}*{}", p.label))
            .collect::<Vec<_>>()
            .join(" + ");
        let parts: Vec<(f64, Arc<EvalFn>)> =
            live.iter().map(|(c, p)| (*c, p.eval.clone())).collect();
        Self {
            eval: Arc::new(move |r| parts.iter().map(|(c, f)| c * f(r)).sum()),
            leading_order: order,
            leading_coeff: coeff,
            remainder_exponent: remainder,
            decay: DecayBound::new(amplitude, power),
            support_radius: support,
            zero: false,
            label,
        }
    }

    /// `c · φ`.
    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 || self.zero {
            return Self::zero();
        }
        if c == 1.0 {
            return self.clone();
        }
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |r| c * inner(r)),
            leading_coeff: c * self.leading_coeff,
            decay: DecayBound::new(c.abs() * self.decay.amplitude, self.decay.power),
            label: format!("{c}*{}", self.label),
            ..self.clone()
        }
    }

    /// `r^k · φ`; used to fold `|ξ|^s` factors into data profiles.
    pub fn times_power(&self, k: f64) -> Self {
        if self.zero || k == 0.0 {
            return self.clone();
        }
        let inner = self.eval.clone();
        // For r ≥ 1: r^k ≤ (1+r)^k when k ≥ 0 and r^k ≤ 2^{-k}(1+r)^k when k < 0.
        let amplitude = if k < 0.0 {
            self.decay.amplitude * math::powf(2.0, -k)
        } else {
            self.decay.amplitude
        };
        Self {
            eval: Arc::new(move |r| math::powf(r, k) * inner(r)),
            leading_order: self.leading_order + k,
            remainder_exponent: self.remainder_exponent + k,
            decay: DecayBound::new(amplitude, self.decay.power - k),
            label: format!("r^{k}*{}", self.label),
            ..self.clone()
        }
    }

    pub fn with_label(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn leading_order(&self) -> f64 {
        self.leading_order
    }

    pub fn leading_coeff(&self) -> f64 {
        self.leading_coeff
    }

    pub fn remainder_exponent(&self) -> f64 {
        self.remainder_exponent
    }

    pub fn decay(&self) -> DecayBound {
        self.decay
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sample the declared asymptotics and report violations.
    pub fn validate(&self) -> ProfileDiagnostics {
        if self.zero {
            return ProfileDiagnostics {
                remainder_growth: 1.0,
                decay_worst_ratio: 0.0,
                leading_ok: true,
                decay_ok: true,
            };
        }
        // |φ − c r^m| / r^ρ on log-spaced r in [1e-4, 0.1]; a correct ρ keeps
        // the ratio bounded, so compare the finest decade to the coarsest.
        let ratio = |r: f64| {
            (self.eval(r) - self.leading_coeff * math::powf(r, self.leading_order)).abs()
                / math::powf(r, self.remainder_exponent)
        };
        let decade_max = |lo: f64| {
            (0..=16)
                .map(|i| ratio(lo * libm::pow(10.0, i as f64 / 16.0)))
                .fold(0.0_f64, f64::max)
        };
        let fine = decade_max(1e-4);
        let coarse = decade_max(1e-2);
        let remainder_growth = if coarse > 0.0 {
            fine / coarse
        } else if fine > 0.0 {
            f64::INFINITY
        } else {
            1.0
        };
        let decay_worst_ratio = (0..=200)
            .map(|i| {
                let r = libm::pow(10.0, 3.0 * i as f64 / 200.0);
                let bound = self.decay.at(r);
                let v = self.eval(r).abs();
                if v == 0.0 {
                    0.0
                } else {
                    v / bound
                }
            })
            .fold(0.0_f64, f64::max);
        ProfileDiagnostics {
            remainder_growth,
            decay_worst_ratio,
            leading_ok: remainder_growth <= 10.0,
            decay_ok: decay_worst_ratio <= 1.0 + 1e-12,
        }
    }
}

/// Outcome of [`RadialProfile::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileDiagnostics {
    /// Growth of `|φ − c r^m| / r^ρ` from `r ~ 10⁻²` down to `r ~ 10⁻⁴`.
    pub remainder_growth: f64,
    /// Largest `|φ(r)| / (A(1+r)^{-p})` sampled on `[1, 10³]`.
    pub decay_worst_ratio: f64,
    pub leading_ok: bool,
    pub decay_ok: bool,
}

/// Sharp amplitude `A = sup (1+r)^{q} e^{-a r²}` for `q = order + 16`, which
/// dominates `r^order e^{-a r²} (1+r)^{16}`.
fn gaussian_decay(a: f64, order: f64) -> DecayBound {
    let q = order + GAUSSIAN_DECAY_POWER;
    let r_star = 0.5 * (-1.0 + math::sqrt(1.0 + 2.0 * q / a));
    let log_amp = q * math::ln(1.0 + r_star) - a * r_star * r_star;
    // Small inflation absorbs rounding in the sampled check.
    DecayBound::new(math::exp(log_amp) * (1.0 + 1e-9), GAUSSIAN_DECAY_POWER)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_profiles_pass_their_own_validation() {
        let profiles = [
            RadialProfile::gaussian(1.0).unwrap(),
            RadialProfile::gaussian(0.25).unwrap(),
            RadialProfile::monomial_gauss(1, 1.0).unwrap(),
            RadialProfile::monomial_gauss(3, 2.0).unwrap(),
            RadialProfile::bump(1.5).unwrap(),
            RadialProfile::power_sing(1.45, 1.0).unwrap(),
            RadialProfile::power_sing(0.5, 3.0).unwrap(),
        ];
        for p in &profiles {
            let d = p.validate();
            assert!(d.leading_ok, "{p:?}: {d:?}");
            assert!(d.decay_ok, "{p:?}: {d:?}");
        }
    }

    #[test]
    fn compact_terms_take_the_decay_of_the_others() {
        let mixed = RadialProfile::linear_combination(&[
            (1.0, RadialProfile::bump(2.0).unwrap()),
            (-0.5, RadialProfile::monomial_gauss(1, 2.0).unwrap()),
            (3.0, RadialProfile::power_sing(0.5, 0.8).unwrap()),
        ]);
        assert_eq!(mixed.decay().power, GAUSSIAN_DECAY_POWER);
        assert!(mixed.validate().decay_ok, "{:?}", mixed.decay());
        for i in 0..=4000 {
            let r = 1.0 + 0.01 * i as f64;
            assert!(mixed.eval(r).abs() <= mixed.decay().at(r), "r={r}");
        }
    }

    #[test]
    fn overstated_remainder_is_flagged() {
        // e^{-r} - 1 ~ -r, so ρ = 3 is wrong.
        let p = RadialProfile::new(
            |r| libm::exp(-r),
            0.0,
            1.0,
            3.0,
            DecayBound::new(1e9, 8.0),
            None,
        )
        .unwrap();
        assert!(!p.validate().leading_ok);
    }

    #[test]
    fn understated_decay_is_flagged() {
        let p = RadialProfile::new(
            |r| 1.0 / (1.0 + r),
            0.0,
            1.0,
            1.0 + 1e-9,
            DecayBound::new(1.0, 2.0),
            None,
        )
        .unwrap();
        assert!(!p.validate().decay_ok);
    }

    #[test]
    fn constructor_rejects_bad_data() {
        let bad = RadialProfile::new(|_| 1.0, 1.0, 1.0, 0.5, DecayBound::new(1.0, 1.0), None);
        assert!(matches!(bad, Err(Error::Config(_))));
        assert!(RadialProfile::gaussian(0.0).is_err());
        assert!(RadialProfile::bump(-1.0).is_err());
    }

    #[test]
    fn combination_leading_data() {
        let g = RadialProfile::gaussian(1.0).unwrap();
        let mg = RadialProfile::monomial_gauss(1, 1.0).unwrap();
        let c = RadialProfile::linear_combination(&[(2.0, g.clone()), (-3.0, mg.clone())]);
        assert_eq!(c.leading_order(), 0.0);
        assert_eq!(c.leading_coeff(), 2.0);
        assert_eq!(c.remainder_exponent(), 1.0);
        assert!((c.eval(0.7) - (2.0 * g.eval(0.7) - 3.0 * mg.eval(0.7))).abs() < 1e-15);
        assert!(c.validate().decay_ok);
        let z = RadialProfile::linear_combination(&[(0.0, g)]);
        assert!(z.is_zero());
    }

    #[test]
    fn power_fold_shifts_orders() {
        let g = RadialProfile::gaussian(1.0).unwrap();
        let folded = g.times_power(0.5);
        assert_eq!(folded.leading_order(), 0.5);
        assert_eq!(folded.remainder_exponent(), 2.5);
        assert!((folded.eval(2.0) - 2f64.sqrt() * (-4f64).exp()).abs() < 1e-15);
        assert!(folded.validate().decay_ok);
        let unfolded = g.times_power(-1.0);
        assert_eq!(unfolded.leading_order(), -1.0);
        assert!(unfolded.validate().decay_ok);
    }
}
