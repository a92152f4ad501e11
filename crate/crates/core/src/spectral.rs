//! The spectral data model and pointwise evaluation of the solution multiplier.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::profile::RadialProfile;

/// Dimension `n`, dispersion order `σ`, regularity `s` and the optional
/// weighted-L¹ order `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub n: u32,
    pub sigma: f64,
    pub s: f64,
    pub kappa: Option<f64>,
}

impl ModelSpec {
    pub fn new(n: u32, sigma: f64, s: f64, kappa: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("dimension n must be at least 1"));
        }
        if !(sigma >= 1.0 && sigma.is_finite()) {
            return Err(Error::Config("sigma must be finite and >= 1"));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::Config("s must be finite and >= 0"));
        }
        if let Some(k) = kappa {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::Config("kappa must be finite and >= 0"));
            }
        }
        Ok(Self { n, sigma, s, kappa })
    }

    /// Free wave: `σ = 1`, no weight.
    pub fn wave(n: u32, s: f64) -> Result<Self> {
        Self::new(n, 1.0, s, None)
    }

    /// First critical dimension `n₀ = 2s` (finite-time blow-up at or below).
    pub fn n0(&self) -> f64 {
        2.0 * self.s
    }

    /// Second critical dimension `n₁ = 2σ + 2s` (bounded above).
    pub fn n1(&self) -> f64 {
        2.0 * self.sigma + 2.0 * self.s
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }
}

type CoefficientFn = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

#[derive(Clone)]
enum CoefficientKind {
    /// `phase · cos((βr)^σ t)` with `|phase| = 1`.
    Cosine { sigma: f64, beta: f64, phase: Complex64 },
    Custom(Arc<CoefficientFn>),
}

/// A multiplier `B(t, r)` with a certified uniform bound `|B| ≤ bound`.
#[derive(Clone)]
pub struct BoundedCoefficient {
    kind: CoefficientKind,
    bound: f64,
    label: String,
}

impl fmt::Debug for BoundedCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedCoefficient")
            .field("label", &self.label)
            .field("bound", &self.bound)
            .finish()
    }
}

impl BoundedCoefficient {
    /// `cos((βr)^σ t)`, the conservative kernel.
    pub fn cosine(sigma: f64, beta: f64) -> Self {
        Self::cosine_with_phase(sigma, beta, Complex64::new(1.0, 0.0))
    }

    /// `phase · cos((βr)^σ t)`; the phase must have unit modulus.
    pub fn cosine_with_phase(sigma: f64, beta: f64, phase: Complex64) -> Self {
        let phase = phase / math::sqrt(phase.norm_sqr());
        Self {
            kind: CoefficientKind::Cosine { sigma, beta, phase },
            bound: 1.0,
            label: String::from("cos"),
        }
    }

    /// An arbitrary coefficient with a caller-certified bound.
    pub fn custom<F>(eval: F, bound: f64, label: &str) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            kind: CoefficientKind::Custom(Arc::new(eval)),
            bound,
            label: String::from(label),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64, r: f64) -> Complex64 {
        match &self.kind {
            CoefficientKind::Cosine { sigma, beta, phase } => {
                phase * math::cos(phase_argument(*sigma, *beta, r) * t)
            }
            CoefficientKind::Custom(f) => f(t, r),
        }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn cosine_params(&self) -> Option<(f64, f64, Complex64)> {
        match self.kind {
            CoefficientKind::Cosine { sigma, beta, phase } => Some((sigma, beta, phase)),
            CoefficientKind::Custom(_) => None,
        }
    }
}

/// Time weight `w(t)` multiplying the whole multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimePrefactor {
    One,
    /// `(1 + t)^{-exponent}`.
    Dissipative { exponent: f64 },
}

impl TimePrefactor {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TimePrefactor::One => 1.0,
            TimePrefactor::Dissipative { exponent } => math::powf(1.0 + t, -exponent),
        }
    }
}

/// Provenance of an adapter-built solution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionMeta {
    pub model: String,
    /// Power of `r` folded into the singular profile at construction.
    pub fold_exponent: f64,
    /// Derived scalar parameters worth reporting (e.g. `tau2`).
    pub derived: Vec<(String, f64)>,
}

/// `û(t,r) = w(t)[Σ B_k(t,r) φ_{0,k}(r) + sin((βr)^σ t)/(βr)^{σ+s} φ₁(r)]`.
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    spec: ModelSpec,
    bounded_terms: Vec<(BoundedCoefficient, RadialProfile)>,
    singular_profile: RadialProfile,
    time_prefactor: TimePrefactor,
    frequency_scale: f64,
    meta: SolutionMeta,
}

impl SpectralSolution {
    /// A solution with the given singular profile and no bounded part.
    pub fn new(spec: ModelSpec, singular_profile: RadialProfile) -> Self {
        Self {
            spec,
            bounded_terms: Vec::new(),
            singular_profile,
            time_prefactor: TimePrefactor::One,
            frequency_scale: 1.0,
            meta: SolutionMeta::default(),
        }
    }

    pub fn with_bounded_term(mut self, coeff: BoundedCoefficient, profile: RadialProfile) -> Self {
        self.bounded_terms.push((coeff, profile));
        self
    }

    pub fn with_time_prefactor(mut self, prefactor: TimePrefactor) -> Self {
        self.time_prefactor = prefactor;
        self
    }

    pub fn with_frequency_scale(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Unsupported("frequency scale beta must be positive"));
        }
        self.frequency_scale = beta;
        Ok(self)
    }

    pub fn with_meta(mut self, meta: SolutionMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn bounded_terms(&self) -> &[(BoundedCoefficient, RadialProfile)] {
        &self.bounded_terms
    }

    pub fn singular_profile(&self) -> &RadialProfile {
        &self.singular_profile
    }

    pub fn time_prefactor(&self) -> TimePrefactor {
        self.time_prefactor
    }

    pub fn frequency_scale(&self) -> f64 {
        self.frequency_scale
    }

    pub fn meta(&self) -> &SolutionMeta {
        &self.meta
    }

    /// True when every profile vanishes identically.
    pub fn is_zero_data(&self) -> bool {
        self.singular_profile.is_zero() && self.bounded_terms.iter().all(|(_, p)| p.is_zero())
    }

    /// Profiles carrying data, in a fixed order (singular first).
    pub(crate) fn live_profiles(&self) -> impl Iterator<Item = &RadialProfile> {
        core::iter::once(&self.singular_profile)
            .chain(self.bounded_terms.iter().map(|(_, p)| p))
            .filter(|p| !p.is_zero())
    }

    /// Unchecked evaluation of `û(t, r)` for `r > 0`.
    ///
    /// The singular factor is formed as `t·sinc(u)·(βr)^{-s}` with
    /// `u = (βr)^σ t`, which stays accurate as `r → 0`.
    #[inline]
    pub(crate) fn hat(&self, t: f64, r: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (coeff, profile) in &self.bounded_terms {
            let v = profile.eval(r);
            if v != 0.0 {
                acc += coeff.eval(t, r) * v;
            }
        }
        let phi1 = self.singular_profile.eval(r);
        if phi1 != 0.0 {
            let br = self.frequency_scale * r;
            let u = math::powf(br, self.spec.sigma) * t;
            acc.re += t * math::sinc(u) * math::powf(br, -self.spec.s) * phi1;
        }
        acc * self.time_prefactor.eval(t)
    }

    /// Whether the kernel is `cos((βr)^σ t)·φ₀ + sin(...)/(βr)^{σ+s}·φ₁`
    /// with unit time weight, for which the spectral energy is conserved.
    pub fn is_conservative(&self) -> bool {
        if self.time_prefactor != TimePrefactor::One || self.bounded_terms.len() != 1 {
            return false;
        }
        match self.bounded_terms[0].0.cosine_params() {
            Some((sigma, beta, _)) => sigma == self.spec.sigma && beta == self.frequency_scale,
            None => false,
        }
    }

    /// Unchecked energy density for a conservative kernel.
    #[inline]
    pub(crate) fn energy_density_unchecked(&self, t: f64, r: f64) -> f64 {
        let (coeff, profile0) = &self.bounded_terms[0];
        let phase = coeff
            .cosine_params()
            .map(|(_, _, p)| p)
            .unwrap_or(Complex64::new(1.0, 0.0));
        let br = self.frequency_scale * r;
        let a = math::powf(br, self.spec.sigma);
        let (sn, cs) = math::sin_cos(a * t);
        let phi0 = profile0.eval(r);
        let phi1 = self.singular_profile.eval(r);
        let damp = math::powf(br, -self.spec.s);
        let u = phase * (cs * phi0) + t * math::sinc(a * t) * damp * phi1;
        let ut = phase * (-a * sn * phi0) + cs * damp * phi1;
        a * a * u.norm_sqr() + ut.norm_sqr()
    }
}

#[inline]
pub(crate) fn phase_argument(sigma: f64, beta: f64, r: f64) -> f64 {
    math::powf(beta * r, sigma)
}

fn check_point(t: f64, r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain("radial frequency must be positive and finite"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain("time must be finite and >= 0"));
    }
    Ok(())
}

/// Evaluate `û(t, r)`; the singular factor is undefined at `r = 0`.
pub fn evaluate_solution_hat(sol: &SpectralSolution, t: f64, r: f64) -> Result<Complex64> {
    check_point(t, r)?;
    Ok(sol.hat(t, r))
}

/// Effective small-`r` order of a profile: the declared leading order, or
/// the remainder exponent when the leading coefficient vanishes.
pub fn effective_order(p: &RadialProfile) -> f64 {
    if p.leading_coeff() == 0.0 {
        p.remainder_exponent()
    } else {
        p.leading_order()
    }
}

/// Exponent `e` with `|û(t,r)|² r^{n-1} ~ r^e` as `r → 0⁺` at fixed `t > 0`.
///
/// The singular part contributes `n − 1 − 2s + 2m` (the sine supplies
/// `(βr)^σ t`, cancelling `r^{-σ}`); each bounded term contributes
/// `n − 1 + 2m₀`. The smallest exponent dominates. `M(t)` is finite iff
/// `e > −1`. Zero data give `+∞`.
pub fn origin_exponent(sol: &SpectralSolution, _t: f64) -> f64 {
    let n = sol.spec.dim();
    let mut e = f64::INFINITY;
    if !sol.singular_profile.is_zero() {
        e = e.min(n - 1.0 - 2.0 * sol.spec.s + 2.0 * effective_order(&sol.singular_profile));
    }
    for (_, p) in &sol.bounded_terms {
        if !p.is_zero() {
            e = e.min(n - 1.0 + 2.0 * effective_order(p));
        }
    }
    e
}

/// `(βr)^{2σ}|û|² + |û_t|²`, constant in `t` for conservative kernels.
pub fn energy_density(sol: &SpectralSolution, t: f64, r: f64) -> Result<f64> {
    check_point(t, r)?;
    if !sol.is_conservative() {
        return Err(Error::UnsupportedKernel(
            "energy density needs a single cosine bounded term and unit time weight",
        ));
    }
    Ok(sol.energy_density_unchecked(t, r))
}
