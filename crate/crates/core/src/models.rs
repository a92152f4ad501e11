//! Adapters from concrete linear evolution equations to [`SpectralSolution`].
//!
//! Convention for the singular profile: [`free_wave`] takes `v̂₁ = r^s û₁`
//! as given, while every other adapter receives the raw Fourier profile of
//! its data and multiplies by `r^s` itself, recording the exponent in
//! [`SolutionMeta::fold_exponent`]. Either way the multiplier equals the
//! exact Fourier transform of the solution.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::asymptotics::{classify_regime_order, envelope_for_order, Regime, RegimeTag};
use crate::error::{Error, Result};
use crate::math;
use crate::profile::RadialProfile;
use crate::quadrature::integrate_l2_squared;
use crate::spectral::{
    effective_order, BoundedCoefficient, ModelSpec, SolutionMeta, SpectralSolution, TimePrefactor,
};

/// Predicted large-time behavior of an adapter-built solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub regime: Regime,
    /// Small-`r` order `m` of the singular profile.
    pub data_order: f64,
    /// Extra algebraic decay `(1+t)^{-decay}` from a time weight.
    pub decay: f64,
}

impl Prediction {
    /// `(1+t)^{-decay} · D_{n,σ,s-m}(t)`.
    pub fn envelope(&self, spec: &ModelSpec, t: f64) -> Result<f64> {
        let d = envelope_for_order(spec, self.data_order, t)?;
        Ok(if self.decay == 0.0 {
            d
        } else {
            d * math::powf(1.0 + t, -self.decay)
        })
    }
}

/// Regime prediction from the singular profile's order and the time weight.
pub fn predict(sol: &SpectralSolution) -> Prediction {
    let spec = sol.spec();
    let order = effective_order(sol.singular_profile());
    let base = classify_regime_order(spec, order);
    let decay = match sol.time_prefactor() {
        TimePrefactor::One => 0.0,
        TimePrefactor::Dissipative { exponent } => exponent,
    };
    if decay == 0.0 {
        return Prediction {
            regime: base,
            data_order: order,
            decay,
        };
    }
    let regime = match base.tag {
        RegimeTag::FiniteTimeBlowup => base,
        tag => {
            let growth = match tag {
                RegimeTag::PolynomialGrowth { rate } => rate,
                _ => 0.0,
            };
            let net = growth - decay;
            let tag = if net.abs() <= 1e-12 {
                if matches!(tag, RegimeTag::LogGrowth | RegimeTag::CriticalLogGrowth) {
                    RegimeTag::Decay { rate: decay }
                } else {
                    RegimeTag::Bounded
                }
            } else if net > 0.0 {
                RegimeTag::PolynomialGrowth { rate: net }
            } else {
                RegimeTag::Decay { rate: -net }
            };
            Regime {
                tag,
                inequality: format!(
                    "{}; growth {growth} minus weight decay {decay}",
                    base.inequality
                ),
                effective_s: base.effective_s,
            }
        }
    };
    Prediction {
        regime,
        data_order: order,
        decay,
    }
}

fn meta(model: &str, fold: f64, derived: Vec<(String, f64)>) -> SolutionMeta {
    SolutionMeta {
        model: String::from(model),
        fold_exponent: fold,
        derived,
    }
}

/// `u_tt − Δu = 0` with `v̂₁ = r^s û₁` supplied directly.
pub fn free_wave(
    n: u32,
    s: f64,
    profile_u0: RadialProfile,
    profile_v1: RadialProfile,
) -> Result<SpectralSolution> {
    let spec = ModelSpec::wave(n, s)?;
    Ok(SpectralSolution::new(spec, profile_v1)
        .with_bounded_term(BoundedCoefficient::cosine(1.0, 1.0), profile_u0)
        .with_meta(meta("free_wave", 0.0, Vec::new())))
}

/// `w_tt + (−Δ)^σ w = 0`.
pub fn sigma_evolution(
    n: u32,
    sigma: f64,
    s: f64,
    profile_w0: RadialProfile,
    profile_w1: RadialProfile,
) -> Result<SpectralSolution> {
    if !(sigma >= 1.0) {
        return Err(Error::Unsupported("sigma-evolution needs sigma >= 1"));
    }
    let spec = ModelSpec::new(n, sigma, s, None)?;
    Ok(SpectralSolution::new(spec, profile_w1.times_power(s))
        .with_bounded_term(BoundedCoefficient::cosine(sigma, 1.0), profile_w0)
        .with_meta(meta("sigma_evolution", s, Vec::new())))
}

/// `τ₂` that puts the scale-invariant wave on the line where the
/// transformed equation is the free wave.
pub fn scale_invariant_tau2(tau1: f64) -> f64 {
    tau1 * tau1 / 4.0 - tau1 / 2.0
}

/// `u_tt − Δu + τ₁/(1+t) u_t + τ₂/(1+t)² u = 0` with `τ₂` chosen by
/// [`scale_invariant_tau2`]. The substitution `w = (1+t)^{τ₁/2} u` yields a
/// free wave with data `(u₀, (τ₁/2)u₀ + u₁)`.
pub fn scale_invariant(
    n: u32,
    s: f64,
    tau1: f64,
    profile_u0: RadialProfile,
    profile_u1: RadialProfile,
) -> Result<SpectralSolution> {
    if !(tau1 > 0.0 && tau1.is_finite()) {
        return Err(Error::Unsupported("scale-invariant model needs tau1 > 0"));
    }
    let spec = ModelSpec::wave(n, s)?;
    let w1 = RadialProfile::linear_combination(&[(0.5 * tau1, profile_u0.clone()), (1.0, profile_u1)]);
    Ok(SpectralSolution::new(spec, w1.times_power(s))
        .with_bounded_term(BoundedCoefficient::cosine(1.0, 1.0), profile_u0)
        .with_time_prefactor(TimePrefactor::Dissipative {
            exponent: 0.5 * tau1,
        })
        .with_meta(meta(
            "scale_invariant",
            s,
            vec![
                (String::from("tau1"), tau1),
                (String::from("tau2"), scale_invariant_tau2(tau1)),
            ],
        )))
}

/// Multiplier of `ψ̂₀` in the critical MGT solution.
pub fn mgt_coefficient_psi0(tau: f64, t: f64, r: f64) -> f64 {
    let x = tau * r;
    let (sn, cs) = math::sin_cos(r * t);
    (x * x * math::exp(-t / tau) + cs + x * sn) / (1.0 + x * x)
}

/// Bounded remainder multiplying `ψ̂₂` once `τψ̂₂` has been moved into the
/// singular part.
pub fn mgt_coefficient_psi2(tau: f64, t: f64, r: f64) -> f64 {
    let x = tau * r;
    let (sn, cs) = math::sin_cos(r * t);
    tau * tau * (math::exp(-t / tau) - cs - x * sn) / (1.0 + x * x)
}

/// Certified sup of `|mgt_coefficient_psi0|`.
pub const MGT_PSI0_BOUND: f64 = 2.0;

/// Certified sup of `|mgt_coefficient_psi2|` divided by `τ²`.
pub const MGT_PSI2_BOUND_PER_TAU2: f64 = 2.0;

/// `τψ_ttt + ψ_tt − Δψ − τΔψ_t = 0`.
pub fn mgt(
    n: u32,
    s: f64,
    tau: f64,
    profile_psi0: RadialProfile,
    profile_psi1: RadialProfile,
    profile_psi2: RadialProfile,
) -> Result<SpectralSolution> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Unsupported("MGT needs tau > 0"));
    }
    let spec = ModelSpec::wave(n, s)?;
    let v1 = RadialProfile::linear_combination(&[(1.0, profile_psi1), (tau, profile_psi2.clone())]);
    let b0 = BoundedCoefficient::custom(
        move |t, r| Complex64::new(mgt_coefficient_psi0(tau, t, r), 0.0),
        MGT_PSI0_BOUND,
        "mgt_psi0",
    );
    let b2 = BoundedCoefficient::custom(
        move |t, r| Complex64::new(mgt_coefficient_psi2(tau, t, r), 0.0),
        MGT_PSI2_BOUND_PER_TAU2 * tau * tau,
        "mgt_psi2",
    );
    Ok(SpectralSolution::new(spec, v1.times_power(s))
        .with_bounded_term(b0, profile_psi0)
        .with_bounded_term(b2, profile_psi2)
        .with_meta(meta("mgt", s, vec![(String::from("tau"), tau)])))
}

/// Largest `|B_k(t,r)| / bound_k` over the sample points and all bounded
/// terms; the certificate holds when this is at most 1.
pub fn bounded_coefficient_certificate(sol: &SpectralSolution, points: &[(f64, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (coeff, _) in sol.bounded_terms() {
        for &(t, r) in points {
            let v = coeff.eval(t, r).norm_sqr();
            worst = worst.max(math::sqrt(v) / coeff.bound());
        }
    }
    worst
}

/// Linearized compressible Euler system split into density and the
/// potential part of the velocity. The solenoidal part is time invariant
/// and enters only through its squared norm.
#[derive(Debug, Clone)]
pub struct EulerSolution {
    pub density: SpectralSolution,
    pub velocity: SpectralSolution,
    pub solenoidal: f64,
}

impl EulerSolution {
    /// `‖u(t)‖ = √(S + ‖potential part‖²)`.
    pub fn velocity_norm(&self, t: f64, tol: f64) -> Result<f64> {
        let res = integrate_l2_squared(&self.velocity, t, tol)?;
        match res.value() {
            Some(v) => Ok(math::sqrt(self.solenoidal + v)),
            None => Err(Error::BlowupRegime {
                origin_exponent: crate::spectral::origin_exponent(&self.velocity, t),
            }),
        }
    }
}

/// Potential scalar `q̂ = δ̂/r` from the divergence profile `δ̂ = ξ·û₀`.
pub fn potential_from_divergence(divergence: &RadialProfile) -> RadialProfile {
    divergence.times_power(-1.0)
}

/// `ρ_t + β div u = 0`, `u_t + β∇ρ = 0`.
///
/// Both multipliers carry the global phase `i`, which leaves norms
/// unchanged and makes the singular parts real.
pub fn euler(
    n: u32,
    s: f64,
    beta: f64,
    profile_rho0: RadialProfile,
    profile_potential: RadialProfile,
    solenoidal: f64,
) -> Result<EulerSolution> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Unsupported("Euler system needs beta > 0"));
    }
    if !(solenoidal >= 0.0 && solenoidal.is_finite()) {
        return Err(Error::Domain("solenoidal norm must be finite and >= 0"));
    }
    let spec = ModelSpec::wave(n, s)?;
    let i = Complex64::new(0.0, 1.0);
    let scale = math::powf(beta, 1.0 + s);

    let divergence = profile_potential.times_power(1.0);
    let density = SpectralSolution::new(spec, divergence.times_power(s).scaled(scale))
        .with_bounded_term(BoundedCoefficient::cosine_with_phase(1.0, beta, i), profile_rho0.clone())
        .with_frequency_scale(beta)?
        .with_meta(meta("euler_density", s, vec![(String::from("beta"), beta)]));

    let velocity = SpectralSolution::new(spec, profile_rho0.times_power(1.0 + s).scaled(scale))
        .with_bounded_term(BoundedCoefficient::cosine_with_phase(1.0, beta, i), profile_potential)
        .with_frequency_scale(beta)?
        .with_meta(meta(
            "euler_velocity",
            1.0 + s,
            vec![(String::from("beta"), beta), (String::from("solenoidal"), solenoidal)],
        ));

    Ok(EulerSolution {
        density,
        velocity,
        solenoidal,
    })
}

/// Data whose Fourier profile behaves like `r^{-n/2+σε/2}` on `(0, 1]`,
/// which is `L²` but only barely.
pub fn singular_l2_example(n: u32, sigma: f64, epsilon: f64) -> Result<SpectralSolution> {
    if !(epsilon > 0.0 && epsilon <= 0.2) {
        return Err(Error::Config("epsilon must lie in (0, 0.2]"));
    }
    let spec = ModelSpec::new(n, sigma, 0.0, None)?;
    let p = 0.5 * n as f64 - 0.5 * sigma * epsilon;
    Ok(SpectralSolution::new(spec, RadialProfile::power_sing(p, 1.0)?)
        .with_bounded_term(BoundedCoefficient::cosine(sigma, 1.0), RadialProfile::zero())
        .with_meta(meta(
            "singular_l2",
            0.0,
            vec![(String::from("epsilon"), epsilon)],
        )))
}
