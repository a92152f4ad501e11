//! Large-time L² behavior of undamped evolution equations, computed directly
//! from their Fourier-multiplier representation.
//!
//! A solution is described on radial frequencies as
//!
//! ```text
//! û(t, r) = w(t) · [ Σ_k B_k(t, r) φ_{0,k}(r) + sin((βr)^σ t) / (βr)^{σ+s} · φ₁(r) ]
//! ```
//!
//! with bounded coefficients `B_k`. The crate evaluates this multiplier
//! ([`spectral`]), integrates `M(t)² = ω_n ∫ |û|² r^{n-1} dr` with half-period
//! aligned panels ([`quadrature`]), classifies the predicted large-time regime
//! and fits empirical growth laws ([`asymptotics`]), and maps concrete
//! equations onto the multiplier form ([`models`]).
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
mod error;
pub mod gauss_kronrod;
pub mod math;
pub mod models;
pub mod profile;
pub mod quadrature;
pub mod spectral;
pub mod sum;

pub use asymptotics::{
    classify_regime, envelope, fit_growth, sandwich_check, FitModel, RateFit, Regime, RegimeTag,
    SandwichOutcome,
};
pub use error::{Error, Result};
pub use profile::{DecayBound, RadialProfile};
pub use quadrature::{
    integrate_energy, integrate_l2_squared, make_segments, OscillationSegments, QuadratureResult,
    Verdict,
};
pub use spectral::{
    energy_density, evaluate_solution_hat, origin_exponent, BoundedCoefficient, ModelSpec,
    SpectralSolution, TimePrefactor,
};
