//! Turning a [`ModelConfig`] into something that can be evaluated in time.

use wavenorm_core::models::{self, Prediction};
use wavenorm_core::quadrature::{integrate_l2_squared, Verdict};
use wavenorm_core::spectral::SolutionMeta;
use wavenorm_core::{BoundedCoefficient, ModelSpec, SpectralSolution};

use crate::config::{EulerField, ModelConfig};

/// A solution whose norm the sweep tracks, plus a time-independent squared
/// norm added on top (the solenoidal Euler velocity, zero elsewhere).
#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub solution: SpectralSolution,
    pub constant_part: f64,
    pub prediction: Prediction,
}

/// One evaluated time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sample {
    Finite {
        t: f64,
        m: f64,
        err: f64,
        segments: usize,
    },
    Divergent {
        t: f64,
        origin_exponent: f64,
    },
}

impl Model {
    pub fn build(cfg: &ModelConfig) -> wavenorm_core::Result<Self> {
        let (solution, constant_part, name) = match cfg {
            ModelConfig::FreeWave { n, s, u0, v1 } => (
                models::free_wave(*n, *s, u0.profile.clone(), v1.profile.clone())?,
                0.0,
                "free_wave",
            ),
            ModelConfig::SigmaEvolution { n, sigma, s, w0, w1 } => (
                models::sigma_evolution(*n, *sigma, *s, w0.profile.clone(), w1.profile.clone())?,
                0.0,
                "sigma_evolution",
            ),
            ModelConfig::ScaleInvariant { n, s, tau1, u0, u1 } => (
                models::scale_invariant(*n, *s, *tau1, u0.profile.clone(), u1.profile.clone())?,
                0.0,
                "scale_invariant",
            ),
            ModelConfig::Mgt {
                n,
                s,
                tau,
                psi0,
                psi1,
                psi2,
            } => (
                models::mgt(
                    *n,
                    *s,
                    *tau,
                    psi0.profile.clone(),
                    psi1.profile.clone(),
                    psi2.profile.clone(),
                )?,
                0.0,
                "mgt",
            ),
            ModelConfig::Euler {
                n,
                s,
                beta,
                rho0,
                potential,
                solenoidal,
                field,
            } => {
                let e = models::euler(
                    *n,
                    *s,
                    *beta,
                    rho0.profile.clone(),
                    potential.profile.clone(),
                    *solenoidal,
                )?;
                match field {
                    EulerField::Density => (e.density, 0.0, "euler"),
                    EulerField::Velocity => (e.velocity, e.solenoidal, "euler"),
                }
            }
            ModelConfig::SingularL2 { n, sigma, epsilon } => (
                models::singular_l2_example(*n, *sigma, *epsilon)?,
                0.0,
                "singular_l2",
            ),
            ModelConfig::Kernel {
                n,
                sigma,
                s,
                phi0,
                phi1,
            } => {
                let spec = ModelSpec::new(*n, *sigma, *s, None)?;
                let sol = SpectralSolution::new(spec, phi1.profile.clone())
                    .with_bounded_term(BoundedCoefficient::cosine(*sigma, 1.0), phi0.profile.clone())
                    .with_meta(SolutionMeta {
                        model: "kernel".into(),
                        fold_exponent: 0.0,
                        derived: Vec::new(),
                    });
                (sol, 0.0, "kernel")
            }
        };
        let prediction = models::predict(&solution);
        Ok(Model {
            name: name.to_string(),
            solution,
            constant_part,
            prediction,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        self.solution.spec()
    }

    /// `M(t)` with error `err(M²)/(2M)`.
    pub fn evaluate(&self, t: f64, tol: f64) -> wavenorm_core::Result<Sample> {
        let res = integrate_l2_squared(&self.solution, t, tol)?;
        Ok(match res.verdict {
            Verdict::Divergent { origin_exponent } => Sample::Divergent { t, origin_exponent },
            Verdict::Finite { value, abs_error } => {
                let m = (value + self.constant_part).max(0.0).sqrt();
                let err = if m > 0.0 { abs_error / (2.0 * m) } else { abs_error.sqrt() };
                Sample::Finite {
                    t,
                    m,
                    err,
                    segments: res.segments_used,
                }
            }
        })
    }

    /// Predicted envelope, evaluated at `max(t, e)` because the envelope is
    /// only defined from `e` on.
    pub fn envelope(&self, t: f64) -> wavenorm_core::Result<f64> {
        self.prediction
            .envelope(self.spec(), t.max(std::f64::consts::E))
    }
}

impl Model {
    /// Wrap an already built solution.
    pub fn from_solution(name: &str, solution: SpectralSolution) -> Self {
        let prediction = models::predict(&solution);
        Model {
            name: name.to_string(),
            solution,
            constant_part: 0.0,
            prediction,
        }
    }
}
