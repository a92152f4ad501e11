#![allow(dead_code)]

use wavenorm_core::{ModelSpec, RadialProfile};

/// Brute-force `ω_n ∫₀^R |f|² r^{n-1} dr` by the composite trapezoid rule on
/// half-period aligned sub-intervals, with extra cuts at `breaks`.
/// Only meant for integrands that are bounded near the origin.
pub fn trapezoid_oracle(
    integrand: impl Fn(f64) -> f64,
    sigma: f64,
    t: f64,
    radius: f64,
    breaks: &[f64],
    total_points: usize,
) -> f64 {
    let mut cuts = vec![0.0];
    let mut j = 1.0;
    loop {
        let edge = (j * std::f64::consts::PI / t).powf(1.0 / sigma);
        if edge >= radius {
            break;
        }
        cuts.push(edge);
        j += 1.0;
    }
    cuts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < radius));
    cuts.push(radius);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let k = ((total_points as f64 * (b - a) / radius) as usize).max(64);
        let h = (b - a) / k as f64;
        // Evaluate just inside the ends so one-sided limits are used at the
        // discontinuities of compactly supported profiles.
        let inset = 1e-12 * (b - a);
        let mut acc = 0.5 * (integrand(a + inset) + integrand(b - inset));
        for i in 1..k {
            acc += integrand(a + h * i as f64);
        }
        sum += acc * h;
    }
    sum
}

pub fn omega(n: u32) -> f64 {
    // Independent of the library: 2π^{n/2}/Γ(n/2).
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / libm_gamma(n as f64 / 2.0)
}

fn libm_gamma(x: f64) -> f64 {
    // Γ at half-integers by recursion from Γ(1/2) = √π and Γ(1) = 1.
    let mut g = if (x - x.floor()).abs() > 0.25 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    let mut y = if (x - x.floor()).abs() > 0.25 { 0.5 } else { 1.0 };
    while y < x - 1e-9 {
        g *= y;
        y += 1.0;
    }
    g
}

pub fn spec(n: u32, sigma: f64, s: f64) -> ModelSpec {
    ModelSpec::new(n, sigma, s, None).unwrap()
}

pub fn gauss(a: f64) -> RadialProfile {
    RadialProfile::gaussian(a).unwrap()
}
