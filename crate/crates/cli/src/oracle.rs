//! Dense trapezoid reference for `M(t)²`, used by the verification suite.
//!
//! Only valid for profiles with compact support and an integrand that stays
//! bounded at the origin. Cells follow the half-period grid of the phase
//! `r^σ t`, and profile jumps are added as extra cut points.

use std::f64::consts::PI;

/// Surface area of the unit sphere in `R^n`, computed without the library.
pub fn sphere_area(n: u32) -> f64 {
    // Γ(n/2) by recursion from Γ(1/2) = √π or Γ(1) = 1.
    let (mut gamma, mut x) = if n % 2 == 1 { (PI.sqrt(), 0.5) } else { (1.0, 1.0) };
    while x < n as f64 / 2.0 - 1e-9 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}

/// `∫₀^radius f(r) dr` by the composite trapezoid rule with about
/// `total_points` nodes.
pub fn trapezoid(
    f: impl Fn(f64) -> f64,
    sigma: f64,
    t: f64,
    radius: f64,
    breaks: &[f64],
    total_points: usize,
) -> f64 {
    let mut cuts = vec![0.0];
    let mut j = 1.0;
    loop {
        let edge = (j * PI / t).powf(1.0 / sigma);
        if edge >= radius {
            break;
        }
        cuts.push(edge);
        j += 1.0;
    }
    cuts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < radius));
    cuts.push(radius);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let k = ((total_points as f64 * (b - a) / radius) as usize).max(64);
        let h = (b - a) / k as f64;
        // One-sided limits at the cell ends.
        let inset = 1e-12 * (b - a);
        let mut acc = 0.5 * (f(a + inset) + f(b - inset));
        for i in 1..k {
            acc += f(a + h * i as f64);
        }
        sum += acc * h;
    }
    sum
}
