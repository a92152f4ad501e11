mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavenorm_core::models::{free_wave, sigma_evolution};
use wavenorm_core::*;

/// A random compactly supported profile with small-`r` order `m`, and its
/// jump locations.
fn compact_profile(rng: &mut ChaCha8Rng, m: u32) -> (RadialProfile, Vec<f64>) {
    let radius = rng.gen_range(0.5..2.0);
    let main = RadialProfile::power_sing(-(m as f64), radius).unwrap();
    if rng.gen_bool(0.5) {
        let r2 = rng.gen_range(0.3..radius);
        let extra = RadialProfile::power_sing(-(m as f64 + 1.0), r2).unwrap();
        let c = rng.gen_range(-1.0..1.0);
        (
            RadialProfile::linear_combination(&[(1.0, main), (c, extra)]),
            vec![radius, r2],
        )
    } else {
        (main, vec![radius])
    }
}

#[test]
fn adaptive_matches_trapezoid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 20 {
        let n = rng.gen_range(1..=4u32);
        let sigma = [1.0, 2.0][rng.gen_range(0..2)];
        let s = [0.0, 0.5][rng.gen_range(0..2)];
        let t = 10f64.powf(rng.gen_range(0.0..3.0));
        // Smallest order that keeps the integrand bounded at the origin.
        let m = ((2.0 * s + 1.0 - n as f64) / 2.0).ceil().max(0.0) as u32;
        let (phi1, b1) = compact_profile(&mut rng, m);
        let (phi0, b0) = compact_profile(&mut rng, 0);
        // free_wave takes r^s-folded data, sigma_evolution folds it itself;
        // in both cases the closed form below is the true multiplier.
        let (sol, damp) = if sigma == 1.0 {
            (free_wave(n, s, phi0.clone(), phi1.clone()).unwrap(), s)
        } else {
            (sigma_evolution(n, sigma, s, phi0.clone(), phi1.clone()).unwrap(), 0.0)
        };
        assert!(origin_exponent(&sol, t) >= 0.0);
        let got = integrate_l2_squared(&sol, t, 1e-8).unwrap().value().unwrap();
        let f = |r: f64| {
            let a = r.powf(sigma);
            let v = (a * t).cos() * phi0.eval(r) + (a * t).sin() / a / r.powf(damp) * phi1.eval(r);
            v * v * r.powi(n as i32 - 1)
        };
        let breaks: Vec<f64> = b0.iter().chain(&b1).copied().collect();
        let radius = breaks.iter().cloned().fold(0.0, f64::max);
        let want = omega(n) * trapezoid_oracle(f, sigma, t, radius, &breaks, 2_000_000);
        let rel = (got - want).abs() / want;
        assert!(rel < 1e-3, "n={n} sigma={sigma} s={s} t={t}: {got} vs {want}");
        done += 1;
    }
}

#[test]
fn bump_example_within_one_percent() {
    let sol = free_wave(1, 0.0, RadialProfile::zero(), RadialProfile::bump(1.0).unwrap()).unwrap();
    let got = integrate_l2_squared(&sol, 50.0, 1e-8).unwrap().value().unwrap();
    let f = |r: f64| {
        let v = (r * 50.0).sin() / r;
        v * v
    };
    let want = 2.0 * trapezoid_oracle(f, 1.0, 50.0, 1.0, &[], 10_000_000);
    assert!((got - want).abs() < 0.01 * want);
    assert!((got - want).abs() < 1e-6 * want, "{got} vs {want}");
}
