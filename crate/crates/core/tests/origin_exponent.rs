mod common;

use common::*;
use wavenorm_core::models::free_wave;
use wavenorm_core::*;

/// Contribution of the decade `[a, 10a]` to `∫|û|² r^{n-1} dr`, on a dense
/// log grid.
fn decade(sol: &SpectralSolution, t: f64, a: f64) -> f64 {
    let n = sol.spec().n;
    let k = 4000;
    let (la, lb) = (a.ln(), (10.0 * a).ln());
    let h = (lb - la) / k as f64;
    let g = |x: f64| {
        let r = x.exp();
        evaluate_solution_hat(sol, t, r).unwrap().norm_sqr() * r.powi(n as i32 - 1) * r
    };
    let mut acc = 0.5 * (g(la) + g(lb));
    for i in 1..k {
        acc += g(la + h * i as f64);
    }
    acc * h
}

#[test]
fn origin_exponent_matches_brute_force_on_grid() {
    let t = 1.0;
    for n in 1..=4u32 {
        for s in [0.0, 0.5, 1.0] {
            for m in [0u32, 1] {
                let phi1 = RadialProfile::monomial_gauss(m, 1.0).unwrap();
                let sol = free_wave(n, s, RadialProfile::zero(), phi1).unwrap();
                let e = origin_exponent(&sol, t);
                assert_eq!(e, n as f64 - 1.0 - 2.0 * s + 2.0 * m as f64);

                // Local slope of the integrand on [1e-8, 1e-7].
                let f = |r: f64| evaluate_solution_hat(&sol, t, r).unwrap().norm_sqr() * r.powi(n as i32 - 1);
                let slope = (f(1e-7) / f(1e-8)).log10();
                assert!((slope - e).abs() < 1e-3, "n={n} s={s} m={m}: slope {slope} vs {e}");

                // Integrability: an r^{-1} or worse integrand gives equal or
                // growing decade contributions towards the origin.
                let near = decade(&sol, t, 1e-8);
                let far = decade(&sol, t, 1e-3);
                let brute_divergent = near / far > 0.1;
                assert_eq!(brute_divergent, e <= -1.0, "n={n} s={s} m={m}: {near} vs {far}");

                let res = integrate_l2_squared(&sol, t, 1e-6).unwrap();
                assert_eq!(res.is_divergent(), e <= -1.0, "n={n} s={s} m={m}");
                if let Verdict::Divergent { origin_exponent } = res.verdict {
                    assert_eq!(origin_exponent, e);
                }
            }
        }
    }
}

#[test]
fn spec_origin_exponent_examples() {
    let g = gauss(1.0);
    let sol = free_wave(2, 1.0, RadialProfile::zero(), g.clone()).unwrap();
    assert_eq!(origin_exponent(&sol, 1.0), -1.0);
    assert!(integrate_l2_squared(&sol, 1.0, 1e-6).unwrap().is_divergent());
    let sol = free_wave(1, 0.0, RadialProfile::zero(), g).unwrap();
    assert_eq!(origin_exponent(&sol, 1.0), 0.0);
    let m1 = RadialProfile::monomial_gauss(1, 1.0).unwrap();
    let sol = free_wave(1, 1.0, RadialProfile::zero(), m1).unwrap();
    assert_eq!(origin_exponent(&sol, 1.0), 0.0);
    assert!(!integrate_l2_squared(&sol, 1.0, 1e-6).unwrap().is_divergent());
}

#[test]
fn singular_part_scales_like_t_r_to_m_minus_s() {
    for (m, s) in [(0u32, 0.0), (1, 0.5), (2, 1.0)] {
        let phi1 = RadialProfile::monomial_gauss(m, 1.0).unwrap();
        let sol = free_wave(3, s, RadialProfile::zero(), phi1).unwrap();
        for t in [0.5, 3.0, 20.0] {
            let r = 1e-7;
            let v = evaluate_solution_hat(&sol, t, r).unwrap().re;
            let ratio = v / (t * r.powf(m as f64 - s));
            assert!((ratio - 1.0).abs() < 1e-9, "m={m} s={s} t={t}: {ratio}");
        }
    }
}
