mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavenorm_core::make_segments;

#[test]
fn sine_band_holds_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    for _ in 0..100_000 {
        let sigma = [1.0, 2.0, 3.0][rng.gen_range(0..3)];
        let t = 10f64.powf(rng.gen_range(0.0..6.0));
        let j = rng.gen_range(0..=10_000u64);
        let seg = make_segments(&spec(1, sigma, 0.0), t);
        let (a, b) = (seg.nu(j), seg.mu(j));
        let r = a + (b - a) * rng.gen::<f64>();
        let v = (r.powf(sigma) * t).sin().powi(2);
        if v < 0.5 - 1e-12 {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn segments_are_ordered_and_shrink() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2_000 {
        let sigma = rng.gen_range(1.0..4.0);
        let t = 10f64.powf(rng.gen_range(0.0..6.0));
        let seg = make_segments(&spec(2, sigma, 0.0), t);
        let mut prev_len = f64::INFINITY;
        for j in 0..200u64 {
            let (nu, mu, next) = (seg.nu(j), seg.mu(j), seg.nu(j + 1));
            assert!(nu < mu && mu < next);
            assert!(seg.boundary(j) < nu && nu < seg.boundary(j + 1));
            let len = mu - nu;
            assert!(len <= prev_len * (1.0 + 1e-12), "sigma={sigma} j={j}");
            prev_len = len;
        }
    }
}

#[test]
fn unit_sigma_segments_have_constant_length() {
    for t in [1.0, 37.0, 1e5] {
        let seg = make_segments(&spec(1, 1.0, 0.0), t);
        let want = std::f64::consts::PI / (2.0 * t);
        for j in [0u64, 1, 99, 12_345] {
            assert!(((seg.mu(j) - seg.nu(j)) - want).abs() < 1e-12 * (1.0 + seg.mu(j)));
        }
    }
}
