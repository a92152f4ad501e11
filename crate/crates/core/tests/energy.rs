mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavenorm_core::models::{free_wave, sigma_evolution};
use wavenorm_core::*;

fn conservative_configs() -> Vec<(&'static str, SpectralSolution)> {
    let mg = |m, a| RadialProfile::monomial_gauss(m, a).unwrap();
    vec![
        ("wave n=3", free_wave(3, 0.0, RadialProfile::zero(), gauss(1.0)).unwrap()),
        ("wave n=1 both", free_wave(1, 0.0, gauss(1.0), gauss(2.0)).unwrap()),
        ("sigma=2 n=2 s=1/2", sigma_evolution(2, 2.0, 0.5, mg(1, 1.0), mg(1, 1.0)).unwrap()),
    ]
}

#[test]
fn energy_drift_below_gate() {
    for (name, sol) in conservative_configs() {
        let values: Vec<f64> = [1.0, 10.0, 1e2, 1e3, 1e4]
            .iter()
            .map(|&t| integrate_energy(&sol, t, 1e-12).unwrap().value().unwrap())
            .collect();
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min > 0.0);
        assert!(max / min <= 1.0 + 1e-8, "{name}: {values:?}");
    }
}

#[test]
fn energy_examples() {
    let sol = free_wave(3, 0.0, RadialProfile::zero(), gauss(1.0)).unwrap();
    let e1 = integrate_energy(&sol, 1.0, 1e-12).unwrap().value().unwrap();
    let e2 = integrate_energy(&sol, 1e3, 1e-12).unwrap().value().unwrap();
    assert!((e1 / e2 - 1.0).abs() < 1e-10);
    // 4π ∫ r² e^{-2r²} dr = 4π · √(2π)/16
    let exact = 4.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI).sqrt() / 16.0;
    assert!((e1 - exact).abs() < 1e-11 * exact, "{e1} vs {exact}");

    let sol = free_wave(1, 0.0, gauss(1.0), RadialProfile::zero()).unwrap();
    let e = integrate_energy(&sol, 3.0, 1e-12).unwrap().value().unwrap();
    let exact = (2.0 * std::f64::consts::PI).sqrt() / 8.0;
    assert!((e - exact).abs() < 1e-11 * exact, "{e} vs {exact}");
}

#[test]
fn pointwise_energy_is_time_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, sol) in conservative_configs() {
        for _ in 0..2_000 {
            let r = 10f64.powf(rng.gen_range(-4.0..0.7));
            let t1 = 10f64.powf(rng.gen_range(-2.0..6.0));
            let t2 = 10f64.powf(rng.gen_range(-2.0..6.0));
            let a = energy_density(&sol, t1, r).unwrap();
            let b = energy_density(&sol, t2, r).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{name}: r={r} {a} {b}");
        }
    }
}

#[test]
fn bounded_part_respects_declared_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sol = wavenorm_core::models::mgt(2, 0.0, 0.7, gauss(1.0), RadialProfile::zero(), gauss(0.5)).unwrap();
    for _ in 0..10_000 {
        let r = 10f64.powf(rng.gen_range(-4.0..1.0));
        let t = 10f64.powf(rng.gen_range(-3.0..5.0));
        let mut sum = num_complex::Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for (c, p) in sol.bounded_terms() {
            sum += c.eval(t, r) * p.eval(r);
            bound += c.bound() * p.eval(r).abs();
        }
        assert!(sum.norm_sqr().sqrt() <= bound + 1e-12);
    }
}
