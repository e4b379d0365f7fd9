//! Reference-value tests against arbitrary-precision arithmetic.
//!
//! Every constant the library computes in `f64` is rebuilt here from exact
//! rational series (`BigRational`), so the comparisons do not share code —
//! or rounding behavior — with the implementation under test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use transport_core::analysis::{critical_kappa, g_func, lower_bound, minorant_partial_sum};
use transport_core::hierarchy;
use transport_core::integrate::IntegratorConfig;
use transport_core::symbols::frac_laplacian_symbol;
use transport_core::{InitialData, ModelParams};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `e^x` for rational `x` via the Taylor series; 60 terms leave the error far
/// below every tolerance used here.
fn exp_series(x: &BigRational) -> BigRational {
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    for k in 1..=60 {
        term = term * x / big(k);
        sum += &term;
    }
    sum
}

#[test]
fn critical_kappa_matches_the_rational_oracle() {
    // κ_c(δ) = 2δ/(2e - 1).
    let e = exp_series(&BigRational::one());
    let oracle = big(2) / (big(2) * &e - big(1));
    let oracle_f = oracle.to_f64().unwrap();
    assert!((critical_kappa(1.0) - oracle_f).abs() < 1e-12);
    assert!((critical_kappa(0.7) - 0.7 * oracle_f).abs() < 1e-12);
    // Pin the magnitude so a wrong formula cannot pass by accident.
    assert!((oracle_f - 0.45).abs() < 0.01);
}

#[test]
fn threshold_identity_holds_to_forty_digits() {
    // g(1/κ_c) = (1/2 + δ/κ_c) e^{-1} = e·e^{-1} = 1: evaluated entirely in
    // rationals, the truncated series should agree with 1 to ~10⁻⁴⁰.
    let e = exp_series(&BigRational::one());
    let e_inv = exp_series(&ratio(-1, 1));
    let kappa_c = big(2) / (big(2) * &e - big(1));
    let g_at_threshold = (ratio(1, 2) + BigRational::one() / &kappa_c) * &e_inv;
    let err = (g_at_threshold - BigRational::one()).abs();
    let tiny = BigRational::new(BigInt::from(1), BigInt::from(10).pow(40));
    assert!(err < tiny, "residual {}", err.to_f64().unwrap());

    // And the f64 implementation agrees at its own precision.
    let kc = critical_kappa(1.0);
    assert!((g_func(1.0 / kc, 1.0, kc) - 1.0).abs() < 1e-14);
}

#[test]
fn exponential_decay_factor_matches_the_series() {
    // lower_bound(1, t, 1, κ) = e^{-κt}; at κt = 1/2 compare with the exact
    // series for e^{-1/2}.
    let oracle = exp_series(&ratio(-1, 2)).to_f64().unwrap();
    let v = lower_bound(1, 2.0, 1.0, 0.25);
    assert!((v - oracle).abs() < 5e-16 * oracle.abs());
}

#[test]
fn fractional_symbol_matches_newton_sqrt() {
    // |3|^{1/2} via rational Newton iteration x ← (x + 3/x)/2.
    let mut x = big(2);
    for _ in 0..8 {
        x = (&x + big(3) / &x) / big(2);
    }
    let oracle = x.to_f64().unwrap();
    let v = frac_laplacian_symbol(3, 0.5).unwrap();
    assert!((v - oracle).abs() < 5e-16 * oracle);
}

#[test]
fn minorant_limit_matches_the_p_series() {
    // At t = 1/(2δ), κ = 0 the growth factor is exactly 1 and the minorant is
    // 4πδ² Σ 1/n¹⁰. Sum the p-series exactly, then also check the closed form
    // π¹⁰/93555.
    let mut sum = BigRational::zero();
    for n in 1..=400i64 {
        sum += BigRational::new(BigInt::one(), BigInt::from(n).pow(10));
    }
    let partial = sum.to_f64().unwrap();
    let value = minorant_partial_sum(0.5, 1.0, 0.0, 400);
    let expected = 4.0 * std::f64::consts::PI * partial;
    assert!((value - expected).abs() < 1e-13 * expected);

    let zeta10 = std::f64::consts::PI.powi(10) / 93555.0;
    assert!((partial - zeta10).abs() < 1e-14 * zeta10);
}

#[test]
fn low_mode_closed_forms_match_the_integrator() {
    // With N = 3 the truncation is exact, and the first three modes integrate
    // in closed form (κ = 0, A_n = 3/n⁵):
    //     w₁ = 3/2,
    //     w₂(t) = 3/64 + (9/4)t,
    //     w₃(t) = 1/162 + (9/32)t + (27/4)t².
    let init = InitialData::power_law(1.0, 5.0, 3).unwrap();
    let params = ModelParams::main_case(0.0, 1.0, 1.0, 3).unwrap();
    for &(num, den) in &[(1i64, 10i64), (1, 4)] {
        let t_exact = ratio(num, den);
        let t = t_exact.to_f64().unwrap();
        let w2 = ratio(3, 64) + ratio(9, 4) * &t_exact;
        let w3 = ratio(1, 162) + ratio(9, 32) * &t_exact + ratio(27, 4) * &t_exact * &t_exact;

        let cfg = IntegratorConfig::new(1e-3, t).with_tol(1e-12);
        let run = hierarchy::integrate(&init, &params, &cfg).unwrap();
        let last = run.trajectory.final_state().unwrap();
        assert_eq!(last.t, t);
        assert!((last.mode(1).unwrap() - 1.5).abs() < 1e-12);
        assert!(
            (last.mode(2).unwrap() - w2.to_f64().unwrap()).abs() < 1e-9,
            "w2 at t={t}"
        );
        assert!(
            (last.mode(3).unwrap() - w3.to_f64().unwrap()).abs() < 1e-9,
            "w3 at t={t}"
        );
    }
}
