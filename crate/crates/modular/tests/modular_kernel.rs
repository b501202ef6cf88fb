use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use theta_modular::theta::theta_jet;
use theta_modular::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn tau(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint::new(Complex64::new(re, im)).unwrap()
}

fn budget() -> TruncationBudget {
    TruncationBudget::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Defining products with a fixed, generous number of factors.
fn naive_eta(t: Complex64) -> Complex64 {
    let q = (2.0 * PI * I * t).exp();
    let mut p = (2.0 * PI * I * t / 24.0).exp();
    let mut qn = q;
    for _ in 0..3000 {
        p *= 1.0 - qn;
        qn *= q;
    }
    p
}

fn naive_theta(z: Complex64, t: Complex64) -> Complex64 {
    let q = (2.0 * PI * I * t).exp();
    let zeta = (2.0 * PI * I * z).exp();
    let mut p = I * (PI * I * z).exp() * (PI * I * t / 4.0).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 0..3000 {
        let next = qn * q;
        p *= (1.0 - next) * (1.0 - zeta * next) * (1.0 - qn / zeta);
        qn = next;
    }
    p
}

fn e1() -> QuotientSpec {
    QuotientSpec::new(vec![(1, -1)], 2, 1).unwrap()
}

fn e2() -> QuotientSpec {
    QuotientSpec::new(vec![(1, -1)], 4, 3).unwrap()
}

#[test]
fn eta_at_i_paths_agree() {
    let b = budget();
    let d = eta_log(tau(0.0, 1.0), &b, EvalPath::Direct).unwrap().to_complex();
    let m = eta_log(tau(0.0, 1.0), &b, EvalPath::Modular).unwrap().to_complex();
    assert!(rel(d, m) < 1e-15);
    assert_relative_eq!(d.re, naive_eta(I).re, max_relative = 1e-14);
    assert_relative_eq!(d.re, 0.768_225_4, epsilon = 1e-7);
}

#[test]
fn eta_inversion_at_one_plus_i() {
    let t = Complex64::new(1.0, 1.0);
    let lhs = naive_eta(t);
    let rhs = (I / t).sqrt() * naive_eta(-t.inv());
    assert!(rel(lhs, rhs) < 1e-12);
    let ours = eval_eta(tau(1.0, 1.0), &budget()).unwrap();
    assert!(rel(ours, lhs) < 1e-13);
}

#[test]
fn eta_modular_path_matches_raw_product() {
    for (re, im) in [(0.1, 0.3), (-0.37, 0.12), (0.25, 0.05), (0.0, 0.2)] {
        let t = Complex64::new(re, im);
        let d = eta_log(tau(re, im), &budget(), EvalPath::Direct).unwrap().to_complex();
        let m = eta_log(tau(re, im), &budget(), EvalPath::Modular).unwrap().to_complex();
        let n = naive_eta(t);
        assert!(rel(d, n) < 1e-12, "direct {d} vs {n}");
        assert!(rel(m, n) < 1e-12, "modular {m} vs {n}");
    }
}

#[test]
fn theta_against_raw_product() {
    for (z, t) in [
        (Complex64::new(0.3, 0.0), Complex64::new(0.1, 0.2)),
        (Complex64::new(-0.7, 0.05), Complex64::new(0.4, 0.15)),
        (Complex64::new(1.3, -0.2), Complex64::new(-0.2, 0.6)),
        (Complex64::new(0.13, 0.0), Complex64::new(0.0, 0.07)),
    ] {
        let n = naive_theta(z, t);
        let ut = UpperHalfPoint::new(t).unwrap();
        for path in [EvalPath::Direct, EvalPath::Modular] {
            for method in [ThetaMethod::Product, ThetaMethod::Sum] {
                let v = theta_jet(EllipticArg::new(z), ut, &budget(), method, path).unwrap().value();
                assert!(rel(v, n) < 1e-11, "{path:?} {method:?} at z={z}, tau={t}: {v} vs {n}");
            }
        }
    }
}

#[test]
fn theta_inversion_formula() {
    // ϑ(z;τ) = (i/√(−iτ)) e^{−πiz²/τ} ϑ(z/τ;−1/τ), both sides from raw products
    let pts = [
        (0.21, 0.0, 0.3, 0.9),
        (0.05, 0.1, -0.2, 1.1),
        (0.4, -0.05, 0.0, 1.0),
        (0.33, 0.02, 0.45, 0.95),
    ];
    for (zr, zi, tr, ti) in pts {
        let z = Complex64::new(zr, zi);
        let t = Complex64::new(tr, ti);
        let lhs = naive_theta(z, t);
        let rhs = I / (-I * t).sqrt() * (-PI * I * z * z / t).exp() * naive_theta(z / t, -t.inv());
        assert!(rel(lhs, rhs) < 1e-10);
    }
}

#[test]
fn modular_consistency_twenty_points() {
    // Evaluation through the library on both sides of each transformation.
    let b = budget();
    for k in 0..20 {
        let x = k as f64 / 20.0;
        let t = Complex64::new(-0.5 + x, 0.6 + 0.5 * (3.0 * x).sin().abs());
        let z = Complex64::new(0.37 * x - 0.1, 0.05 * (x - 0.5));
        let ut = UpperHalfPoint::new(t).unwrap();
        let inv = UpperHalfPoint::new(-t.inv()).unwrap();
        let eta = eval_eta(ut, &b).unwrap();
        let eta_inv = eval_eta(inv, &b).unwrap();
        assert!(rel(eta, (I / t).sqrt() * eta_inv) < 1e-10);
        let th = eval_theta(EllipticArg::new(z), ut, &b, ThetaMethod::Product).unwrap();
        let th_inv = eval_theta(EllipticArg::new(z / t), inv, &b, ThetaMethod::Product).unwrap();
        let rhs = I / (-I * t).sqrt() * (-PI * I * z * z / t).exp() * th_inv;
        assert!(rel(th, rhs) < 1e-10, "k = {k}");
    }
}

#[test]
fn derivative_matches_finite_difference() {
    let b = budget();
    let t = tau(0.0, 0.5);
    let w = 0.25;
    let h = 1e-5;
    let f = |x: f64| eval_theta(EllipticArg::real(x), t, &b, ThetaMethod::Product).unwrap();
    let fd = (f(w + h) - f(w - h)) / (2.0 * h);
    let d = theta_derivative(EllipticArg::real(w), t, &b).unwrap();
    assert!((d - fd).norm() / d.norm() < 1e-8);
}

#[test]
fn derivative_is_even() {
    let b = budget();
    let t = tau(0.0, 0.3);
    let p = theta_derivative(EllipticArg::real(0.2), t, &b).unwrap();
    let m = theta_derivative(EllipticArg::real(-0.2), t, &b).unwrap();
    assert!(rel(m, p) < 1e-13);
    assert!(theta_derivative(EllipticArg::real(0.0), t, &b).unwrap().norm() > 1.0);
}

#[test]
fn derivative_through_modular_path_matches_finite_difference() {
    let b = budget();
    let t = tau(0.31, 0.02);
    let w = Complex64::new(0.41, 0.003);
    let h = 1e-6;
    let f = |x: Complex64| theta_jet(EllipticArg::new(x), t, &b, ThetaMethod::Product, EvalPath::Modular).unwrap().value();
    let fd = (f(w + h) - f(w - h)) / (2.0 * h);
    let d = theta_jet(EllipticArg::new(w), t, &b, ThetaMethod::Product, EvalPath::Modular).unwrap().deriv();
    assert!(rel(d, fd) < 1e-7, "{d} vs {fd}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn theta_is_odd(zr in -1.0f64..1.0, zi in -0.3f64..0.3, tr in -0.5f64..0.5, ti in 0.05f64..2.0) {
        let z = Complex64::new(zr, zi * ti);
        let t = tau(tr, ti);
        let b = budget();
        let p = eval_theta(EllipticArg::new(z), t, &b, ThetaMethod::Product).unwrap();
        let m = eval_theta(EllipticArg::new(-z), t, &b, ThetaMethod::Product).unwrap();
        prop_assert!((p + m).norm() <= b.target_rel_err * p.norm());
    }

    #[test]
    fn product_and_sum_agree(zr in -1.0f64..1.0, zi in -0.5f64..0.5, tr in -0.5f64..0.5, ti in 0.05f64..2.0) {
        let z = Complex64::new(zr, zi * ti);
        let t = tau(tr, ti);
        let b = budget();
        let p = eval_theta(EllipticArg::new(z), t, &b, ThetaMethod::Product).unwrap();
        let s = eval_theta(EllipticArg::new(z), t, &b, ThetaMethod::Sum).unwrap();
        prop_assert!((p - s).norm() <= 10.0 * b.target_rel_err * p.norm(), "{} vs {}", p, s);
    }

    #[test]
    fn quotient_real_on_imaginary_axis(z in 0.01f64..0.99, ti in 0.01f64..1.0) {
        prop_assume!(((2.0 * z) - (2.0 * z).round()).abs() > 1e-6);
        let f = eval_quotient(&e1(), EllipticArg::real(z), tau(0.0, ti), &budget()).unwrap();
        prop_assert!(f.im.abs() <= 1e-9 * f.norm());
    }
}

#[test]
fn quotient_symmetries() {
    let b = budget();
    for spec in [e1(), e2()] {
        for (z, t) in [(0.13, tau(0.1, 0.3)), (0.37, tau(-0.2, 0.05)), (0.61, tau(0.0, 0.8))] {
            let f = |x: f64| eval_quotient(&spec, EllipticArg::real(x), t, &b).unwrap();
            assert!(rel(f(-z), f(z)) < 1e-11);
            assert!(rel(f(z + 1.0), -f(z)) < 1e-11);
            assert!(rel(f(1.0 - z), -f(z)) < 1e-11);
        }
    }
}

#[test]
fn quotient_real_at_reference_point() {
    let f = eval_quotient(&e1(), EllipticArg::real(0.13), tau(0.0, 0.25), &budget()).unwrap();
    assert!(f.im.abs() / f.norm() < 1e-10);
}

#[test]
fn quotient_against_raw_products() {
    let spec = e2();
    let (z, t) = (Complex64::new(0.3, 0.01), Complex64::new(0.05, 0.4));
    let expect = naive_eta(t).inv() * naive_theta(z, t) / naive_theta(4.0 * z, 3.0 * t);
    let f = eval_quotient(&spec, EllipticArg::new(z), UpperHalfPoint::new(t).unwrap(), &budget()).unwrap();
    assert!(rel(f, expect) < 1e-11);
}

/// The exact product that multiplies `C` for `0 < z < 1/b`, evaluated directly.
fn correction_product(spec: &QuotientSpec, z: f64, eps: f64) -> f64 {
    let (b, c) = (spec.b() as f64, spec.c() as f64);
    let k = 4.0 * PI * PI / eps;
    let mut p = 1.0;
    for kappa in 1..200 {
        let kf = kappa as f64;
        let mut num = (1.0 - (-k * kf).exp()) * (1.0 - (k * (z - kf)).exp()) * (1.0 - (k * (-z - kf)).exp());
        for (a, al) in spec.eta_factors() {
            num *= (1.0 - (-k * kf / *a as f64).exp()).powi(*al);
        }
        let den = (1.0 - (-k * kf / c).exp()) * (1.0 - (k / c * (b * z - kf)).exp()) * (1.0 - (k / c * (-b * z - kf)).exp());
        p *= num / den;
    }
    p
}

#[test]
fn leading_factor_times_product_is_exact() {
    let b = budget();
    for spec in [e1(), e2()] {
        let zmax = 1.0 / spec.b() as f64;
        for frac in [0.2, 0.5, 0.9] {
            let z = frac * zmax;
            for eps in [0.5, 2.0, 6.0] {
                let t = UpperHalfPoint::from_eps(Complex64::new(eps, 0.0)).unwrap();
                let f = eval_quotient(&spec, EllipticArg::real(z), t, &b).unwrap();
                let c = leading_factor(&spec, z, Complex64::new(eps, 0.0)).unwrap().to_complex();
                let p = correction_product(&spec, z, eps);
                assert!(rel(f, c * p) < 1e-10, "z={z} eps={eps}: f={f} C*P={}", c * p);
            }
        }
    }
}

#[test]
fn leading_factor_ratio_at_n_100() {
    let eps = PI * (2.0f64 / 100.0).sqrt();
    let t = UpperHalfPoint::from_eps(Complex64::new(eps, 0.0)).unwrap();
    let f = eval_quotient(&e1(), EllipticArg::real(0.13), t, &budget()).unwrap();
    let c = leading_factor(&e1(), 0.13, Complex64::new(eps, 0.0)).unwrap().to_complex();
    assert!((f / c - 1.0).norm() <= 1e-8);
    // With the (−1)^{Σα} prefactor the ratio is −1 instead.
    let cv = leading_factor_verbatim_sign(&e1(), 0.13, Complex64::new(eps, 0.0)).unwrap().to_complex();
    assert!((f / cv + 1.0).norm() <= 1e-8);
}

#[test]
fn leading_factor_outside_first_interval_is_rejected() {
    assert!(matches!(leading_factor(&e1(), 0.7, Complex64::new(0.3, 0.0)), Err(ModularError::DomainError(_))));
    assert!(matches!(leading_factor(&e1(), 0.2, Complex64::new(-0.3, 0.0)), Err(ModularError::DomainError(_))));
}

#[test]
fn leading_factor_correction_constant_is_stable() {
    // |f/C − 1| / e^{−4π²M/ε} over a decade of ε, close to the pole where M is small.
    let b = budget();
    let spec = e1();
    let z = 0.45;
    let mz = margin(&spec, z).unwrap().mz;
    let ks: Vec<f64> = [0.25, 0.4, 0.7, 1.2, 2.5]
        .iter()
        .map(|&eps| {
            let t = UpperHalfPoint::from_eps(Complex64::new(eps, 0.0)).unwrap();
            let f = eval_quotient(&spec, EllipticArg::real(z), t, &b).unwrap();
            let c = leading_factor(&spec, z, Complex64::new(eps, 0.0)).unwrap().to_complex();
            (f / c - 1.0).norm() / (-4.0 * PI * PI * mz / eps).exp()
        })
        .collect();
    let lo = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ks.iter().cloned().fold(0.0, f64::max);
    assert!(hi / lo < 10.0, "{ks:?}");
}

#[test]
fn leading_factor_is_continuous_in_eps() {
    let spec = e1();
    let a = leading_factor(&spec, 0.2, Complex64::new(1.0 - 1e-9, 0.0)).unwrap();
    let b = leading_factor(&spec, 0.2, Complex64::new(1.0 + 1e-9, 0.0)).unwrap();
    assert!((a.log_mag - b.log_mag).abs() < 1e-7);
    assert!((a.phase - b.phase).abs() < 1e-12);
}

#[test]
fn leading_factor_exponent_e2() {
    // d ln C / d(1/ε) → 2π²[(4b²z²+1)/(4c) − (4z²+1)/4 − Σα/(12a) + z(1 − b/c)] as ε → 0
    let spec = e2();
    let z = 0.13;
    let (b, c) = (4.0, 3.0);
    let exponent = b * b * z * z / c + 1.0 / (4.0 * c) - z * z - 0.25 + 1.0 / 12.0 + z * (1.0 - b / c);
    let (e1_, e2_) = (0.02, 0.019);
    let l1 = leading_factor(&spec, z, Complex64::new(e1_, 0.0)).unwrap().log_mag;
    let l2 = leading_factor(&spec, z, Complex64::new(e2_, 0.0)).unwrap().log_mag;
    // remove the power (ε/2π)^{1/2}
    let slope = ((l2 - 0.5 * e2_.ln()) - (l1 - 0.5 * e1_.ln())) / (1.0 / e2_ - 1.0 / e1_);
    assert_relative_eq!(slope, 2.0 * PI * PI * exponent, max_relative = 1e-9);
}

#[test]
fn residue_formula_matches_limit() {
    let t = tau(0.0, 0.3);
    let slice = QuotientSlice::new(&e1(), t, &budget()).unwrap();
    let r = slice.residue_log(0.5).unwrap().to_complex();
    let g = |d: f64| slice.eval_log_raw(Complex64::new(0.5 + d, 0.0)).unwrap().to_complex() * d;
    let r1 = (g(1e-4) * 10.0 - g(1e-3)) / 9.0;
    let r2 = (g(1e-5) * 10.0 - g(1e-4)) / 9.0;
    let lim = (r2 * 100.0 - r1) / 99.0;
    assert!(rel(r, lim) < 1e-6);
}

#[test]
fn theta_at_half_period_for_small_tau() {
    // z/τ lands far off the real axis after inversion, where cos(2πz) overflows
    let b = budget();
    for im in [4e-3, 1e-3, 2.5e-4] {
        let t = tau(0.0, im);
        for z in [0.5, 0.4999, 0.3] {
            let arg = EllipticArg::real(z);
            let p = theta_jet(arg, t, &b, ThetaMethod::Product, EvalPath::Auto).unwrap();
            let s = theta_jet(arg, t, &b, ThetaMethod::Sum, EvalPath::Auto).unwrap();
            let (pv, sv) = (p.value_log(), s.value_log());
            assert!(pv.log_mag.is_finite(), "z={z} im={im}");
            assert_relative_eq!(pv.log_mag, sv.log_mag, epsilon = 1e-11);
            // ϑ'/ϑ is of size 1/Im τ; at z = 1/2 it vanishes
            let dp = (p.deriv_log() / pv).to_complex();
            let ds = (s.deriv_log() / sv).to_complex();
            assert!((dp - ds).norm() * im < 1e-9, "z={z} im={im}: {dp} {ds}");
        }
    }
    let slice = QuotientSlice::new(&e2(), tau(0.0, 0.0255 / (2.0 * PI)), &b).unwrap();
    assert!(slice.residue_log(0.5).unwrap().log_mag.is_finite());
}
