use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use theta_asym_core::LogComplex;
use theta_modular::QuotientSpec;

use crate::{ratio_f64, AsymError, Result};

/// `Λ₁`, `Λ₂` and the growth base `1 − Σ α_j/(12a_j)` of a quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticConstants {
    /// `(−1)^{3/2+Σα} (2π)^{Σα/2} c^{1/2} Π a_j^{−α_j/2} / (4iπ²(2b²/c − 1 − b/c))`,
    /// principal branch.
    pub lambda1: LogComplex,
    /// `b²/c − b/c + 1/(4c) − 1/4 − Σ α_j/(12a_j)`.
    pub lambda2: Rational64,
    pub sum_alpha: i32,
    pub growth_base: Rational64,
    /// `b` even and `0 < growth_base < √Λ₂`.
    pub window_ok: bool,
}

impl AsymptoticConstants {
    pub fn lambda2_f64(&self) -> f64 {
        ratio_f64(self.lambda2)
    }

    pub fn growth_base_f64(&self) -> f64 {
        ratio_f64(self.growth_base)
    }

    /// `1 − Σα/2`, the power of `ε` in the near-pole main term.
    pub fn eps_power(&self) -> f64 {
        1.0 - 0.5 * self.sum_alpha as f64
    }
}

/// Constants without the window check.
pub fn constants_unchecked(spec: &QuotientSpec) -> AsymptoticConstants {
    let b = Rational64::from_integer(spec.b() as i64);
    let c = Rational64::from_integer(spec.c() as i64);
    let one = Rational64::from_integer(1);
    let sao12 = spec.sum_alpha_over_a() / 12;
    let lambda2 = b * b / c - b / c + one / (c * 4) - Rational64::new(1, 4) - sao12;
    let growth_base = one - sao12;
    let sum_alpha = spec.sum_alpha();

    let (bf, cf) = (spec.b() as f64, spec.c() as f64);
    let d = 2.0 * bf * bf / cf - 1.0 - bf / cf;
    let mut log_mag = 0.5 * sum_alpha as f64 * (2.0 * PI).ln() + 0.5 * cf.ln();
    for (a, al) in spec.eta_factors() {
        log_mag -= 0.5 * *al as f64 * (*a as f64).ln();
    }
    // (−1)^{3/2+Σα} = e^{iπ(3/2+Σα)}; the denominator 4iπ²d adds the phase of 1/(i·d).
    let sign = LogComplex::new(0.0, PI * (1.5 + sum_alpha as f64));
    let denom = LogComplex::from_complex(Complex64::new(0.0, 4.0 * PI * PI * d));
    let lambda1 = sign * LogComplex::new(log_mag, 0.0) / denom;

    let zero = Rational64::from_integer(0);
    let window_ok = spec.even_b() && growth_base > zero && lambda2 > zero && growth_base * growth_base < lambda2;
    AsymptoticConstants { lambda1, lambda2, sum_alpha, growth_base, window_ok }
}

/// Constants of a spec for which the main-term asymptotics apply.
pub fn constants(spec: &QuotientSpec) -> Result<AsymptoticConstants> {
    let k = constants_unchecked(spec);
    if !spec.even_b() {
        return Err(AsymError::WindowViolation(format!("b = {} is odd", spec.b())));
    }
    if !k.window_ok {
        return Err(AsymError::WindowViolation(format!(
            "need 0 < 1 - sum(alpha/12a) = {} < sqrt(Lambda2) = {:.6}",
            k.growth_base,
            k.lambda2_f64().max(0.0).sqrt()
        )));
    }
    Ok(k)
}

/// A point `ε = β(1 + i x m^{−1/3})` of the circle-method parametrization,
/// with `β = π√(2/n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleParams {
    pub n: f64,
    pub m: f64,
    pub delta: f64,
    pub x: f64,
}

impl CircleParams {
    pub fn new(n: f64, m: f64, delta: f64, x: f64) -> Result<Self> {
        if !(n > 0.0) || !(m > 0.0) || !(delta > 0.0) {
            return Err(AsymError::DomainError(format!("need n, m, delta > 0, got n = {n}, m = {m}, delta = {delta}")));
        }
        let p = CircleParams { n, m, delta, x };
        if !(x.abs() <= p.x_max()) {
            return Err(AsymError::DomainError(format!("|x| = {} exceeds pi m^(1/3)/beta = {}", x.abs(), p.x_max())));
        }
        Ok(p)
    }

    pub fn beta(&self) -> f64 {
        PI * (2.0 / self.n).sqrt()
    }

    pub fn x_max(&self) -> f64 {
        PI * self.m.cbrt() / self.beta()
    }

    pub fn eps(&self) -> Complex64 {
        Complex64::new(self.beta(), self.beta() * self.x / self.m.cbrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_params_bounds() {
        let p = CircleParams::new(1600.0, 8.0, 0.05, 1.0).unwrap();
        assert_eq!(p.eps().re, p.beta());
        assert!((p.eps().im - p.beta() / 2.0).abs() < 1e-15);
        assert!(CircleParams::new(1600.0, 8.0, 0.05, p.x_max() * 1.01).is_err());
    }
}
