use std::f64::consts::PI;

use num_complex::Complex64;
use theta_asym_core::{ln, LogComplex, I};
use theta_modular::QuotientSpec;

use crate::constants::constants_unchecked;
use crate::{ratio_f64, AsymError, Result};

fn check_eps(eps: Complex64) -> Result<()> {
    if eps.re > 0.0 && eps.im.is_finite() {
        Ok(())
    } else {
        Err(AsymError::DomainError(format!("need re(eps) > 0, got {eps}")))
    }
}

/// `Λ₁ ε^{1−Σα/2} e^{2π²Λ₂/ε}`, the near-pole main term of `f_m(iε/2π)`.
pub fn fm_near_pole_main(spec: &QuotientSpec, eps: Complex64) -> Result<LogComplex> {
    check_eps(eps)?;
    let k = constants_unchecked(spec);
    let l = k.eps_power() * ln(eps) + 2.0 * PI * PI * k.lambda2_f64() / eps;
    Ok(k.lambda1 * LogComplex::exp(l))
}

/// `Ω = (−1)^{Σα} (ε/2π)^{−Σα/2} c^{1/2} Π a_j^{−α_j/2} e^{(2π²/ε)(1/(4c) − 1/4 − Σα_j/(12a_j))}`.
pub fn omega(spec: &QuotientSpec, eps: Complex64) -> Result<LogComplex> {
    check_eps(eps)?;
    let sa = spec.sum_alpha();
    let c = spec.c() as f64;
    let mut l = -0.5 * sa as f64 * ln(eps / (2.0 * PI)) + Complex64::new(0.5 * c.ln(), 0.0);
    for (a, al) in spec.eta_factors() {
        l -= 0.5 * *al as f64 * (*a as f64).ln();
    }
    let e = 1.0 / (4.0 * c) - 0.25 - ratio_f64(spec.sum_alpha_over_a()) / 12.0;
    l += 2.0 * PI * PI * e / eps;
    let sign = if sa % 2 == 0 { LogComplex::ONE } else { -LogComplex::ONE };
    Ok(sign * LogComplex::exp(l))
}

/// The main term before dropping `4πmε`:
/// `−iΩ e^{(2π²/ε)(b²/c − b/c)} / ((4iπ²/ε)(2b²/c − 1 − b/c) − 4πm)`.
pub fn near_pole_presimplified(spec: &QuotientSpec, m: f64, eps: Complex64) -> Result<LogComplex> {
    let om = omega(spec, eps)?;
    let (b, c) = (spec.b() as f64, spec.c() as f64);
    let num = LogComplex::exp(2.0 * PI * PI * (b * b / c - b / c) / eps);
    let den = 4.0 * I * PI * PI * (2.0 * b * b / c - 1.0 - b / c) / eps - 4.0 * PI * m;
    Ok(LogComplex::from_complex(-I) * om * num / LogComplex::from_complex(den))
}
