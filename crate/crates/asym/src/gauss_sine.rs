use std::f64::consts::PI;

use num_complex::Complex64;
use theta_asym_core::special::faddeeva;
use theta_asym_core::{LogComplex, I};

use crate::{AsymError, Result};

/// `erf(x) = s − s·e^{−x²} w(isx)` with `s = ±1` chosen so that
/// `Re(sx) ≥ 0`, where the Faddeeva function `w` is bounded.
fn erf_split(x: Complex64) -> (f64, Complex64) {
    let s = if x.re > 0.0 || (x.re == 0.0 && x.im >= 0.0) { 1.0 } else { -1.0 };
    (s, faddeeva(I * x * s))
}

/// `∫_t^u e^{H₁z} e^{H₂z²} sin(2πmz) dz` by the closed form in four error
/// functions, evaluated in the log domain.
///
/// Each term `e^{−B²/(4H₂)} erf(X)` is split as above. The constant parts
/// `±e^{−B²/(4H₂)}` can overflow on their own but enter with integer
/// coefficients, so they are combined exactly before exponentiating; the
/// remaining parts carry the exponent `H₂x² + Bx`, which is formed directly.
pub fn gauss_sine_integral_log(h1: Complex64, h2: Complex64, m: f64, t: f64, u: f64) -> Result<LogComplex> {
    if h2.norm() == 0.0 || !h2.is_finite() {
        return Err(AsymError::DomainError(format!("H2 must be finite and nonzero, got {h2}")));
    }
    if !(h1.is_finite() && m.is_finite() && t.is_finite() && u.is_finite()) {
        return Err(AsymError::DomainError("non-finite input".into()));
    }
    if m == 0.0 {
        // The two erf pairs cancel identically; skip the rounding residue.
        return Ok(LogComplex::ZERO);
    }
    let a = (-h2).sqrt();
    let k = Complex64::new(0.0, 2.0 * PI * m);
    // (B, sign of the 2H₂x term) for the two erf families
    let families = [(h1 + k, 1.0), (-h1 + k, -1.0)];
    let mut terms = Vec::with_capacity(6);
    for (b, dir) in families {
        let head = -b * b / (4.0 * h2);
        let mut coeff = 0.0;
        for (x, weight) in [(t, 1.0), (u, -1.0)] {
            let (s, w) = erf_split((2.0 * h2 * x * dir + b) / (2.0 * a));
            coeff += weight * s;
            // e^{head − X²} = e^{H₂x² + dir·b·x}
            let tail = h2 * x * x + b * x * dir;
            terms.push(LogComplex::exp(tail) * LogComplex::from_complex(w * (-weight * s)));
        }
        if coeff != 0.0 {
            terms.push(LogComplex::exp(head) * LogComplex::from_real(coeff));
        }
    }
    let pre = LogComplex::from_complex(-0.25 * I * PI.sqrt() / a);
    Ok(pre * LogComplex::sum(terms))
}

/// [`gauss_sine_integral_log`] as a plain complex number.
pub fn gauss_sine_integral(h1: Complex64, h2: Complex64, m: f64, t: f64, u: f64) -> Result<Complex64> {
    Ok(gauss_sine_integral_log(h1, h2, m, t, u)?.to_complex())
}
