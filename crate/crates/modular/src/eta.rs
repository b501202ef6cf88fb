//! Dedekind eta function.

use num_complex::Complex64;
use theta_asym_core::{ln, LogComplex, I, TAU};

use crate::{EvalPath, ModularError, Result, TruncationBudget, UpperHalfPoint};

/// `η(τ)` with the default path (modular reduction when `Im τ < 0.5`).
pub fn eval_eta(tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<Complex64> {
    Ok(eta_log(tau, budget, EvalPath::Auto)?.to_complex())
}

/// `η(τ)` in the log domain.
pub fn eta_log(tau: UpperHalfPoint, budget: &TruncationBudget, path: EvalPath) -> Result<LogComplex> {
    let t = tau.tau();
    if !path.use_modular(t.im) {
        return Ok(LogComplex::exp(eta_product_ln(t, budget)?));
    }
    let (log_factor, reduced) = reduce_eta(t);
    Ok(LogComplex::exp(log_factor + eta_product_ln(reduced, budget)?))
}

/// Bring `τ` into the fundamental domain, returning `(L, τ')` with
/// `η(τ) = e^L η(τ')`.
fn reduce_eta(mut t: Complex64) -> (Complex64, Complex64) {
    let mut log_factor = Complex64::new(0.0, 0.0);
    for _ in 0..10_000 {
        let k = t.re.round();
        if k != 0.0 {
            // η(τ + k) = e^{πik/12} η(τ)
            t -= k;
            log_factor += I * (std::f64::consts::PI * k / 12.0);
        }
        if t.norm_sqr() >= 1.0 - 1e-14 {
            break;
        }
        // η(τ) = (−iτ)^{−1/2} η(−1/τ)
        log_factor -= 0.5 * ln(-I * t);
        t = -t.inv();
    }
    (log_factor, t)
}

/// `ln η(τ)` from the defining product `q^{1/24} Π (1 − qⁿ)`.
pub(crate) fn eta_product_ln(t: Complex64, budget: &TruncationBudget) -> Result<Complex64> {
    let q = (I * TAU * t).exp();
    let cutoff = budget.target_rel_err / budget.product_terms as f64;
    let mut acc = I * TAU * t / 24.0;
    let mut qn = q;
    for _ in 0..budget.product_terms {
        if qn.norm() < cutoff {
            return Ok(acc);
        }
        acc += ln(Complex64::new(1.0, 0.0) - qn);
        qn *= q;
    }
    if qn.norm() < cutoff {
        return Ok(acc);
    }
    Err(ModularError::NonConvergent { what: "eta product", limit: budget.product_terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eta_at_i() {
        let tau = UpperHalfPoint::new(I).unwrap();
        let v = eval_eta(tau, &TruncationBudget::default()).unwrap();
        // Γ(1/4) / (2 π^{3/4})
        assert_relative_eq!(v.re, 0.768_225_422_326_056_7, epsilon = 1e-15);
    }

    #[test]
    fn small_im_tau_needs_the_modular_path() {
        let tau = UpperHalfPoint::new(Complex64::new(0.1, 1e-4)).unwrap();
        let b = TruncationBudget::default();
        assert!(matches!(eta_log(tau, &b, EvalPath::Direct), Err(ModularError::NonConvergent { .. })));
        assert!(eta_log(tau, &b, EvalPath::Modular).is_ok());
    }
}
