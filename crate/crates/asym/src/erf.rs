use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use theta_asym_core::quad::{adaptive, AdaptiveConfig};
use theta_asym_core::{LogComplex, I};

use crate::{AsymError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErfMode {
    /// `2/√π ∫₀^w e^{−t²} dt` along the straight segment, by adaptive quadrature.
    Reference,
    /// `erf(iz) ≈ i e^{z²}/(√π z)` for `w = iz` with `|Arg(±z)| < π/4`, `|z| ≥ 3`.
    Asymptotic,
}

/// `erf(w)` in the log domain.
pub fn erf_eval(w: Complex64, mode: ErfMode) -> Result<LogComplex> {
    match mode {
        ErfMode::Reference => erf_reference(w),
        ErfMode::Asymptotic => {
            let z = -I * w;
            let arg = z.arg().abs();
            let in_sector = arg < FRAC_PI_4 || arg > 3.0 * FRAC_PI_4;
            if !in_sector || z.norm() < 3.0 {
                return Err(AsymError::ArgOutOfSector { re: w.re, im: w.im });
            }
            Ok(LogComplex::exp(z * z) * LogComplex::from_complex(I / (PI.sqrt() * z)))
        }
    }
}

fn erf_reference(w: Complex64) -> Result<LogComplex> {
    if w.re == 0.0 && w.im == 0.0 {
        return Ok(LogComplex::ZERO);
    }
    let w2 = w * w;
    let cfg = AdaptiveConfig { rel_tol: 1e-14, ..Default::default() };
    // erf(w) = 2w/√π ∫₀¹ e^{−s²w²} ds. When Re w² < 0 the integrand peaks at
    // s = 1, so e^{−w²} is factored out.
    let grows = w2.re < 0.0;
    let r = adaptive(
        |s| {
            let e = if grows { (1.0 - s * s) * w2 } else { -s * s * w2 };
            e.exp()
        },
        &[0.0, 1.0],
        &cfg,
    );
    if !r.converged {
        return Err(AsymError::QuadratureDivergence(format!("erf reference at {w}")));
    }
    let scale = if grows { LogComplex::exp(-w2) } else { LogComplex::ONE };
    Ok(scale * LogComplex::from_complex(r.value * w * (2.0 / PI.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_matches_the_faddeeva_erf() {
        for w in [Complex64::new(0.3, 0.1), Complex64::new(1.5, -0.7), Complex64::new(-2.0, 2.5)] {
            let a = erf_reference(w).unwrap().to_complex();
            let b = theta_asym_core::special::erf(w);
            assert!((a - b).norm() < 1e-12 * b.norm(), "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn asymptotic_rejects_the_wrong_sector() {
        // w = 5: z = −5i, Arg z = −π/2
        assert!(matches!(erf_eval(Complex64::new(5.0, 0.0), ErfMode::Asymptotic), Err(AsymError::ArgOutOfSector { .. })));
        assert!(erf_eval(Complex64::new(0.0, 1.0), ErfMode::Asymptotic).is_err());
    }
}
