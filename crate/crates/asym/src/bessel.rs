use theta_asym_core::special::{bessel_i_leading, bessel_i_series};
use theta_asym_core::LogComplex;

use crate::{AsymError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMode {
    /// Ascending series `Σ_k (x/2)^{2k+ℓ} / (k! Γ(k+ℓ+1))`.
    Reference,
    /// `e^x / √(2πx)`.
    Asymptotic,
}

/// Modified Bessel function `I_ℓ(x)`.
pub fn bessel_i(ell: f64, x: f64, mode: BesselMode) -> Result<LogComplex> {
    if x == 0.0 && mode == BesselMode::Reference {
        let integer = ell == ell.floor();
        return match () {
            _ if ell == 0.0 => Ok(LogComplex::ONE),
            _ if ell > 0.0 || integer => Ok(LogComplex::ZERO),
            _ => Err(AsymError::DomainError(format!("I_{ell}(0) is infinite"))),
        };
    }
    if !(x > 0.0) || !x.is_finite() || !ell.is_finite() {
        return Err(AsymError::DomainError(format!("I_ell(x) needs finite ell and x > 0, got ell = {ell}, x = {x}")));
    }
    Ok(match mode {
        BesselMode::Reference => bessel_i_series(ell, x),
        BesselMode::Asymptotic => bessel_i_leading(x),
    })
}
