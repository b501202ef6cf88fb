//! Dedekind eta, Jacobi theta and the eta-theta quotients
//! `f(z;τ) = Π η(a_j τ)^{α_j} · ϑ(z;τ) / ϑ(bz;cτ)`.
//!
//! Theta is normalized as
//! `ϑ(z;τ) = i ζ^{1/2} q^{1/8} Π_{n≥1} (1−qⁿ)(1−ζqⁿ)(1−ζ⁻¹qⁿ⁻¹)`, which is odd
//! in `z` and has simple zeros on the lattice `ℤ + τℤ`. Evaluation for small
//! `Im τ` goes through `SL₂(ℤ)` reduction so that only a handful of product
//! factors are ever needed.

mod error;
pub mod eta;
pub mod quotient;
pub mod theta;

pub use error::ModularError;
pub use eta::{eta_log, eval_eta};
pub use quotient::{leading_factor, margin, leading_factor_verbatim_sign, eval_quotient, Margin, QuotientSlice, QuotientSpec};
pub use theta::{eval_theta, theta_derivative, theta_jet, ThetaJet, ThetaMethod};

use num_complex::Complex64;
use theta_asym_core::TAU;

pub type Result<T> = std::result::Result<T, ModularError>;

/// A point `τ` of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    tau: Complex64,
}

impl UpperHalfPoint {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(ModularError::InvalidPoint { im: tau.im });
        }
        Ok(UpperHalfPoint { tau })
    }

    /// `τ = iε/2π`.
    pub fn from_eps(eps: Complex64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 1.0) * eps / TAU)
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn q(&self) -> Complex64 {
        (Complex64::new(0.0, TAU) * self.tau).exp()
    }

    /// `ε = −2πiτ`.
    pub fn eps(&self) -> Complex64 {
        Complex64::new(0.0, -TAU) * self.tau
    }
}

/// Elliptic variable `z` with `ζ = e^{2πiz}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArg {
    pub z: Complex64,
}

impl EllipticArg {
    pub fn new(z: Complex64) -> Self {
        EllipticArg { z }
    }

    pub fn real(x: f64) -> Self {
        EllipticArg { z: Complex64::new(x, 0.0) }
    }

    pub fn zeta(&self) -> Complex64 {
        (Complex64::new(0.0, TAU) * self.z).exp()
    }
}

impl From<f64> for EllipticArg {
    fn from(x: f64) -> Self {
        EllipticArg::real(x)
    }
}

impl From<Complex64> for EllipticArg {
    fn from(z: Complex64) -> Self {
        EllipticArg::new(z)
    }
}

/// Truncation limits for the infinite products and the theta series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBudget {
    pub product_terms: usize,
    pub sum_radius: usize,
    pub target_rel_err: f64,
}

impl Default for TruncationBudget {
    fn default() -> Self {
        TruncationBudget { product_terms: 400, sum_radius: 400, target_rel_err: 1e-15 }
    }
}

/// Whether to apply the modular transformations before evaluating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalPath {
    /// Evaluate the defining product or series at the given point.
    Direct,
    /// Reduce `τ` to the fundamental domain (and `z` modulo the lattice) first.
    Modular,
    /// `Modular` when `Im τ < 0.5`, `Direct` otherwise.
    #[default]
    Auto,
}

impl EvalPath {
    pub(crate) fn use_modular(self, im_tau: f64) -> bool {
        match self {
            EvalPath::Direct => false,
            EvalPath::Modular => true,
            EvalPath::Auto => im_tau < 0.5,
        }
    }
}
