//! Closed-form asymptotics for the Fourier coefficients of eta-theta
//! quotients: the growth constants, the near-pole main term, the Gaussian
//! sine integral, `I`-Bessel and error-function asymptotics, the major-arc
//! integral and the away-from-pole bound.
//!
//! Everything that can overflow is returned as a [`LogComplex`].

mod bessel;
mod constants;
mod erf;
mod error;
mod error_arc;
mod gauss_sine;
mod major_arc;
mod near_pole;

pub use bessel::{bessel_i, BesselMode};
pub use constants::{constants, constants_unchecked, AsymptoticConstants, CircleParams};
pub use erf::{erf_eval, ErfMode};
pub use error::AsymError;
pub use error_arc::{error_arc_bound, pq_bound, pq_lemma_bound, ArcBound, ArcExponentTerms};
pub use gauss_sine::{gauss_sine_integral, gauss_sine_integral_log};
pub use major_arc::{main_term, major_arc, major_arc_direct, p_sk, MajorArcMode, PskMode};
pub use near_pole::{fm_near_pole_main, near_pole_presimplified, omega};

pub use theta_asym_core::LogComplex;

pub type Result<T> = std::result::Result<T, AsymError>;

pub(crate) fn ratio_f64(r: num_rational::Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
