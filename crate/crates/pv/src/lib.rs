//! Principal-value Fourier coefficients `f_m(τ)` of theta quotients along
//! `z ∈ [0,1]`, and their q-expansion coefficients `c(m,ν)` by Cauchy's
//! formula on the circle `|q| = e^{−β}`.
//!
//! A combinatorial fixture (the crank generating function, no real poles)
//! checks the whole pipeline against exact partition counts.

pub mod cauchy;
pub mod contour;
pub mod crank;
mod error;
pub mod fm;
pub mod form;
pub mod poles;
pub mod schedule;

pub use cauchy::{cauchy_extract, cauchy_extract_with, default_beta, normalized_integrand, on_lattice, saddle_beta, CauchyOptions, CoefficientRecord, Provenance};
pub use contour::{semicircle_g, ContourPlan, Side};
pub use crank::{crank_oracle, partition_count, CrankForm};
pub use error::PvError;
pub use fm::{fm_pv, fm_pv_with, fm_segments_only, FmValue, PvMethod, QuadratureConfig};
pub use form::{FormSlice, JacobiForm, Kernel, QuotientForm};
pub use poles::{locate_poles, residue_at_pole, PoleSet};
pub use schedule::m_schedule;

pub type Result<T> = std::result::Result<T, PvError>;
