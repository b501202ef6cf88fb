//! Coefficients `c(m,ν) = (1/2π) ∫_{−π}^{π} f_m(τ(θ)) e^{(β−iθ)ν} dθ` with
//! `τ(θ) = (θ + iβ)/2π`, i.e. on the circle `q = e^{−β+iθ}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use theta_asym_core::quad::composite_nodes;
use theta_asym_core::LogComplex;
use theta_modular::UpperHalfPoint;

use crate::fm::{fm_pv_with, FmValue, PvMethod, QuadratureConfig};
use crate::form::{JacobiForm, Kernel};
use crate::{PvError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Provenance {
    #[default]
    PvCauchy,
    OracleEnumeration,
    MainTerm,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::PvCauchy => "pv_cauchy",
            Provenance::OracleEnumeration => "oracle_enumeration",
            Provenance::MainTerm => "main_term",
        }
    }
}

/// One coefficient with a relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRecord {
    pub m: f64,
    pub nu: f64,
    pub value: LogComplex,
    pub err_estimate: f64,
    pub provenance: Provenance,
    /// `ν` is not in `δ_q + ℤ`; the value is reported but is not a coefficient.
    pub off_lattice: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CauchyOptions {
    /// Defaults to the kernel matching the parity of the form.
    pub kernel: Option<Kernel>,
    pub method: PvMethod,
}

/// Saddle radius `π√(2/ν)`, with `ν` floored at 1.
pub fn default_beta(nu: f64) -> f64 {
    PI * (2.0 / nu.max(1.0)).sqrt()
}

/// Radius minimizing `ln|f_m(iβ/2π)| + βν`, the peak of the q-circle integrand.
///
/// Found by golden-section search in `ln β` around [`default_beta`]. When the
/// true growth of `f_m` is slower than the saddle radius assumes, this keeps
/// the integrand at the size of the coefficient instead of far above it.
pub fn saddle_beta<F: JacobiForm>(form: &F, m: f64, nu: f64, quad: &QuadratureConfig) -> Result<f64> {
    let kernel = form.default_kernel();
    let phi = |lb: f64| -> Result<f64> {
        let beta = lb.exp();
        let tau = UpperHalfPoint::new(Complex64::new(0.0, beta / (2.0 * PI)))?;
        Ok(fm_pv_with(form, m, tau, quad, kernel, PvMethod::PoleSubtraction)?.value.log_mag + beta * nu)
    };
    // Covers growth constants from 1/20 to 2.7 times the one the default assumes.
    let b0 = default_beta(nu).ln();
    let (mut lo, mut hi) = (b0 - 1.5, b0 + 0.5);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (phi(x1)?, phi(x2)?);
    while hi - lo > 1e-3 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = phi(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = phi(x2)?;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Whether `ν − δ_q` is an integer.
pub fn on_lattice(delta_q: Rational64, nu: f64) -> bool {
    let d = nu - *delta_q.numer() as f64 / *delta_q.denom() as f64;
    (d - d.round()).abs() < 1e-9
}

/// Number of Gauss–Legendre panels on `[−π, π]`.
///
/// The normalized integrand carries frequencies up to about `ν`; the default
/// spends about `5ν` fine nodes. The count is even so the coarse rule can use
/// every other panel width.
pub fn theta_panels(nu: f64, quad: &QuadratureConfig) -> usize {
    let order = quad.nodes_per_panel.max(2);
    let p = if quad.theta_nodes > 0 {
        quad.theta_nodes.div_ceil(order)
    } else {
        (2.0 * PI * nu.max(1.0) / (1.25 * order as f64)).ceil() as usize
    };
    (p.max(8) + 1) & !1
}

pub fn cauchy_extract<F: JacobiForm>(form: &F, m: f64, nu: f64, beta: f64, quad: &QuadratureConfig) -> Result<CoefficientRecord> {
    cauchy_extract_with(form, m, nu, beta, quad, &CauchyOptions::default())
}

/// `ln` of the normalized integrand `f_m(τ(θ)) e^{(β−iθ)ν}`.
pub fn normalized_integrand<F: JacobiForm>(form: &F, m: f64, nu: f64, beta: f64, theta: f64, quad: &QuadratureConfig, opts: &CauchyOptions) -> Result<(LogComplex, f64)> {
    let kernel = opts.kernel.unwrap_or_else(|| form.default_kernel());
    let tau = UpperHalfPoint::new(Complex64::new(theta, beta) / (2.0 * PI))?;
    let FmValue { value, err_log } = fm_pv_with(form, m, tau, quad, kernel, opts.method)?;
    let factor = LogComplex::new(beta * nu, -theta * nu);
    Ok((value * factor, err_log + beta * nu))
}

/// `c(m,ν)` by composite Gauss–Legendre on `θ ∈ [−π, π]`.
///
/// The error estimate compares against the same rule on half as many panels
/// and adds the propagated `z`-quadrature error. Node values may be
/// computed in parallel; the sum is always taken in node order.
pub fn cauchy_extract_with<F: JacobiForm>(form: &F, m: f64, nu: f64, beta: f64, quad: &QuadratureConfig, opts: &CauchyOptions) -> Result<CoefficientRecord> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(PvError::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    if !nu.is_finite() || !m.is_finite() {
        return Err(PvError::InvalidInput("m and nu must be finite".into()));
    }
    let panels = theta_panels(nu, quad);
    let order = quad.nodes_per_panel.max(2);
    let fine = composite_nodes(-PI, PI, panels, order);
    let coarse = composite_nodes(-PI, PI, panels / 2, order);
    let nodes: Vec<(f64, f64)> = fine.iter().chain(&coarse).copied().collect();
    let values: Vec<(LogComplex, f64)> = nodes
        .par_iter()
        .map(|(theta, _)| normalized_integrand(form, m, nu, beta, *theta, quad, opts))
        .collect::<Result<_>>()?;
    let (fv, cv) = values.split_at(fine.len());
    let weigh = |nodes: &[(f64, f64)], vals: &[(LogComplex, f64)]| {
        LogComplex::sum(nodes.iter().zip(vals).map(|((_, w), (v, _))| v.scale(Complex64::new(w / (2.0 * PI), 0.0))))
    };
    let value = weigh(&fine, fv);
    let rough = weigh(&coarse, cv);
    let prop = LogComplex::sum(fine.iter().zip(fv).map(|((_, w), (_, e))| LogComplex::new(e + (w / (2.0 * PI)).ln(), 0.0)));
    let delta = value.sub(rough);
    let err_estimate = if value.is_zero() {
        f64::INFINITY
    } else {
        (delta.log_mag - value.log_mag).exp() + (prop.log_mag - value.log_mag).exp()
    };
    if !value.is_finite() && !value.is_zero() {
        return Err(PvError::QuadratureDivergence(format!("non-finite coefficient at m = {m}, nu = {nu}")));
    }
    Ok(CoefficientRecord {
        m,
        nu,
        value,
        err_estimate,
        provenance: Provenance::PvCauchy,
        off_lattice: !on_lattice(form.delta_q(), nu),
    })
}
