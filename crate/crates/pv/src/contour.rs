//! Deleted-neighbourhood contours around the real poles.

use std::f64::consts::PI;

use num_complex::Complex64;
use theta_asym_core::quad::AdaptiveConfig;
use theta_asym_core::LogComplex;
use theta_modular::UpperHalfPoint;

use crate::fm::{integrate, Integrand};
use crate::form::{FormSlice, JacobiForm, Kernel};
use crate::{PvError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// `[0,1]` with the windows `(h_ℓ − r, h_ℓ + r)` removed.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPlan {
    pub r: f64,
    pub poles: Vec<f64>,
    pub segments: Vec<(f64, f64)>,
}

impl ContourPlan {
    pub fn new(poles: &[f64], r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(PvError::PolePlanInvalid(format!("radius must be positive, got {r}")));
        }
        if let (Some(first), Some(last)) = (poles.first(), poles.last()) {
            if r >= *first || r >= 1.0 - last {
                return Err(PvError::PolePlanInvalid(format!("r = {r} reaches an endpoint of [0,1]")));
            }
            for w in poles.windows(2) {
                if r >= 0.5 * (w[1] - w[0]) {
                    return Err(PvError::PolePlanInvalid(format!("r = {r} is not below half the pole gap {}", w[1] - w[0])));
                }
            }
        }
        let mut segments = Vec::with_capacity(poles.len() + 1);
        let mut lo = 0.0;
        for h in poles {
            segments.push((lo, h - r));
            lo = h + r;
        }
        segments.push((lo, 1.0));
        Ok(ContourPlan { r, poles: poles.to_vec(), segments })
    }
}

/// `∫_{γ±} F(z) K(m,z) dz · e^{−shift}` over the semicircle of radius `r`
/// around `h`, traversed from `h − r` to `h + r`.
pub(crate) fn semicircle_shifted<S: FormSlice>(g: &Integrand<'_, S>, h: f64, r: f64, side: Side, cfg: &AdaptiveConfig) -> Result<(Complex64, f64)> {
    // φ runs from π down to 0 above the pole, from −π up to 0 below it.
    let sigma = match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    integrate(
        |s| {
            let e = Complex64::from_polar(1.0, sigma * (PI - s));
            let dz = Complex64::new(0.0, -sigma * r) * e;
            let (v, noise) = g.near(h, e * r)?;
            Ok((v * dz, noise * r))
        },
        &[0.0, PI],
        cfg,
        || format!("semicircle at h = {h}, r = {r}"),
    )
}

/// `G±_{ℓ,r}`: the semicircle integral around the `ell`-th pole with kernel `e^{−2πimz}`.
pub fn semicircle_g<F: JacobiForm>(form: &F, ell: usize, tau: UpperHalfPoint, r: f64, side: Side, m: f64) -> Result<LogComplex> {
    let poles = form.poles();
    let h = *poles.get(ell).ok_or_else(|| PvError::InvalidInput(format!("pole index {ell} out of range")))?;
    ContourPlan::new(&poles, r)?;
    let slice = form.slice(tau)?;
    let shift = slice.residue_log(h)?.log_mag;
    let cfg = AdaptiveConfig { rel_tol: 1e-13, ..Default::default() };
    let g = Integrand { slice: &slice, m, kernel: Kernel::Exponential, shift };
    let (v, _) = semicircle_shifted(&g, h, r, side, &cfg)?;
    Ok(LogComplex::from_complex(v) * LogComplex::new(shift, 0.0))
}
