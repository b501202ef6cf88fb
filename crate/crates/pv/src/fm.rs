//! Principal-value Fourier coefficient `f_m(τ) = PV ∫₀¹ F(z;τ) K(m,z) dz`.

use num_complex::Complex64;
use theta_asym_core::quad::{adaptive_with_noise, AdaptiveConfig};
use theta_asym_core::{LogComplex, TAU};
use theta_modular::UpperHalfPoint;

use crate::contour::{semicircle_shifted, ContourPlan, Side};
use crate::form::{FormSlice, JacobiForm, Kernel};
use crate::{PvError, Result};

/// Relative accuracy assumed for one evaluation of the integrand.
const EVAL_NOISE: f64 = 128.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Initial equal panels per contour segment before adaptive refinement.
    pub panels_per_segment: usize,
    /// Gauss–Legendre order.
    pub nodes_per_panel: usize,
    /// Fine-rule node count on the q-circle; 0 picks one from `ν`.
    pub theta_nodes: usize,
    /// Deletion radii; the first one sets the contour plan.
    pub r_sequence: Vec<f64>,
    /// Relative tolerance of the `z`-integral (relative to `∫|F K|`).
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            panels_per_segment: 4,
            nodes_per_panel: 16,
            theta_nodes: 0,
            r_sequence: vec![1e-2, 1e-3],
            rel_tol: 1e-12,
            max_depth: 30,
        }
    }
}

impl QuadratureConfig {
    pub(crate) fn adaptive(&self) -> AdaptiveConfig {
        AdaptiveConfig {
            order: self.nodes_per_panel,
            rel_tol: self.rel_tol,
            abs_tol: 0.0,
            max_depth: self.max_depth,
            initial_panels: self.panels_per_segment,
            max_evals: 4_000_000,
        }
    }

    pub fn radius(&self) -> f64 {
        self.r_sequence.first().copied().unwrap_or(1e-2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PvMethod {
    /// Subtract `R_ℓ K(m,h_ℓ)/(z − h_ℓ)` on all of `[0,1]` and add its PV back
    /// analytically, `R_ℓ K(m,h_ℓ) ln((1−h_ℓ)/h_ℓ)`.
    #[default]
    PoleSubtraction,
    /// Integrate over the deleted segments and add the average of the upper
    /// and lower semicircles. Exact for any radius below the distance to the
    /// nearest non-real pole.
    ContourAverage,
}

/// `value` with an absolute error estimate `e^{err_log}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmValue {
    pub value: LogComplex,
    pub err_log: f64,
}

impl FmValue {
    pub fn rel_err(&self) -> f64 {
        (self.err_log - self.value.log_mag).exp()
    }
}

/// `f_m(τ)` with the kernel matching the parity of the form.
pub fn fm_pv<F: JacobiForm>(form: &F, m: f64, tau: UpperHalfPoint, quad: &QuadratureConfig) -> Result<FmValue> {
    fm_pv_with(form, m, tau, quad, form.default_kernel(), PvMethod::PoleSubtraction)
}

pub fn fm_pv_with<F: JacobiForm>(form: &F, m: f64, tau: UpperHalfPoint, quad: &QuadratureConfig, kernel: Kernel, method: PvMethod) -> Result<FmValue> {
    let poles = form.poles();
    let plan = ContourPlan::new(&poles, quad.radius())?;
    if method == PvMethod::ContourAverage && !poles.is_empty() {
        let d = form.off_axis_pole_distance(tau);
        if plan.r >= 0.9 * d {
            return Err(PvError::PolePlanInvalid(format!("r = {} is not below the off-axis pole distance {d:.3e}", plan.r)));
        }
    }
    let slice = form.slice(tau)?;
    fm_on_slice(&slice, &plan, m, kernel, method, quad)
}

/// Log-magnitude used to bring the integrand to order one.
pub(crate) fn integrand_scale<S: FormSlice>(slice: &S, residues: &[LogComplex]) -> Result<f64> {
    let mut top = f64::NEG_INFINITY;
    for j in 0..64 {
        let z = Complex64::new((j as f64 + 0.5) / 64.0, 0.0);
        if let Ok(v) = slice.eval_log(z) {
            top = top.max(v.log_mag);
        }
    }
    for r in residues {
        top = top.max(r.log_mag);
    }
    Ok(if top.is_finite() { top } else { 0.0 })
}

/// `F·K` with the scale `e^{shift}` removed, together with an estimate of its
/// rounding noise: a relative error in `F`, and an absolute error in `K`
/// from rounding its argument `2πmz`.
pub(crate) struct Integrand<'a, S> {
    pub slice: &'a S,
    pub m: f64,
    pub kernel: Kernel,
    pub shift: f64,
}

impl<S: FormSlice> Integrand<'_, S> {
    fn combine(&self, (l, r): (Complex64, Complex64), z: Complex64) -> (Complex64, f64) {
        let f = (l - self.shift).exp() * r;
        let k = self.kernel.eval(self.m, z);
        let kernel_noise = (1.0 + TAU * self.m.abs()) * f64::EPSILON;
        (f * k, f.norm() * (EVAL_NOISE * k.norm() + kernel_noise))
    }

    pub fn at(&self, z: Complex64) -> Result<(Complex64, f64)> {
        Ok(self.combine(self.slice.parts(z)?, z))
    }

    pub fn near(&self, h: f64, t: Complex64) -> Result<(Complex64, f64)> {
        Ok(self.combine(self.slice.parts_near_pole(h, t)?, t + h))
    }
}

/// Noise-aware adaptive quadrature of a fallible integrand.
pub(crate) fn integrate<F: FnMut(f64) -> Result<(Complex64, f64)>>(mut f: F, breaks: &[f64], cfg: &AdaptiveConfig, what: impl FnOnce() -> String) -> Result<(Complex64, f64)> {
    let mut failure = None;
    let res = adaptive_with_noise(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                (Complex64::new(0.0, 0.0), 0.0)
            }
        },
        breaks,
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !res.converged {
        return Err(PvError::QuadratureDivergence(what()));
    }
    Ok((res.value, res.err))
}

pub(crate) fn fm_on_slice<S: FormSlice>(slice: &S, plan: &ContourPlan, m: f64, kernel: Kernel, method: PvMethod, quad: &QuadratureConfig) -> Result<FmValue> {
    let residues: Vec<LogComplex> = plan.poles.iter().map(|h| slice.residue_log(*h)).collect::<Result<_>>()?;
    let shift = integrand_scale(slice, &residues)?;
    let cfg = quad.adaptive();
    let g = Integrand { slice, m, kernel, shift };
    let r = plan.r;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    match method {
        PvMethod::PoleSubtraction => {
            let weights: Vec<(f64, Complex64)> = plan
                .poles
                .iter()
                .zip(&residues)
                .map(|(h, res)| (*h, (res.ln() - shift).exp() * kernel.eval(m, Complex64::new(*h, 0.0))))
                .collect();
            // Near a pole the remainder is a small difference of large terms;
            // its noise scales with the terms, not with the remainder.
            let subtract = |(mut out, mut noise): (Complex64, f64), z: f64, skip: Option<usize>| {
                for (j, (h, w)) in weights.iter().enumerate() {
                    if Some(j) != skip {
                        let s = w / (z - h);
                        out -= s;
                        noise += EVAL_NOISE * s.norm();
                    }
                }
                (out, noise)
            };
            for (a, b) in &plan.segments {
                let (v, e) = integrate(|z| Ok(subtract(g.at(Complex64::new(z, 0.0))?, z, None)), &[*a, *b], &cfg, || format!("segment [{a}, {b}], m = {m}"))?;
                total += v;
                err += e;
            }
            // Windows around the poles, in the offset t = z − h.
            for (l, (h, w)) in weights.iter().enumerate() {
                let (v, e) = integrate(
                    |t| {
                        let (out, noise) = subtract(g.near(*h, Complex64::new(t, 0.0))?, h + t, Some(l));
                        let s = w / t;
                        Ok((out - s, noise + EVAL_NOISE * s.norm()))
                    },
                    &[-r, 0.0, r],
                    &cfg,
                    || format!("window around {h}, m = {m}"),
                )?;
                total += v;
                err += e;
            }
            for (h, w) in &weights {
                total += w * ((1.0 - h) / h).ln();
            }
        }
        PvMethod::ContourAverage => {
            for (a, b) in &plan.segments {
                let (v, e) = integrate(|z| g.at(Complex64::new(z, 0.0)), &[*a, *b], &cfg, || format!("segment [{a}, {b}], m = {m}"))?;
                total += v;
                err += e;
            }
            for h in &plan.poles {
                let (gp, ep) = semicircle_shifted(&g, *h, r, Side::Above, &cfg)?;
                let (gm, em) = semicircle_shifted(&g, *h, r, Side::Below, &cfg)?;
                total += 0.5 * (gp + gm);
                err += 0.5 * (ep + em);
            }
        }
    }
    let value = LogComplex::from_complex(total) * LogComplex::new(shift, 0.0);
    Ok(FmValue { value, err_log: err.max(f64::MIN_POSITIVE).ln() + shift })
}

/// `Σ_ℓ ∫_{Γ_{ℓ,r}} F K dz`: the integral with the windows `(h_ℓ − r, h_ℓ + r)`
/// removed and no semicircles. Converges to the principal value as `r → 0`,
/// with an error linear in `r`.
pub fn fm_segments_only<F: JacobiForm>(form: &F, m: f64, tau: UpperHalfPoint, r: f64, quad: &QuadratureConfig) -> Result<FmValue> {
    let plan = ContourPlan::new(&form.poles(), r)?;
    let slice = form.slice(tau)?;
    let residues: Vec<LogComplex> = plan.poles.iter().map(|h| slice.residue_log(*h)).collect::<Result<_>>()?;
    let shift = integrand_scale(&slice, &residues)?;
    let g = Integrand { slice: &slice, m, kernel: form.default_kernel(), shift };
    let cfg = quad.adaptive();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (a, b) in &plan.segments {
        let (v, e) = integrate(|z| g.at(Complex64::new(z, 0.0)), &[*a, *b], &cfg, || format!("segment [{a}, {b}], m = {m}"))?;
        total += v;
        err += e;
    }
    let value = LogComplex::from_complex(total) * LogComplex::new(shift, 0.0);
    Ok(FmValue { value, err_log: err.max(f64::MIN_POSITIVE).ln() + shift })
}
