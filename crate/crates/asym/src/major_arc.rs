use std::f64::consts::PI;

use num_complex::Complex64;
use theta_asym_core::quad::{adaptive_path_with_noise, AdaptiveConfig};
use theta_asym_core::{ln, LogComplex, I};
use theta_modular::QuotientSpec;
use theta_pv::{on_lattice, CoefficientRecord, Provenance};

use crate::bessel::{bessel_i, BesselMode};
use crate::constants::{constants, AsymptoticConstants};
use crate::{AsymError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PskMode {
    /// `I_{−s−1}(π√(2kn/3))`.
    #[default]
    Bessel,
    /// The segment integral, deformed through the saddle point `v = 1`.
    Quadrature,
    /// The segment integral along the straight vertical segment. Loses
    /// digits to cancellation once `n` is in the hundreds.
    QuadratureVertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MajorArcMode {
    /// `P_{s,k}` from the Bessel series.
    #[default]
    Bessel,
    /// `P_{s,k}` replaced by the leading Bessel asymptotic `e^x/√(2πx)`.
    BesselLeading,
    /// `P_{s,k}` by quadrature through the saddle.
    Quadrature,
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(AsymError::DomainError(format!("{what} must be positive and finite, got {v}")))
    }
}

fn beta(n: f64) -> f64 {
    PI * (2.0 / n).sqrt()
}

/// `∫ e^{l(p)} dp` along the polygon through `points`, with `l` scaled by
/// the largest value it takes at `probes` and on a grid along the path.
fn log_path_integral<L: Fn(Complex64) -> Complex64>(l: L, points: &[Complex64], probes: &[Complex64], what: &str) -> Result<LogComplex> {
    let grid = points.windows(2).flat_map(|w| (0..=64).map(move |j| w[0] + (w[1] - w[0]) * (j as f64 / 64.0)));
    let top = probes.iter().copied().chain(grid).map(|p| l(p).re).fold(f64::NEG_INFINITY, f64::max);
    // enough initial panels to resolve the oscillation before the ∫|f| estimate is taken
    let cfg = AdaptiveConfig { rel_tol: 1e-13, max_depth: 50, initial_panels: 32, ..Default::default() };
    // e^{l − top} inherits the absolute rounding error of l, which is large
    // when |l| is in the hundreds
    let r = adaptive_path_with_noise(
        |p| {
            let lp = l(p);
            let v = (lp - top).exp();
            (v, v.norm() * 4.0 * f64::EPSILON * (lp.norm() + top.abs() + 1.0))
        },
        points,
        &cfg,
    );
    if !r.converged {
        return Err(AsymError::QuadratureDivergence(what.to_string()));
    }
    Ok(LogComplex::from_complex(r.value) * LogComplex::new(top, 0.0))
}

/// `P_{s,k} = ∫ v^s e^{π√(kn/6)(v + 1/v)} dv` from `(1 − i m^{−1/3})/√Λ₂`
/// to `(1 + i m^{−1/3})/√Λ₂`, or its Bessel reduction.
pub fn p_sk(s: f64, k: f64, n: f64, m: f64, lambda2: f64, mode: PskMode) -> Result<LogComplex> {
    check_positive("k", k)?;
    check_positive("n", n)?;
    check_positive("m", m)?;
    check_positive("Lambda2", lambda2)?;
    if mode == PskMode::Bessel {
        return bessel_i(-s - 1.0, PI * (2.0 * k * n / 3.0).sqrt(), BesselMode::Reference);
    }
    let a = PI * (k * n / 6.0).sqrt();
    let mu = m.cbrt().recip();
    let r = lambda2.sqrt().recip();
    let lo = Complex64::new(r, -r * mu);
    let hi = Complex64::new(r, r * mu);
    let one = Complex64::new(1.0, 0.0);
    let l = |v: Complex64| s * ln(v) + a * (v + v.inv());
    match mode {
        PskMode::Quadrature => log_path_integral(l, &[lo, one, hi], &[lo, one, hi], "P_sk through the saddle"),
        _ => log_path_integral(l, &[lo, hi], &[lo, Complex64::new(r, 0.0), hi], "P_sk along the vertical segment"),
    }
}

fn closed_form_prefactor(k: &AsymptoticConstants, n: f64) -> LogComplex {
    let sa = k.sum_alpha as f64;
    let l = (2.0 - 0.5 * sa) * beta(n).ln() - 0.25 * sa * k.lambda2_f64().ln();
    LogComplex::from_complex(-I / (2.0 * PI)) * k.lambda1 * LogComplex::new(l, 0.0)
}

/// Major-arc integral `M = (−i/2π) Λ₁ β^{2−Σα/2} √Λ₂^{−Σα/2} P_{1−Σα/2, 12Λ₂}`.
pub fn major_arc(spec: &QuotientSpec, m: f64, n: f64, mode: MajorArcMode) -> Result<LogComplex> {
    check_positive("n", n)?;
    let k = constants(spec)?;
    let l2 = k.lambda2_f64();
    let s = k.eps_power();
    let p = match mode {
        MajorArcMode::Bessel => p_sk(s, 12.0 * l2, n, m, l2, PskMode::Bessel)?,
        MajorArcMode::Quadrature => p_sk(s, 12.0 * l2, n, m, l2, PskMode::Quadrature)?,
        MajorArcMode::BesselLeading => bessel_i(-s - 1.0, 2.0 * PI * (2.0 * l2 * n).sqrt(), BesselMode::Asymptotic)?,
    };
    Ok(closed_form_prefactor(&k, n) * p)
}

/// `M` straight from its definition,
/// `(β/(2π m^{1/3})) Λ₁ ∫_{|x|≤1} ε^{1−Σα/2} e^{2π²Λ₂/ε} e^{εn} dx`
/// with `ε = β(1 + i x m^{−1/3})`, integrated in `ε` through the saddle
/// `ε = β√Λ₂`.
pub fn major_arc_direct(spec: &QuotientSpec, m: f64, n: f64) -> Result<LogComplex> {
    check_positive("n", n)?;
    check_positive("m", m)?;
    let k = constants(spec)?;
    let b = beta(n);
    let mu = m.cbrt().recip();
    let c2 = 2.0 * PI * PI * k.lambda2_f64();
    let p = k.eps_power();
    let l = |e: Complex64| p * ln(e) + c2 / e + e * n;
    let lo = Complex64::new(b, -b * mu);
    let hi = Complex64::new(b, b * mu);
    let saddle = Complex64::new(b * k.lambda2_f64().sqrt(), 0.0);
    let v = log_path_integral(l, &[lo, saddle, hi], &[lo, saddle, hi], "direct major arc")?;
    // dx = dε / (iβ m^{−1/3})
    Ok(LogComplex::from_complex(1.0 / (2.0 * PI * I)) * k.lambda1 * v)
}

/// The main term `(−i/2π) Λ₁ β^{2−Σα/2} √Λ₂^{−Σα/2} e^{2π√(2Λ₂n)} / (2π(2Λ₂n)^{1/4})`.
///
/// It does not depend on `m`; `m` is only recorded. `err_estimate` is `β`,
/// the relative size of the error term.
pub fn main_term(spec: &QuotientSpec, m: f64, n: f64) -> Result<CoefficientRecord> {
    check_positive("n", n)?;
    let k = constants(spec)?;
    let x = 2.0 * k.lambda2_f64() * n;
    let growth = LogComplex::new(2.0 * PI * x.sqrt() - (2.0 * PI).ln() - 0.25 * x.ln(), 0.0);
    Ok(CoefficientRecord {
        m,
        nu: n,
        value: closed_form_prefactor(&k, n) * growth,
        err_estimate: beta(n),
        provenance: Provenance::MainTerm,
        off_lattice: !on_lattice(spec.delta_q(), n),
    })
}
