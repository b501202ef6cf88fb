use num_complex::Complex64;
use num_rational::Rational64;
use theta_asym_core::LogComplex;
use theta_modular::theta::{theta_jet, ThetaMethod};
use theta_modular::{EllipticArg, EvalPath, QuotientSlice, QuotientSpec, TruncationBudget, UpperHalfPoint};

use crate::{PvError, Result};

/// The real poles `h_ℓ = k/b` of a quotient in `(0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    pub poles: Vec<Rational64>,
}

impl PoleSet {
    pub fn count(&self) -> usize {
        self.poles.len()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.poles.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect()
    }
}

/// Poles `k/b`, each checked to be simple (nonzero `ϑ'(bh;cτ)`) with a
/// nonvanishing numerator at the probe point `τ = i/2`.
pub fn locate_poles(spec: &QuotientSpec) -> Result<PoleSet> {
    let probe = UpperHalfPoint::new(Complex64::new(0.0, 0.5))?;
    let budget = TruncationBudget::default();
    let b = spec.b() as i64;
    let mut poles = Vec::new();
    for k in 1..b {
        let h = k as f64 / b as f64;
        check_simple(spec, h, probe, &budget)?;
        let num = theta_jet(EllipticArg::real(h), probe, &budget, ThetaMethod::Product, EvalPath::Auto)?;
        if num.value_log().is_zero() {
            return Err(PvError::DegeneratePole { h, slope: 0.0 });
        }
        poles.push(Rational64::new(k, b));
    }
    Ok(PoleSet { poles })
}

/// `|ϑ'(bh;cτ)|` relative to `|ϑ(bh+¼;cτ)|`; both scale the same way as `Im τ → 0`.
fn check_simple(spec: &QuotientSpec, h: f64, tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<()> {
    let ctau = UpperHalfPoint::new(tau.tau() * spec.c() as f64)?;
    let w = h * spec.b() as f64;
    let d = theta_jet(EllipticArg::real(w), ctau, budget, ThetaMethod::Product, EvalPath::Auto)?.deriv_log();
    let v = theta_jet(EllipticArg::real(w + 0.25), ctau, budget, ThetaMethod::Product, EvalPath::Auto)?.value_log();
    let rel = (d.log_mag - v.log_mag).exp();
    if !(rel > 1e-12) {
        return Err(PvError::DegeneratePole { h, slope: rel });
    }
    Ok(())
}

/// Residue of `f(·;τ)` at the pole `h`.
pub fn residue_at_pole(spec: &QuotientSpec, h: f64, tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<Complex64> {
    Ok(residue_log(spec, h, tau, budget)?.to_complex())
}

pub fn residue_log(spec: &QuotientSpec, h: f64, tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<LogComplex> {
    let bh = h * spec.b() as f64;
    if (bh - bh.round()).abs() > 1e-12 || bh.round() < 1.0 || bh.round() >= spec.b() as f64 {
        return Err(PvError::InvalidInput(format!("{h} is not a pole k/{} in (0,1)", spec.b())));
    }
    check_simple(spec, h, tau, budget)?;
    Ok(QuotientSlice::new(spec, tau, budget)?.residue_log(h)?)
}
