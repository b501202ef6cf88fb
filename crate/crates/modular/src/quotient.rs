//! Eta-theta quotients `f(z;τ) = Π η(a_j τ)^{α_j} · ϑ(z;τ) / ϑ(bz;cτ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use theta_asym_core::{ln, LogComplex, TAU};

use crate::eta::eta_log;
use crate::theta::{theta_jet, ThetaMethod};
use crate::{EllipticArg, EvalPath, ModularError, Result, TruncationBudget, UpperHalfPoint};

/// Distance of `bz` from the nearest integer below which evaluation refuses.
pub const POLE_GUARD: f64 = 1e-9;

/// Parameters `{(a_j, α_j)}, b, c` of a quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientSpec {
    eta: Vec<(u32, i32)>,
    b: u32,
    c: u32,
}

impl QuotientSpec {
    /// Validates positivity, `b² > c` and the growth condition `Σ α_j/a_j < 0`.
    pub fn new(eta: Vec<(u32, i32)>, b: u32, c: u32) -> Result<Self> {
        if b == 0 || c == 0 {
            return Err(ModularError::InvalidSpec("b and c must be positive".into()));
        }
        if let Some((a, al)) = eta.iter().find(|(a, al)| *a == 0 || *al == 0) {
            return Err(ModularError::InvalidSpec(format!("eta factor ({a}, {al}) needs a > 0 and alpha != 0")));
        }
        if (b as u64) * (b as u64) <= c as u64 {
            return Err(ModularError::InvalidSpec(format!("need b^2 > c, got b = {b}, c = {c}")));
        }
        let spec = QuotientSpec { eta, b, c };
        if spec.sum_alpha_over_a() >= Rational64::from_integer(0) {
            return Err(ModularError::InvalidSpec("growth condition sum(alpha_j / a_j) < 0 fails".into()));
        }
        Ok(spec)
    }

    pub fn eta_factors(&self) -> &[(u32, i32)] {
        &self.eta
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn even_b(&self) -> bool {
        self.b % 2 == 0
    }

    pub fn sum_alpha(&self) -> i32 {
        self.eta.iter().map(|(_, al)| *al).sum()
    }

    pub fn sum_alpha_over_a(&self) -> Rational64 {
        self.eta.iter().map(|(a, al)| Rational64::new(*al as i64, *a as i64)).sum()
    }

    /// `(1−c)/8 + Σ α_j a_j / 24`: the q-exponents of `f` lie in `δ_q + ℤ`.
    pub fn delta_q(&self) -> Rational64 {
        let s: i64 = self.eta.iter().map(|(a, al)| *a as i64 * *al as i64).sum();
        Rational64::new(1 - self.c as i64, 8) + Rational64::new(s, 24)
    }

    /// `(1−b)/2`: the ζ-exponents of `f` lie in `δ_ζ + ℤ`.
    pub fn delta_zeta(&self) -> Rational64 {
        Rational64::new(1 - self.b as i64, 2)
    }

    /// `(x_j, γ_j)` for the positive exponents.
    pub fn positive_split(&self) -> Vec<(u32, u32)> {
        self.eta.iter().filter(|(_, al)| *al > 0).map(|(a, al)| (*a, *al as u32)).collect()
    }

    /// `(y_k, δ_k)` with `δ_k = −α > 0` for the negative exponents.
    pub fn negative_split(&self) -> Vec<(u32, u32)> {
        self.eta.iter().filter(|(_, al)| *al < 0).map(|(a, al)| (*a, (-*al) as u32)).collect()
    }

    /// Real poles `k/b`, `k = 1..b−1`, in increasing order.
    pub fn pole_positions(&self) -> Vec<f64> {
        (1..self.b).map(|k| k as f64 / self.b as f64).collect()
    }
}

/// The quotient at a fixed `τ`, with the eta prefactor computed once.
#[derive(Debug, Clone)]
pub struct QuotientSlice {
    spec: QuotientSpec,
    tau: UpperHalfPoint,
    ctau: UpperHalfPoint,
    budget: TruncationBudget,
    eta_ln: Complex64,
}

impl QuotientSlice {
    pub fn new(spec: &QuotientSpec, tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<Self> {
        let mut eta_ln = Complex64::new(0.0, 0.0);
        for (a, al) in &spec.eta {
            let at = UpperHalfPoint::new(tau.tau() * *a as f64)?;
            let path = if at.tau().im < 0.5 { EvalPath::Modular } else { EvalPath::Direct };
            eta_ln += eta_log(at, budget, path)?.ln() * *al as f64;
        }
        let ctau = UpperHalfPoint::new(tau.tau() * spec.c as f64)?;
        Ok(QuotientSlice { spec: spec.clone(), tau, ctau, budget: *budget, eta_ln })
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn tau(&self) -> UpperHalfPoint {
        self.tau
    }

    /// `ln Π η(a_j τ)^{α_j}`.
    pub fn eta_prefactor_ln(&self) -> Complex64 {
        self.eta_ln
    }

    /// `f(z) = e^{L}·r` as `(L, r)`, without the pole guard.
    pub fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let num = theta_jet(EllipticArg::new(z), self.tau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        let den = theta_jet(EllipticArg::new(z * self.spec.b as f64), self.ctau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        Ok((self.eta_ln + num.log_scale - den.log_scale, num.value / den.value))
    }

    /// `f(k/b + t)`, with the denominator taken as `(−1)^k ϑ(bt;cτ)` so that
    /// small offsets from the pole keep full relative accuracy.
    pub fn parts_near_pole(&self, k: i64, t: Complex64) -> Result<(Complex64, Complex64)> {
        let z = t + k as f64 / self.spec.b as f64;
        let num = theta_jet(EllipticArg::new(z), self.tau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        let den = theta_jet(EllipticArg::new(t * self.spec.b as f64), self.ctau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Ok((self.eta_ln + num.log_scale - den.log_scale, num.value / den.value * sign))
    }

    /// `f(z)·e^{−shift}` as a plain complex number.
    pub fn eval_shifted(&self, z: Complex64, shift: f64) -> Result<Complex64> {
        let (l, r) = self.parts(z)?;
        Ok((l - shift).exp() * r)
    }

    pub fn eval_log(&self, z: Complex64) -> Result<LogComplex> {
        self.guard(z)?;
        self.eval_log_raw(z)
    }

    pub fn eval_log_raw(&self, z: Complex64) -> Result<LogComplex> {
        let (l, r) = self.parts(z)?;
        Ok(LogComplex::exp(l) * LogComplex::from_complex(r))
    }

    fn guard(&self, z: Complex64) -> Result<()> {
        let bz = z * self.spec.b as f64;
        let d = (bz - bz.re.round()).norm();
        if d < POLE_GUARD {
            return Err(ModularError::PoleProximity { z: z.re, guard: POLE_GUARD });
        }
        Ok(())
    }

    /// Residue at the simple pole `h` (with `bh` an integer):
    /// `Π η^α · ϑ(h;τ) / (b ϑ'(bh;cτ))`.
    pub fn residue_log(&self, h: f64) -> Result<LogComplex> {
        let num = theta_jet(EllipticArg::real(h), self.tau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        let den = theta_jet(EllipticArg::real(h * self.spec.b as f64), self.ctau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        let d = den.deriv_log() * LogComplex::from_real(self.spec.b as f64);
        Ok(LogComplex::exp(self.eta_ln) * num.value_log() / d)
    }

    /// `|ϑ'(bh;cτ)|` relative scale, used to detect degenerate poles.
    pub fn pole_slope_log(&self, h: f64) -> Result<LogComplex> {
        let den = theta_jet(EllipticArg::real(h * self.spec.b as f64), self.ctau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        Ok(den.deriv_log())
    }
}

/// `f(z;τ)` with the pole guard.
pub fn eval_quotient(spec: &QuotientSpec, z: EllipticArg, tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<Complex64> {
    Ok(QuotientSlice::new(spec, tau, budget)?.eval_log(z.z)?.to_complex())
}

/// `κ₀`, `M(z)` and `N(z) = min(z, M(z))` of the dominant-pole expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub kappa0: u32,
    pub mz: f64,
    pub nz: f64,
}

pub fn margin(spec: &QuotientSpec, z: f64) -> Result<Margin> {
    if !(z > 0.0 && z < 1.0) {
        return Err(ModularError::DomainError(format!("margin needs z in (0,1), got {z}")));
    }
    let b = spec.b as f64;
    let c = spec.c as f64;
    let bz = b * z;
    if (bz - bz.round()).abs() < POLE_GUARD {
        return Err(ModularError::DomainError(format!("z = {z} is a pole")));
    }
    let kappa0 = (bz.ceil() as u32).max(1);
    let k0 = kappa0 as f64;
    let mut m = (1.0 - z).min(1.0 / c).min((k0 - bz) / c);
    for (a, _) in &spec.eta {
        m = m.min(1.0 / *a as f64);
    }
    if kappa0 != 1 {
        m = m.min((bz + 1.0 - k0) / c);
    }
    Ok(Margin { kappa0, mz: m, nz: z.min(m) })
}

/// Dominant-pole leading factor `C(z, iε/2π)` for `0 < z < 1/b`:
/// `(ε/2π)^{−Σα/2} c^{1/2} Π a_j^{−α_j/2} · sinh(2π²z/ε)/sinh(2π²bz/(cε)) ·
/// exp((2π²/ε)((4b²z²+1)/(4c) − (4z²+1)/4 − Σ α_j/(12a_j)))`.
///
/// There is no `(−1)^{Σα}` prefactor: with it the ratio `f/C` tends to `−1`
/// for odd `Σα` (see [`leading_factor_verbatim_sign`]).
pub fn leading_factor(spec: &QuotientSpec, z: f64, eps: Complex64) -> Result<LogComplex> {
    if !(eps.re > 0.0) {
        return Err(ModularError::DomainError(format!("leading factor needs re(eps) > 0, got {}", eps.re)));
    }
    let b = spec.b as f64;
    let c = spec.c as f64;
    if !(z > 0.0 && b * z < 1.0) {
        return Err(ModularError::DomainError(format!("leading factor is valid for 0 < z < 1/b = {}, got z = {z}", 1.0 / b)));
    }
    let sa = spec.sum_alpha() as f64;
    let mut l = -0.5 * sa * ln(eps / TAU) + Complex64::new(0.5 * c.ln(), 0.0);
    for (a, al) in &spec.eta {
        l -= 0.5 * *al as f64 * (*a as f64).ln();
    }
    let k = 2.0 * PI * PI / eps;
    let one = Complex64::new(1.0, 0.0);
    // sinh(kz)/sinh(kbz/c) = e^{kz(1−b/c)} (1−e^{−2kz}) / (1−e^{−2kbz/c})
    l += k * z * (1.0 - b / c) + ln(one - (-2.0 * k * z).exp()) - ln(one - (-2.0 * k * b * z / c).exp());
    let sao = ratio_f64(spec.sum_alpha_over_a());
    let e = (4.0 * b * b * z * z + 1.0) / (4.0 * c) - (4.0 * z * z + 1.0) / 4.0 - sao / 12.0;
    l += k * e;
    Ok(LogComplex::exp(l))
}

/// [`leading_factor`] including the `(−1)^{Σα}` sign.
pub fn leading_factor_verbatim_sign(spec: &QuotientSpec, z: f64, eps: Complex64) -> Result<LogComplex> {
    let c = leading_factor(spec, z, eps)?;
    Ok(if spec.sum_alpha() % 2 == 0 { c } else { -c })
}

pub(crate) fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
