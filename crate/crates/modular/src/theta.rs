//! Jacobi theta function and its `z`-derivative.

use std::f64::consts::PI;

use num_complex::Complex64;
use theta_asym_core::{ln, LogComplex, I, TAU};

use crate::{EllipticArg, EvalPath, ModularError, Result, TruncationBudget, UpperHalfPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaMethod {
    /// Triple product.
    #[default]
    Product,
    /// `−2 q^{1/8} Σ_{n≥0} (−1)ⁿ q^{(n²+n)/2} sin((2n+1)πz)`.
    Sum,
}

/// `ϑ = e^{log_scale}·value` and `ϑ' = e^{log_scale}·deriv`.
///
/// Keeping the scale separate lets the value and the derivative be combined
/// even when `ϑ` itself is far outside the `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaJet {
    pub log_scale: Complex64,
    pub value: Complex64,
    pub deriv: Complex64,
}

impl ThetaJet {
    pub fn value_log(&self) -> LogComplex {
        LogComplex::exp(self.log_scale) * LogComplex::from_complex(self.value)
    }

    pub fn deriv_log(&self) -> LogComplex {
        LogComplex::exp(self.log_scale) * LogComplex::from_complex(self.deriv)
    }

    pub fn value(&self) -> Complex64 {
        self.scaled(self.value)
    }

    pub fn deriv(&self) -> Complex64 {
        self.scaled(self.deriv)
    }

    /// `e^{log_scale}·x`, directly while the scale fits in `f64`; this avoids
    /// a round trip through polar form.
    fn scaled(&self, x: Complex64) -> Complex64 {
        if self.log_scale.re.abs() < 600.0 {
            self.log_scale.exp() * x
        } else {
            (LogComplex::exp(self.log_scale) * LogComplex::from_complex(x)).to_complex()
        }
    }
}

/// `ϑ(z;τ)` (default path).
pub fn eval_theta(z: EllipticArg, tau: UpperHalfPoint, budget: &TruncationBudget, method: ThetaMethod) -> Result<Complex64> {
    Ok(theta_jet(z, tau, budget, method, EvalPath::Auto)?.value())
}

/// `∂_z ϑ(z;τ)` at `z = w`.
pub fn theta_derivative(w: EllipticArg, tau: UpperHalfPoint, budget: &TruncationBudget) -> Result<Complex64> {
    Ok(theta_jet(w, tau, budget, ThetaMethod::Product, EvalPath::Auto)?.deriv())
}

/// Value and derivative of `ϑ` together.
pub fn theta_jet(z: EllipticArg, tau: UpperHalfPoint, budget: &TruncationBudget, method: ThetaMethod, path: EvalPath) -> Result<ThetaJet> {
    let (z, t) = (z.z, tau.tau());
    if !path.use_modular(t.im) {
        return base(z, t, budget, method);
    }
    let r = Reduction::new(z, t);
    let b = base(r.z, r.tau, budget, method)?;
    Ok(r.apply(b))
}

/// Record of the transformations taking `(z₀, τ₀)` to a reduced point:
/// `ϑ(z₀;τ₀) = e^L ϑ(z;τ)` and `ϑ'(z₀;τ₀) = e^L (A ϑ(z;τ) + B ϑ'(z;τ))`.
struct Reduction {
    z: Complex64,
    tau: Complex64,
    l: Complex64,
    a: Complex64,
    b: Complex64,
}

impl Reduction {
    fn new(z: Complex64, tau: Complex64) -> Self {
        let mut r = Reduction { z, tau, l: Complex64::new(0.0, 0.0), a: Complex64::new(0.0, 0.0), b: Complex64::new(1.0, 0.0) };
        for _ in 0..10_000 {
            r.shift_z();
            let k = r.tau.re.round();
            if k != 0.0 {
                // ϑ(z;τ+k) = e^{πik/4} ϑ(z;τ)
                r.tau -= k;
                r.l += I * (PI * k / 4.0);
            }
            if r.tau.norm_sqr() >= 1.0 - 1e-14 {
                break;
            }
            r.invert();
        }
        r.shift_z();
        r
    }

    /// `z = w + lτ + k` with `w` in the centred period parallelogram:
    /// `ϑ(z) = (−1)^{k+l} q^{−l²/2} e^{−2πilw} ϑ(w)`.
    fn shift_z(&mut self) {
        let l = (self.z.im / self.tau.im).round();
        let w1 = self.z - self.tau * l;
        let k = w1.re.round();
        if l == 0.0 && k == 0.0 {
            return;
        }
        let w = w1 - k;
        // only the parity of k + l matters; using it keeps ±z on the same branch
        self.l += I * PI * (k + l).rem_euclid(2.0) - I * PI * self.tau * (l * l) - I * TAU * l * w;
        self.a -= I * TAU * l * self.b;
        self.z = w;
    }

    /// `ϑ(z;τ) = (i/√(−iτ)) e^{−πiz²/τ} ϑ(z/τ;−1/τ)`.
    fn invert(&mut self) {
        let (z, t) = (self.z, self.tau);
        self.l += I * (PI / 2.0) - 0.5 * ln(-I * t) - I * PI * z * z / t;
        self.a -= I * TAU * z / t * self.b;
        self.b /= t;
        self.z = z / t;
        self.tau = -t.inv();
    }

    fn apply(&self, j: ThetaJet) -> ThetaJet {
        ThetaJet { log_scale: self.l + j.log_scale, value: j.value, deriv: self.a * j.value + self.b * j.deriv }
    }
}

fn base(z: Complex64, t: Complex64, budget: &TruncationBudget, method: ThetaMethod) -> Result<ThetaJet> {
    match method {
        ThetaMethod::Product => product(z, t, budget),
        ThetaMethod::Sum => series(z, t, budget),
    }
}

/// `ϑ = −2 sin(πz) q^{1/8} Π (1−qⁿ)(1 − 2cos(2πz)qⁿ + q²ⁿ)`; the sine carries
/// the zero at the origin exactly, and writing the `ζ`, `ζ⁻¹` pair through
/// the cosine keeps the computed value exactly odd in `z`.
fn product(z: Complex64, t: Complex64, budget: &TruncationBudget) -> Result<ThetaJet> {
    let q = (I * TAU * t).exp();
    let y = z.im.abs();
    // Far from the real axis cos(2πz) overflows while qⁿ underflows; there
    // ζ^{±1}qⁿ is formed directly, and e^{π|Im z|} moves into the scale.
    let wide = TAU * y > 600.0;
    let c2 = if wide { Complex64::new(0.0, 0.0) } else { (TAU * z).cos() };
    let s2 = if wide { Complex64::new(0.0, 0.0) } else { (TAU * z).sin() };
    let one = Complex64::new(1.0, 0.0);
    // |ζ^{±1}qⁿ| ≤ e^{2π(|Im z| − n Im τ)}
    let log_cutoff = (budget.target_rel_err / budget.product_terms as f64).ln();
    // Running product, rescaled into `log_p` whenever it drifts far from 1.
    let mut p = one;
    let mut log_p = Complex64::new(0.0, 0.0);
    let mut dlog = Complex64::new(0.0, 0.0);
    let mut qn = q;
    let mut done = false;
    for j in 1..=budget.product_terms {
        let n = j as f64;
        if TAU * (y - n * t.im) < log_cutoff {
            done = true;
            break;
        }
        // (1 − ζqⁿ)(1 − ζ⁻¹qⁿ) and sin(2πz)qⁿ
        let (pair, sq) = if wide {
            let up = (I * TAU * (t * n + z)).exp();
            let down = (I * TAU * (t * n - z)).exp();
            (one - (up + down) + qn * qn, (up - down) / (2.0 * I))
        } else {
            (one - qn * (2.0 * c2 - qn), s2 * qn)
        };
        p *= (one - qn) * pair;
        let m = p.norm();
        if !(1e-100..=1e100).contains(&m) {
            log_p += ln(p);
            p = one;
        }
        dlog += 2.0 * TAU * sq / pair;
        qn *= q;
    }
    log_p += ln(p);
    if !done {
        return Err(ModularError::NonConvergent { what: "theta product", limit: budget.product_terms });
    }
    // sin(πz) through the nearest integer keeps full relative accuracy near
    // every zero, not only the one at the origin.
    let k = z.re.round();
    let sign = if k.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let w = PI * (z - k);
    let (s, c, lift) = if wide {
        // sin and cos scaled by e^{−|Im w|}
        let a = (I * w - w.im.abs()).exp();
        let b = (-I * w - w.im.abs()).exp();
        ((a - b) / (2.0 * I), (a + b) / 2.0, w.im.abs())
    } else {
        (w.sin(), w.cos(), 0.0)
    };
    Ok(ThetaJet {
        log_scale: Complex64::new(2f64.ln() + lift, PI) + I * (PI / 4.0) * t + log_p,
        value: sign * s,
        deriv: sign * (PI * c + s * dlog),
    })
}

/// Sine series `ϑ = −2 q^{1/8} Σ_{n≥0} (−1)ⁿ q^{(n²+n)/2} sin((2n+1)πz)`,
/// after moving `z` to the nearest integer (`ϑ(z+k) = (−1)^k ϑ(z)`).
///
/// Pairing the exponential terms `n` and `−1−n` into sines avoids their
/// cancellation near the zeros on the real line.
fn series(z: Complex64, t: Complex64, budget: &TruncationBudget) -> Result<ThetaJet> {
    let k = z.re.round();
    let z = z - k;
    let sign = if k.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let y = z.im.abs();
    // log of the n-th coefficient, and the size of the sine on top of it
    let coeff = |n: f64| I * TAU * t * (0.125 + 0.5 * (n * n + n));
    let size = |n: f64| coeff(n).re + (2.0 * n + 1.0) * PI * y;
    // the sizes are concave in n; the peak sits near n = y/Im τ − 1/2
    let top = (y / t.im - 0.5).round().max(0.0);
    let peak = [top - 1.0, top, top + 1.0].into_iter().filter(|n| *n >= 0.0).map(size).fold(f64::NEG_INFINITY, f64::max);
    let floor = peak + budget.target_rel_err.ln() - 4.0;
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    let mut closed = false;
    for j in 0..=budget.sum_radius {
        let n = j as f64;
        if n > top && size(n) < floor {
            closed = true;
            break;
        }
        let w = z * ((2.0 * n + 1.0) * PI);
        // sin(w) and cos(w) scaled by e^{−|Im w|}
        let damp = -w.im.abs();
        let (sn, cs) = if -damp < 30.0 {
            (w.sin() * damp.exp(), w.cos() * damp.exp())
        } else {
            let a = (I * w + damp).exp();
            let b = (-I * w + damp).exp();
            ((a - b) / (2.0 * I), (a + b) / 2.0)
        };
        let alt = if j % 2 == 0 { -2.0 } else { 2.0 };
        let x = (coeff(n) + (2.0 * n + 1.0) * PI * y - peak).exp() * (alt * sign);
        value += x * sn;
        deriv += x * cs * ((2.0 * n + 1.0) * PI);
    }
    if !closed {
        return Err(ModularError::NonConvergent { what: "theta series", limit: budget.sum_radius });
    }
    Ok(ThetaJet { log_scale: Complex64::new(peak, 0.0), value, deriv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(re: f64, im: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn zero_at_origin_with_nonzero_slope() {
        let b = TruncationBudget::default();
        let j = theta_jet(EllipticArg::real(0.0), pt(0.1, 0.7), &b, ThetaMethod::Product, EvalPath::Auto).unwrap();
        assert_eq!(j.value(), Complex64::new(0.0, 0.0));
        assert!(j.deriv().norm() > 0.1);
    }

    #[test]
    fn derivative_at_zero_is_minus_two_pi_eta_cubed() {
        let b = TruncationBudget::default();
        for tau in [pt(0.0, 1.0), pt(0.3, 0.05), pt(-0.45, 0.8)] {
            let d = theta_derivative(EllipticArg::real(0.0), tau, &b).unwrap();
            let eta = crate::eval_eta(tau, &b).unwrap();
            let expect = -TAU * eta * eta * eta;
            assert_relative_eq!((d - expect).norm() / expect.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_and_series_agree_at_the_reference_point() {
        let b = TruncationBudget::default();
        let z = EllipticArg::real(0.3);
        let tau = pt(0.1, 0.2);
        for path in [EvalPath::Direct, EvalPath::Modular] {
            let p = theta_jet(z, tau, &b, ThetaMethod::Product, path).unwrap().value();
            let s = theta_jet(z, tau, &b, ThetaMethod::Sum, path).unwrap().value();
            assert!((p - s).norm() / p.norm() < 1e-12);
        }
    }
}
