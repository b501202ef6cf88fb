//! Integrands `F(z;τ)` that the PV machinery integrates against a kernel.

use num_complex::Complex64;
use num_rational::Rational64;
use theta_asym_core::{LogComplex, TAU};
use theta_modular::{QuotientSlice, QuotientSpec, TruncationBudget, UpperHalfPoint};

use crate::Result;

/// Fourier kernel in `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    /// `e^{−2πimz}`
    #[default]
    Exponential,
    /// `−i sin(2πmz)`; equals the exponential kernel for integer `m` when the
    /// integrand is odd about `z = 1/2`.
    Sine,
    /// `cos(2πmz)`
    Cosine,
}

impl Kernel {
    pub fn eval(self, m: f64, z: Complex64) -> Complex64 {
        let x = z * (TAU * m);
        match self {
            Kernel::Exponential => (Complex64::new(0.0, -1.0) * x).exp(),
            Kernel::Sine => Complex64::new(0.0, -1.0) * x.sin(),
            Kernel::Cosine => x.cos(),
        }
    }
}

/// A meromorphic function of `z`, 1-periodic up to sign, evaluated slice by slice in `τ`.
pub trait JacobiForm: Sync {
    type Slice: FormSlice;

    fn slice(&self, tau: UpperHalfPoint) -> Result<Self::Slice>;

    /// Simple real poles in `(0,1)`, increasing.
    fn poles(&self) -> Vec<f64>;

    /// Base exponent: the q-expansion lives on `δ_q + ℤ`.
    fn delta_q(&self) -> Rational64;

    /// Kernel that matches the parity of the form.
    fn default_kernel(&self) -> Kernel;

    /// Distance from the real poles to the nearest non-real pole.
    fn off_axis_pole_distance(&self, tau: UpperHalfPoint) -> f64;
}

pub trait FormSlice {
    /// `F(z) = e^{L}·r` returned as `(L, r)`.
    fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    /// `F(h + t)` for a pole `h`; implementations should keep relative
    /// accuracy as `t → 0`.
    fn parts_near_pole(&self, h: f64, t: Complex64) -> Result<(Complex64, Complex64)> {
        self.parts(t + h)
    }

    fn residue_log(&self, h: f64) -> Result<LogComplex>;

    fn eval_log(&self, z: Complex64) -> Result<LogComplex> {
        let (l, r) = self.parts(z)?;
        Ok(LogComplex::exp(l) * LogComplex::from_complex(r))
    }
}

/// An eta-theta quotient together with its truncation budget.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientForm {
    pub spec: QuotientSpec,
    pub budget: TruncationBudget,
}

impl QuotientForm {
    pub fn new(spec: QuotientSpec) -> Self {
        QuotientForm { spec, budget: TruncationBudget::default() }
    }
}

impl FormSlice for QuotientSlice {
    fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok(QuotientSlice::parts(self, z)?)
    }

    fn parts_near_pole(&self, h: f64, t: Complex64) -> Result<(Complex64, Complex64)> {
        let k = (h * self.spec().b() as f64).round() as i64;
        Ok(QuotientSlice::parts_near_pole(self, k, t)?)
    }

    fn residue_log(&self, h: f64) -> Result<LogComplex> {
        Ok(QuotientSlice::residue_log(self, h)?)
    }
}

impl JacobiForm for QuotientForm {
    type Slice = QuotientSlice;

    fn slice(&self, tau: UpperHalfPoint) -> Result<QuotientSlice> {
        Ok(QuotientSlice::new(&self.spec, tau, &self.budget)?)
    }

    fn poles(&self) -> Vec<f64> {
        self.spec.pole_positions()
    }

    fn delta_q(&self) -> Rational64 {
        self.spec.delta_q()
    }

    fn default_kernel(&self) -> Kernel {
        if self.spec.even_b() {
            Kernel::Sine
        } else {
            Kernel::Cosine
        }
    }

    fn off_axis_pole_distance(&self, tau: UpperHalfPoint) -> f64 {
        // poles of 1/ϑ(bz;cτ) at (k + jcτ)/b
        let ct = tau.tau() * self.spec.c() as f64;
        let frac = ct.re - ct.re.round();
        (frac * frac + ct.im * ct.im).sqrt() / self.spec.b() as f64
    }
}
