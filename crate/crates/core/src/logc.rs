use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;

/// A complex number `e^{log_mag + i·phase}`.
///
/// Zero is represented by `log_mag == -inf`. The phase is kept in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_mag: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: LogComplex = LogComplex { log_mag: 0.0, phase: 0.0 };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        LogComplex { log_mag, phase: wrap_phase(phase) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex { log_mag: z.norm().ln(), phase: z.im.atan2(z.re) }
    }

    /// `e^{l}` for a complex logarithm `l`.
    pub fn exp(l: Complex64) -> Self {
        Self::new(l.re, l.im)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            LogComplex { log_mag: x.ln(), phase: 0.0 }
        } else {
            LogComplex { log_mag: (-x).ln(), phase: PI }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn is_finite(&self) -> bool {
        self.is_zero() || (self.log_mag.is_finite() && self.phase.is_finite())
    }

    /// Principal logarithm as a complex number.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_mag, self.phase)
    }

    /// Convert back to a plain complex number. Overflows to infinity and
    /// underflows to zero outside the `f64` range.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn abs(&self) -> f64 {
        self.log_mag.exp()
    }

    pub fn recip(&self) -> Self {
        LogComplex::new(-self.log_mag, -self.phase)
    }

    /// `self^p` on the principal branch.
    pub fn powf(&self, p: f64) -> Self {
        if self.is_zero() {
            return if p > 0.0 { Self::ZERO } else { LogComplex::new(f64::INFINITY, 0.0) };
        }
        LogComplex::new(self.log_mag * p, self.phase * p)
    }

    /// Integer power; exact on the phase (no branch ambiguity).
    pub fn powi(&self, k: i32) -> Self {
        if self.is_zero() {
            return if k > 0 { Self::ZERO } else { LogComplex::new(f64::INFINITY, 0.0) };
        }
        LogComplex::new(self.log_mag * k as f64, self.phase * k as f64)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        *self * LogComplex::from_complex(c)
    }

    /// Sum by factoring out the largest magnitude. Terms are combined in the
    /// order given, so the result is reproducible for a fixed input order.
    pub fn sum<I: IntoIterator<Item = LogComplex>>(terms: I) -> LogComplex {
        let terms: Vec<LogComplex> = terms.into_iter().collect();
        let top = terms
            .iter()
            .filter(|t| !t.is_zero())
            .map(|t| t.log_mag)
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if !top.is_finite() {
            return LogComplex::new(top, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &terms {
            if !t.is_zero() {
                acc += Complex64::from_polar((t.log_mag - top).exp(), t.phase);
            }
        }
        let mut s = LogComplex::from_complex(acc);
        if !s.is_zero() {
            s.log_mag += top;
        }
        s
    }

    pub fn add(self, other: LogComplex) -> LogComplex {
        LogComplex::sum([self, other])
    }

    pub fn sub(self, other: LogComplex) -> LogComplex {
        LogComplex::sum([self, -other])
    }

    /// `|self| / |other|` computed from the logs.
    pub fn abs_ratio(&self, other: &LogComplex) -> f64 {
        (self.log_mag - other.log_mag).exp()
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        self * rhs.recip()
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(self.log_mag, self.phase + PI)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({:.12} {:+.12}i)", self.log_mag, self.phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn round_trip() {
        let z = Complex64::new(-3.5, 0.25);
        let back = LogComplex::from_complex(z).to_complex();
        assert_relative_eq!(back.re, z.re, max_relative = 1e-15);
        assert_relative_eq!(back.im, z.im, max_relative = 1e-14);
    }

    #[test]
    fn sum_of_huge_terms_does_not_overflow() {
        let a = LogComplex::new(1000.0, 0.0);
        let b = LogComplex::new(1000.0 + 2f64.ln(), 0.0);
        let s = LogComplex::sum([a, b]);
        assert_relative_eq!(s.log_mag, 1000.0 + 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn cancellation_to_zero() {
        let a = LogComplex::new(5.0, 0.3);
        assert!(a.sub(a).is_zero());
    }

    #[test]
    fn phase_is_wrapped() {
        let a = LogComplex::new(0.0, 3.0) * LogComplex::new(0.0, 3.0);
        assert!(a.phase > -PI && a.phase <= PI);
        assert_relative_eq!(a.phase, 6.0 - 2.0 * PI, epsilon = 1e-15);
    }
}
