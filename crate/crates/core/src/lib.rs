//! Numerical building blocks shared by the theta-quotient crates.
//!
//! * [`LogComplex`]: complex numbers stored as `(ln|z|, arg z)` so that
//!   products of values like `e^{±700}` never overflow.
//! * [`quad`]: Gauss–Legendre rules, composite and adaptive integration of
//!   complex-valued integrands.
//! * [`special`]: Faddeeva function, complex error function and modified
//!   Bessel functions of real order.

pub mod logc;
pub mod quad;
pub mod special;

pub use logc::LogComplex;
pub use num_complex::Complex64;

/// `2π`
pub const TAU: f64 = std::f64::consts::TAU;

/// Imaginary unit.
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Principal complex logarithm that maps 0 to `-inf`.
#[inline]
pub fn ln(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), z.im.atan2(z.re))
}
