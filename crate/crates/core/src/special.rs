//! Faddeeva function, complex error function and modified Bessel `I_ν`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::LogComplex;

const WEIDEMAN_N: usize = 40;

struct Weideman {
    l: f64,
    coeffs: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        // f_k = e^{-t_k^2}(L^2 + t_k^2), t_k = L tan(kπ/2M), k = 0..M-1; even in k.
        let f: Vec<f64> = (0..m)
            .map(|k| {
                let t = l * (k as f64 * PI / (2 * m) as f64).tan();
                (-t * t).exp() * (l * l + t * t)
            })
            .collect();
        // Real DFT of the even sequence over 2M points (the k = -M sample is 0).
        let coeffs = (1..=n)
            .map(|j| {
                let mut s = f[0];
                for (k, fk) in f.iter().enumerate().skip(1) {
                    s += 2.0 * fk * (PI * (j * k) as f64 / m as f64).cos();
                }
                s / (2 * m) as f64
            })
            .collect();
        Weideman { l, coeffs }
    })
}

/// Faddeeva function `w(z) = e^{-z²} erfc(-iz)`.
///
/// Weideman's rational approximation, accurate to about `1e-14` relative in
/// the closed upper half plane; the lower half plane uses the reflection
/// `w(z) = 2e^{-z²} - w(-z)`.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return (-z * z).exp() * 2.0 - faddeeva(-z);
    }
    let tab = weideman();
    let i = Complex64::new(0.0, 1.0);
    let lz = Complex64::new(tab.l, 0.0) - i * z;
    let big_z = (Complex64::new(tab.l, 0.0) + i * z) / lz;
    let mut p = Complex64::new(0.0, 0.0);
    for c in tab.coeffs.iter().rev() {
        p = p * big_z + c;
    }
    p * 2.0 / (lz * lz) + 1.0 / (PI.sqrt() * lz)
}

/// Complex error function.
pub fn erf(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        return erf_series(z);
    }
    let s = if z.re >= 0.0 { 1.0 } else { -1.0 };
    let sz = z * s;
    // erf(sz) = 1 - e^{-z²} w(i·sz), Im(i·sz) = Re(sz) ≥ 0.
    let i = Complex64::new(0.0, 1.0);
    let v = Complex64::new(1.0, 0.0) - (-z * z).exp() * faddeeva(i * sz);
    v * s
}

fn erf_series(z: Complex64) -> Complex64 {
    // erf z = 2/√π Σ (-1)^k z^{2k+1} / (k!(2k+1))
    let z2 = z * z;
    let mut term = z;
    let mut s = z;
    for k in 1..40 {
        term = -term * z2 / k as f64;
        let add = term / (2 * k + 1) as f64;
        s += add;
        if add.norm() < 1e-17 * s.norm() {
            break;
        }
    }
    s * (2.0 / PI.sqrt())
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`; `None` at the poles `x = 0, -1, ...`.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x <= 0.0 && x == x.floor() {
        return None;
    }
    let (lg, sign) = libm::lgamma_r(x);
    Some((lg, sign as f64))
}

/// `I_ν(x)` for real order `ν` and `x > 0` from the ascending series, summed
/// in the log domain. Valid for any `x` that keeps the number of terms
/// reasonable (a few thousand), so up to `x ≈ 10⁵`.
pub fn bessel_i_series(nu: f64, x: f64) -> LogComplex {
    assert!(x > 0.0, "bessel_i_series needs x > 0");
    // I_{-k} = I_k for integer k.
    let nu = if nu < 0.0 && nu == nu.floor() { -nu } else { nu };
    let lx = (0.5 * x).ln();
    let term = |k: usize| -> Option<LogComplex> {
        let kf = k as f64;
        let (lg, sign) = ln_gamma_signed(kf + nu + 1.0)?;
        let lk = (2.0 * kf + nu) * lx - libm::lgamma(kf + 1.0) - lg;
        Some(LogComplex::new(lk, if sign < 0.0 { PI } else { 0.0 }))
    };
    // Terms grow until k ≈ x/2 and then decay; stop once they are negligible.
    let peak = (0.5 * x).ceil() as usize + 2;
    let mut terms = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut k = 0usize;
    loop {
        if let Some(t) = term(k) {
            best = best.max(t.log_mag);
            let negligible = t.log_mag < best - 40.0;
            terms.push(t);
            if k > peak && negligible {
                break;
            }
        }
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    LogComplex::sum(terms)
}

/// Leading asymptotic `I_ν(x) ≈ e^x / √(2πx)` in the log domain.
pub fn bessel_i_leading(x: f64) -> LogComplex {
    LogComplex::new(x - 0.5 * (2.0 * PI * x).ln(), 0.0)
}
