//! The crank statistic: exact enumeration and the pole-free generating function
//! `F(z;τ) = −2 sin(πz) q^{1/24} η(τ)² / ϑ(z;τ) = Σ M(m,n) ζ^m qⁿ`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use theta_asym_core::{LogComplex, I, TAU};
use theta_modular::theta::{theta_jet, ThetaMethod};
use theta_modular::{eta_log, EllipticArg, EvalPath, TruncationBudget, UpperHalfPoint};

use crate::form::{FormSlice, JacobiForm, Kernel};
use crate::{PvError, Result};

const MAX_N: u32 = 40;

/// Crank counts `M(m,n)` by enumerating the partitions of `n`.
///
/// For `n = 1` the generating-function values `M(−1,1) = M(1,1) = 1`,
/// `M(0,1) = −1` are returned; the two-case rule would give the single
/// partition crank −1, but the generating function is what the extractor sees.
pub fn crank_oracle(n: u32) -> Result<BTreeMap<i64, i64>> {
    if n > MAX_N {
        return Err(PvError::ScaleExceeded(n));
    }
    if n == 0 {
        return Err(PvError::InvalidInput("crank counts need n >= 1".into()));
    }
    let mut counts = BTreeMap::new();
    if n == 1 {
        counts.extend([(-1, 1), (0, -1), (1, 1)]);
        return Ok(counts);
    }
    let mut parts = Vec::new();
    enumerate(n, n, &mut parts, &mut |p| {
        *counts.entry(crank(p)).or_insert(0) += 1;
    });
    Ok(counts)
}

/// Largest part if there are no ones, otherwise the number of parts larger
/// than the number of ones minus the number of ones.
fn crank(parts: &[u32]) -> i64 {
    let ones = parts.iter().filter(|&&p| p == 1).count() as i64;
    if ones == 0 {
        return parts.iter().copied().max().unwrap_or(0) as i64;
    }
    let larger = parts.iter().filter(|&&p| p as i64 > ones).count() as i64;
    larger - ones
}

/// Visit the partitions of `n` into parts of size at most `max`, non-increasing.
fn enumerate(n: u32, max: u32, parts: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if n == 0 {
        visit(parts);
        return;
    }
    for p in (1..=max.min(n)).rev() {
        parts.push(p);
        enumerate(n - p, p, parts, visit);
        parts.pop();
    }
}

/// `p(n)` from Euler's pentagonal number recurrence.
pub fn partition_count(n: u32) -> u128 {
    let n = n as usize;
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut acc = 0i128;
        for k in 1.. {
            let k = k as i64;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let mut any = false;
            for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
                if g as usize <= i {
                    acc += sign * p[i - g as usize];
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        p[i] = acc;
    }
    p[n] as u128
}

/// The crank generating function as a [`JacobiForm`]. Its only poles on the
/// real line are at the integers, where the sine factor cancels them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CrankForm {
    pub budget: TruncationBudget,
}

#[derive(Debug, Clone)]
pub struct CrankSlice {
    tau: UpperHalfPoint,
    budget: TruncationBudget,
    log_prefactor: Complex64,
}

impl JacobiForm for CrankForm {
    type Slice = CrankSlice;

    fn slice(&self, tau: UpperHalfPoint) -> Result<CrankSlice> {
        let eta = eta_log(tau, &self.budget, EvalPath::Auto)?.ln();
        let log_prefactor = I * TAU * tau.tau() / 24.0 + 2.0 * eta;
        Ok(CrankSlice { tau, budget: self.budget, log_prefactor })
    }

    fn poles(&self) -> Vec<f64> {
        Vec::new()
    }

    fn delta_q(&self) -> Rational64 {
        Rational64::from_integer(0)
    }

    fn default_kernel(&self) -> Kernel {
        Kernel::Exponential
    }

    fn off_axis_pole_distance(&self, tau: UpperHalfPoint) -> f64 {
        let t = tau.tau();
        let frac = t.re - t.re.round();
        (frac * frac + t.im * t.im).sqrt()
    }
}

impl FormSlice for CrankSlice {
    fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let jet = theta_jet(EllipticArg::new(z), self.tau, &self.budget, ThetaMethod::Product, EvalPath::Auto)?;
        let s = (PI * z).sin();
        Ok((self.log_prefactor - jet.log_scale, -2.0 * s / jet.value))
    }

    fn residue_log(&self, h: f64) -> Result<LogComplex> {
        Err(PvError::InvalidInput(format!("the crank generating function has no pole at {h}")))
    }
}
