use std::f64::consts::PI;

use theta_modular::QuotientSpec;

use crate::{ratio_f64, AsymError, Result};

/// Pieces of the away-from-pole bound, all natural logs except `b_mn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcExponentTerms {
    /// `ln(s+1)`, with `s + 1 = b` segments of `[0,1]`.
    pub log_segments: f64,
    pub log_b_mn: f64,
    /// `Σ_k (2πδ_k/(y_kβ))(π/12 − (1/2π)(1 − (1+m^{−2/3})^{−1/2}))`.
    pub p_q_exponent: f64,
    /// `−Σ_j π²γ_j/(6x_jβ)`.
    pub eta_exponent: f64,
    /// `π√(2n)(1 − Σα_j/(12a_j))`.
    pub e_growth: f64,
    /// `−Σ_k (δ_k/(y_kβ))(1 − (1+m^{−2/3})^{−1/2})`.
    pub e_decay: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcBound {
    /// `ln[(s+1) B(m,n) exp(p_q_exponent + eta_exponent)]`, the bound on
    /// `|f_m|` away from the dominant pole.
    pub log_bound: f64,
    /// `ln[((s+1)/π) B(m,n) exp(e_growth + e_decay)]`, the bound on the error arc `E`.
    pub log_e_bound: f64,
    /// `B(m,n) = n^{1/4 − Σδ_k/4} Π_j (2π/(x_jβ))^{γ_j/2}`.
    pub b_mn: f64,
    pub exponent_terms: ArcExponentTerms,
}

fn drift(m: f64) -> f64 {
    1.0 - (1.0 + m.powf(-2.0 / 3.0)).powf(-0.5)
}

/// `ln[n^{−1/4} exp((2π/β)(π/12 − (1/2π)(1 − (1+m^{−2/3})^{−1/2})))]`,
/// the bound on `|q^{1/24}/η(τ)|` along the error arc.
pub fn pq_bound(m: f64, n: f64) -> f64 {
    let b = PI * (2.0 / n).sqrt();
    -0.25 * n.ln() + (2.0 * PI / b) * (PI / 12.0 - drift(m) / (2.0 * PI))
}

/// `ln[√v exp((1/v)(π/12 − (1/2π)(1 − 1/√(1+M²))))]` for `Mv ≤ u ≤ 1/2`.
pub fn pq_lemma_bound(v: f64, big_m: f64) -> f64 {
    0.5 * v.ln() + (PI / 12.0 - (1.0 - (1.0 + big_m * big_m).powf(-0.5)) / (2.0 * PI)) / v
}

/// Bound on `|f_m(iε/2π)|` for `1 ≤ |x| ≤ πm^{1/3}/β`, and the resulting
/// bound on the error arc.
pub fn error_arc_bound(spec: &QuotientSpec, m: f64, n: f64) -> Result<ArcBound> {
    if !(n > 0.0 && m > 0.0 && n.is_finite() && m.is_finite()) {
        return Err(AsymError::DomainError(format!("need n, m > 0, got n = {n}, m = {m}")));
    }
    let b = PI * (2.0 / n).sqrt();
    let pos = spec.positive_split();
    let neg = spec.negative_split();
    let sum_delta: f64 = neg.iter().map(|(_, d)| *d as f64).sum();
    let mut log_b_mn = (0.25 - 0.25 * sum_delta) * n.ln();
    let mut eta_exponent = 0.0;
    for (x, g) in &pos {
        let (x, g) = (*x as f64, *g as f64);
        log_b_mn += 0.5 * g * (2.0 * PI / (x * b)).ln();
        eta_exponent -= PI * PI * g / (6.0 * x * b);
    }
    let mut p_q_exponent = 0.0;
    let mut e_decay = 0.0;
    for (y, d) in &neg {
        let (y, d) = (*y as f64, *d as f64);
        p_q_exponent += (2.0 * PI * d / (y * b)) * (PI / 12.0 - drift(m) / (2.0 * PI));
        e_decay -= (d / (y * b)) * drift(m);
    }
    let log_segments = (spec.b() as f64).ln();
    let e_growth = PI * (2.0 * n).sqrt() * (1.0 - ratio_f64(spec.sum_alpha_over_a()) / 12.0);
    let terms = ArcExponentTerms { log_segments, log_b_mn, p_q_exponent, eta_exponent, e_growth, e_decay };
    Ok(ArcBound {
        log_bound: log_segments + log_b_mn + p_q_exponent + eta_exponent,
        log_e_bound: log_segments - PI.ln() + log_b_mn + e_growth + e_decay,
        b_mn: log_b_mn.exp(),
        exponent_terms: terms,
    })
}
