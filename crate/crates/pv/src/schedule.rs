use std::f64::consts::PI;

/// Largest admissible `|m|` at `n`: `⌊ n^{−δ} log n / (6β) ⌋` with `β = π√(2/n)`.
pub fn m_schedule(n: f64, delta: f64) -> u32 {
    let beta = PI * (2.0 / n).sqrt();
    let v = n.powf(-delta) * n.ln() / (6.0 * beta);
    if v.is_finite() && v > 0.0 {
        v.floor() as u32
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(m_schedule(2500.0, 0.05), 9);
        assert_eq!(m_schedule(400.0, 0.05), 3);
        assert_eq!(m_schedule(1600.0, 0.05), 7);
        assert_eq!(m_schedule(3600.0, 0.05), 12);
    }
}
