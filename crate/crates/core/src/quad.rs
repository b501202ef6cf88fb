//! Gauss–Legendre quadrature for complex-valued integrands.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Compute the rule by Newton iteration on `P_n`.
    pub fn compute(n: usize) -> GaussLegendre {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(c + h * x) * *w;
        }
        s * h
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared, lazily computed rule of order `n`.
pub fn rule(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(GaussLegendre::compute(n))).clone()
}

/// Composite rule: `panels` equal panels of `order` nodes each.
pub fn composite<F: FnMut(f64) -> Complex64>(a: f64, b: f64, panels: usize, order: usize, mut f: F) -> Complex64 {
    let gl = rule(order);
    let h = (b - a) / panels as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + h * p as f64;
        s += gl.integrate(lo, lo + h, &mut f);
    }
    s
}

/// Node positions and weights of a composite rule, in panel order.
pub fn composite_nodes(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let gl = rule(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let c = a + h * (p as f64 + 0.5);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            out.push((c + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveConfig {
    /// Nodes per panel.
    pub order: usize,
    /// Tolerance relative to the estimated `∫|f|`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Equal subdivisions of every input interval before refinement starts.
    pub initial_panels: usize,
    pub max_evals: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        AdaptiveConfig {
            order: 16,
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_depth: 40,
            initial_panels: 2,
            max_evals: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Sum of the refinement deltas of the accepted panels.
    pub err: f64,
    /// Estimate of `∫|f|` from the initial panels.
    pub abs_integral: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Adaptive bisection over the intervals delimited by `breaks` (which must be
/// increasing). A panel is accepted once the two-half estimate agrees with the
/// whole-panel estimate to within its share of the global tolerance.
pub fn adaptive<F: FnMut(f64) -> Complex64>(mut f: F, breaks: &[f64], cfg: &AdaptiveConfig) -> QuadResult {
    adaptive_with_noise(|x| (f(x), 0.0), breaks, cfg)
}

/// Like [`adaptive`], but `f` also returns the magnitude of the rounding noise
/// in its value. Panels whose refinement delta is already at the integrated
/// noise level are accepted; this matters when the integrand is a small
/// difference of large terms, as after subtracting a pole.
pub fn adaptive_with_noise<F: FnMut(f64) -> (Complex64, f64)>(mut f: F, breaks: &[f64], cfg: &AdaptiveConfig) -> QuadResult {
    assert!(breaks.len() >= 2, "need at least one interval");
    let gl = rule(cfg.order);
    let total = breaks[breaks.len() - 1] - breaks[0];
    // (value, ∫|f|, ∫noise) on one panel
    let mut panel = |a: f64, b: f64| -> (Complex64, f64, f64) {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        let mut s = Complex64::new(0.0, 0.0);
        let (mut sa, mut sn) = (0.0, 0.0);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let (v, n) = f(c + h * x);
            s += v * *w;
            sa += v.norm() * *w;
            sn += n * *w;
        }
        (s * h, sa * h.abs(), sn * h.abs())
    };
    let mut panels: Vec<(f64, f64, Complex64)> = Vec::new();
    let mut abs_integral = 0.0;
    let mut evals = 0usize;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let k = cfg.initial_panels.max(1);
        let h = (b - a) / k as f64;
        for j in 0..k {
            let lo = a + h * j as f64;
            let hi = if j + 1 == k { b } else { lo + h };
            let (v, va, _) = panel(lo, hi);
            evals += gl.len();
            abs_integral += va;
            panels.push((lo, hi, v));
        }
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * abs_integral);
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut converged = true;
    // Explicit stack, left panel processed first: the summation order is fixed.
    let mut stack: Vec<(f64, f64, Complex64, u32)> = panels.into_iter().rev().map(|(a, b, v)| (a, b, v, 0)).collect();
    while let Some((a, b, whole, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let (left, _, nl) = panel(a, m);
        let (right, _, nr) = panel(m, b);
        evals += 2 * gl.len();
        let refined = left + right;
        let delta = (refined - whole).norm();
        let share = if total > 0.0 { tol * (b - a) / total } else { tol };
        // Deltas at rounding level cannot shrink further.
        let share = share.max(64.0 * f64::EPSILON * refined.norm()).max(nl + nr);
        if delta <= share || !delta.is_finite() {
            value += refined;
            err += delta;
            if !delta.is_finite() {
                converged = false;
            }
        } else if depth >= cfg.max_depth || evals >= cfg.max_evals {
            value += refined;
            err += delta;
            converged = false;
        } else {
            stack.push((m, b, right, depth + 1));
            stack.push((a, m, left, depth + 1));
        }
    }
    QuadResult { value, err, abs_integral, evals, converged }
}

/// Adaptive integration of an analytic `f` along the polygon through `points`.
pub fn adaptive_path<F: FnMut(Complex64) -> Complex64>(mut f: F, points: &[Complex64], cfg: &AdaptiveConfig) -> QuadResult {
    adaptive_path_with_noise(|p| (f(p), 0.0), points, cfg)
}

/// [`adaptive_path`] with a rounding-noise magnitude per evaluation, as in
/// [`adaptive_with_noise`].
pub fn adaptive_path_with_noise<F: FnMut(Complex64) -> (Complex64, f64)>(mut f: F, points: &[Complex64], cfg: &AdaptiveConfig) -> QuadResult {
    assert!(points.len() >= 2, "path needs two points");
    let breaks: Vec<f64> = (0..points.len()).map(|i| i as f64).collect();
    let last = points.len() - 2;
    adaptive_with_noise(
        |t| {
            let i = (t.floor() as usize).min(last);
            let s = t - i as f64;
            let d = points[i + 1] - points[i];
            let (v, noise) = f(points[i] + d * s);
            (v * d, noise * d.norm())
        },
        &breaks,
        cfg,
    )
}
