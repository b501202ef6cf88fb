//! The invariants of every layer, run against the spec of a configuration
//! and reported one line per property.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_asym_core::quad::{adaptive, AdaptiveConfig};
use theta_modular::{eval_eta, eval_quotient, eval_theta, leading_factor, margin, EllipticArg, QuotientSpec, ThetaMethod, TruncationBudget, UpperHalfPoint};
use theta_pv::{
    cauchy_extract, cauchy_extract_with, crank_oracle, default_beta, fm_pv, fm_segments_only, m_schedule, normalized_integrand, on_lattice, residue_at_pole, saddle_beta, semicircle_g,
    CauchyOptions, CrankForm, JacobiForm, Kernel, PvMethod, QuadratureConfig, QuotientForm, Side,
};
use theta_wright::{
    bessel_i, constants, erf_eval, error_arc_bound, fm_near_pole_main, gauss_sine_integral, main_term, major_arc, AsymptoticConstants, BesselMode, ErfMode, MajorArcMode,
};

use crate::config::{ExperimentConfig, MValues, QuadInput};
use crate::experiment::{csv_string, run_ratio_experiment};
use crate::CliError;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not run because a precondition failed; the precondition carries the failure.
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub id: &'static str,
    pub tolerance: String,
    pub observed: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PropertyReport {
    pub results: Vec<PropertyResult>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.id == id)
    }

    /// Tab-separated: id, tolerance, observed, verdict.
    pub fn to_text(&self) -> String {
        let mut s = String::from("id\ttolerance\tobserved\tverdict\n");
        for r in &self.results {
            s.push_str(&format!("{}\t{}\t{}\t{}\n", r.id, r.tolerance, r.observed, r.verdict));
        }
        let failed = self.results.iter().filter(|r| r.verdict == Verdict::Fail).count();
        s.push_str(&format!("# {} properties, {} failed\n", self.results.len(), failed));
        s
    }
}

type Outcome = Result<(String, bool), String>;

fn bound(observed: f64, tol: f64) -> Outcome {
    Ok((format!("{observed:.3e}"), observed <= tol))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Ctx {
    spec: QuotientSpec,
    form: QuotientForm,
    budget: TruncationBudget,
    quad: QuadratureConfig,
    quad_input: QuadInput,
    constants: Option<AsymptoticConstants>,
}

/// Runs every property against the spec, quadrature and truncation of `cfg`.
///
/// An invalid spec is a configuration error. A spec outside the window of
/// the asymptotics fails the `wa.window` precondition and skips the
/// properties that need it.
pub fn run_property_suite(cfg: &ExperimentConfig) -> Result<PropertyReport, CliError> {
    cfg.validate()?;
    let spec = cfg.spec.build()?;
    let budget = cfg.budget();
    let ctx = Ctx {
        form: QuotientForm { spec: spec.clone(), budget },
        spec,
        budget,
        quad: cfg.quadrature(),
        quad_input: cfg.quad.clone(),
        constants: None,
    };
    let window = constants(&ctx.spec);
    let ctx = Ctx { constants: window.as_ref().ok().cloned(), ..ctx };
    let mut report = PropertyReport::default();
    let mut push = |id: &'static str, tolerance: String, out: Option<Outcome>| {
        let (observed, verdict) = match out {
            None => ("precondition failed".to_string(), Verdict::Skip),
            Some(Ok((obs, ok))) => (obs, if ok { Verdict::Pass } else { Verdict::Fail }),
            Some(Err(e)) => (format!("error: {e}"), Verdict::Fail),
        };
        report.results.push(PropertyResult { id, tolerance, observed, verdict });
    };
    let t = budget.target_rel_err;
    push("mk.theta_odd", format!("{t:e}"), Some(theta_odd(&ctx)));
    push("mk.theta_methods", format!("{:e}", 10.0 * t), Some(theta_methods(&ctx)));
    push("mk.modular_consistency", "1e-10".into(), Some(modular_consistency(&ctx)));
    push("mk.leading_factor_constant", "factor 10".into(), Some(leading_factor_constant(&ctx)));
    push("mk.reality", "1e-9".into(), Some(reality(&ctx)));

    push("pv.r_refinement", "ratio 2 +- 0.2".into(), Some(r_refinement(&ctx)));
    push("pv.plan_radius", "error estimate".into(), Some(plan_radius(&ctx)));
    push("pv.residue_cancellation", "R^2 >= 0.95".into(), Some(residue_cancellation(&ctx)));
    push("pv.residue_limit", "1e-4".into(), Some(residue_limit(&ctx)));
    push("pv.kernel_parity", "1e-12".into(), Some(kernel_parity(&ctx)));
    push("pv.lattice_periodic", "1e-10".into(), Some(lattice_periodic(&ctx)));
    push("pv.crank_exact", "1e-6".into(), Some(crank_exact(&ctx)));
    push("pv.symmetry", "1e-8".into(), Some(symmetry(&ctx)));

    let window_out = match &window {
        Ok(k) => Ok((format!("Lambda2 = {}, growth base = {}", k.lambda2, k.growth_base), true)),
        Err(e) => Ok((e.to_string(), false)),
    };
    push("wa.window", "precondition".into(), Some(window_out));
    let k = ctx.constants.as_ref();
    push("wa.exponent_consistency", "0.01".into(), k.map(|k| exponent_consistency(&ctx, k)));
    push("wa.bessel_quadrature_duality", "decreasing".into(), k.map(|_| duality(&ctx)));
    push("wa.erf_sector", "|z|^-2".into(), Some(erf_sector()));
    push("wa.main_term_identity", "1e-12".into(), k.map(|_| main_term_identity(&ctx)));
    push("wa.e_below_m", "margin 0.05".into(), k.map(|k| e_below_m(&ctx, k)));
    push("wa.gauss_sine", "1e-9".into(), Some(gauss_sine()));
    push("wa.bessel_i0", "0.005".into(), Some(bessel_i0()));

    push("cli.csv_determinism", "byte-identical".into(), k.map(|_| csv_determinism(cfg)));
    Ok(report)
}

fn upper(re: f64, im: f64) -> Result<UpperHalfPoint, String> {
    UpperHalfPoint::new(Complex64::new(re, im)).map_err(err)
}

fn theta_odd(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let ti = rng.gen_range(0.05..2.0);
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.3..0.3) * ti);
        let tau = upper(rng.gen_range(-0.5..0.5), ti)?;
        let p = eval_theta(EllipticArg::new(z), tau, &ctx.budget, ThetaMethod::Product).map_err(err)?;
        let m = eval_theta(EllipticArg::new(-z), tau, &ctx.budget, ThetaMethod::Product).map_err(err)?;
        worst = worst.max((p + m).norm() / p.norm());
    }
    bound(worst, ctx.budget.target_rel_err)
}

fn theta_methods(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let ti = rng.gen_range(0.05..2.0);
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5) * ti);
        let tau = upper(rng.gen_range(-0.5..0.5), ti)?;
        let p = eval_theta(EllipticArg::new(z), tau, &ctx.budget, ThetaMethod::Product).map_err(err)?;
        let s = eval_theta(EllipticArg::new(z), tau, &ctx.budget, ThetaMethod::Sum).map_err(err)?;
        worst = worst.max(rel(s, p));
    }
    bound(worst, 10.0 * ctx.budget.target_rel_err)
}

fn modular_consistency(ctx: &Ctx) -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..20 {
        let x = k as f64 / 20.0;
        let t = Complex64::new(-0.5 + x, 0.6 + 0.5 * (3.0 * x).sin().abs());
        let z = Complex64::new(0.37 * x - 0.1, 0.05 * (x - 0.5));
        let ut = UpperHalfPoint::new(t).map_err(err)?;
        let inv = UpperHalfPoint::new(-t.inv()).map_err(err)?;
        let eta = eval_eta(ut, &ctx.budget).map_err(err)?;
        let eta_inv = eval_eta(inv, &ctx.budget).map_err(err)?;
        worst = worst.max(rel(eta, (I / t).sqrt() * eta_inv));
        let th = eval_theta(EllipticArg::new(z), ut, &ctx.budget, ThetaMethod::Product).map_err(err)?;
        let th_inv = eval_theta(EllipticArg::new(z / t), inv, &ctx.budget, ThetaMethod::Product).map_err(err)?;
        let rhs = I / (-I * t).sqrt() * (-PI * I * z * z / t).exp() * th_inv;
        worst = worst.max(rel(th, rhs));
    }
    bound(worst, 1e-10)
}

/// `K = |f/C − 1| e^{4π²M(z)/ε}` over a decade of `ε` near the first pole,
/// where `M(z)` is small enough for the correction to stay above rounding.
fn leading_factor_constant(ctx: &Ctx) -> Outcome {
    let z = 0.9 / ctx.spec.b() as f64;
    let mz = margin(&ctx.spec, z).map_err(err)?.mz;
    let mut ks = Vec::new();
    for eps in [0.25, 0.4, 0.7, 1.2, 2.5] {
        let e = Complex64::new(eps, 0.0);
        let tau = UpperHalfPoint::from_eps(e).map_err(err)?;
        let f = eval_quotient(&ctx.spec, EllipticArg::real(z), tau, &ctx.budget).map_err(err)?;
        let c = leading_factor(&ctx.spec, z, e).map_err(err)?.to_complex();
        ks.push((f / c - 1.0).norm() / (-4.0 * PI * PI * mz / eps).exp());
    }
    let lo = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ks.iter().cloned().fold(0.0, f64::max);
    Ok((format!("K in [{lo:.3e}, {hi:.3e}]"), lo > 0.0 && hi / lo < 10.0))
}

fn reality(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = ctx.spec.b() as f64;
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < 100 {
        let z: f64 = rng.gen_range(0.01..0.99);
        let ti = rng.gen_range(0.01..1.0);
        if ((b * z) - (b * z).round()).abs() < 1e-3 {
            continue;
        }
        let f = eval_quotient(&ctx.spec, EllipticArg::real(z), upper(0.0, ti)?, &ctx.budget).map_err(err)?;
        worst = worst.max(f.im.abs() / f.norm());
        taken += 1;
    }
    bound(worst, 1e-9)
}

/// Dropping the windows without semicircles misses the PV by `O(r)`: halving
/// `r` halves the miss.
fn r_refinement(ctx: &Ctx) -> Outcome {
    let tau = upper(0.1, 0.3)?;
    let pv = fm_pv(&ctx.form, 1.0, tau, &ctx.quad).map_err(err)?.value.to_complex();
    let mut d = Vec::new();
    for r in [2e-2, 1e-2, 5e-3] {
        d.push((fm_segments_only(&ctx.form, 1.0, tau, r, &ctx.quad).map_err(err)?.value.to_complex() - pv).norm());
    }
    let ratios: Vec<f64> = d.windows(2).map(|w| w[0] / w[1]).collect();
    let worst = ratios.iter().map(|r| (r - 2.0).abs()).fold(0.0, f64::max);
    Ok((format!("ratios {:.4}, {:.4}", ratios[0], ratios[1]), worst <= 0.2))
}

/// The PV does not depend on the configured deletion radii.
fn plan_radius(ctx: &Ctx) -> Outcome {
    let tau = upper(0.2, 0.1)?;
    let mut vals = Vec::new();
    for r in &ctx.quad_input.r_sequence {
        let q = QuadratureConfig { r_sequence: vec![*r], ..ctx.quad.clone() };
        vals.push(fm_pv(&ctx.form, 2.0, tau, &q).map_err(err)?);
    }
    let base = vals[0];
    let mut worst = 0.0f64;
    let mut ok = true;
    for v in &vals[1..] {
        let d = (v.value.to_complex() - base.value.to_complex()).norm();
        let allowed = v.err_log.exp() + base.err_log.exp() + 1e-13 * base.value.abs();
        worst = worst.max(d / base.value.abs());
        ok &= d <= allowed;
    }
    Ok((format!("{worst:.3e} relative over {} radii", vals.len()), ok))
}

/// Index of the pole closest to 1/2. For even `b` this is the pole at 1/2,
/// about which the form is odd, so the semicircle integrals approach their
/// limits without a constant-term correction.
fn central_pole(ctx: &Ctx) -> (usize, f64) {
    let poles = ctx.form.poles();
    let mut best = (0, poles[0]);
    for (i, h) in poles.iter().enumerate() {
        if (h - 0.5).abs() < (best.1 - 0.5).abs() {
            best = (i, *h);
        }
    }
    best
}

/// `|G⁺ + G⁻|` against `r` is fitted by a line through the origin.
fn residue_cancellation(ctx: &Ctx) -> Outcome {
    let tau = upper(0.0, 0.3)?;
    let (ell, _) = central_pole(ctx);
    let mut pts = Vec::new();
    // 0.1 unless the poles are closer than that
    for r in [(1e-1f64).min(0.45 / ctx.spec.b() as f64), 1e-2, 1e-3] {
        let gp = semicircle_g(&ctx.form, ell, tau, r, Side::Above, 1.0).map_err(err)?.to_complex();
        let gm = semicircle_g(&ctx.form, ell, tau, r, Side::Below, 1.0).map_err(err)?.to_complex();
        pts.push((r, (gp + gm).norm()));
    }
    let r2 = r_squared(&pts);
    Ok((format!("R^2 = {r2:.5}, C = {:.4e}", crate::experiment::fit_constant(&pts)), r2 >= 0.95))
}

/// Coefficient of determination of the through-origin fit `y ≈ C x`.
pub fn r_squared(pts: &[(f64, f64)]) -> f64 {
    let c = crate::experiment::fit_constant(pts);
    let mean = pts.iter().map(|(_, y)| y).sum::<f64>() / pts.len() as f64;
    let ss_res: f64 = pts.iter().map(|(x, y)| (y - c * x).powi(2)).sum();
    let ss_tot: f64 = pts.iter().map(|(_, y)| (y - mean).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// `G⁺` at `r = 1e−4` against `−πi·Res`, with the kernel at `m = 0`.
fn residue_limit(ctx: &Ctx) -> Outcome {
    let tau = upper(0.0, 0.3)?;
    let (ell, h) = central_pole(ctx);
    let res = residue_at_pole(&ctx.spec, h, tau, &ctx.budget).map_err(err)?;
    let g = semicircle_g(&ctx.form, ell, tau, 1e-4, Side::Above, 0.0).map_err(err)?.to_complex();
    bound(rel(g, Complex64::new(0.0, -PI) * res), 1e-4)
}

fn kernel_parity(ctx: &Ctx) -> Outcome {
    let tau = upper(0.13, 0.2)?;
    let sign = match ctx.form.default_kernel() {
        Kernel::Sine => -1.0,
        _ => 1.0,
    };
    let mut worst = 0.0f64;
    for m in [1.0, 2.5] {
        let a = fm_pv(&ctx.form, m, tau, &ctx.quad).map_err(err)?.value.to_complex();
        let b = fm_pv(&ctx.form, -m, tau, &ctx.quad).map_err(err)?.value.to_complex();
        worst = worst.max(rel(b * sign, a));
    }
    bound(worst, 1e-12)
}

fn lattice_periodic(ctx: &Ctx) -> Outcome {
    let dq = ctx.spec.delta_q();
    let nu = 40.0 + *dq.numer() as f64 / *dq.denom() as f64;
    if !on_lattice(dq, nu) {
        return Err(format!("nu = {nu} should be on the lattice"));
    }
    let beta = default_beta(nu);
    let opts = CauchyOptions::default();
    let (a, _) = normalized_integrand(&ctx.form, 2.0, nu, beta, -PI, &ctx.quad, &opts).map_err(err)?;
    let (b, _) = normalized_integrand(&ctx.form, 2.0, nu, beta, PI, &ctx.quad, &opts).map_err(err)?;
    bound(rel(a.to_complex(), b.to_complex()), 1e-10)
}

fn crank_exact(ctx: &Ctx) -> Outcome {
    let form = CrankForm::default();
    let mut worst = 0.0f64;
    for n in 1..=20u32 {
        let oracle = crank_oracle(n).map_err(err)?;
        let nu = n as f64;
        for m in -5i64..=5 {
            let c = cauchy_extract(&form, m as f64, nu, default_beta(nu), &ctx.quad).map_err(err)?.value.to_complex();
            let expect = *oracle.get(&m).unwrap_or(&0) as f64;
            worst = worst.max((c - expect).norm());
        }
    }
    bound(worst, 1e-6)
}

/// `c(m,ν) = c(−m,ν)` where the coefficients live: half-integer `m` with the
/// exponential kernel for even `b`, integer `m` with the cosine kernel for odd `b`.
fn symmetry(ctx: &Ctx) -> Outcome {
    let dq = ctx.spec.delta_q();
    let base = *dq.numer() as f64 / *dq.denom() as f64;
    let (kernel, shift) = if ctx.spec.even_b() { (Kernel::Exponential, 0.5) } else { (Kernel::Cosine, 0.0) };
    let opts = CauchyOptions { kernel: Some(kernel), method: PvMethod::PoleSubtraction };
    let mut worst = 0.0f64;
    for (k, m) in [(60.0, 0.0), (80.0, 1.0), (100.0, 2.0)] {
        let (nu, m) = (k + base, m + shift);
        let beta = saddle_beta(&ctx.form, m, nu, &ctx.quad).map_err(err)?;
        let a = cauchy_extract_with(&ctx.form, m, nu, beta, &ctx.quad, &opts).map_err(err)?;
        let b = cauchy_extract_with(&ctx.form, -m, nu, beta, &ctx.quad, &opts).map_err(err)?;
        worst = worst.max(rel(b.value.to_complex(), a.value.to_complex()));
    }
    bound(worst, 1e-8)
}

/// Finite-difference slope of `ln|main|` in `1/ε` against `2π²Λ₂`.
fn exponent_consistency(ctx: &Ctx, k: &AsymptoticConstants) -> Outcome {
    let target = 2.0 * PI * PI * k.lambda2_f64();
    let mut worst = 0.0f64;
    for n in [400.0, 1600.0] {
        let e = default_beta(n);
        let h = 1e-4 * e;
        let lp = fm_near_pole_main(&ctx.spec, Complex64::new(e + h, 0.0)).map_err(err)?.log_mag;
        let lm = fm_near_pole_main(&ctx.spec, Complex64::new(e - h, 0.0)).map_err(err)?.log_mag;
        let d = (lp - lm) / (1.0 / (e + h) - 1.0 / (e - h));
        worst = worst.max((d / target - 1.0).abs());
    }
    bound(worst, 0.01)
}

/// `|P(quadrature)/P(Bessel) − 1|` along `n = 400, 900, 1600`. A step counts
/// as a decrease only when it exceeds the quadrature tolerance.
fn duality(ctx: &Ctx) -> Outcome {
    let mut dev = Vec::new();
    for n in [400.0, 900.0, 1600.0] {
        let m = m_schedule(n, 0.05) as f64;
        let q = major_arc(&ctx.spec, m, n, MajorArcMode::Quadrature).map_err(err)?;
        let b = major_arc(&ctx.spec, m, n, MajorArcMode::Bessel).map_err(err)?;
        dev.push(((q / b).to_complex() - 1.0).norm());
    }
    let decreasing = dev.windows(2).all(|w| w[1] < w[0] - 1e-9 * w[0].max(1.0));
    Ok((format!("{:.6e}, {:.6e}, {:.6e}", dev[0], dev[1], dev[2]), decreasing))
}

/// Samples with `|z| ∈ [5, 12]` within `π/8` of the real axis, where the
/// expansion's own exponentially small term is below `|z|⁻²`.
fn erf_sector() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for j in 0..20 {
        let r: f64 = rng.gen_range(5.0..12.0);
        let arg = rng.gen_range(-PI / 8.0..PI / 8.0) + if j % 2 == 0 { 0.0 } else { PI };
        let z = Complex64::from_polar(r, arg);
        let w = I * z;
        let a = erf_eval(w, ErfMode::Reference).map_err(err)?;
        let b = erf_eval(w, ErfMode::Asymptotic).map_err(err)?;
        worst = worst.max(((a / b).to_complex() - 1.0).norm() * r * r);
    }
    Ok((format!("max |ratio-1|*|z|^2 = {worst:.3e}"), worst <= 1.0))
}

fn main_term_identity(ctx: &Ctx) -> Outcome {
    let dq = ctx.spec.delta_q();
    let base = *dq.numer() as f64 / *dq.denom() as f64;
    let mut worst = 0.0f64;
    for n in [400.0 + base, 2500.0 + base] {
        let m = m_schedule(n, 0.05) as f64;
        let t = main_term(&ctx.spec, m, n).map_err(err)?.value;
        let a = major_arc(&ctx.spec, m, n, MajorArcMode::BesselLeading).map_err(err)?;
        worst = worst.max((t.log_mag - a.log_mag).abs()).max(theta_asym_core::logc::wrap_phase(t.phase - a.phase).abs());
    }
    bound(worst, 1e-12)
}

/// Growth rate of `ln|M| − ln E` per `π√2·Δ√n` over `n = 400, 1600, 3600`.
fn e_below_m(ctx: &Ctx, k: &AsymptoticConstants) -> Outcome {
    let ns = [400.0f64, 1600.0, 3600.0];
    let mut gaps = Vec::new();
    for n in ns {
        let m = m_schedule(n, 0.05) as f64;
        let e = error_arc_bound(&ctx.spec, m, n).map_err(err)?;
        let main = major_arc(&ctx.spec, m, n, MajorArcMode::Bessel).map_err(err)?;
        gaps.push(main.log_mag - e.log_e_bound);
    }
    let need = 2.0 * k.lambda2_f64().sqrt() - k.growth_base_f64() - 0.05;
    let rate = (0..2).map(|j| (gaps[j + 1] - gaps[j]) / (PI * 2f64.sqrt() * (ns[j + 1].sqrt() - ns[j].sqrt()))).fold(f64::INFINITY, f64::min);
    Ok((format!("rate {rate:.4} (needs {need:.4})"), rate >= need))
}

fn gauss_sine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = AdaptiveConfig { rel_tol: 1e-13, initial_panels: 8, ..Default::default() };
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let h1 = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let h2 = Complex64::from_polar(rng.gen_range(0.1..10.0), rng.gen_range(-PI..PI));
        let m: f64 = rng.gen_range(-4.0..4.0);
        let t: f64 = rng.gen_range(-1.0..0.5);
        let u = t + rng.gen_range(0.1..1.5);
        let v = gauss_sine_integral(h1, h2, m, t, u).map_err(err)?;
        let q = adaptive(|z| (h1 * z + h2 * z * z).exp() * (2.0 * PI * m * z).sin(), &[t, u], &cfg);
        if !q.converged {
            return Err("reference quadrature did not converge".into());
        }
        worst = worst.max((v - q.value).norm() / q.abs_integral.max(q.value.norm()));
    }
    bound(worst, 1e-9)
}

fn bessel_i0() -> Outcome {
    let r = bessel_i(0.0, 100.0, BesselMode::Reference).map_err(err)?.abs_ratio(&bessel_i(0.0, 100.0, BesselMode::Asymptotic).map_err(err)?);
    bound((r - 1.0).abs(), 0.005)
}

/// A two-cell run on one and on eight threads.
fn csv_determinism(cfg: &ExperimentConfig) -> Outcome {
    let mut small = cfg.clone();
    small.n_grid = vec![30.0, 40.0];
    small.m_values = MValues::List(vec![1.0]);
    let run = |threads: usize| -> Result<String, String> {
        let out = run_ratio_experiment(&small, threads).map_err(err)?;
        Ok(csv_string(&out.coefficients).map_err(err)? + &csv_string(&out.near_pole).map_err(err)?)
    };
    let a = run(1)?;
    let b = run(8)?;
    Ok((format!("{} bytes, {}", a.len(), if a == b { "identical" } else { "different" }), a == b))
}
