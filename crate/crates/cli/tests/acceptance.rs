//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_asym::experiment::csv_string;
use theta_asym::{run_ratio_experiment, ExperimentConfig};
use theta_asym_core::logc::wrap_phase;
use theta_asym_core::quad::{adaptive, AdaptiveConfig};
use theta_modular::{eval_quotient, leading_factor, EllipticArg, QuotientSpec, TruncationBudget, UpperHalfPoint};
use theta_pv::{
    cauchy_extract, cauchy_extract_with, crank_oracle, default_beta, fm_pv, m_schedule, saddle_beta, semicircle_g, CauchyOptions, CrankForm, Kernel, QuadratureConfig,
    QuotientForm, Side,
};
use theta_wright::{bessel_i, erf_eval, error_arc_bound, fm_near_pole_main, gauss_sine_integral, major_arc, BesselMode, ErfMode, MajorArcMode};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

type Outcome = Result<(bool, String), String>;

fn e1() -> QuotientSpec {
    QuotientSpec::new(vec![(1, -1)], 2, 1).unwrap()
}

fn e2() -> QuotientSpec {
    QuotientSpec::new(vec![(1, -1)], 4, 3).unwrap()
}

fn beta(n: f64) -> f64 {
    PI * (2.0 / n).sqrt()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn run(id: u32, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok((pass, detail)) => (pass && elapsed <= limit, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id}: {verdict}  {detail}  [{:.1}s, limit {}s]", elapsed.as_secs_f64(), limit.as_secs());
    pass
}

/// The quotient against its leading factor at `z = 0.13`.
fn dominant_pole() -> Outcome {
    let budget = TruncationBudget::default();
    let mut dev = Vec::new();
    for n in [100.0, 400.0, 1600.0] {
        let eps = Complex64::new(beta(n), 0.0);
        let t = UpperHalfPoint::from_eps(eps).map_err(err)?;
        let f = eval_quotient(&e1(), EllipticArg::real(0.13), t, &budget).map_err(err)?;
        let c = leading_factor(&e1(), 0.13, eps).map_err(err)?.to_complex();
        dev.push((f / c - 1.0).norm());
    }
    let pass = dev.iter().all(|d| *d <= 1e-8);
    Ok((pass, format!("|F/C - 1| at n = 100, 400, 1600: {}", fmt(&dev))))
}

/// `|f_m(iβ/2π)|` against the near-pole main term.
fn near_pole() -> Outcome {
    let form = QuotientForm::new(e1());
    let quad = QuadratureConfig::default();
    let ns = [100.0, 400.0, 1600.0, 2500.0];
    let mut pass = true;
    let mut detail = Vec::new();
    for m in [1.0, 3.0] {
        let mut dev = Vec::new();
        for n in ns {
            let b = beta(n);
            let tau = UpperHalfPoint::new(I * (b / (2.0 * PI))).map_err(err)?;
            let exact = fm_pv(&form, m, tau, &quad).map_err(err)?;
            let main = fm_near_pole_main(&e1(), Complex64::new(b, 0.0)).map_err(err)?;
            dev.push(((exact.value.log_mag - main.log_mag).exp() - 1.0).abs());
        }
        // smallest C with dev <= C·β on every point
        let c = ns.iter().zip(&dev).map(|(n, d)| d / beta(*n)).fold(0.0, f64::max);
        let ok = strictly_decreasing(&dev) && dev[3] <= 0.5;
        pass &= ok;
        detail.push(format!("m = {m}: dev {} C = {c:.3e}", fmt(&dev)));
    }
    Ok((pass, detail.join("; ")))
}

/// Exact coefficients against the main term along the schedule.
fn exact_vs_main_term() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (id, spec) in [("E1", r#"{"eta": [[1, -1]], "b": 2, "c": 1}"#), ("E2", r#"{"eta": [[1, -1]], "b": 4, "c": 3}"#)] {
        let cfg = ExperimentConfig::from_json(&format!(r#"{{"spec_id": "{id}", "spec": {spec}, "n_grid": [400, 900, 1600, 2500], "near_pole": false}}"#)).map_err(err)?;
        let out = run_ratio_experiment(&cfg, 1).map_err(err)?;
        let mut dev = Vec::new();
        let mut phase = Vec::new();
        let mut excluded = 0;
        for cell in &out.coefficients {
            if let Some(e) = &cell.error {
                return Err(format!("{id} at nu = {}: {e}", cell.row.nu));
            }
            let r = &cell.row;
            // rows whose error estimate is not small against the gap are excluded
            if r.err_estimate >= 0.1 * (r.log_abs_exact - r.log_abs_main).abs() {
                excluded += 1;
                continue;
            }
            dev.push((r.abs_ratio - 1.0).abs());
            phase.push(wrap_phase(r.phase_exact - r.phase_main));
        }
        let spread = phase.iter().map(|p| wrap_phase(p - phase[0]).abs()).fold(0.0, f64::max);
        let ok = dev.len() >= 2 && strictly_decreasing(&dev) && *dev.last().unwrap() <= 0.6 && spread <= 0.2;
        pass &= ok;
        let ratios: Vec<f64> = out.coefficients.iter().map(|c| c.row.abs_ratio).collect();
        detail.push(format!("{id}: abs_ratio {} |ratio-1| {} phase spread {spread:.2e} excluded {excluded}", fmt(&ratios), fmt(&dev)));
    }
    Ok((pass, detail.join("; ")))
}

/// `Π (1 − qⁿ)/((1 − ζqⁿ)(1 − ζ⁻¹qⁿ))` expanded to `q^n_max`, as `[n][m + n_max]`.
fn crank_series(n_max: usize) -> Vec<Vec<i64>> {
    let w = 2 * n_max + 1;
    let mut s = vec![vec![0i64; w]; n_max + 1];
    s[0][n_max] = 1;
    for k in 1..=n_max {
        // 1 − q^k
        for n in (k..=n_max).rev() {
            for j in 0..w {
                s[n][j] -= s[n - k][j];
            }
        }
        // 1/(1 − ζ^{±1} q^k), one geometric factor each
        for shift in [1isize, -1] {
            for n in k..=n_max {
                for j in 0..w {
                    let src = j as isize - shift;
                    if (0..w as isize).contains(&src) {
                        s[n][j] += s[n - k][src as usize];
                    }
                }
            }
        }
    }
    s
}

/// Partitions by dynamic programming over part sizes.
fn partitions(n: usize) -> u128 {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    p[n]
}

fn crank() -> Outcome {
    let form = CrankForm::default();
    let quad = QuadratureConfig::default();
    let series = crank_series(20);
    let mut worst = 0.0f64;
    for n in 1..=20u32 {
        let counts = crank_oracle(n).map_err(err)?;
        let nu = n as f64;
        for m in -5i64..=5 {
            let expect = counts.get(&m).copied().unwrap_or(0);
            if series[n as usize][(m + 20) as usize] != expect {
                return Ok((false, format!("enumeration disagrees with the product at n = {n}, m = {m}")));
            }
            let v = cauchy_extract(&form, m as f64, nu, default_beta(nu), &quad).map_err(err)?.value.to_complex();
            if v.re.round() as i64 != expect || v.im.round() != 0.0 {
                return Ok((false, format!("n = {n}, m = {m}: extracted {v}, expected {expect}")));
            }
            worst = worst.max((v - expect as f64).norm());
        }
    }
    for n in 1..=40u32 {
        let sum: i64 = crank_oracle(n).map_err(err)?.values().sum();
        if sum as u128 != partitions(n as usize) {
            return Ok((false, format!("sum of counts at n = {n} is {sum}, p(n) = {}", partitions(n as usize))));
        }
    }
    Ok((true, format!("231 cells exact, max distance to the integer {worst:.2e}; sums match p(n) for n <= 40")))
}

/// Residue by the symmetric limit `(t F(h + t) − t F(h − t))/2`.
fn residue(spec: &QuotientSpec, h: f64, tau: UpperHalfPoint) -> Result<Complex64, String> {
    let budget = TruncationBudget::default();
    let t = 1e-4;
    let a = eval_quotient(spec, EllipticArg::real(h + t), tau, &budget).map_err(err)?;
    let b = eval_quotient(spec, EllipticArg::real(h - t), tau, &budget).map_err(err)?;
    Ok((a - b) * (t / 2.0))
}

fn pv_machinery() -> Outcome {
    let form = QuotientForm::new(e1());
    let tau = UpperHalfPoint::new(Complex64::new(0.0, 0.3)).map_err(err)?;
    let mut pts = Vec::new();
    for r in [1e-1, 1e-2, 1e-3] {
        let gp = semicircle_g(&form, 0, tau, r, Side::Above, 1.0).map_err(err)?.to_complex();
        let gm = semicircle_g(&form, 0, tau, r, Side::Below, 1.0).map_err(err)?.to_complex();
        pts.push((r, (gp + gm).norm()));
    }
    let c = pts.iter().map(|(r, g)| r * g).sum::<f64>() / pts.iter().map(|(r, _)| r * r).sum::<f64>();
    let mean = pts.iter().map(|(_, g)| g).sum::<f64>() / pts.len() as f64;
    let ss_res: f64 = pts.iter().map(|(r, g)| (g - c * r).powi(2)).sum();
    let ss_tot: f64 = pts.iter().map(|(_, g)| (g - mean).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    let res = residue(&e1(), 0.5, tau)?;
    let g = semicircle_g(&form, 0, tau, 1e-4, Side::Above, 0.0).map_err(err)?.to_complex();
    let limit_err = rel(g, -I * PI * res);
    let pass = r2 >= 0.95 && limit_err <= 1e-4;
    Ok((pass, format!("|G+ + G-| fit C = {c:.3e} R^2 = {r2:.6}; G+(1e-4) vs -pi i Res: {limit_err:.2e}")))
}

fn special_functions() -> Outcome {
    let i0 = bessel_i(0.0, 100.0, BesselMode::Reference).map_err(err)?.abs_ratio(&bessel_i(0.0, 100.0, BesselMode::Asymptotic).map_err(err)?);
    let bessel_dev = (i0 - 1.0).abs();

    // well inside the sector, where the neglected erf(−iz) ratio is below the |z|⁻² term
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut erf_worst = 0.0f64;
    for j in 0..20 {
        let r: f64 = rng.gen_range(5.0..15.0);
        let arg = rng.gen_range(-PI / 8.0..PI / 8.0) + if j % 2 == 0 { 0.0 } else { PI };
        let w = I * Complex64::from_polar(r, arg);
        let a = erf_eval(w, ErfMode::Reference).map_err(err)?;
        let b = erf_eval(w, ErfMode::Asymptotic).map_err(err)?;
        erf_worst = erf_worst.max(((a / b).to_complex() - 1.0).norm() * r * r);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let cfg = AdaptiveConfig { rel_tol: 1e-13, initial_panels: 8, ..Default::default() };
    let mut gs_worst = 0.0f64;
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
        gs_worst = gs_worst.max((v - q.value).norm() / q.abs_integral.max(q.value.norm()));
    }
    let pass = bessel_dev <= 0.005 && erf_worst <= 1.0 && gs_worst <= 1e-9;
    Ok((pass, format!("I0(100) {bessel_dev:.3e}; erf max |ratio-1|*|z|^2 {erf_worst:.3e}; gauss_sine {gs_worst:.3e}")))
}

fn arc_separation() -> Outcome {
    let k = theta_wright::constants(&e1()).map_err(err)?;
    let ns = [400.0f64, 1600.0, 3600.0];
    let mut gaps = Vec::new();
    for n in ns {
        let m = m_schedule(n, 0.05) as f64;
        let e = error_arc_bound(&e1(), m, n).map_err(err)?;
        gaps.push(e.log_e_bound - major_arc(&e1(), m, n, MajorArcMode::Bessel).map_err(err)?.log_mag);
    }
    let x: Vec<f64> = ns.iter().map(|n| n.sqrt()).collect();
    let mx = x.iter().sum::<f64>() / 3.0;
    let my = gaps.iter().sum::<f64>() / 3.0;
    let slope = x.iter().zip(&gaps).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    let expected = -PI * 2f64.sqrt() * (2.0 * k.lambda2_f64().sqrt() - k.growth_base_f64());
    let pass = strictly_decreasing(&gaps) && (slope / expected - 1.0).abs() <= 0.2;
    Ok((pass, format!("gaps {} slope {slope:.4} expected {expected:.4}", fmt(&gaps))))
}

fn symmetry_and_determinism() -> Outcome {
    let quad = QuadratureConfig::default();
    let opts = CauchyOptions { kernel: Some(Kernel::Exponential), ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let mut worst = 0.0f64;
    for cell in 0..10 {
        let spec = if cell % 2 == 0 { e1() } else { e2() };
        let form = QuotientForm::new(spec);
        let dq = form.spec.delta_q();
        let nu = rng.gen_range(30..=110) as f64 + *dq.numer() as f64 / *dq.denom() as f64;
        let m = rng.gen_range(0..4) as f64 + 0.5;
        let b = saddle_beta(&form, m, nu, &quad).map_err(err)?;
        let a = cauchy_extract_with(&form, m, nu, b, &quad, &opts).map_err(err)?.value.to_complex();
        let c = cauchy_extract_with(&form, -m, nu, b, &quad, &opts).map_err(err)?.value.to_complex();
        worst = worst.max(rel(c, a));
    }
    let cfg = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 4, "c": 3}, "n_grid": [30, 45], "m_values": [0.5, 2]}"#).map_err(err)?;
    let csv = |threads: usize| -> Result<String, String> {
        let out = run_ratio_experiment(&cfg, threads).map_err(err)?;
        Ok(csv_string(&out.coefficients).map_err(err)? + &csv_string(&out.near_pole).map_err(err)?)
    };
    let (one, eight) = (csv(1)?, csv(8)?);
    let identical = one == eight;
    let pass = worst <= 1e-8 && identical;
    Ok((pass, format!("max |c(-m)/c(m) - 1| over 10 cells {worst:.2e}; CSV on 1 and 8 threads {} ({} bytes)", if identical { "identical" } else { "different" }, one.len())))
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let results = [
        run(1, Duration::from_secs(1), dominant_pole),
        run(2, min(2), near_pole),
        run(3, min(15), exact_vs_main_term),
        run(4, min(1), crank),
        run(5, min(1), pv_machinery),
        run(6, min(1), special_functions),
        run(7, min(1), arc_separation),
        run(8, min(5), symmetry_and_determinism),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
