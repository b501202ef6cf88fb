//! Exact-versus-asymptotic comparison over a grid of `(m, ν)`.
//!
//! Two tables come out of one run: Cauchy-extracted coefficients `c(m,ν)`
//! against the main term, and `f_m(iβ/2π)` at `β = π√(2/ν)` against the
//! near-pole main term.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use theta_asym_core::LogComplex;
use theta_modular::{QuotientSpec, UpperHalfPoint};
use theta_pv::{cauchy_extract, default_beta, fm_pv, saddle_beta, QuadratureConfig, QuotientForm};
use theta_wright::{constants, fm_near_pole_main, main_term, AsymError};

use crate::config::{BetaChoice, ExperimentConfig, MValues, Snap};
use crate::{pool, CliError};

pub const CSV_HEADER: [&str; 11] = [
    "spec_id",
    "m",
    "nu",
    "beta",
    "log_abs_exact",
    "phase_exact",
    "log_abs_main",
    "phase_main",
    "abs_ratio",
    "err_estimate",
    "runtime_ms",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub spec_id: String,
    pub m: f64,
    pub nu: f64,
    pub beta: f64,
    pub log_abs_exact: f64,
    pub phase_exact: f64,
    pub log_abs_main: f64,
    pub phase_main: f64,
    /// `|exact| / |main|`
    pub abs_ratio: f64,
    /// Relative error estimate of the exact value.
    pub err_estimate: f64,
    pub runtime_ms: f64,
}

impl ResultRow {
    fn new(spec_id: &str, m: f64, nu: f64, beta: f64, exact: LogComplex, main: LogComplex, err_estimate: f64) -> Self {
        ResultRow {
            spec_id: spec_id.to_string(),
            m,
            nu,
            beta,
            log_abs_exact: exact.log_mag,
            phase_exact: exact.phase,
            log_abs_main: main.log_mag,
            phase_main: main.phase,
            abs_ratio: (exact.log_mag - main.log_mag).exp(),
            err_estimate,
            runtime_ms: 0.0,
        }
    }

    fn failed(spec_id: &str, m: f64, nu: f64, beta: f64) -> Self {
        let nan = f64::NAN;
        ResultRow {
            spec_id: spec_id.to_string(),
            m,
            nu,
            beta,
            log_abs_exact: nan,
            phase_exact: nan,
            log_abs_main: nan,
            phase_main: nan,
            abs_ratio: nan,
            err_estimate: nan,
            runtime_ms: 0.0,
        }
    }

    /// `|abs_ratio − 1|`
    pub fn deviation(&self) -> f64 {
        (self.abs_ratio - 1.0).abs()
    }

    /// Phase of exact/main in `(−π, π]`.
    pub fn phase_offset(&self) -> f64 {
        theta_asym_core::logc::wrap_phase(self.phase_exact - self.phase_main)
    }

    /// The error estimate is small against the gap being measured.
    pub fn resolved(&self) -> bool {
        self.err_estimate < 0.1 * (self.log_abs_exact - self.log_abs_main).abs()
    }

    pub fn csv_record(&self) -> [String; 11] {
        [
            self.spec_id.clone(),
            format!("{}", self.m),
            format!("{}", self.nu),
            format!("{:e}", self.beta),
            format!("{:e}", self.log_abs_exact),
            format!("{:e}", self.phase_exact),
            format!("{:e}", self.log_abs_main),
            format!("{:e}", self.phase_main),
            format!("{:e}", self.abs_ratio),
            format!("{:e}", self.err_estimate),
            format!("{:e}", self.runtime_ms),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowOutcome {
    pub row: ResultRow,
    pub error: Option<String>,
    /// Wall-clock time, kept out of the CSV unless timing is requested.
    pub elapsed_ms: f64,
}

impl RowOutcome {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub snaps: Vec<Snap>,
    pub coefficients: Vec<RowOutcome>,
    pub near_pole: Vec<RowOutcome>,
}

impl ExperimentOutput {
    pub fn rows(&self) -> impl Iterator<Item = &RowOutcome> {
        self.coefficients.iter().chain(&self.near_pole)
    }

    pub fn failed_fraction(&self) -> f64 {
        let total = self.rows().count();
        if total == 0 {
            return 0.0;
        }
        self.rows().filter(|r| !r.ok()).count() as f64 / total as f64
    }
}

/// `c(m,ν)` by Cauchy extraction against the main term.
pub fn coefficient_row(spec_id: &str, form: &QuotientForm, m: f64, nu: f64, beta: BetaChoice, quad: &QuadratureConfig) -> RowOutcome {
    timed(|| {
        let beta = match beta {
            BetaChoice::Measured => saddle_beta(form, m, nu, quad).map_err(|e| (ResultRow::failed(spec_id, m, nu, f64::NAN), e.to_string()))?,
            BetaChoice::Saddle => default_beta(nu),
        };
        let fail = |e: String| (ResultRow::failed(spec_id, m, nu, beta), e);
        let exact = cauchy_extract(form, m, nu, beta, quad).map_err(|e| fail(e.to_string()))?;
        let main = main_term(&form.spec, m, nu).map_err(|e| fail(e.to_string()))?;
        Ok(ResultRow::new(spec_id, m, nu, beta, exact.value, main.value, exact.err_estimate))
    })
}

/// `f_m(iβ/2π)` with `β = π√(2/ν)` against the near-pole main term.
pub fn near_pole_row(spec_id: &str, form: &QuotientForm, m: f64, nu: f64, quad: &QuadratureConfig) -> RowOutcome {
    let beta = PI * (2.0 / nu).sqrt();
    timed(|| {
        let fail = |e: String| (ResultRow::failed(spec_id, m, nu, beta), e);
        let tau = UpperHalfPoint::new(Complex64::new(0.0, beta / (2.0 * PI))).map_err(|e| fail(e.to_string()))?;
        let exact = fm_pv(form, m, tau, quad).map_err(|e| fail(e.to_string()))?;
        let main = fm_near_pole_main(&form.spec, Complex64::new(beta, 0.0)).map_err(|e| fail(e.to_string()))?;
        Ok(ResultRow::new(spec_id, m, nu, beta, exact.value, main, exact.rel_err()))
    })
}

fn timed(f: impl FnOnce() -> Result<ResultRow, (ResultRow, String)>) -> RowOutcome {
    let start = Instant::now();
    let res = f();
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match res {
        Ok(row) => RowOutcome { row, error: None, elapsed_ms },
        Err((row, e)) => RowOutcome { row, error: Some(e), elapsed_ms },
    }
}

/// Runs every `(ν, m)` cell of the configuration on `threads` worker threads.
///
/// Cells are evaluated independently and collected in grid order, so the
/// output does not depend on the thread count. A failing cell becomes a row
/// of NaNs with the error attached; the run continues.
pub fn run_ratio_experiment(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentOutput, CliError> {
    cfg.validate()?;
    let spec = cfg.spec.build()?;
    constants(&spec).map_err(|e| match e {
        AsymError::WindowViolation(_) => CliError::Config(e.to_string()),
        other => CliError::Failure(other.to_string()),
    })?;
    let snaps = cfg.snapped_grid()?;
    let form = QuotientForm { spec, budget: cfg.budget() };
    let quad = cfg.quadrature();
    let cells: Vec<(f64, f64)> = snaps.iter().flat_map(|s| cfg.ms_at(s.nu).into_iter().map(move |m| (s.nu, m))).collect();
    let pool = pool(threads)?;
    let (coefficients, near_pole) = pool.install(|| {
        let coefficients: Vec<RowOutcome> = cells.par_iter().map(|&(nu, m)| coefficient_row(&cfg.spec_id, &form, m, nu, cfg.beta, &quad)).collect();
        let near_pole: Vec<RowOutcome> = if cfg.near_pole {
            cells.par_iter().map(|&(nu, m)| near_pole_row(&cfg.spec_id, &form, m, nu, &quad)).collect()
        } else {
            Vec::new()
        };
        (coefficients, near_pole)
    });
    let stamp = |mut rows: Vec<RowOutcome>| {
        if cfg.timing {
            for r in &mut rows {
                r.row.runtime_ms = r.elapsed_ms;
            }
        }
        rows
    };
    Ok(ExperimentOutput { snaps, coefficients: stamp(coefficients), near_pole: stamp(near_pole) })
}

pub fn write_csv<W: Write>(out: W, rows: &[RowOutcome]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    let io = |e: csv::Error| CliError::Failure(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.row.csv_record()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[RowOutcome]) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// One trend verdict over a series of rows ordered by `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Least-squares `C` in `|ratio − 1| ≈ C·β` through the origin.
pub fn fit_constant(points: &[(f64, f64)]) -> f64 {
    let num: f64 = points.iter().map(|(b, d)| b * d).sum();
    let den: f64 = points.iter().map(|(b, _)| b * b).sum();
    num / den
}

/// Verdicts for one series: `|ratio − 1|` strictly decreasing, final value
/// at most `final_max`, and (when `phase_max` is given) the spread of the
/// phase of exact/main at most `phase_max`. Rows whose error estimate is not
/// small against `|Δ log|`, or that failed, are excluded.
pub fn trend_checks(label: &str, rows: &[&RowOutcome], final_max: f64, phase_max: Option<f64>) -> Vec<TrendCheck> {
    let used: Vec<&ResultRow> = rows.iter().filter(|r| r.ok() && r.row.resolved()).map(|r| &r.row).collect();
    let excluded = rows.len() - used.len();
    let mut out = Vec::new();
    if used.is_empty() {
        out.push(TrendCheck { name: format!("{label}: rows"), passed: rows.is_empty(), detail: format!("{} rows, all excluded", rows.len()) });
        return out;
    }
    let dev: Vec<f64> = used.iter().map(|r| r.deviation()).collect();
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>().join(", ");
    out.push(TrendCheck {
        name: format!("{label}: |ratio-1| decreasing"),
        passed: dev.windows(2).all(|w| w[1] < w[0]),
        detail: format!("[{}], {excluded} excluded", list(&dev)),
    });
    let last = *dev.last().unwrap();
    out.push(TrendCheck { name: format!("{label}: final |ratio-1| <= {final_max}"), passed: last <= final_max, detail: format!("{last:.4e}") });
    let pts: Vec<(f64, f64)> = used.iter().map(|r| (default_beta(r.nu), r.deviation())).collect();
    let c = fit_constant(&pts);
    let worst = pts.iter().map(|(b, d)| d / b).fold(0.0, f64::max);
    out.push(TrendCheck {
        name: format!("{label}: fitted C in |ratio-1| ~ C*beta"),
        passed: c.is_finite(),
        detail: format!("C = {c:.4e}, max |ratio-1|/beta = {worst:.4e}"),
    });
    if let Some(pmax) = phase_max {
        let ph: Vec<f64> = used.iter().map(|r| r.phase_offset()).collect();
        // spread on the circle: measure offsets from the first one
        let rel: Vec<f64> = ph.iter().map(|p| theta_asym_core::logc::wrap_phase(p - ph[0])).collect();
        let spread = rel.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - rel.iter().cloned().fold(f64::INFINITY, f64::min);
        out.push(TrendCheck {
            name: format!("{label}: phase spread <= {pmax}"),
            passed: spread <= pmax,
            detail: format!("{spread:.4e} rad over [{}]", list(&ph)),
        });
    }
    out
}

/// Trend verdicts of a whole run, one series per `m` (or one series when `m`
/// follows the schedule).
pub fn verdicts(cfg: &ExperimentConfig, out: &ExperimentOutput) -> Vec<TrendCheck> {
    fn series<'a>(cfg: &ExperimentConfig, rows: &'a [RowOutcome]) -> Vec<(String, Vec<&'a RowOutcome>)> {
        match &cfg.m_values {
            MValues::Schedule { .. } => vec![("m per schedule".to_string(), rows.iter().collect())],
            MValues::List(ms) => ms.iter().map(|m| (format!("m = {m}"), rows.iter().filter(|r| r.row.m == *m).collect())).collect(),
        }
    }
    let mut checks = Vec::new();
    for (label, rows) in series(cfg, &out.coefficients) {
        checks.extend(trend_checks(&format!("coefficients, {label}"), &rows, 0.6, Some(0.2)));
    }
    for (label, rows) in series(cfg, &out.near_pole) {
        checks.extend(trend_checks(&format!("near pole, {label}"), &rows, 0.5, None));
    }
    checks
}

/// Plain-text summary: snaps, failed rows, flagged rows and verdicts.
pub fn report(cfg: &ExperimentConfig, out: &ExperimentOutput, checks: &[TrendCheck]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "spec_id\t{}", cfg.spec_id);
    for snap in &out.snaps {
        if snap.nu != snap.requested {
            let _ = writeln!(s, "snap\t{} -> {}", snap.requested, snap.nu);
        }
    }
    for (table, rows) in [("coefficients", &out.coefficients), ("near_pole", &out.near_pole)] {
        for r in rows {
            if let Some(e) = &r.error {
                let _ = writeln!(s, "failed\t{table}\tm={}\tnu={}\t{e}", r.row.m, r.row.nu);
            } else if !r.row.resolved() {
                let _ = writeln!(s, "flagged\t{table}\tm={}\tnu={}\terr_estimate {:e} not below 10% of |dlog| {:e}", r.row.m, r.row.nu, r.row.err_estimate, (r.row.log_abs_exact - r.row.log_abs_main).abs());
            }
            let _ = writeln!(s, "runtime\t{table}\tm={}\tnu={}\t{:.1} ms", r.row.m, r.row.nu, r.elapsed_ms);
        }
    }
    let _ = writeln!(s, "failed_fraction\t{:.4}", out.failed_fraction());
    for c in checks {
        let _ = writeln!(s, "{}\t{}\t{}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    s
}

/// Exit status of a finished run: more than 10% failed rows, or any failed
/// verdict, is a numeric failure.
pub fn outcome(out: &ExperimentOutput, checks: &[TrendCheck]) -> Result<(), CliError> {
    if out.failed_fraction() > 0.1 {
        return Err(CliError::Failure(format!("{:.1}% of rows failed", 100.0 * out.failed_fraction())));
    }
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(CliError::Failure(format!("{}: {}", c.name, c.detail)));
    }
    Ok(())
}

/// Extraction without a config: one coefficient row, main-term fields NaN
/// when the spec is outside the window of the asymptotics. The second value
/// collects warnings for the caller to print.
pub fn extract_one(spec: &QuotientSpec, m: f64, nu: f64, beta: Option<f64>, quad: &QuadratureConfig) -> Result<(ResultRow, Vec<String>), CliError> {
    let form = QuotientForm::new(spec.clone());
    let beta = match beta {
        Some(b) if b > 0.0 && b.is_finite() => b,
        Some(b) => return Err(CliError::Config(format!("beta must be positive, got {b}"))),
        None => saddle_beta(&form, m, nu, quad).map_err(|e| CliError::Failure(e.to_string()))?,
    };
    let exact = cauchy_extract(&form, m, nu, beta, quad).map_err(|e| CliError::Failure(e.to_string()))?;
    let mut notes = Vec::new();
    if exact.off_lattice {
        notes.push(format!("nu = {nu} is not on the exponent lattice; the value is not a coefficient"));
    }
    let main = match main_term(spec, m, nu) {
        Ok(t) => t.value,
        Err(e) => {
            notes.push(format!("no main term: {e}"));
            LogComplex::new(f64::NAN, f64::NAN)
        }
    };
    Ok((ResultRow::new("inline", m, nu, beta, exact.value, main, exact.err_estimate), notes))
}
