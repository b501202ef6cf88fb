use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use theta_asym::config::{ExperimentConfig, SpecInput};
use theta_asym::experiment::{extract_one, outcome, report, verdicts, write_csv, CSV_HEADER};
use theta_asym::{resolve_threads, run_property_suite, run_ratio_experiment, CliError};
use theta_pv::{cauchy_extract, crank_oracle, default_beta, partition_count, CrankForm, QuadratureConfig};

#[derive(Parser)]
#[command(name = "theta-asym", version, about = "Exact versus asymptotic Fourier coefficients of eta-theta quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ratio experiment of a config and write the CSV tables and report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Extract one coefficient c(m, nu) and compare it with the main term.
    Extract {
        /// Inline JSON, e.g. '{"eta": [[1, -1]], "b": 2, "c": 1}'
        #[arg(long)]
        spec: String,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long)]
        nu: f64,
        /// Radius of the q-circle; defaults to the measured saddle.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Run the property suite against the spec of a config.
    Properties {
        #[arg(long)]
        config: PathBuf,
        /// Directory for the report file.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare extracted crank coefficients with enumeration.
    Crank {
        #[arg(long)]
        n: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("theta-asym: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Verify { config, threads, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let threads = resolve_threads(threads, cfg.threads)?;
            let result = run_ratio_experiment(&cfg, threads)?;
            fs::create_dir_all(&out)?;
            write_csv(fs::File::create(out.join(&cfg.outputs.coefficients))?, &result.coefficients)?;
            if cfg.near_pole {
                write_csv(fs::File::create(out.join(&cfg.outputs.near_pole))?, &result.near_pole)?;
            }
            let checks = verdicts(&cfg, &result);
            let text = report(&cfg, &result, &checks);
            fs::write(out.join(&cfg.outputs.report), &text)?;
            print!("{text}");
            outcome(&result, &checks)
        }
        Command::Extract { spec, m, nu, beta } => {
            let spec = SpecInput::parse_inline(&spec)?.build()?;
            if !(nu.is_finite() && nu >= 0.0) || !m.is_finite() {
                return Err(CliError::Config(format!("need finite m and nu >= 0, got m = {m}, nu = {nu}")));
            }
            let (row, notes) = extract_one(&spec, m, nu, beta, &QuadratureConfig::default())?;
            for n in notes {
                eprintln!("theta-asym: {n}");
            }
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(std::io::stdout());
            let csv_err = |e: csv::Error| CliError::Failure(e.to_string());
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            w.write_record(row.csv_record()).map_err(csv_err)?;
            w.flush()?;
            Ok(())
        }
        Command::Properties { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run_property_suite(&cfg)?;
            let text = report.to_text();
            fs::create_dir_all(&out)?;
            fs::write(out.join(&cfg.outputs.report), &text)?;
            print!("{text}");
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failure("property failures".into()))
            }
        }
        Command::Crank { n } => crank(n),
    }
}

fn crank(n: u32) -> Result<(), CliError> {
    let oracle = crank_oracle(n).map_err(|e| CliError::Config(e.to_string()))?;
    let form = CrankForm::default();
    let nu = n as f64;
    let quad = QuadratureConfig::default();
    let mut mismatches = 0;
    println!("m\tenumeration\textracted\tmatch");
    let top = n as i64;
    for m in -top..=top {
        let expect = *oracle.get(&m).unwrap_or(&0);
        let c = cauchy_extract(&form, m as f64, nu, default_beta(nu), &quad).map_err(|e| CliError::Failure(e.to_string()))?;
        let v = c.value.to_complex();
        let ok = v.re.round() as i64 == expect && (v.re - expect as f64).abs() < 1e-6 && v.im.abs() < 1e-6;
        mismatches += usize::from(!ok);
        println!("{m}\t{expect}\t{:.9}\t{ok}", v.re);
    }
    let total: i64 = oracle.values().sum();
    println!("# sum {total}, p({n}) = {}", partition_count(n));
    if mismatches == 0 && total as u128 == partition_count(n) {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{mismatches} mismatches")))
    }
}
