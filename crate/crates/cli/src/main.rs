use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use pharmonic_cli::{emit, init_threads, run_suite, CliError, ConfigLayer, Format, SuiteConfig};

/// Run a verification suite for the partial harmonic oscillator and emit a
/// CSV or JSON report. Exit status: 0 all metrics pass, 1 a metric failed or
/// the suite errored, 2 configuration error.
#[derive(Parser, Debug)]
#[command(name = "pharmonic", version)]
struct Args {
    /// Suite name: mehler, semigroup, powers, commute, kernel-bounds,
    /// weighted-decay, riesz, duality, symbols, sobolev-equivalence,
    /// inclusions, hls, gns, hardy.
    #[arg(long)]
    suite: Option<String>,
    /// Number of x-dimensions.
    #[arg(long)]
    d: Option<usize>,
    /// ρ-grid points (power of two).
    #[arg(long = "Nrho")]
    n_rho: Option<usize>,
    /// ρ half-period.
    #[arg(long = "Lrho")]
    l_rho: Option<f64>,
    /// Hermite truncation |μ| ≤ K (number of Mehler terms for `mehler`).
    #[arg(long = "K")]
    k: Option<usize>,
    /// Gauss–Hermite order per x-axis.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Order α (ladder order 1 or 2 for `sobolev-equivalence`).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Tolerance for residual-type metrics.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Args {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            suite: self.suite.clone(),
            d: self.d,
            n_rho: self.n_rho,
            l_rho: self.l_rho,
            k: self.k,
            m: self.m,
            alpha: self.alpha,
            p: self.p,
            q: self.q,
            tol: self.tol,
            seed: self.seed,
            out: self.out.clone(),
            format: self.format,
        }
    }
}

fn run(args: Args) -> Result<bool, CliError> {
    let base = match &args.config {
        Some(path) => ConfigLayer::from_file(path).map_err(|e| CliError::Config(format!("{e:#}")))?,
        None => ConfigLayer::default(),
    };
    let cfg = SuiteConfig::from_layer(base.overlay(args.layer()))?;
    init_threads()?;
    let report = run_suite(&cfg)?;
    emit(&report, cfg.format, cfg.out.as_deref()).map_err(|e| CliError::Run(format!("{e:#}")))?;
    for m in report.failures() {
        eprintln!("FAIL {}: {} (tolerance {})", m.name, m.value, m.tolerance);
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pharmonic: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
