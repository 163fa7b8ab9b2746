//! Suite configuration, dispatch and report emission for the `pharmonic` binary.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use pharmonic::family::FamilyKind;
use pharmonic::heat_kernel::{
    kernel_bound_levels, kernel_bound_report, powers_report_default, schur_report, semigroup_report,
};
use pharmonic::hermite::{hermite_eval, mehler_report};
use pharmonic::inequalities::{
    check_gns_exponents, check_hardy_exponents, check_hls_exponents, gns_check, hardy_check, hls_check,
};
use pharmonic::ladder::{commute_check, duality_check, inverse_riesz_check};
use pharmonic::report::Comparison;
use pharmonic::sobolev::{
    equivalence_report, inclusion_chain_report, riesz_on_potential_check, strict_inclusion_demo,
    weighted_decay_check, InclusionWitness,
};
use pharmonic::spectral::{inverse, random_band_limited};
use pharmonic::symbols::symbols_report;
use pharmonic::{make_grid, Error, Field, Grid, Report, TestFamily, UniformBox};

pub const SUITES: [&str; 14] = [
    "mehler",
    "semigroup",
    "powers",
    "commute",
    "kernel-bounds",
    "weighted-decay",
    "riesz",
    "duality",
    "symbols",
    "sobolev-equivalence",
    "inclusions",
    "hls",
    "gns",
    "hardy",
];

pub const CSV_HEADER: [&str; 7] = ["suite", "metric", "value", "tolerance", "pass", "params", "provenance"];

const FAMILY_SIZE: usize = 10;
const MEHLER_R: [f64; 3] = [0.3, 0.5, 0.9];
const SEMIGROUP_T: [f64; 3] = [0.1, 0.5, 2.0];
const INCLUSION_RADII: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Partially specified configuration, as read from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub suite: Option<String>,
    pub d: Option<usize>,
    #[serde(alias = "Nrho", alias = "N_rho")]
    pub n_rho: Option<usize>,
    #[serde(alias = "Lrho", alias = "L_rho")]
    pub l_rho: Option<f64>,
    #[serde(alias = "K")]
    pub k: Option<usize>,
    #[serde(alias = "M")]
    pub m: Option<usize>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigLayer {
    /// Reads a JSON config file.
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `self` with every field set in `top` replaced.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            suite: top.suite.or(self.suite),
            d: top.d.or(self.d),
            n_rho: top.n_rho.or(self.n_rho),
            l_rho: top.l_rho.or(self.l_rho),
            k: top.k.or(self.k),
            m: top.m.or(self.m),
            alpha: top.alpha.or(self.alpha),
            p: top.p.or(self.p),
            q: top.q.or(self.q),
            tol: top.tol.or(self.tol),
            seed: top.seed.or(self.seed),
            out: top.out.or(self.out),
            format: top.format.or(self.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    pub d: usize,
    pub n_rho: usize,
    pub l_rho: f64,
    pub k: usize,
    pub m: usize,
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    /// Replaces the tolerance of every residual-type metric (`value < tol`
    /// with a default tolerance below 1e-2).
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: String::new(),
            d: 1,
            n_rho: 64,
            l_rho: 12.0,
            k: 20,
            m: 22,
            alpha: 0.5,
            p: 2.0,
            q: 4.0,
            tol: None,
            seed: 7,
            out: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, file or parameters; exit status 2.
    Config(String),
    /// A suite failed to run; exit status 1.
    Run(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Run(m) => write!(f, "suite error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

/// Core errors that describe bad input are configuration errors; the rest
/// are run failures.
fn classify(suite: &str, e: Error) -> CliError {
    match e {
        Error::InvalidParameter(_) | Error::Inadmissible(_) | Error::Domain(_) | Error::GridMismatch(_) => {
            CliError::Config(format!("{suite}: {e}"))
        }
        _ => CliError::Run(format!("{suite}: {e}")),
    }
}

impl SuiteConfig {
    pub fn from_layer(layer: ConfigLayer) -> Result<Self, CliError> {
        let def = SuiteConfig::default();
        let suite = layer.suite.ok_or_else(|| CliError::Config("no suite given (use --suite)".into()))?;
        let cfg = SuiteConfig {
            suite,
            d: layer.d.unwrap_or(def.d),
            n_rho: layer.n_rho.unwrap_or(def.n_rho),
            l_rho: layer.l_rho.unwrap_or(def.l_rho),
            k: layer.k.unwrap_or(def.k),
            m: layer.m.unwrap_or(def.m),
            alpha: layer.alpha.unwrap_or(def.alpha),
            p: layer.p.unwrap_or(def.p),
            q: layer.q.unwrap_or(def.q),
            tol: layer.tol,
            seed: layer.seed.unwrap_or(def.seed),
            out: layer.out,
            format: layer.format.unwrap_or(def.format),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn grid(&self) -> Result<std::sync::Arc<Grid>, CliError> {
        make_grid(self.d, self.n_rho, self.l_rho, self.k, self.m).map_err(|e| classify(&self.suite, e))
    }

    fn family(&self) -> TestFamily {
        if self.d == 1 {
            TestFamily::gaussians(1, FAMILY_SIZE, self.seed)
        } else {
            TestFamily::new(FamilyKind::HermiteMixtures, self.d, FAMILY_SIZE, self.seed, 4)
        }
    }

    /// Checks every suite precondition that can be checked without computing.
    pub fn validate(&self) -> Result<(), CliError> {
        let s = self.suite.as_str();
        let bad = |m: String| Err(CliError::Config(format!("{s}: {m}")));
        if !SUITES.contains(&s) {
            return Err(CliError::Config(format!("unknown suite `{s}` (expected one of: {})", SUITES.join(", "))));
        }
        for (name, v) in [("alpha", self.alpha), ("p", self.p), ("q", self.q), ("Lrho", self.l_rho)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite, got {v}"));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return bad(format!("tol must be a positive number, got {t}"));
            }
        }
        if self.d == 0 {
            return bad("d must be ≥ 1".into());
        }
        if s != "mehler" && s != "kernel-bounds" && s != "inclusions" {
            self.grid()?;
        }
        let need_d1 = |what: &str| -> Result<(), CliError> {
            if self.d != 1 {
                return bad(format!("{what} is implemented for d = 1 only, got d = {}", self.d));
            }
            Ok(())
        };
        let need_p = |lo_open: bool| -> Result<(), CliError> {
            if !(self.p >= 1.0) || (lo_open && self.p == 1.0) {
                return bad(format!("p must be {} 1, got {}", if lo_open { ">" } else { "≥" }, self.p));
            }
            Ok(())
        };
        match s {
            "mehler" => {
                if self.k == 0 {
                    return bad("K (number of Mehler terms) must be ≥ 1".into());
                }
            }
            "semigroup" | "symbols" => need_d1(s)?,
            "commute" | "kernel-bounds" => {
                if !(self.alpha != 0.0) {
                    return bad("alpha must be nonzero".into());
                }
                if s == "kernel-bounds" && !(self.alpha > 0.0) {
                    return bad(format!("alpha must be > 0, got {}", self.alpha));
                }
            }
            "weighted-decay" | "riesz" => {
                need_p(true)?;
                if !(self.alpha >= 0.0) {
                    return bad(format!("alpha must be ≥ 0, got {}", self.alpha));
                }
            }
            "duality" => need_p(true)?,
            "sobolev-equivalence" => {
                need_p(true)?;
                if self.alpha != 1.0 && self.alpha != 2.0 {
                    return bad(format!("alpha is the ladder order and must be 1 or 2, got {}", self.alpha));
                }
            }
            "inclusions" => {
                need_d1(s)?;
                need_p(true)?;
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
                }
            }
            "hls" => check_hls_exponents(self.alpha, self.p, self.q, self.d).map_err(|e| classify(s, e))?,
            "gns" => check_gns_exponents(self.p, self.q, self.d).map_err(|e| classify(s, e))?,
            "hardy" => check_hardy_exponents(self.alpha, self.p, self.d).map_err(|e| classify(s, e))?,
            _ => {}
        }
        Ok(())
    }
}

/// Runs the configured suite and returns its report with wall time filled in.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let s = cfg.suite.as_str();
    let err = |e: Error| classify(s, e);
    let mut report = Report::new(s);
    match s {
        "mehler" => report.absorb("", mehler_report(cfg.k, &MEHLER_R, 5, 2.0).map_err(err)?),
        "semigroup" => report.absorb("", semigroup_report(&cfg.grid()?, &SEMIGROUP_T).map_err(err)?),
        "powers" => report.absorb("", powers_report_default(&cfg.grid()?).map_err(err)?),
        "commute" => {
            let g = cfg.grid()?;
            let f = inverse(&random_band_limited(&g, cfg.seed, 3, cfg.k.min(5)));
            for j in ladder_indices(cfg.d) {
                report.absorb(&format!("j{j}."), commute_check(j, cfg.alpha, &f).map_err(err)?);
            }
        }
        "kernel-bounds" => {
            let levels = kernel_bound_levels(cfg.d, cfg.seed);
            report.absorb("", kernel_bound_report(cfg.alpha, cfg.d, &levels).map_err(err)?);
        }
        "weighted-decay" => {
            if cfg.d == 1 {
                report.absorb("schur.", schur_report(cfg.alpha, &[4.0, 8.0, 16.0], 32).map_err(err)?);
            }
            report.absorb("", weighted_decay_check(cfg.alpha, cfg.p, &cfg.family(), &cfg.grid()?).map_err(err)?);
        }
        "riesz" => {
            let (fam, g) = (cfg.family(), cfg.grid()?);
            for j in ladder_indices(cfg.d) {
                report.absorb(&format!("j{j}."), riesz_on_potential_check(j, cfg.alpha, cfg.p, &fam, &g).map_err(err)?);
            }
        }
        "duality" => {
            let g = cfg.grid()?;
            let n = 20u64;
            let fields: Vec<Field> =
                (0..n).map(|i| inverse(&random_band_limited(&g, cfg.seed.wrapping_add(i), 3, cfg.k.min(4)))).collect();
            for i in 0..fields.len() {
                report.absorb(&format!("pair{i}."), duality_check(&fields[i], &fields[(i + 1) % fields.len()]).map_err(err)?);
            }
            report.absorb("", inverse_riesz_check(&fields, cfg.p).map_err(err)?);
        }
        "symbols" => {
            let g = cfg.grid()?;
            let f = Field::sample_real(&g, |r, x| (-r * r / 2.0).exp() * hermite_eval(0, x[0])).map_err(err)?;
            let bx = UniformBox::new(vec![cfg.l_rho, 8.0], vec![cfg.n_rho, 64]).map_err(err)?;
            report.absorb("", symbols_report(&f, &bx, cfg.seed).map_err(err)?);
        }
        "sobolev-equivalence" => {
            let k = cfg.alpha as usize;
            report.absorb("", equivalence_report(&cfg.family(), &cfg.grid()?, k, cfg.p).map_err(err)?);
        }
        "inclusions" => {
            for w in [InclusionWitness::F1, InclusionWitness::F2] {
                report.absorb("", strict_inclusion_demo(w, cfg.alpha, cfg.p, &INCLUSION_RADII, 2.0).map_err(err)?);
            }
            report.absorb("", inclusion_chain_report(&cfg.family(), &cfg.grid()?, cfg.alpha).map_err(err)?);
        }
        "hls" => report.absorb("", hls_check(cfg.alpha, cfg.p, cfg.q, &cfg.family(), &cfg.grid()?).map_err(err)?),
        "gns" => report.absorb("", gns_check(cfg.p, cfg.q, &cfg.family(), &cfg.grid()?).map_err(err)?),
        "hardy" => report.absorb("", hardy_check(cfg.alpha, cfg.p, &cfg.family(), &cfg.grid()?).map_err(err)?),
        _ => unreachable!("validated suite"),
    }
    for (k, v) in [
        ("d", cfg.d as f64),
        ("N_rho", cfg.n_rho as f64),
        ("L_rho", cfg.l_rho),
        ("K", cfg.k as f64),
        ("M", cfg.m as f64),
        ("alpha", cfg.alpha),
        ("p", cfg.p),
        ("q", cfg.q),
        ("seed", cfg.seed as f64),
    ] {
        report.params.entry(k.to_string()).or_insert(v);
    }
    if let Some(tol) = cfg.tol {
        report.params.insert("tol".into(), tol);
        apply_tolerance(&mut report, tol);
    }
    if let Some(m) = report.metrics.iter().find(|m| m.value.is_nan()) {
        return Err(CliError::Run(format!("{s}: metric `{}` is NaN", m.name)));
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// `0, 1, …, d, -1, …, -d`.
fn ladder_indices(d: usize) -> Vec<i32> {
    let d = d as i32;
    std::iter::once(0).chain(1..=d).chain((1..=d).map(|j| -j)).collect()
}

/// Residual metrics get `tol`; bound and stability metrics keep theirs.
pub fn apply_tolerance(report: &mut Report, tol: f64) {
    for m in report.metrics.iter_mut() {
        if m.comparison == Comparison::Below && m.tolerance < 1e-2 {
            m.tolerance = tol;
            m.pass = m.value.is_finite() && m.value < tol;
        }
    }
}

/// Decimal with 17 significant digits; round-trips every finite f64.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_num(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() { fmt_num(v) } else { format!("\"{}\"", fmt_num(v)) };
    RawValue::from_string(text).expect("formatted number is valid JSON")
}

fn params_field(report: &Report) -> String {
    report.params.iter().map(|(k, v)| format!("{k}={}", fmt_num(*v))).collect::<Vec<_>>().join(";")
}

#[derive(Serialize)]
struct JsonMetric<'a> {
    name: &'a str,
    value: Box<RawValue>,
    tolerance: Box<RawValue>,
    pass: bool,
    provenance: &'a str,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    suite: &'a str,
    params: std::collections::BTreeMap<&'a str, Box<RawValue>>,
    wall_time_s: Box<RawValue>,
    metrics: Vec<JsonMetric<'a>>,
}

/// Writes `report` in `format` to `out`.
pub fn write_report<W: Write>(report: &Report, format: Format, out: W) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            let params = params_field(report);
            for m in &report.metrics {
                w.write_record([
                    report.suite.as_str(),
                    &m.name,
                    &fmt_num(m.value),
                    &fmt_num(m.tolerance),
                    if m.pass { "true" } else { "false" },
                    &params,
                    &m.provenance,
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = JsonReport {
                suite: &report.suite,
                params: report.params.iter().map(|(k, v)| (k.as_str(), json_num(*v))).collect(),
                wall_time_s: json_num(report.wall_time_s),
                metrics: report
                    .metrics
                    .iter()
                    .map(|m| JsonMetric {
                        name: &m.name,
                        value: json_num(m.value),
                        tolerance: json_num(m.tolerance),
                        pass: m.pass,
                        provenance: &m.provenance,
                    })
                    .collect(),
            };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Writes `report` to `path`, or stdout when `path` is `None`.
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = std::io::BufWriter::new(file);
            write_report(report, format, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => write_report(report, format, std::io::stdout().lock()),
    }
}

/// Caps the global rayon pool at `PHARMONIC_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PHARMONIC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("PHARMONIC_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}
