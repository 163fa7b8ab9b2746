//! Symbols of functions of `H` in the adapted class `G^m`.
//!
//! A symbol `σ(x, τ, ξ)` (never depending on ρ) acts by
//! `T_σ f(z) = (2π)^{-(d+1)} ∬ e^{i(z-z')·ω} σ(x, ω) f(z') dz' dω`, `ω = (τ, ξ)`.
//! It belongs to `G^m` when `|∂_X^β σ| ≤ C_β ⟨|x| + |ω|⟩^{m-|β|}`.
//!
//! The heat semigroup has symbol `(cosh 2t)^{-d/2} e^{-b}` with
//!
//! ```text
//!     b = ½(|x|² + |ξ|²) tanh 2t + 2i x·ξ sech 2t sinh² t + t τ²
//! ```
//!
//! and every other symbol here is a `t`-integral of it.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::grid::BoxSamples;
use crate::quad::TQuadrature;
use crate::report::{Metric, Report};
use crate::C64;

pub(crate) fn ln_cosh(s: f64) -> f64 {
    let a = s.abs();
    if a > 20.0 {
        a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
    } else {
        a.cosh().ln()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// `b(t, x, τ, ξ)`.
pub fn b_symbol(t: f64, x: &[f64], tau: f64, xi: &[f64]) -> C64 {
    let s2 = (2.0 * t).cosh().recip();
    let re = 0.5 * (norm_sq(x) + norm_sq(xi)) * (2.0 * t).tanh() + t * tau * tau;
    // sech 2t sinh² t = (1 - sech 2t)/2
    let im = dot(x, xi) * (1.0 - s2);
    C64::new(re, im)
}

/// `∂_t b`.
pub fn b_symbol_dt(t: f64, x: &[f64], tau: f64, xi: &[f64]) -> C64 {
    let s2 = (2.0 * t).cosh().recip();
    let sech2 = s2 * s2;
    C64::new(
        (norm_sq(x) + norm_sq(xi)) * sech2 + tau * tau,
        2.0 * dot(x, xi) * (2.0 * t).tanh() * s2,
    )
}

/// `∂_{x_j} b` (zero-based `j`).
pub fn b_symbol_dx(t: f64, x: &[f64], xi: &[f64], j: usize) -> C64 {
    let s2 = (2.0 * t).cosh().recip();
    C64::new(x[j] * (2.0 * t).tanh(), xi[j] * (1.0 - s2))
}

/// `(cosh 2t)^{-d/2} e^{-b}`, the semigroup symbol without the `(2π)^{-d/2}`.
pub fn heat_symbol(t: f64, x: &[f64], tau: f64, xi: &[f64]) -> C64 {
    let d = x.len() as f64;
    let b = b_symbol(t, x, tau, xi);
    C64::from_polar((-0.5 * d * ln_cosh(2.0 * t) - b.re).exp(), -b.im)
}

/// `p_t = (2π)^{-d/2} (cosh 2t)^{-d/2} e^{-b}`.
pub fn p_t_symbol(t: f64, x: &[f64], tau: f64, xi: &[f64], d: usize) -> C64 {
    debug_assert_eq!(x.len(), d);
    heat_symbol(t, x, tau, xi) * (2.0 * PI).powf(-0.5 * d as f64)
}

type EvalFn = dyn Fn(&[f64], f64, &[f64]) -> C64 + Send + Sync;

/// A ρ-independent symbol with a declared order.
#[derive(Clone)]
pub struct SymbolFn {
    pub label: String,
    pub order: f64,
    pub d: usize,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFn")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("d", &self.d)
            .finish()
    }
}

impl SymbolFn {
    pub fn new(
        label: impl Into<String>,
        order: f64,
        d: usize,
        eval: impl Fn(&[f64], f64, &[f64]) -> C64 + Send + Sync + 'static,
    ) -> Self {
        SymbolFn { label: label.into(), order, d, eval: Arc::new(eval) }
    }

    pub fn constant(c: C64, d: usize) -> Self {
        SymbolFn::new(format!("{c}"), 0.0, d, move |_, _, _| c)
    }

    /// `σ(x, τ, ξ)`.
    pub fn eval(&self, x: &[f64], tau: f64, xi: &[f64]) -> C64 {
        (self.eval)(x, tau, xi)
    }

    /// Evaluation at the packed point `X = (x, τ, ξ)`.
    pub fn eval_packed(&self, p: &[f64]) -> C64 {
        let d = self.d;
        self.eval(&p[..d], p[d], &p[d + 1..])
    }

    /// Symbol of `(H)^α`, `α ∈ (-∞, 1) \ {0}`.
    pub fn sigma_alpha(alpha: f64, d: usize) -> Result<Self> {
        let s = SigmaAlpha::new(alpha, d)?;
        Ok(SymbolFn::new(format!("sigma_{alpha}"), 2.0 * alpha, d, move |x, tau, xi| s.eval(x, tau, xi)))
    }

    /// Symbol of the Riesz transform `R_j`.
    pub fn riesz(j: i32, d: usize) -> Result<Self> {
        let s = RieszSymbol::new(j, d)?;
        Ok(SymbolFn::new(format!("riesz_{j}"), 0.0, d, move |x, tau, xi| s.eval(x, tau, xi)))
    }
}

/// `σ_α` with its `t`-rule fixed once.
///
/// `α < 0`: `(1/Γ(-α)) ∫ t^{-α-1} p̃_t dt`;
/// `0 < α < 1`: `(1/Γ(1-α)) ∫ t^{-α} (-∂_t p̃_t) dt` with
/// `-∂_t p̃_t = p̃_t (d tanh 2t + ∂_t b)`.
#[derive(Debug, Clone)]
pub struct SigmaAlpha {
    pub alpha: f64,
    pub d: usize,
    nodes: Vec<(f64, f64)>,
}

impl SigmaAlpha {
    pub fn new(alpha: f64, d: usize) -> Result<Self> {
        if !(alpha < 1.0) || alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("σ_α needs α ∈ (-∞, 1) \\ {{0}}, got {alpha}")));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("d must be ≥ 1".into()));
        }
        let beta = if alpha < 0.0 { -alpha } else { 1.0 - alpha };
        let norm = 1.0 / gamma(beta);
        let nodes = TQuadrature::new(d as f64)
            .nodes(beta)?
            .into_iter()
            .map(|(t, w)| (t, w * norm))
            .collect();
        Ok(SigmaAlpha { alpha, d, nodes })
    }

    pub fn eval(&self, x: &[f64], tau: f64, xi: &[f64]) -> C64 {
        let d = self.d as f64;
        let mut acc = C64::new(0.0, 0.0);
        for &(t, w) in &self.nodes {
            let p = heat_symbol(t, x, tau, xi);
            acc += if self.alpha < 0.0 {
                p * w
            } else {
                p * (b_symbol_dt(t, x, tau, xi) + d * (2.0 * t).tanh()) * w
            };
        }
        acc
    }
}

/// `σ_α(x, τ, ξ)`.
pub fn sigma_alpha(x: &[f64], tau: f64, xi: &[f64], alpha: f64, d: usize) -> Result<C64> {
    check_point(x, xi, d)?;
    Ok(SigmaAlpha::new(alpha, d)?.eval(x, tau, xi))
}

fn check_point(x: &[f64], xi: &[f64], d: usize) -> Result<()> {
    if x.len() != d || xi.len() != d {
        return Err(Error::InvalidParameter(format!("symbol point needs x, ξ ∈ R^{d}")));
    }
    if x.iter().chain(xi).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("symbol point".into()));
    }
    Ok(())
}

/// Symbol of `R_j = A_j H^{-1/2}`: `(1/√π) ∫ t^{-1/2} a_j(t) p̃_t dt` with
/// `a_0 = -iτ`, `a_j = -iξ_j + x_j + ∂_{x_j} b`, `a_{-j} = iξ_j + x_j - ∂_{x_j} b`.
#[derive(Debug, Clone)]
pub struct RieszSymbol {
    pub j: i32,
    pub d: usize,
    nodes: Vec<(f64, f64)>,
}

impl RieszSymbol {
    pub fn new(j: i32, d: usize) -> Result<Self> {
        if d == 0 || j.unsigned_abs() as usize > d {
            return Err(Error::InvalidParameter(format!("Riesz index {j} outside [-{d}, {d}]")));
        }
        let norm = 1.0 / PI.sqrt();
        let nodes = TQuadrature::new(d as f64)
            .nodes(0.5)?
            .into_iter()
            .map(|(t, w)| (t, w * norm))
            .collect();
        Ok(RieszSymbol { j, d, nodes })
    }

    pub fn eval(&self, x: &[f64], tau: f64, xi: &[f64]) -> C64 {
        let i = C64::new(0.0, 1.0);
        let mut acc = C64::new(0.0, 0.0);
        let axis = self.j.unsigned_abs() as usize;
        for &(t, w) in &self.nodes {
            let p = heat_symbol(t, x, tau, xi);
            let a = if self.j == 0 {
                -i * tau
            } else {
                let k = axis - 1;
                let db = b_symbol_dx(t, x, xi, k);
                if self.j > 0 {
                    -i * xi[k] + x[k] + db
                } else {
                    i * xi[k] + x[k] - db
                }
            };
            acc += p * a * w;
        }
        acc
    }
}

/// `σ_{R_j}(x, τ, ξ)`.
pub fn riesz_symbol(j: i32, x: &[f64], tau: f64, xi: &[f64], d: usize) -> Result<C64> {
    check_point(x, xi, d)?;
    Ok(RieszSymbol::new(j, d)?.eval(x, tau, xi))
}

// ---------------------------------------------------------------------------
// Membership estimates

/// Sample points for symbol estimates: every combination of magnitudes
/// `{0} ∪ {1, 2, 4, …, cap}` for `|x|`, `|τ|`, `|ξ|`, with random directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDomain {
    pub d: usize,
    pub cap: f64,
    pub per_shell: usize,
    pub seed: u64,
}

impl SampleDomain {
    pub fn new(d: usize, cap: f64, per_shell: usize, seed: u64) -> Result<Self> {
        if !(cap >= 8.0) {
            return Err(Error::InvalidParameter(format!("sample cap must be ≥ 8 (4 dyadic shells), got {cap}")));
        }
        if per_shell == 0 || d == 0 {
            return Err(Error::InvalidParameter("need d ≥ 1 and at least one point per shell".into()));
        }
        Ok(SampleDomain { d, cap, per_shell, seed })
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        let mut m = vec![0.0];
        let mut r = 1.0;
        while r <= self.cap * (1.0 + 1e-12) {
            m.push(r);
            r *= 2.0;
        }
        m
    }

    /// The same domain with its cap doubled.
    pub fn doubled(&self) -> Self {
        SampleDomain { cap: 2.0 * self.cap, ..self.clone() }
    }

    /// Packed points `X = (x, τ, ξ)`.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mags = self.magnitudes();
        let d = self.d;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let unit = |rng: &mut ChaCha8Rng, r: f64| -> Vec<f64> {
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = norm_sq(&v).sqrt().max(1e-9);
            v.into_iter().map(|c| c * r / n).collect()
        };
        let mut out = Vec::new();
        for &mx in &mags {
            for &mt in &mags {
                for &mk in &mags {
                    for _ in 0..self.per_shell {
                        let mut p = unit(&mut rng, mx);
                        p.push(if rng.gen_bool(0.5) { mt } else { -mt });
                        p.extend(unit(&mut rng, mk));
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

/// Which weight the membership estimate divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolWeight {
    /// `⟨|x| + |ω|⟩^{m-|β|}` over all derivatives.
    Adapted,
    /// `⟨ω⟩^{m-|γ|}`, only ω-derivatives gaining decay.
    Classical,
}

fn japanese(s: f64) -> f64 {
    (1.0 + s * s).sqrt()
}

/// Multi-indices over `2d+1` packed coordinates with `|β| ≤ r`, as lists of axes.
fn derivative_set(dims: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    if r >= 1 {
        out.extend((0..dims).map(|a| vec![a]));
    }
    if r >= 2 {
        for a in 0..dims {
            for b in a..dims {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

fn central_difference(s: &SymbolFn, p: &[f64], axes: &[usize], h: f64) -> C64 {
    let shifted = |moves: &[(usize, f64)]| {
        let mut q = p.to_vec();
        for &(a, dv) in moves {
            q[a] += dv;
        }
        s.eval_packed(&q)
    };
    match axes {
        [] => s.eval_packed(p),
        [a] => (shifted(&[(*a, h)]) - shifted(&[(*a, -h)])) / (2.0 * h),
        [a, b] if a == b => (shifted(&[(*a, h)]) - s.eval_packed(p) * 2.0 + shifted(&[(*a, -h)])) / (h * h),
        [a, b] => {
            (shifted(&[(*a, h), (*b, h)]) - shifted(&[(*a, h), (*b, -h)]) - shifted(&[(*a, -h), (*b, h)])
                + shifted(&[(*a, -h), (*b, -h)]))
                / (4.0 * h * h)
        }
        _ => unreachable!("derivative order above 2"),
    }
}

/// `sup |D^β σ| · w(X)^{-(m-|β|)}` over the domain, by `|β|`.
fn weighted_sups(s: &SymbolFn, m: f64, domain: &SampleDomain, r: usize, weight: SymbolWeight) -> Vec<f64> {
    let d = s.d;
    let dims = 2 * d + 1;
    let betas = derivative_set(dims, r);
    let points = domain.points();
    let per_point: Vec<Vec<f64>> = points
        .par_iter()
        .map(|p| {
            let xn = norm_sq(&p[..d]).sqrt();
            let wn = norm_sq(&p[d..]).sqrt();
            let big = norm_sq(p).sqrt();
            let h = 1e-3 * big.max(1.0);
            let mut sup = vec![0.0f64; r + 1];
            for beta in &betas {
                let v = central_difference(s, p, beta, h).norm();
                let (base, gain) = match weight {
                    SymbolWeight::Adapted => (japanese(xn + wn), beta.len()),
                    SymbolWeight::Classical => (japanese(wn), beta.iter().filter(|&&a| a >= d).count()),
                };
                let scaled = v * base.powf(-(m - gain as f64));
                sup[beta.len()] = sup[beta.len()].max(scaled);
            }
            sup
        })
        .collect();
    let mut out = vec![0.0f64; r + 1];
    for row in per_point {
        for (o, v) in out.iter_mut().zip(row) {
            *o = o.max(v);
        }
    }
    out
}

/// Empirical `G^m` constants of `σ` up to derivative order `r ≤ 2`, on the
/// domain and on the domain with its cap doubled. Passes iff every sup is
/// finite and changes by a factor < 1.5 under the doubling.
pub fn gm_bound_estimate(s: &SymbolFn, m: f64, domain: &SampleDomain, r: usize) -> Result<Report> {
    gm_bound_estimate_with(s, m, domain, r, SymbolWeight::Adapted)
}

pub fn gm_bound_estimate_with(
    s: &SymbolFn,
    m: f64,
    domain: &SampleDomain,
    r: usize,
    weight: SymbolWeight,
) -> Result<Report> {
    if r > 2 {
        return Err(Error::InvalidParameter(format!("derivative order {r} > 2")));
    }
    if domain.d != s.d {
        return Err(Error::InvalidParameter("domain and symbol dimensions differ".into()));
    }
    let base = weighted_sups(s, m, domain, r, weight);
    let wide = weighted_sups(s, m, &domain.doubled(), r, weight);
    let mut report = Report::new("symbols")
        .param("m", m)
        .param("r", r as f64)
        .param("cap", domain.cap)
        .param("d", s.d as f64);
    for (k, (a, b)) in base.iter().zip(&wide).enumerate() {
        report.push(Metric::finite(format!("{}_sup_order{k}", s.label), *a, "empirical symbol constant"));
        report.push(Metric::finite(format!("{}_sup_order{k}_doubled", s.label), *b, "empirical symbol constant"));
        let ratio = if *a > 0.0 { (b / a).max(a / b) } else if *b == 0.0 { 1.0 } else { f64::INFINITY };
        report.push(Metric::upper(format!("{}_stability_order{k}", s.label), ratio, 1.5, "stable under cap doubling"));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Quantization

/// `T_σ f` on a two-axis box `(ρ, x)`, d = 1, via the discrete Fourier
/// transform of `f` and a per-row weighted inverse sum.
pub fn quantize(s: &SymbolFn, f: &BoxSamples) -> Result<BoxSamples> {
    if s.d != 1 || f.bx.axes() != 2 {
        return Err(Error::InvalidParameter("quantization is implemented for d = 1".into()));
    }
    let (nr, nx) = (f.bx.counts[0], f.bx.counts[1]);
    let (r0, x0) = (f.bx.coord(0, 0), f.bx.coord(1, 0));
    let freq = |n: usize, i: usize, axis: usize| {
        let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        2.0 * PI * k / (n as f64 * f.bx.spacing(axis))
    };
    let taus: Vec<f64> = (0..nr).map(|i| freq(nr, i, 0)).collect();
    let xis: Vec<f64> = (0..nx).map(|i| freq(nx, i, 1)).collect();

    // 2-D DFT: rows of x inside, then ρ
    let mut planner = FftPlanner::new();
    let fx = planner.plan_fft_forward(nx);
    let fr = planner.plan_fft_forward(nr);
    let mut spec = f.values.clone();
    for row in spec.chunks_mut(nx) {
        fx.process(row);
    }
    let mut col = vec![C64::new(0.0, 0.0); nr];
    for b in 0..nx {
        for a in 0..nr {
            col[a] = spec[a * nx + b];
        }
        fr.process(&mut col);
        for a in 0..nr {
            spec[a * nx + b] = col[a];
        }
    }
    let total: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    let edge: f64 = (0..nr)
        .flat_map(|a| (0..nx).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            let ka = if a < nr / 2 { a } else { nr - a };
            let kb = if b < nx / 2 { b } else { nx - b };
            10 * ka >= 9 * (nr / 2) || 10 * kb >= 9 * (nx / 2)
        })
        .map(|(a, b)| spec[a * nx + b].norm_sqr())
        .sum();
    let warning = (total > 0.0 && edge / total > 1e-10).then(|| {
        let msg = format!("boundary spectral energy {:.2e}: quantization may alias", edge / total);
        log::warn!("quantize: {msg}");
        msg
    });

    // per output x_b: g[a] = Σ_k σ(x_b, τ_a, ξ_k) F[a][k] e^{iξ_k (x_b - x0)}, then inverse DFT in ρ
    let ifr = planner.plan_fft_inverse(nr);
    let scale = 1.0 / (nr * nx) as f64;
    let columns: Vec<Vec<C64>> = (0..nx)
        .into_par_iter()
        .map(|b| {
            let xb = f.bx.coord(1, b);
            let phase: Vec<C64> = xis.iter().map(|&k| C64::from_polar(1.0, k * (xb - x0))).collect();
            let mut g: Vec<C64> = (0..nr)
                .map(|a| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (k, &xi) in xis.iter().enumerate() {
                        let c = spec[a * nx + k];
                        if c != C64::new(0.0, 0.0) {
                            acc += s.eval(&[xb], taus[a], &[xi]) * c * phase[k];
                        }
                    }
                    acc
                })
                .collect();
            ifr.process(&mut g);
            g.iter().map(|v| v * scale).collect()
        })
        .collect();
    // the inverse DFT in ρ is relative to the first row ρ_0 = r0, which is
    // already the sample origin
    let _ = r0;
    let mut values = vec![C64::new(0.0, 0.0); nr * nx];
    for (b, colv) in columns.into_iter().enumerate() {
        for (a, v) in colv.into_iter().enumerate() {
            values[a * nx + b] = v;
        }
    }
    Ok(BoxSamples { bx: f.bx.clone(), values, warning })
}

/// Relative L² difference of two sample sets on the same box.
pub fn rel_l2_samples(a: &BoxSamples, b: &BoxSamples) -> Result<f64> {
    if a.bx != b.bx {
        return Err(Error::GridMismatch("samples live on different boxes".into()));
    }
    let diff: f64 = a.values.iter().zip(&b.values).map(|(u, v)| (u - v).norm_sqr()).sum();
    let base: f64 = b.values.iter().map(|v| v.norm_sqr()).sum();
    Ok(if base == 0.0 { diff.sqrt() } else { (diff / base).sqrt() })
}

// ---------------------------------------------------------------------------
// Suite report

/// Symbol-class checks at d = 1: `σ_{-1/2} ∈ G^{-1}` with `r = 2` and each
/// Riesz symbol bounded (`G^0`, `r = 0`) on a domain with cap 64, stable
/// under doubling the cap; plus quantization of `σ_{-1/2}` and `σ_{R_0}`
/// against the spectral and ladder routes on `f` (relative L² < 1e-3).
pub fn symbols_report(f: &crate::grid::Field, bx: &crate::grid::UniformBox, seed: u64) -> Result<Report> {
    let domain = SampleDomain::new(1, 64.0, 2, seed)?;
    let mut report = Report::new("symbols").param("d", 1.0).param("cap", 64.0).param("seed", seed as f64);
    let sigma = SymbolFn::sigma_alpha(-0.5, 1)?;
    let mut class = gm_bound_estimate(&sigma, -1.0, &domain, 2)?.metrics;
    for j in [0, 1, -1] {
        class.extend(gm_bound_estimate(&SymbolFn::riesz(j, 1)?, 0.0, &domain, 0)?.metrics);
    }
    class.into_iter().for_each(|m| report.push(m));
    let s = crate::grid::resample(f, bx)?;
    let q = quantize(&sigma, &s)?;
    let reference = crate::grid::resample(&crate::spectral::frac_power(f, -0.5, 0.0)?, bx)?;
    report.push(Metric::upper("quantized_sigma_gap", rel_l2_samples(&q, &reference)?, 1e-3, "T_σ vs spectral power"));
    let q = quantize(&SymbolFn::riesz(0, 1)?, &s)?;
    let reference = crate::grid::resample(&crate::ladder::riesz(0, f)?, bx)?;
    report.push(Metric::upper("quantized_riesz0_gap", rel_l2_samples(&q, &reference)?, 1e-3, "T_σ vs ladder route"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, resample, Field, UniformBox};
    use crate::hermite::hermite_eval;
    use crate::ladder::riesz;
    use crate::quad::adaptive_simpson;
    use crate::spectral::frac_power;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn b_examples() {
        assert!((b_symbol(0.7, &[0.0], 3.0, &[0.0]) - C64::new(0.7 * 9.0, 0.0)).norm() < 1e-14);
        let a = b_symbol(0.4, &[1.2, -0.3], 0.5, &[0.7, 2.0]);
        let b = b_symbol(0.4, &[0.7, 2.0], 0.5, &[1.2, -0.3]);
        assert!((a - b).norm() < 1e-15);
        assert_eq!(p_t_symbol(0.0, &[0.3], 2.0, &[-1.0], 1), C64::new((2.0 * PI).powf(-0.5), 0.0));
    }

    #[test]
    fn derivatives_match_differences() {
        let (x, tau, xi) = ([0.8, -0.4], 1.3, [0.5, 1.1]);
        for &t in &[1e-3f64, 0.3, 1.7] {
            let h = 1e-6 * t.max(1e-2);
            let fd = (b_symbol(t + h, &x, tau, &xi) - b_symbol(t - h, &x, tau, &xi)) / (2.0 * h);
            assert!((fd - b_symbol_dt(t, &x, tau, &xi)).norm() < 1e-6 * fd.norm().max(1.0));
            for j in 0..2 {
                let mut xp = x;
                let mut xm = x;
                xp[j] += 1e-6;
                xm[j] -= 1e-6;
                let fd = (b_symbol(t, &xp, tau, &xi) - b_symbol(t, &xm, tau, &xi)) / 2e-6;
                assert!((fd - b_symbol_dx(t, &x, &xi, j)).norm() < 1e-7);
            }
        }
        // at t → 0, Re ∂_t b → |x|² + |ξ|² + τ²
        let v = b_symbol_dt(1e-12, &x, tau, &xi);
        assert!((v.re - (0.8f64.powi(2) + 0.16 + 0.25 + 1.21 + tau * tau)).abs() < 1e-10);
    }

    #[test]
    fn heat_symbol_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = [rng.gen_range(-5.0..5.0)];
            let xi = [rng.gen_range(-5.0..5.0)];
            let tau: f64 = rng.gen_range(-5.0..5.0);
            let big = x[0] * x[0] + xi[0] * xi[0] + tau * tau;
            let t: f64 = rng.gen_range(1e-3..0.5);
            let p = p_t_symbol(t, &x, tau, &xi, 1).norm();
            assert!(p <= (2.0 * PI).powf(-0.5) * (-0.5 * t * big).exp() * (1.0 + 1e-12));
            let t: f64 = rng.gen_range(1.0..10.0);
            let p = p_t_symbol(t, &x, tau, &xi, 1).norm();
            assert!(p <= (2.0 * PI).powf(-0.5) * 2f64.sqrt() * (-t).exp() * (-0.38 * big).exp());
        }
    }

    #[test]
    fn sigma_at_origin_matches_independent_quadrature() {
        for &tau in &[0.0, 1.5, 4.0] {
            let v = sigma_alpha(&[0.0], tau, &[0.0], -0.5, 1).unwrap();
            // t = u²: (2/√π) ∫ (cosh 2u²)^{-1/2} e^{-u²τ²} du
            let oracle = adaptive_simpson(
                &|u: f64| (2.0 * u * u).cosh().powf(-0.5) * (-u * u * tau * tau).exp(),
                0.0,
                12.0,
                1e-13,
                50,
            )
            .unwrap()
                * 2.0
                / PI.sqrt();
            assert!((v.re - oracle).abs() < 1e-8 * oracle, "τ={tau}: {} vs {oracle}", v.re);
            assert!(v.im.abs() < 1e-15);
        }
        let v = sigma_alpha(&[0.0], 32.0, &[0.0], -0.5, 1).unwrap().re;
        assert!((v * 32.0 - 1.0).abs() < 0.1);
        assert!(sigma_alpha(&[0.0], 1.0, &[0.0], 1.0, 1).is_err());
        assert!(sigma_alpha(&[0.0], 1.0, &[0.0], 0.0, 1).is_err());
    }

    #[test]
    fn sigma_positive_power_on_ground_line() {
        // x = ξ = 0 is not a mode, but σ_{1/2}(0, τ, 0) → |τ| for large τ
        let v = sigma_alpha(&[0.0], 40.0, &[0.0], 0.5, 1).unwrap().re;
        assert!((v / 40.0 - 1.0).abs() < 0.05, "{v}");
    }

    #[test]
    fn riesz_symbol_examples() {
        assert_eq!(riesz_symbol(0, &[0.7], 0.0, &[1.0], 1).unwrap(), C64::new(0.0, 0.0));
        let v = riesz_symbol(1, &[0.0], 0.0, &[1.0], 1).unwrap();
        // a_1 = -iξ + i ξ(1 - sech 2t) = -i sech 2t at x = 0, ξ = 1
        // (1/√π) ∫ t^{-1/2} (-i sech 2t) (cosh 2t)^{-1/2} e^{-½ tanh 2t} dt, t = u²
        let integrand = |u: f64| {
            let t = u * u;
            let s = (2.0 * t).cosh();
            -s.powf(-1.5) * (-0.5 * (2.0 * t).tanh()).exp()
        };
        let oracle = adaptive_simpson(&integrand, 0.0, 12.0, 1e-13, 50).unwrap() * 2.0 / PI.sqrt();
        assert!(v.re.abs() < 1e-14);
        assert!((v.im - oracle).abs() < 1e-8 * oracle.abs(), "{} vs {oracle}", v.im);
        assert!(riesz_symbol(2, &[0.0], 0.0, &[1.0], 1).is_err());
    }

    #[test]
    fn constant_and_ladder_symbols() {
        let dom = SampleDomain::new(1, 8.0, 1, 1).unwrap();
        let one = SymbolFn::constant(C64::new(1.0, 0.0), 1);
        let r = gm_bound_estimate(&one, 0.0, &dom, 2).unwrap();
        assert!(r.all_pass());
        assert!((r.metric("1+0i_sup_order0").unwrap().value - 1.0).abs() < 1e-15);
        let a0 = SymbolFn::new("a0", 1.0, 1, |_, tau, _| C64::new(0.0, tau));
        let r = gm_bound_estimate(&a0, 1.0, &dom, 1).unwrap();
        assert!(r.all_pass());
        assert!(r.metric("a0_sup_order0").unwrap().value <= 1.0);
    }

    #[test]
    fn domain_shape() {
        let dom = SampleDomain::new(1, 64.0, 2, 5).unwrap();
        assert_eq!(dom.magnitudes(), vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]);
        assert_eq!(dom.points().len(), 8 * 8 * 8 * 2);
        assert_eq!(dom.doubled().magnitudes().len(), 9);
        assert!(SampleDomain::new(1, 4.0, 1, 0).is_err());
    }

    fn test_setup() -> (Field, UniformBox) {
        let g = make_grid(1, 64, 16.0, 24, 26).unwrap();
        let f = Field::sample_real(&g, |r, x| (-r * r / 2.0).exp() * hermite_eval(0, x[0])).unwrap();
        (f, UniformBox::new(vec![16.0, 8.0], vec![64, 64]).unwrap())
    }

    #[test]
    fn quantize_identity() {
        let (f, bx) = test_setup();
        let s = resample(&f, &bx).unwrap();
        let q = quantize(&SymbolFn::constant(C64::new(1.0, 0.0), 1), &s).unwrap();
        assert!(rel_l2_samples(&q, &s).unwrap() < 1e-10);
    }

    #[test]
    fn quantize_matches_spectral_and_ladder() {
        let (f, bx) = test_setup();
        let s = resample(&f, &bx).unwrap();
        let q = quantize(&SymbolFn::sigma_alpha(-0.5, 1).unwrap(), &s).unwrap();
        let reference = resample(&frac_power(&f, -0.5, 0.0).unwrap(), &bx).unwrap();
        assert!(rel_l2_samples(&q, &reference).unwrap() < 1e-3);
        let q = quantize(&SymbolFn::riesz(0, 1).unwrap(), &s).unwrap();
        let reference = resample(&riesz(0, &f).unwrap(), &bx).unwrap();
        assert!(rel_l2_samples(&q, &reference).unwrap() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn sigma_decays_with_order(x in -40.0f64..40.0, tau in -40.0f64..40.0, xi in -40.0f64..40.0) {
            let s = SigmaAlpha::new(-0.5, 1).unwrap();
            let v = s.eval(&[x], tau, &[xi]).norm();
            let w = japanese(x.abs() + (tau * tau + xi * xi).sqrt());
            prop_assert!(v * w < 3.0);
        }

        #[test]
        fn riesz_symbols_bounded(x in -60.0f64..60.0, tau in -60.0f64..60.0, xi in -60.0f64..60.0, j in -1i32..=1) {
            let r = RieszSymbol::new(j, 1).unwrap();
            prop_assert!(r.eval(&[x], tau, &[xi]).norm() < 3.0);
        }
    }
}
