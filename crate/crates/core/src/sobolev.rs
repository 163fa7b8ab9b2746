//! Sobolev norms adapted to `H`.
//!
//! Potential norms `‖H^{α/2} f‖_p` and ladder norms
//! `Σ_{m ≤ k} Σ_{j_1…j_m} ‖A_{j_1}⋯A_{j_m} f‖_p`, their equivalence, and
//! demonstrations that the inclusions between the classical, `H`-adapted and
//! Hermite spaces are strict.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::family::{Member, TestFamily};
use crate::grid::{make_grid, resample_coeffs, BoxSamples, Field, Grid, UniformBox};
use crate::hermite::{gauss_hermite, hermite_all, phi_mu, MultiIndex};
use crate::ladder::{apply_a, riesz_coeffs, LadderIndex};
use crate::report::{Metric, Report};
use crate::spectral::{coeffs_lp_norm, forward, frac_power_coeffs, norm_box, SpectralCoeffs};
use crate::C64;

/// Which norm a [`SobolevParams`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormFamily {
    Potential,
    Ladder,
    Classical,
    Hermite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevParams {
    pub order: f64,
    pub p: f64,
    pub family: NormFamily,
}

impl SobolevParams {
    pub fn new(order: f64, p: f64, family: NormFamily) -> Result<Self> {
        if !(order >= 0.0) || !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("need order ≥ 0 and p ∈ (1, ∞), got ({order}, {p})")));
        }
        if family == NormFamily::Ladder && !(order == 1.0 || order == 2.0) {
            return Err(Error::InvalidParameter(format!("ladder norms are implemented for k ∈ {{1, 2}}, got {order}")));
        }
        Ok(SobolevParams { order, p, family })
    }

    /// The norm of `field`, for the two families that live on a grid.
    pub fn norm(&self, field: &Field) -> Result<f64> {
        match self.family {
            NormFamily::Potential => potential_norm(field, self.order, self.p),
            NormFamily::Ladder => ladder_norm(field, self.order as usize, self.p),
            _ => Err(Error::InvalidParameter(
                "classical and Hermite norms need closed-form input; see inclusion_chain_report".into(),
            )),
        }
    }
}

/// `‖H^{α/2} f‖_p` on coefficients.
pub fn potential_norm_coeffs(c: &SpectralCoeffs, alpha: f64, p: f64) -> Result<f64> {
    coeffs_lp_norm(&frac_power_coeffs(c, alpha / 2.0, 0.0)?, p)
}

/// `‖H^{α/2} f‖_p`.
pub fn potential_norm(field: &Field, alpha: f64, p: f64) -> Result<f64> {
    potential_norm_coeffs(&forward(field), alpha, p)
}

/// `‖f‖_p + Σ_j ‖A_j f‖_p (+ Σ_{j1,j2} ‖A_{j1} A_{j2} f‖_p)` for `k ∈ {1, 2}`.
pub fn ladder_norm(field: &Field, k: usize, p: f64) -> Result<f64> {
    ladder_norm_coeffs(&forward(field), k, p)
}

pub fn ladder_norm_coeffs(c: &SpectralCoeffs, k: usize, p: f64) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidParameter(format!("ladder norms are implemented for k ∈ {{1, 2}}, got {k}")));
    }
    let idx = LadderIndex::all(c.grid.d);
    let mut terms = vec![c.clone()];
    let first: Vec<SpectralCoeffs> = idx.iter().map(|i| apply_a(i.j, c)).collect::<Result<_>>()?;
    if k == 2 {
        for a in &first {
            for i in &idx {
                terms.push(apply_a(i.j, a)?);
            }
        }
    }
    terms.extend(first);
    let norms: Vec<f64> = terms.par_iter().map(|t| coeffs_lp_norm(t, p)).collect::<Result<_>>()?;
    Ok(norms.iter().sum())
}

// ---------------------------------------------------------------------------
// Refinement stability

/// The grid with twice the ρ-resolution and a larger Hermite cutoff.
pub fn refined_grid(g: &Grid) -> Result<Arc<Grid>> {
    let extra = (g.k / 2).max(4);
    let k = g.k + extra;
    let m = (g.m + extra).min(128).max(k + 1);
    make_grid(g.d, 2 * g.n_rho, g.l_rho, k, m)
}

/// Sups of a per-member quantity over the first `small` members, all `large`
/// members, and all `large` members on the refined grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StableSup {
    pub small: f64,
    pub large: f64,
    pub refined: f64,
}

impl StableSup {
    /// Largest pairwise factor between the three sups.
    pub fn ratio(&self) -> f64 {
        let v = [self.small, self.large, self.refined];
        let hi = v.iter().cloned().fold(0.0, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if hi == 0.0 {
            1.0
        } else {
            hi / lo
        }
    }

    pub fn push_metrics(&self, report: &mut Report, name: &str, limit: f64, provenance: &str) {
        report.push(Metric::finite(format!("{name}_sup"), self.large, provenance));
        report.push(Metric::info(format!("{name}_sup_small_family"), self.small, provenance));
        report.push(Metric::finite(format!("{name}_sup_refined"), self.refined, provenance));
        report.push(Metric::upper(format!("{name}_stability"), self.ratio(), limit, "refinement-stable sup"));
    }
}

pub const SMALL_FAMILY: usize = 10;
pub const LARGE_FAMILY: usize = 40;

/// Evaluates `value(member)` (None = excluded) at both family sizes and on
/// the refined grid.
pub fn stable_sup<F>(family: &TestFamily, grid: &Arc<Grid>, value: F) -> Result<StableSup>
where
    F: Fn(&Field) -> Result<Option<f64>> + Sync,
{
    let mut s = stable_sups(family, grid, 1, |f| Ok(value(f)?.map(|v| vec![v])))?;
    Ok(s.remove(0))
}

/// [`stable_sup`] for `count` quantities computed together per member.
pub fn stable_sups<F>(family: &TestFamily, grid: &Arc<Grid>, count: usize, value: F) -> Result<Vec<StableSup>>
where
    F: Fn(&Field) -> Result<Option<Vec<f64>>> + Sync,
{
    let fam = family.resized(LARGE_FAMILY);
    let fine = refined_grid(grid)?;
    let eval = |g: &Arc<Grid>| -> Result<Vec<Vec<f64>>> {
        (0..fam.len())
            .into_par_iter()
            .map(|i| Ok(value(&fam.sample(i, g)?)?.unwrap_or_else(|| vec![0.0; count])))
            .collect()
    };
    let coarse = eval(grid)?;
    let refined = eval(&fine)?;
    let max = |v: &[Vec<f64>], k: usize| v.iter().map(|r| r[k]).fold(0.0, f64::max);
    Ok((0..count)
        .map(|k| StableSup {
            small: max(&coarse[..SMALL_FAMILY], k),
            large: max(&coarse, k),
            refined: max(&refined, k),
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Reports

/// Bracket `[min, max]` of `ladder_norm / potential_norm` over the family,
/// at 10 and 40 members. Passes iff the bracket is inside `(0, ∞)` and its
/// spread `max/min` grows by less than 2× under the enlargement.
pub fn equivalence_report(family: &TestFamily, grid: &Arc<Grid>, k: usize, p: f64) -> Result<Report> {
    let fam = family.resized(LARGE_FAMILY);
    let ratios: Vec<f64> = (0..fam.len())
        .into_par_iter()
        .map(|i| {
            let c = forward(&fam.sample(i, grid)?);
            Ok(ladder_norm_coeffs(&c, k, p)? / potential_norm_coeffs(&c, k as f64, p)?)
        })
        .collect::<Result<_>>()?;
    let bracket = |v: &[f64]| {
        (v.iter().cloned().fold(f64::INFINITY, f64::min), v.iter().cloned().fold(0.0, f64::max))
    };
    let (lo10, hi10) = bracket(&ratios[..SMALL_FAMILY]);
    let (lo, hi) = bracket(&ratios);
    let mut report = Report::new("sobolev-equivalence")
        .param("k", k as f64)
        .param("p", p)
        .param("d", grid.d as f64);
    report.push(Metric::lower("bracket_min", lo, 0.0, "ladder/potential lower constant"));
    report.push(Metric::finite("bracket_max", hi, "ladder/potential upper constant"));
    report.push(Metric::info("bracket_min_small_family", lo10, "10 members"));
    report.push(Metric::info("bracket_max_small_family", hi10, "10 members"));
    let growth = (hi / lo) / (hi10 / lo10);
    report.push(Metric::upper("spread_growth", growth, 2.0, "bracket stable under family enlargement"));
    if p == 2.0 {
        let ok = (0..fam.len())
            .into_par_iter()
            .map(|i| p2_sandwich_holds(&forward(&fam.sample(i, grid)?)))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        report.push(Metric::flag("p2_sandwich", ok, "‖H^½f‖² ≤ Σ‖A_j f‖² ≤ 2‖H^½f‖²"));
    }
    Ok(report)
}

/// `‖H^{1/2} f‖₂² ≤ Σ_j ‖A_j f‖₂² ≤ 2 ‖H^{1/2} f‖₂²`, evaluated coefficientwise.
pub fn p2_sandwich_holds(c: &SpectralCoeffs) -> Result<bool> {
    let pot = potential_norm_coeffs(c, 1.0, 2.0)?.powi(2);
    let grads: f64 = LadderIndex::all(c.grid.d)
        .iter()
        .map(|i| Ok(apply_a(i.j, c)?.l2_norm().powi(2)))
        .sum::<Result<f64>>()?;
    let slack = 1e-12 * pot;
    Ok(pot <= grads + slack && grads <= 2.0 * pot + slack)
}

/// `sup ‖H^{α/2} R_j f‖_p / ‖H^{α/2} f‖_p` over the family.
pub fn riesz_on_potential_check(
    j: i32,
    alpha: f64,
    p: f64,
    family: &TestFamily,
    grid: &Arc<Grid>,
) -> Result<Report> {
    LadderIndex::new(j, grid.d)?;
    let s = stable_sup(family, grid, |f| {
        let c = forward(f);
        let den = potential_norm_coeffs(&c, alpha, p)?;
        if den == 0.0 {
            return Ok(None);
        }
        Ok(Some(potential_norm_coeffs(&riesz_coeffs(j, &c)?, alpha, p)? / den))
    })?;
    let mut report = Report::new("riesz")
        .param("j", j as f64)
        .param("alpha", alpha)
        .param("p", p)
        .param("d", grid.d as f64);
    s.push_metrics(&mut report, "riesz_ratio", 1.5, "R_j bounded on the potential space");
    Ok(report)
}

/// `sup ‖|x|^{2α} H^{-α} f‖_p / ‖f‖_p` over the family, plus the corollary
/// form `sup ‖|x|^α H^{-α/2} f‖_p / ‖f‖_p`.
pub fn weighted_decay_check(alpha: f64, p: f64, family: &TestFamily, grid: &Arc<Grid>) -> Result<Report> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("α must be ≥ 0, got {alpha}")));
    }
    let bx = norm_box(grid)?;
    let weighted = |c: &SpectralCoeffs, power: f64, weight: f64| -> Result<f64> {
        let s = resample_coeffs(&frac_power_coeffs(c, -power, 0.0)?, &bx)?;
        let w = s.map(|z, v| v * x_norm(&z[1..]).powf(weight));
        crate::grid::lp_norm(&w, p)
    };
    let ratio = |power: f64, weight: f64| {
        stable_sup(family, grid, move |f| {
            let c = forward(f);
            let den = coeffs_lp_norm(&c, p)?;
            if den == 0.0 {
                return Ok(None);
            }
            Ok(Some(weighted(&c, power, weight)? / den))
        })
    };
    let mut report = Report::new("weighted-decay").param("alpha", alpha).param("p", p).param("d", grid.d as f64);
    ratio(alpha, 2.0 * alpha)?.push_metrics(&mut report, "weighted_operator", 1.5, "|x|^{2α} H^{-α} bounded on L^p");
    ratio(alpha / 2.0, alpha)?.push_metrics(&mut report, "corollary", 1.5, "|x|^α g ∈ L^p for g in the potential space");
    Ok(report)
}

fn x_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Strict inclusions

/// Which function the strict-inclusion demo builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InclusionWitness {
    /// `(I - Δ)^{-α/2} g₁`, weight `|x|^α`.
    F1,
    /// `H^{-α/2} g₂`, weight `|ρ|^α`.
    F2,
}

fn fft2(values: &mut [C64], n0: usize, n1: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (p0, p1) = if inverse {
        (planner.plan_fft_inverse(n0), planner.plan_fft_inverse(n1))
    } else {
        (planner.plan_fft_forward(n0), planner.plan_fft_forward(n1))
    };
    values.par_chunks_mut(n1).for_each(|row| p1.process(row));
    let mut col = vec![C64::new(0.0, 0.0); n0];
    for b in 0..n1 {
        for a in 0..n0 {
            col[a] = values[a * n1 + b];
        }
        p0.process(&mut col);
        for a in 0..n0 {
            values[a * n1 + b] = col[a];
        }
    }
}

fn fft_freq(n: usize, h: f64, i: usize) -> f64 {
    let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
    2.0 * std::f64::consts::PI * k / (n as f64 * h)
}

/// Half-width and per-axis count of the box used for the demos.
const DEMO_BOX: (f64, usize) = (128.0, 2048);

/// `(I - Δ)^{-α/2} g` on the demo box (d = 1) by the full Fourier multiplier.
fn bessel_potential(g: impl Fn(f64, f64) -> f64 + Sync, alpha: f64) -> Result<BoxSamples> {
    let bx = UniformBox::cube(2, DEMO_BOX.0, DEMO_BOX.1)?;
    let mut s = BoxSamples::sample(&bx, |r, x| C64::new(g(r, x[0]), 0.0))?;
    let n = DEMO_BOX.1;
    let h = bx.spacing(0);
    fft2(&mut s.values, n, n, false);
    let freqs: Vec<f64> = (0..n).map(|i| fft_freq(n, h, i)).collect();
    let scale = 1.0 / (n * n) as f64;
    s.values.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
        for (b, v) in row.iter_mut().enumerate() {
            *v *= (1.0 + freqs[a] * freqs[a] + freqs[b] * freqs[b]).powf(-alpha / 2.0) * scale;
        }
    });
    fft2(&mut s.values, n, n, true);
    Ok(s)
}

/// `H^{-α/2}` applied to `h(ρ) Φ_μ(x)` (d = 1): the ρ-profile after the
/// multiplier `(τ² + 2μ + 1)^{-α/2}`, on the demo axis.
fn hpar_profile(h: impl Fn(f64) -> f64, mu: usize, alpha: f64) -> Vec<f64> {
    let (half, n) = DEMO_BOX;
    let step = 2.0 * half / n as f64;
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(h(-half + step * i as f64), 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut v);
    let lam0 = 2.0 * mu as f64 + 1.0;
    for (i, c) in v.iter_mut().enumerate() {
        let tau = fft_freq(n, step, i);
        *c *= (tau * tau + lam0).powf(-alpha / 2.0) / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut v);
    v.into_iter().map(|c| c.re).collect()
}

/// `‖w f‖_{L^p([-R,R]²)}` for each radius.
fn weighted_norms_box(s: &BoxSamples, weight: impl Fn(f64, f64) -> f64 + Sync, p: f64, radii: &[f64]) -> Result<Vec<f64>> {
    let w = s.map(|z, v| v * weight(z[0], z[1]));
    radii.iter().map(|&r| w.lp_norm_within(p, &[r, r])).collect()
}

/// `‖|ρ|^α f(ρ) Φ_μ(x)‖_{L^p([-R,R]²)}` from a ρ-profile on the demo axis.
fn weighted_norms_profile(profile: &[f64], mu: usize, alpha: f64, p: f64, radii: &[f64]) -> Vec<f64> {
    let (half, n) = DEMO_BOX;
    let step = 2.0 * half / n as f64;
    let m = MultiIndex(vec![mu]);
    radii
        .iter()
        .map(|&r| {
            let rho_part: f64 = profile
                .iter()
                .enumerate()
                .map(|(i, v)| (-half + step * i as f64, v))
                .filter(|(z, _)| z.abs() <= r)
                .map(|(z, v)| (z.abs().powf(alpha) * v.abs()).powf(p) * step)
                .sum();
            let x_part: f64 = (0..n)
                .map(|i| -half + step * i as f64)
                .filter(|x| x.abs() <= r)
                .map(|x| phi_mu(&m, &[x]).abs().powf(p) * step)
                .sum();
            (rho_part * x_part).powf(1.0 / p)
        })
        .collect()
}

/// Weighted norms of an inclusion witness over growing boxes, against a
/// Gaussian control. Passes iff the witness grows monotonically by more than
/// `growth_factor` from the first to the last radius and the control changes
/// by less than 1% between the last two radii.
pub fn strict_inclusion_demo(
    which: InclusionWitness,
    alpha: f64,
    p: f64,
    radii: &[f64],
    growth_factor: f64,
) -> Result<Report> {
    if !(alpha > 0.0 && alpha < 1.0) || !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("need α ∈ (0,1), p ∈ (1,∞), got ({alpha}, {p})")));
    }
    if radii.len() < 2 || radii.iter().any(|&r| !(r > 0.0 && r < DEMO_BOX.0 / 2.0)) {
        return Err(Error::InvalidParameter(format!("radii must be ≥ 2 values in (0, {})", DEMO_BOX.0 / 2.0)));
    }
    let decay = -1.0 / p - alpha;
    let (witness, control) = match which {
        InclusionWitness::F1 => {
            let weight = |_r: f64, x: f64| x.abs().powf(alpha);
            let f = bessel_potential(|r, x| ((1.0 + r.abs()) * (1.0 + x.abs())).powf(decay), alpha)?;
            let c = bessel_potential(|r, x| (-(r * r + x * x) / 2.0).exp(), alpha)?;
            (weighted_norms_box(&f, weight, p, radii)?, weighted_norms_box(&c, weight, p, radii)?)
        }
        InclusionWitness::F2 => {
            let f = hpar_profile(|r| (1.0 + r.abs()).powf(decay), 0, alpha);
            let c = hpar_profile(|r| (-r * r / 2.0).exp(), 0, alpha);
            (
                weighted_norms_profile(&f, 0, alpha, p, radii),
                weighted_norms_profile(&c, 0, alpha, p, radii),
            )
        }
    };
    let name = match which {
        InclusionWitness::F1 => "f1",
        InclusionWitness::F2 => "f2",
    };
    let mut report = Report::new("inclusions").param("alpha", alpha).param("p", p).param("d", 1.0);
    for (r, v) in radii.iter().zip(&witness) {
        report.push(Metric::info(format!("{name}_norm_R{r}"), *v, "weighted norm on [-R,R]²"));
    }
    let monotone = witness.windows(2).all(|w| w[1] > w[0]);
    if !monotone {
        log::warn!("strict_inclusion_demo: non-monotone growth for {name}; resolution may be insufficient");
    }
    let growth = witness[witness.len() - 1] / witness[0];
    report.push(Metric::flag(format!("{name}_monotone"), monotone, "weighted norms increase with R"));
    report.push(Metric::lower(format!("{name}_growth"), growth, growth_factor, "no stabilization across radii"));
    let n = control.len();
    let settle = (control[n - 1] / control[n - 2] - 1.0).abs();
    report.push(Metric::upper(format!("{name}_control_change"), settle, 0.01, "Gaussian control stabilizes"));
    Ok(report)
}

// ---------------------------------------------------------------------------
// Inclusion chain

/// Hermite coefficients of `f(ρ, x)` in both variables (d = 1), `ν_0, ν_1 ≤ n`.
fn full_hermite_coeffs(member: &Member, n: usize, order: usize) -> Result<(Vec<f64>, crate::hermite::GHRule)> {
    let rule = gauss_hermite(order)?;
    let q = rule.order();
    let mut h = vec![0.0; q * (n + 1)];
    for (i, &x) in rule.nodes.iter().enumerate() {
        hermite_all(x, &mut h[i * (n + 1)..(i + 1) * (n + 1)]);
    }
    let mut c = vec![0.0; (n + 1) * (n + 1)];
    for a in 0..q {
        for b in 0..q {
            let v = member.eval(rule.nodes[a], &[rule.nodes[b]]) * rule.compensated[a] * rule.compensated[b];
            if v == 0.0 {
                continue;
            }
            for i in 0..=n {
                let vi = v * h[a * (n + 1) + i];
                for j in 0..=n {
                    c[i * (n + 1) + j] += vi * h[b * (n + 1) + j];
                }
            }
        }
    }
    Ok((c, rule))
}

/// `‖(-Δ + ρ² + |x|²)^{α/2} f‖₂` and `‖(I - Δ)^{α/2} f‖₂` of a closed-form
/// member (d = 1), via its two-variable Hermite expansion. The Fourier
/// transform maps `h_n` to `(-i)^n h_n`.
pub fn hermite_and_classical_norms(member: &Member, alpha: f64) -> Result<(f64, f64)> {
    let n = 64;
    let (c, rule) = full_hermite_coeffs(member, n, 96)?;
    let mut herm = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            herm += (2.0 * (i + j) as f64 + 2.0).powf(alpha) * c[i * (n + 1) + j].powi(2);
        }
    }
    let q = rule.order();
    let mut h = vec![0.0; q * (n + 1)];
    for (i, &x) in rule.nodes.iter().enumerate() {
        hermite_all(x, &mut h[i * (n + 1)..(i + 1) * (n + 1)]);
    }
    let phase = [C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)];
    let mut classical = 0.0;
    for a in 0..q {
        for b in 0..q {
            let mut fh = C64::new(0.0, 0.0);
            for i in 0..=n {
                for j in 0..=n {
                    let cij = c[i * (n + 1) + j];
                    if cij != 0.0 {
                        fh += phase[(i + j) % 4] * (cij * h[a * (n + 1) + i] * h[b * (n + 1) + j]);
                    }
                }
            }
            let z2 = rule.nodes[a].powi(2) + rule.nodes[b].powi(2);
            classical += rule.compensated[a] * rule.compensated[b] * (1.0 + z2).powf(alpha) * fh.norm_sqr();
        }
    }
    Ok((herm.sqrt(), classical.sqrt()))
}

/// Ranking Hermite-norm ≳ H-norm ≳ classical norm at p = 2 (d = 1): sups of
/// `‖f‖_{classical}/‖f‖_H` and `‖f‖_H/‖f‖_{Hermite}` over the family.
pub fn inclusion_chain_report(family: &TestFamily, grid: &Arc<Grid>, alpha: f64) -> Result<Report> {
    if grid.d != 1 || family.d != 1 {
        return Err(Error::InvalidParameter("the inclusion chain is implemented for d = 1".into()));
    }
    let rows: Vec<(f64, f64)> = (0..family.len())
        .into_par_iter()
        .map(|i| {
            let (herm, classical) = hermite_and_classical_norms(&family.members[i], alpha)?;
            let hpar = potential_norm(&family.sample(i, grid)?, alpha, 2.0)?;
            Ok((classical / hpar, hpar / herm))
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new("inclusions").param("alpha", alpha).param("p", 2.0).param("d", 1.0);
    let sup = |k: usize| rows.iter().map(|r| if k == 0 { r.0 } else { r.1 }).fold(0.0, f64::max);
    report.push(Metric::finite("classical_over_adapted", sup(0), "adapted space inside the classical one"));
    report.push(Metric::finite("adapted_over_hermite", sup(1), "Hermite space inside the adapted one"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyKind;
    use crate::spectral::inverse;

    fn ground(g: &Arc<Grid>) -> Field {
        inverse(&SpectralCoeffs::pure_mode(g, 0, &MultiIndex(vec![0])).unwrap())
    }

    #[test]
    fn ground_mode_norms() {
        let g = make_grid(1, 16, 6.0, 8, 9).unwrap();
        let f = ground(&g);
        let l2 = crate::grid::lp_norm(&f, 2.0).unwrap();
        assert!((potential_norm(&f, 2.0, 2.0).unwrap() - l2).abs() < 1e-12);
        assert!((potential_norm(&f, 0.0, 2.0).unwrap() - l2).abs() < 1e-12);
        assert!((ladder_norm(&f, 1, 2.0).unwrap() - l2 * (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(ladder_norm(&f, 2, 2.0).unwrap() >= ladder_norm(&f, 1, 2.0).unwrap());
        assert_eq!(ladder_norm(&Field::zeros(&g), 1, 2.0).unwrap(), 0.0);
        let scaled = f.scale(C64::new(-3.0, 0.0));
        assert!((potential_norm(&scaled, 1.0, 4.0).unwrap() - 3.0 * potential_norm(&f, 1.0, 4.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn p4_norm_of_ground_mode() {
        // ∫∫ |Φ_0(x)|⁴ over one ρ-period: 2L · (2π)^{-1/2}
        let g = make_grid(1, 16, 6.0, 8, 9).unwrap();
        let f = ground(&g);
        let v = potential_norm(&f, 0.0, 4.0).unwrap();
        let exact = (12.0 / (2.0 * std::f64::consts::PI).sqrt()).powf(0.25);
        assert!((v - exact).abs() < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn equivalence_bracket() {
        let g = make_grid(1, 64, 12.0, 20, 22).unwrap();
        let fam = TestFamily::gaussians(1, 10, 11);
        let r = equivalence_report(&fam, &g, 1, 2.0).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures());
        let r10 = equivalence_report(&fam.scaled(10.0), &g, 1, 2.0).unwrap();
        assert!((r.metric("bracket_max").unwrap().value - r10.metric("bracket_max").unwrap().value).abs() < 1e-10);
    }

    #[test]
    fn riesz_zero_is_contractive() {
        let g = make_grid(1, 64, 12.0, 20, 22).unwrap();
        let fam = TestFamily::new(FamilyKind::Mixed, 1, 10, 2, 4);
        let r = riesz_on_potential_check(0, 1.0, 2.0, &fam, &g).unwrap();
        assert!(r.metric("riesz_ratio_sup").unwrap().value <= 1.0 + 1e-10);
        assert!(r.all_pass());
    }

    #[test]
    fn weighted_decay_identity_weight() {
        let g = make_grid(1, 64, 12.0, 20, 22).unwrap();
        let fam = TestFamily::gaussians(1, 10, 3);
        let r = weighted_decay_check(0.0, 2.0, &fam, &g).unwrap();
        assert!((r.metric("weighted_operator_sup").unwrap().value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sandwich_is_coefficientwise() {
        let g = make_grid(2, 32, 8.0, 16, 18).unwrap();
        let fam = TestFamily::new(FamilyKind::HermiteMixtures, 2, 5, 4, 6);
        for i in 0..fam.len() {
            assert!(p2_sandwich_holds(&forward(&fam.sample(i, &g).unwrap())).unwrap());
        }
    }

    #[test]
    fn hermite_classical_norms_of_gaussian() {
        // standard Gaussian e^{-(ρ²+x²)/2}: all three α = 0 norms are ‖f‖₂ = √π
        let m = Member::Gaussian { amplitude: 1.0, center: vec![0.0, 0.0], widths: vec![1.0, 1.0] };
        let (h, c) = hermite_and_classical_norms(&m, 0.0).unwrap();
        assert!((h - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!((c - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        // α = 1: Hermite eigenvalue 2 on the ground state; classical ∫(1+|ζ|²)|f̂|² = π + π
        let (h, c) = hermite_and_classical_norms(&m, 1.0).unwrap();
        assert!((h - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
        assert!((c - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }
}
