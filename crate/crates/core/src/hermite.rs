//! Hermite functions, Gauss–Hermite rules, projection kernels and Mehler's formula.
//!
//! All evaluation goes through the normalized three-term recurrence for the
//! Hermite *functions* `h_k(x) = (2^k k! √π)^{-1/2} H_k(x) e^{-x²/2}`, which keeps
//! every intermediate value O(1) even for k in the thousands.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `π^{-1/4}`, the value of `h_0(0)`.
pub const H0_AT_ZERO: f64 = 0.751_125_544_464_942_5;

/// A multi-index `μ ∈ N^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    /// The unit vector `e_j` (0-based axis).
    pub fn unit(d: usize, axis: usize) -> Self {
        let mut v = vec![0; d];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|μ| = Σ μ_j`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

/// `h_k(x)`.
pub fn hermite_eval(k: usize, x: f64) -> f64 {
    let mut h_prev = 0.0;
    let mut h = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for n in 0..k {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * h - (nf / (nf + 1.0)).sqrt() * h_prev;
        h_prev = h;
        h = next;
    }
    h
}

/// Fills `out[k] = h_k(x)` for `k = 0..out.len()`.
pub fn hermite_all(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if out.len() > 1 {
        out[1] = 2f64.sqrt() * x * out[0];
    }
    for n in 1..out.len().saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = x * (2.0 / (nf + 1.0)).sqrt() * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

/// `(h_k(x), h_k'(x))`, with the derivative obtained by differentiating the
/// recurrence itself (seeded by `h_0' = -x h_0`).
pub fn hermite_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut h_prev = 0.0;
    let mut dh_prev = 0.0;
    let mut h = PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut dh = -x * h;
    for n in 0..k {
        let nf = n as f64;
        let a = (2.0 / (nf + 1.0)).sqrt();
        let b = (nf / (nf + 1.0)).sqrt();
        let next = x * a * h - b * h_prev;
        let dnext = a * h + x * a * dh - b * dh_prev;
        h_prev = h;
        dh_prev = dh;
        h = next;
        dh = dnext;
    }
    (h, dh)
}

/// `Φ_μ(x) = Π_j h_{μ_j}(x_j)`.
pub fn phi_mu(mu: &MultiIndex, x: &[f64]) -> f64 {
    assert_eq!(mu.dim(), x.len(), "multi-index and point dimensions differ");
    mu.0.iter().zip(x).map(|(&k, &xj)| hermite_eval(k, xj)).product()
}

/// All multi-indices of dimension `d` with `|μ| = k`, in lexicographic order.
pub fn compositions(k: usize, d: usize) -> Vec<MultiIndex> {
    fn rec(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=rest).rev() {
            prefix.push(first);
            rec(rest - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(d >= 1);
    let mut out = Vec::new();
    rec(k, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// A Gauss–Hermite rule for the weight `e^{-x²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GHRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `weights[q] · e^{x_q²}`, for integrands that carry their own decay.
    pub compensated: Vec<f64>,
}

impl GHRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `Σ w_q f(x_q) ≈ ∫ e^{-x²} f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

const GH_MAX_ITER: usize = 100;
const GH_TOL: f64 = 1e-14;

/// Nodes by Newton iteration on `h_M` with the classical asymptotic initial
/// guesses; weights from `w_q e^{x_q²} = 1 / (M h_{M-1}(x_q)²)`.
pub fn gauss_hermite(m: usize) -> Result<GHRule> {
    if m == 0 {
        return Err(Error::InvalidParameter("Gauss–Hermite order must be ≥ 1".into()));
    }
    let mf = m as f64;
    let half = (m + 1) / 2;
    let mut pos = vec![0.0; half];
    let mut z = 0.0;
    for i in 0..half {
        z = match i {
            0 => (2.0 * mf + 1.0).sqrt() - 1.85575 * (2.0 * mf + 1.0).powf(-0.16667),
            1 => z - 1.14 * mf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * pos[0],
            3 => 1.91 * z - 0.91 * pos[1],
            _ => 2.0 * z - pos[i - 2],
        };
        let mut converged = false;
        for _ in 0..GH_MAX_ITER {
            let (hm, hm1) = top_pair(m, z);
            // p_M / p_M' = h_M / (√(2M) h_{M-1}) at any x
            let step = hm / ((2.0 * mf).sqrt() * hm1);
            z -= step;
            if step.abs() <= GH_TOL * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Gauss–Hermite root {i} of order {m} did not converge"
            )));
        }
        pos[i] = z;
    }
    if m % 2 == 1 {
        pos[half - 1] = 0.0;
    }

    let mut nodes = Vec::with_capacity(m);
    for &p in pos.iter().rev() {
        if p != 0.0 || m % 2 == 0 {
            nodes.push(-p);
        }
    }
    if m % 2 == 1 {
        nodes.push(0.0);
    }
    for &p in pos.iter() {
        if p != 0.0 {
            nodes.push(p);
        }
    }
    nodes.sort_by(|a, b| a.total_cmp(b));

    let compensated: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (_, hm1) = top_pair(m, x);
            1.0 / (mf * hm1 * hm1)
        })
        .collect();
    let weights = nodes
        .iter()
        .zip(&compensated)
        .map(|(&x, &c)| c * (-x * x).exp())
        .collect();
    Ok(GHRule { nodes, weights, compensated })
}

/// `(h_m(x), h_{m-1}(x))`.
fn top_pair(m: usize, x: f64) -> (f64, f64) {
    let mut h_prev = 0.0;
    let mut h = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for n in 0..m {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * h - (nf / (nf + 1.0)).sqrt() * h_prev;
        h_prev = h;
        h = next;
    }
    (h, h_prev)
}

/// `Φ_k(x, x') = Σ_{|μ|=k} Φ_μ(x) Φ_μ(x')`.
pub fn projection_kernel(k: usize, x: &[f64], xp: &[f64]) -> f64 {
    assert_eq!(x.len(), xp.len());
    let d = x.len();
    // tabulate once per coordinate instead of per multi-index
    let tab = |p: &[f64]| -> Vec<Vec<f64>> {
        p.iter()
            .map(|&c| {
                let mut v = vec![0.0; k + 1];
                hermite_all(c, &mut v);
                v
            })
            .collect()
    };
    let (tx, txp) = (tab(x), tab(xp));
    compositions(k, d)
        .iter()
        .map(|mu| {
            mu.0.iter()
                .enumerate()
                .map(|(j, &m)| tx[j][m] * txp[j][m])
                .product::<f64>()
        })
        .sum()
}

/// Logarithm of the right-hand side of Mehler's formula.
pub fn log_mehler_closed_form(r: f64, x: &[f64], xp: &[f64]) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("Mehler's formula needs 0 < r < 1, got {r}")));
    }
    assert_eq!(x.len(), xp.len());
    let d = x.len() as f64;
    let one_m = (1.0 - r) * (1.0 + r);
    let sq: f64 = x.iter().chain(xp).map(|v| v * v).sum();
    let dot: f64 = x.iter().zip(xp).map(|(a, b)| a * b).sum();
    let log_pref = -0.5 * d * PI.ln() - 0.5 * d * one_m.ln();
    let expo = -0.5 * (1.0 + r * r) / one_m * sq + 2.0 * r * dot / one_m;
    Ok(log_pref + expo)
}

/// `Σ_k r^k Φ_k(x,x') = π^{-d/2}(1-r²)^{-d/2} exp(-½ (1+r²)/(1-r²)(|x|²+|x'|²) + 2r x·x'/(1-r²))`.
pub fn mehler_closed_form(r: f64, x: &[f64], xp: &[f64]) -> Result<f64> {
    log_mehler_closed_form(r, x, xp).map(f64::exp)
}

/// `Σ_{k ≤ k_sum} r^k Φ_k(x, x')`.
pub fn mehler_partial_sum(k_sum: usize, r: f64, x: &[f64], xp: &[f64]) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("Mehler's formula needs 0 < r < 1, got {r}")));
    }
    assert_eq!(x.len(), xp.len());
    let d = x.len();
    let tab = |p: &[f64]| -> Vec<Vec<f64>> {
        p.iter()
            .map(|&c| {
                let mut v = vec![0.0; k_sum + 1];
                hermite_all(c, &mut v);
                v
            })
            .collect()
    };
    let (tx, txp) = (tab(x), tab(xp));
    if d == 1 {
        let mut acc = 0.0;
        let mut rk = 1.0;
        for k in 0..=k_sum {
            acc += rk * tx[0][k] * txp[0][k];
            rk *= r;
        }
        return Ok(acc);
    }
    // the kernel factorizes: Σ_k r^k Φ_k = Π_j Σ_m r^m h_m(x_j) h_m(x'_j), truncated at |μ| ≤ k_sum
    let mut acc = 0.0;
    let mut rk = 1.0;
    for k in 0..=k_sum {
        let shell: f64 = compositions(k, d)
            .iter()
            .map(|mu| {
                mu.0.iter()
                    .enumerate()
                    .map(|(j, &m)| tx[j][m] * txp[j][m])
                    .product::<f64>()
            })
            .sum();
        acc += rk * shell;
        rk *= r;
    }
    Ok(acc)
}

/// Largest relative error of `mehler_partial_sum(k_sum)` against the closed
/// form on a `side × side` grid of `(x, x')` in `[-half, half]²` (d = 1), per
/// `r`. Tolerance `1e-10` for `r ≤ 0.5`, else `1e-6`.
pub fn mehler_report(k_sum: usize, rs: &[f64], side: usize, half: f64) -> Result<crate::report::Report> {
    use crate::report::{Metric, Report};
    if side < 2 {
        return Err(Error::InvalidParameter("need at least 2 points per side".into()));
    }
    let pts: Vec<f64> = (0..side).map(|i| -half + 2.0 * half * i as f64 / (side - 1) as f64).collect();
    let mut report = Report::new("mehler").param("K", k_sum as f64).param("d", 1.0);
    for &r in rs {
        let mut worst: f64 = 0.0;
        for &x in &pts {
            for &xp in &pts {
                let exact = mehler_closed_form(r, &[x], &[xp])?;
                let sum = mehler_partial_sum(k_sum, r, &[x], &[xp])?;
                worst = worst.max((sum - exact).abs() / exact.abs());
            }
        }
        let tol = if r <= 0.5 { 1e-10 } else { 1e-6 };
        report.push(Metric::upper(format!("rel_error_r{r}"), worst, tol, "partial sum vs closed form"));
    }
    Ok(report)
}
