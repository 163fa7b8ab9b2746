//! One-dimensional quadrature: Gauss–Legendre, adaptive Simpson, and the
//! `∫₀^∞ t^{β-1} g(t) dt` rules used for every fractional power.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::C64;

/// Scalars that can be integrated.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule mapped to `[a, b]`, appended to `out`.
pub fn push_gl_panel(a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>), out: &mut Vec<(f64, f64)>) {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    for (&x, &w) in rule.0.iter().zip(&rule.1) {
        out.push((mid + half * x, half * w));
    }
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<V: QuadValue>(
    f: &impl Fn(f64) -> V,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
) -> Result<V> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut failed = false;
    let v = simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut failed);
    if failed {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson on [{a:e}, {b:e}] hit depth {max_depth}"
        )));
    }
    Ok(v)
}

fn simpson<V: QuadValue>(a: f64, b: f64, fa: V, fm: V, fb: V) -> V {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<V: QuadValue>(
    f: &impl Fn(f64) -> V,
    a: f64,
    b: f64,
    fa: V,
    fm: V,
    fb: V,
    whole: V,
    tol: f64,
    depth: usize,
    failed: &mut bool,
) -> V {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.magnitude() <= 15.0 * tol {
        return left + right + delta * (1.0 / 15.0);
    }
    if depth == 0 {
        *failed = true;
        return left + right + delta * (1.0 / 15.0);
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, failed)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, failed)
}

/// Rule for `∫₀^∞ t^{β-1} g(t) dt`.
///
/// On `(0, split]` the substitution `t = split · u^{1/β}` turns the weight into
/// a constant, and `u ∈ (0, 1]` is cut into geometric panels `[2^{-k-1}, 2^{-k}]`.
/// On `[split, t_max]` geometric panels in `t` are used; `t_max` comes from the
/// exponential decay rate of `g`. With no decay, a second substitution
/// `t = split · v^{-1/γ}` maps the algebraic tail onto `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TQuadrature {
    pub split: f64,
    /// Number of geometric panels on the substituted head.
    pub head_panels: usize,
    /// Gauss–Legendre points per panel.
    pub points: usize,
    /// Integrable decay `g(t) = O(e^{-rate·t})`; `t_max = 40 / rate`.
    pub rate: f64,
    /// Algebraic decay `t^{β-1} g(t) = O(t^{-1-γ})`, used when `rate ≤ 0`.
    pub algebraic: Option<f64>,
    /// Tolerance for the adaptive (pointwise) variant.
    pub tol: f64,
}

impl TQuadrature {
    pub fn new(rate: f64) -> Self {
        TQuadrature {
            split: 1.0,
            head_panels: 30,
            points: 16,
            rate,
            algebraic: None,
            tol: 1e-10,
        }
    }

    pub fn t_max(&self) -> f64 {
        self.split.max(40.0 / self.rate)
    }

    fn check(&self, beta: f64) -> Result<()> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("t-quadrature exponent must be > 0, got {beta}")));
        }
        if !(self.rate > 0.0) && self.algebraic.map_or(true, |g| !(g > 0.0)) {
            return Err(Error::Quadrature(
                "integrand has neither exponential nor algebraic decay".into(),
            ));
        }
        Ok(())
    }

    /// Nodes and weights with `Σ w g(t) ≈ ∫₀^∞ t^{β-1} g(t) dt`.
    pub fn nodes(&self, beta: f64) -> Result<Vec<(f64, f64)>> {
        self.check(beta)?;
        let gl = gauss_legendre(self.points);
        let mut out = Vec::new();
        // head: t = s u^{1/β}, dt t^{β-1} = s^β/β du
        let mut head = Vec::new();
        push_gl_panel(0.0, 0.5f64.powi(self.head_panels as i32), &gl, &mut head);
        for k in (0..self.head_panels).rev() {
            push_gl_panel(0.5f64.powi(k as i32 + 1), 0.5f64.powi(k as i32), &gl, &mut head);
        }
        let scale = self.split.powf(beta) / beta;
        for (u, w) in head {
            out.push((self.split * u.powf(1.0 / beta), w * scale));
        }
        out.extend(self.tail_nodes(beta, &gl));
        Ok(out)
    }

    fn tail_nodes(&self, beta: f64, gl: &(Vec<f64>, Vec<f64>)) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        if self.rate > 0.0 {
            let t_max = self.t_max();
            let mut a = self.split;
            while a < t_max {
                let b = (2.0 * a).min(t_max);
                let mut panel = Vec::new();
                push_gl_panel(a, b, gl, &mut panel);
                for (t, w) in panel {
                    out.push((t, w * t.powf(beta - 1.0)));
                }
                a = b;
            }
        } else if let Some(gamma) = self.algebraic {
            // t = s v^{-1/γ}: dt = (s/γ) v^{-1/γ-1} dv
            let mut panel = Vec::new();
            push_gl_panel(0.0, 0.5f64.powi(self.head_panels as i32), gl, &mut panel);
            for k in (0..self.head_panels).rev() {
                push_gl_panel(0.5f64.powi(k as i32 + 1), 0.5f64.powi(k as i32), gl, &mut panel);
            }
            for (v, w) in panel {
                let t = self.split * v.powf(-1.0 / gamma);
                let jac = self.split / gamma * v.powf(-1.0 / gamma - 1.0);
                out.push((t, w * jac * t.powf(beta - 1.0)));
            }
        }
        out
    }

    /// Adaptive variant: Simpson per head panel to relative tolerance `tol`.
    pub fn integrate<V: QuadValue>(&self, beta: f64, g: impl Fn(f64) -> V) -> Result<V> {
        self.check(beta)?;
        let scale = self.split.powf(beta) / beta;
        let head = |u: f64| -> V { g(self.split * u.powf(1.0 / beta)) * scale };
        // coarse pass fixes the absolute tolerance
        let coarse: V = self
            .nodes(beta)?
            .into_iter()
            .fold(V::zero(), |acc, (t, w)| acc + g(t) * w);
        let abs_tol = (self.tol * coarse.magnitude()).max(1e-300);
        let per = abs_tol / (2.0 * (self.head_panels + 1) as f64);
        // the innermost panel touches t = 0, where g may be singular: Gauss only
        let floor = 0.5f64.powi(self.head_panels as i32);
        let mut inner = Vec::new();
        push_gl_panel(0.0, floor, &gauss_legendre(self.points.max(8)), &mut inner);
        let mut total = inner.into_iter().fold(V::zero(), |acc, (u, w)| acc + head(u) * w);
        for k in (0..self.head_panels).rev() {
            let (a, b) = (0.5f64.powi(k as i32 + 1), 0.5f64.powi(k as i32));
            total = total + adaptive_simpson(&head, a, b, per, 40)?;
        }
        let gl = gauss_legendre(64);
        for (t, w) in self.tail_nodes(beta, &gl) {
            total = total + g(t) * w;
        }
        Ok(total)
    }
}
