//! The mixed Fourier–Hermite transform and the functional calculus `F(H)`.
//!
//! A field is expanded as `f(ρ, x) = Σ_{n, μ} c[n][μ] e^{iτ_n ρ} Φ_μ(x)`, with
//! `τ_n = πn/L` and `|μ| ≤ K`. On that basis `H` is diagonal with eigenvalue
//! `τ_n² + 2|μ| + d`, so every `F(H)` is a coefficientwise multiplication.

use std::fmt;
use std::sync::Arc;

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::hermite::MultiIndex;
use crate::tensor::{contract_axis, map_fibres, unravel};
use crate::C64;

/// Fourier–Hermite coefficients, laid out `[fft slot][m_1]…[m_d]` with `m_j ≤ K`.
/// Entries with `|μ| > K` are kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    pub grid: Arc<Grid>,
    pub data: Vec<C64>,
}

/// One retained mode `(τ_n, μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub slot: usize,
    pub n: i64,
    pub tau: f64,
    /// Flat index of μ inside a frequency slice.
    pub mu_flat: usize,
    pub order: usize,
}

impl SpectralCoeffs {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        SpectralCoeffs {
            grid: grid.clone(),
            data: vec![C64::new(0.0, 0.0); grid.n_rho * slice_len(grid)],
        }
    }

    /// The single mode `e^{iτ_n ρ} Φ_μ(x)` with unit coefficient.
    pub fn pure_mode(grid: &Arc<Grid>, n: i64, mu: &MultiIndex) -> Result<Self> {
        let mut c = SpectralCoeffs::zeros(grid);
        *c.get_mut(n, mu)? = C64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn shape(&self) -> Vec<usize> {
        let mut s = vec![self.grid.n_rho];
        s.extend(std::iter::repeat(self.grid.k + 1).take(self.grid.d));
        s
    }

    fn position(&self, n: i64, mu: &MultiIndex) -> Result<usize> {
        let g = &self.grid;
        if mu.dim() != g.d {
            return Err(Error::GridMismatch(format!("multi-index of dimension {} on a d = {} grid", mu.dim(), g.d)));
        }
        if mu.order() > g.k {
            return Err(Error::InvalidParameter(format!("|μ| = {} exceeds K = {}", mu.order(), g.k)));
        }
        let slot = g
            .freq_slot(n)
            .ok_or_else(|| Error::InvalidParameter(format!("frequency index {n} outside the grid")))?;
        let kk = g.k + 1;
        let flat = mu.0.iter().fold(0, |acc, &m| acc * kk + m);
        Ok(slot * slice_len(g) + flat)
    }

    pub fn get(&self, n: i64, mu: &MultiIndex) -> Result<C64> {
        Ok(self.data[self.position(n, mu)?])
    }

    pub fn get_mut(&mut self, n: i64, mu: &MultiIndex) -> Result<&mut C64> {
        let p = self.position(n, mu)?;
        Ok(&mut self.data[p])
    }

    /// Every mode with `|μ| ≤ K`, in storage order.
    pub fn modes(&self) -> Vec<Mode> {
        modes_of(&self.grid)
    }

    /// Eigenvalue `τ² + 2|μ| + d` of a mode.
    pub fn eigenvalue(&self, mode: &Mode) -> f64 {
        mode.tau * mode.tau + 2.0 * mode.order as f64 + self.grid.d as f64
    }

    /// `Σ |c|²`.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// The L² norm of the represented function, `(2L Σ|c|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (2.0 * self.grid.l_rho * self.norm_sq()).sqrt()
    }

    /// `∫ f ḡ` of the represented functions.
    pub fn inner(&self, other: &SpectralCoeffs) -> Result<C64> {
        self.check_same(other)?;
        let s: C64 = self.data.iter().zip(&other.data).map(|(a, b)| a * b.conj()).sum();
        Ok(s * (2.0 * self.grid.l_rho))
    }

    /// `c ↦ factor(mode) · c` on every retained mode.
    pub fn map_modes(&self, factor: impl Fn(&Mode) -> C64) -> SpectralCoeffs {
        let mut out = SpectralCoeffs::zeros(&self.grid);
        let sl = slice_len(&self.grid);
        for m in self.modes() {
            let p = m.slot * sl + m.mu_flat;
            out.data[p] = factor(&m) * self.data[p];
        }
        out
    }

    pub fn scale(&self, c: C64) -> SpectralCoeffs {
        SpectralCoeffs {
            grid: self.grid.clone(),
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SpectralCoeffs) -> Result<SpectralCoeffs> {
        self.check_same(other)?;
        Ok(SpectralCoeffs {
            grid: self.grid.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Relative energy in the top tenth of the spectral range along either
    /// axis: `|μ| ≥ 0.9 K` or `|n| ≥ 0.9 N/2`.
    pub fn tail_fraction(&self) -> f64 {
        let total = self.norm_sq();
        if total == 0.0 {
            return 0.0;
        }
        let g = &self.grid;
        let mu_cut = (0.9 * g.k as f64).ceil() as usize;
        let n_cut = (0.9 * (g.n_rho / 2) as f64).ceil() as i64;
        let sl = slice_len(g);
        let tail: f64 = self
            .modes()
            .iter()
            .filter(|m| (g.k > 0 && m.order >= mu_cut) || m.n.abs() >= n_cut)
            .map(|m| self.data[m.slot * sl + m.mu_flat].norm_sqr())
            .sum();
        tail / total
    }

    /// Relative energy on the top shell `|μ| = K`.
    pub fn top_shell_fraction(&self) -> f64 {
        let total = self.norm_sq();
        if total == 0.0 {
            return 0.0;
        }
        let sl = slice_len(&self.grid);
        let top: f64 = self
            .modes()
            .iter()
            .filter(|m| m.order == self.grid.k)
            .map(|m| self.data[m.slot * sl + m.mu_flat].norm_sqr())
            .sum();
        top / total
    }

    pub(crate) fn check_same(&self, other: &SpectralCoeffs) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("coefficients live on different grids".into()));
        }
        Ok(())
    }
}

pub(crate) fn slice_len(g: &Grid) -> usize {
    (g.k + 1).pow(g.d as u32)
}

pub(crate) fn modes_of(g: &Grid) -> Vec<Mode> {
    let kk = g.k + 1;
    let sl = slice_len(g);
    let dims = vec![kk; g.d];
    let mut idx = vec![0; g.d];
    let mut orders = Vec::with_capacity(sl);
    for flat in 0..sl {
        unravel(flat, &dims, &mut idx);
        orders.push(idx.iter().sum::<usize>());
    }
    let mut out = Vec::new();
    for slot in 0..g.n_rho {
        let n = g.freq_index(slot);
        let tau = g.tau(n);
        for (mu_flat, &order) in orders.iter().enumerate() {
            if order <= g.k {
                out.push(Mode { slot, n, tau, mu_flat, order });
            }
        }
    }
    out
}

/// Multi-index of a flat μ index.
pub fn mu_of_flat(g: &Grid, flat: usize) -> MultiIndex {
    let mut idx = vec![0; g.d];
    unravel(flat, &vec![g.k + 1; g.d], &mut idx);
    MultiIndex(idx)
}

/// Hermite projections followed by a DFT in ρ, normalized so that the pure
/// mode `e^{iτ_n ρ} Φ_μ` has coefficient 1.
pub fn forward(field: &Field) -> SpectralCoeffs {
    let g = &field.grid;
    let kk = g.k + 1;
    let analysis = g.analysis_matrix();
    let mut shape = g.shape();
    let mut data = field.values.clone();
    for axis in 1..=g.d {
        let (s, d) = contract_axis(&data, &shape, axis, &analysis, kk);
        shape = s;
        data = d;
    }
    let n = g.n_rho;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let signs: Vec<f64> = (0..n)
        .map(|s| if g.freq_index(s).rem_euclid(2) == 0 { 1.0 } else { -1.0 } / n as f64)
        .collect();
    map_fibres(&mut data, &shape, 0, |v| {
        fft.process(v);
        for (c, s) in v.iter_mut().zip(&signs) {
            *c *= *s;
        }
    });
    let mut out = SpectralCoeffs { grid: g.clone(), data };
    zero_outside_shell(&mut out);
    out
}

fn zero_outside_shell(c: &mut SpectralCoeffs) {
    let g = c.grid.clone();
    if g.d == 1 {
        return;
    }
    let sl = slice_len(&g);
    let dims = vec![g.k + 1; g.d];
    let mut idx = vec![0; g.d];
    let outside: Vec<usize> = (0..sl)
        .filter(|&f| {
            unravel(f, &dims, &mut idx);
            idx.iter().sum::<usize>() > g.k
        })
        .collect();
    for slot in 0..g.n_rho {
        for &f in &outside {
            c.data[slot * sl + f] = C64::new(0.0, 0.0);
        }
    }
}

/// `f(ρ_i, x_q) = Σ c[n][μ] e^{iτ_n ρ_i} Φ_μ(x_q)`.
pub fn inverse(coeffs: &SpectralCoeffs) -> Field {
    let g = &coeffs.grid;
    let n = g.n_rho;
    let mut shape = coeffs.shape();
    let mut data = coeffs.data.clone();
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let signs: Vec<f64> = (0..n)
        .map(|s| if g.freq_index(s).rem_euclid(2) == 0 { 1.0 } else { -1.0 })
        .collect();
    map_fibres(&mut data, &shape, 0, |v| {
        for (c, s) in v.iter_mut().zip(&signs) {
            *c *= *s;
        }
        fft.process(v);
    });
    let synthesis = g.synthesis_matrix();
    for axis in 1..=g.d {
        let (s, d) = contract_axis(&data, &shape, axis, &synthesis, g.m);
        shape = s;
        data = d;
    }
    Field { grid: g.clone(), values: data }
}

/// A spectral multiplier `λ ↦ F(λ + shift)`.
#[derive(Clone)]
pub struct Multiplier {
    pub label: String,
    pub shift: f64,
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("label", &self.label)
            .field("shift", &self.shift)
            .finish()
    }
}

impl Multiplier {
    pub fn new(label: impl Into<String>, shift: f64, func: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Multiplier { label: label.into(), shift, func: Arc::new(func) }
    }

    pub fn identity() -> Self {
        Multiplier::new("1", 0.0, |_| 1.0)
    }

    /// `F(λ) = λ`.
    pub fn eigenvalue() -> Self {
        Multiplier::new("λ", 0.0, |l| l)
    }

    /// `(λ + shift)^α`.
    pub fn power(alpha: f64, shift: f64) -> Self {
        Multiplier::new(format!("(λ{shift:+})^{alpha}"), shift, move |l| {
            if alpha == 0.0 {
                1.0
            } else {
                l.powf(alpha)
            }
        })
    }

    /// `e^{-tλ}`.
    pub fn heat(t: f64) -> Self {
        Multiplier::new(format!("exp(-{t}λ)"), 0.0, move |l| (-t * l).exp())
    }

    /// `F(λ + shift)`.
    pub fn eval(&self, lambda: f64) -> f64 {
        (self.func)(lambda + self.shift)
    }
}

/// `c[n][μ] ↦ F(τ_n² + 2|μ| + d + a) c[n][μ]`.
///
/// Modes whose coefficient is exactly zero are skipped, so a shift only has to
/// be admissible where the input actually lives.
pub fn apply_multiplier(coeffs: &SpectralCoeffs, mult: &Multiplier) -> Result<SpectralCoeffs> {
    let mut out = SpectralCoeffs::zeros(&coeffs.grid);
    let sl = slice_len(&coeffs.grid);
    for m in coeffs.modes() {
        let p = m.slot * sl + m.mu_flat;
        let c = coeffs.data[p];
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let lambda = coeffs.eigenvalue(&m);
        let factor = mult.eval(lambda);
        if !factor.is_finite() {
            return Err(Error::SingularMultiplier { label: mult.label.clone(), shifted: lambda + mult.shift });
        }
        out.data[p] = c * factor;
    }
    Ok(out)
}

/// Spectral `(H + a)^α` on coefficients.
///
/// Positive powers are refused when the top tenth of the spectrum carries more
/// than `1e-6` of the energy.
pub fn frac_power_coeffs(coeffs: &SpectralCoeffs, alpha: f64, shift: f64) -> Result<SpectralCoeffs> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite exponent {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(coeffs.clone());
    }
    if alpha > 0.0 {
        let tail = coeffs.tail_fraction();
        if tail > 1e-6 {
            return Err(Error::Truncation {
                context: format!("positive power {alpha} of an unresolved field"),
                energy: tail,
                tolerance: 1e-6,
            });
        }
    }
    apply_multiplier(coeffs, &power_multiplier(alpha, shift))
}

fn power_multiplier(alpha: f64, shift: f64) -> Multiplier {
    Multiplier::new(format!("(λ{shift:+})^{alpha}"), shift, move |l| {
        if l < 0.0 || (l == 0.0 && alpha < 0.0) {
            f64::NAN
        } else {
            l.powf(alpha)
        }
    })
}

/// `(H + a)^α f`.
pub fn frac_power(field: &Field, alpha: f64, shift: f64) -> Result<Field> {
    if alpha == 0.0 {
        return Ok(field.clone());
    }
    Ok(inverse(&frac_power_coeffs(&forward(field), alpha, shift)?))
}

/// `e^{-tH} f`.
pub fn heat_spectral(field: &Field, t: f64) -> Result<Field> {
    if t == 0.0 {
        return Ok(field.clone());
    }
    Ok(inverse(&heat_coeffs(&forward(field), t)?))
}

pub fn heat_coeffs(coeffs: &SpectralCoeffs, t: f64) -> Result<SpectralCoeffs> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("heat time must be ≥ 0, got {t}")));
    }
    apply_multiplier(coeffs, &Multiplier::heat(t))
}

/// A uniform box covering the ρ-period and the bulk of every retained
/// Hermite mode in x, fine enough to resolve the top shell.
pub fn norm_box(grid: &Grid) -> Result<crate::grid::UniformBox> {
    let reach = (2.0 * grid.k as f64 + 1.0).sqrt();
    let half = reach + 4.0;
    let per_axis = ((3.0 * half * reach / std::f64::consts::PI).ceil() as usize).max(32);
    let per_axis = per_axis + per_axis % 2;
    let mut half_widths = vec![grid.l_rho];
    let mut counts = vec![grid.n_rho];
    for _ in 0..grid.d {
        half_widths.push(half);
        counts.push(per_axis);
    }
    crate::grid::UniformBox::new(half_widths, counts)
}

/// `‖f‖_p` of the represented function: Plancherel for `p = 2`, otherwise the
/// series evaluated on [`norm_box`].
pub fn coeffs_lp_norm(coeffs: &SpectralCoeffs, p: f64) -> Result<f64> {
    if p == 2.0 {
        return Ok(coeffs.l2_norm());
    }
    let bx = norm_box(&coeffs.grid)?;
    let samples = crate::grid::resample_coeffs(coeffs, &bx)?;
    crate::grid::lp_norm(&samples, p)
}

/// Coefficients uniform in the unit square on `|n| ≤ n_max`, `|μ| ≤ k_max`,
/// zero elsewhere.
pub fn random_band_limited(g: &Arc<Grid>, seed: u64, n_max: i64, k_max: usize) -> SpectralCoeffs {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut c = SpectralCoeffs::zeros(g);
    let sl = slice_len(g);
    for m in modes_of(g) {
        if m.n.abs() <= n_max && m.order <= k_max {
            c.data[m.slot * sl + m.mu_flat] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    c
}
