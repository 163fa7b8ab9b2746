//! Discretizations of `R^{d+1}`: the spectral grid (periodic ρ × Gauss–Hermite x),
//! uniform boxes, sampled fields, and L^p norms.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::{gauss_hermite, hermite_all, GHRule};
use crate::tensor::{contract_axis, unravel};
use crate::C64;

/// Uniform periodic ρ-grid on `[-L, L)` times `M` Gauss–Hermite nodes per x-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub d: usize,
    pub n_rho: usize,
    pub l_rho: f64,
    /// Maximum total Hermite degree `|μ|`.
    pub k: usize,
    /// Gauss–Hermite order per x-axis.
    pub m: usize,
    pub rule: GHRule,
}

/// Builds a grid; `M ≥ K + 1` keeps products of two retained modes exactly integrable.
pub fn make_grid(d: usize, n_rho: usize, l_rho: f64, k: usize, m: usize) -> Result<Arc<Grid>> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    if d > 3 {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds the supported maximum of 3")));
    }
    if n_rho < 2 || !n_rho.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("N_rho = {n_rho} is not a power of two ≥ 2")));
    }
    if !(l_rho > 0.0) || !l_rho.is_finite() {
        return Err(Error::InvalidParameter(format!("L_rho = {l_rho} must be positive")));
    }
    if m < k + 1 {
        return Err(Error::InvalidParameter(format!("M = {m} < K + 1 = {}", k + 1)));
    }
    if m > 128 {
        return Err(Error::InvalidParameter(format!("M = {m} exceeds 128")));
    }
    let rule = gauss_hermite(m)?;
    Ok(Arc::new(Grid { d, n_rho, l_rho, k, m, rule }))
}

impl Grid {
    /// `ρ_i = -L + 2L i / N`.
    pub fn rho(&self, i: usize) -> f64 {
        -self.l_rho + 2.0 * self.l_rho * i as f64 / self.n_rho as f64
    }

    pub fn rho_nodes(&self) -> Vec<f64> {
        (0..self.n_rho).map(|i| self.rho(i)).collect()
    }

    pub fn rho_spacing(&self) -> f64 {
        2.0 * self.l_rho / self.n_rho as f64
    }

    /// Signed frequency index for FFT slot `i`.
    pub fn freq_index(&self, i: usize) -> i64 {
        let n = self.n_rho as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT slot of the signed frequency index `n ∈ [-N/2, N/2)`.
    pub fn freq_slot(&self, n: i64) -> Option<usize> {
        let half = self.n_rho as i64 / 2;
        if n < -half || n >= half {
            return None;
        }
        Some(if n >= 0 { n as usize } else { (n + self.n_rho as i64) as usize })
    }

    /// `τ_n = π n / L`.
    pub fn tau(&self, n: i64) -> f64 {
        std::f64::consts::PI * n as f64 / self.l_rho
    }

    pub fn nodes_x(&self) -> &[f64] {
        &self.rule.nodes
    }

    /// Weights `w_q e^{x_q²}` for integrands carrying their own decay.
    pub fn weights_x(&self) -> &[f64] {
        &self.rule.compensated
    }

    /// Number of x-samples, `M^d`.
    pub fn x_len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    pub fn len(&self) -> usize {
        self.n_rho * self.x_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tensor shape of field values: `[N, M, …, M]`.
    pub fn shape(&self) -> Vec<usize> {
        let mut s = vec![self.n_rho];
        s.extend(std::iter::repeat(self.m).take(self.d));
        s
    }

    /// x-coordinates of flat x-index `flat`.
    pub fn x_point(&self, flat: usize, out: &mut [f64]) {
        let mut idx = vec![0; self.d];
        unravel(flat, &vec![self.m; self.d], &mut idx);
        for (o, &q) in out.iter_mut().zip(&idx) {
            *o = self.rule.nodes[q];
        }
    }

    /// Product quadrature weight of flat x-index `flat`.
    pub fn x_weight(&self, flat: usize) -> f64 {
        let mut idx = vec![0; self.d];
        unravel(flat, &vec![self.m; self.d], &mut idx);
        idx.iter().map(|&q| self.rule.compensated[q]).product()
    }

    /// `h_m(x_q)` as a row-major `(M, K+1)` matrix.
    pub(crate) fn synthesis_matrix(&self) -> Vec<f64> {
        let kk = self.k + 1;
        let mut out = vec![0.0; self.m * kk];
        for (q, &x) in self.rule.nodes.iter().enumerate() {
            hermite_all(x, &mut out[q * kk..(q + 1) * kk]);
        }
        out
    }

    /// `w̃_q h_m(x_q)` as a row-major `(K+1, M)` matrix.
    pub(crate) fn analysis_matrix(&self) -> Vec<f64> {
        let syn = self.synthesis_matrix();
        let kk = self.k + 1;
        let mut out = vec![0.0; kk * self.m];
        for q in 0..self.m {
            for j in 0..kk {
                out[j * self.m + q] = self.rule.compensated[q] * syn[q * kk + j];
            }
        }
        out
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        std::ptr::eq(self, other) || self == other
    }
}

/// Complex samples on a [`Grid`], laid out `[i_rho][x_1]…[x_d]` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Arc<Grid>,
    pub values: Vec<C64>,
}

impl Field {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Field {
            grid: grid.clone(),
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<Grid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("flat index {i}")));
        }
        Ok(Field { grid: grid.clone(), values })
    }

    /// `f(ρ_i, x_q)` at every grid point.
    pub fn sample(grid: &Arc<Grid>, f: impl Fn(f64, &[f64]) -> C64 + Sync) -> Result<Self> {
        let xl = grid.x_len();
        let values: Vec<C64> = (0..grid.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; grid.d],
                |x, flat| {
                    let i = flat / xl;
                    grid.x_point(flat % xl, x);
                    f(grid.rho(i), x)
                },
            )
            .collect();
        Field::from_values(grid, values)
    }

    /// Real-valued convenience wrapper around [`Field::sample`].
    pub fn sample_real(grid: &Arc<Grid>, f: impl Fn(f64, &[f64]) -> f64 + Sync) -> Result<Self> {
        Field::sample(grid, |r, x| C64::new(f(r, x), 0.0))
    }

    /// `∫ f ḡ dz` (trapezoid in ρ, compensated Gauss–Hermite in x).
    pub fn inner(&self, other: &Field) -> Result<C64> {
        self.check_same(other)?;
        let g = &self.grid;
        let xl = g.x_len();
        let wx: Vec<f64> = (0..xl).map(|q| g.x_weight(q)).collect();
        let h = g.rho_spacing();
        let mut acc = C64::new(0.0, 0.0);
        for (k, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            acc += a * b.conj() * wx[k % xl];
        }
        Ok(acc * h)
    }

    pub fn scale(&self, c: C64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_same(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `‖f - g‖₂ / ‖g‖₂`.
    pub fn rel_l2_diff(&self, reference: &Field) -> Result<f64> {
        let diff = lp_norm(&self.sub(reference)?, 2.0)?;
        let base = lp_norm(reference, 2.0)?;
        Ok(if base == 0.0 { diff } else { diff / base })
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same(&self, other: &Field) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        Ok(())
    }
}

/// Uniform periodic sampling of a box `Π_k [-R_k, R_k)`; axis 0 is ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    pub half_widths: Vec<f64>,
    pub counts: Vec<usize>,
}

impl UniformBox {
    pub fn new(half_widths: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        if half_widths.len() != counts.len() || counts.len() < 2 {
            return Err(Error::InvalidParameter(
                "a box needs matching half-widths and counts for at least two axes".into(),
            ));
        }
        if counts.iter().any(|&n| n < 2 || n % 2 != 0) {
            return Err(Error::InvalidParameter(format!("sample counts must be even: {counts:?}")));
        }
        if half_widths.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "half-widths must be positive: {half_widths:?}"
            )));
        }
        Ok(UniformBox { half_widths, counts })
    }

    /// Same half-width and count on every one of `axes` axes.
    pub fn cube(axes: usize, half_width: f64, count: usize) -> Result<Self> {
        UniformBox::new(vec![half_width; axes], vec![count; axes])
    }

    pub fn axes(&self) -> usize {
        self.counts.len()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.half_widths[axis] / self.counts[axis] as f64
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        -self.half_widths[axis] + self.spacing(axis) * i as f64
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis]).map(|i| self.coord(axis, i)).collect()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.axes()).map(|k| self.spacing(k)).product()
    }

    /// Coordinates of flat index `flat`.
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let mut idx = vec![0; self.axes()];
        unravel(flat, &self.counts, &mut idx);
        for (k, (o, &i)) in out.iter_mut().zip(&idx).enumerate() {
            *o = self.coord(k, i);
        }
    }

    /// Doubles the resolution on every axis.
    pub fn refined(&self) -> Self {
        UniformBox {
            half_widths: self.half_widths.clone(),
            counts: self.counts.iter().map(|n| 2 * n).collect(),
        }
    }
}

/// Complex samples on a [`UniformBox`], row-major with axis 0 = ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSamples {
    pub bx: UniformBox,
    pub values: Vec<C64>,
    /// Set when the spectral tail suggests the samples are not trustworthy.
    pub warning: Option<String>,
}

impl BoxSamples {
    /// `f(ρ, x)` at every box point.
    pub fn sample(bx: &UniformBox, f: impl Fn(f64, &[f64]) -> C64 + Sync) -> Result<Self> {
        let axes = bx.axes();
        let values: Vec<C64> = (0..bx.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; axes],
                |z, flat| {
                    bx.point(flat, z);
                    f(z[0], &z[1..])
                },
            )
            .collect();
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("box flat index {i}")));
        }
        Ok(BoxSamples { bx: bx.clone(), values, warning: None })
    }

    pub fn map(&self, f: impl Fn(&[f64], C64) -> C64 + Sync) -> BoxSamples {
        let axes = self.bx.axes();
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map_init(
                || vec![0.0; axes],
                |z, (flat, &v)| {
                    self.bx.point(flat, z);
                    f(z, v)
                },
            )
            .collect();
        BoxSamples { bx: self.bx.clone(), values, warning: self.warning.clone() }
    }

    /// L^p norm restricted to the sub-box `Π_k [-r_k, r_k]`.
    pub fn lp_norm_within(&self, p: f64, radii: &[f64]) -> Result<f64> {
        check_p(p)?;
        let axes = self.bx.axes();
        let mut z = vec![0.0; axes];
        let mut acc = 0.0f64;
        let mut mx = 0.0f64;
        for (flat, v) in self.values.iter().enumerate() {
            self.bx.point(flat, &mut z);
            if z.iter().zip(radii).all(|(c, r)| c.abs() <= *r) {
                let a = v.norm();
                if p.is_infinite() {
                    mx = mx.max(a);
                } else {
                    acc += a.powf(p);
                }
            }
        }
        Ok(if p.is_infinite() { mx } else { (acc * self.bx.cell_volume()).powf(1.0 / p) })
    }
}

/// Anything that can be integrated as a discrete measure.
pub trait Samples {
    /// `(quadrature weight, |value|)` pairs.
    fn weighted_magnitudes(&self) -> Vec<(f64, f64)>;
}

impl Samples for Field {
    fn weighted_magnitudes(&self) -> Vec<(f64, f64)> {
        let g = &self.grid;
        let xl = g.x_len();
        let h = g.rho_spacing();
        let wx: Vec<f64> = (0..xl).map(|q| g.x_weight(q) * h).collect();
        self.values.iter().enumerate().map(|(k, v)| (wx[k % xl], v.norm())).collect()
    }
}

impl Samples for BoxSamples {
    fn weighted_magnitudes(&self) -> Vec<(f64, f64)> {
        let vol = self.bx.cell_volume();
        self.values.iter().map(|v| (vol, v.norm())).collect()
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("L^p norm needs p ≥ 1, got {p}")));
    }
    Ok(())
}

/// `(∫ |f|^p dz)^{1/p}` by the samples' own quadrature; the plain maximum for `p = ∞`.
pub fn lp_norm<S: Samples + ?Sized>(samples: &S, p: f64) -> Result<f64> {
    check_p(p)?;
    let wm = samples.weighted_magnitudes();
    if p.is_infinite() {
        return Ok(wm.iter().map(|&(_, a)| a).fold(0.0, f64::max));
    }
    // scale by the maximum so large p cannot overflow
    let top = wm.iter().map(|&(_, a)| a).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = wm.iter().map(|&(w, a)| w * (a / top).powf(p)).sum();
    Ok(top * s.powf(1.0 / p))
}

/// Evaluates the truncated Fourier–Hermite series of `field` on `target`.
///
/// Axis 0 of the box is ρ (periodically extended beyond `[-L, L)`), the
/// remaining `d` axes are x. Sets a warning when the top spectral shells
/// carry more than `1e-8` of the energy.
pub fn resample(field: &Field, target: &UniformBox) -> Result<BoxSamples> {
    let coeffs = crate::spectral::forward(field);
    resample_coeffs(&coeffs, target)
}

/// Series evaluation of spectral coefficients on a uniform box.
pub fn resample_coeffs(
    coeffs: &crate::spectral::SpectralCoeffs,
    target: &UniformBox,
) -> Result<BoxSamples> {
    let g = &coeffs.grid;
    if target.axes() != g.d + 1 {
        return Err(Error::GridMismatch(format!(
            "box has {} axes, grid needs {}",
            target.axes(),
            g.d + 1
        )));
    }
    let kk = g.k + 1;
    let mut shape = vec![g.n_rho];
    shape.extend(std::iter::repeat(kk).take(g.d));
    let mut data = coeffs.data.clone();

    // ρ: e^{iτ_n ρ_b}
    let nb = target.counts[0];
    let mut e = vec![C64::new(0.0, 0.0); nb * g.n_rho];
    for b in 0..nb {
        let r = target.coord(0, b);
        for s in 0..g.n_rho {
            e[b * g.n_rho + s] = C64::from_polar(1.0, g.tau(g.freq_index(s)) * r);
        }
    }
    let (s1, d1) = contract_axis(&data, &shape, 0, &e, nb);
    shape = s1;
    data = d1;
    for axis in 1..=g.d {
        let nx = target.counts[axis];
        let mut h = vec![0.0; nx * kk];
        for b in 0..nx {
            hermite_all(target.coord(axis, b), &mut h[b * kk..(b + 1) * kk]);
        }
        let (s2, d2) = contract_axis(&data, &shape, axis, &h, nx);
        shape = s2;
        data = d2;
    }
    let tail = coeffs.tail_fraction();
    let warning = if tail > 1e-8 {
        let msg = format!("spectral tail carries relative energy {tail:.2e}");
        log::warn!("resample: {msg}");
        Some(msg)
    } else {
        None
    };
    Ok(BoxSamples { bx: target.clone(), values: data, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_eval;
    use std::f64::consts::PI;

    #[test]
    fn grid_shapes_and_errors() {
        let g = make_grid(1, 64, 10.0, 16, 17).unwrap();
        assert_eq!(g.len(), 64 * 17);
        let g2 = make_grid(2, 32, 8.0, 8, 9).unwrap();
        assert_eq!(g2.len(), 32 * 9 * 9);
        assert_eq!(g2.shape(), vec![32, 9, 9]);
        assert!(matches!(make_grid(1, 64, 10.0, 16, 16), Err(Error::InvalidParameter(_))));
        assert!(make_grid(1, 48, 10.0, 4, 5).is_err());
        assert!(make_grid(0, 64, 10.0, 4, 5).is_err());
        assert!(make_grid(1, 64, -1.0, 4, 5).is_err());
        assert!(g.weights_x().iter().all(|w| *w > 0.0 && w.is_finite()));
    }

    #[test]
    fn frequencies() {
        let g = make_grid(1, 8, 2.0, 2, 3).unwrap();
        let idx: Vec<i64> = (0..8).map(|i| g.freq_index(i)).collect();
        assert_eq!(idx, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for n in -4..4 {
            assert_eq!(g.freq_index(g.freq_slot(n).unwrap()), n);
        }
        assert!(g.freq_slot(4).is_none());
        assert!((g.tau(1) - PI / 2.0).abs() < 1e-15);
        assert_eq!(g.rho(0), -2.0);
    }

    #[test]
    fn sampling() {
        let g = make_grid(1, 16, 5.0, 4, 5).unwrap();
        let one = Field::sample_real(&g, |_, _| 1.0).unwrap();
        assert!(one.values.iter().all(|v| *v == C64::new(1.0, 0.0)));
        let zero = Field::sample_real(&g, |_, x| hermite_eval(0, x[0]) * 0.0).unwrap();
        assert!(zero.values.iter().all(|v| v.norm() == 0.0));
        assert!(matches!(
            Field::sample_real(&g, |r, _| if r == 0.0 { f64::NAN } else { 1.0 }),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn norms() {
        let g = make_grid(1, 64, 10.0, 16, 17).unwrap();
        let f = Field::sample_real(&g, |r, x| PI.powf(-0.25) * (-r * r / 2.0).exp() * hermite_eval(0, x[0]))
            .unwrap();
        assert!((lp_norm(&f, 2.0).unwrap() - 1.0).abs() < 1e-10);
        let z = Field::zeros(&g);
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            assert_eq!(lp_norm(&z, p).unwrap(), 0.0);
        }
        let h = Field::sample_real(&g, |_, x| hermite_eval(0, x[0])).unwrap();
        assert!((lp_norm(&h, f64::INFINITY).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
        assert!(lp_norm(&h, 0.5).is_err());
    }

    #[test]
    fn quadrature_exactness() {
        let g = make_grid(1, 8, 1.0, 32, 33).unwrap();
        let w = g.weights_x();
        for j in 0..=32 {
            for k in 0..=32 {
                let ip: f64 = g
                    .nodes_x()
                    .iter()
                    .zip(w)
                    .map(|(&x, &wq)| wq * hermite_eval(j, x) * hermite_eval(k, x))
                    .sum();
                assert!((ip - if j == k { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn box_geometry() {
        let b = UniformBox::cube(2, 4.0, 8).unwrap();
        assert_eq!(b.len(), 64);
        assert_eq!(b.coord(0, 0), -4.0);
        assert_eq!(b.spacing(1), 1.0);
        assert!(UniformBox::new(vec![1.0, 1.0], vec![3, 4]).is_err());
        assert!(UniformBox::new(vec![0.0, 1.0], vec![4, 4]).is_err());
        let mut p = [0.0; 2];
        b.point(9, &mut p);
        assert_eq!(p, [-3.0, -3.0]);
        assert_eq!(b.refined().counts, vec![16, 16]);
    }

    #[test]
    fn resample_modes() {
        let g = make_grid(1, 32, 10.0, 12, 13).unwrap();
        let tau1 = g.tau(1);
        let f = Field::sample(&g, |r, x| C64::from_polar(hermite_eval(0, x[0]), tau1 * r)).unwrap();
        let bx = UniformBox::cube(2, 6.0, 32).unwrap();
        let s = resample(&f, &bx).unwrap();
        let exact = BoxSamples::sample(&bx, |r, x| C64::from_polar(hermite_eval(0, x[0]), tau1 * r)).unwrap();
        let err = s.values.iter().zip(&exact.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");

        let z = resample(&Field::zeros(&g), &bx).unwrap();
        assert!(z.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn resample_gaussian() {
        let g = make_grid(1, 64, 12.0, 40, 41).unwrap();
        let gauss = |r: f64, x: &[f64]| C64::new((-(r * r) / 2.0 - x[0] * x[0] / 1.5).exp(), 0.0);
        let f = Field::sample(&g, gauss).unwrap();
        let bx = UniformBox::cube(2, 6.0, 128).unwrap();
        let s = resample(&f, &bx).unwrap();
        let exact = BoxSamples::sample(&bx, gauss).unwrap();
        let err = s.values.iter().zip(&exact.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert!(s.warning.is_none());
    }

    #[test]
    fn inner_product() {
        let g = make_grid(1, 32, 8.0, 10, 11).unwrap();
        let f = Field::sample_real(&g, |r, x| (-(r * r) / 2.0).exp() * hermite_eval(1, x[0])).unwrap();
        let ip = f.inner(&f).unwrap();
        assert!((ip.re - PI.sqrt()).abs() < 1e-10 && ip.im.abs() < 1e-15);
        let other = make_grid(1, 32, 9.0, 10, 11).unwrap();
        assert!(f.inner(&Field::zeros(&other)).is_err());
    }
}
