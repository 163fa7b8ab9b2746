//! First-order factors of `H`, Riesz transforms and commutation identities.
//!
//! ```text
//!     A_0 = -∂_ρ,   A_j = -∂_{x_j} + x_j,   A_{-j} = ∂_{x_j} + x_j = A_j*
//!     R_j = A_j H^{-1/2}
//! ```
//!
//! All operators act by exact coefficient shifts in the Fourier–Hermite basis:
//! `A_j Φ_μ = √(2(μ_j+1)) Φ_{μ+e_j}`, `A_{-j} Φ_μ = √(2μ_j) Φ_{μ-e_j}`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::report::{Metric, Report};
use crate::spectral::{
    apply_multiplier, coeffs_lp_norm, forward, frac_power_coeffs, inverse, mu_of_flat, slice_len, Multiplier,
    SpectralCoeffs,
};
use crate::C64;

/// Relative energy the raising operators may push past the top shell.
pub const RAISING_TOLERANCE: f64 = 1e-8;

/// `j ∈ {-d, …, d}`: 0 is `-∂_ρ`, `j > 0` raises along `x_j`, `j < 0` lowers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderIndex {
    pub j: i32,
}

impl LadderIndex {
    pub fn new(j: i32, d: usize) -> Result<Self> {
        if j.unsigned_abs() as usize > d {
            return Err(Error::InvalidParameter(format!("ladder index {j} outside [-{d}, {d}]")));
        }
        Ok(LadderIndex { j })
    }

    /// Zero-based x-axis, or `None` for `A_0`.
    pub fn axis(&self) -> Option<usize> {
        (self.j != 0).then(|| self.j.unsigned_abs() as usize - 1)
    }

    /// All indices in gradient order: `0, 1, …, d, -1, …, -d`.
    pub fn all(d: usize) -> Vec<LadderIndex> {
        let d = d as i32;
        std::iter::once(0)
            .chain(1..=d)
            .chain((1..=d).map(|j| -j))
            .map(|j| LadderIndex { j })
            .collect()
    }
}

/// `A_j` on coefficients.
pub fn apply_a(j: i32, coeffs: &SpectralCoeffs) -> Result<SpectralCoeffs> {
    let g = &coeffs.grid;
    let idx = LadderIndex::new(j, g.d)?;
    let Some(axis) = idx.axis() else {
        return Ok(coeffs.map_modes(|m| C64::new(0.0, -m.tau)));
    };
    if j > 0 {
        let top = coeffs.top_shell_fraction();
        if top > RAISING_TOLERANCE {
            return Err(Error::Truncation {
                context: format!("A_{j} pushes the |μ| = K shell out of the basis"),
                energy: top,
                tolerance: RAISING_TOLERANCE,
            });
        }
    }
    let kk = g.k + 1;
    let stride = kk.pow((g.d - 1 - axis) as u32);
    let sl = slice_len(g);
    let mut out = SpectralCoeffs::zeros(g);
    for m in coeffs.modes() {
        let mu = mu_of_flat(g, m.mu_flat);
        let mj = mu.0[axis];
        let base = m.slot * sl;
        if j > 0 {
            // out[μ] = √(2μ_j) c[μ - e_j]
            if mj > 0 {
                out.data[base + m.mu_flat] = coeffs.data[base + m.mu_flat - stride] * (2.0 * mj as f64).sqrt();
            }
        } else if m.order < g.k {
            // out[μ] = √(2(μ_j+1)) c[μ + e_j]
            out.data[base + m.mu_flat] = coeffs.data[base + m.mu_flat + stride] * (2.0 * (mj + 1) as f64).sqrt();
        }
    }
    Ok(out)
}

/// `A_j f`.
pub fn apply_a_field(j: i32, field: &Field) -> Result<Field> {
    Ok(inverse(&apply_a(j, &forward(field))?))
}

/// `R_j = A_j H^{-1/2}` on coefficients.
pub fn riesz_coeffs(j: i32, coeffs: &SpectralCoeffs) -> Result<SpectralCoeffs> {
    apply_a(j, &frac_power_coeffs(coeffs, -0.5, 0.0)?)
}

/// `R_j f`.
pub fn riesz(j: i32, field: &Field) -> Result<Field> {
    Ok(inverse(&riesz_coeffs(j, &forward(field))?))
}

/// `A_{j1} A_{j2} H^{-1} f`.
pub fn riesz_multi(js: (i32, i32), field: &Field) -> Result<Field> {
    let c = frac_power_coeffs(&forward(field), -1.0, 0.0)?;
    Ok(inverse(&apply_a(js.0, &apply_a(js.1, &c)?)?))
}

/// `(A_0 f, A_1 f, …, A_d f, A_{-1} f, …, A_{-d} f)` on coefficients.
pub fn grad_coeffs(coeffs: &SpectralCoeffs) -> Result<Vec<SpectralCoeffs>> {
    LadderIndex::all(coeffs.grid.d).iter().map(|i| apply_a(i.j, coeffs)).collect()
}

/// The adapted gradient `(A_0 f, A_1 f, …, A_d f, A_{-1} f, …, A_{-d} f)`.
pub fn grad_h(field: &Field) -> Result<Vec<Field>> {
    Ok(grad_coeffs(&forward(field))?.iter().map(inverse).collect())
}

fn rel_residual(lhs: &SpectralCoeffs, rhs: &SpectralCoeffs) -> f64 {
    let diff: f64 = lhs.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm_sqr()).sum();
    let scale = lhs.norm_sq().max(rhs.norm_sq());
    if scale == 0.0 {
        0.0
    } else {
        (diff / scale).sqrt()
    }
}

/// Drops the modes with `μ_axis = 0`, which `A_{-axis}` annihilates anyway.
fn without_axis_ground(c: &SpectralCoeffs, axis: usize) -> SpectralCoeffs {
    let g = c.grid.clone();
    c.map_modes(|m| {
        if mu_of_flat(&g, m.mu_flat).0[axis] == 0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    })
}

/// Residuals of the commutation identities along axis `max(|j|, 1)`:
///
/// ```text
///     A_0 H^α = H^α A_0
///     A_j H^α = (H-2)^α A_j        A_{-j} H^α = (H+2)^α A_{-j}
///     H^α A_j = A_j (H+2)^α        H^α A_{-j} = A_{-j} (H-2)^α
/// ```
///
/// plus a single-mode arithmetic oracle on the ground mode.
pub fn commute_check(j: i32, alpha: f64, field: &Field) -> Result<Report> {
    let g = &field.grid;
    let axis = (j.unsigned_abs() as usize).max(1);
    LadderIndex::new(axis as i32, g.d)?;
    let jp = axis as i32;
    let c = forward(field);
    let pow = |c: &SpectralCoeffs, shift: f64| apply_multiplier(c, &power_mult(alpha, shift));
    let mut report = Report::new("commute").param("j", j as f64).param("alpha", alpha).param("d", g.d as f64);

    let h = pow(&c, 0.0)?;
    let lhs = apply_a(0, &h)?;
    let rhs = pow(&apply_a(0, &c)?, 0.0)?;
    report.push(Metric::upper("A0_commutes", rel_residual(&lhs, &rhs), 1e-10, "A_0 commutes with H^α"));

    let lhs = apply_a(jp, &h)?;
    let rhs = pow(&apply_a(jp, &c)?, -2.0)?;
    report.push(Metric::upper("raise_after_power", rel_residual(&lhs, &rhs), 1e-10, "A_j H^α = (H-2)^α A_j"));

    let lhs = apply_a(-jp, &h)?;
    let rhs = pow(&apply_a(-jp, &c)?, 2.0)?;
    report.push(Metric::upper("lower_after_power", rel_residual(&lhs, &rhs), 1e-10, "A_-j H^α = (H+2)^α A_-j"));

    let lhs = pow(&apply_a(jp, &c)?, 0.0)?;
    let rhs = apply_a(jp, &pow(&c, 2.0)?)?;
    report.push(Metric::upper("power_after_raise", rel_residual(&lhs, &rhs), 1e-10, "H^α A_j = A_j (H+2)^α"));

    let lhs = pow(&apply_a(-jp, &c)?, 0.0)?;
    let rhs = apply_a(-jp, &pow(&without_axis_ground(&c, axis - 1), -2.0)?)?;
    report.push(Metric::upper("power_after_lower", rel_residual(&lhs, &rhs), 1e-10, "H^α A_-j = A_-j (H-2)^α"));

    report.push(Metric::upper(
        "mode_oracle",
        mode_oracle_gap(g, jp, alpha)?,
        1e-13,
        "ground mode: both orders give √2 d^α",
    ));
    Ok(report)
}

fn power_mult(alpha: f64, shift: f64) -> Multiplier {
    Multiplier::new(format!("(λ{shift:+})^{alpha}"), shift, move |l| {
        if l <= 0.0 {
            f64::NAN
        } else {
            l.powf(alpha)
        }
    })
}

/// `|lib − √2 d^α| / (√2 d^α)` for `A_j H^α` and `(H-2)^α A_j` on `Φ_0`.
fn mode_oracle_gap(g: &std::sync::Arc<crate::grid::Grid>, j: i32, alpha: f64) -> Result<f64> {
    let d = g.d;
    let ground = SpectralCoeffs::pure_mode(g, 0, &crate::hermite::MultiIndex::zero(d))?;
    let target = crate::hermite::MultiIndex::unit(d, j as usize - 1);
    let exact = 2f64.sqrt() * (d as f64).powf(alpha);
    let a = apply_a(j, &apply_multiplier(&ground, &power_mult(alpha, 0.0))?)?.get(0, &target)?;
    let b = apply_multiplier(&apply_a(j, &ground)?, &power_mult(alpha, -2.0))?.get(0, &target)?;
    Ok(((a - exact).norm()).max((b - exact).norm()) / exact)
}

/// `I = ∫ f g` against `S = Σ_j ∫ (R_j f)(R_j g)`.
///
/// Asserts `I ≤ S ≤ 2I` for `f` and for `g` separately; the mode-wise ratio is
/// `(τ² + 4|μ| + 2d)/(τ² + 2|μ| + d)`. The identity `I = 2S` is reported as an
/// informational residual since it does not hold mode by mode.
pub fn duality_check(f: &Field, g: &Field) -> Result<Report> {
    f.check_same(g)?;
    let (cf, cg) = (forward(f), forward(g));
    let sum = |a: &SpectralCoeffs, b: &SpectralCoeffs| -> Result<f64> {
        let ra = LadderIndex::all(a.grid.d)
            .par_iter()
            .map(|i| {
                let x = riesz_coeffs(i.j, a)?;
                let y = riesz_coeffs(i.j, b)?;
                Ok(x.inner(&y)?.re)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(ra.iter().sum())
    };
    let i_fg = cf.inner(&cg)?.re;
    let s_fg = sum(&cf, &cg)?;
    let mut report = Report::new("duality").param("d", f.grid.d as f64);
    report.push(Metric::info("integral_fg", i_fg, "∫ f g"));
    report.push(Metric::info("riesz_sum_fg", s_fg, "Σ_j ∫ R_j f R_j g"));
    report.push(Metric::info("ratio", if i_fg != 0.0 { s_fg / i_fg } else { 0.0 }, "S/I"));
    for (name, c) in [("f", &cf), ("g", &cg)] {
        let i = c.norm_sq() * 2.0 * c.grid.l_rho;
        let s = sum(c, c)?;
        let slack = 1e-12 * i;
        report.push(Metric::flag(format!("lower_{name}"), i <= s + slack, "∫f² ≤ Σ‖R_j f‖²"));
        report.push(Metric::flag(format!("upper_{name}"), s <= 2.0 * i + slack, "Σ‖R_j f‖² ≤ 2∫f²"));
    }
    let displayed = if i_fg != 0.0 { (i_fg - 2.0 * s_fg).abs() / i_fg.abs() } else { 0.0 };
    report.push(Metric::info(
        "identity_with_constant_2_residual",
        displayed,
        "the identity ∫fg = 2Σ∫R_jf R_jg fails mode-wise; the two-sided bound is asserted instead",
    ));
    Ok(report)
}

/// Empirical `sup ‖H^{1/2} f‖_p / Σ_j ‖A_j f‖_p` over `fields`; for `p = 2`
/// also the exact inequality `‖H^{1/2} f‖₂² ≤ Σ_j ‖A_j f‖₂²`.
pub fn inverse_riesz_check(fields: &[Field], p: f64) -> Result<Report> {
    let mut report = Report::new("inverse-riesz").param("p", p);
    let rows = fields
        .par_iter()
        .map(|f| {
            let c = forward(f);
            let lhs = coeffs_lp_norm(&frac_power_coeffs(&c, 0.5, 0.0)?, p)?;
            let grads = grad_coeffs(&c)?;
            let rhs: f64 = grads.iter().map(|a| coeffs_lp_norm(a, p)).sum::<Result<f64>>()?;
            let exact_ok = if p == 2.0 {
                let l2 = lhs * lhs;
                let r2: f64 = grads.iter().map(|a| a.l2_norm().powi(2)).sum();
                l2 <= r2 * (1.0 + 1e-12) + 1e-300
            } else {
                true
            };
            Ok((lhs, rhs, exact_ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sup = 0.0f64;
    let mut all_exact = true;
    for (lhs, rhs, ok) in rows {
        if rhs > 0.0 {
            sup = sup.max(lhs / rhs);
        } else if lhs > 0.0 {
            sup = f64::INFINITY;
        }
        all_exact &= ok;
    }
    report.push(Metric::finite("empirical_constant", sup, "sup ‖H^½f‖_p / Σ‖A_j f‖_p"));
    if p == 2.0 {
        report.push(Metric::flag("modewise_bound", all_exact, "‖H^½f‖₂² ≤ Σ‖A_j f‖₂²"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::hermite::{hermite_eval, MultiIndex};
    use proptest::prelude::*;

    fn random_coeffs(g: &std::sync::Arc<crate::grid::Grid>, seed: u64, n_max: i64, k_max: usize) -> SpectralCoeffs {
        crate::spectral::random_band_limited(g, seed, n_max, k_max)
    }


    #[test]
    fn ladder_on_ground_mode() {
        let g = make_grid(1, 16, 5.0, 8, 9).unwrap();
        let c = SpectralCoeffs::pure_mode(&g, 0, &MultiIndex(vec![0])).unwrap();
        let up = apply_a(1, &c).unwrap();
        assert!((up.get(0, &MultiIndex(vec![1])).unwrap() - C64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(apply_a(-1, &c).unwrap().norm_sq(), 0.0);
        let c3 = SpectralCoeffs::pure_mode(&g, 3, &MultiIndex(vec![2])).unwrap();
        let d0 = apply_a(0, &c3).unwrap();
        assert_eq!(d0.get(3, &MultiIndex(vec![2])).unwrap(), C64::new(0.0, -g.tau(3)));
        assert!(apply_a(2, &c).is_err());
        let top = SpectralCoeffs::pure_mode(&g, 0, &MultiIndex(vec![8])).unwrap();
        assert!(matches!(apply_a(1, &top), Err(Error::Truncation { .. })));
        assert!(apply_a(-1, &top).is_ok());
    }

    #[test]
    fn ladder_matches_differential_form() {
        let g = make_grid(1, 32, 8.0, 16, 20).unwrap();
        let f = Field::sample_real(&g, |r, x| (-r * r / 2.0).exp() * hermite_eval(2, x[0])).unwrap();
        let up = apply_a_field(1, &f).unwrap();
        // (-∂_x + x) h_2 = √6 h_3
        let expect = Field::sample_real(&g, |r, x| (-r * r / 2.0).exp() * 6f64.sqrt() * hermite_eval(3, x[0])).unwrap();
        assert!(up.max_abs_diff(&expect).unwrap() < 1e-10);
        let down = apply_a_field(-1, &f).unwrap();
        let expect = Field::sample_real(&g, |r, x| (-r * r / 2.0).exp() * 2.0 * hermite_eval(1, x[0])).unwrap();
        assert!(down.max_abs_diff(&expect).unwrap() < 1e-10);
    }

    #[test]
    fn riesz_examples() {
        let g = make_grid(1, 32, std::f64::consts::PI * 2.0, 8, 9).unwrap();
        // τ_2 = π·2/(2π) = 1
        assert!((g.tau(2) - 1.0).abs() < 1e-15);
        let c = SpectralCoeffs::pure_mode(&g, 2, &MultiIndex(vec![0])).unwrap();
        let r = riesz_coeffs(0, &c).unwrap();
        let v = r.get(2, &MultiIndex(vec![0])).unwrap();
        assert!((v - C64::new(0.0, -1.0 / 2f64.sqrt())).norm() < 1e-15);
        let c0 = SpectralCoeffs::pure_mode(&g, 0, &MultiIndex(vec![0])).unwrap();
        assert_eq!(riesz_coeffs(-1, &c0).unwrap().norm_sq(), 0.0);
        let f = inverse(&c);
        let m = riesz_multi((0, 0), &f).unwrap();
        assert!(m.max_abs_diff(&f.scale(C64::new(-0.5, 0.0))).unwrap() < 1e-13);
        let f0 = inverse(&c0);
        assert!(crate::grid::lp_norm(&riesz_multi((1, -1), &f0).unwrap(), 2.0).unwrap() < 1e-14);
        assert!(crate::grid::lp_norm(&riesz_multi((-1, -1), &f0).unwrap(), 2.0).unwrap() < 1e-14);
    }

    #[test]
    fn gradient_energy() {
        let g = make_grid(2, 16, 6.0, 8, 10).unwrap();
        let c = random_coeffs(&g, 4, 5, 6);
        let grads = grad_coeffs(&c).unwrap();
        assert_eq!(grads.len(), 5);
        let lhs: f64 = grads.iter().map(|a| a.norm_sq()).sum();
        let rhs: f64 = c
            .modes()
            .iter()
            .map(|m| {
                let p = m.slot * slice_len(&g) + m.mu_flat;
                (m.tau * m.tau + 4.0 * m.order as f64 + 4.0) * c.data[p].norm_sqr()
            })
            .sum();
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
        let g1 = make_grid(1, 16, 6.0, 8, 10).unwrap();
        let f = inverse(&SpectralCoeffs::pure_mode(&g1, 0, &MultiIndex(vec![0])).unwrap());
        let comps = grad_h(&f).unwrap();
        assert!(crate::grid::lp_norm(&comps[0], 2.0).unwrap() < 1e-14);
        assert!(crate::grid::lp_norm(&comps[2], 2.0).unwrap() < 1e-14);
    }

    #[test]
    fn adjoint_and_reconstruction() {
        let g = make_grid(2, 16, 6.0, 10, 12).unwrap();
        let f = random_coeffs(&g, 1, 5, 7);
        let h = random_coeffs(&g, 2, 5, 7);
        for j in 1..=2 {
            let a = apply_a(j, &f).unwrap().inner(&h).unwrap();
            let b = f.inner(&apply_a(-j, &h).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
        }
        let a = apply_a(0, &f).unwrap().inner(&h).unwrap();
        let b = f.inner(&apply_a(0, &h).unwrap()).unwrap();
        assert!((a + b).norm() < 1e-10 * a.norm().max(1.0));
        // ½ Σ_{j=0}^d (A_j A_j* + A_j* A_j) = H, with A_0* = -A_0
        let mut acc = apply_a(0, &apply_a(0, &f).unwrap()).unwrap().scale(C64::new(-1.0, 0.0));
        for j in 1..=2 {
            let s = apply_a(j, &apply_a(-j, &f).unwrap())
                .unwrap()
                .add(&apply_a(-j, &apply_a(j, &f).unwrap()).unwrap())
                .unwrap()
                .scale(C64::new(0.5, 0.0));
            acc = acc.add(&s).unwrap();
        }
        let hf = apply_multiplier(&f, &Multiplier::eigenvalue()).unwrap();
        assert!(rel_residual(&acc, &hf) < 1e-12);
    }

    #[test]
    fn riesz_recovers_ladder() {
        let g = make_grid(1, 32, 6.0, 12, 14).unwrap();
        let c = random_coeffs(&g, 9, 8, 8);
        let half = frac_power_coeffs(&c, 0.5, 0.0).unwrap();
        for j in [-1, 0, 1] {
            let lhs = riesz_coeffs(j, &half).unwrap();
            assert!(rel_residual(&lhs, &apply_a(j, &c).unwrap()) < 1e-13, "j={j}");
        }
    }

    #[test]
    fn commutation_identities() {
        let g = make_grid(3, 16, 8.0, 8, 9).unwrap();
        let f = Field::sample_real(&g, |r, x| {
            (-r * r / 2.0).exp() * hermite_eval(0, x[0]) * hermite_eval(0, x[1]) * hermite_eval(0, x[2])
        })
        .unwrap();
        for alpha in [-1.0, -0.5, 0.5] {
            for j in [-1, 0, 1] {
                let r = commute_check(j, alpha, &f).unwrap();
                assert!(r.all_pass(), "j={j} α={alpha}: {:?}", r.failures());
            }
        }
        let g1 = make_grid(1, 16, 8.0, 8, 9).unwrap();
        let f1 = Field::sample_real(&g1, |r, x| (-r * r / 2.0).exp() * hermite_eval(1, x[0])).unwrap();
        assert!(commute_check(1, -0.5, &f1).unwrap().all_pass());
    }

    #[test]
    fn duality_examples() {
        let g = make_grid(1, 16, 6.0, 8, 9).unwrap();
        let f = inverse(&SpectralCoeffs::pure_mode(&g, 0, &MultiIndex(vec![0])).unwrap());
        let r = duality_check(&f, &f).unwrap();
        assert!(r.all_pass());
        assert!((r.metric("ratio").unwrap().value - 2.0).abs() < 1e-12);
        let z = Field::zeros(&g);
        let r = duality_check(&f, &z).unwrap();
        assert_eq!(r.metric("riesz_sum_fg").unwrap().value, 0.0);
    }

    #[test]
    fn inverse_riesz_ground() {
        let g = make_grid(1, 16, 6.0, 8, 9).unwrap();
        let f = inverse(&SpectralCoeffs::pure_mode(&g, 0, &MultiIndex(vec![0])).unwrap());
        let r = inverse_riesz_check(&[f], 2.0).unwrap();
        assert!(r.all_pass());
        assert!((r.metric("empirical_constant").unwrap().value - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        let r = inverse_riesz_check(&[Field::zeros(&g)], 2.0).unwrap();
        assert_eq!(r.metric("empirical_constant").unwrap().value, 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn riesz_bounded_and_sandwiched(seed in 0u64..10_000, d in 1usize..=2) {
            let g = make_grid(d, 16, 6.0, 8, 9).unwrap();
            let c = random_coeffs(&g, seed, 6, 6);
            let total = c.norm_sq();
            let mut s = 0.0;
            for i in LadderIndex::all(d) {
                let r = riesz_coeffs(i.j, &c).unwrap().norm_sq();
                prop_assert!(r <= 2.0 * total * (1.0 + 1e-12));
                s += r;
            }
            prop_assert!(s >= total * (1.0 - 1e-12));
            prop_assert!(s <= 2.0 * total * (1.0 + 1e-12));
        }
    }
}
