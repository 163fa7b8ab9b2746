//! Reproducible families of closed-form test functions.
//!
//! Member `i` depends only on `(seed, kind, i)`, so a family of 40 extends the
//! family of 10 built from the same seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{BoxSamples, Field, Grid, UniformBox};
use crate::hermite::{phi_mu, MultiIndex};
use crate::C64;

/// One real-valued test function on `R^{d+1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    /// `A exp(-Σ_k (z_k - c_k)² / (2 w_k²))`, axis 0 = ρ.
    Gaussian { amplitude: f64, center: Vec<f64>, widths: Vec<f64> },
    /// `Σ c e^{-(ρ-ρ₀)²/(2s²)} Φ_μ(x)`.
    HermiteMix { terms: Vec<HermiteTerm> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTerm {
    pub coeff: f64,
    pub rho_center: f64,
    pub rho_width: f64,
    pub mu: MultiIndex,
}

impl Member {
    pub fn eval(&self, rho: f64, x: &[f64]) -> f64 {
        match self {
            Member::Gaussian { amplitude, center, widths } => {
                let mut e = (rho - center[0]).powi(2) / (2.0 * widths[0] * widths[0]);
                for (k, &xk) in x.iter().enumerate() {
                    e += (xk - center[k + 1]).powi(2) / (2.0 * widths[k + 1] * widths[k + 1]);
                }
                amplitude * (-e).exp()
            }
            Member::HermiteMix { terms } => terms
                .iter()
                .map(|t| {
                    t.coeff
                        * (-(rho - t.rho_center).powi(2) / (2.0 * t.rho_width * t.rho_width)).exp()
                        * phi_mu(&t.mu, x)
                })
                .sum(),
        }
    }

    fn scaled(&self, c: f64) -> Member {
        match self {
            Member::Gaussian { amplitude, center, widths } => Member::Gaussian {
                amplitude: amplitude * c,
                center: center.clone(),
                widths: widths.clone(),
            },
            Member::HermiteMix { terms } => Member::HermiteMix {
                terms: terms.iter().map(|t| HermiteTerm { coeff: t.coeff * c, ..t.clone() }).collect(),
            },
        }
    }
}

/// Which generator a family draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Near-isotropic Gaussians close to the origin.
    Gaussians,
    /// Finite Hermite-mode mixtures with Gaussian ρ-profiles.
    HermiteMixtures,
    /// Alternating Gaussians and mixtures.
    Mixed,
    /// Gaussians centred at distance 1.5–3 from the origin.
    Shifted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFamily {
    pub name: String,
    pub d: usize,
    pub seed: u64,
    pub kind: FamilyKind,
    /// Largest total Hermite degree used by mixtures.
    pub k_max: usize,
    pub members: Vec<Member>,
}

fn member_rng(seed: u64, kind: FamilyKind, i: usize) -> ChaCha8Rng {
    let tag = kind as u64 + 1;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (tag << 56) ^ i as u64)
}

fn gaussian(rng: &mut ChaCha8Rng, d: usize, far: bool) -> Member {
    let mut center = Vec::with_capacity(d + 1);
    let mut widths = Vec::with_capacity(d + 1);
    if far {
        let mut dir: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        let r = rng.gen_range(1.5..3.0);
        dir.iter_mut().for_each(|v| *v *= r / n);
        // keep the x-part modest so the field stays resolvable; ρ takes the rest
        let xs: Vec<f64> = dir[1..].iter().map(|v| v.clamp(-1.0, 1.0)).collect();
        let x2: f64 = xs.iter().map(|v| v * v).sum();
        let rho = (r * r - x2).max(0.0).sqrt();
        center.push(if dir[0] < 0.0 { -rho } else { rho });
        center.extend(xs);
    } else {
        center.push(rng.gen_range(-1.5..1.5));
        for _ in 0..d {
            center.push(rng.gen_range(-0.6..0.6));
        }
    }
    widths.push(rng.gen_range(0.6..1.6));
    for _ in 0..d {
        widths.push(rng.gen_range(0.85..1.2));
    }
    Member::Gaussian { amplitude: rng.gen_range(0.5..2.0), center, widths }
}

fn mixture(rng: &mut ChaCha8Rng, d: usize, k_max: usize) -> Member {
    let n_terms = rng.gen_range(1..=3);
    let terms = (0..n_terms)
        .map(|_| {
            let order = rng.gen_range(0..=k_max);
            let mut mu = vec![0; d];
            for _ in 0..order {
                mu[rng.gen_range(0..d)] += 1;
            }
            HermiteTerm {
                coeff: rng.gen_range(-1.0..1.0),
                rho_center: rng.gen_range(-1.0..1.0),
                rho_width: rng.gen_range(0.7..1.5),
                mu: MultiIndex(mu),
            }
        })
        .collect();
    Member::HermiteMix { terms }
}

impl TestFamily {
    /// `count` members; mixtures use total degree at most `k_max`.
    pub fn new(kind: FamilyKind, d: usize, count: usize, seed: u64, k_max: usize) -> Self {
        let members = (0..count)
            .map(|i| {
                let mut rng = member_rng(seed, kind, i);
                match kind {
                    FamilyKind::Gaussians => gaussian(&mut rng, d, false),
                    FamilyKind::Shifted => gaussian(&mut rng, d, true),
                    FamilyKind::HermiteMixtures => mixture(&mut rng, d, k_max),
                    FamilyKind::Mixed => {
                        if i % 2 == 0 {
                            gaussian(&mut rng, d, false)
                        } else {
                            mixture(&mut rng, d, k_max)
                        }
                    }
                }
            })
            .collect();
        TestFamily { name: format!("{kind:?}").to_lowercase(), d, seed, kind, k_max, members }
    }

    pub fn gaussians(d: usize, count: usize, seed: u64) -> Self {
        TestFamily::new(FamilyKind::Gaussians, d, count, seed, 0)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same family with `count` members.
    pub fn resized(&self, count: usize) -> Self {
        TestFamily::new(self.kind, self.d, count, self.seed, self.k_max)
    }

    /// Every member multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        TestFamily {
            name: format!("{}×{c}", self.name),
            members: self.members.iter().map(|m| m.scaled(c)).collect(),
            ..self.clone()
        }
    }

    pub fn sample(&self, i: usize, grid: &Arc<Grid>) -> Result<Field> {
        let m = &self.members[i];
        Field::sample(grid, |r, x| C64::new(m.eval(r, x), 0.0))
    }

    pub fn sample_box(&self, i: usize, bx: &UniformBox) -> Result<BoxSamples> {
        let m = &self.members[i];
        BoxSamples::sample(bx, |r, x| C64::new(m.eval(r, x), 0.0))
    }
}
