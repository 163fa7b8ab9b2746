//! Spectral calculus for the partial harmonic oscillator
//!
//! ```text
//!     H = -∂²/∂ρ² - Δ_x + |x|²     on R^{d+1},  z = (ρ, x)
//! ```
//!
//! The operator is free in ρ and confining in x. Functions are represented in
//! the mixed Fourier–Hermite basis `e^{iτρ} Φ_μ(x)`, on which `H` acts by the
//! eigenvalue `τ² + 2|μ| + d`. Everything else is built on top of that:
//!
//! * [`grid`]: periodic ρ-grid × Gauss–Hermite x-nodes, uniform boxes, L^p norms.
//! * [`hermite`]: Hermite functions, quadrature rules, projection kernels, Mehler's formula.
//! * [`spectral`]: the forward/inverse transform and the functional calculus `F(H)`.
//! * [`heat_kernel`]: the Mehler heat kernel and the physical-space route to `H^α`.
//! * [`ladder`]: first-order factors `A_j`, Riesz transforms, commutation identities.
//! * [`symbols`]: the adapted symbol class, fractional-power symbols, quantization.
//! * [`sobolev`]: potential and ladder Sobolev norms, inclusion demonstrations.
//! * [`inequalities`]: Hardy–Littlewood–Sobolev, Gagliardo–Nirenberg–Sobolev and Hardy checks.
//! * [`report`]: the metric records every check produces.

pub mod error;
pub mod family;
pub mod grid;
pub mod heat_kernel;
pub mod hermite;
pub mod inequalities;
pub mod ladder;
pub mod quad;
pub mod report;
pub mod sobolev;
pub mod spectral;
pub mod symbols;
mod tensor;

pub use error::{Error, Result};
pub use family::TestFamily;
pub use grid::{lp_norm, make_grid, resample, BoxSamples, Field, Grid, UniformBox};
pub use hermite::{GHRule, MultiIndex};
pub use report::{Metric, Report};
pub use spectral::{Multiplier, SpectralCoeffs};

pub use num_complex::Complex64 as C64;
