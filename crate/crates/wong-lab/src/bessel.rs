//! Bessel kernels `L_z` and potentials `J_z f = L_z * f` as spectral
//! multipliers, Sobolev-type seminorms, and the group-law / derivative
//! factorization checks.
//!
//! The kernel is never evaluated through special functions: `L_z` is defined
//! by its transform `(1 + |xi|^2)^{-z/2}`, sampled on the dual grid. For
//! `z > 0` it is a positive unit-mass `L^1` function, so `J_z` contracts
//! every `L^p` norm by Young's inequality; for `z < 0` it differentiates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{apply_multiplier, Field, Grid};

/// Real order of a Bessel kernel; negative orders are the differentiating
/// direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Bessel order must be finite, got {z}"
            )));
        }
        Ok(BesselOrder(z))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The transform of `L_z` at a frequency: `(1 + |xi|^2)^{-z/2}`.
pub fn bessel_multiplier(z: BesselOrder, xi: &[f64]) -> f64 {
    let xi_sq: f64 = xi.iter().map(|c| c * c).sum();
    (1.0 + xi_sq).powf(-0.5 * z.value())
}

/// `J_z f`: applies the Bessel multiplier of order `z`. `J_0` is exactly the
/// identity (no transform round trip).
pub fn bessel_potential(f: &Field, z: BesselOrder) -> Result<Field> {
    if z.value() == 0.0 {
        if f.representation() != crate::grid::Representation::Physical {
            return Err(Error::RepresentationMismatch {
                expected: "physical",
            });
        }
        return Ok(f.clone());
    }
    apply_multiplier(f, |xi| Complex64::new(bessel_multiplier(z, xi), 0.0))
}

/// Relative `L^2` error of the group law, `||J_z J_w f - J_{z+w} f||_2 /
/// ||f||_2`. The zero field is rejected.
pub fn verify_group_law(f: &Field, z: BesselOrder, w: BesselOrder) -> Result<f64> {
    let norm = f.lp_norm(2.0)?;
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    let sum = BesselOrder::new(z.value() + w.value())?;
    let composed = bessel_potential(&bessel_potential(f, w)?, z)?;
    let direct = bessel_potential(f, sum)?;
    Ok((&composed - &direct).lp_norm(2.0)? / norm)
}

/// The sampled kernel of `L_s` on a grid (physical representation).
/// Requires `s > 0`; for `s <= 0` the kernel is not in `L^1`.
pub fn kernel_field(s: BesselOrder, grid: Grid) -> Result<Field> {
    if s.value() <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "kernel order must be positive for an L^1 kernel, got {}",
            s.value()
        )));
    }
    let spectral = Field::from_spectral_fn(grid, |xi| {
        Complex64::new(bessel_multiplier(s, xi), 0.0)
    })?;
    spectral.inverse_transform()
}

/// Discrete `L^1` mass of the kernel of `L_s`, `s > 0`. The continuum value
/// is exactly 1; the discrete value carries only band-limiting ringing.
pub fn kernel_mass(s: BesselOrder, grid: Grid) -> Result<f64> {
    kernel_field(s, grid)?.lp_norm(1.0)
}

/// Sobolev-type seminorm `||L_{-s} * phi||_p`, `s >= 0`; `s = 0` reduces to
/// the plain `L^p` norm.
pub fn seminorm(phi: &Field, s: f64, p: f64) -> Result<f64> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "seminorm order must satisfy s >= 0, got {s}"
        )));
    }
    if s == 0.0 {
        return phi.lp_norm(p);
    }
    bessel_potential(phi, BesselOrder::new(-s)?)?.lp_norm(p)
}

/// Result of [`derivative_factorization_check`].
#[derive(Debug, Clone, Copy)]
pub struct FactorizationCheck {
    /// Relative sup discrepancy between the direct spectral derivative and
    /// the route through `L_s * d^alpha(delta)` followed by `L_{-s}`.
    pub reconstruction_error: f64,
    /// Discrete `L^1` mass of the factor kernel `L_s * d^alpha(delta)`.
    pub factor_mass: f64,
}

fn derivative_symbol(alpha: &[u32], xi: &[f64]) -> Complex64 {
    alpha
        .iter()
        .zip(xi)
        .fold(Complex64::new(1.0, 0.0), |acc, (&a, &x)| {
            acc * Complex64::new(0.0, x).powi(a as i32)
        })
}

/// Checks the factorization `d^alpha(delta) = (L_s * d^alpha(delta)) *
/// L_{-s}` on a band-limited field: computes `d^alpha f` directly via the
/// multiplier `(i xi)^alpha` and via the two-step route, and reports the
/// relative sup discrepancy together with the discrete `L^1` mass of the
/// factor kernel. Requires `s > |alpha|` (the factor is integrable only
/// then).
pub fn derivative_factorization_check(
    f: &Field,
    alpha: &[u32],
    s: f64,
) -> Result<FactorizationCheck> {
    let grid = f.grid();
    if alpha.len() != grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "multi-index length {} does not match dimension {}",
            alpha.len(),
            grid.dim()
        )));
    }
    let order: u32 = alpha.iter().sum();
    if s.is_nan() || s <= order as f64 {
        return Err(Error::InvalidParameter(format!(
            "factorization requires s > |alpha|, got s = {s}, |alpha| = {order}"
        )));
    }
    let s_order = BesselOrder::new(s)?;
    let neg_s = BesselOrder::new(-s)?;

    // both routes from one transform of f: the comparison then measures the
    // multiplier factorization itself, not FFT round-trip noise
    let spec = f.forward_transform()?;
    let mut direct_data = Vec::with_capacity(grid.point_count());
    let mut two_step_data = Vec::with_capacity(grid.point_count());
    for (flat, v) in spec.values().iter().enumerate() {
        let xi = grid.frequency_at(flat);
        let xi = &xi[..grid.dim()];
        let symbol = derivative_symbol(alpha, xi);
        direct_data.push(symbol * v);
        two_step_data
            .push(symbol * bessel_multiplier(s_order, xi) * bessel_multiplier(neg_s, xi) * v);
    }
    let direct = Field::from_spectral_values(grid, direct_data).inverse_transform()?;
    let reconstructed = Field::from_spectral_values(grid, two_step_data).inverse_transform()?;
    let sup = direct.max_abs();
    let reconstruction_error = if sup == 0.0 {
        0.0
    } else {
        (&reconstructed - &direct).max_abs() / sup
    };

    let factor = Field::from_spectral_fn(grid, |xi| {
        derivative_symbol(alpha, xi) * bessel_multiplier(s_order, xi)
    })?
    .inverse_transform()?;
    let factor_mass = factor.lp_norm(1.0)?;

    Ok(FactorizationCheck {
        reconstruction_error,
        factor_mass,
    })
}
