//! Approximate-identity family `phi_R(x) = R^n phi(R x)` with unit-mass base
//! profiles, plus convolution against sampled fields.
//!
//! After sampling, the discrete mass is renormalized to exactly 1, so the
//! transform of every mollifier equals 1 at frequency zero; this is what
//! makes the verifier's `eps(R)` tend to zero on the grid. A discrete
//! identity (`hat phi = 1` on every bin) is available as the `R -> inf`
//! endpoint of sweeps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, Representation};

/// `1 / integral of exp(-1/(1-x^2)) over (-1, 1)` (fine Simpson quadrature).
const BUMP_NORMALIZER_1D: f64 = 2.252283620978814;
/// `1 / integral of exp(-1/(1-|x|^2)) over the unit disk`.
const BUMP_NORMALIZER_2D: f64 = 2.143565775792237;

/// Base profile of a mollifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifierKind {
    /// Compactly supported `C^inf` bump on `|x| < 1`.
    Bump,
    /// Gaussian `pi^{-n/2} e^{-|x|^2}`; truncation error is below all
    /// verification tolerances.
    Gaussian,
    /// Discrete delta: transform identically 1. Only meaningful as a sweep
    /// endpoint; not constructible from run configurations.
    Identity,
}

impl MollifierKind {
    pub fn label(&self) -> &'static str {
        match self {
            MollifierKind::Bump => "bump",
            MollifierKind::Gaussian => "gaussian",
            MollifierKind::Identity => "identity",
        }
    }
}

impl std::fmt::Display for MollifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for MollifierKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bump" => Ok(MollifierKind::Bump),
            "gaussian" => Ok(MollifierKind::Gaussian),
            _ => Err(format!("unknown mollifier kind `{s}` (expected bump or gaussian)")),
        }
    }
}

/// A sampled mollifier: nonnegative, discrete mass exactly 1, with its
/// discrete transform cached.
#[derive(Debug, Clone)]
pub struct Mollifier {
    kind: MollifierKind,
    scale: f64,
    field: Field,
    hat: Field,
}

impl Mollifier {
    pub fn kind(&self) -> MollifierKind {
        self.kind
    }

    /// The scale `R`; `inf` for the discrete identity.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn grid(&self) -> Grid {
        self.field.grid()
    }

    /// Physical samples of `phi_R`.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Discrete transform of the sampled mollifier (spectral field).
    pub fn hat(&self) -> &Field {
        &self.hat
    }

    /// The discrete identity: physical spike of weight `1/h^n` at `x = 0`,
    /// transform exactly 1 on every bin.
    pub fn identity(grid: Grid) -> Mollifier {
        let weight = grid.cell_volume().recip();
        let field = Field::from_real_fn(grid, |x| {
            if x.iter().all(|&c| c == 0.0) {
                weight
            } else {
                0.0
            }
        });
        let hat = Field::from_spectral_fn(grid, |_| Complex64::new(1.0, 0.0))
            .expect("constant-one spectrum is finite");
        Mollifier {
            kind: MollifierKind::Identity,
            scale: f64::INFINITY,
            field,
            hat,
        }
    }
}

fn bump_profile(r_sq: f64) -> f64 {
    if r_sq < 1.0 {
        (-1.0 / (1.0 - r_sq)).exp()
    } else {
        0.0
    }
}

/// Samples `phi_R(x) = R^n phi(R x)` on the grid and renormalizes the
/// discrete mass to 1. Bump mollifiers must keep at least 8 samples across
/// their support (`1/R >= 4h`).
pub fn make_mollifier(kind: MollifierKind, r: f64, grid: Grid) -> Result<Mollifier> {
    if kind == MollifierKind::Identity {
        return Ok(Mollifier::identity(grid));
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mollifier scale must be positive and finite, got {r}"
        )));
    }
    let h = grid.spacing();
    if kind == MollifierKind::Bump && 1.0 / r < 4.0 * h {
        return Err(Error::UnderResolvedMollifier {
            scale: r,
            spacing: h,
        });
    }
    let n = grid.dim();
    let jacobian = r.powi(n as i32);
    let normalizer = match (kind, n) {
        (MollifierKind::Bump, 1) => BUMP_NORMALIZER_1D,
        (MollifierKind::Bump, _) => BUMP_NORMALIZER_2D,
        (MollifierKind::Gaussian, _) => std::f64::consts::PI.powf(-(n as f64) / 2.0),
        (MollifierKind::Identity, _) => unreachable!(),
    };
    let profile = move |x: &[f64]| -> f64 {
        let r_sq: f64 = x.iter().map(|c| (r * c) * (r * c)).sum();
        let base = match kind {
            MollifierKind::Bump => bump_profile(r_sq),
            MollifierKind::Gaussian => (-r_sq).exp(),
            MollifierKind::Identity => unreachable!(),
        };
        jacobian * normalizer * base
    };
    let sampled = Field::from_real_fn(grid, |x| profile(x));
    let mass: f64 = sampled.values().iter().map(|v| v.re).sum::<f64>() * grid.cell_volume();
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mollifier with R = {r} has no mass on this grid"
        )));
    }
    let field = sampled.scaled(Complex64::new(mass.recip(), 0.0));
    // both profiles are even, so the transform is exactly real; strip the
    // rounding residue now so growth multipliers cannot amplify it later
    let hat_raw = field.forward_transform()?;
    let sup = hat_raw.max_abs();
    let residue = hat_raw
        .values()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);
    assert!(
        residue <= 1e-12 * sup,
        "even mollifier has non-real transform: residue {residue:.3e}"
    );
    let hat = Field::from_spectral_values(
        grid,
        hat_raw.values().iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
    );
    Ok(Mollifier {
        kind,
        scale: r,
        field,
        hat,
    })
}

/// Convolution `phi_R * f` through the discrete transform of the sampled
/// mollifier; linear in `f` and exactly norm-contractive by discrete
/// Young's inequality.
pub fn mollify(f: &Field, moll: &Mollifier) -> Result<Field> {
    if f.grid() != moll.grid() {
        return Err(Error::GridMismatch);
    }
    if f.representation() != Representation::Physical {
        return Err(Error::RepresentationMismatch {
            expected: "physical",
        });
    }
    let spec = f.forward_transform()?;
    let values: Vec<Complex64> = spec
        .values()
        .iter()
        .zip(moll.hat().values())
        .map(|(a, b)| a * b)
        .collect();
    Field::from_spectral_values(f.grid(), values).inverse_transform()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::random_band_limited;

    fn grid_default() -> Grid {
        Grid::new(1, 4096, 40.0).unwrap()
    }

    #[test]
    fn discrete_mass_is_one_after_renormalization() {
        let g = grid_default();
        for kind in [MollifierKind::Bump, MollifierKind::Gaussian] {
            for &r in &[1.0, 2.0, 8.0] {
                let m = make_mollifier(kind, r, g).unwrap();
                let mass: f64 =
                    m.field().values().iter().map(|v| v.re).sum::<f64>() * g.cell_volume();
                assert!((mass - 1.0).abs() <= 1e-14, "{kind} R={r}: mass {mass}");
            }
        }
    }

    #[test]
    fn bump_support_is_contained() {
        let g = grid_default();
        let m = make_mollifier(MollifierKind::Bump, 2.0, g).unwrap();
        for (j, v) in m.field().values().iter().enumerate() {
            let x = g.point_at(j)[0];
            if x.abs() > 0.5 + g.spacing() {
                assert_eq!(v.re, 0.0, "bump leaks outside support at x = {x}");
            }
            assert!(v.re >= 0.0, "negative mollifier sample");
        }
    }

    #[test]
    fn transform_at_zero_frequency_is_unit() {
        let g = grid_default();
        for kind in [MollifierKind::Bump, MollifierKind::Gaussian] {
            let m = make_mollifier(kind, 4.0, g).unwrap();
            let dc = m.hat().values()[g.spectral_bin(&[0])];
            assert!((dc.re - 1.0).abs() <= 1e-12 && dc.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_scales() {
        let g = grid_default();
        assert!(matches!(
            make_mollifier(MollifierKind::Bump, 0.0, g),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            make_mollifier(MollifierKind::Gaussian, -2.0, g),
            Err(Error::InvalidParameter(_))
        ));
        // bump under-resolution: h = 40/4096, need 1/R >= 4h, so R <= 25.6
        assert!(matches!(
            make_mollifier(MollifierKind::Bump, 32.0, g),
            Err(Error::UnderResolvedMollifier { .. })
        ));
        // gaussian carries no support precondition
        assert!(make_mollifier(MollifierKind::Gaussian, 32.0, g).is_ok());
    }

    #[test]
    fn unit_mass_across_doubling_sweep() {
        let g = Grid::new(1, 16384, 40.0).unwrap();
        let mut r = 1.0;
        while r <= 64.0 {
            let m = make_mollifier(MollifierKind::Bump, r, g).unwrap();
            assert!((m.field().lp_norm(1.0).unwrap() - 1.0).abs() <= 1e-10);
            r *= 2.0;
        }
    }

    #[test]
    fn mollify_preserves_constants() {
        let g = grid_default();
        let one = Field::constant(g, Complex64::new(1.0, 0.0));
        for kind in [MollifierKind::Bump, MollifierKind::Gaussian] {
            let m = make_mollifier(kind, 2.0, g).unwrap();
            let out = mollify(&one, &m).unwrap();
            let err = (&out - &one).max_abs();
            assert!(err <= 1e-10, "{kind}: constant drift {err}");
        }
    }

    #[test]
    fn mollify_is_linear() {
        let g = grid_default();
        let m = make_mollifier(MollifierKind::Bump, 4.0, g).unwrap();
        let f = random_band_limited(g, 2, 2.0).unwrap();
        let h = random_band_limited(g, 3, 2.0).unwrap();
        let lhs = mollify(&(&f + &h), &m).unwrap();
        let rhs = &mollify(&f, &m).unwrap() + &mollify(&h, &m).unwrap();
        let scale = lhs.max_abs().max(1e-300);
        assert!((&lhs - &rhs).max_abs() <= 1e-13 * scale);
    }

    #[test]
    fn mollify_contracts_lp_norms() {
        let g = grid_default();
        let m = make_mollifier(MollifierKind::Bump, 8.0, g).unwrap();
        let f = random_band_limited(g, 11, 2.0).unwrap();
        for &p in &[1.0, 2.0, f64::INFINITY] {
            let a = mollify(&f, &m).unwrap().lp_norm(p).unwrap();
            let b = f.lp_norm(p).unwrap();
            assert!(a <= (1.0 + 1e-8) * b, "p = {p}: {a} > {b}");
        }
    }

    #[test]
    fn mollify_rejects_mismatched_grids() {
        let g = grid_default();
        let other = Grid::new(1, 2048, 40.0).unwrap();
        let m = make_mollifier(MollifierKind::Bump, 2.0, g).unwrap();
        let f = Field::constant(other, Complex64::new(1.0, 0.0));
        assert!(matches!(mollify(&f, &m), Err(Error::GridMismatch)));
    }

    #[test]
    fn identity_mollifier_has_unit_transform_and_mass() {
        let g = grid_default();
        let m = Mollifier::identity(g);
        assert_eq!(m.kind(), MollifierKind::Identity);
        assert!(m.scale().is_infinite());
        assert!(m
            .hat()
            .values()
            .iter()
            .all(|v| *v == Complex64::new(1.0, 0.0)));
        let mass: f64 = m.field().values().iter().map(|v| v.re).sum::<f64>() * g.cell_volume();
        assert!((mass - 1.0).abs() <= 1e-15);
        // convolution with the identity reproduces the field
        let f = random_band_limited(g, 6, 2.0).unwrap();
        let out = mollify(&f, &m).unwrap();
        assert!((&out - &f).max_abs() <= 1e-12 * f.max_abs());
    }

    #[test]
    fn two_dimensional_mollifier_mass() {
        let g = Grid::new(2, 64, 10.0).unwrap();
        for kind in [MollifierKind::Bump, MollifierKind::Gaussian] {
            let m = make_mollifier(kind, 1.0, g).unwrap();
            let mass: f64 =
                m.field().values().iter().map(|v| v.re).sum::<f64>() * g.cell_volume();
            assert!((mass - 1.0).abs() <= 1e-14);
            let dc = m.hat().values()[g.spectral_bin(&[0, 0])];
            assert!((dc.re - 1.0).abs() <= 1e-12);
        }
    }
}
