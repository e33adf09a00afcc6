//! Constructive constants for the seminorm interpolation inequality and the
//! two-term decomposition behind it.
//!
//! For orders `0 < s < t` and a mollifier `phi_R` the verifier builds
//!
//! ```text
//! eps(R) = || (delta - phi_R) * L_{t-s} ||_1
//! C(R)   = || L_{-s} * phi_R ||_1
//! ```
//!
//! from the discrete transform of the sampled mollifier, splits
//! `J_{-s} phi = part1 + part2` with `part1` carried by `eps` and `part2` by
//! `C`, and checks `||J_{-s} phi||_q <= eps ||J_{-t} phi||_q + C ||phi||_q`.
//! Because the split is exact multiplier algebra on the shared grid,
//! discrete Young's inequality certifies both parts up to rounding.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::{bessel_multiplier, seminorm, BesselOrder};
use crate::error::{Error, Result};
use crate::grid::{conjugate_exponent, Field, Grid, Representation};
use crate::mollifier::{make_mollifier, Mollifier, MollifierKind};

/// Parameters of one verification row: orders `0 < s < t`, exponent
/// `q in [1, inf]`, mollifier scale and kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WongParams {
    pub s: f64,
    pub t: f64,
    pub q: f64,
    pub r: f64,
    pub kind: MollifierKind,
}

impl WongParams {
    pub fn validate(&self) -> Result<()> {
        validate_orders(self.s, self.t)?;
        if self.q.is_nan() || self.q < 1.0 {
            return Err(Error::InvalidExponent(self.q));
        }
        if self.kind != MollifierKind::Identity && (!self.r.is_finite() || self.r <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mollifier scale must be positive and finite, got {}",
                self.r
            )));
        }
        Ok(())
    }
}

fn validate_orders(s: f64, t: f64) -> Result<()> {
    if !t.is_finite() || s.is_nan() || s <= 0.0 || t <= s {
        return Err(Error::InvalidParameter(format!(
            "orders must satisfy 0 < s < t, got s = {s}, t = {t}"
        )));
    }
    Ok(())
}

/// The constructed pair `(eps, C)`. `C >= 1` up to rounding because the
/// transform of `L_{-s} * phi_R` equals 1 at frequency zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WongConstants {
    pub epsilon: f64,
    pub c: f64,
}

impl WongConstants {
    fn new(epsilon: f64, c: f64) -> Self {
        debug_assert!(epsilon.is_finite() && epsilon >= 0.0);
        debug_assert!(c.is_finite() && c >= 1.0 - 1e-10);
        WongConstants { epsilon, c }
    }
}

/// Kernel with spectral data `(1 - hat(phi_R)) (1 + |xi|^2)^{-(t-s)/2}`,
/// returned in physical representation.
pub(crate) fn deficiency_kernel(order_gap: f64, moll: &Mollifier) -> Result<Field> {
    let grid = moll.grid();
    let gap = BesselOrder::new(order_gap)?;
    let values: Vec<Complex64> = moll
        .hat()
        .values()
        .iter()
        .enumerate()
        .map(|(flat, hat)| {
            let xi = grid.frequency_at(flat);
            let b = bessel_multiplier(gap, &xi[..grid.dim()]);
            (Complex64::new(1.0, 0.0) - hat) * b
        })
        .collect();
    Field::from_spectral_values(grid, values).inverse_transform()
}

/// Kernel with spectral data `(1 + |xi|^2)^{s/2} hat(phi_R)`, physical.
pub(crate) fn growth_kernel(s: f64, moll: &Mollifier) -> Result<Field> {
    let grid = moll.grid();
    let neg = BesselOrder::new(-s)?;
    let values: Vec<Complex64> = moll
        .hat()
        .values()
        .iter()
        .enumerate()
        .map(|(flat, hat)| {
            let xi = grid.frequency_at(flat);
            hat * bessel_multiplier(neg, &xi[..grid.dim()])
        })
        .collect();
    Field::from_spectral_values(grid, values).inverse_transform()
}

/// `eps = ||(delta - phi_R) * L_{t-s}||_1` for orders `0 < s < t`, using the
/// discrete transform of the sampled mollifier. The discrete identity gives
/// exactly zero.
pub fn epsilon_constant(s: f64, t: f64, moll: &Mollifier) -> Result<f64> {
    validate_orders(s, t)?;
    deficiency_kernel(t - s, moll)?.lp_norm(1.0)
}

/// `C = ||L_{-s} * phi_R||_1` for `s > 0`.
pub fn c_constant(s: f64, moll: &Mollifier) -> Result<f64> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "growth order must be positive, got {s}"
        )));
    }
    growth_kernel(s, moll)?.lp_norm(1.0)
}

/// Both constants for one `(s, t, mollifier)` choice.
pub fn wong_constants(s: f64, t: f64, moll: &Mollifier) -> Result<WongConstants> {
    Ok(WongConstants::new(
        epsilon_constant(s, t, moll)?,
        c_constant(s, moll)?,
    ))
}

/// Splits `J_{-s} phi` into the mollifier-deficiency part (bounded through
/// `eps`) and the mollified part (bounded through `C`):
///
/// - `part1` applies `(1 - hat(phi_R)) (1 + |xi|^2)^{-(t-s)/2}` to `J_{-t} phi`,
/// - `part2` applies `(1 + |xi|^2)^{s/2} hat(phi_R)` to `phi`,
///
/// and `part1 + part2 = J_{-s} phi` up to multiplier rounding.
pub fn decompose(phi: &Field, s: f64, t: f64, moll: &Mollifier) -> Result<(Field, Field)> {
    validate_orders(s, t)?;
    if phi.grid() != moll.grid() {
        return Err(Error::GridMismatch);
    }
    if phi.representation() != Representation::Physical {
        return Err(Error::RepresentationMismatch {
            expected: "physical",
        });
    }
    let grid = phi.grid();
    let spec = phi.forward_transform()?;
    let gap = BesselOrder::new(t - s)?;
    let neg_t = BesselOrder::new(-t)?;
    let neg_s = BesselOrder::new(-s)?;

    let mut part1 = Vec::with_capacity(grid.point_count());
    let mut part2 = Vec::with_capacity(grid.point_count());
    for (flat, (phi_hat, hat)) in spec.values().iter().zip(moll.hat().values()).enumerate() {
        let xi = grid.frequency_at(flat);
        let xi = &xi[..grid.dim()];
        let mid_hat = phi_hat * bessel_multiplier(neg_t, xi);
        part1.push((Complex64::new(1.0, 0.0) - hat) * bessel_multiplier(gap, xi) * mid_hat);
        part2.push(hat * bessel_multiplier(neg_s, xi) * phi_hat);
    }
    Ok((
        Field::from_spectral_values(grid, part1).inverse_transform()?,
        Field::from_spectral_values(grid, part2).inverse_transform()?,
    ))
}

/// One record of a verification run.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub grid: Grid,
    pub kind: MollifierKind,
    pub s: f64,
    pub t: f64,
    /// Conjugate exponent `1/p + 1/q = 1`, stored for cross-reference with
    /// the duality checks; not used in the primal computation.
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub epsilon: f64,
    pub c: f64,
    pub test_fn: String,
    /// `||L_{-s} * phi||_q`.
    pub lhs: f64,
    /// `||L_{-t} * phi||_q`.
    pub mid: f64,
    /// `||phi||_q`.
    pub base: f64,
    /// `eps * mid + C * base - lhs`; nonnegative up to rounding.
    pub margin: f64,
}

impl SweepRow {
    /// Right-hand side of the inequality, `eps * mid + C * base`.
    pub fn rhs(&self) -> f64 {
        self.epsilon * self.mid + self.c * self.base
    }

    /// Whether the inequality holds within the rounding allowance
    /// `margin >= -1e-8 * rhs`.
    pub fn holds(&self) -> bool {
        self.margin >= -1e-8 * self.rhs()
    }
}

/// Evaluates one inequality row: builds the mollifier, the constants and the
/// three norms, and returns the assembled [`SweepRow`]. The zero field is
/// allowed (all norms vanish, margin 0).
pub fn verify_wong(phi: &Field, test_fn: &str, params: &WongParams) -> Result<SweepRow> {
    params.validate()?;
    let moll = make_mollifier(params.kind, params.r, phi.grid())?;
    verify_wong_with(phi, test_fn, params, &moll)
}

/// Same as [`verify_wong`] but with a caller-supplied mollifier, so sweeps
/// can reuse one mollifier across test functions.
pub fn verify_wong_with(
    phi: &Field,
    test_fn: &str,
    params: &WongParams,
    moll: &Mollifier,
) -> Result<SweepRow> {
    params.validate()?;
    if phi.grid() != moll.grid() {
        return Err(Error::GridMismatch);
    }
    let constants = wong_constants(params.s, params.t, moll)?;
    let lhs = seminorm(phi, params.s, params.q)?;
    let mid = seminorm(phi, params.t, params.q)?;
    let base = phi.lp_norm(params.q)?;
    let margin = constants.epsilon * mid + constants.c * base - lhs;
    Ok(SweepRow {
        grid: phi.grid(),
        kind: moll.kind(),
        s: params.s,
        t: params.t,
        p: conjugate_exponent(params.q),
        q: params.q,
        r: moll.scale(),
        epsilon: constants.epsilon,
        c: constants.c,
        test_fn: test_fn.to_owned(),
        lhs,
        mid,
        base,
        margin,
    })
}

/// One point of the `R -> (eps, C)` trade-off curve. The discrete identity
/// endpoint is reported with `r = inf` and `eps = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub r: f64,
    pub epsilon: f64,
    pub c: f64,
}

/// Computes `(eps(R), C(R))` along an ascending list of scales; optionally
/// appends the discrete-identity endpoint. Points are independent and are
/// evaluated in parallel, in deterministic output order.
pub fn constant_tradeoff_sweep(
    s: f64,
    t: f64,
    scales: &[f64],
    kind: MollifierKind,
    grid: Grid,
    include_identity: bool,
) -> Result<Vec<TradeoffPoint>> {
    validate_orders(s, t)?;
    if scales.is_empty() {
        return Err(Error::InvalidParameter(
            "scale list must be nonempty".to_owned(),
        ));
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "scale list must be strictly ascending".to_owned(),
        ));
    }
    let mut points = scales
        .par_iter()
        .map(|&r| {
            let moll = make_mollifier(kind, r, grid)?;
            Ok(TradeoffPoint {
                r,
                epsilon: epsilon_constant(s, t, &moll)?,
                c: c_constant(s, &moll)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if include_identity {
        let identity = Mollifier::identity(grid);
        points.push(TradeoffPoint {
            r: f64::INFINITY,
            epsilon: epsilon_constant(s, t, &identity)?,
            c: c_constant(s, &identity)?,
        });
    }
    Ok(points)
}

/// The constructive witness for a target `eps*`: the first listed point with
/// `eps(R) <= eps*`.
pub fn smallest_scale_for_target(points: &[TradeoffPoint], eps_target: f64) -> Option<&TradeoffPoint> {
    points.iter().find(|p| p.epsilon <= eps_target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::random_band_limited;

    fn grid_default() -> Grid {
        Grid::new(1, 4096, 40.0).unwrap()
    }

    fn gaussian(grid: Grid) -> Field {
        Field::from_real_fn(grid, |x| (-x.iter().map(|c| c * c).sum::<f64>()).exp())
    }

    #[test]
    fn identity_mollifier_gives_exactly_zero_epsilon() {
        let g = grid_default();
        let moll = Mollifier::identity(g);
        assert_eq!(epsilon_constant(1.0, 2.0, &moll).unwrap(), 0.0);
    }

    #[test]
    fn epsilon_baseline_at_unit_scale() {
        // regression value, cross-checked against a fine-grid quadrature
        // oracle in the integration tests
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 1.0, g).unwrap();
        let eps = epsilon_constant(1.0, 2.0, &moll).unwrap();
        assert!(eps > 0.0 && eps <= 2.0, "eps out of (0, 2]: {eps}");
        let baseline = 0.2920658196500174;
        assert!(
            (eps - baseline).abs() <= 1e-9 * baseline,
            "eps regression drift: {eps} vs {baseline}"
        );
    }

    #[test]
    fn epsilon_rejects_bad_orders() {
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 1.0, g).unwrap();
        assert!(matches!(
            epsilon_constant(2.0, 1.0, &moll),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            epsilon_constant(0.0, 1.0, &moll),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            c_constant(0.0, &moll),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn c_constant_limits_and_lower_bound() {
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 2.0, g).unwrap();
        // s -> 0+ limit: L_0 * phi_R = phi_R has unit mass
        let c = c_constant(1e-8, &moll).unwrap();
        assert!((c - 1.0).abs() <= 1e-6, "c near zero order: {c}");
        for &(s, r) in &[(0.5, 1.0), (1.0, 4.0), (2.0, 8.0), (3.0, 16.0)] {
            let moll = make_mollifier(MollifierKind::Bump, r, g).unwrap();
            let c = c_constant(s, &moll).unwrap();
            assert!(c >= 1.0 - 1e-10, "c = {c} below certified floor");
        }
    }

    #[test]
    fn growth_constant_scales_like_r_to_the_s() {
        let g = Grid::new(1, 16384, 40.0).unwrap();
        let cs: Vec<f64> = [8.0, 16.0, 32.0, 64.0]
            .iter()
            .map(|&r| {
                let moll = make_mollifier(MollifierKind::Bump, r, g).unwrap();
                c_constant(1.0, &moll).unwrap()
            })
            .collect();
        for w in cs.windows(2) {
            let slope = (w[1] / w[0]).ln() / 2f64.ln();
            assert!((0.5..=1.5).contains(&slope), "log-log slope {slope}");
        }
    }

    #[test]
    fn decompose_is_linear_and_telescopes() {
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 8.0, g).unwrap();

        let zero = Field::constant(g, Complex64::new(0.0, 0.0));
        let (p1, p2) = decompose(&zero, 1.0, 2.0, &moll).unwrap();
        assert_eq!(p1.max_abs(), 0.0);
        assert_eq!(p2.max_abs(), 0.0);

        for field in [gaussian(g), random_band_limited(g, 20, 2.0).unwrap()] {
            for &(s, t) in &[(0.5, 1.0), (1.0, 2.0), (1.0, 3.0)] {
                let (p1, p2) = decompose(&field, s, t, &moll).unwrap();
                let target = crate::bessel::bessel_potential(
                    &field,
                    BesselOrder::new(-s).unwrap(),
                )
                .unwrap();
                let err = (&(&p1 + &p2) - &target).max_abs();
                assert!(
                    err <= 1e-10 * target.max_abs(),
                    "telescoping error {err} at (s,t)=({s},{t})"
                );
            }
        }
    }

    #[test]
    fn decompose_parts_obey_young_bounds() {
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 8.0, g).unwrap();
        let phi = gaussian(g);
        let (s, t) = (1.0, 2.0);
        let (p1, p2) = decompose(&phi, s, t, &moll).unwrap();
        let eps = epsilon_constant(s, t, &moll).unwrap();
        let c = c_constant(s, &moll).unwrap();
        for &q in &[1.0, 2.0, 4.0, f64::INFINITY] {
            let b1 = p1.lp_norm(q).unwrap();
            let b2 = p2.lp_norm(q).unwrap();
            let mid = seminorm(&phi, t, q).unwrap();
            let base = phi.lp_norm(q).unwrap();
            assert!(b1 <= eps * mid * (1.0 + 1e-8), "q={q}: {b1} vs {}", eps * mid);
            assert!(b2 <= c * base * (1.0 + 1e-8), "q={q}: {b2} vs {}", c * base);
        }
    }

    #[test]
    fn decompose_validates_inputs() {
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 8.0, g).unwrap();
        let phi = gaussian(g);
        assert!(matches!(
            decompose(&phi, 2.0, 1.0, &moll),
            Err(Error::InvalidParameter(_))
        ));
        let other = Grid::new(1, 2048, 40.0).unwrap();
        let phi_other = gaussian(other);
        assert!(matches!(
            decompose(&phi_other, 1.0, 2.0, &moll),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn verify_wong_zero_field_and_margins() {
        let g = grid_default();
        let zero = Field::constant(g, Complex64::new(0.0, 0.0));
        let params = WongParams {
            s: 1.0,
            t: 2.0,
            q: 2.0,
            r: 8.0,
            kind: MollifierKind::Bump,
        };
        let row = verify_wong(&zero, "zero", &params).unwrap();
        assert_eq!((row.lhs, row.mid, row.base, row.margin), (0.0, 0.0, 0.0, 0.0));
        assert!(row.holds());

        let phi = gaussian(g);
        for q in [2.0, f64::INFINITY] {
            let row = verify_wong(&phi, "gaussian", &WongParams { q, ..params }).unwrap();
            assert!(row.margin >= 0.0, "q={q}: margin {}", row.margin);
            assert!(row.holds());
            assert!((row.p - conjugate_exponent(q)).abs() <= 1e-15 || row.p == conjugate_exponent(q));
        }
    }

    #[test]
    fn verify_wong_rejects_invalid_params() {
        let g = grid_default();
        let phi = gaussian(g);
        let bad = WongParams {
            s: 2.0,
            t: 1.0,
            q: 2.0,
            r: 8.0,
            kind: MollifierKind::Bump,
        };
        assert!(verify_wong(&phi, "gaussian", &bad).is_err());
        let bad_q = WongParams {
            s: 1.0,
            t: 2.0,
            q: 0.5,
            r: 8.0,
            kind: MollifierKind::Bump,
        };
        assert!(matches!(
            verify_wong(&phi, "gaussian", &bad_q),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn margin_sign_is_scale_invariant() {
        let g = grid_default();
        let phi = gaussian(g);
        let params = WongParams {
            s: 1.0,
            t: 2.0,
            q: 2.0,
            r: 4.0,
            kind: MollifierKind::Bump,
        };
        let row = verify_wong(&phi, "gaussian", &params).unwrap();
        for &lambda in &[-3.0, 0.25, 10.0] {
            let scaled = phi.scaled(Complex64::new(lambda, 0.0));
            let srow = verify_wong(&scaled, "gaussian-scaled", &params).unwrap();
            assert_eq!(srow.margin >= 0.0, row.margin >= 0.0);
            let expect = lambda.abs() * row.margin;
            assert!(
                (srow.margin - expect).abs() <= 1e-12 * expect.abs().max(1e-300),
                "margin homogeneity: {} vs {expect}",
                srow.margin
            );
        }
    }

    #[test]
    fn tradeoff_sweep_shapes_and_witness() {
        let g = grid_default();
        let scales = [1.0, 2.0, 4.0, 8.0, 16.0];
        let points =
            constant_tradeoff_sweep(1.0, 2.0, &scales, MollifierKind::Bump, g, true).unwrap();
        assert_eq!(points.len(), 6);
        let eps: Vec<f64> = points.iter().map(|p| p.epsilon).collect();
        assert!(eps.windows(2).all(|w| w[0] > w[1]), "eps not strictly decreasing: {eps:?}");
        assert_eq!(eps[5], 0.0); // identity endpoint
        assert!(points[5].r.is_infinite());
        assert!(eps[4] / eps[0] < 0.25, "decay too slow: {}", eps[4] / eps[0]);

        // any valid scale satisfies the Young bound eps <= 2, and a proper
        // mollifier never reaches zero
        assert!(points.iter().all(|p| p.epsilon <= 2.0));
        assert!(points[..5].iter().all(|p| p.epsilon > 0.0));
        let witness = smallest_scale_for_target(&points, 2.0).unwrap();
        assert_eq!(witness.r, 1.0);
        assert!(smallest_scale_for_target(&points, 0.0).is_some()); // identity
        assert!(smallest_scale_for_target(&points[..5], 0.0).is_none());
    }

    #[test]
    fn verify_wong_holds_in_two_dimensions() {
        let g = Grid::new(2, 128, 20.0).unwrap();
        let phi = gaussian(g);
        for kind in [MollifierKind::Bump, MollifierKind::Gaussian] {
            for &q in &[1.0, 2.0, f64::INFINITY] {
                let params = WongParams {
                    s: 1.0,
                    t: 2.0,
                    q,
                    r: 1.0,
                    kind,
                };
                let row = verify_wong(&phi, "gaussian", &params).unwrap();
                assert!(row.holds(), "kind={kind} q={q}: margin {}", row.margin);
                assert!(row.margin >= 0.0);
            }
        }
    }

    #[test]
    fn tradeoff_sweep_validates_scale_list() {
        let g = grid_default();
        assert!(matches!(
            constant_tradeoff_sweep(1.0, 2.0, &[], MollifierKind::Bump, g, false),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            constant_tradeoff_sweep(1.0, 2.0, &[2.0, 1.0], MollifierKind::Bump, g, false),
            Err(Error::InvalidParameter(_))
        ));
    }
}
