//! Concrete witnesses for the neighborhood-scale inclusion
//! `L_l * B_{1,p} subset eps (L_k * B_{1,p}) + C (L_m * B_{1,p})` on sampled
//! unit-ball elements, and a sampled check of the norm duality
//! `||f||_q = sup over the unit ball of |<g, f>|`.
//!
//! Membership of a part in `eps (L_k * B_{1,p})` is certified by the norm
//! bound `||J_{-k} f_1||_p <= eps`, which is equivalent on the grid where
//! `J_{-k}` is invertible; no ball element is exhibited.

use num_complex::Complex64;

use crate::bessel::{bessel_multiplier, bessel_potential, BesselOrder};
use crate::error::{Error, Result};
use crate::grid::{conjugate_exponent, random_band_limited, Field, Grid};
use crate::mollifier::Mollifier;
use crate::wong::{deficiency_kernel, growth_kernel};

/// Scale indices `k < l < m` of the inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleIndices {
    k: u32,
    l: u32,
    m: u32,
}

impl ScaleIndices {
    pub fn new(k: u32, l: u32, m: u32) -> Result<Self> {
        if !(k < l && l < m) {
            return Err(Error::InvalidParameter(format!(
                "scale indices must satisfy k < l < m, got ({k}, {l}, {m})"
            )));
        }
        Ok(ScaleIndices { k, l, m })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// A sampled element of the `L^p` unit ball.
#[derive(Debug, Clone)]
pub struct UnitBallSample {
    field: Field,
    p: f64,
    norm_certificate: f64,
    seed: u64,
}

impl UnitBallSample {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// Recomputed `L^p` norm after normalization; 1 within 1e-12.
    pub fn norm_certificate(&self) -> f64 {
        self.norm_certificate
    }

    /// Seed that actually produced the sample (incremented past zero draws).
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws a band-limited random field and normalizes it to unit `L^p` norm.
/// A zero draw deterministically increments the seed and redraws.
pub fn unit_ball_sample(seed: u64, p: f64, grid: Grid, decay: f64) -> Result<UnitBallSample> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let mut seed = seed;
    for _ in 0..64 {
        let raw = random_band_limited(grid, seed, decay)?;
        let norm = raw.lp_norm(p)?;
        if norm > 1e-300 {
            let field = raw.scaled(Complex64::new(norm.recip(), 0.0));
            let norm_certificate = field.lp_norm(p)?;
            return Ok(UnitBallSample {
                field,
                p,
                norm_certificate,
                seed,
            });
        }
        seed = seed.wrapping_add(1);
    }
    Err(Error::ZeroField)
}

/// The two-part witness split of `f = J_l g` together with its certified
/// norm bounds.
#[derive(Debug, Clone)]
pub struct InclusionWitness {
    /// The `(delta - phi_R)` part of `J_l g`.
    pub part1: Field,
    /// The `phi_R` part of `J_l g`.
    pub part2: Field,
    /// `||J_{-k} part1||_p`; at most `eps` up to rounding.
    pub bound1: f64,
    /// `||J_{-m} part2||_p`; at most `C` up to rounding.
    pub bound2: f64,
    /// `eps = ||(delta - phi_R) * L_{l-k}||_1`.
    pub epsilon: f64,
    /// `C = ||L_{l-m} * phi_R||_1`.
    pub c: f64,
    /// Relative sup error of `part1 + part2 = J_l g`.
    pub additivity_error: f64,
}

/// Splits `f = J_l g` along the mollifier and certifies both inclusion
/// bounds. The constants depend only on the index differences `l - k` and
/// `m - l` (group law).
pub fn inclusion_witness(
    g: &UnitBallSample,
    idx: ScaleIndices,
    moll: &Mollifier,
) -> Result<InclusionWitness> {
    let grid = g.field().grid();
    if grid != moll.grid() {
        return Err(Error::GridMismatch);
    }
    let (k, l, m) = (idx.k() as f64, idx.l() as f64, idx.m() as f64);
    let spec = g.field().forward_transform()?;

    let gap_k = BesselOrder::new(l - k)?;
    let ord_k = BesselOrder::new(k)?;
    let neg_k = BesselOrder::new(-k)?;
    let gap_m = BesselOrder::new(l - m)?;
    let ord_m = BesselOrder::new(m)?;
    let neg_m = BesselOrder::new(-m)?;

    // all four spectra assembled from one transform of g: materializing a
    // part physically and re-transforming would let the growth multiplier
    // (1+|xi|^2)^{m/2} amplify round-trip noise on empty high bins
    let mut part1 = Vec::with_capacity(grid.point_count());
    let mut part2 = Vec::with_capacity(grid.point_count());
    let mut sharp1 = Vec::with_capacity(grid.point_count());
    let mut sharp2 = Vec::with_capacity(grid.point_count());
    for (flat, (g_hat, hat)) in spec.values().iter().zip(moll.hat().values()).enumerate() {
        let xi = grid.frequency_at(flat);
        let xi = &xi[..grid.dim()];
        let deficiency = (Complex64::new(1.0, 0.0) - hat) * bessel_multiplier(gap_k, xi);
        let mollified = hat * bessel_multiplier(gap_m, xi);
        part1.push(deficiency * bessel_multiplier(ord_k, xi) * g_hat);
        part2.push(mollified * bessel_multiplier(ord_m, xi) * g_hat);
        let unit_k = bessel_multiplier(ord_k, xi) * bessel_multiplier(neg_k, xi);
        let unit_m = bessel_multiplier(ord_m, xi) * bessel_multiplier(neg_m, xi);
        sharp1.push(deficiency * unit_k * g_hat);
        sharp2.push(mollified * unit_m * g_hat);
    }
    let part1 = Field::from_spectral_values(grid, part1).inverse_transform()?;
    let part2 = Field::from_spectral_values(grid, part2).inverse_transform()?;

    let f = bessel_potential(g.field(), BesselOrder::new(l)?)?;
    let sup = f.max_abs();
    let additivity_error = if sup == 0.0 {
        0.0
    } else {
        (&(&part1 + &part2) - &f).max_abs() / sup
    };

    let bound1 = Field::from_spectral_values(grid, sharp1)
        .inverse_transform()?
        .lp_norm(g.exponent())?;
    let bound2 = Field::from_spectral_values(grid, sharp2)
        .inverse_transform()?
        .lp_norm(g.exponent())?;
    let epsilon = deficiency_kernel(l - k, moll)?.lp_norm(1.0)?;
    let c = growth_kernel(m - l, moll)?.lp_norm(1.0)?;

    Ok(InclusionWitness {
        part1,
        part2,
        bound1,
        bound2,
        epsilon,
        c,
        additivity_error,
    })
}

/// Hoelder extremizer of `sup |<g, f>|` over the `L^p` unit ball: for
/// `1 < q < inf` the classical `|f|^{q-1} sign(conj f)`, for `q = 1` the
/// sign field, for `q = inf` a point mass of weight `1/h^n` at the argmax.
fn holder_extremizer(f: &Field, q: f64) -> Result<Field> {
    let grid = f.grid();
    let values = f.values();
    let extremal: Vec<Complex64> = if q == 1.0 {
        values.iter().map(|v| sign_conj(*v)).collect()
    } else if q == f64::INFINITY {
        let argmax = values
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm().total_cmp(&b.norm()))
            .map(|(j, _)| j)
            .expect("nonempty field");
        let mut spike = vec![Complex64::new(0.0, 0.0); values.len()];
        spike[argmax] = sign_conj(values[argmax]) * grid.cell_volume().recip();
        spike
    } else {
        values
            .iter()
            .map(|v| v.norm().powf(q - 1.0) * sign_conj(*v))
            .collect()
    };
    let g = Field::from_physical_values(grid, extremal);
    let p = conjugate_exponent(q);
    let norm = g.lp_norm(p)?;
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(g.scaled(Complex64::new(norm.recip(), 0.0)))
}

fn sign_conj(v: Complex64) -> Complex64 {
    let n = v.norm();
    if n == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        v.conj() / n
    }
}

/// Bilinear grid pairing `<g, f> = h^n sum g_j f_j`.
fn pairing(g: &Field, f: &Field) -> f64 {
    let dot: Complex64 = g
        .values()
        .iter()
        .zip(f.values())
        .map(|(a, b)| a * b)
        .sum();
    (dot * g.grid().cell_volume()).norm()
}

/// Relative duality gap `1 - best |<g, f>| / ||f||_q` over seeded unit-ball
/// samples of the conjugate exponent, optionally including the analytic
/// Hoelder extremizer. The sampled sup is a lower bound by construction, so
/// the gap lies in `[0, 1]`; with the extremizer it collapses to rounding.
pub fn duality_gap(f: &Field, q: f64, seeds: u32, include_extremizer: bool) -> Result<f64> {
    let norm_q = f.lp_norm(q)?;
    if norm_q == 0.0 {
        return Err(Error::ZeroField);
    }
    let p = conjugate_exponent(q);
    let mut best = 0.0f64;
    for seed in 0..seeds as u64 {
        let sample = unit_ball_sample(seed, p, f.grid(), 2.0)?;
        best = best.max(pairing(sample.field(), f));
    }
    if include_extremizer {
        let extremizer = holder_extremizer(f, q)?;
        best = best.max(pairing(&extremizer, f));
    }
    Ok((1.0 - best / norm_q).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollifier::{make_mollifier, MollifierKind};
    use std::f64::consts::PI;

    fn grid_default() -> Grid {
        Grid::new(1, 2048, 40.0).unwrap()
    }

    #[test]
    fn scale_indices_enforce_ordering() {
        assert!(ScaleIndices::new(0, 1, 3).is_ok());
        assert!(ScaleIndices::new(1, 1, 3).is_err());
        assert!(ScaleIndices::new(0, 2, 2).is_err());
        assert!(ScaleIndices::new(3, 2, 1).is_err());
    }

    #[test]
    fn unit_ball_samples_are_normalized_and_reproducible() {
        let g = grid_default();
        for &p in &[1.0, 2.0, f64::INFINITY] {
            let s = unit_ball_sample(7, p, g, 2.0).unwrap();
            assert!((s.norm_certificate() - 1.0).abs() <= 1e-12);
            assert!((s.field().lp_norm(p).unwrap() - 1.0).abs() <= 1e-12);
        }
        let a = unit_ball_sample(3, 2.0, g, 2.0).unwrap();
        let b = unit_ball_sample(3, 2.0, g, 2.0).unwrap();
        assert_eq!(a.field(), b.field());
        assert_eq!(a.seed(), 3);
        // p = inf: sup normalization
        let s = unit_ball_sample(5, f64::INFINITY, g, 2.0).unwrap();
        assert!((s.field().max_abs() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn witness_bounds_hold_across_index_triplets_and_scales() {
        // R = 32 needs h <= 1/128 for the bump support
        let g = Grid::new(1, 8192, 40.0).unwrap();
        for &r in &[2.0, 8.0, 32.0] {
            let moll = make_mollifier(MollifierKind::Bump, r, g).unwrap();
            for &(k, l, m) in &[(0, 1, 2), (0, 1, 3), (1, 2, 4)] {
                let idx = ScaleIndices::new(k, l, m).unwrap();
                for &p in &[1.0, 2.0, f64::INFINITY] {
                    for seed in 0..2 {
                        let sample = unit_ball_sample(seed, p, g, 2.0).unwrap();
                        let w = inclusion_witness(&sample, idx, &moll).unwrap();
                        assert!(w.additivity_error <= 1e-10, "additivity {}", w.additivity_error);
                        assert!(
                            w.bound1 <= w.epsilon * (1.0 + 1e-6),
                            "(k,l,m)=({k},{l},{m}) p={p} R={r} seed={seed}: {} > {}",
                            w.bound1,
                            w.epsilon
                        );
                        assert!(
                            w.bound2 <= w.c * (1.0 + 1e-6),
                            "(k,l,m)=({k},{l},{m}) p={p} R={r} seed={seed}: {} > {}",
                            w.bound2,
                            w.c
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn witness_constants_depend_only_on_index_differences() {
        let g = grid_default();
        let moll = make_mollifier(MollifierKind::Bump, 4.0, g).unwrap();
        let sample = unit_ball_sample(0, 2.0, g, 2.0).unwrap();
        let a = inclusion_witness(&sample, ScaleIndices::new(0, 1, 3).unwrap(), &moll).unwrap();
        let b = inclusion_witness(&sample, ScaleIndices::new(1, 2, 4).unwrap(), &moll).unwrap();
        assert!((a.epsilon - b.epsilon).abs() <= 1e-12 * a.epsilon);
        assert!((a.c - b.c).abs() <= 1e-12 * a.c);
    }

    #[test]
    fn witness_rejects_mismatched_grid() {
        let g = grid_default();
        let other = Grid::new(1, 1024, 40.0).unwrap();
        let moll = make_mollifier(MollifierKind::Bump, 4.0, other).unwrap();
        let sample = unit_ball_sample(0, 2.0, g, 2.0).unwrap();
        let idx = ScaleIndices::new(0, 1, 2).unwrap();
        assert!(matches!(
            inclusion_witness(&sample, idx, &moll),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn duality_gap_single_mode_self_duality() {
        let g = Grid::new(1, 64, 8.0 * PI).unwrap();
        let f = Field::from_complex_fn(g, |x| Complex64::new(0.0, x[0]).exp());
        let gap = duality_gap(&f, 2.0, 0, true).unwrap();
        assert!(gap <= 1e-12, "gap {gap}");
    }

    #[test]
    fn duality_gap_with_extremizer_is_tiny_for_all_exponents() {
        let g = grid_default();
        let f = random_band_limited(g, 13, 2.0).unwrap();
        for &q in &[1.0, 2.0, 4.0, f64::INFINITY] {
            let gap = duality_gap(&f, q, 2, true).unwrap();
            assert!(gap <= 1e-8, "q = {q}: gap {gap}");
        }
    }

    #[test]
    fn duality_gap_sampled_only_is_a_lower_bound() {
        let g = grid_default();
        let f = random_band_limited(g, 21, 2.0).unwrap();
        let gap = duality_gap(&f, 2.0, 25, false).unwrap();
        assert!((0.0..1.0).contains(&gap), "sampled-only gap {gap}");
        // more samples can only close the gap
        let gap_more = duality_gap(&f, 2.0, 50, false).unwrap();
        assert!(gap_more <= gap + 1e-15);
    }

    #[test]
    fn duality_gap_rejects_zero_field() {
        let g = grid_default();
        let zero = Field::constant(g, Complex64::new(0.0, 0.0));
        assert!(matches!(
            duality_gap(&zero, 2.0, 1, true),
            Err(Error::ZeroField)
        ));
    }
}
