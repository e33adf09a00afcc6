//! Thin wrapper around `rustfft` with a per-thread plan cache.
//!
//! Everything here works on raw unnormalized DFTs; the quadrature weights and
//! centering phases that turn a DFT into an approximation of the continuous
//! Fourier integral live in [`crate::grid`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanCache = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(HashMap::new());
}

fn with_plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry((len, inverse))
            .or_insert_with(|| {
                let direction = if inverse {
                    FftDirection::Inverse
                } else {
                    FftDirection::Forward
                };
                FftPlanner::new().plan_fft(len, direction)
            })
            .clone()
    })
}

/// Unnormalized 1-D DFT in place; `inverse` flips the exponent sign.
pub(crate) fn dft_1d(values: &mut [Complex64], inverse: bool) {
    let plan = with_plan(values.len(), inverse);
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(values, &mut scratch);
}

/// Unnormalized 2-D DFT on a row-major `n x n` array in place.
pub(crate) fn dft_2d(values: &mut [Complex64], n: usize, inverse: bool) {
    debug_assert_eq!(values.len(), n * n);
    let plan = with_plan(n, inverse);
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
    for row in values.chunks_exact_mut(n) {
        plan.process_with_scratch(row, &mut scratch);
    }
    transpose(values, n);
    for row in values.chunks_exact_mut(n) {
        plan.process_with_scratch(row, &mut scratch);
    }
    transpose(values, n);
}

fn transpose(values: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            values.swap(i * n + j, j * n + i);
        }
    }
}
