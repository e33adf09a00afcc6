//! Independent numerical oracle for the integration tests: its own radix-2
//! FFT with per-stage twiddle tables, its own transform normalization, its
//! own mollifier sampling and Simpson quadrature. Shares no implementation
//! code with the library paths it checks.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Iterative radix-2 Cooley-Tukey, unnormalized; `inverse` flips the
/// exponent sign. Twiddles come from fresh `cos`/`sin` per stage, so there
/// is no accumulated rotation drift.
pub fn fft(values: &mut [Complex64], inverse: bool) {
    let n = values.len();
    assert!(n.is_power_of_two(), "oracle fft needs power-of-two input");
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2usize;
    while len <= n {
        let half = len / 2;
        let ang = sign * 2.0 * PI / len as f64;
        let twiddles: Vec<Complex64> = (0..half)
            .map(|i| {
                let phi = ang * i as f64;
                Complex64::new(phi.cos(), phi.sin())
            })
            .collect();
        for chunk in values.chunks_mut(len) {
            for i in 0..half {
                let u = chunk[i];
                let v = chunk[i + half] * twiddles[i];
                chunk[i] = u + v;
                chunk[i + half] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Sample coordinates `x_j = -T/2 + j T/N`.
pub fn points(n: usize, period: f64) -> Vec<f64> {
    let h = period / n as f64;
    (0..n).map(|j| -0.5 * period + j as f64 * h).collect()
}

/// Frequencies in storage order (`k = m` for `m < N/2`, else `m - N`).
pub fn frequencies(n: usize, period: f64) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let k = if m < n / 2 {
                m as i64
            } else {
                m as i64 - n as i64
            };
            2.0 * PI * k as f64 / period
        })
        .collect()
}

/// `h`-weighted approximation of the continuous Fourier transform at the
/// dual frequencies: `F_m = h (-1)^m sum_j f_j e^{-2 pi i j m / N}`.
pub fn forward(samples: &[f64], period: f64) -> Vec<Complex64> {
    let n = samples.len();
    let h = period / n as f64;
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf, false);
    for (m, v) in buf.iter_mut().enumerate() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *v *= h * sign;
    }
    buf
}

/// Exact discrete inverse of [`forward`].
pub fn inverse(spectrum: &[Complex64], period: f64) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = spectrum
        .iter()
        .enumerate()
        .map(|(m, v)| if m % 2 == 0 { *v } else { -*v })
        .collect();
    fft(&mut buf, true);
    for v in buf.iter_mut() {
        *v /= period;
    }
    buf
}

/// Discrete `L^1` quadrature `h * sum |f_j|`.
pub fn l1(values: &[Complex64], period: f64) -> f64 {
    let h = period / values.len() as f64;
    values.iter().map(|v| v.norm()).sum::<f64>() * h
}

/// Unnormalized bump profile `exp(-1/(1-u^2))` on `|u| < 1`.
pub fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// Samples the rescaled bump `phi_R` on the grid and renormalizes its
/// discrete mass to 1 (the profile constant cancels).
pub fn bump_mollifier(r: f64, n: usize, period: f64) -> Vec<f64> {
    let h = period / n as f64;
    let xs = points(n, period);
    let mut phi: Vec<f64> = xs.iter().map(|&x| r * bump(r * x)).collect();
    let mass: f64 = phi.iter().sum::<f64>() * h;
    for v in phi.iter_mut() {
        *v /= mass;
    }
    phi
}

/// Recomputes the trade-off constants `(eps, C)` for orders `(s, t)` and a
/// bump mollifier of scale `r` on an `n`-point grid of period `T`.
pub fn tradeoff_constants(s: f64, t: f64, r: f64, n: usize, period: f64) -> (f64, f64) {
    let phi = bump_mollifier(r, n, period);
    let hat = forward(&phi, period);
    let xi = frequencies(n, period);
    let eps_kernel: Vec<Complex64> = hat
        .iter()
        .zip(&xi)
        .map(|(h_val, &f)| {
            (Complex64::new(1.0, 0.0) - h_val) * (1.0 + f * f).powf(-0.5 * (t - s))
        })
        .collect();
    let c_kernel: Vec<Complex64> = hat
        .iter()
        .zip(&xi)
        .map(|(h_val, &f)| h_val * (1.0 + f * f).powf(0.5 * s))
        .collect();
    (
        l1(&inverse(&eps_kernel, period), period),
        l1(&inverse(&c_kernel, period), period),
    )
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 2 && panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}
