//! Bessel-potential spectral operators on truncated periodic grids, and a
//! constructive verifier for the seminorm interpolation inequality
//! `||J_{-s} phi||_q <= eps ||J_{-t} phi||_q + C ||phi||_q` (0 < s < t) with
//! the explicit mollifier-built constants
//! `eps = ||(delta - phi_R) * L_{t-s}||_1` and `C = ||L_{-s} * phi_R||_1`.
//!
//! The crate models functions on `R^n` (n = 1, 2) by complex samples on a
//! periodic grid, realizes the Bessel potentials `J_z f = L_z * f` as the
//! spectral multipliers `(1 + |xi|^2)^{-z/2}`, and certifies every bound by
//! discrete Young's inequality, which is exact for the grid convolution.

pub mod bessel;
pub mod catalog;
pub mod config;
pub mod error;
mod fft;
pub mod grid;
pub mod mollifier;
pub mod quasinorm;
pub mod report;
pub mod selftest;
pub mod suites;
pub mod wong;

pub use error::{Error, Result};
pub use grid::{apply_multiplier, random_band_limited, Field, Grid, Representation};
