//! Named smooth test functions plus seeded random band-limited fields.
//!
//! Every named function keeps at most `1e-12` of its sup norm outside
//! `[-T/4, T/4]^n` on the default period `T = 40`, so periodization error
//! stays below all verification tolerances; the catalog test enforces this.
//! Random fields are natively periodic and need no tail control.

use crate::error::{Error, Result};
use crate::grid::{random_band_limited, Field, Grid};

/// Named catalog functions, lexicographically ordered. All are defined for
/// dimensions 1 and 2 (radial or first-coordinate based).
pub const NAMED_FUNCTIONS: &[&str] = &[
    "bump5",
    "gaussian",
    "gaussian_pair",
    "hermite1",
    "hermite2",
    "modulated_cos",
    "modulated_sin",
    "narrow_gaussian",
    "quartic_gaussian",
    "ripple",
    "shifted_gaussian",
    "wide_gaussian",
];

fn radial_sq(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum()
}

fn shifted_sq(x: &[f64], delta: f64) -> f64 {
    x.iter()
        .enumerate()
        .map(|(axis, &c)| {
            let d = if axis == 0 { c - delta } else { c };
            d * d
        })
        .sum()
}

fn evaluate(name: &str, x: &[f64]) -> Option<f64> {
    let r_sq = radial_sq(x);
    let x1 = x[0];
    let value = match name {
        "bump5" => {
            let u = r_sq / 25.0;
            if u < 1.0 {
                (1.0 - 1.0 / (1.0 - u)).exp()
            } else {
                0.0
            }
        }
        "gaussian" => (-r_sq).exp(),
        "gaussian_pair" => (-shifted_sq(x, 3.0)).exp() + 0.5 * (-shifted_sq(x, -4.0)).exp(),
        "hermite1" => x1 * (-r_sq).exp(),
        "hermite2" => (2.0 * x1 * x1 - 1.0) * (-r_sq).exp(),
        "modulated_cos" => (3.0 * x1).cos() * (-r_sq).exp(),
        "modulated_sin" => (2.0 * x1).sin() * (-r_sq).exp(),
        "narrow_gaussian" => (-4.0 * r_sq).exp(),
        "quartic_gaussian" => x1.powi(4) * (-r_sq).exp(),
        "ripple" => (-0.5 * r_sq).exp() * (1.0 + 0.3 * (5.0 * x1).cos()),
        "shifted_gaussian" => (-shifted_sq(x, 2.0)).exp(),
        "wide_gaussian" => (-0.5 * r_sq).exp(),
        _ => return None,
    };
    Some(value)
}

/// Samples a named catalog function on a grid.
pub fn named_field(name: &str, grid: Grid) -> Result<Field> {
    if !NAMED_FUNCTIONS.contains(&name) {
        return Err(Error::InvalidParameter(format!(
            "unknown catalog function `{name}`"
        )));
    }
    Ok(Field::from_real_fn(grid, |x| {
        evaluate(name, x).expect("name validated above")
    }))
}

/// Zero-padded id of the i-th random catalog entry.
pub fn random_name(index: u32) -> String {
    format!("rand_{index:02}")
}

/// Which named functions a run includes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogSelection {
    All,
    None,
    Named(Vec<String>),
}

impl CatalogSelection {
    fn names(&self) -> Result<Vec<&str>> {
        match self {
            CatalogSelection::All => Ok(NAMED_FUNCTIONS.to_vec()),
            CatalogSelection::None => Ok(Vec::new()),
            CatalogSelection::Named(list) => {
                let mut out = Vec::with_capacity(list.len());
                for name in list {
                    if !NAMED_FUNCTIONS.contains(&name.as_str()) {
                        return Err(Error::InvalidParameter(format!(
                            "unknown catalog function `{name}`"
                        )));
                    }
                    out.push(name.as_str());
                }
                Ok(out)
            }
        }
    }
}

/// Builds the full test-function catalog: selected named functions plus
/// `random_count` seeded band-limited fields (seeds `base_seed + i`),
/// ordered lexicographically by id.
pub fn build_catalog(
    grid: Grid,
    selection: &CatalogSelection,
    random_count: u32,
    decay: f64,
    base_seed: u64,
) -> Result<Vec<(String, Field)>> {
    let mut out = Vec::new();
    for name in selection.names()? {
        out.push((name.to_owned(), named_field(name, grid)?));
    }
    for i in 0..random_count {
        out.push((
            random_name(i),
            random_band_limited(grid, base_seed.wrapping_add(i as u64), decay)?,
        ));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
