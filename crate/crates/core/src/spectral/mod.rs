//! Periodic grid, Fourier transforms, multipliers, dealiased products and
//! quadrature norms.

mod field;
mod grid;
mod oversample;

pub use field::{dealiased_mul, Field, Padded, SpectralField};
pub use grid::{make_grid, Grid};
pub use oversample::Oversampler;

use crate::error::{Error, Result};

pub fn forward(f: &Field) -> SpectralField {
    f.forward()
}

pub fn inverse(f: &SpectralField) -> Field {
    f.inverse()
}

/// `d/dx` as the multiplier `i xi`, Nyquist mode zeroed.
pub fn derivative(f: &Field) -> Field {
    f.forward().derivative().inverse()
}

/// `(1 - d_xx)^{-1}` as the multiplier `1 / (1 + xi^2)`.
pub fn helmholtz_inverse(f: &Field) -> Field {
    f.forward().helmholtz_inverse().inverse()
}

/// Pointwise product of 2 to 4 factors, folded left with a 3/2-padded
/// dealiased multiplication at every pairwise step.
pub fn product(fs: &[&Field]) -> Result<Field> {
    if !(2..=4).contains(&fs.len()) {
        return Err(Error::FactorCount(fs.len()));
    }
    let grid = fs[0].grid();
    for f in &fs[1..] {
        grid.ensure_same(f.grid())?;
    }
    let mut acc = fs[0].forward();
    for f in &fs[1..] {
        acc = dealiased_mul(&acc, &f.forward());
    }
    Ok(acc.inverse())
}

/// Rectangle-rule `L^p` norm `(h sum |f_j|^p)^{1/p}`; `p = inf` is the grid max.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Exponent(p));
    }
    Ok(lp_norm_unchecked(f.values(), f.grid().spacing(), p))
}

pub(crate) fn lp_norm_unchecked(values: &[f64], h: f64, p: f64) -> f64 {
    let max = values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()));
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| (v / max) * (v / max)).sum()
    } else {
        values.iter().map(|v| (v.abs() / max).powf(p)).sum()
    };
    max * (h * sum).powf(1.0 / p)
}
