use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples `u(x_j)` on a [`Grid`].
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

/// Fourier coefficients of a real field, `u(x) = sum_m c_m exp(i xi_m x)`.
///
/// Only `m = 0..=N/2` is stored; negative modes follow from Hermitian
/// symmetry `c_{-m} = conj(c_m)`, so the symmetry holds exactly. Index `N/2`
/// is the unpaired Nyquist mode `m = -N/2`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

/// Physical samples on the 3/2-padded grid, the intermediate of a dealiased
/// product.
#[derive(Clone, Debug)]
pub struct Padded {
    grid: Grid,
    values: Vec<f64>,
}

#[inline]
fn alternate(m: usize) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Field {
    /// Wraps samples, rejecting a length mismatch or non-finite values.
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite sample {v}")));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub(crate) fn from_raw(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid: grid.clone(), values }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        Self::from_raw(grid, values)
    }

    /// Samples `f(j)` at every grid index `j`.
    pub fn from_fn_indexed(grid: &Grid, f: impl Fn(usize) -> f64) -> Self {
        Self::from_raw(grid, (0..grid.len()).map(f).collect())
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self::from_raw(grid, vec![c; grid.len()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Value at the grid point `x = 0` (index `N/2`).
    pub fn at_origin(&self) -> f64 {
        self.values[self.grid.len() / 2]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Field) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x + a * y)
            .collect();
        Ok(Self::from_raw(&self.grid, values))
    }

    /// Max-norm distance to `other`.
    pub fn max_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc: f64, (a, b)| acc.max((a - b).abs()))
    }

    /// Largest `|u(x) - u(-x)|` over the grid (the point `-L` maps to itself).
    pub fn even_defect(&self) -> f64 {
        let n = self.values.len();
        (1..n).fold(0.0, |acc: f64, j| acc.max((self.values[j] - self.values[n - j]).abs()))
    }

    /// Largest `|u(x) + u(-x)|` over the grid.
    pub fn odd_defect(&self) -> f64 {
        let n = self.values.len();
        let interior = (1..n).fold(0.0, |acc: f64, j| {
            acc.max((self.values[j] + self.values[n - j]).abs())
        });
        interior.max(self.values[0].abs())
    }

    pub fn forward(&self) -> SpectralField {
        let n = self.grid.len();
        let mut buf = self.values.clone();
        let mut coeffs = self.grid.r2c(&mut buf, false);
        let scale = 1.0 / n as f64;
        for (m, c) in coeffs.iter_mut().enumerate() {
            *c *= alternate(m) * scale;
        }
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    pub fn padded(&self) -> Padded {
        self.forward().padded()
    }
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), coeffs: vec![Complex64::new(0.0, 0.0); grid.spectrum_len()] }
    }

    /// Builds a real field's spectrum from its non-negative half `c_0..=c_{N/2}`.
    /// Imaginary parts of `c_0` and of the Nyquist entry are dropped.
    pub fn from_half(grid: &Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.spectrum_len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.spectrum_len(),
                coeffs.len()
            )));
        }
        coeffs[0].im = 0.0;
        let last = coeffs.len() - 1;
        coeffs[last].im = 0.0;
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Stored half spectrum, index `m = 0..=N/2`.
    pub fn half(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient for any `m` in `-N/2..N/2`.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let half = (self.grid.len() / 2) as i64;
        assert!((-half..half).contains(&m), "mode {m} outside the lattice");
        if m >= 0 {
            self.coeffs[m as usize]
        } else if m == -half {
            self.coeffs[half as usize]
        } else {
            self.coeffs[(-m) as usize].conj()
        }
    }

    /// All `N` coefficients in the order `m = -N/2, ..., N/2 - 1`.
    pub fn to_full(&self) -> Vec<Complex64> {
        let half = (self.grid.len() / 2) as i64;
        (-half..half).map(|m| self.coeff(m)).collect()
    }

    pub fn inverse(&self) -> Field {
        let mut buf: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * alternate(m))
            .collect();
        let values = self.grid.c2r(&mut buf, false);
        Field::from_raw(&self.grid, values)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Applies an even real multiplier `symbol(xi_m)` to every mode.
    pub fn apply_even(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let dxi = self.grid.xi_spacing();
        let coeffs =
            self.coeffs.iter().enumerate().map(|(m, c)| c * symbol(dxi * m as f64)).collect();
        Self { grid: self.grid.clone(), coeffs }
    }

    /// Applies a precomputed even multiplier sampled at `m = 0..=N/2`.
    pub fn apply_table(&self, table: &[f64]) -> Self {
        debug_assert_eq!(table.len(), self.coeffs.len());
        let coeffs = self.coeffs.iter().zip(table).map(|(c, w)| c * w).collect();
        Self { grid: self.grid.clone(), coeffs }
    }

    /// Spectral derivative `i xi_m c_m`; the unpaired Nyquist mode is zeroed.
    pub fn derivative(&self) -> Self {
        let dxi = self.grid.xi_spacing();
        let last = self.coeffs.len() - 1;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| {
                if m == last {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, dxi * m as f64)
                }
            })
            .collect();
        Self { grid: self.grid.clone(), coeffs }
    }

    /// `(1 - d_xx)^{-1}`, multiplier `1 / (1 + xi^2)`.
    pub fn helmholtz_inverse(&self) -> Self {
        self.apply_even(|xi| 1.0 / (1.0 + xi * xi))
    }

    /// `(1 - d_xx)`, multiplier `1 + xi^2`.
    pub fn helmholtz(&self) -> Self {
        self.apply_even(|xi| 1.0 + xi * xi)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { grid: self.grid.clone(), coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// `self + a * other`. Both operands must share a grid.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Self {
        debug_assert!(self.grid.same_as(&other.grid));
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y * a).collect();
        Self { grid: self.grid.clone(), coeffs }
    }

    /// Squared quadrature `L^2` norm via Parseval: `2L sum_m |c_m|^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        let last = self.coeffs.len() - 1;
        let inner: f64 = self.coeffs[1..last].iter().map(|c| c.norm_sqr()).sum();
        let total = self.coeffs[0].norm_sqr() + 2.0 * inner + self.coeffs[last].norm_sqr();
        2.0 * self.grid.half_period() * total
    }

    /// Energy of the modes with `|xi| >= cutoff`, counted over both signs.
    pub fn energy_above(&self, cutoff: f64) -> f64 {
        let dxi = self.grid.xi_spacing();
        let last = self.coeffs.len() - 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| dxi * *m as f64 >= cutoff)
            .map(|(m, c)| if m == 0 || m == last { c.norm_sqr() } else { 2.0 * c.norm_sqr() })
            .sum()
    }

    /// Zero-pads to `3N/2` modes and returns the padded physical samples.
    /// The Nyquist mode is dropped so the padded samples stay real.
    pub fn padded(&self) -> Padded {
        let n = self.grid.len();
        let p = self.grid.padded_len();
        let mut buf = vec![Complex64::new(0.0, 0.0); p / 2 + 1];
        for m in 0..n / 2 {
            buf[m] = self.coeffs[m] * alternate(m);
        }
        let values = self.grid.c2r(&mut buf, true);
        Padded { grid: self.grid.clone(), values }
    }
}

impl Padded {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Pointwise product on the padded grid (not yet truncated).
    pub fn mul(&self, other: &Padded) -> Padded {
        debug_assert!(self.grid.same_as(&other.grid));
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Padded { grid: self.grid.clone(), values }
    }

    /// Transforms back and keeps the modes `|m| < N/2`.
    pub fn project(&self) -> SpectralField {
        let n = self.grid.len();
        let p = self.grid.padded_len();
        let mut buf = self.values.clone();
        let full = self.grid.r2c(&mut buf, true);
        let scale = 1.0 / p as f64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
        for m in 0..n / 2 {
            coeffs[m] = full[m] * (alternate(m) * scale);
        }
        SpectralField { grid: self.grid.clone(), coeffs }
    }
}

/// Dealiased product of two spectra (3/2 rule).
pub fn dealiased_mul(a: &SpectralField, b: &SpectralField) -> SpectralField {
    a.padded().mul(&b.padded()).project()
}

impl<'a> Add<&'a Field> for &'a Field {
    type Output = Field;
    fn add(self, rhs: &'a Field) -> Field {
        self.axpy(1.0, rhs).expect("fields on the same grid")
    }
}

impl<'a> Sub<&'a Field> for &'a Field {
    type Output = Field;
    fn sub(self, rhs: &'a Field) -> Field {
        self.axpy(-1.0, rhs).expect("fields on the same grid")
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, a: f64) -> Field {
        self.map(|v| a * v)
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.map(|v| -v)
    }
}

impl<'a> Add<&'a SpectralField> for &'a SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &'a SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl<'a> Sub<&'a SpectralField> for &'a SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &'a SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}
