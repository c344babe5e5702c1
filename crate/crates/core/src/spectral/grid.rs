use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L, L)` with `L = 12 pi M / 17`.
///
/// The odd-looking half-period puts every carrier `(17/12) 2^n` with
/// `2^n M` an integer exactly on the discrete frequency lattice
/// `xi_m = pi m / L = 17 m / (12 M)`.
///
/// Cloning is cheap: the FFT plans are shared behind an `Arc`.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    multiple: u32,
    half_period: f64,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    pad_r2c: Arc<dyn RealToComplex<f64>>,
    pad_c2r: Arc<dyn ComplexToReal<f64>>,
}

impl Grid {
    /// Builds the grid with `n` points and half-period `12 pi M / 17`.
    pub fn new(n: usize, multiple: i64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        if multiple <= 0 || multiple > i64::from(u32::MAX) {
            return Err(Error::DomainMultiple(multiple));
        }
        let multiple = multiple as u32;
        let half_period = 12.0 * PI * f64::from(multiple) / 17.0;
        let padded = 3 * n / 2;
        let mut planner = RealFftPlanner::<f64>::new();
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                multiple,
                half_period,
                r2c: planner.plan_fft_forward(n),
                c2r: planner.plan_fft_inverse(n),
                pad_r2c: planner.plan_fft_forward(padded),
                pad_c2r: planner.plan_fft_inverse(padded),
            }),
        })
    }

    /// Number of sample points `N`.
    pub fn len(&self) -> usize {
        self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The integer `M` in `L = 12 pi M / 17`.
    pub fn multiple(&self) -> u32 {
        self.inner.multiple
    }

    /// Half-period `L`; the domain is `[-L, L)`.
    pub fn half_period(&self) -> f64 {
        self.inner.half_period
    }

    /// Sample spacing `h = 2L / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.inner.half_period / self.inner.n as f64
    }

    /// Frequency lattice spacing `pi / L`.
    pub fn xi_spacing(&self) -> f64 {
        PI / self.inner.half_period
    }

    /// `|xi_{-N/2}|`, the largest magnitude on the frequency lattice.
    pub fn nyquist(&self) -> f64 {
        self.xi_spacing() * (self.inner.n / 2) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.inner.half_period + j as f64 * self.spacing()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.inner.n).map(|j| self.x(j)).collect()
    }

    /// Frequency of mode index `m`, `m` in `-N/2..N/2`.
    pub fn xi(&self, m: i64) -> f64 {
        self.xi_spacing() * m as f64
    }

    /// Lattice index of an exact grid frequency `(17/12) 2^n`, i.e. `2^n M`.
    pub fn carrier_index(&self, n: u32) -> u64 {
        (1u64 << n) * u64::from(self.inner.multiple)
    }

    /// Number of stored half-spectrum coefficients, `N/2 + 1`.
    pub fn spectrum_len(&self) -> usize {
        self.inner.n / 2 + 1
    }

    /// Size of the zero-padded grid used by dealiased products.
    pub fn padded_len(&self) -> usize {
        3 * self.inner.n / 2
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self == other
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Unnormalized real-to-complex transform of `input` (length `N`, or the
    /// padded length when `padded`). The input buffer is clobbered.
    pub(crate) fn r2c(&self, input: &mut [f64], padded: bool) -> Vec<Complex64> {
        let plan = if padded { &self.inner.pad_r2c } else { &self.inner.r2c };
        let mut out = plan.make_output_vec();
        let mut scratch = plan.make_scratch_vec();
        plan.process_with_scratch(input, &mut out, &mut scratch)
            .expect("buffer lengths match the plan");
        out
    }

    /// Unnormalized complex-to-real transform. DC and the last bin must be real;
    /// their imaginary parts are discarded.
    pub(crate) fn c2r(&self, input: &mut [Complex64], padded: bool) -> Vec<f64> {
        let plan = if padded { &self.inner.pad_c2r } else { &self.inner.c2r };
        input[0].im = 0.0;
        let last = input.len() - 1;
        input[last].im = 0.0;
        let mut out = plan.make_output_vec();
        let mut scratch = plan.make_scratch_vec();
        plan.process_with_scratch(input, &mut out, &mut scratch)
            .expect("buffer lengths match the plan");
        out
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n && self.inner.multiple == other.inner.multiple
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("multiple", &self.inner.multiple)
            .field("half_period", &self.inner.half_period)
            .finish()
    }
}

/// Convenience constructor mirroring [`Grid::new`].
pub fn make_grid(n: usize, multiple: i64) -> Result<Grid> {
    Grid::new(n, multiple)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_of_smallest_grid() {
        let g = make_grid(16, 1).unwrap();
        let l = 12.0 * PI / 17.0;
        assert!((g.half_period() - l).abs() < 1e-15);
        assert!((g.x(0) + l).abs() < 1e-15);
        assert!((g.spacing() - 2.0 * l / 16.0).abs() < 1e-15);
        // pi / (12 pi / 17) = 17 / 12, so the n = 0 carrier is lattice index 1
        assert!((g.xi_spacing() - 17.0 / 12.0).abs() < 1e-14);
        assert!((g.xi(1) - 17.0 / 12.0).abs() < 1e-14);
        assert_eq!(g.carrier_index(0), 1);
    }

    #[test]
    fn carriers_land_on_lattice() {
        let g = make_grid(1 << 12, 8).unwrap();
        for n in 0..8 {
            let idx = g.carrier_index(n) as i64;
            let carrier = 17.0 / 12.0 * f64::from(1u32 << n);
            assert!((g.xi(idx) - carrier).abs() < 1e-12 * carrier);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(make_grid(15, 1).unwrap_err(), Error::GridSize(15));
        assert_eq!(make_grid(8, 1).unwrap_err(), Error::GridSize(8));
        assert_eq!(make_grid(24, 1).unwrap_err(), Error::GridSize(24));
        assert_eq!(make_grid(16, 0).unwrap_err(), Error::DomainMultiple(0));
        assert_eq!(make_grid(16, -3).unwrap_err(), Error::DomainMultiple(-3));
    }

    #[test]
    fn zero_sits_on_the_grid() {
        let g = make_grid(64, 2).unwrap();
        assert!(g.x(32).abs() < 1e-14);
    }
}
