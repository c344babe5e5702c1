use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner};

use super::field::SpectralField;
use super::grid::Grid;
use super::lp_norm_unchecked;
use crate::error::{Error, Result};

/// Evaluates a field's trigonometric interpolant on a `factor`-times finer
/// grid, for quadrature of `|f|^p` when `p != 2`.
///
/// On `N` points the rectangle rule integrates `|f|^4` exactly only for
/// spectra below `N/4`, and the grid max of a near-Nyquist block can miss the
/// peak; the finer samples remove both effects.
#[derive(Clone)]
pub struct Oversampler {
    grid: Grid,
    factor: usize,
    plan: Arc<dyn ComplexToReal<f64>>,
}

impl fmt::Debug for Oversampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oversampler").field("grid", &self.grid).field("factor", &self.factor).finish()
    }
}

impl Oversampler {
    pub fn new(grid: &Grid, factor: usize) -> Result<Self> {
        if factor == 0 || !factor.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "oversampling factor must be a power of two, got {factor}"
            )));
        }
        let plan = RealFftPlanner::<f64>::new().plan_fft_inverse(factor * grid.len());
        Ok(Self { grid: grid.clone(), factor, plan })
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    /// Samples at `x = -L + j (2L) / (factor N)`; every `factor`-th one is a
    /// grid value.
    pub fn samples(&self, f: &SpectralField) -> Vec<f64> {
        let n = self.grid.len();
        let fine = self.factor * n;
        let half = f.half();
        let mut buf = vec![Complex64::new(0.0, 0.0); fine / 2 + 1];
        for (m, c) in half.iter().enumerate().take(n / 2) {
            buf[m] = if m % 2 == 0 { *c } else { -c };
        }
        // the unpaired mode splits evenly between +-N/2 on the finer lattice
        let nyq = half[n / 2] * 0.5;
        let nyq = if (n / 2) % 2 == 0 { nyq } else { -nyq };
        if self.factor == 1 {
            buf[n / 2] = nyq * 2.0;
        } else {
            buf[n / 2] = nyq;
        }
        buf[0].im = 0.0;
        let last = buf.len() - 1;
        buf[last].im = 0.0;
        let mut out = self.plan.make_output_vec();
        let mut scratch = self.plan.make_scratch_vec();
        self.plan
            .process_with_scratch(&mut buf, &mut out, &mut scratch)
            .expect("buffer lengths match the plan");
        out
    }

    /// Rectangle-rule `L^p` norm on the finer samples.
    pub fn lp_norm(&self, f: &SpectralField, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Exponent(p));
        }
        let h = self.grid.spacing() / self.factor as f64;
        Ok(lp_norm_unchecked(&self.samples(f), h, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lp_norm, make_grid, Field};

    #[test]
    fn coarse_samples_are_the_grid_values() {
        let g = make_grid(64, 1).unwrap();
        let f = Field::from_fn(&g, |x| (x.sin() * 2.0).exp() + (g.xi(32) * x).cos());
        let hat = f.forward();
        for factor in [1, 2, 4] {
            let fine = Oversampler::new(&g, factor).unwrap().samples(&hat);
            for (j, v) in f.values().iter().enumerate() {
                assert!((fine[factor * j] - v).abs() < 1e-12, "factor {factor} j {j}");
            }
        }
    }

    #[test]
    fn fourth_power_of_a_high_cosine() {
        // cos^4 averages to 3/8; on N points the carrier at N/4 aliases
        let g = make_grid(64, 1).unwrap();
        let f = Field::from_fn(&g, |x| (g.xi(16) * x).cos());
        let exact = (0.375 * 2.0 * g.half_period()).powf(0.25);
        let coarse = lp_norm(&f, 4.0).unwrap();
        let fine = Oversampler::new(&g, 2).unwrap().lp_norm(&f.forward(), 4.0).unwrap();
        assert!((coarse - exact).abs() > 1e-3);
        assert!((fine - exact).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_factor() {
        let g = make_grid(64, 1).unwrap();
        assert!(Oversampler::new(&g, 3).is_err());
        assert!(Oversampler::new(&g, 0).is_err());
    }
}
