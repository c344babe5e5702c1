//! Dyadic Littlewood-Paley blocks as Fourier multipliers on the grid and the
//! nonhomogeneous Besov norms built from them.

use crate::cutoff::plateau;
use crate::error::{Error, Result};
use crate::spectral::{dealiased_mul, lp_norm, Field, Grid, Oversampler, SpectralField};

/// `chi = 1` on `|xi| <= 3/4`.
pub const CHI_INNER: f64 = 0.75;
/// `supp chi` lies in `|xi| <= 4/3`.
pub const CHI_OUTER: f64 = 4.0 / 3.0;

/// Low-frequency cutoff `chi`.
pub fn chi(xi: f64) -> f64 {
    plateau(xi, CHI_INNER, CHI_OUTER)
}

/// Annulus function `phi_ann(xi) = chi(xi / 2) - chi(xi)`, supported in
/// `3/4 <= |xi| <= 8/3`.
pub fn annulus(xi: f64) -> f64 {
    chi(0.5 * xi) - chi(xi)
}

/// Sampled dyadic cutoffs for one grid.
#[derive(Clone, Debug)]
pub struct LPFamily {
    grid: Grid,
    chi: Vec<f64>,
    annuli: Vec<Vec<f64>>,
    j_max: i32,
    /// Finer quadrature for block norms with `p != 2`; `None` uses the grid.
    oversampler: Option<Oversampler>,
}

/// Parameters `(s, p, r)` of `B^s_{p,r}`; `f64::INFINITY` encodes `inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        for e in [p, r] {
            if e.is_nan() || e < 1.0 {
                return Err(Error::Exponent(e));
            }
        }
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("regularity index {s}")));
        }
        Ok(Self { s, p, r })
    }

    /// `B^s_{p,inf}`.
    pub fn sup(s: f64, p: f64) -> Result<Self> {
        Self::new(s, p, f64::INFINITY)
    }

    pub fn with_s(self, s: f64) -> Self {
        Self { s, ..self }
    }
}

impl LPFamily {
    pub fn new(grid: &Grid) -> Self {
        let nyq = grid.nyquist();
        // smallest j with (3/4) 2^{j+1} > Nyquist; higher annuli miss the lattice
        let mut j_max = 0;
        while CHI_INNER * f64::powi(2.0, j_max + 1) <= nyq {
            j_max += 1;
        }
        let dxi = grid.xi_spacing();
        let xis: Vec<f64> = (0..grid.spectrum_len()).map(|m| dxi * m as f64).collect();
        let chi_table: Vec<f64> = xis.iter().map(|&xi| chi(xi)).collect();
        let annuli = (0..=j_max)
            .map(|j| {
                let scale = f64::powi(2.0, -j);
                xis.iter()
                    .map(|&xi| chi(0.5 * scale * xi) - chi(scale * xi))
                    .collect()
            })
            .collect();
        Self { grid: grid.clone(), chi: chi_table, annuli, j_max, oversampler: None }
    }

    /// Evaluates block norms with `p != 2` on a `factor`-times finer grid
    /// (`factor = 1` restores the plain rectangle rule).
    pub fn with_oversampling(mut self, factor: usize) -> Result<Self> {
        self.oversampler =
            if factor == 1 { None } else { Some(Oversampler::new(&self.grid, factor)?) };
        Ok(self)
    }

    pub fn oversampling(&self) -> usize {
        self.oversampler.as_ref().map_or(1, Oversampler::factor)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `||g||_{L^p}` with the family's quadrature.
    pub fn norm(&self, g: &SpectralField, p: f64) -> Result<f64> {
        match &self.oversampler {
            Some(os) if p != 2.0 => os.lp_norm(g, p),
            _ => lp_norm(&g.inverse(), p),
        }
    }

    /// Largest block index with support on the lattice.
    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Block indices `-1..=j_max`.
    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        -1..=self.j_max
    }

    /// Sampled multiplier of block `j` at `m = 0..=N/2`, or `None` when the
    /// block vanishes identically on the grid.
    pub fn multiplier(&self, j: i32) -> Option<&[f64]> {
        match j {
            -1 => Some(&self.chi),
            j if j >= 0 && j <= self.j_max => Some(&self.annuli[j as usize]),
            _ => None,
        }
    }

    /// `max_m |chi + sum_j phi_ann(j) - 1|` over the whole lattice.
    pub fn partition_defect(&self) -> f64 {
        (0..self.chi.len())
            .map(|m| {
                let total: f64 = self.chi[m] + self.annuli.iter().map(|a| a[m]).sum::<f64>();
                (total - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn block_spectral(&self, f: &SpectralField, j: i32) -> SpectralField {
        match self.multiplier(j) {
            Some(table) => f.apply_table(table),
            None => SpectralField::zeros(f.grid()),
        }
    }

    /// `L^p` norms of every block `j = -1..=j_max`, in that order.
    pub fn block_norms(&self, f: &SpectralField, p: f64) -> Result<Vec<f64>> {
        self.indices()
            .map(|j| self.norm(&self.block_spectral(f, j), p))
            .collect()
    }

    /// `2^{sj} ||Delta_j f||_{L^p}` for `j = -1..=j_max`.
    pub fn weighted_block_norms(&self, f: &SpectralField, s: f64, p: f64) -> Result<Vec<f64>> {
        Ok(self
            .block_norms(f, p)?
            .into_iter()
            .zip(self.indices())
            .map(|(norm, j)| f64::powf(2.0, s * f64::from(j)) * norm)
            .collect())
    }

    pub fn besov_norm_spectral(&self, f: &SpectralField, bp: BesovParams) -> Result<f64> {
        let terms = self.weighted_block_norms(f, bp.s, bp.p)?;
        Ok(aggregate(&terms, bp.r))
    }
}

/// `l^r` aggregation of the weighted block norms.
pub fn aggregate(terms: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        terms.iter().copied().fold(0.0, f64::max)
    } else {
        terms.iter().map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

pub fn make_lp_family(grid: &Grid) -> LPFamily {
    LPFamily::new(grid)
}

/// `Delta_j f`: zero for `j <= -2`, `chi(D) f` for `j = -1`,
/// `phi_ann(2^{-j} D) f` for `j >= 0`.
pub fn block(f: &Field, j: i32, fam: &LPFamily) -> Result<Field> {
    f.grid().ensure_same(fam.grid())?;
    Ok(fam.block_spectral(&f.forward(), j).inverse())
}

pub fn besov_norm(f: &Field, bp: BesovParams, fam: &LPFamily) -> Result<f64> {
    f.grid().ensure_same(fam.grid())?;
    fam.besov_norm_spectral(&f.forward(), bp)
}

/// `[Delta_j, v] d_x f = Delta_j(v d_x f) - v Delta_j d_x f`, dealiased.
pub fn commutator(v: &Field, f: &Field, j: i32, fam: &LPFamily) -> Result<Field> {
    v.grid().ensure_same(f.grid())?;
    v.grid().ensure_same(fam.grid())?;
    Ok(commutator_spectral(&v.forward(), &f.forward(), j, fam).inverse())
}

pub fn commutator_spectral(
    v: &SpectralField,
    f: &SpectralField,
    j: i32,
    fam: &LPFamily,
) -> SpectralField {
    let fx = f.derivative();
    let outer = fam.block_spectral(&dealiased_mul(v, &fx), j);
    let inner = dealiased_mul(v, &fam.block_spectral(&fx, j));
    &outer - &inner
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, product};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn band_limited(grid: &Grid, xi_cap: f64, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dxi = grid.xi_spacing();
        let half = (0..grid.spectrum_len())
            .map(|m| {
                if dxi * m as f64 <= xi_cap {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        SpectralField::from_half(grid, half).unwrap().inverse()
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.75), 1.0);
        assert_eq!(chi(2.0), 0.0);
        assert_eq!(chi(-2.0), 0.0);
        // chi(xi/2) = 1 and chi(xi) = 0 on [4/3, 3/2]
        for i in 0..=20 {
            let xi = 4.0 / 3.0 + f64::from(i) / 20.0 * (1.5 - 4.0 / 3.0);
            assert_eq!(annulus(xi), 1.0);
        }
        assert_eq!(annulus(0.7), 0.0);
        assert_eq!(annulus(2.7), 0.0);
        for i in 0..=400 {
            let xi = f64::from(i) / 100.0;
            let a = annulus(xi);
            assert!((0.0..=1.0).contains(&a));
            assert!((0.0..=1.0).contains(&chi(xi)));
        }
    }

    #[test]
    fn partition_of_unity_on_lattice() {
        for (n, m) in [(64, 1), (1 << 12, 16), (1 << 10, 3)] {
            let g = make_grid(n, m).unwrap();
            let fam = make_lp_family(&g);
            assert!(fam.partition_defect() <= 1e-12);
            // the next annulus would start above Nyquist
            assert!(CHI_INNER * f64::powi(2.0, fam.j_max() + 1) > g.nyquist());
            assert!(CHI_INNER * f64::powi(2.0, fam.j_max()) <= g.nyquist());
        }
    }

    #[test]
    fn blocks_of_constant() {
        let g = make_grid(256, 2).unwrap();
        let fam = make_lp_family(&g);
        let c = Field::constant(&g, 2.0);
        assert!(block(&c, -1, &fam).unwrap().max_diff(&c) < 1e-14);
        assert!(block(&c, -2, &fam).unwrap().max_abs() == 0.0);
        assert!(block(&c, -7, &fam).unwrap().max_abs() == 0.0);
        for j in 0..=fam.j_max() + 2 {
            assert!(block(&c, j, &fam).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn reconstruction_and_near_orthogonality() {
        let g = make_grid(1 << 10, 4).unwrap();
        let fam = make_lp_family(&g);
        let cap = CHI_INNER * f64::powi(2.0, fam.j_max());
        let f = band_limited(&g, cap, 9);
        let mut sum = Field::zeros(&g);
        for j in fam.indices() {
            sum = &sum + &block(&f, j, &fam).unwrap();
        }
        assert!(sum.max_diff(&f) <= 1e-10 * f.max_abs());

        for j in fam.indices() {
            let bj = block(&f, j, &fam).unwrap();
            for jp in fam.indices() {
                if (j - jp).abs() >= 2 {
                    assert!(block(&bj, jp, &fam).unwrap().max_abs() <= 1e-12 * f.max_abs());
                }
            }
        }
    }

    #[test]
    fn idempotent_on_plateau_band() {
        let g = make_grid(1 << 10, 4).unwrap();
        let fam = make_lp_family(&g);
        let j = 3;
        // phi_ann(2^-3 xi) = 1 on [32/3, 12]
        let dxi = g.xi_spacing();
        let half = (0..g.spectrum_len())
            .map(|m| {
                let xi = dxi * m as f64;
                if (32.0 / 3.0..=12.0).contains(&xi) {
                    Complex64::new(1.0 / (1.0 + m as f64), 0.3)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let f = SpectralField::from_half(&g, half).unwrap().inverse();
        assert!(f.max_abs() > 0.0);
        assert!(block(&f, j, &fam).unwrap().max_diff(&f) <= 1e-10 * f.max_abs());
    }

    #[test]
    fn besov_norm_of_zero_and_monotone_in_s() {
        let g = make_grid(512, 2).unwrap();
        let fam = make_lp_family(&g);
        let bp = BesovParams::sup(1.5, 2.0).unwrap();
        assert_eq!(besov_norm(&Field::zeros(&g), bp, &fam).unwrap(), 0.0);
        let f = band_limited(&g, 100.0, 1);
        let hi = fam.weighted_block_norms(&f.forward(), 1.5, 2.0).unwrap();
        let lo = fam.weighted_block_norms(&f.forward(), 1.2, 2.0).unwrap();
        // index 0 is j = -1, where the weights reverse
        for (a, b) in hi.iter().zip(&lo).skip(1) {
            assert!(a >= b);
        }
        let sup_hi = besov_norm(&f, bp, &fam).unwrap();
        assert!(sup_hi >= lo[1..].iter().copied().fold(0.0, f64::max));
    }

    #[test]
    fn besov_zero_two_two_comparable_to_l2() {
        let g = make_grid(1 << 10, 4).unwrap();
        let fam = make_lp_family(&g);
        let bp = BesovParams::new(0.0, 2.0, 2.0).unwrap();
        for seed in 0..20 {
            let f = band_limited(&g, 0.7 * g.nyquist(), seed);
            let ratio = besov_norm(&f, bp, &fam).unwrap() / lp_norm(&f, 2.0).unwrap();
            assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(BesovParams::new(1.0, 0.5, 2.0).is_err());
        assert!(BesovParams::new(1.0, 2.0, 0.0).is_err());
        assert!(BesovParams::new(f64::NAN, 2.0, 2.0).is_err());
    }

    #[test]
    fn commutator_with_constant_vanishes() {
        let g = make_grid(512, 2).unwrap();
        let fam = make_lp_family(&g);
        let f = band_limited(&g, 60.0, 4);
        let v = Field::constant(&g, 3.0);
        for j in -1..5 {
            assert!(commutator(&v, &f, j, &fam).unwrap().max_abs() < 1e-11 * f.max_abs());
        }
    }

    #[test]
    fn commutator_matches_termwise_evaluation() {
        let g = make_grid(512, 2).unwrap();
        let fam = make_lp_family(&g);
        let f = band_limited(&g, 60.0, 4);
        let v = band_limited(&g, 20.0, 5);
        let fx = crate::spectral::derivative(&f);
        for j in [-1, 2, 4] {
            let direct = commutator(&v, &f, j, &fam).unwrap();
            let first = block(&product(&[&v, &fx]).unwrap(), j, &fam).unwrap();
            let second = product(&[&v, &block(&fx, j, &fam).unwrap()]).unwrap();
            let termwise = &first - &second;
            assert!(direct.max_diff(&termwise) <= 1e-12 * (1.0 + first.max_abs()));
        }
    }
}
