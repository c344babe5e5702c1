//! Right-hand sides of the generalized Camassa-Holm-Novikov equation in
//! nonlocal transport form,
//!
//! ```text
//! u_t = -u^k u_x + P(u) + Q(u),
//! P(u) = -d_x (1 - d_xx)^{-1} ((2k-1)/2 u^{k-1} u_x^2 + u^{k+1}),
//! Q(u) = -(k-1)/2 (1 - d_xx)^{-1} (u^{k-2} u_x^3),
//! ```
//!
//! the Degasperis-Procesi variant `u_t = -u u_x - 3/2 d_x (1 - d_xx)^{-1} u^2`,
//! and the residual of the momentum form `m_t + u^k m_x + b u^{k-1} u_x m = 0`.

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::spectral::{dealiased_mul, Field, Padded, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `b = k + 1`; `k = 1` is Camassa-Holm, `k = 2` Novikov.
    Gchn,
    /// Degasperis-Procesi, quadratic, `b = 3`.
    DegasperisProcesi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelParams {
    k: u32,
    variant: Variant,
}

impl ModelParams {
    pub fn gchn(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("nonlinearity order k must be >= 1".into()));
        }
        Ok(Self { k, variant: Variant::Gchn })
    }

    pub fn degasperis_procesi() -> Self {
        Self { k: 1, variant: Variant::DegasperisProcesi }
    }

    pub fn new(k: u32, variant: Variant) -> Result<Self> {
        match variant {
            Variant::Gchn => Self::gchn(k),
            Variant::DegasperisProcesi => Ok(Self::degasperis_procesi()),
        }
    }

    /// Nonlinearity order; always 1 for Degasperis-Procesi.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Stretching coefficient `b` of the momentum form.
    pub fn stretching(&self) -> f64 {
        match self.variant {
            Variant::Gchn => f64::from(self.k + 1),
            Variant::DegasperisProcesi => 3.0,
        }
    }
}

/// `u^k` by a left fold of dealiased pairwise products; `u^0 = 1`.
pub fn power_spectral(u: &SpectralField, k: u32) -> SpectralField {
    match k {
        0 => {
            let mut one = SpectralField::zeros(u.grid()).half().to_vec();
            one[0].re = 1.0;
            SpectralField::from_half(u.grid(), one).expect("length matches grid")
        }
        _ => {
            let pu = u.padded();
            let mut acc = u.clone();
            for _ in 1..k {
                acc = acc.padded().mul(&pu).project();
            }
            acc
        }
    }
}

pub fn power(u: &Field, k: u32) -> Field {
    power_spectral(&u.forward(), k).inverse()
}

/// Padded powers `u^1..=u^top`, sharing the fold with
/// [`power_spectral`].
struct Powers {
    padded: Vec<Padded>,
}

impl Powers {
    fn new(u: &SpectralField, top: u32) -> Self {
        let pu = u.padded();
        let mut padded = vec![pu.clone()];
        for _ in 1..top {
            let next = padded.last().expect("non-empty").mul(&pu).project();
            padded.push(next.padded());
        }
        Self { padded }
    }

    /// Padded `u^i`, `i >= 1`.
    fn pad(&self, i: u32) -> &Padded {
        &self.padded[i as usize - 1]
    }
}

struct Terms {
    transport: SpectralField,
    p: SpectralField,
    q: SpectralField,
}

fn gchn_terms(u: &SpectralField, k: u32) -> Terms {
    let ux = u.derivative();
    let pux = ux.padded();
    let powers = Powers::new(u, k);
    let uk = powers.pad(k);

    let transport = uk.mul(&pux).project();
    let u_k1 = uk.mul(powers.pad(1)).project();
    let ux2 = pux.mul(&pux).project();
    let weighted = if k == 1 { ux2.clone() } else { powers.pad(k - 1).mul(&ux2.padded()).project() };
    let inner = u_k1.axpy(0.5 * f64::from(2 * k - 1), &weighted);
    let p = inner.helmholtz_inverse().derivative().scale(-1.0);

    let q = if k == 1 {
        SpectralField::zeros(u.grid())
    } else {
        let ux3 = ux2.padded().mul(&pux).project();
        let cubic = if k == 2 { ux3 } else { powers.pad(k - 2).mul(&ux3.padded()).project() };
        cubic.helmholtz_inverse().scale(-0.5 * f64::from(k - 1))
    };
    Terms { transport, p, q }
}

pub fn p_term_spectral(u: &SpectralField, k: u32) -> SpectralField {
    gchn_terms(u, k.max(1)).p
}

pub fn q_term_spectral(u: &SpectralField, k: u32) -> SpectralField {
    if k <= 1 {
        return SpectralField::zeros(u.grid());
    }
    gchn_terms(u, k).q
}

/// `P(u)`.
pub fn p_term(u: &Field, k: u32) -> Field {
    p_term_spectral(&u.forward(), k).inverse()
}

/// `Q(u)`; identically zero for `k = 1`.
pub fn q_term(u: &Field, k: u32) -> Field {
    q_term_spectral(&u.forward(), k).inverse()
}

/// `P(u) + Q(u)`.
pub fn pq_spectral(u: &SpectralField, mp: &ModelParams) -> SpectralField {
    match mp.variant {
        Variant::Gchn => {
            let t = gchn_terms(u, mp.k);
            &t.p + &t.q
        }
        Variant::DegasperisProcesi => {
            dealiased_mul(u, u).helmholtz_inverse().derivative().scale(-1.5)
        }
    }
}

pub fn rhs_spectral(u: &SpectralField, mp: &ModelParams) -> SpectralField {
    match mp.variant {
        Variant::Gchn => {
            let t = gchn_terms(u, mp.k);
            (&t.p + &t.q).axpy(-1.0, &t.transport)
        }
        Variant::DegasperisProcesi => {
            let pu = u.padded();
            let transport = pu.mul(&u.derivative().padded()).project();
            let nonlocal = pu.mul(&pu).project().helmholtz_inverse().derivative().scale(-1.5);
            nonlocal.axpy(-1.0, &transport)
        }
    }
}

/// Time derivative `u_t` of the selected variant.
pub fn rhs(u: &Field, mp: &ModelParams) -> Field {
    rhs_spectral(&u.forward(), mp).inverse()
}

/// First-order coefficient `P(u0) + Q(u0) - u0^k d_x u0`, so that
/// `S_t(u0) = u0 + t v0 + O(t^2)`.
pub fn v0(u0: &Field, mp: &ModelParams) -> Field {
    rhs(u0, mp)
}

/// Relative `L^2` residual of `m_t + u^k m_x + b u^{k-1} u_x m` at a stored
/// trajectory sample, with `m = u - u_xx` and a three-point time derivative.
pub fn m_residual(traj: &Trajectory, index: usize, mp: &ModelParams) -> Result<f64> {
    let len = traj.len();
    if len < 3 || index == 0 || index + 1 >= len {
        return Err(Error::TrajectoryIndex { index, max: len.saturating_sub(2) });
    }
    let (t0, t1, t2) = (traj.times[index - 1], traj.times[index], traj.times[index + 1]);
    let m0 = traj.states[index - 1].forward().helmholtz();
    let u = traj.states[index].forward();
    let m1 = u.helmholtz();
    let m2 = traj.states[index + 1].forward().helmholtz();

    // derivative at t1 of the quadratic through the three samples
    let (h0, h1) = (t1 - t0, t2 - t1);
    let c0 = -h1 / (h0 * (h0 + h1));
    let c1 = (h1 - h0) / (h0 * h1);
    let c2 = h0 / (h1 * (h0 + h1));
    let m_t = m0.scale(c0).axpy(c1, &m1).axpy(c2, &m2);

    let k = mp.k;
    let ux = u.derivative();
    let powers = Powers::new(&u, k);
    let advect = powers.pad(k).mul(&m1.derivative().padded()).project();
    let slope = if k == 1 { ux } else { powers.pad(k - 1).mul(&ux.padded()).project() };
    let stretch = dealiased_mul(&slope, &m1);
    let residual = m_t.axpy(1.0, &advect).axpy(mp.stretching(), &stretch);

    let m_norm = m1.l2_norm_sq().sqrt();
    let r_norm = residual.l2_norm_sq().sqrt();
    Ok(if m_norm > 0.0 { r_norm / m_norm } else { r_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, product, Grid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // M = 17 makes the period 24 pi, so integer frequencies sit on the lattice
    fn unit_lattice() -> Grid {
        make_grid(256, 17).unwrap()
    }

    fn smooth_random(grid: &Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut half = vec![num_complex::Complex64::new(0.0, 0.0); grid.spectrum_len()];
        for (m, c) in half.iter_mut().enumerate().take(40) {
            let decay = (-(m as f64) / 8.0).exp();
            *c = num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay;
        }
        SpectralField::from_half(grid, half).unwrap().inverse()
    }

    #[test]
    fn p_term_of_cosine_for_camassa_holm() {
        let g = unit_lattice();
        let u = Field::from_fn(&g, f64::cos);
        let expect = Field::from_fn(&g, |x| 0.1 * (2.0 * x).sin());
        assert!(p_term(&u, 1).max_diff(&expect) < 1e-13);
    }

    #[test]
    fn q_term_of_sine_for_novikov() {
        let g = unit_lattice();
        let u = Field::from_fn(&g, f64::sin);
        let expect = Field::from_fn(&g, |x| -3.0 / 16.0 * x.cos() - (3.0 * x).cos() / 80.0);
        assert!(q_term(&u, 2).max_diff(&expect) < 1e-13);
    }

    #[test]
    fn q_term_vanishes_for_k_one() {
        let g = unit_lattice();
        let u = smooth_random(&g, 3);
        assert_eq!(q_term(&u, 1).max_abs(), 0.0);
    }

    #[test]
    fn zero_and_constant_inputs() {
        let g = unit_lattice();
        let zero = Field::zeros(&g);
        let c = Field::constant(&g, 0.7);
        for k in 1..=4 {
            assert_eq!(p_term(&zero, k).max_abs(), 0.0);
            let mp = ModelParams::gchn(k).unwrap();
            assert_eq!(rhs(&zero, &mp).max_abs(), 0.0);
            assert_eq!(v0(&zero, &mp).max_abs(), 0.0);
            assert!(p_term(&c, k).max_abs() < 1e-15);
            assert!(q_term(&c, k).max_abs() < 1e-15);
        }
    }

    #[test]
    fn rhs_on_cosine() {
        let g = unit_lattice();
        let u = Field::from_fn(&g, f64::cos);
        let ch = rhs(&u, &ModelParams::gchn(1).unwrap());
        assert!(ch.max_diff(&Field::from_fn(&g, |x| 0.6 * (2.0 * x).sin())) < 1e-13);
        let dp = rhs(&u, &ModelParams::degasperis_procesi());
        assert!(dp.max_diff(&Field::from_fn(&g, |x| 0.8 * (2.0 * x).sin())) < 1e-13);
    }

    #[test]
    fn v0_matches_rhs() {
        let g = unit_lattice();
        for k in 1..=3 {
            let mp = ModelParams::gchn(k).unwrap();
            let u = smooth_random(&g, u64::from(k));
            assert!(v0(&u, &mp).max_diff(&rhs(&u, &mp)) <= 1e-14);
        }
    }

    #[test]
    fn even_data_gives_odd_rhs() {
        let g = make_grid(512, 8).unwrap();
        let u = Field::from_fn(&g, |x| (-x * x / 4.0).exp() * (1.0 + 0.3 * (g.xi(8) * x).cos()));
        for mp in [
            ModelParams::gchn(1).unwrap(),
            ModelParams::gchn(2).unwrap(),
            ModelParams::gchn(3).unwrap(),
            ModelParams::degasperis_procesi(),
        ] {
            let r = rhs(&u, &mp);
            assert!(r.odd_defect() <= 1e-10 * (1.0 + r.max_abs()), "{mp:?}");
        }
    }

    #[test]
    fn power_agrees_with_product() {
        let g = unit_lattice();
        let u = smooth_random(&g, 8);
        let cube = product(&[&u, &u, &u]).unwrap();
        assert!(power(&u, 3).max_diff(&cube) < 1e-14);
        assert!(power(&u, 1).max_diff(&u) < 1e-14);
        assert!(power(&u, 0).max_diff(&Field::constant(&g, 1.0)) < 1e-15);
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::gchn(0).is_err());
        let dp = ModelParams::new(5, Variant::DegasperisProcesi).unwrap();
        assert_eq!(dp.k(), 1);
        assert_eq!(dp.stretching(), 3.0);
        assert_eq!(ModelParams::gchn(2).unwrap().stretching(), 3.0);
    }

    #[test]
    fn residual_rejects_boundary_indices() {
        let g = unit_lattice();
        let traj = Trajectory::from_samples(
            vec![0.0, 0.1, 0.2],
            vec![Field::zeros(&g), Field::zeros(&g), Field::zeros(&g)],
        );
        let mp = ModelParams::gchn(1).unwrap();
        assert!(m_residual(&traj, 0, &mp).is_err());
        assert!(m_residual(&traj, 2, &mp).is_err());
        assert_eq!(m_residual(&traj, 1, &mp).unwrap(), 0.0);
    }
}
