//! The oscillating-packet initial data: a band-limited bump `phi`, the
//! modulated packets `f_n = phi(x) cos((17/12) 2^n x)`, their weighted sum
//! `u0`, and the quantities that bound `u0` from above and below.

use num_complex::Complex64;

use crate::cutoff::plateau;
use crate::error::{Error, Result};
use crate::gchn::power_spectral;
use crate::littlewood_paley::LPFamily;
use crate::spectral::{dealiased_mul, lp_norm, Field, Grid, SpectralField};

/// Frequency profile of the bump: `phi_hat = 1` on `|xi| <= inner`, `0` on
/// `|xi| >= outer`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSpec {
    pub inner: f64,
    pub outer: f64,
    /// Largest admissible `|phi(L)| / phi(0)`.
    pub tail_tolerance: f64,
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self { inner: 0.25, outer: 0.5, tail_tolerance: 1e-10 }
    }
}

impl BumpSpec {
    pub fn with_tail_tolerance(self, tail_tolerance: f64) -> Self {
        Self { tail_tolerance, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inner > 0.0 && self.outer > self.inner && self.outer.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bump radii must satisfy 0 < inner < outer, got {} and {}",
                self.inner, self.outer
            )));
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must be positive, got {}",
                self.tail_tolerance
            )));
        }
        Ok(())
    }

    /// `phi_hat(xi)`.
    pub fn profile(&self, xi: f64) -> f64 {
        plateau(xi, self.inner, self.outer)
    }
}

/// Checks the regularity window `s > max(3/2, 1 + 1/p)`.
pub fn admissible(s: f64, p: f64) -> Result<()> {
    if !(1.0..=f64::INFINITY).contains(&p) {
        return Err(Error::Exponent(p));
    }
    let floor = f64::max(1.5, 1.0 + 1.0 / p);
    if s > floor {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("s = {s} must exceed {floor} for p = {p}")))
    }
}

/// Half spectrum of `phi_hat(xi - shift) + phi_hat(xi + shift)`, scaled by
/// `weight / (2L)` so that the lattice sum approximates the inverse Fourier
/// integral.
fn shifted_profile(grid: &Grid, spec: &BumpSpec, shift: f64, weight: f64, out: &mut [Complex64]) {
    let scale = weight / (2.0 * grid.half_period());
    let dxi = grid.xi_spacing();
    let lo = (((shift - spec.outer) / dxi).floor().max(0.0)) as usize;
    let hi = (((shift + spec.outer) / dxi).ceil() as usize).min(out.len() - 1);
    for (m, c) in out.iter_mut().enumerate().take(hi + 1).skip(lo) {
        let xi = dxi * m as f64;
        c.re += scale * (spec.profile(xi - shift) + spec.profile(xi + shift));
    }
}

fn bump_half(grid: &Grid, spec: &BumpSpec) -> Vec<Complex64> {
    let mut half = vec![Complex64::new(0.0, 0.0); grid.spectrum_len()];
    // shifted_profile doubles the unshifted profile
    shifted_profile(grid, spec, 0.0, 0.5, &mut half);
    half
}

fn check_fits(grid: &Grid, n: u32, spec: &BumpSpec) -> Result<f64> {
    let carrier = grid.xi(grid.carrier_index(n) as i64);
    if n > 40 || carrier + spec.outer > grid.nyquist() {
        return Err(Error::PacketTooLarge { n, carrier, nyquist: grid.nyquist() });
    }
    Ok(carrier)
}

fn tail_ratio(phi: &Field) -> f64 {
    phi.values()[0].abs() / phi.at_origin()
}

fn check_tail(phi: &Field, spec: &BumpSpec) -> Result<()> {
    let ratio = tail_ratio(phi);
    if ratio > spec.tail_tolerance {
        return Err(Error::TailTolerance { ratio, tolerance: spec.tail_tolerance });
    }
    Ok(())
}

/// Samples of `phi(x) = (1/2pi) int phi_hat(xi) e^{i x xi} dxi`, evaluated by
/// the lattice Riemann sum. Fails if `|phi(+-L)|` is not negligible.
pub fn bump(grid: &Grid, spec: &BumpSpec) -> Result<Field> {
    spec.validate()?;
    if spec.outer > grid.nyquist() {
        return Err(Error::InvalidParameter(format!(
            "bump support {} exceeds Nyquist {}",
            spec.outer,
            grid.nyquist()
        )));
    }
    let phi = SpectralField::from_half(grid, bump_half(grid, spec))?.inverse();
    check_tail(&phi, spec)?;
    Ok(phi)
}

/// `f_n = phi(x) cos((17/12) 2^n x)`, built as the modulated spectrum (the
/// carrier is a lattice frequency, so this is the exact pointwise product).
pub fn packet(grid: &Grid, n: u32, spec: &BumpSpec) -> Result<Field> {
    Ok(packet_spectral(grid, n, spec)?.inverse())
}

pub fn packet_spectral(grid: &Grid, n: u32, spec: &BumpSpec) -> Result<SpectralField> {
    let carrier = check_fits(grid, n, spec)?;
    bump(grid, spec)?;
    let mut half = vec![Complex64::new(0.0, 0.0); grid.spectrum_len()];
    shifted_profile(grid, spec, carrier, 0.5, &mut half);
    SpectralField::from_half(grid, half)
}

/// `cos` and `sin` of the lattice frequency `xi_m` at every grid point, with
/// the phase reduced exactly before evaluation.
fn lattice_trig(grid: &Grid, m: u64) -> (Field, Field) {
    let n = grid.len() as u64;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let angle = |j: u64| std::f64::consts::TAU * ((m % n) * j % n) as f64 / n as f64;
    let cos = Field::from_fn_indexed(grid, |j| sign * angle(j as u64).cos());
    let sin = Field::from_fn_indexed(grid, |j| sign * angle(j as u64).sin());
    (cos, sin)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessSpec {
    pub s: f64,
    pub k: u32,
    /// Largest packet index kept in the sum.
    pub n_modes: u32,
    pub n_probe: u32,
}

impl WitnessSpec {
    pub fn new(s: f64, k: u32, n_modes: u32, n_probe: u32) -> Result<Self> {
        let ws = Self { s, k, n_modes, n_probe };
        ws.validate()?;
        Ok(ws)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 1.5 && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("s = {} must exceed 3/2", self.s)));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.n_probe < 3 {
            return Err(Error::InvalidParameter(format!(
                "n_probe = {} must be at least 3",
                self.n_probe
            )));
        }
        if self.n_modes < self.n_probe + 2 {
            return Err(Error::InvalidParameter(format!(
                "n_modes = {} must be at least n_probe + 2 = {}",
                self.n_modes,
                self.n_probe + 2
            )));
        }
        Ok(())
    }
}

/// `u0 = sum_{n=0}^{n_modes} 2^{-ns} f_n` together with its ingredients.
#[derive(Clone, Debug)]
pub struct Witness {
    pub spec: WitnessSpec,
    pub bump_spec: BumpSpec,
    pub phi: Field,
    pub u0: Field,
    pub u0_hat: SpectralField,
    tail_ratio: f64,
}

pub fn witness_data(grid: &Grid, ws: &WitnessSpec, spec: &BumpSpec) -> Result<Witness> {
    ws.validate()?;
    let phi = bump(grid, spec)?;
    check_fits(grid, ws.n_modes, spec)?;
    let mut half = vec![Complex64::new(0.0, 0.0); grid.spectrum_len()];
    for n in 0..=ws.n_modes {
        let carrier = grid.xi(grid.carrier_index(n) as i64);
        shifted_profile(grid, spec, carrier, 0.5 * (-f64::from(n) * ws.s).exp2(), &mut half);
    }
    let u0_hat = SpectralField::from_half(grid, half)?;
    Ok(Witness {
        spec: *ws,
        bump_spec: *spec,
        tail_ratio: tail_ratio(&phi),
        u0: u0_hat.inverse(),
        phi,
        u0_hat,
    })
}

impl Witness {
    pub fn grid(&self) -> &Grid {
        self.u0.grid()
    }

    pub fn phi0(&self) -> f64 {
        self.phi.at_origin()
    }

    /// Measured `|phi(L)| / phi(0)`.
    pub fn tail_ratio(&self) -> f64 {
        self.tail_ratio
    }

    pub fn packet(&self, n: u32) -> Result<Field> {
        packet(self.grid(), n, &self.bump_spec)
    }

    /// `2^{-ns} f_n`, the block the sum places at level `n`.
    pub fn weighted_packet(&self, n: u32) -> Result<Field> {
        Ok(&self.packet(n)? * (-f64::from(n) * self.spec.s).exp2())
    }

    /// Bound on what the dropped packets `n > n_modes` would add to the
    /// `B^{s_eval}_{p,inf}` norm: `sup_n 2^{n(s_eval - s)} ||f_n||_p`, with
    /// `||f_n||_p <= ||phi||_p`. Equals `||phi||_p` when `s_eval = s`.
    pub fn tail_bound_at(&self, p: f64, s_eval: f64) -> Result<f64> {
        let first = f64::from(self.spec.n_modes + 1);
        let weight = ((s_eval - self.spec.s).min(0.0) * first).exp2();
        Ok(weight * lp_norm(&self.phi, p)?)
    }

    pub fn tail_bound(&self, p: f64) -> Result<f64> {
        self.tail_bound_at(p, self.spec.s)
    }

    /// `phi(0) sum_{n=0}^{inf} 2^{-ns} = phi(0) 2^s / (2^s - 1)`.
    pub fn origin_limit(&self) -> f64 {
        let w = self.spec.s.exp2();
        self.phi0() * w / (w - 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateauBound {
    /// Largest grid radius on which `|u0^k| >= |u0(0)^k| / 2`.
    pub delta: f64,
    /// `2^{sk} phi(0)^k / (2 (2^s - 1)^k)`.
    pub bound: f64,
}

pub fn plateau_bound(u0: &Field, k: u32, s: f64, phi0: f64) -> PlateauBound {
    let w = s.exp2();
    let bound = (w * phi0 / (w - 1.0)).powi(k as i32) / 2.0;
    let values = u0.values();
    let centre = values.len() / 2;
    let target = u0.at_origin().abs() * 0.5f64.powf(1.0 / f64::from(k.max(1)));
    let mut radius = 0;
    while radius + 1 < centre
        && values[centre + radius + 1].abs() >= target
        && values[centre - radius - 1].abs() >= target
    {
        radius += 1;
    }
    PlateauBound { delta: radius as f64 * u0.grid().spacing(), bound }
}

/// `2^{n(s-1)} ||u0^k d_x Delta_n u0||_{L^p}`.
pub fn lower_bound_quantity(
    u0: &Field,
    k: u32,
    n: u32,
    s: f64,
    p: f64,
    fam: &LPFamily,
) -> Result<f64> {
    u0.grid().ensure_same(fam.grid())?;
    let hat = u0.forward();
    let grad = fam.block_spectral(&hat, n as i32).derivative();
    let field = dealiased_mul(&power_spectral(&hat, k), &grad);
    Ok((f64::from(n) * (s - 1.0)).exp2() * fam.norm(&field, p)?)
}

/// The two pieces of `u0^k d_x Delta_n u0 = 2^{-ns} u0^k (phi' cos - q phi sin)`,
/// each normalized like [`lower_bound_quantity`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBoundSplit {
    pub total: f64,
    /// From `phi' cos(qx)`; scales like `2^{-n}`.
    pub envelope: f64,
    /// From `q phi sin(qx)`; scales like `1`.
    pub oscillation: f64,
}

/// Evaluates the lower-bound quantity and its split for several `n`, sharing
/// `u0^k`.
pub struct LowerBoundProbe<'a> {
    witness: &'a Witness,
    power: SpectralField,
    phi_x: Field,
}

impl<'a> LowerBoundProbe<'a> {
    pub fn new(witness: &'a Witness, k: u32) -> Self {
        Self {
            witness,
            power: power_spectral(&witness.u0_hat, k),
            phi_x: witness.phi.forward().derivative().inverse(),
        }
    }

    fn weighted_norm(&self, g: &Field, n: u32, p: f64, fam: &LPFamily) -> Result<f64> {
        let field = dealiased_mul(&self.power, &g.forward());
        let s = self.witness.spec.s;
        Ok((f64::from(n) * (s - 1.0)).exp2() * fam.norm(&field, p)?)
    }

    pub fn quantity(&self, n: u32, p: f64, fam: &LPFamily) -> Result<f64> {
        self.witness.grid().ensure_same(fam.grid())?;
        let grad = fam.block_spectral(&self.witness.u0_hat, n as i32).derivative();
        let field = dealiased_mul(&self.power, &grad);
        let s = self.witness.spec.s;
        Ok((f64::from(n) * (s - 1.0)).exp2() * fam.norm(&field, p)?)
    }

    pub fn split(&self, n: u32, p: f64, fam: &LPFamily) -> Result<LowerBoundSplit> {
        let grid = self.witness.grid();
        let m = grid.carrier_index(n);
        check_fits(grid, n, &self.witness.bump_spec)?;
        let q = grid.xi(m as i64);
        let weight = (-f64::from(n) * self.witness.spec.s).exp2();
        let (cos, sin) = lattice_trig(grid, m);
        let phi = self.witness.phi.values();
        let envelope = Field::from_fn_indexed(grid, |j| weight * self.phi_x.values()[j] * cos.values()[j]);
        let oscillation = Field::from_fn_indexed(grid, |j| -weight * q * phi[j] * sin.values()[j]);
        Ok(LowerBoundSplit {
            total: self.quantity(n, p, fam)?,
            envelope: self.weighted_norm(&envelope, n, p, fam)?,
            oscillation: self.weighted_norm(&oscillation, n, p, fam)?,
        })
    }
}
