//! Fixed-step classical RK4 for the method-of-lines system, with trajectory
//! storage and conservation diagnostics.

use crate::error::{Error, Result};
use crate::gchn::{rhs_spectral, ModelParams};
use crate::spectral::{lp_norm, Field, SpectralField};

/// Semi-discrete vector field `u_t = F(u)` in Fourier space.
pub trait Dynamics: Sync {
    fn rate(&self, u: &SpectralField) -> SpectralField;

    /// Transport speed used by the advisory CFL check.
    fn speed(&self, max_abs_u: f64) -> f64 {
        max_abs_u.max(1.0)
    }
}

impl Dynamics for ModelParams {
    fn rate(&self, u: &SpectralField) -> SpectralField {
        rhs_spectral(u, self)
    }

    fn speed(&self, max_abs_u: f64) -> f64 {
        max_abs_u.powi(self.k() as i32).max(1.0)
    }
}

/// Runs a vector field backwards: `u_t = -F(u)`.
pub struct Reversed<'a, D: Dynamics>(pub &'a D);

impl<D: Dynamics> Dynamics for Reversed<'_, D> {
    fn rate(&self, u: &SpectralField) -> SpectralField {
        self.0.rate(u).scale(-1.0)
    }

    fn speed(&self, max_abs_u: f64) -> f64 {
        self.0.speed(max_abs_u)
    }
}

/// Exponential spectral filter `exp(-alpha (|m| / (N/2))^order)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralFilter {
    pub alpha: f64,
    pub order: i32,
}

impl Default for SpectralFilter {
    fn default() -> Self {
        Self { alpha: 36.0, order: 36 }
    }
}

impl SpectralFilter {
    fn apply(&self, u: &SpectralField) -> SpectralField {
        let nyq = u.grid().nyquist();
        u.apply_even(|xi| (-self.alpha * (xi / nyq).powi(self.order)).exp())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepControl {
    /// Largest step; the horizon is still split into at least `min_steps`.
    pub dt: f64,
    pub cfl_fraction: f64,
    pub store_every: usize,
    pub min_steps: usize,
    /// Abort once `max |u_x|` exceeds this.
    pub blowup_threshold: f64,
    /// Off unless explicitly requested.
    pub filter: Option<SpectralFilter>,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            dt: f64::INFINITY,
            cfl_fraction: 0.5,
            store_every: 1,
            min_steps: 32,
            blowup_threshold: 1e4,
            filter: None,
        }
    }
}

impl StepControl {
    /// Exactly `steps` uniform steps over any horizon.
    pub fn uniform(steps: usize) -> Self {
        Self { min_steps: steps.max(1), ..Self::default() }
    }

    pub fn with_dt(dt: f64) -> Self {
        Self { dt, min_steps: 1, ..Self::default() }
    }

    pub fn storing_every(mut self, every: usize) -> Self {
        self.store_every = every.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.cfl_fraction > 0.0 && self.cfl_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl_fraction must lie in (0, 1], got {}",
                self.cfl_fraction
            )));
        }
        Ok(())
    }

    /// Step sizes covering `[0, t_end]`; the last one lands exactly on `t_end`.
    pub fn schedule(&self, t_end: f64) -> Vec<f64> {
        if t_end <= 0.0 {
            return Vec::new();
        }
        let dt = self.dt.min(t_end / self.min_steps.max(1) as f64);
        let ratio = t_end / dt;
        let full = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
            ratio.round() as usize
        } else {
            ratio.ceil() as usize
        };
        let mut steps = vec![dt; full];
        let covered = dt * (full - 1) as f64;
        steps[full - 1] = t_end - covered;
        steps
    }
}

/// Diagnostics recorded with every stored state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub l2: f64,
    pub h1: f64,
    pub max_abs: f64,
}

impl StepRecord {
    fn of(time: f64, u: &SpectralField, physical: &Field) -> Self {
        let l2_sq = u.l2_norm_sq();
        let h1 = (l2_sq + u.derivative().l2_norm_sq()).sqrt();
        Self { time, l2: l2_sq.sqrt(), h1, max_abs: physical.max_abs() }
    }
}

/// Time-stamped states of one run, `times[0] = 0`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Field>,
    pub diagnostics: Vec<StepRecord>,
}

impl Trajectory {
    /// Wraps externally produced samples; diagnostics are recomputed.
    pub fn from_samples(times: Vec<f64>, states: Vec<Field>) -> Self {
        let diagnostics = times
            .iter()
            .zip(&states)
            .map(|(&t, u)| StepRecord::of(t, &u.forward(), u))
            .collect();
        Self { times, states, diagnostics }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &Field {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Largest `|H1(t) - H1(0)| / H1(0)` over the stored states.
    pub fn max_h1_drift(&self) -> f64 {
        let h0 = self.diagnostics[0].h1;
        self.diagnostics
            .iter()
            .map(|d| (d.h1 - h0).abs() / h0)
            .fold(0.0, f64::max)
    }

    /// Relative H1 drift of the final state.
    pub fn final_h1_drift(&self) -> f64 {
        let h0 = self.diagnostics[0].h1;
        (self.diagnostics.last().expect("non-empty").h1 - h0).abs() / h0
    }
}

pub fn rk4_step_spectral<D: Dynamics + ?Sized>(u: &SpectralField, dt: f64, f: &D) -> SpectralField {
    let k1 = f.rate(u);
    let k2 = f.rate(&u.axpy(0.5 * dt, &k1));
    let k3 = f.rate(&u.axpy(0.5 * dt, &k2));
    let k4 = f.rate(&u.axpy(dt, &k3));
    let incr = k1.axpy(2.0, &k2).axpy(2.0, &k3).axpy(1.0, &k4);
    u.axpy(dt / 6.0, &incr)
}

/// One classical RK4 step.
pub fn rk4_step<D: Dynamics + ?Sized>(u: &Field, dt: f64, f: &D) -> Result<Field> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let next = rk4_step_spectral(&u.forward(), dt, f);
    if !next.is_finite() {
        return Err(Error::NonFinite { time: dt });
    }
    let out = next.inverse();
    if !out.is_finite() {
        return Err(Error::NonFinite { time: dt });
    }
    Ok(out)
}

/// Integrates `u0` to `t_end`, storing every `store_every`-th state and always
/// the final one.
pub fn solve<D: Dynamics + ?Sized>(
    u0: &Field,
    t_end: f64,
    sc: &StepControl,
    f: &D,
) -> Result<Trajectory> {
    sc.validate()?;
    if !(t_end >= 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be >= 0, got {t_end}")));
    }
    let steps = sc.schedule(t_end);
    if let Some(&dt) = steps.first() {
        let limit = sc.cfl_fraction * u0.grid().spacing() / f.speed(u0.max_abs());
        if dt > limit {
            log::warn!("dt = {dt:.3e} exceeds the advisory CFL limit {limit:.3e}");
        }
    }

    let mut u = u0.forward();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![u0.clone()],
        diagnostics: vec![StepRecord::of(0.0, &u, u0)],
    };
    let mut t = 0.0;
    let last = steps.len();
    for (i, &dt) in steps.iter().enumerate() {
        u = rk4_step_spectral(&u, dt, f);
        if let Some(filter) = &sc.filter {
            u = filter.apply(&u);
        }
        t = if i + 1 == last { t_end } else { t + dt };
        if !u.is_finite() {
            return Err(Error::NonFinite { time: t });
        }
        let slope = u.derivative().inverse().max_abs();
        if slope > sc.blowup_threshold {
            return Err(Error::BlowUp { time: t, slope, threshold: sc.blowup_threshold });
        }
        if (i + 1) % sc.store_every == 0 || i + 1 == last {
            let physical = u.inverse();
            if !physical.is_finite() {
                return Err(Error::NonFinite { time: t });
            }
            traj.diagnostics.push(StepRecord::of(t, &u, &physical));
            traj.times.push(t);
            traj.states.push(physical);
        }
    }
    Ok(traj)
}

/// Final state only, after `steps` uniform RK4 steps.
pub fn evolve<D: Dynamics + ?Sized>(u0: &Field, t_end: f64, steps: usize, f: &D) -> Result<Field> {
    let sc = StepControl { store_every: usize::MAX, ..StepControl::uniform(steps) };
    Ok(solve(u0, t_end, &sc, f)?.states.pop().expect("initial state present"))
}

/// `sqrt(||u||_2^2 + ||u_x||_2^2)` with rectangle-rule quadrature.
pub fn h1_norm(u: &Field) -> f64 {
    let ux = crate::spectral::derivative(u);
    let a = lp_norm(u, 2.0).expect("p = 2 is valid");
    let b = lp_norm(&ux, 2.0).expect("p = 2 is valid");
    (a * a + b * b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, Grid};

    /// `u_t = -u_x`.
    struct Transport;

    impl Dynamics for Transport {
        fn rate(&self, u: &SpectralField) -> SpectralField {
            u.derivative().scale(-1.0)
        }
    }

    struct Poison;

    impl Dynamics for Poison {
        fn rate(&self, u: &SpectralField) -> SpectralField {
            u.scale(f64::NAN)
        }
    }

    fn grid() -> Grid {
        make_grid(128, 2).unwrap()
    }

    #[test]
    fn zero_state_is_fixed() {
        let g = grid();
        let zero = Field::zeros(&g);
        let mp = ModelParams::gchn(2).unwrap();
        assert_eq!(rk4_step(&zero, 0.1, &mp).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn transport_step_has_fifth_order_local_error() {
        let g = grid();
        let q = g.xi(3);
        let u0 = Field::from_fn(&g, |x| (q * x).sin());
        let err = |dt: f64| {
            let exact = Field::from_fn(&g, |x| (q * (x - dt)).sin());
            rk4_step(&u0, dt, &Transport).unwrap().max_diff(&exact)
        };
        let ratio = err(0.2) / err(0.1);
        assert!((ratio.log2() - 5.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn zero_horizon_keeps_only_initial_state() {
        let g = grid();
        let u0 = Field::from_fn(&g, f64::cos);
        let traj = solve(&u0, 0.0, &StepControl::default(), &Transport).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.times, vec![0.0]);
    }

    #[test]
    fn schedule_lands_on_horizon() {
        let sc = StepControl::with_dt(0.3);
        let steps = sc.schedule(1.0);
        assert_eq!(steps.len(), 4);
        assert!((steps.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((steps[3] - 0.1).abs() < 1e-12);
        let uniform = StepControl::uniform(32).schedule(1e-3);
        assert_eq!(uniform.len(), 32);
        assert!(uniform.iter().all(|&dt| (dt - 1e-3 / 32.0).abs() < 1e-18));
        // min_steps wins over a large dt
        assert_eq!(StepControl::default().schedule(5.0).len(), 32);
    }

    #[test]
    fn thinning_does_not_change_final_state() {
        let g = grid();
        let u0 = Field::from_fn(&g, |x| 0.3 * (g.xi(2) * x).cos());
        let mp = ModelParams::gchn(1).unwrap();
        let dense = solve(&u0, 0.5, &StepControl::uniform(40), &mp).unwrap();
        let sparse = solve(&u0, 0.5, &StepControl::uniform(40).storing_every(7), &mp).unwrap();
        assert_eq!(dense.len(), 41);
        assert_eq!(sparse.len(), 1 + 5 + 1);
        assert_eq!(dense.last().values(), sparse.last().values());
        assert_eq!(*sparse.times.last().unwrap(), 0.5);
        assert!(sparse.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn non_finite_rate_aborts_with_time() {
        let g = grid();
        let u0 = Field::from_fn(&g, f64::cos);
        match solve(&u0, 1.0, &StepControl::uniform(4), &Poison) {
            Err(Error::NonFinite { time }) => assert!((time - 0.25).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(rk4_step(&u0, 0.1, &Poison), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn blowup_guard_trips() {
        let g = grid();
        let u0 = Field::from_fn(&g, |x| (g.xi(4) * x).sin());
        let sc = StepControl { blowup_threshold: 1e-3, ..StepControl::uniform(4) };
        assert!(matches!(solve(&u0, 0.1, &sc, &Transport), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn rejects_bad_controls() {
        let g = grid();
        let u0 = Field::zeros(&g);
        let bad = StepControl { cfl_fraction: 1.5, ..StepControl::default() };
        assert!(solve(&u0, 1.0, &bad, &Transport).is_err());
        let bad = StepControl { dt: -1.0, ..StepControl::default() };
        assert!(solve(&u0, 1.0, &bad, &Transport).is_err());
        assert!(rk4_step(&u0, 0.0, &Transport).is_err());
    }

    #[test]
    fn filter_damps_only_when_enabled() {
        let g = grid();
        let u0 = Field::from_fn(&g, |x| (g.xi(60) * x).cos());
        let unfiltered = solve(&u0, 0.1, &StepControl::uniform(200), &Reversed(&Transport)).unwrap();
        let l2 = |t: &Trajectory| t.diagnostics.last().unwrap().l2 / t.diagnostics[0].l2;
        assert!((l2(&unfiltered) - 1.0).abs() < 1e-6);
        let sc = StepControl { filter: Some(SpectralFilter::default()), ..StepControl::uniform(200) };
        let filtered = solve(&u0, 0.1, &sc, &Transport).unwrap();
        assert!(l2(&filtered) < 0.5, "{}", l2(&filtered));
    }

    #[test]
    fn h1_norm_of_cosine() {
        let g = make_grid(256, 4).unwrap();
        let q = g.xi(5);
        let u = Field::from_fn(&g, |x| (q * x).cos());
        let expect = ((1.0 + q * q) * g.half_period()).sqrt();
        assert!((h1_norm(&u) - expect).abs() < 1e-12 * expect);
        assert_eq!(h1_norm(&Field::zeros(&g)), 0.0);
    }
}
