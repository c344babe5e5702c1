use besov_core::gchn::{m_residual, rhs};
use besov_core::integrator::{evolve, h1_norm, solve, Reversed, StepControl, Trajectory};
use besov_core::littlewood_paley::{BesovParams, LPFamily};
use besov_core::spectral::{lp_norm, make_grid, product, Field, Grid};
use besov_core::witness::{packet, witness_data, BumpSpec, WitnessSpec};
use besov_core::ModelParams;
use proptest::prelude::*;

fn grid() -> Grid {
    make_grid(2048, 8).unwrap()
}

/// Smooth, well-resolved data: packet `n` scaled to peak `amp`.
fn packet_data(g: &Grid, n: u32, amp: f64) -> Field {
    let spec = BumpSpec::default().with_tail_tolerance(0.2);
    let f = packet(g, n, &spec).unwrap();
    &f * (amp / f.max_abs())
}

fn smooth(g: &Grid, amp: f64) -> Field {
    packet_data(g, 2, amp)
}

fn final_drift(u0: &Field, t: f64, steps: usize, mp: &ModelParams) -> f64 {
    solve(u0, t, &StepControl::uniform(steps), mp).unwrap().final_h1_drift()
}

#[test]
fn h1_is_conserved_by_camassa_holm_and_novikov() {
    let g = grid();
    let u0 = packet_data(&g, 0, 0.5);
    let ch = solve(&u0, 1.0, &StepControl::uniform(128), &ModelParams::gchn(1).unwrap()).unwrap();
    assert!(ch.max_h1_drift() <= 1e-6, "{}", ch.max_h1_drift());
    let nov = solve(&u0, 0.5, &StepControl::uniform(64), &ModelParams::gchn(2).unwrap()).unwrap();
    assert!(nov.max_h1_drift() <= 1e-6, "{}", nov.max_h1_drift());
}

#[test]
fn h1_drift_is_fourth_order_for_odd_k() {
    let g = grid();
    let u0 = smooth(&g, 0.5);
    for k in [1, 3] {
        let mp = ModelParams::gchn(k).unwrap();
        let coarse = final_drift(&u0, 0.5, 32, &mp);
        let fine = final_drift(&u0, 0.5, 64, &mp);
        let ratio = coarse / fine;
        assert!((11.2..=20.8).contains(&ratio), "k={k} {coarse:e} {fine:e} ratio {ratio}");
    }
}

#[test]
fn degasperis_procesi_does_not_conserve_h1() {
    let g = grid();
    let u0 = smooth(&g, 0.5);
    let drift = final_drift(&u0, 0.5, 64, &ModelParams::degasperis_procesi());
    assert!(drift > 1e-4, "{drift}");
}

#[test]
fn rk4_error_against_richardson_reference_drops_sixteenfold() {
    let g = grid();
    let mp = ModelParams::gchn(1).unwrap();
    let u0 = packet_data(&g, 0, 0.5);
    let reference = evolve(&u0, 0.5, 512, &mp).unwrap();
    let finer = evolve(&u0, 0.5, 1024, &mp).unwrap();
    // fourth-order extrapolation of the reference
    let richardson = finer.axpy(1.0 / 15.0, &(&finer - &reference)).unwrap();
    let err = |steps| evolve(&u0, 0.5, steps, &mp).unwrap().max_diff(&richardson);
    let ratio = err(32) / err(64);
    assert!((11.2..=20.8).contains(&ratio), "ratio {ratio}");
}

fn residual_at(traj: &Trajectory, t: f64, mp: &ModelParams) -> f64 {
    let index = traj.times.iter().position(|&s| (s - t).abs() < 1e-12).unwrap();
    m_residual(traj, index, mp).unwrap()
}

#[test]
fn m_form_residual_is_second_order_in_storage_spacing() {
    let g = grid();
    let mp = ModelParams::gchn(1).unwrap();
    let u0 = smooth(&g, 0.5);
    let sc = |every| StepControl::uniform(512).storing_every(every);
    let coarse = solve(&u0, 0.5, &sc(16), &mp).unwrap();
    let fine = solve(&u0, 0.5, &sc(8), &mp).unwrap();
    let ratio = residual_at(&coarse, 0.25, &mp) / residual_at(&fine, 0.25, &mp);
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn m_form_residual_flags_a_corrupted_state() {
    let g = grid();
    let mp = ModelParams::gchn(2).unwrap();
    let u0 = smooth(&g, 0.5);
    let clean = solve(&u0, 0.25, &StepControl::uniform(128), &mp).unwrap();
    let mut states = clean.states.clone();
    states[64] = &states[64] * 1.01;
    let corrupted = Trajectory::from_samples(clean.times.clone(), states);
    let r_clean = m_residual(&clean, 64, &mp).unwrap();
    let r_bad = m_residual(&corrupted, 64, &mp).unwrap();
    assert!(r_bad > 100.0 * r_clean, "{r_bad:e} vs {r_clean:e}");

    let zero = solve(&Field::zeros(&g), 0.1, &StepControl::uniform(4), &mp).unwrap();
    assert_eq!(m_residual(&zero, 2, &mp).unwrap(), 0.0);
}

#[test]
fn reversing_time_returns_to_the_data() {
    let g = grid();
    for k in 1..=3 {
        let mp = ModelParams::gchn(k).unwrap();
        let u0 = smooth(&g, 0.5);
        let steps = 32;
        let forward = evolve(&u0, 0.5, steps, &mp).unwrap();
        let back = evolve(&forward, 0.5, steps, &Reversed(&mp)).unwrap();
        let reversal = back.max_diff(&u0);
        let self_conv = forward.max_diff(&evolve(&u0, 0.5, 2 * steps, &mp).unwrap());
        assert!(reversal <= 10.0 * self_conv, "k={k} {reversal:e} vs {self_conv:e}");
    }
}

#[test]
fn rhs_of_witness_data_is_odd() {
    let g = make_grid(4096, 8).unwrap();
    let spec = BumpSpec::default().with_tail_tolerance(0.1);
    let w = witness_data(&g, &WitnessSpec::new(2.0, 3, 7, 5).unwrap(), &spec).unwrap();
    for k in 1..=3 {
        let r = rhs(&w.u0, &ModelParams::gchn(k).unwrap());
        assert!(r.odd_defect() <= 1e-10 * r.max_abs(), "k={k}");
    }
}

#[test]
fn h1_norm_of_witness_matches_parseval() {
    let g = make_grid(4096, 8).unwrap();
    let spec = BumpSpec::default().with_tail_tolerance(0.1);
    let w = witness_data(&g, &WitnessSpec::new(2.0, 1, 7, 5).unwrap(), &spec).unwrap();
    let two_l = 2.0 * g.half_period();
    let sum: f64 = w
        .u0_hat
        .half()
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let weight = if m == 0 || m == g.len() / 2 { 1.0 } else { 2.0 };
            weight * (1.0 + g.xi(m as i64).powi(2)) * c.norm_sqr()
        })
        .sum();
    let oracle = (two_l * sum).sqrt();
    assert!((h1_norm(&w.u0) - oracle).abs() <= 1e-8 * oracle);
}

fn random_smooth(g: &Grid, coeffs: &[(f64, f64)]) -> Field {
    let xis: Vec<f64> = (1..=coeffs.len()).map(|m| g.xi(m as i64)).collect();
    Field::from_fn(g, |x| {
        coeffs.iter().zip(&xis).map(|((a, b), xi)| a * (xi * x).cos() + b * (xi * x).sin()).sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `||fg||_{B^s} <= C (||f||_inf ||g||_{B^s} + ||f||_{B^s} ||g||_inf)` with
    /// a moderate constant on random smooth pairs.
    #[test]
    fn product_law_ratio_is_bounded(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
    ) {
        let g = make_grid(256, 2).unwrap();
        let fam = LPFamily::new(&g);
        let bp = BesovParams::sup(2.0, 2.0).unwrap();
        let f = random_smooth(&g, &a);
        let h = random_smooth(&g, &b);
        let fh = product(&[&f, &h]).unwrap();
        let norm = |u: &Field| fam.besov_norm_spectral(&u.forward(), bp).unwrap();
        let sup = |u: &Field| lp_norm(u, f64::INFINITY).unwrap();
        let bound = sup(&f) * norm(&h) + norm(&f) * sup(&h);
        prop_assume!(bound > 1e-8);
        prop_assert!(norm(&fh) <= 4.0 * bound, "{} vs {}", norm(&fh), bound);
    }
}
