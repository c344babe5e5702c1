//! `H^1` conservation on a single smooth packet, with Degasperis-Procesi as
//! the non-conserving contrast.

use besov_core::integrator::{solve, StepControl};
use besov_core::spectral::{make_grid, Field};
use besov_core::witness::{packet, BumpSpec};
use besov_core::ModelParams;

use crate::config::RunConfig;
use crate::error::Result;
use crate::parallel::sweep;
use crate::report::{Check, ExperimentReport};
use crate::svg::{Plot, Series};

/// The data only has to be smooth and periodic, so a coarse tail is fine.
const TAIL_TOLERANCE: f64 = 0.1;

#[derive(Clone, Copy, Debug)]
struct Run {
    dp: bool,
    steps: usize,
    final_drift: f64,
    max_drift: f64,
}

pub fn run(cfg: &RunConfig) -> Result<ExperimentReport> {
    let c = &cfg.conserve;
    let tol = &cfg.tolerances;
    let grid = make_grid(c.n, c.m)?;
    let f = packet(&grid, c.packet, &BumpSpec::default().with_tail_tolerance(TAIL_TOLERANCE))?;
    let u0: Field = &f * (c.amplitude / f.max_abs());
    let gchn = ModelParams::gchn(cfg.model.k)?;
    let dp = ModelParams::degasperis_procesi();

    let plan = [(false, c.steps), (false, 2 * c.steps), (true, 2 * c.steps)];
    let runs = sweep(&plan, |&(is_dp, steps)| -> Result<Run> {
        let mp = if is_dp { &dp } else { &gchn };
        let traj = solve(&u0, c.horizon, &StepControl::uniform(steps), mp)?;
        Ok(Run { dp: is_dp, steps, final_drift: traj.final_h1_drift(), max_drift: traj.max_h1_drift() })
    })?;

    let mut report = ExperimentReport::new(
        "conserve",
        cfg,
        &["variant_run", "steps", "dt", "final_h1_drift", "max_h1_drift"],
        2,
    )
    .with_param("conserve_N", c.n)
    .with_param("conserve_M", c.m as usize)
    .with_param("packet", c.packet)
    .with_param("amplitude", c.amplitude)
    .with_param("horizon", c.horizon);
    for r in &runs {
        let name = if r.dp { "dp" } else { "gchn" };
        report.push_row(vec![
            name.into(),
            r.steps.into(),
            (c.horizon / r.steps as f64).into(),
            r.final_drift.into(),
            r.max_drift.into(),
        ]);
    }

    let (coarse, fine, contrast) = (runs[0], runs[1], runs[2]);
    report.check(Check::at_most(
        &format!("H1 drift, k = {}, {} steps", cfg.model.k, fine.steps),
        fine.max_drift,
        tol.h1_drift,
    ));
    report.check(Check::within(
        &format!("drift ratio {} -> {} steps", coarse.steps, fine.steps),
        coarse.final_drift / fine.final_drift,
        tol.drift_ratio,
    ));
    report.check(Check::info("Degasperis-Procesi H1 drift", format!("{:.6e}", contrast.final_drift)));

    report.plot = Some(Plot {
        title: format!("H1 drift, k = {}", cfg.model.k),
        x_label: "steps".into(),
        y_label: "relative H1 drift".into(),
        log_x: true,
        log_y: true,
        series: vec![Series {
            name: "gchn".into(),
            points: vec![(coarse.steps as f64, coarse.final_drift), (fine.steps as f64, fine.final_drift)],
        }],
    });
    Ok(report)
}
