//! Short-time expansion `S_t(u0) = u0 + t v0 + w` on a ladder of horizons.

use besov_core::gchn::rhs_spectral;
use besov_core::integrator::evolve;
use besov_core::spectral::SpectralField;

use crate::config::RunConfig;
use crate::desk::Desk;
use crate::error::Result;
use crate::fit::{log_ladder, log_log_slope};
use crate::parallel::sweep;
use crate::report::{Check, ExperimentReport};
use crate::svg::{Plot, Series};

#[derive(Clone, Copy, Debug)]
struct Distances {
    d1: f64,
    d2: f64,
    control: f64,
    d2_top: f64,
}

#[derive(Clone, Copy, Debug)]
struct Row {
    t: f64,
    coarse: Distances,
    fine: Distances,
}

fn distances(desk: &Desk, u0: &SpectralField, v0: &SpectralField, u: &SpectralField, t: f64) -> Result<Distances> {
    let s = desk.s();
    let diff = u - u0;
    let w = diff.axpy(-t, v0);
    Ok(Distances {
        d1: desk.besov(&diff, s - 1.0)?,
        d2: desk.besov(&w, s - 2.0)?,
        control: desk.besov(&diff, s - 2.0)?,
        d2_top: desk.besov(&w, s)?,
    })
}

fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn run(cfg: &RunConfig) -> Result<ExperimentReport> {
    let desk = Desk::new(cfg)?;
    let tol = &cfg.tolerances;
    let k = desk.mp.k();
    let n_modes = cfg.n_modes();
    let w = desk.witness(n_modes)?;
    let v0 = rhs_spectral(&w.u0_hat, &desk.mp);

    let top = desk.grid.xi(desk.grid.carrier_index(n_modes) as i64);
    let speed = w.u0.max_abs().powi(k as i32);
    let t_max = cfg.expansion.smoothness / (top * speed);
    let ts = log_ladder(t_max / cfg.expansion.span, t_max, cfg.expansion.points);
    let steps = cfg.sweep.steps_per_horizon;

    let rows = sweep(&ts, |&t| -> Result<Row> {
        let coarse = evolve(&w.u0, t, steps, &desk.mp)?.forward();
        let fine = evolve(&w.u0, t, 2 * steps, &desk.mp)?.forward();
        Ok(Row {
            t,
            coarse: distances(&desk, &w.u0_hat, &v0, &coarse, t)?,
            fine: distances(&desk, &w.u0_hat, &v0, &fine, t)?,
        })
    })?;

    let mut report = ExperimentReport::new(
        "expansion",
        cfg,
        &["t", "d1", "d2", "d2_control", "d2_in_B_s", "d1_refined", "d2_refined"],
        1,
    )
    .with_param("steps_per_horizon", steps);
    for r in &rows {
        report.push_row(vec![
            r.t.into(),
            r.coarse.d1.into(),
            r.coarse.d2.into(),
            r.coarse.control.into(),
            r.coarse.d2_top.into(),
            r.fine.d1.into(),
            r.fine.d2.into(),
        ]);
    }

    let column = |f: fn(&Distances) -> f64| rows.iter().map(|r| f(&r.coarse)).collect::<Vec<f64>>();
    report.check(Check::within("d1 log-log slope", log_log_slope(&ts, &column(|d| d.d1)), tol.slope_d1));
    report.check(Check::within("d2 log-log slope", log_log_slope(&ts, &column(|d| d.d2)), tol.slope_d2));
    let refinement = rows
        .iter()
        .flat_map(|r| [relative_change(r.coarse.d1, r.fine.d1), relative_change(r.coarse.d2, r.fine.d2)])
        .fold(0.0, f64::max);
    report.check(Check::at_most(
        &format!("dt refinement {steps} -> {} steps", 2 * steps),
        refinement,
        tol.dt_refinement,
    ));
    report.check(Check::info(
        "control slope without v0",
        format!("{:.6}", log_log_slope(&ts, &column(|d| d.control))),
    ));
    report.check(Check::info(
        "d2 slope measured in B^s",
        format!("{:.6}", log_log_slope(&ts, &column(|d| d.d2_top))),
    ));
    report.note(format!("t in [{:.6e}, {t_max:.6e}]", ts[0]));

    let series = |name: &str, f: fn(&Distances) -> f64| Series {
        name: name.into(),
        points: rows.iter().map(|r| (r.t, f(&r.coarse))).collect(),
    };
    report.plot = Some(Plot {
        title: format!("Short-time expansion, k = {k}, s = {}, p = {}", desk.s(), desk.p()),
        x_label: "t".into(),
        y_label: "Besov distance".into(),
        log_x: true,
        log_y: true,
        series: vec![
            series("d1 in B^{s-1}", |d| d.d1),
            series("d2 in B^{s-2}", |d| d.d2),
            series("control, v0 = 0", |d| d.control),
            series("d2 in B^s", |d| d.d2_top),
        ],
    });
    Ok(report)
}
