//! Norm defect of the solution map along `t_n = epsilon 2^{-n}`, with the
//! lower-bound chain evaluated term by term.

use besov_core::gchn::{pq_spectral, power_spectral, rhs_spectral};
use besov_core::integrator::evolve;
use besov_core::littlewood_paley::commutator_spectral;
use besov_core::witness::LowerBoundProbe;

use crate::config::RunConfig;
use crate::desk::Desk;
use crate::error::Result;
use crate::experiments::witness::{min_max, LOWER_BOUND_FROM};
use crate::fit::log2_slope;
use crate::parallel::sweep;
use crate::report::{Check, ExperimentReport};
use crate::svg::{Plot, Series};

#[derive(Clone, Copy, Debug)]
struct Row {
    n: u32,
    t: f64,
    d_s: f64,
    d_s1: f64,
    level_defect: f64,
    main: f64,
    commutator: f64,
    pq: f64,
    remainder: f64,
}

impl Row {
    fn chain_lower(&self) -> f64 {
        self.main - self.commutator - self.pq - self.remainder
    }

    fn dominated(&self) -> bool {
        self.main > self.commutator + self.pq + self.remainder
    }
}

/// Solves from the witness truncated `extra` packets above `n` and measures
/// the defect at `t_n`. The chain terms are skipped when `full` is false.
fn measure(desk: &Desk, n: u32, extra: u32, epsilon: f64, full: bool) -> Result<Row> {
    let (s, p, k) = (desk.s(), desk.p(), desk.mp.k());
    let w = desk.witness(n + extra)?;
    let t = epsilon * (-f64::from(n)).exp2();
    let u = evolve(&w.u0, t, desk.cfg.sweep.steps_per_horizon, &desk.mp)?;
    let diff = &u.forward() - &w.u0_hat;
    let mut row = Row {
        n,
        t,
        d_s: desk.besov(&diff, s)?,
        d_s1: desk.besov(&diff, s - 1.0)?,
        level_defect: (f64::from(n) * s).exp2() * desk.fam.norm(&desk.fam.block_spectral(&diff, n as i32), p)?,
        main: f64::NAN,
        commutator: f64::NAN,
        pq: f64::NAN,
        remainder: f64::NAN,
    };
    if !full {
        return Ok(row);
    }
    let weight = (f64::from(n) * s).exp2();
    let probe = LowerBoundProbe::new(&w, k);
    // the probe carries 2^{n(s-1)}
    row.main = t * f64::from(n).exp2() * probe.quantity(n, p, &desk.fam)?;
    let uk = power_spectral(&w.u0_hat, k);
    let comm = commutator_spectral(&uk, &w.u0_hat, n as i32, &desk.fam);
    row.commutator = t * weight * desk.fam.norm(&comm, p)?;
    row.pq = t * desk.besov(&pq_spectral(&w.u0_hat, &desk.mp), s)?;
    let remainder = diff.axpy(-t, &rhs_spectral(&w.u0_hat, &desk.mp));
    row.remainder = (2.0 * f64::from(n)).exp2() * desk.besov(&remainder, s - 2.0)?;
    Ok(row)
}

pub fn run(cfg: &RunConfig) -> Result<ExperimentReport> {
    let desk = Desk::new(cfg)?;
    let tol = &cfg.tolerances;
    let eps = cfg.sweep.epsilon;
    let extra = cfg.n_modes() - cfg.witness.n_max;
    let ns: Vec<u32> = (cfg.witness.n_min..=cfg.witness.n_max).collect();
    let rows = sweep(&ns, |&n| measure(&desk, n, extra, eps, true))?;

    let mut report = ExperimentReport::new(
        "illposed",
        cfg,
        &[
            "n",
            "t_n",
            "D_s",
            "D_s_minus_1",
            "level_n_defect",
            "main_term",
            "commutator_term",
            "pq_term",
            "remainder_term",
            "remainder_constant",
            "eps_sq_budget",
            "chain_lower_bound",
        ],
        1,
    )
    .with_param("steps_per_horizon", cfg.sweep.steps_per_horizon);
    for r in &rows {
        report.push_row(vec![
            r.n.into(),
            r.t.into(),
            r.d_s.into(),
            r.d_s1.into(),
            r.level_defect.into(),
            r.main.into(),
            r.commutator.into(),
            r.pq.into(),
            r.remainder.into(),
            (r.remainder / (eps * eps)).into(),
            (eps * eps).into(),
            r.chain_lower().into(),
        ]);
    }

    let from = LOWER_BOUND_FROM.max(cfg.witness.n_min);
    let floor_rows: Vec<&Row> = rows.iter().filter(|r| r.n >= from).collect();
    let d_s: Vec<f64> = floor_rows.iter().map(|r| r.d_s).collect();
    let (floor, top) = min_max(&d_s);
    report.check(Check::at_least(
        &format!("D_s min/max over n in [{from}, {}]", cfg.witness.n_max),
        floor / top,
        tol.floor_ratio,
    ));
    report.check(Check::assert(
        "floor c1 epsilon positive",
        floor > 0.0,
        format!("c1 epsilon = {floor:.6e}, c1 = {:.6e}", floor / eps),
    ));

    let xs: Vec<f64> = rows.iter().map(|r| f64::from(r.n)).collect();
    let d_s1: Vec<f64> = rows.iter().map(|r| r.d_s1).collect();
    report.check(Check::within("D_{s-1} log2-slope vs n", log2_slope(&xs, &d_s1), tol.decay_slope));

    let worst = rows
        .iter()
        .map(|r| r.chain_lower() / (r.d_s * (1.0 + tol.decomposition)))
        .fold(f64::NEG_INFINITY, f64::max);
    report.check(Check::assert(
        "chain lower bound <= D_s",
        rows.iter().all(|r| r.chain_lower() <= r.d_s * (1.0 + tol.decomposition)),
        format!("max (main - commutator - P+Q - remainder) / D_s = {worst:.6}"),
    ));

    let crossover = (0..rows.len()).find(|&i| rows[i..].iter().all(Row::dominated)).map(|i| rows[i].n);
    report.check(Check::assert(
        "main term dominates from the crossover on",
        crossover.is_some(),
        crossover.map_or("main term never dominates up to n_max".into(), |n| {
            format!("crossover n = {n}")
        }),
    ));
    let c_w = rows.iter().map(|r| r.remainder / (eps * eps)).fold(0.0, f64::max);
    report.check(Check::info("remainder constant", format!("max remainder / epsilon^2 = {c_w:.6e}")));

    if cfg.sweep.epsilon_doubling {
        let doubled = sweep(&floor_rows, |r| measure(&desk, r.n, extra, 2.0 * eps, false))?;
        let (floor2, _) = min_max(&doubled.iter().map(|r| r.d_s).collect::<Vec<_>>());
        let ratio = floor2 / floor;
        let band = tol.epsilon_doubling;
        report.check(Check::within("floor ratio at 2 epsilon", ratio, [2.0 * (1.0 - band), 2.0 * (1.0 + band)]));
    }

    report.plot = Some(Plot {
        title: format!("Norm defect at t_n = {eps} 2^-n, k = {}, s = {}, p = {}", desk.mp.k(), desk.s(), desk.p()),
        x_label: "n".into(),
        y_label: "Besov norm of u(t_n) - u0".into(),
        log_x: false,
        log_y: true,
        series: vec![
            Series { name: "D_s".into(), points: rows.iter().map(|r| (f64::from(r.n), r.d_s)).collect() },
            Series { name: "D_{s-1}".into(), points: rows.iter().map(|r| (f64::from(r.n), r.d_s1)).collect() },
        ],
    });
    Ok(report)
}
