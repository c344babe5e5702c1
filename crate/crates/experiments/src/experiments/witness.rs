//! Both bounds on the witness data: the lower bound on the localized transport
//! term and the upper bounds on what it is compared against.

use besov_core::gchn::{pq_spectral, power_spectral, rhs_spectral};
use besov_core::littlewood_paley::commutator_spectral;
use besov_core::witness::{plateau_bound, LowerBoundProbe};

use crate::config::RunConfig;
use crate::desk::Desk;
use crate::error::Result;
use crate::parallel::sweep;
use crate::report::{Check, ExperimentReport};
use crate::svg::{Plot, Series};

/// Smallest index at which the lower bound is asserted.
pub const LOWER_BOUND_FROM: u32 = 4;

struct Row {
    n: u32,
    besov_norm_u0: f64,
    lower_bound: f64,
    envelope: f64,
    oscillation: f64,
    commutator: f64,
}

fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// `||P(u0) + Q(u0)||_{B^s}` and `||v0||_{B^s}` on a desk.
fn upper_norms(desk: &Desk, n_modes: u32) -> Result<(f64, f64)> {
    let w = desk.witness(n_modes)?;
    let pq = desk.besov(&pq_spectral(&w.u0_hat, &desk.mp), desk.s())?;
    let v0 = desk.besov(&rhs_spectral(&w.u0_hat, &desk.mp), desk.s())?;
    Ok((pq, v0))
}

pub fn run(cfg: &RunConfig) -> Result<ExperimentReport> {
    let desk = Desk::new(cfg)?;
    let (s, p, k) = (desk.s(), desk.p(), desk.mp.k());
    let n_modes = cfg.n_modes();
    let extra = n_modes - cfg.witness.n_max;
    let w = desk.witness(n_modes)?;
    let probe = LowerBoundProbe::new(&w, k);
    let uk = power_spectral(&w.u0_hat, k);

    let ns: Vec<u32> = (cfg.witness.n_min..=cfg.witness.n_max).collect();
    let rows = sweep(&ns, |&n| -> Result<Row> {
        let truncated = desk.witness(n + extra)?;
        let split = probe.split(n, p, &desk.fam)?;
        let comm = commutator_spectral(&uk, &w.u0_hat, n as i32, &desk.fam);
        Ok(Row {
            n,
            besov_norm_u0: desk.besov(&truncated.u0_hat, s)?,
            lower_bound: split.total,
            envelope: split.envelope,
            oscillation: split.oscillation,
            commutator: (f64::from(n) * s).exp2() * desk.fam.norm(&comm, p)?,
        })
    })?;

    let (pq, v0) = upper_norms(&desk, n_modes)?;
    let (pq_fine, v0_fine) = upper_norms(&Desk::with_grid(cfg, 2 * cfg.grid.n)?, n_modes)?;

    let mut report = ExperimentReport::new(
        "witness",
        cfg,
        &[
            "n",
            "besov_norm_u0",
            "lower_bound_quantity",
            "envelope_part",
            "oscillation_part",
            "commutator_weighted_norm",
            "pq_besov_norm",
            "v0_besov_norm",
        ],
        1,
    );
    for r in &rows {
        report.push_row(vec![
            r.n.into(),
            r.besov_norm_u0.into(),
            r.lower_bound.into(),
            r.envelope.into(),
            r.oscillation.into(),
            r.commutator.into(),
            pq.into(),
            v0.into(),
        ]);
    }

    let norms: Vec<f64> = rows.iter().map(|r| r.besov_norm_u0).collect();
    let (lo, hi) = min_max(&norms);
    report.check(Check::at_most(
        &format!("besov norm variation over N_modes {}..={}", ns[0] + extra, n_modes),
        (hi - lo) / hi,
        cfg.tolerances.besov_variation,
    ));

    let from = LOWER_BOUND_FROM.max(cfg.witness.n_min);
    let lower: Vec<f64> = rows.iter().filter(|r| r.n >= from).map(|r| r.lower_bound).collect();
    let (lo, hi) = min_max(&lower);
    report.check(Check::at_least(
        &format!("lower bound min/max over n in [{from}, {}]", cfg.witness.n_max),
        lo / hi,
        cfg.tolerances.lower_bound_ratio,
    ));

    let mut comm: Vec<f64> = rows.iter().map(|r| r.commutator).collect();
    comm.sort_by(f64::total_cmp);
    let median = if comm.len() % 2 == 1 {
        comm[comm.len() / 2]
    } else {
        0.5 * (comm[comm.len() / 2 - 1] + comm[comm.len() / 2])
    };
    report.check(Check::at_most(
        "weighted commutator max/median",
        comm[comm.len() - 1] / median,
        cfg.tolerances.commutator_spread,
    ));

    report.check(Check::assert("P+Q norm finite", pq.is_finite(), format!("{pq:.6e}")));
    report.check(Check::at_most(
        &format!("P+Q norm change, N = {} -> {}", cfg.grid.n, 2 * cfg.grid.n),
        relative_change(pq, pq_fine),
        cfg.tolerances.refinement,
    ));
    report.check(Check::at_most(
        &format!("v0 norm change, N = {} -> {}", cfg.grid.n, 2 * cfg.grid.n),
        relative_change(v0, v0_fine),
        cfg.tolerances.refinement,
    ));

    let crossover = rows.iter().find(|r| r.oscillation >= 2.0 * r.envelope).map(|r| r.n);
    report.check(Check::info(
        "oscillation dominates envelope from",
        crossover.map_or("not within the range".into(), |n| format!("n = {n}")),
    ));
    let plateau = plateau_bound(&w.u0, k, s, w.phi0());
    report.check(Check::info(
        "plateau of |u0|^k",
        format!("delta = {:.4e}, bound = {:.6e}", plateau.delta, plateau.bound),
    ));
    report.check(Check::info(
        "dropped packets bound",
        format!("{:.3e}; bump tail ratio {:.3e}", w.tail_bound(p)?, w.tail_ratio()),
    ));

    report.plot = Some(Plot {
        title: format!("Witness bounds, k = {k}, s = {s}, p = {p}"),
        x_label: "n".into(),
        y_label: "weighted norm".into(),
        log_x: false,
        log_y: true,
        series: vec![
            series("lower bound quantity", &rows, |r| r.lower_bound),
            series("weighted commutator", &rows, |r| r.commutator),
            series("besov norm of u0", &rows, |r| r.besov_norm_u0),
        ],
    });
    Ok(report)
}

fn series(name: &str, rows: &[Row], f: impl Fn(&Row) -> f64) -> Series {
    Series { name: name.into(), points: rows.iter().map(|r| (f64::from(r.n), f(r))).collect() }
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}
