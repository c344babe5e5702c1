//! Partition of unity and block idempotence on single packets.

use besov_core::witness::packet_spectral;

use crate::config::RunConfig;
use crate::desk::Desk;
use crate::error::Result;
use crate::parallel::sweep;
use crate::report::{Check, ExperimentReport};

/// Packets below this index overlap two annuli on purpose.
const FIRST_EXACT: u32 = 3;

pub fn run(cfg: &RunConfig) -> Result<ExperimentReport> {
    let desk = Desk::new(cfg)?;
    let partition = desk.fam.partition_defect();
    let mut report = ExperimentReport::new(
        "lp",
        cfg,
        &["n", "j", "block_error", "partition_deviation", "informational"],
        2,
    );

    let ns: Vec<u32> = (FIRST_EXACT - 1..=cfg.witness.n_max).collect();
    let rows = sweep(&ns, |&n| -> Result<Vec<(i32, f64)>> {
        let hat = packet_spectral(&desk.grid, n, &desk.bump)?;
        let f = hat.inverse();
        let sup = f.max_abs();
        Ok(desk
            .fam
            .indices()
            .map(|j| {
                let block = desk.fam.block_spectral(&hat, j).inverse();
                let err = if j == n as i32 { block.max_diff(&f) } else { block.max_abs() };
                (j, err / sup)
            })
            .collect())
    })?;

    let mut worst = 0.0f64;
    let mut below = 0.0f64;
    for (&n, blocks) in ns.iter().zip(&rows) {
        let informational = n < FIRST_EXACT;
        for &(j, err) in blocks {
            if informational {
                below = below.max(err);
            } else {
                worst = worst.max(err);
            }
            report.push_row(vec![n.into(), j.into(), err.into(), partition.into(), informational.into()]);
        }
    }
    report.check(Check::at_most("partition of unity", partition, cfg.tolerances.partition));
    report.check(Check::at_most(
        &format!("block errors, {FIRST_EXACT} <= n <= {}", cfg.witness.n_max),
        worst,
        cfg.tolerances.block_error,
    ));
    report.check(Check::info(
        &format!("block errors, n < {FIRST_EXACT}"),
        format!("max {below:.3e}; the packet support reaches the next annulus"),
    ));
    report.plot = Some(plot(&report));
    Ok(report)
}

fn plot(report: &ExperimentReport) -> crate::svg::Plot {
    let ns = report.float_column("n").unwrap_or_default();
    let errs = report.float_column("block_error").unwrap_or_default();
    let js = report.float_column("j").unwrap_or_default();
    let mut series = Vec::new();
    let mut last = f64::NAN;
    for ((&n, &j), &e) in ns.iter().zip(&js).zip(&errs) {
        if n != last {
            series.push(crate::svg::Series { name: format!("n = {n}"), points: Vec::new() });
            last = n;
        }
        let floor = e.max(1e-17);
        series.last_mut().expect("series").points.push((j, floor));
    }
    crate::svg::Plot {
        title: "Block error of single packets".into(),
        x_label: "j".into(),
        y_label: "relative block error".into(),
        log_x: false,
        log_y: true,
        series,
    }
}
