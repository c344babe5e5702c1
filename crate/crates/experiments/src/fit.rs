/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "slope needs two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    slope(&lx, &ly)
}

/// Slope of `log2 y` against `x`.
pub fn log2_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let ly: Vec<f64> = ys.iter().map(|y| y.log2()).collect();
    slope(xs, &ly)
}

/// Log-spaced ladder of `points` values from `lo` to `hi` inclusive.
pub fn log_ladder(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo * (step * i as f64).exp() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_laws() {
        let ts = log_ladder(1e-4, 1e-2, 8);
        assert_eq!(ts.len(), 8);
        assert!((ts[0] - 1e-4).abs() < 1e-18 && ts[7] == 1e-2);
        let ds: Vec<f64> = ts.iter().map(|t| 3.0 * t * t).collect();
        assert!((log_log_slope(&ts, &ds) - 2.0).abs() < 1e-12);
        let ns = [4.0, 5.0, 6.0, 7.0];
        let ys: Vec<f64> = ns.iter().map(|n: &f64| 5.0 * (-n).exp2()).collect();
        assert!((log2_slope(&ns, &ys) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_of_noisy_line_matches_normal_equations() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 2.9, 5.2, 7.0];
        // normal equations by hand: sxy = 10.15, sxx = 5
        assert!((slope(&xs, &ys) - 2.03).abs() < 1e-12);
    }
}
