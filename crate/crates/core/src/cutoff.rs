//! Smooth compactly supported profiles built from the `exp(-1/t)` mollifier.

/// Below this argument `exp(-1/t)` is treated as zero.
const MOLLIFIER_GUARD: f64 = 1e-8;

/// `exp(-1/t)` for `t > 0`, zero otherwise.
pub fn mollifier(t: f64) -> f64 {
    if t <= MOLLIFIER_GUARD {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth step: 1 for `t <= 0`, 0 for `t >= 1`, `C^inf` in between.
pub fn transition(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let a = mollifier(1.0 - t);
    let b = mollifier(t);
    a / (a + b)
}

/// Even profile equal to 1 on `|x| <= inner` and 0 on `|x| >= outer`.
pub fn plateau(x: f64, inner: f64, outer: f64) -> f64 {
    transition((x.abs() - inner) / (outer - inner))
}
