//! Small numeric helpers shared by the fitting and summary code.

/// Finds the root of a monotone `f` inside `[lo, hi]`, starting from
/// `guess`. Newton steps use a central-difference slope; any step that
/// leaves the current bracket falls back to bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs.
pub(crate) fn polish_root(f: impl Fn(f64) -> f64, guess: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    let increasing = f_lo < 0.0;
    let mut x = guess.clamp(lo, hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        let h = 1e-7 * x.abs().max(1e-3);
        let slope = (f(x + h) - f(x - h)) / (2.0 * h);
        let mut next = x - fx / slope;
        if !(next > lo && next < hi) || !slope.is_finite() || slope == 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) || hi - lo <= f64::EPSILON * hi.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// Linear interpolation between order statistics of an ascending slice
/// (inclusive definition: position `p * (n - 1)`).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polish_finds_sqrt2() {
        let r = polish_root(|x| x * x - 2.0, 1.0, 0.0, 2.0);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn polish_decreasing() {
        let r = polish_root(|x| 1.0 - x, 5.0, -3.0, 7.0);
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quantile_matches_hand_values() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        assert!((quantile_sorted(&xs, 0.1) - 10.9).abs() < 1e-12);
        assert_eq!(quantile_sorted(&xs, 0.0), 1.0);
        assert_eq!(quantile_sorted(&xs, 1.0), 100.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0], 0.5), 1.5);
    }
}
