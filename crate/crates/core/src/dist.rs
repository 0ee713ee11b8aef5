//! Gamma, generalized extreme value and generalized logistic
//! distributions, with L-moment parameter estimation.
//!
//! GEV and GLO use the `(location, scale, shape)` parameterization in
//! which a positive shape gives an upper bound:
//!
//! ```text
//! GEV  F(x) = exp(-exp(-y))       y = -ln(1 - k (x - loc) / scale) / k
//! GLO  F(x) = 1 / (1 + exp(-y))   (same y; y = (x - loc) / scale when k = 0)
//! ```

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma as gamma_fn, gamma_lr, ln_gamma};

use crate::error::{Error, Result};
use crate::lmoments::{sample_l_moments, LMoments};
use crate::numeric::polish_root;

const EULER: f64 = 0.577_215_664_901_532_9;
const LN_3: f64 = 1.098_612_288_668_109_8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gamma,
    Gev,
    Glo,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gamma => "gamma",
            Family::Gev => "gev",
            Family::Glo => "glo",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gamma" => Ok(Family::Gamma),
            "gev" => Ok(Family::Gev),
            "glo" | "loglogistic" | "log-logistic" => Ok(Family::Glo),
            other => Err(Error::InvalidParameter(format!("unknown distribution `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Distribution {
    Gamma { shape: f64, scale: f64 },
    Gev { location: f64, scale: f64, shape: f64 },
    Glo { location: f64, scale: f64, shape: f64 },
}

/// `(1 - exp(-k y)) / k`, continuous at `k = 0`.
fn shape_transform(k: f64, y: f64) -> f64 {
    if k == 0.0 {
        y
    } else {
        -(-k * y).exp_m1() / k
    }
}

/// Reduced variate `y` for GEV/GLO; `None` outside the support, with the
/// side given by the sign of `k`.
fn reduced(k: f64, z: f64) -> std::result::Result<f64, bool> {
    if k == 0.0 {
        return Ok(z);
    }
    let arg = -k * z;
    if arg <= -1.0 {
        // beyond the bound: above it when k > 0
        return Err(k > 0.0);
    }
    Ok(-arg.ln_1p() / k)
}

impl Distribution {
    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        check_positive("gamma", "shape", shape)?;
        check_positive("gamma", "scale", scale)?;
        Ok(Distribution::Gamma { shape, scale })
    }

    pub fn gev(location: f64, scale: f64, shape: f64) -> Result<Self> {
        check_positive("gev", "scale", scale)?;
        check_finite("gev", location, shape)?;
        Ok(Distribution::Gev { location, scale, shape })
    }

    pub fn glo(location: f64, scale: f64, shape: f64) -> Result<Self> {
        check_positive("glo", "scale", scale)?;
        check_finite("glo", location, shape)?;
        Ok(Distribution::Glo { location, scale, shape })
    }

    pub fn family(&self) -> Family {
        match self {
            Distribution::Gamma { .. } => Family::Gamma,
            Distribution::Gev { .. } => Family::Gev,
            Distribution::Glo { .. } => Family::Glo,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Distribution::Gamma { shape, scale } => vec![shape, scale],
            Distribution::Gev { location, scale, shape } | Distribution::Glo { location, scale, shape } => {
                vec![location, scale, shape]
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match *self {
            Distribution::Gamma { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else if x.is_infinite() {
                    1.0
                } else {
                    gamma_lr(shape, x / scale)
                }
            }
            Distribution::Gev { location, scale, shape } => match reduced(shape, (x - location) / scale) {
                Ok(y) => (-(-y).exp()).exp(),
                Err(above) => f64::from(u8::from(above)),
            },
            Distribution::Glo { location, scale, shape } => match reduced(shape, (x - location) / scale) {
                Ok(y) => 1.0 / (1.0 + (-y).exp()),
                Err(above) => f64::from(u8::from(above)),
            },
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Distribution::Gamma { shape, scale } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let y = x / scale;
                ((shape - 1.0) * y.ln() - y - ln_gamma(shape)).exp() / scale
            }
            Distribution::Gev { location, scale, shape } => match reduced(shape, (x - location) / scale) {
                // f = exp(-(1-k)y - e^{-y}) / scale
                Ok(y) => ((shape - 1.0) * y - (-y).exp()).exp() / scale,
                Err(_) => 0.0,
            },
            Distribution::Glo { location, scale, shape } => match reduced(shape, (x - location) / scale) {
                Ok(y) => {
                    let f = 1.0 / (1.0 + (-y).exp());
                    ((shape - 1.0) * y).exp() * f * (1.0 - f) / scale
                }
                Err(_) => 0.0,
            },
        }
    }

    /// Inverse CDF for `p` in the open unit interval.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Probability(p));
        }
        Ok(match *self {
            Distribution::Gamma { shape, scale } => scale * gamma_quantile(shape, p),
            Distribution::Gev { location, scale, shape } => {
                let y = -(-p.ln()).ln();
                location + scale * shape_transform(shape, y)
            }
            Distribution::Glo { location, scale, shape } => {
                let y = (p / (1.0 - p)).ln();
                location + scale * shape_transform(shape, y)
            }
        })
    }

    /// Closed-form population `(l1, l2, t3)`. Gamma has no closed-form
    /// L-skewness and reports `None`.
    pub fn lmoments(&self) -> (f64, f64, Option<f64>) {
        match *self {
            Distribution::Gamma { shape, scale } => (shape * scale, scale * gamma_l2_factor(shape), None),
            Distribution::Gev { location, scale, shape } => {
                let l2 = scale * gev_l2_factor(shape);
                let l1 = location + scale * gev_l1_factor(shape);
                (l1, l2, Some(gev_tau3(shape)))
            }
            Distribution::Glo { location, scale, shape } => {
                let l2 = scale * glo_l2_factor(shape);
                let l1 = location + scale * glo_l1_factor(shape);
                (l1, l2, Some(-shape))
            }
        }
    }
}

fn check_positive(family: &str, what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::FitInfeasible {
            family: family.to_string(),
            reason: format!("{what} must be positive, got {v}"),
        })
    }
}

fn check_finite(family: &str, a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::FitInfeasible {
            family: family.to_string(),
            reason: "non-finite parameter".into(),
        })
    }
}

/// Quantile of the unit-scale gamma distribution.
fn gamma_quantile(shape: f64, p: f64) -> f64 {
    let d = Distribution::Gamma { shape, scale: 1.0 };
    // Wilson-Hilferty start
    let z = crate::normal::norm_quantile(p).unwrap_or(0.0);
    let c = 1.0 / (9.0 * shape);
    let wh = shape * (1.0 - c + z * c.sqrt()).powi(3);
    let mut x = if wh > 0.0 { wh } else { (p * shape * gamma_fn(shape)).powf(1.0 / shape) };
    if !(x > 0.0 && x.is_finite()) {
        x = shape;
    }

    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..300 {
        let f = d.cdf(x) - p;
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let dens = d.pdf(x);
        let mut next = x - f / dens;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * x.max(1.0) };
        }
        if (next - x).abs() <= 1e-15 * x {
            return next;
        }
        x = next;
    }
    x
}

/// `l2 / scale` = Γ(α + 1/2) / (√π Γ(α))
fn gamma_l2_factor(shape: f64) -> f64 {
    (ln_gamma(shape + 0.5) - ln_gamma(shape)).exp() / PI.sqrt()
}

/// `l2 / l1` of a gamma distribution with the given shape.
fn gamma_tau2(shape: f64) -> f64 {
    gamma_l2_factor(shape) / shape
}

fn gev_tau3(k: f64) -> f64 {
    if k == 0.0 {
        return 2.0 * LN_3 / LN_2 - 3.0;
    }
    2.0 * (-k * LN_3).exp_m1() / (-k * LN_2).exp_m1() - 3.0
}

/// `l2 / scale` = (1 - 2^{-k}) Γ(1 + k) / k
fn gev_l2_factor(k: f64) -> f64 {
    let g = if k == 0.0 { LN_2 } else { -(-k * LN_2).exp_m1() / k };
    g * gamma_fn(1.0 + k)
}

/// `(l1 - loc) / scale` = (1 - Γ(1 + k)) / k
fn gev_l1_factor(k: f64) -> f64 {
    if k.abs() < 1e-6 {
        EULER - (EULER * EULER / 2.0 + PI * PI / 12.0) * k
    } else {
        (1.0 - gamma_fn(1.0 + k)) / k
    }
}

/// `l2 / scale` = kπ / sin(kπ)
fn glo_l2_factor(k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        k * PI / (k * PI).sin()
    }
}

/// `(l1 - loc) / scale` = 1/k - π / sin(kπ)
fn glo_l1_factor(k: f64) -> f64 {
    if k.abs() < 1e-4 {
        -PI * PI * k / 6.0 * (1.0 + 7.0 * PI * PI * k * k / 60.0)
    } else {
        1.0 / k - PI / (k * PI).sin()
    }
}

fn infeasible(family: Family, reason: String) -> Error {
    Error::FitInfeasible {
        family: family.name().to_string(),
        reason,
    }
}

/// Estimates parameters so that the distribution's `l1`, `l2` (and `t3`
/// for the three-parameter families) equal the sample values.
///
/// Closed-form approximations give the starting shape; a bracketed
/// Newton iteration then solves the exact L-moment relation.
pub fn fit_by_lmoments(lm: &LMoments, family: Family) -> Result<Distribution> {
    if lm.constant || !(lm.l2 > 0.0) {
        return Err(infeasible(family, format!("l2 = {} (no dispersion)", lm.l2)));
    }
    match family {
        Family::Gamma => {
            let t = lm.l2 / lm.l1;
            if !(lm.l1 > 0.0 && t > 0.0 && t < 1.0) {
                return Err(infeasible(family, format!("need l1 > 0 and 0 < l2/l1 < 1, got l1 = {}, l2/l1 = {t}", lm.l1)));
            }
            let approx = if t < 0.5 {
                let z = PI * t * t;
                (1.0 - 0.3080 * z) / (z - 0.05812 * z * z + 0.01765 * z * z * z)
            } else {
                let z = 1.0 - t;
                (0.7213 * z - 0.5947 * z * z) / (1.0 - 2.1817 * z + 1.2113 * z * z)
            };
            // tau2 is decreasing in shape; solve in log-shape
            let f = |ls: f64| gamma_tau2(ls.exp()) - t;
            let ls = polish_root(f, approx.ln(), -30.0, 40.0);
            let shape = ls.exp();
            Distribution::gamma(shape, lm.l1 / shape)
        }
        Family::Gev => {
            let t3 = three_param_t3(lm, family)?;
            let c = 2.0 / (3.0 + t3) - LN_2 / LN_3;
            let approx = 7.8590 * c + 2.9554 * c * c;
            let k = polish_root(|k| gev_tau3(k) - t3, approx, -1.0 + 1e-12, 60.0);
            let scale = lm.l2 / gev_l2_factor(k);
            let location = lm.l1 - scale * gev_l1_factor(k);
            Distribution::gev(location, scale, k)
        }
        Family::Glo => {
            let t3 = three_param_t3(lm, family)?;
            let k = -t3;
            let scale = lm.l2 / glo_l2_factor(k);
            let location = lm.l1 - scale * glo_l1_factor(k);
            Distribution::glo(location, scale, k)
        }
    }
}

fn three_param_t3(lm: &LMoments, family: Family) -> Result<f64> {
    let t3 = lm
        .t3
        .ok_or_else(|| infeasible(family, format!("L-skewness needs n >= 3, got n = {}", lm.n)))?;
    if !(t3.abs() < 1.0) {
        return Err(infeasible(family, format!("|t3| must be < 1, got {t3}")));
    }
    Ok(t3)
}

/// Sample L-moments followed by [`fit_by_lmoments`]. Gamma additionally
/// requires every value to be positive.
pub fn fit_sample(xs: &[f64], family: Family) -> Result<Distribution> {
    if family == Family::Gamma {
        if let Some(bad) = xs.iter().find(|&&x| x <= 0.0) {
            return Err(infeasible(family, format!("non-positive value {bad} in sample")));
        }
    }
    fit_by_lmoments(&sample_l_moments(xs)?, family)
}

/// A fitted distribution together with the cell and replicate it belongs to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedDist {
    pub dist: Distribution,
    pub cell: Vec<String>,
    /// 0 for the fit on the observed values, 1.. for bootstrap replicates.
    pub replicate: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lm(l1: f64, l2: f64, t3: f64) -> LMoments {
        LMoments {
            n: 100,
            l1,
            l2,
            t3: Some(t3),
            t4: None,
            constant: false,
        }
    }

    #[test]
    fn gamma_shape_three_hand_values() {
        // l2 = scale * Γ(3.5) / (√π Γ(3)) = 2 * 15/16 = 1.875
        let d = Distribution::gamma(3.0, 2.0).unwrap();
        let (l1, l2, _) = d.lmoments();
        assert!((l1 - 6.0).abs() < 1e-14);
        assert!((l2 - 1.875).abs() < 1e-12);
        let back = fit_by_lmoments(&lm(6.0, 1.875, 0.0), Family::Gamma).unwrap();
        let p = back.params();
        assert!((p[0] - 3.0).abs() < 1e-9 && (p[1] - 2.0).abs() < 1e-9, "{p:?}");
    }

    #[test]
    fn gamma_exponential_case() {
        let d = fit_by_lmoments(&lm(3.0, 1.5, 0.0), Family::Gamma).unwrap();
        match d {
            Distribution::Gamma { shape, scale } => {
                assert!((shape - 1.0).abs() < 1e-10, "{shape}");
                assert!((scale - 3.0).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn gev_gumbel_case() {
        let t3 = (9.0f64 / 8.0).ln() / LN_2;
        let d = fit_by_lmoments(&lm(0.0, 1.0, t3), Family::Gev).unwrap();
        let k = d.params()[2];
        assert!(k.abs() < 1e-10, "{k}");
    }

    #[test]
    fn glo_symmetric_case() {
        let d = fit_by_lmoments(&lm(5.0, 1.0, 0.0), Family::Glo).unwrap();
        assert_eq!(d.params()[2], 0.0);
        assert!((d.cdf(5.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn infeasible_inputs() {
        assert!(matches!(fit_by_lmoments(&lm(-1.0, 0.5, 0.0), Family::Gamma), Err(Error::FitInfeasible { .. })));
        assert!(fit_by_lmoments(&lm(1.0, 1.5, 0.0), Family::Gamma).is_err());
        assert!(fit_by_lmoments(&lm(1.0, 0.5, 1.0), Family::Gev).is_err());
        let mut no_t3 = lm(1.0, 0.5, 0.0);
        no_t3.t3 = None;
        assert!(fit_by_lmoments(&no_t3, Family::Glo).is_err());
        assert!(fit_sample(&[1.0, 0.0, 2.0, 3.0], Family::Gamma).is_err());
        assert!(fit_sample(&[2.0; 5], Family::Gev).is_err());
    }

    #[test]
    fn exponential_median() {
        let d = Distribution::gamma(1.0, 1.0).unwrap();
        assert!((d.cdf(LN_2) - 0.5).abs() < 1e-15);
        assert!((d.quantile(0.5).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn gumbel_at_location() {
        let d = Distribution::gev(0.0, 1.0, 0.0).unwrap();
        assert!((d.cdf(0.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn median_round_trip_each_family() {
        let ds = [
            Distribution::gamma(2.0, 50.0).unwrap(),
            Distribution::gev(10.0, 2.0, 0.2).unwrap(),
            Distribution::gev(10.0, 2.0, -0.2).unwrap(),
            Distribution::glo(-3.0, 0.5, 0.3).unwrap(),
        ];
        for d in ds {
            let m = d.quantile(0.5).unwrap();
            assert!((d.cdf(m) - 0.5).abs() < 1e-10, "{d:?}");
        }
    }

    #[test]
    fn support_bounds() {
        let d = Distribution::gev(0.0, 1.0, 0.5).unwrap(); // upper bound 2
        assert_eq!(d.cdf(3.0), 1.0);
        let d = Distribution::gev(0.0, 1.0, -0.5).unwrap(); // lower bound -2
        assert_eq!(d.cdf(-3.0), 0.0);
        let d = Distribution::glo(0.0, 1.0, 0.5).unwrap();
        assert_eq!(d.cdf(2.5), 1.0);
    }

    #[test]
    fn quantile_rejects_bad_p() {
        let d = Distribution::gamma(1.0, 1.0).unwrap();
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
    }

    #[test]
    fn closed_form_lmoments_invert_fit() {
        for d in [
            Distribution::gev(10.0, 2.0, 0.2).unwrap(),
            Distribution::gev(1.0, 0.5, -0.3).unwrap(),
            Distribution::glo(-3.0, 0.5, 0.3).unwrap(),
        ] {
            let (l1, l2, t3) = d.lmoments();
            let f = fit_by_lmoments(&lm(l1, l2, t3.unwrap()), d.family()).unwrap();
            for (a, b) in f.params().iter().zip(d.params()) {
                assert!((a - b).abs() < 1e-9, "{f:?} vs {d:?}");
            }
        }
    }
}
