//! Standard normal CDF and its inverse, and the normalising step that maps
//! fitted probabilities to z-scores.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::Column;

/// Probabilities are clamped to `[EPS, 1 - EPS]` before inversion.
pub const EPS: f64 = 1e-7;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

pub fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

// Acklam's rational approximation, relative error 1.15e-9.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.024_25;

fn acklam(p: f64) -> f64 {
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -acklam(1.0 - p)
    }
}

/// Inverse of [`norm_cdf`] on the open interval; one Halley step refines
/// the rational approximation to near machine precision.
fn inverse(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    // Work in the lower tail so the residual keeps its precision.
    if p > 0.5 {
        return -inverse(1.0 - p);
    }
    let x = acklam(p);
    let e = norm_cdf(x) - p;
    let u = e / norm_pdf(x);
    x - u / (1.0 + 0.5 * x * u)
}

/// Inverse standard normal CDF. Probabilities within `EPS` of 0 or 1
/// (including exactly 0 and 1) are clamped; the flag reports that.
pub fn norm_quantile_clamped(p: f64) -> Result<(f64, bool)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability(p));
    }
    let clamped = p.clamp(EPS, 1.0 - EPS);
    Ok((inverse(clamped), clamped != p))
}

pub fn norm_quantile(p: f64) -> Result<f64> {
    norm_quantile_clamped(p).map(|(z, _)| z)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormaliseSpec {
    #[serde(default = "default_fitted")]
    pub var: String,
    #[serde(default = "default_index")]
    pub out: String,
}

fn default_fitted() -> String {
    ".fitted".into()
}

fn default_index() -> String {
    ".index".into()
}

impl Default for NormaliseSpec {
    fn default() -> Self {
        NormaliseSpec {
            var: default_fitted(),
            out: default_index(),
        }
    }
}

/// Adds `spec.out = Φ⁻¹(var)` and a `.clamped` flag column.
pub fn normalise(mut ctx: PipelineContext, spec: &NormaliseSpec) -> Result<PipelineContext> {
    let ps = ctx.table().real(&spec.var)?;
    let mut z = Vec::with_capacity(ps.len());
    let mut flags = Vec::with_capacity(ps.len());
    let mut n_clamped = 0usize;
    for p in ps {
        match p {
            Some(p) => {
                let (v, c) = norm_quantile_clamped(p)?;
                n_clamped += usize::from(c);
                z.push(Some(v));
                flags.push(Some(c));
            }
            None => {
                z.push(None);
                flags.push(None);
            }
        }
    }
    if n_clamped > 0 {
        ctx.notice("normalise", format!("{n_clamped} probabilities clamped to [{EPS}, 1 - {EPS}]"));
    }
    ctx.insert(&spec.out, Column::Real(z))?;
    ctx.insert(".clamped", Column::Bool(flags))?;
    ctx.record(&Step::Normalise(spec.clone()));
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_is_zero() {
        assert_eq!(norm_quantile(0.5).unwrap(), 0.0);
    }

    #[test]
    fn upper_975() {
        assert!((norm_quantile(0.975).unwrap() - 1.959_964).abs() < 1e-6);
    }

    #[test]
    fn clamp_at_one() {
        let (z, c) = norm_quantile_clamped(1.0).unwrap();
        assert!(c);
        assert!((z - 5.199_337_582).abs() < 1e-6, "{z}");
        let (z0, c0) = norm_quantile_clamped(0.0).unwrap();
        assert!(c0);
        // 1 - EPS is not exact in binary, so the tails differ slightly
        assert!((z0 + z).abs() < 1e-9);
    }

    #[test]
    fn outside_unit_interval() {
        assert_eq!(norm_quantile(1.5).unwrap_err(), Error::Probability(1.5));
        assert!(norm_quantile(-0.1).is_err());
        assert!(norm_quantile(f64::NAN).is_err());
    }

    #[test]
    fn antisymmetric() {
        for p in [1e-6, 0.01, 0.2, 0.4999] {
            let a = norm_quantile(p).unwrap();
            let b = norm_quantile(1.0 - p).unwrap();
            assert!((a + b).abs() < 1e-9);
        }
    }
}
