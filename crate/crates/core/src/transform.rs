//! Variable transformations (shape-changing) and scaling (shape-preserving).

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::Column;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Log,
    Sqrt,
    Cbrt,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Log => "log",
            TransformKind::Sqrt => "sqrt",
            TransformKind::Cbrt => "cbrt",
        }
    }

    fn in_domain(self, x: f64) -> bool {
        match self {
            TransformKind::Log => x > 0.0,
            TransformKind::Sqrt => x >= 0.0,
            TransformKind::Cbrt => x.is_finite(),
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            TransformKind::Log => x.ln(),
            TransformKind::Sqrt => x.sqrt(),
            TransformKind::Cbrt => x.cbrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub var: String,
    pub kind: TransformKind,
}

/// Adds `<var>_<kind>`. Any value outside the transform's domain fails the
/// whole step and the error lists the offending rows.
pub fn transform(mut ctx: PipelineContext, spec: &TransformSpec) -> Result<PipelineContext> {
    let xs = ctx.table().real(&spec.var)?;
    let bad: Vec<String> = xs
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_some_and(|x| !spec.kind.in_domain(x)))
        .map(|(i, _)| ctx.row_label(i))
        .collect();
    if !bad.is_empty() {
        return Err(Error::Domain {
            op: "transform",
            column: spec.var.clone(),
            rows: bad,
        });
    }
    let out = Column::Real(xs.iter().map(|x| x.map(|x| spec.kind.apply(x))).collect());
    ctx.insert(&format!("{}_{}", spec.var, spec.kind.name()), out)?;
    ctx.record(&Step::Transform(spec.clone()));
    Ok(ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Center,
    Zscore,
    Minmax,
}

impl ScaleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScaleKind::Center => "center",
            ScaleKind::Zscore => "zscore",
            ScaleKind::Minmax => "minmax",
        }
    }
}

/// Offset and divisor of an affine rescaling `(x - offset) / divisor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingSpec {
    pub kind: ScaleKind,
    pub offset: f64,
    pub divisor: f64,
}

impl ScalingSpec {
    /// Derives offset and divisor from the non-null values. z-scores use
    /// the sample (n - 1) standard deviation.
    pub fn fit(kind: ScaleKind, xs: &[f64], column: &str) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InsufficientSample { n: 0, needed: 1 });
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let (offset, divisor) = match kind {
            ScaleKind::Center => (mean, 1.0),
            ScaleKind::Zscore => {
                if xs.len() < 2 {
                    return Err(Error::InsufficientSample { n: xs.len(), needed: 2 });
                }
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
                (mean, var.sqrt())
            }
            ScaleKind::Minmax => {
                let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi - lo)
            }
        };
        if !(divisor > 0.0) {
            return Err(Error::ConstantColumn(column.to_string()));
        }
        Ok(ScalingSpec { kind, offset, divisor })
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.offset) / self.divisor
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaleSpec {
    pub var: String,
    pub kind: ScaleKind,
    /// Fit offset/divisor separately for each entity instead of globally.
    #[serde(default)]
    pub per_entity: bool,
}

/// Adds `<var>_<kind>` = `(x - offset) / divisor`.
pub fn rescale(mut ctx: PipelineContext, spec: &RescaleSpec) -> Result<PipelineContext> {
    let xs = ctx.table().real(&spec.var)?;
    let groups = if spec.per_entity {
        ctx.entity_rows()?.into_iter().map(|(_, r)| r).collect()
    } else {
        vec![(0..xs.len()).collect::<Vec<_>>()]
    };
    let mut out = vec![None; xs.len()];
    for rows in groups {
        let vals: Vec<f64> = rows.iter().filter_map(|&i| xs[i]).collect();
        let s = ScalingSpec::fit(spec.kind, &vals, &spec.var)?;
        for i in rows {
            out[i] = xs[i].map(|x| s.apply(x));
        }
    }
    ctx.insert(&format!("{}_{}", spec.var, spec.kind.name()), Column::Real(out))?;
    ctx.record(&Step::Rescale(spec.clone()));
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TidyTable;

    fn ctx(xs: &[f64]) -> PipelineContext {
        let t = TidyTable::from_columns([
            ("id", Column::text((0..xs.len()).map(|i| format!("e{i}")))),
            ("x", Column::real(xs.iter().copied())),
        ])
        .unwrap();
        PipelineContext::init(t, "id", None, None).unwrap()
    }

    fn vals(c: &PipelineContext, name: &str) -> Vec<f64> {
        c.table().real(name).unwrap().into_iter().map(Option::unwrap).collect()
    }

    #[test]
    fn log_of_one() {
        let spec = TransformSpec { var: "x".into(), kind: TransformKind::Log };
        assert_eq!(vals(&transform(ctx(&[1.0]), &spec).unwrap(), "x_log"), [0.0]);
    }

    #[test]
    fn signed_cube_root() {
        let spec = TransformSpec { var: "x".into(), kind: TransformKind::Cbrt };
        assert_eq!(vals(&transform(ctx(&[-8.0]), &spec).unwrap(), "x_cbrt"), [-2.0]);
    }

    #[test]
    fn log_domain_error_lists_rows() {
        let spec = TransformSpec { var: "x".into(), kind: TransformKind::Log };
        match transform(ctx(&[2.0, 0.0]), &spec) {
            Err(Error::Domain { rows, .. }) => assert_eq!(rows, ["e1"]),
            other => panic!("{other:?}"),
        }
        let spec = TransformSpec { var: "x".into(), kind: TransformKind::Sqrt };
        assert!(transform(ctx(&[0.0]), &spec).is_ok());
        assert!(transform(ctx(&[-1.0]), &spec).is_err());
    }

    #[test]
    fn minmax_hand() {
        let spec = RescaleSpec { var: "x".into(), kind: ScaleKind::Minmax, per_entity: false };
        assert_eq!(vals(&rescale(ctx(&[0.0, 5.0, 10.0]), &spec).unwrap(), "x_minmax"), [0.0, 0.5, 1.0]);
    }

    #[test]
    fn zscore_idempotent_on_standardized() {
        // mean 0, sample sd 1
        let a = (1.5f64).sqrt();
        let xs = [-a, 0.0, a, 0.0];
        let spec = RescaleSpec { var: "x".into(), kind: ScaleKind::Zscore, per_entity: false };
        let out = vals(&rescale(ctx(&xs), &spec).unwrap(), "x_zscore");
        for (o, x) in out.iter().zip(xs) {
            assert!((o - x).abs() < 1e-12);
        }
    }

    #[test]
    fn center() {
        let spec = RescaleSpec { var: "x".into(), kind: ScaleKind::Center, per_entity: false };
        assert_eq!(vals(&rescale(ctx(&[1.0, 3.0]), &spec).unwrap(), "x_center"), [-1.0, 1.0]);
    }

    #[test]
    fn constant_column() {
        let spec = RescaleSpec { var: "x".into(), kind: ScaleKind::Minmax, per_entity: false };
        assert_eq!(rescale(ctx(&[2.0, 2.0]), &spec).unwrap_err(), Error::ConstantColumn("x".into()));
        let spec = RescaleSpec { kind: ScaleKind::Zscore, ..spec };
        assert!(rescale(ctx(&[2.0, 2.0]), &spec).is_err());
    }
}
