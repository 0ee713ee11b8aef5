//! Benchmark flagging: compare a variable against a fixed, per-row or
//! data-derived threshold.

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::numeric::quantile_sorted;
use crate::pipeline::Step;
use crate::table::Column;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Fixed(f64),
    /// Per-row threshold read from another column.
    Column(String),
    /// Empirical quantile of the variable itself (linear interpolation
    /// between order statistics, over all non-null rows).
    Quantile(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Flag rows strictly below the benchmark.
    #[default]
    LowerIsWorse,
    /// Flag rows strictly above the benchmark.
    HigherIsWorse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub var: String,
    pub benchmark: Benchmark,
    #[serde(default)]
    pub orientation: Orientation,
    #[serde(default = "default_out")]
    pub out: String,
}

fn default_out() -> String {
    ".flag".into()
}

impl BenchmarkSpec {
    pub fn below(var: &str, benchmark: Benchmark) -> Self {
        BenchmarkSpec {
            var: var.to_string(),
            benchmark,
            orientation: Orientation::LowerIsWorse,
            out: default_out(),
        }
    }
}

fn thresholds(ctx: &PipelineContext, spec: &BenchmarkSpec, xs: &[Option<f64>]) -> Result<Vec<f64>> {
    let n = xs.len();
    match &spec.benchmark {
        Benchmark::Fixed(b) if b.is_finite() => Ok(vec![*b; n]),
        Benchmark::Fixed(b) => Err(Error::Benchmark(format!("benchmark value {b} is not finite"))),
        Benchmark::Column(c) => {
            let bs = ctx.table().real(c)?;
            bs.iter()
                .enumerate()
                .map(|(i, b)| b.ok_or_else(|| Error::Benchmark(format!("no benchmark at {}", ctx.row_label(i)))))
                .collect()
        }
        Benchmark::Quantile(p) => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Benchmark(format!("quantile level {p} outside [0, 1]")));
            }
            let mut vals: Vec<f64> = xs.iter().flatten().copied().collect();
            if vals.is_empty() {
                return Err(Error::Benchmark("no values to derive a benchmark from".into()));
            }
            vals.sort_by(f64::total_cmp);
            Ok(vec![quantile_sorted(&vals, *p); n])
        }
    }
}

/// Adds a boolean column `spec.out` marking rows that breach the benchmark.
pub fn set_benchmark(mut ctx: PipelineContext, spec: &BenchmarkSpec) -> Result<PipelineContext> {
    let xs = ctx.table().real(&spec.var)?;
    let bs = thresholds(&ctx, spec, &xs)?;
    let flags = xs
        .iter()
        .zip(&bs)
        .map(|(x, b)| {
            x.map(|x| match spec.orientation {
                Orientation::LowerIsWorse => x < *b,
                Orientation::HigherIsWorse => x > *b,
            })
        })
        .collect();
    ctx.insert(&spec.out, Column::Bool(flags))?;
    ctx.record(&Step::Benchmark(spec.clone()));
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TidyTable;

    fn ctx(xs: &[f64]) -> PipelineContext {
        let t = TidyTable::from_columns([
            ("id", Column::text((0..xs.len()).map(|i| format!("{i:03}")))),
            ("spi", Column::real(xs.iter().copied())),
        ])
        .unwrap();
        PipelineContext::init(t, "id", None, None).unwrap()
    }

    fn count(c: &PipelineContext) -> usize {
        match c.table().column(".flag").unwrap() {
            Column::Bool(v) => v.iter().filter(|b| **b == Some(true)).count(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn extreme_drought_line() {
        let xs = [-2.5, -2.0, -1.0, 0.3, -2.01];
        let out = set_benchmark(ctx(&xs), &BenchmarkSpec::below("spi", Benchmark::Fixed(-2.0))).unwrap();
        assert_eq!(
            out.table().column(".flag").unwrap(),
            &Column::Bool(vec![Some(true), Some(false), Some(false), Some(false), Some(true)])
        );
    }

    #[test]
    fn unreachable_benchmark() {
        let xs = [3.0, 1.0, 2.0];
        let out = set_benchmark(ctx(&xs), &BenchmarkSpec::below("spi", Benchmark::Fixed(0.0))).unwrap();
        assert_eq!(count(&out), 0);
    }

    #[test]
    fn tenth_percentile_flags_ten() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        let out = set_benchmark(ctx(&xs), &BenchmarkSpec::below("spi", Benchmark::Quantile(0.1))).unwrap();
        assert_eq!(count(&out), 10);
    }

    #[test]
    fn higher_is_worse() {
        let spec = BenchmarkSpec {
            orientation: Orientation::HigherIsWorse,
            ..BenchmarkSpec::below("spi", Benchmark::Fixed(1.0))
        };
        let out = set_benchmark(ctx(&[0.0, 1.0, 2.0]), &spec).unwrap();
        assert_eq!(count(&out), 1);
    }

    #[test]
    fn column_benchmark_requires_values() {
        let t = TidyTable::from_columns([
            ("id", Column::text(["a", "b"])),
            ("spi", Column::real([0.0, 0.0])),
            ("b", Column::Real(vec![Some(1.0), None])),
        ])
        .unwrap();
        let c = PipelineContext::init(t, "id", None, None).unwrap();
        let err = set_benchmark(c, &BenchmarkSpec::below("spi", Benchmark::Column("b".into()))).unwrap_err();
        assert!(matches!(err, Error::Benchmark(_)));
    }
}
