//! Serializable pipeline steps. Every operation records itself as a
//! [`Step`], so a step log can be replayed or written into a config.

use serde::{Deserialize, Serialize};

use crate::benchmark::{set_benchmark, BenchmarkSpec};
use crate::context::PipelineContext;
use crate::error::Result;
use crate::fit::{distribution_fit, FitSpec};
use crate::indexes::pet::{pet_thornthwaite, PetSpec};
use crate::normal::{normalise, NormaliseSpec};
use crate::reduction::{aggregate_geometric, aggregate_linear, manual_input, AggregateSpec, FormulaSpec};
use crate::simplify::{simplify, SimplifySpec};
use crate::spatial::{spatial_aggregate, SpatialSpec};
use crate::temporal::{temporal_rolling_window, RollingSpec};
use crate::transform::{rescale, transform, RescaleSpec, TransformSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    TemporalRollingWindow(RollingSpec),
    SpatialAggregate(SpatialSpec),
    Transform(TransformSpec),
    Rescale(RescaleSpec),
    AggregateLinear(AggregateSpec),
    AggregateGeometric(AggregateSpec),
    ManualInput(FormulaSpec),
    DistributionFit(FitSpec),
    Normalise(NormaliseSpec),
    Benchmark(BenchmarkSpec),
    Simplify(SimplifySpec),
    Pet(PetSpec),
    /// Leaves the context untouched; useful as a grid placeholder.
    Noop,
}

impl Step {
    /// `(module, operation)` as it appears in the step log.
    pub fn name(&self) -> (&'static str, &'static str) {
        match self {
            Step::TemporalRollingWindow(_) => ("temporal", "temporal_rolling_window"),
            Step::SpatialAggregate(_) => ("spatial", "spatial_aggregate"),
            Step::Transform(_) => ("transform", "transform"),
            Step::Rescale(_) => ("transform", "rescale"),
            Step::AggregateLinear(_) => ("reduction", "aggregate_linear"),
            Step::AggregateGeometric(_) => ("reduction", "aggregate_geometric"),
            Step::ManualInput(_) => ("reduction", "manual_input"),
            Step::DistributionFit(_) => ("fit", "distribution_fit"),
            Step::Normalise(_) => ("normalise", "normalise"),
            Step::Benchmark(_) => ("benchmark", "set_benchmark"),
            Step::Simplify(_) => ("simplify", "simplify"),
            Step::Pet(_) => ("pet", "pet_thornthwaite"),
            Step::Noop => ("pipeline", "noop"),
        }
    }

    pub fn apply(&self, ctx: PipelineContext) -> Result<PipelineContext> {
        match self {
            Step::TemporalRollingWindow(s) => temporal_rolling_window(ctx, s),
            Step::SpatialAggregate(s) => spatial_aggregate(ctx, s),
            Step::Transform(s) => transform(ctx, s),
            Step::Rescale(s) => rescale(ctx, s),
            Step::AggregateLinear(s) => aggregate_linear(ctx, s),
            Step::AggregateGeometric(s) => aggregate_geometric(ctx, s),
            Step::ManualInput(s) => manual_input(ctx, s),
            Step::DistributionFit(s) => distribution_fit(ctx, s),
            Step::Normalise(s) => normalise(ctx, s),
            Step::Benchmark(s) => set_benchmark(ctx, s),
            Step::Simplify(s) => simplify(ctx, s),
            Step::Pet(s) => pet_thornthwaite(ctx, s),
            Step::Noop => Ok(ctx),
        }
    }
}

/// Applies `steps` in order.
pub fn run_steps(ctx: PipelineContext, steps: &[Step]) -> Result<PipelineContext> {
    steps.iter().try_fold(ctx, |c, s| s.apply(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{Column, TidyTable, YearMonth};

    fn ctx() -> PipelineContext {
        let t = TidyTable::from_columns([
            ("id", Column::text(["a"; 5])),
            ("time", Column::time((1..=5).map(|m| YearMonth::new(2000, m).unwrap()))),
            ("x", Column::real([1.0, 2.0, 3.0, 4.0, 5.0])),
        ])
        .unwrap();
        PipelineContext::init(t, "id", Some("time"), None).unwrap()
    }

    #[test]
    fn steps_round_trip_through_json() {
        let steps = vec![
            Step::TemporalRollingWindow(RollingSpec::sum("x", 2)),
            Step::Simplify(SimplifySpec {
                var: ".agg".into(),
                scheme: crate::simplify::SimplificationScheme::drought(),
                out: ".category".into(),
            }),
            Step::Noop,
        ];
        let json = serde_json::to_string(&steps).unwrap();
        let back: Vec<Step> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, steps);
    }

    #[test]
    fn replay_reproduces_table() {
        let steps = [Step::TemporalRollingWindow(RollingSpec::sum("x", 3)), Step::Noop];
        let done = run_steps(ctx(), &steps).unwrap();
        let orig = ctx().into_table();
        let again = PipelineContext::replay(orig, done.step_log(), None).unwrap();
        assert_eq!(again.table(), done.table());
        assert_eq!(again.step_log(), done.step_log());
    }
}
