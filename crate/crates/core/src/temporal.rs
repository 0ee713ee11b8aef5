//! Trailing rolling-window aggregation over monthly series.

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::{Column, YearMonth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Stat {
    #[default]
    Sum,
    Mean,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollingSpec {
    pub var: String,
    pub scale: usize,
    #[serde(default)]
    pub stat: Stat,
    #[serde(default = "default_agg")]
    pub out: String,
}

fn default_agg() -> String {
    ".agg".to_string()
}

impl RollingSpec {
    pub fn sum(var: &str, scale: usize) -> Self {
        RollingSpec {
            var: var.to_string(),
            scale,
            stat: Stat::Sum,
            out: default_agg(),
        }
    }
}

/// Trailing window statistic. Output element `i` covers
/// `xs[i..i + k]`; the result has `n - k + 1` elements (none when `k > n`).
/// A window containing a null yields null.
pub fn rolling(xs: &[Option<f64>], k: usize, stat: Stat) -> Vec<Option<f64>> {
    if k == 0 || k > xs.len() {
        return Vec::new();
    }
    xs.windows(k)
        .map(|w| {
            let mut acc = 0.0;
            for x in w {
                acc += (*x)?;
            }
            Some(match stat {
                Stat::Sum => acc,
                Stat::Mean => acc / k as f64,
            })
        })
        .collect()
}

/// Checks that each entity's time points advance one month at a time.
pub(crate) fn check_monthly(ctx: &PipelineContext) -> Result<()> {
    let time = ctx
        .time_col()
        .ok_or_else(|| Error::InvalidParameter("time role is not set".into()))?;
    let times = ctx.table().time(time)?;
    for (id, rows) in ctx.entity_rows()? {
        let mut prev: Option<YearMonth> = None;
        for &i in &rows {
            let t = times[i].ok_or_else(|| Error::Gap {
                id: id.clone(),
                missing: "null time".into(),
            })?;
            if let Some(p) = prev {
                if t != p.succ() {
                    return Err(Error::Gap {
                        id,
                        missing: p.succ().to_string(),
                    });
                }
            }
            prev = Some(t);
        }
    }
    Ok(())
}

/// Adds `spec.out` holding the trailing window statistic of `spec.var`
/// per entity. The first `k - 1` rows of each entity are dropped.
pub fn temporal_rolling_window(mut ctx: PipelineContext, spec: &RollingSpec) -> Result<PipelineContext> {
    if spec.scale == 0 {
        return Err(Error::InvalidParameter("rolling window scale must be at least 1".into()));
    }
    check_monthly(&ctx)?;
    let xs = ctx.table().real(&spec.var)?;
    let k = spec.scale;

    let mut keep = Vec::new();
    let mut agg = Vec::new();
    let mut short = Vec::new();
    for (id, rows) in ctx.entity_rows()? {
        let series: Vec<Option<f64>> = rows.iter().map(|&i| xs[i]).collect();
        if series.len() < k {
            short.push(id);
            continue;
        }
        keep.extend_from_slice(&rows[k - 1..]);
        agg.extend(rolling(&series, k, spec.stat));
    }
    if !short.is_empty() {
        ctx.notice(
            "temporal_rolling_window",
            format!("series shorter than scale {k}, no output for: {}", short.join(", ")),
        );
    }
    let mut table = ctx.table().take(&keep);
    table.insert(&spec.out, Column::Real(agg))?;
    ctx.set_table(table);
    ctx.record(&Step::TemporalRollingWindow(spec.clone()));
    Ok(ctx)
}
