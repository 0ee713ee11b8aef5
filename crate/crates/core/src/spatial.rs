//! Regrouping entities into coarser regions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::{Column, TidyTable};
use crate::temporal::Stat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialMapping {
    /// entity id -> region id
    pub mapping: BTreeMap<String, String>,
    #[serde(default)]
    pub stat: Stat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialSpec {
    pub var: String,
    #[serde(flatten)]
    pub mapping: SpatialMapping,
}

/// Aggregates `var` over the members of each region at each time point.
///
/// The output has one row per `(region, time)` with columns id, time
/// (when set), group (when set), `var` and `.n_members`. Null member
/// values are skipped; a region/time with no non-null member is null.
pub fn spatial_aggregate(mut ctx: PipelineContext, spec: &SpatialSpec) -> Result<PipelineContext> {
    let table = ctx.table();
    let ids = table.keys(ctx.id_col())?;
    let xs = table.real(&spec.var)?;

    let unmapped: Vec<&str> = ids
        .iter()
        .filter(|id| !spec.mapping.mapping.contains_key(id.as_str()))
        .map(String::as_str)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if !unmapped.is_empty() {
        return Err(Error::Mapping(format!("unmapped ids: {}", unmapped.join(", "))));
    }

    let time_keys = match ctx.time_col() {
        Some(t) => table.keys(t)?,
        None => vec![String::new(); table.nrows()],
    };

    // (region, time key) -> (first row, sum, non-null members)
    let mut cells: BTreeMap<(String, String), (usize, f64, usize)> = BTreeMap::new();
    for i in 0..table.nrows() {
        let region = spec.mapping.mapping[&ids[i]].clone();
        let e = cells.entry((region, time_keys[i].clone())).or_insert((i, 0.0, 0));
        if let Some(x) = xs[i] {
            e.1 += x;
            e.2 += 1;
        }
    }

    let first_rows: Vec<usize> = cells.values().map(|c| c.0).collect();
    let mut cols: Vec<(String, Column)> = Vec::new();
    cols.push((
        ctx.id_col().to_string(),
        Column::text(cells.keys().map(|(r, _)| r.clone())),
    ));
    for role in [ctx.time_col(), ctx.group_col()].into_iter().flatten() {
        cols.push((role.to_string(), table.column(role)?.take(&first_rows)));
    }
    let values = cells
        .values()
        .map(|&(_, sum, n)| {
            (n > 0).then(|| match spec.mapping.stat {
                Stat::Sum => sum,
                Stat::Mean => sum / n as f64,
            })
        })
        .collect();
    cols.push((spec.var.clone(), Column::Real(values)));
    cols.push((
        ".n_members".to_string(),
        Column::integer(cells.values().map(|c| c.2 as i64)),
    ));
    let out = TidyTable::from_columns(cols)?;

    let mut keys = vec![ctx.id_col()];
    keys.extend(ctx.time_col());
    let out = out.sort_by(&keys)?;
    ctx.set_table(out);
    ctx.record(&Step::SpatialAggregate(spec.clone()));
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::YearMonth;

    fn two_stations(a: f64, b: f64) -> PipelineContext {
        let t0 = YearMonth::new(2000, 1).unwrap();
        let t = TidyTable::from_columns([
            ("id", Column::text(["a", "a", "b", "b"])),
            ("ym", Column::time([t0, t0.succ(), t0, t0.succ()])),
            ("x", Column::real([a, a, b, b])),
        ])
        .unwrap();
        PipelineContext::init(t, "id", Some("ym"), None).unwrap()
    }

    fn to_one(stat: Stat) -> SpatialSpec {
        SpatialSpec {
            var: "x".into(),
            mapping: SpatialMapping {
                mapping: [("a".into(), "r".into()), ("b".into(), "r".into())].into(),
                stat,
            },
        }
    }

    #[test]
    fn mean_of_equal_values() {
        let out = spatial_aggregate(two_stations(7.0, 7.0), &to_one(Stat::Mean)).unwrap();
        assert_eq!(out.table().real("x").unwrap(), [Some(7.0), Some(7.0)]);
    }

    #[test]
    fn hand_mean() {
        let out = spatial_aggregate(two_stations(10.0, 20.0), &to_one(Stat::Mean)).unwrap();
        assert_eq!(out.table().real("x").unwrap(), [Some(15.0), Some(15.0)]);
        assert_eq!(out.table().real(".n_members").unwrap(), [Some(2.0), Some(2.0)]);
    }

    #[test]
    fn sum_preserves_total() {
        let out = spatial_aggregate(two_stations(10.0, 20.0), &to_one(Stat::Sum)).unwrap();
        assert_eq!(out.table().real("x").unwrap(), [Some(30.0), Some(30.0)]);
    }

    #[test]
    fn identity_mapping() {
        let ctx = two_stations(1.0, 2.0);
        let spec = SpatialSpec {
            var: "x".into(),
            mapping: SpatialMapping {
                mapping: [("a".into(), "a".into()), ("b".into(), "b".into())].into(),
                stat: Stat::Mean,
            },
        };
        let before = ctx.table().clone();
        let out = spatial_aggregate(ctx, &spec).unwrap();
        assert_eq!(out.table().real("x").unwrap(), before.real("x").unwrap());
        assert_eq!(out.table().keys("id").unwrap(), before.keys("id").unwrap());
        assert_eq!(out.table().keys("ym").unwrap(), before.keys("ym").unwrap());
    }

    #[test]
    fn unmapped_id() {
        let mut spec = to_one(Stat::Sum);
        spec.mapping.mapping.remove("b");
        assert!(matches!(spatial_aggregate(two_stations(1.0, 1.0), &spec), Err(Error::Mapping(_))));
    }
}
