//! Quantile-method bootstrap intervals from replicated index output.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::context::group_rows;
use crate::error::{Error, Result};
use crate::fit::REP_COL;
use crate::grid::VALUE_COL;
use crate::numeric::quantile_sorted;
use crate::table::{Column, TidyTable};

pub const DEFAULT_LEVELS: [f64; 2] = [0.8, 0.95];

/// Interval estimate at one key.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalPoint {
    /// Row of the source table holding replicate 0 (or the first row of
    /// the key when no replicate 0 exists).
    pub row: usize,
    /// Value of replicate 0.
    pub point: Option<f64>,
    /// Number of non-null bootstrap replicates (replicate 0 excluded).
    pub n_reps: usize,
    /// `(lower, upper)` per level; `None` when flagged.
    pub bounds: Vec<Option<(f64, f64)>>,
    /// Set when fewer than two replicates survived.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSeries {
    pub levels: Vec<f64>,
    pub keys: Vec<String>,
    pub points: Vec<IntervalPoint>,
    key_table: TidyTable,
}

/// Column-name suffix for a level, e.g. `80` or `97.5`.
pub fn level_label(c: f64) -> String {
    let pct = (c * 1000.0).round() / 10.0;
    if pct.fract() == 0.0 {
        format!("{}", pct as i64)
    } else {
        format!("{pct}")
    }
}

/// Lower and upper bounds of a `c` interval from sorted replicate values.
pub fn quantile_interval(sorted: &[f64], c: f64) -> (f64, f64) {
    (quantile_sorted(sorted, (1.0 - c) / 2.0), quantile_sorted(sorted, (1.0 + c) / 2.0))
}

/// Groups `table` by `keys` and computes, per group and level `c`, the
/// `(1 - c) / 2` and `(1 + c) / 2` quantiles of the `.value` column over
/// replicates `1..` (linear interpolation between order statistics). The
/// point value is replicate 0. Without a `.rep` column every row is a
/// point estimate and every key is flagged.
pub fn bootstrap_ci(table: &TidyTable, keys: &[&str], levels: &[f64]) -> Result<IntervalSeries> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("no confidence levels".into()));
    }
    if let Some(c) = levels.iter().find(|c| !(**c > 0.0 && **c < 1.0)) {
        return Err(Error::InvalidParameter(format!("confidence level {c} outside (0, 1)")));
    }
    let values = table.real(VALUE_COL)?;
    let reps: Vec<Option<i64>> = match table.column(REP_COL) {
        Ok(Column::Integer(v)) => v.clone(),
        Ok(c) => {
            return Err(Error::ColumnType {
                column: REP_COL.into(),
                expected: "integer",
                found: c.kind().name(),
            })
        }
        Err(_) => vec![Some(0); table.nrows()],
    };
    let key_cols: Vec<Vec<String>> = keys.iter().map(|k| table.keys(k)).collect::<Result<_>>()?;
    let joined: Vec<String> = (0..table.nrows())
        .map(|i| key_cols.iter().map(|c| c[i].as_str()).collect::<Vec<_>>().join("\u{1f}"))
        .collect();

    // Deterministic output order: sorted by key, using the typed ordering
    // of the key columns.
    let mut groups = group_rows(&joined);
    let cols: Vec<&Column> = keys.iter().map(|k| table.column(k)).collect::<Result<_>>()?;
    groups.sort_by(|(_, a), (_, b)| {
        cols.iter()
            .map(|c| c.cell(a[0]).cmp_key(&c.cell(b[0])))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut points = Vec::with_capacity(groups.len());
    for (_, rows) in &groups {
        let mut by_rep: BTreeMap<i64, usize> = BTreeMap::new();
        for &i in rows {
            let r = reps[i].ok_or_else(|| Error::Schema(format!("null replicate index at row {i}")))?;
            if by_rep.insert(r, i).is_some() {
                return Err(Error::Schema(format!("replicate {r} repeated for one key")));
            }
        }
        let row0 = by_rep.get(&0).copied();
        let mut boot: Vec<f64> = by_rep
            .iter()
            .filter(|(r, _)| **r > 0)
            .filter_map(|(_, &i)| values[i])
            .collect();
        boot.sort_by(f64::total_cmp);
        let flagged = boot.len() < 2;
        let bounds = levels
            .iter()
            .map(|&c| (!flagged).then(|| quantile_interval(&boot, c)))
            .collect();
        points.push(IntervalPoint {
            row: row0.unwrap_or(rows[0]),
            point: row0.and_then(|i| values[i]),
            n_reps: boot.len(),
            bounds,
            flagged,
        });
    }
    let key_rows: Vec<usize> = points.iter().map(|p| p.row).collect();
    let mut key_table = TidyTable::new();
    for k in keys {
        key_table.insert(*k, table.column(k)?.take(&key_rows))?;
    }
    Ok(IntervalSeries {
        levels: levels.to_vec(),
        keys: keys.iter().map(|k| k.to_string()).collect(),
        points,
        key_table,
    })
}

impl IntervalSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_flagged(&self) -> usize {
        self.points.iter().filter(|p| p.flagged).count()
    }

    /// Key columns, then `.value .n_reps .flag` and `.lower_<c> .upper_<c>`
    /// per level.
    pub fn to_table(&self) -> Result<TidyTable> {
        let mut t = self.key_table.clone();
        t.insert(VALUE_COL, Column::Real(self.points.iter().map(|p| p.point).collect()))?;
        t.insert(".n_reps", Column::integer(self.points.iter().map(|p| p.n_reps as i64)))?;
        t.insert(".flag", Column::Bool(self.points.iter().map(|p| Some(p.flagged)).collect()))?;
        for (j, &c) in self.levels.iter().enumerate() {
            let l = level_label(c);
            let b: Vec<Option<(f64, f64)>> = self.points.iter().map(|p| p.bounds[j]).collect();
            t.insert(format!(".lower_{l}"), Column::Real(b.iter().map(|b| b.map(|b| b.0)).collect()))?;
            t.insert(format!(".upper_{l}"), Column::Real(b.iter().map(|b| b.map(|b| b.1)).collect()))?;
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn replicated(values: &[f64]) -> TidyTable {
        TidyTable::from_columns([
            ("id", Column::text(std::iter::repeat_n("a", values.len()))),
            (REP_COL, Column::integer(0..values.len() as i64)),
            (VALUE_COL, Column::real(values.iter().copied())),
        ])
        .unwrap()
    }

    #[test]
    fn identical_replicates_give_zero_width() {
        let s = bootstrap_ci(&replicated(&[0.3; 11]), &["id"], &DEFAULT_LEVELS).unwrap();
        for b in &s.points[0].bounds {
            assert_eq!(*b, Some((0.3, 0.3)));
        }
    }

    #[test]
    fn hundred_replicates_at_80() {
        // rep 0 is the point, reps 1..=100 hold 1..=100
        let mut v = vec![-5.0];
        v.extend((1..=100).map(f64::from));
        let s = bootstrap_ci(&replicated(&v), &["id"], &[0.8]).unwrap();
        let (lo, hi) = s.points[0].bounds[0].unwrap();
        // type 7: h = 99 p + 1
        assert!((lo - 10.9).abs() < 1e-12);
        assert!((hi - 90.1).abs() < 1e-12);
        assert_eq!(s.points[0].point, Some(-5.0));
        assert_eq!(s.points[0].n_reps, 100);
    }

    #[test]
    fn one_replicate_is_flagged() {
        let s = bootstrap_ci(&replicated(&[1.0, 2.0]), &["id"], &DEFAULT_LEVELS).unwrap();
        assert!(s.points[0].flagged);
        assert_eq!(s.points[0].bounds, vec![None, None]);
    }

    #[test]
    fn no_rep_column_means_point_only() {
        let t = TidyTable::from_columns([("id", Column::text(["a", "b"])), (VALUE_COL, Column::real([1.0, 2.0]))])
            .unwrap();
        let s = bootstrap_ci(&t, &["id"], &DEFAULT_LEVELS).unwrap();
        assert_eq!(s.n_flagged(), 2);
        let out = s.to_table().unwrap();
        let names: Vec<&str> = out.names().collect();
        assert_eq!(names, ["id", ".value", ".n_reps", ".flag", ".lower_80", ".upper_80", ".lower_95", ".upper_95"]);
    }

    #[test]
    fn invalid_levels() {
        assert!(bootstrap_ci(&replicated(&[1.0; 3]), &["id"], &[1.0]).is_err());
        assert!(bootstrap_ci(&replicated(&[1.0; 3]), &["id"], &[]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(level_label(0.8), "80");
        assert_eq!(level_label(0.95), "95");
        assert_eq!(level_label(0.975), "97.5");
    }
}
