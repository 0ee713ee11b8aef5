//! Per-cell distribution fitting with optional bootstrap replication.
//!
//! A fit cell is an `(id, group)` pair, or just `id` when no group role
//! is set. Each cell is fitted on its own values; with `n_boot > 1` the
//! cell's values are additionally resampled with replacement `n_boot`
//! times and every replicate is fitted and evaluated on the observed
//! values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::context::{group_rows, PipelineContext};
use crate::dist::{fit_sample, Family, FittedDist};
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::{Column, TidyTable};

/// Column holding the replicate index when `n_boot > 1`.
pub const REP_COL: &str = ".rep";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSpec {
    pub var: String,
    pub family: Family,
    #[serde(default = "one")]
    pub n_boot: usize,
    #[serde(default = "default_out")]
    pub out: String,
    /// Cells with fewer non-null values are skipped.
    #[serde(default = "default_min_cell")]
    pub min_cell: usize,
}

fn one() -> usize {
    1
}

fn default_out() -> String {
    ".fitted".into()
}

fn default_min_cell() -> usize {
    4
}

impl FitSpec {
    pub fn new(var: &str, family: Family) -> Self {
        FitSpec {
            var: var.to_string(),
            family,
            n_boot: 1,
            out: default_out(),
            min_cell: default_min_cell(),
        }
    }

    pub fn with_boot(mut self, n_boot: usize) -> Self {
        self.n_boot = n_boot;
        self
    }
}

/// Fits for one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellFit {
    pub cell: Vec<String>,
    pub rows: Vec<usize>,
    /// Point fit first, then surviving replicates in replicate order.
    pub fits: Vec<FittedDist>,
    pub dropped_replicates: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellOutcome {
    Fitted(CellFit),
    Skipped { cell: Vec<String>, reason: String },
}

/// Independent RNG stream for one `(cell, replicate)` work unit.
fn substream(seed: u64, cell: &[String], replicate: usize) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for part in cell {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    h.update((replicate as u64).to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn cell_keys(ctx: &PipelineContext) -> Result<Vec<Vec<String>>> {
    let ids = ctx.table().keys(ctx.id_col())?;
    let groups = ctx.group_col().map(|g| ctx.table().keys(g)).transpose()?;
    Ok((0..ids.len())
        .map(|i| {
            let mut k = vec![ids[i].clone()];
            if let Some(g) = &groups {
                k.push(g[i].clone());
            }
            k
        })
        .collect())
}

fn fit_one(
    cell: Vec<String>,
    rows: Vec<usize>,
    xs: &[Option<f64>],
    spec: &FitSpec,
    seed: u64,
) -> CellOutcome {
    let values: Vec<f64> = rows.iter().filter_map(|&i| xs[i]).collect();
    if values.len() < spec.min_cell {
        return CellOutcome::Skipped {
            cell,
            reason: format!("{} values, need at least {}", values.len(), spec.min_cell),
        };
    }
    let point = match fit_sample(&values, spec.family) {
        Ok(d) => d,
        Err(e) => {
            return CellOutcome::Skipped {
                cell,
                reason: e.to_string(),
            }
        }
    };
    let mut fits = vec![FittedDist {
        dist: point,
        cell: cell.clone(),
        replicate: 0,
    }];
    let mut dropped = 0;
    if spec.n_boot > 1 {
        let mut sample = vec![0.0; values.len()];
        for r in 1..=spec.n_boot {
            let mut rng = substream(seed, &cell, r);
            for s in sample.iter_mut() {
                *s = values[rng.random_range(0..values.len())];
            }
            match fit_sample(&sample, spec.family) {
                Ok(d) => fits.push(FittedDist {
                    dist: d,
                    cell: cell.clone(),
                    replicate: r,
                }),
                Err(_) => dropped += 1,
            }
        }
    }
    CellOutcome::Fitted(CellFit {
        cell,
        rows,
        fits,
        dropped_replicates: dropped,
    })
}

/// Fits every cell of `ctx` without modifying it.
pub fn fit_cells(ctx: &PipelineContext, spec: &FitSpec) -> Result<Vec<CellOutcome>> {
    if spec.n_boot == 0 {
        return Err(Error::InvalidParameter("n_boot must be at least 1".into()));
    }
    let xs = ctx.table().real(&spec.var)?;
    let keys = cell_keys(ctx)?;
    let joined: Vec<String> = keys.iter().map(|k| k.join("\u{1f}")).collect();
    let cells: Vec<(Vec<String>, Vec<usize>)> = group_rows(&joined)
        .into_iter()
        .map(|(_, rows)| (keys[rows[0]].clone(), rows))
        .collect();
    let seed = ctx.seed();
    Ok(cells
        .into_par_iter()
        .map(|(cell, rows)| fit_one(cell, rows, &xs, spec, seed))
        .collect())
}

/// Adds `spec.out` = CDF of the cell's fitted distribution at each value.
///
/// With `n_boot > 1` the table is stacked once per replicate
/// (replicate 0 is the point fit) and a `.rep` column identifies each
/// copy. Rows of skipped cells are dropped; dropped replicates are
/// reported as notices.
pub fn distribution_fit(mut ctx: PipelineContext, spec: &FitSpec) -> Result<PipelineContext> {
    let outcomes = fit_cells(&ctx, spec)?;
    let xs = ctx.table().real(&spec.var)?;
    let n_reps = if spec.n_boot > 1 { spec.n_boot + 1 } else { 1 };

    // per replicate: (rows, fitted values)
    let mut per_rep: Vec<(Vec<usize>, Vec<Option<f64>>)> = vec![(Vec::new(), Vec::new()); n_reps];
    let mut skipped = Vec::new();
    let mut dropped = 0;
    for o in outcomes {
        match o {
            CellOutcome::Skipped { cell, reason } => skipped.push(format!("{} ({reason})", cell.join("/"))),
            CellOutcome::Fitted(cf) => {
                dropped += cf.dropped_replicates;
                for f in &cf.fits {
                    let (rows, vals) = &mut per_rep[f.replicate];
                    for &i in &cf.rows {
                        rows.push(i);
                        vals.push(xs[i].map(|x| f.dist.cdf(x)));
                    }
                }
            }
        }
    }
    if !skipped.is_empty() {
        ctx.notice("distribution_fit", format!("skipped cells: {}", skipped.join("; ")));
    }
    if dropped > 0 {
        ctx.notice("distribution_fit", format!("{dropped} bootstrap replicates dropped as infeasible"));
    }

    let mut parts = Vec::with_capacity(n_reps);
    for (r, (mut rows, vals)) in per_rep.into_iter().enumerate() {
        // restore table order within the replicate
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&j| rows[j]);
        let vals: Vec<Option<f64>> = order.iter().map(|&j| vals[j]).collect();
        rows = order.iter().map(|&j| rows[j]).collect();
        let mut t = ctx.table().take(&rows);
        t.insert(&spec.out, Column::Real(vals))?;
        if n_reps > 1 {
            t.insert(REP_COL, Column::integer(std::iter::repeat_n(r as i64, rows.len())))?;
        }
        parts.push(t);
    }
    let table = if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        TidyTable::vstack(&parts)?
    };
    ctx.set_table(table);
    ctx.record(&Step::DistributionFit(spec.clone()));
    Ok(ctx)
}
