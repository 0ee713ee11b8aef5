// Gender gap index from the 14 published variable weights: composite
// single-stage, two-stage, and the dimension path, with ranks.

use indexflow::indexes::gggi::{composite_weights, weight_identity_residuals, RANK_COL};
use indexflow::indexes::{gggi_weights, idx_gggi, GggiMode, GggiParams};
use indexflow::synthetic::{gggi_table, COUNTRIES};
use indexflow::PipelineContext;

pub fn main() -> indexflow::Result<()> {
    let w = gggi_weights();
    println!("{:<44} {:>6} {:>10} {:>6} {:>6}", "variable", "V-wgt", "dimension", "D-wgt", "wgt");
    for r in &w {
        println!("{:<44} {:>6.3} {:>10} {:>6.2} {:>6.3}", r.variable, r.v_wgt, r.dimension, r.d_wgt, r.wgt);
    }
    let worst = weight_identity_residuals(&w).into_iter().map(|(_, r)| r).fold(0.0, f64::max);
    println!("max |wgt - V-wgt x D-wgt| = {worst}");
    let c = composite_weights(&w)?;
    println!("composite weights sum to {:.6}", c.sum());

    let ctx = PipelineContext::init(gggi_table(&COUNTRIES, 3), "country", None, None)?;
    let two = idx_gggi(
        &ctx,
        &w,
        &GggiParams {
            mode: GggiMode::TwoStage,
            ..GggiParams::default()
        },
    )?;
    let comp = idx_gggi(
        &ctx,
        &w,
        &GggiParams {
            mode: GggiMode::Composite,
            ..GggiParams::default()
        },
    )?;
    for n in two.runs.iter().flat_map(|r| &r.notices) {
        println!("notice [{}]: {}", n.operation, n.message);
    }

    let t = two.table.sort_by(&[RANK_COL])?;
    let ids = t.keys("country")?;
    let v = t.real(".value")?;
    let rank = t.column(RANK_COL)?;
    let comp_by_id: std::collections::HashMap<String, f64> = comp
        .table
        .keys("country")?
        .into_iter()
        .zip(comp.table.real(".value")?)
        .map(|(k, v)| (k, v.unwrap()))
        .collect();
    println!("{:>4} {:<12} {:>9} {:>9} {:>9}", "rank", "country", "two-stage", "composite", "politics");
    let pol = t.real("politics")?;
    for i in 0..t.nrows() {
        println!(
            "{:>4} {:<12} {:>9.4} {:>9.4} {:>9.4}",
            rank.cell(i),
            ids[i],
            v[i].unwrap(),
            comp_by_id[&ids[i]],
            pol[i].unwrap()
        );
    }
    Ok(())
}
