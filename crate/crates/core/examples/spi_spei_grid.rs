// SPI and SPEI over four time scales and three distributions: twelve
// combos evaluated in parallel and stacked into one long table.
//
// ```text
// cargo run --example spi_spei_grid
// ```

use indexflow::dist::Family;
use indexflow::grid::compute_indexes;
use indexflow::indexes::{spei_recipe, spi_recipe, SpeiParams, SpiParams};
use indexflow::synthetic::{default_stations, station_table};
use indexflow::{PipelineContext, YearMonth};

pub fn main() -> indexflow::Result<()> {
    let t = station_table(&default_stations(), YearMonth::new(1990, 1)?, 360, 2023);
    let ctx = PipelineContext::init(t, "id", Some("ym"), Some("month"))?;

    let scales = [6, 12, 24, 36];
    let recipes = [
        spi_recipe(&SpiParams::new(&scales))?,
        spei_recipe(&SpeiParams::new(&scales, &[Family::Gev, Family::Glo]))?,
    ];
    let res = compute_indexes(&ctx, &recipes)?;

    println!("{:<6} {:<28} {:>6}", "recipe", "combo", "rows");
    for run in &res.runs {
        println!("{:<6} {:<28} {:>6}", run.recipe, run.combo.to_string(), run.rows);
    }
    println!("stacked: {} rows x {} columns", res.table.nrows(), res.table.ncols());
    println!("columns: {}", res.table.names().collect::<Vec<_>>().join(", "));
    Ok(())
}
