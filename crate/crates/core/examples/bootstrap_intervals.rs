// Bootstrap confidence intervals for SPI-24: each fit cell is resampled
// `n_boot` times and intervals are empirical quantiles of the replicates.

use indexflow::dist::Family;
use indexflow::indexes::{idx_spi, SpiParams};
use indexflow::synthetic::{default_stations, station_table};
use indexflow::uncertainty::{bootstrap_ci, DEFAULT_LEVELS};
use indexflow::{PipelineContext, YearMonth};

pub fn main() -> indexflow::Result<()> {
    let t = station_table(&default_stations(), YearMonth::new(1990, 1)?, 120, 42);
    let ctx = PipelineContext::init_with_seed(t, "id", Some("ym"), Some("month"), 42)?;
    let params = SpiParams {
        dists: vec![Family::Gamma],
        n_boot: 100,
        ..SpiParams::new(&[24])
    };
    let res = idx_spi(&ctx, &params)?;
    println!("{} replicate rows", res.table.nrows());

    let ci = bootstrap_ci(&res.table, &["id", "ym"], &DEFAULT_LEVELS)?;
    println!("{} points, {} flagged", ci.len(), ci.n_flagged());
    let out = ci.to_table()?;
    println!("{}", out.names().collect::<Vec<_>>().join(", "));
    let (id, ym, v) = (out.keys("id")?, out.time("ym")?, out.real(".value")?);
    let (lo80, hi80, lo95, hi95) = (
        out.real(".lower_80")?,
        out.real(".upper_80")?,
        out.real(".lower_95")?,
        out.real(".upper_95")?,
    );
    for i in (0..out.nrows()).step_by(12) {
        println!(
            "{} {}  {:>7.3}  80% [{:>7.3}, {:>7.3}]  95% [{:>7.3}, {:>7.3}]",
            id[i],
            ym[i].unwrap(),
            v[i].unwrap(),
            lo80[i].unwrap(),
            hi80[i].unwrap(),
            lo95[i].unwrap(),
            hi95[i].unwrap()
        );
    }
    Ok(())
}
