// Simplifying an index into drought categories and flagging rows against
// fixed and data-derived benchmarks.

use indexflow::benchmark::{set_benchmark, Benchmark, BenchmarkSpec};
use indexflow::indexes::{idx_spi, SpiParams};
use indexflow::simplify::{simplify, SimplificationScheme, SimplifySpec};
use indexflow::synthetic::{default_stations, station_table};
use indexflow::{PipelineContext, YearMonth};

pub fn main() -> indexflow::Result<()> {
    let t = station_table(&default_stations(), YearMonth::new(1980, 1)?, 480, 17);
    let ctx = PipelineContext::init(t, "id", Some("ym"), Some("month"))?;
    let spi = idx_spi(&ctx, &SpiParams::new(&[12]))?;

    let ctx = PipelineContext::init(spi.table, "id", Some("ym"), Some("month"))?;
    let scheme = SimplificationScheme::drought();
    println!("cuts {:?}", scheme.cuts());
    let ctx = simplify(
        ctx,
        &SimplifySpec {
            var: ".value".into(),
            scheme: scheme.clone(),
            out: ".category".into(),
        },
    )?;
    let ctx = set_benchmark(
        ctx,
        &BenchmarkSpec {
            out: "below_minus_one".into(),
            ..BenchmarkSpec::below(".value", Benchmark::Fixed(-1.0))
        },
    )?;
    let ctx = set_benchmark(
        ctx,
        &BenchmarkSpec {
            out: "bottom_decile".into(),
            ..BenchmarkSpec::below(".value", Benchmark::Quantile(0.1))
        },
    )?;

    let t = ctx.table();
    let cats = t.keys(".category")?;
    let n = cats.len() as f64;
    for label in scheme.labels() {
        let k = cats.iter().filter(|c| *c == label).count();
        println!("{label:<18} {k:>4}  {:>5.1}%", 100.0 * k as f64 / n);
    }
    for flag in ["below_minus_one", "bottom_decile"] {
        let k = (0..t.nrows()).filter(|&i| t.cell(flag, i).unwrap().to_string() == "true").count();
        println!("{flag}: {k} of {} months", t.nrows());
    }
    Ok(())
}
