// Thornthwaite potential evapotranspiration and the climatic water
// balance `D = P - PET` that SPEI is built on.

use indexflow::indexes::pet::{daylight_hours, pet_thornthwaite, PetSpec};
use indexflow::reduction::{manual_input, FormulaSpec};
use indexflow::synthetic::{default_stations, station_table};
use indexflow::{PipelineContext, YearMonth};

pub fn main() -> indexflow::Result<()> {
    for lat in [-27.5, 0.0, 45.0] {
        let hours: Vec<String> = [1, 4, 7, 10].iter().map(|&m| format!("{:.2}", daylight_hours(lat, m))).collect();
        println!("daylight at {lat:>5}: Jan/Apr/Jul/Oct = {}", hours.join(" / "));
    }

    let t = station_table(&default_stations(), YearMonth::new(2010, 1)?, 24, 3);
    let ctx = PipelineContext::init(t, "id", Some("ym"), Some("month"))?;
    let ctx = pet_thornthwaite(ctx, &PetSpec::default())?;
    let ctx = manual_input(
        ctx,
        &FormulaSpec {
            name: ".d".into(),
            formula: "prcp - .pet".into(),
        },
    )?;

    let t = ctx.table();
    let (id, ym) = (t.keys("id")?, t.time("ym")?);
    let (tavg, p, pet, d) = (t.real("tavg")?, t.real("prcp")?, t.real(".pet")?, t.real(".d")?);
    println!("{:<6} {:<8} {:>6} {:>7} {:>7} {:>8}", "id", "ym", "tavg", "prcp", "pet", "d");
    for i in (0..t.nrows()).step_by(4) {
        println!(
            "{:<6} {:<8} {:>6.1} {:>7.1} {:>7.1} {:>8.1}",
            id[i],
            ym[i].unwrap().to_string(),
            tavg[i].unwrap(),
            p[i].unwrap(),
            pet[i].unwrap(),
            d[i].unwrap()
        );
    }
    Ok(())
}
