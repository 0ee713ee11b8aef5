// Shape-changing transforms (log, sqrt, cube root) and shape-preserving
// rescaling (centre, z-score, min-max), globally or per entity.

use indexflow::synthetic::{default_stations, station_table};
use indexflow::transform::{rescale, transform, RescaleSpec, ScaleKind, TransformKind, TransformSpec};
use indexflow::{PipelineContext, YearMonth};

pub fn main() -> indexflow::Result<()> {
    let t = station_table(&default_stations(), YearMonth::new(2001, 1)?, 12, 5);
    let mut ctx = PipelineContext::init(t, "id", Some("ym"), Some("month"))?;

    for kind in [TransformKind::Log, TransformKind::Sqrt, TransformKind::Cbrt] {
        ctx = transform(ctx, &TransformSpec { var: "prcp".into(), kind })?;
    }
    ctx = rescale(
        ctx,
        &RescaleSpec {
            var: "prcp".into(),
            kind: ScaleKind::Zscore,
            per_entity: true,
        },
    )?;
    ctx = rescale(
        ctx,
        &RescaleSpec {
            var: "tavg".into(),
            kind: ScaleKind::Minmax,
            per_entity: false,
        },
    )?;

    let t = ctx.table();
    let cols = ["prcp", "prcp_log", "prcp_sqrt", "prcp_cbrt", "prcp_zscore", "tavg_minmax"];
    println!("{:<6}{}", "id", cols.map(|c| format!("{c:>12}")).join(""));
    let ids = t.keys("id")?;
    for i in (0..t.nrows()).step_by(3) {
        let row: Vec<String> = cols.iter().map(|c| format!("{:>12.3}", t.real(c).unwrap()[i].unwrap())).collect();
        println!("{:<6}{}", ids[i], row.join(""));
    }

    // log of a non-positive value is rejected with the offending rows
    let bad = rescale(
        ctx,
        &RescaleSpec {
            var: "prcp_zscore".into(),
            kind: ScaleKind::Center,
            per_entity: false,
        },
    )
    .and_then(|c| {
        transform(
            c,
            &TransformSpec {
                var: "prcp_zscore_center".into(),
                kind: TransformKind::Log,
            },
        )
    });
    println!("log of centred values: {}", bad.unwrap_err());
    Ok(())
}
