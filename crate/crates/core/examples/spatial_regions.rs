// Temporal and spatial aggregation: a 3-month rolling mean per station,
// then stations grouped into regions.

use std::collections::BTreeMap;

use indexflow::spatial::{spatial_aggregate, SpatialMapping, SpatialSpec};
use indexflow::synthetic::{station_table, StationSpec};
use indexflow::temporal::{temporal_rolling_window, RollingSpec, Stat};
use indexflow::{PipelineContext, YearMonth};

pub fn main() -> indexflow::Result<()> {
    let stations: Vec<StationSpec> = [("A1", -20.0), ("A2", -21.0), ("B1", -33.0), ("B2", -34.5), ("B3", -35.0)]
        .iter()
        .map(|(id, lat)| StationSpec::new(id, *lat))
        .collect();
    let t = station_table(&stations, YearMonth::new(2015, 1)?, 12, 9);
    let ctx = PipelineContext::init(t, "id", Some("ym"), None)?;

    let ctx = temporal_rolling_window(
        ctx,
        &RollingSpec {
            stat: Stat::Mean,
            out: "prcp_3m".into(),
            ..RollingSpec::sum("prcp", 3)
        },
    )?;

    let mapping: BTreeMap<String, String> = stations
        .iter()
        .map(|s| (s.id.clone(), if s.id.starts_with('A') { "tropics" } else { "south" }.to_string()))
        .collect();
    let ctx = spatial_aggregate(
        ctx,
        &SpatialSpec {
            var: "prcp_3m".into(),
            mapping: SpatialMapping {
                mapping,
                stat: Stat::Mean,
            },
        },
    )?;

    let t = ctx.table();
    let (id, ym, x, n) = (t.keys("id")?, t.time("ym")?, t.real("prcp_3m")?, t.column(".n_members")?);
    for i in 0..t.nrows() {
        println!("{:<8} {} {:>7.1}  ({} stations)", id[i], ym[i].unwrap(), x[i].unwrap(), n.cell(i));
    }
    Ok(())
}
