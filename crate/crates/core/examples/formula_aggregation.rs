// Dimension reduction: the linear formula mini-language, weighted linear
// and geometric aggregation, and weights taken from a metadata table.

use indexflow::formula::parse_formula;
use indexflow::reduction::{
    aggregate_geometric, aggregate_linear, manual_input, weights_from_inverse_sd, AggregateSpec, FormulaSpec,
    WeightSource,
};
use indexflow::{Column, PipelineContext, TidyTable, WeightScheme};

pub fn main() -> indexflow::Result<()> {
    let f = parse_formula("~ 0.5*income + 0.3 * health - .penalty")?;
    println!("parsed: {f}");
    println!("variables: {:?}", f.variables().collect::<Vec<_>>());

    let t = TidyTable::from_columns([
        ("region", Column::text(["north", "south", "east", "west"])),
        ("income", Column::real([0.62, 0.48, 0.91, 0.55])),
        ("health", Column::real([0.80, 0.75, 0.70, 0.95])),
        ("schooling", Column::real([0.50, 0.65, 0.85, 0.60])),
        (".penalty", Column::real([0.0, 0.05, 0.1, 0.0])),
    ])?;
    let ctx = PipelineContext::init(t, "region", None, None)?;

    let ctx = manual_input(
        ctx,
        &FormulaSpec {
            name: "manual".into(),
            formula: f.to_string(),
        },
    )?;
    let w = WeightScheme::new([("income", 0.5), ("health", 0.3), ("schooling", 0.2)])?;
    let ctx = aggregate_linear(
        ctx,
        &AggregateSpec {
            name: "linear".into(),
            vars: vec!["income:schooling".into()],
            weights: WeightSource::Explicit(w.clone()),
        },
    )?;
    let ctx = aggregate_geometric(
        ctx,
        &AggregateSpec {
            name: "geometric".into(),
            vars: vec![],
            weights: WeightSource::Explicit(w),
        },
    )?;

    let meta = TidyTable::from_columns([
        ("variable", Column::text(["income", "health", "schooling"])),
        ("weight", Column::real([2.0, 1.0, 1.0])),
    ])?;
    let ctx = ctx.add_meta(meta, "variable")?;
    let ctx = aggregate_linear(
        ctx,
        &AggregateSpec {
            name: "from_meta".into(),
            vars: vec![],
            weights: WeightSource::Meta("weight".into()),
        },
    )?;
    for n in ctx.notices() {
        println!("notice [{}]: {}", n.operation, n.message);
    }

    let inv = weights_from_inverse_sd(&ctx, &["income".into(), "health".into(), "schooling".into()])?;
    println!("inverse-sd weights: {:?}", inv.iter().collect::<Vec<_>>());

    let t = ctx.table();
    let ids = t.keys("region")?;
    let cols = ["manual", "linear", "geometric", "from_meta"];
    println!("{:<6} {}", "", cols.map(|c| format!("{c:>10}")).join(""));
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<String> = cols
            .iter()
            .map(|c| format!("{:>10.4}", t.real(c).unwrap()[i].unwrap()))
            .collect();
        println!("{id:<6} {}", row.join(""));
    }
    Ok(())
}
