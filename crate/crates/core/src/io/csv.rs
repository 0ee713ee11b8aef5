//! CSV and JSON-records reading and writing.
//!
//! Reals are written in Rust's shortest round-trip form, times as
//! `YYYY-MM`, booleans as `true`/`false` and nulls as empty cells, so a
//! written table reads back identically given its column kinds.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{Cell, Column, ColumnKind, TidyTable, YearMonth};

/// Column names and kinds, in order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Schema(pub Vec<(String, ColumnKind)>);

impl Schema {
    pub fn of(t: &TidyTable) -> Self {
        Schema(t.iter().map(|(n, c)| (n.to_string(), c.kind())).collect())
    }

    fn get(&self, name: &str) -> Option<ColumnKind> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }
}

fn is_null(s: &str) -> bool {
    s.is_empty() || s == "NA"
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "TRUE" => Some(true),
        "false" | "FALSE" => Some(false),
        _ => None,
    }
}

/// Narrowest kind every non-null cell parses as.
fn infer_kind(cells: &[&str]) -> ColumnKind {
    let vals: Vec<&str> = cells.iter().copied().filter(|s| !is_null(s)).collect();
    if vals.is_empty() {
        return ColumnKind::Text;
    }
    if vals.iter().all(|s| s.parse::<i64>().is_ok()) {
        ColumnKind::Integer
    } else if vals.iter().all(|s| s.parse::<f64>().is_ok()) {
        ColumnKind::Real
    } else if vals.iter().all(|s| YearMonth::parse(s).is_some()) {
        ColumnKind::Time
    } else if vals.iter().all(|s| parse_bool(s).is_some()) {
        ColumnKind::Bool
    } else {
        ColumnKind::Text
    }
}

/// Parses `cells` (1-based data line numbers in `lines`) as `kind`.
fn parse_column(name: &str, kind: ColumnKind, cells: &[&str], lines: &[usize]) -> Result<Column> {
    let err = |i: usize, what: &str| Error::Parse {
        line: lines[i],
        msg: format!("column `{name}`: `{}` is not {what}", cells[i]),
    };
    macro_rules! parse {
        ($variant:ident, $f:expr, $what:expr) => {
            Column::$variant(
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, s)| if is_null(s) { Ok(None) } else { $f(s).map(Some).ok_or_else(|| err(i, $what)) })
                    .collect::<Result<_>>()?,
            )
        };
    }
    Ok(match kind {
        ColumnKind::Text => Column::Text(cells.iter().map(|s| (!is_null(s)).then(|| s.to_string())).collect()),
        ColumnKind::Integer => parse!(Integer, |s: &str| s.parse::<i64>().ok(), "an integer"),
        ColumnKind::Real => parse!(Real, |s: &str| s.parse::<f64>().ok(), "a number"),
        ColumnKind::Time => parse!(Time, YearMonth::parse, "a year-month (YYYY-MM)"),
        ColumnKind::Bool => parse!(Bool, parse_bool, "true or false"),
    })
}

struct RawCsv {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    lines: Vec<usize>,
}

fn read_raw(reader: impl Read) -> Result<RawCsv> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut seen = HashSet::new();
    if let Some(d) = headers.iter().find(|h| !seen.insert(h.as_str())) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("duplicate column `{d}`"),
        });
    }
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != headers.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} fields, found {}", headers.len(), rec.len()),
            });
        }
        rows.push(rec.iter().map(str::to_string).collect());
        lines.push(line);
    }
    Ok(RawCsv { headers, rows, lines })
}

fn build(raw: &RawCsv, kind_of: impl Fn(&str, &[&str]) -> ColumnKind) -> Result<TidyTable> {
    let mut t = TidyTable::new();
    for (j, name) in raw.headers.iter().enumerate() {
        let cells: Vec<&str> = raw.rows.iter().map(|r| r[j].as_str()).collect();
        let kind = kind_of(name, &cells);
        t.insert(name.clone(), parse_column(name, kind, &cells, &raw.lines)?)?;
    }
    Ok(t)
}

/// Reads a CSV, inferring each column's kind (integer, real, year-month,
/// boolean, else text). Empty cells and `NA` are null. With `schema`,
/// listed columns use the given kinds instead.
pub fn read_table_csv(reader: impl Read, schema: Option<&Schema>) -> Result<TidyTable> {
    let raw = read_raw(reader)?;
    build(&raw, |name, cells| schema.and_then(|s| s.get(name)).unwrap_or_else(|| infer_kind(cells)))
}

pub fn read_table_csv_path(path: &Path, schema: Option<&Schema>) -> Result<TidyTable> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_table_csv(f, schema)
}

/// Kinds of the station schema's known columns.
pub fn station_schema() -> Schema {
    use ColumnKind::*;
    Schema(
        [
            ("id", Text),
            ("ym", Time),
            ("prcp", Real),
            ("tmax", Real),
            ("tmin", Real),
            ("tavg", Real),
            ("long", Real),
            ("lat", Real),
            ("name", Text),
        ]
        .into_iter()
        .map(|(n, k)| (n.to_string(), k))
        .collect(),
    )
}

/// Reads monthly station data (`id, ym, prcp, tmax, tmin, tavg, long,
/// lat, name`; `id` and `ym` are required, other columns are optional and
/// extra columns are inferred) and adds an integer `month` column.
/// Duplicate `(id, ym)` pairs are an error.
pub fn read_station_csv(reader: impl Read) -> Result<TidyTable> {
    let raw = read_raw(reader)?;
    for req in ["id", "ym"] {
        if !raw.headers.iter().any(|h| h == req) {
            return Err(Error::Schema(format!("station file has no `{req}` column")));
        }
    }
    let schema = station_schema();
    let mut t = build(&raw, |name, cells| schema.get(name).unwrap_or_else(|| infer_kind(cells)))?;

    let ids = t.keys("id")?;
    let yms = t.time("ym")?.to_vec();
    let mut seen = HashSet::new();
    for (i, ym) in yms.iter().enumerate() {
        let ym = ym.ok_or_else(|| Error::Parse {
            line: raw.lines[i],
            msg: "missing ym".into(),
        })?;
        if !seen.insert((ids[i].as_str(), ym)) {
            return Err(Error::DuplicateKey {
                id: ids[i].clone(),
                time: ym.to_string(),
            });
        }
    }
    let month = Column::Integer(yms.iter().map(|ym| ym.map(|ym| i64::from(ym.month()))).collect());
    t.insert("month", month)?;
    Ok(t)
}

pub fn read_station_csv_path(path: &Path) -> Result<TidyTable> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_station_csv(f)
}

fn render(c: &Cell) -> String {
    c.to_string()
}

pub fn write_table_csv(t: &TidyTable, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(t.names())?;
    let cols: Vec<&Column> = t.iter().map(|(_, c)| c).collect();
    let mut rec = Vec::with_capacity(cols.len());
    for i in 0..t.nrows() {
        rec.clear();
        rec.extend(cols.iter().map(|c| render(&c.cell(i))));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn table_to_csv_string(t: &TidyTable) -> Result<String> {
    let mut buf = Vec::new();
    write_table_csv(t, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn cell_json(c: Cell) -> serde_json::Value {
    use serde_json::Value;
    match c {
        Cell::Null => Value::Null,
        Cell::Text(s) => Value::String(s),
        Cell::Integer(v) => v.into(),
        Cell::Real(v) => serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number),
        Cell::Time(t) => Value::String(t.to_string()),
        Cell::Bool(b) => Value::Bool(b),
    }
}

/// One JSON object per row, keys in column order.
pub fn table_to_json_records(t: &TidyTable) -> serde_json::Value {
    let rows = (0..t.nrows())
        .map(|i| {
            serde_json::Value::Object(t.iter().map(|(n, c)| (n.to_string(), cell_json(c.cell(i)))).collect())
        })
        .collect();
    serde_json::Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const STATIONS: &str = "id,ym,prcp,tavg,lat,name\n\
        A,1990-01,12.5,20.1,-27.5,Alpha\n\
        A,1990-02,,21.0,-27.5,Alpha\n\
        B,1990-01,3,18.0,-20.0,Beta\n";

    #[test]
    fn station_file_gets_month_column() {
        let t = read_station_csv(STATIONS.as_bytes()).unwrap();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.column("month").unwrap(), &Column::Integer(vec![Some(1), Some(2), Some(1)]));
        assert_eq!(t.column("prcp").unwrap().kind(), ColumnKind::Real);
        assert!(t.column("prcp").unwrap().is_null(1));
    }

    #[test]
    fn header_only_is_empty() {
        let t = read_station_csv("id,ym,prcp\n".as_bytes()).unwrap();
        assert_eq!(t.nrows(), 0);
        assert!(t.has("month"));
    }

    #[test]
    fn bad_month_reports_line() {
        let err = read_station_csv("id,ym,prcp\nA,1990-12,1\nA,1990-13,2\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("1990-13"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn duplicate_station_month() {
        let err = read_station_csv("id,ym\nA,1990-01\nA,1990-01\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::DuplicateKey { .. }));
    }

    #[test]
    fn missing_required_column() {
        assert!(matches!(read_station_csv("id,prcp\n".as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn inference() {
        let t = read_table_csv("a,b,c,d,e\n1,1.5,2000-01,true,x\n2,2,2000-02,false,y\n".as_bytes(), None).unwrap();
        let kinds: Vec<ColumnKind> = t.iter().map(|(_, c)| c.kind()).collect();
        use ColumnKind::*;
        assert_eq!(kinds, [Integer, Real, Time, Bool, Text]);
    }

    #[test]
    fn round_trip_with_schema() {
        let t = TidyTable::from_columns([
            ("id", Column::text(["007", "a,b"])),
            ("x", Column::Real(vec![Some(0.1 + 0.2), None])),
            ("n", Column::Integer(vec![None, Some(-3)])),
            ("t", Column::time([YearMonth::new(1990, 6).unwrap(), YearMonth::new(2022, 4).unwrap()])),
            ("f", Column::Bool(vec![Some(true), None])),
            ("e", Column::Real(vec![None, None])),
        ])
        .unwrap();
        let s = table_to_csv_string(&t).unwrap();
        let back = read_table_csv(s.as_bytes(), Some(&Schema::of(&t))).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_records() {
        let t = TidyTable::from_columns([("a", Column::text(["x"])), ("b", Column::real([1.5]))]).unwrap();
        assert_eq!(table_to_json_records(&t).to_string(), r#"[{"a":"x","b":1.5}]"#);
    }
}
