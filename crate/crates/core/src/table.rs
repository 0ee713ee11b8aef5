//! Long-format observation tables.
//!
//! A [`TidyTable`] is an ordered set of equally long, uniquely named
//! columns. Cells may be null; each column carries one of a small set of
//! value types.

use std::cmp::Ordering;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar month, the time resolution of every series in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u8,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidParameter(format!("month {month} out of range 1-12")));
        }
        Ok(YearMonth {
            year,
            month: month as u8,
        })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        u32::from(self.month)
    }

    /// Months since year 0, January.
    pub fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    pub fn from_ordinal(ord: i64) -> Self {
        YearMonth {
            year: ord.div_euclid(12) as i32,
            month: (ord.rem_euclid(12) + 1) as u8,
        }
    }

    pub fn succ(self) -> Self {
        Self::from_ordinal(self.ordinal() + 1)
    }

    pub fn offset(self, months: i64) -> Self {
        Self::from_ordinal(self.ordinal() + months)
    }

    pub fn is_leap_year(self) -> bool {
        let y = self.year;
        (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
    }

    pub fn days_in_month(self) -> u32 {
        match self.month {
            4 | 6 | 9 | 11 => 30,
            2 if self.is_leap_year() => 29,
            2 => 28,
            _ => 31,
        }
    }

    /// Parses `YYYY-MM`.
    pub fn parse(s: &str) -> Option<Self> {
        let (y, m) = s.trim().split_once('-')?;
        if y.len() != 4 || m.len() != 2 || !y.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !m.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        YearMonth::new(y.parse().ok()?, m.parse().ok()?).ok()
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl Serialize for YearMonth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        YearMonth::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad year-month `{s}`")))
    }
}

/// The value type of a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Text,
    Integer,
    Real,
    Time,
    Bool,
}

impl ColumnKind {
    pub fn name(self) -> &'static str {
        match self {
            ColumnKind::Text => "text",
            ColumnKind::Integer => "integer",
            ColumnKind::Real => "real",
            ColumnKind::Time => "time",
            ColumnKind::Bool => "bool",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Column {
    Text(Vec<Option<String>>),
    Integer(Vec<Option<i64>>),
    Real(Vec<Option<f64>>),
    Time(Vec<Option<YearMonth>>),
    Bool(Vec<Option<bool>>),
}

/// A single cell, detached from its column.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Null,
    Text(String),
    Integer(i64),
    Real(f64),
    Time(YearMonth),
    Bool(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Null => Ok(()),
            Cell::Text(s) => f.write_str(s),
            Cell::Integer(v) => write!(f, "{v}"),
            Cell::Real(v) => write!(f, "{v:?}"),
            Cell::Time(t) => write!(f, "{t}"),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Cell {
    /// Ordering used for sorting keys: nulls last, then by value.
    pub fn cmp_key(&self, other: &Cell) -> Ordering {
        use Cell::*;
        match (self, other) {
            (Null, Null) => Ordering::Equal,
            (Null, _) => Ordering::Greater,
            (_, Null) => Ordering::Less,
            (Text(a), Text(b)) => a.cmp(b),
            (Integer(a), Integer(b)) => a.cmp(b),
            (Real(a), Real(b)) => a.total_cmp(b),
            (Time(a), Time(b)) => a.cmp(b),
            (Bool(a), Bool(b)) => a.cmp(b),
            _ => self.to_string().cmp(&other.to_string()),
        }
    }
}

macro_rules! each_column {
    ($col:expr, $v:ident => $body:expr) => {
        match $col {
            Column::Text($v) => $body,
            Column::Integer($v) => $body,
            Column::Real($v) => $body,
            Column::Time($v) => $body,
            Column::Bool($v) => $body,
        }
    };
}

impl Column {
    pub fn nulls(kind: ColumnKind, n: usize) -> Column {
        match kind {
            ColumnKind::Text => Column::Text(vec![None; n]),
            ColumnKind::Integer => Column::Integer(vec![None; n]),
            ColumnKind::Real => Column::Real(vec![None; n]),
            ColumnKind::Time => Column::Time(vec![None; n]),
            ColumnKind::Bool => Column::Bool(vec![None; n]),
        }
    }

    pub fn real(values: impl IntoIterator<Item = f64>) -> Column {
        Column::Real(values.into_iter().map(Some).collect())
    }

    pub fn text<S: Into<String>>(values: impl IntoIterator<Item = S>) -> Column {
        Column::Text(values.into_iter().map(|s| Some(s.into())).collect())
    }

    pub fn integer(values: impl IntoIterator<Item = i64>) -> Column {
        Column::Integer(values.into_iter().map(Some).collect())
    }

    pub fn time(values: impl IntoIterator<Item = YearMonth>) -> Column {
        Column::Time(values.into_iter().map(Some).collect())
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            Column::Text(_) => ColumnKind::Text,
            Column::Integer(_) => ColumnKind::Integer,
            Column::Real(_) => ColumnKind::Real,
            Column::Time(_) => ColumnKind::Time,
            Column::Bool(_) => ColumnKind::Bool,
        }
    }

    pub fn len(&self) -> usize {
        each_column!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_null(&self, i: usize) -> bool {
        each_column!(self, v => v[i].is_none())
    }

    pub fn cell(&self, i: usize) -> Cell {
        match self {
            Column::Text(v) => v[i].clone().map_or(Cell::Null, Cell::Text),
            Column::Integer(v) => v[i].map_or(Cell::Null, Cell::Integer),
            Column::Real(v) => v[i].map_or(Cell::Null, Cell::Real),
            Column::Time(v) => v[i].map_or(Cell::Null, Cell::Time),
            Column::Bool(v) => v[i].map_or(Cell::Null, Cell::Bool),
        }
    }

    pub fn take(&self, idx: &[usize]) -> Column {
        match self {
            Column::Text(v) => Column::Text(idx.iter().map(|&i| v[i].clone()).collect()),
            Column::Integer(v) => Column::Integer(idx.iter().map(|&i| v[i]).collect()),
            Column::Real(v) => Column::Real(idx.iter().map(|&i| v[i]).collect()),
            Column::Time(v) => Column::Time(idx.iter().map(|&i| v[i]).collect()),
            Column::Bool(v) => Column::Bool(idx.iter().map(|&i| v[i]).collect()),
        }
    }

    fn extend_from(&mut self, other: &Column) -> bool {
        match (self, other) {
            (Column::Text(a), Column::Text(b)) => a.extend(b.iter().cloned()),
            (Column::Integer(a), Column::Integer(b)) => a.extend(b.iter().copied()),
            (Column::Real(a), Column::Real(b)) => a.extend(b.iter().copied()),
            (Column::Time(a), Column::Time(b)) => a.extend(b.iter().copied()),
            (Column::Bool(a), Column::Bool(b)) => a.extend(b.iter().copied()),
            _ => return false,
        }
        true
    }

    fn extend_nulls(&mut self, n: usize) {
        each_column!(self, v => v.extend(std::iter::repeat_n(None, n)))
    }

    /// Numeric view of an integer or real column.
    pub fn as_real(&self) -> Option<Vec<Option<f64>>> {
        match self {
            Column::Real(v) => Some(v.clone()),
            Column::Integer(v) => Some(v.iter().map(|x| x.map(|x| x as f64)).collect()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TidyTable {
    columns: IndexMap<String, Column>,
    nrows: usize,
}

impl TidyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_columns<S: Into<String>>(cols: impl IntoIterator<Item = (S, Column)>) -> Result<Self> {
        let mut t = TidyTable::new();
        for (name, col) in cols {
            let name = name.into();
            if t.columns.contains_key(&name) {
                return Err(Error::Schema(format!("duplicate column name `{name}`")));
            }
            t.insert(name, col)?;
        }
        Ok(t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Column)> {
        self.columns.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn has(&self, name: &str) -> bool {
        self.columns.contains_key(name)
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .get(name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Adds a column, or replaces an existing one in place.
    pub fn insert(&mut self, name: impl Into<String>, col: Column) -> Result<()> {
        let name = name.into();
        if self.columns.is_empty() {
            self.nrows = col.len();
        } else if col.len() != self.nrows {
            return Err(Error::Schema(format!(
                "column `{name}` has {} rows, table has {}",
                col.len(),
                self.nrows
            )));
        }
        self.columns.insert(name, col);
        Ok(())
    }

    pub fn with_column(mut self, name: impl Into<String>, col: Column) -> Result<Self> {
        self.insert(name, col)?;
        Ok(self)
    }

    pub fn remove(&mut self, name: &str) -> Option<Column> {
        let c = self.columns.shift_remove(name);
        if self.columns.is_empty() {
            self.nrows = 0;
        }
        c
    }

    pub fn rename(&mut self, from: &str, to: &str) -> Result<()> {
        if from == to {
            return Ok(());
        }
        if self.columns.contains_key(to) {
            self.columns.shift_remove(to);
        }
        let idx = self
            .columns
            .get_index_of(from)
            .ok_or_else(|| Error::UnknownColumn(from.to_string()))?;
        let (_, col) = self.columns.shift_remove_index(idx).expect("index exists");
        self.columns.shift_insert(idx.min(self.columns.len()), to.to_string(), col);
        Ok(())
    }

    /// Reorders columns: the given names first, in order, then the rest.
    pub fn reorder(&mut self, first: &[&str]) {
        let mut out = IndexMap::with_capacity(self.columns.len());
        for name in first {
            if let Some(c) = self.columns.shift_remove(*name) {
                out.insert(name.to_string(), c);
            }
        }
        out.extend(self.columns.drain(..));
        self.columns = out;
    }

    pub fn real(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let col = self.column(name)?;
        col.as_real().ok_or_else(|| Error::ColumnType {
            column: name.to_string(),
            expected: "real",
            found: col.kind().name(),
        })
    }

    pub fn time(&self, name: &str) -> Result<&[Option<YearMonth>]> {
        match self.column(name)? {
            Column::Time(v) => Ok(v),
            c => Err(Error::ColumnType {
                column: name.to_string(),
                expected: "time",
                found: c.kind().name(),
            }),
        }
    }

    /// String rendering of each cell of a column, for use as a grouping key.
    pub fn keys(&self, name: &str) -> Result<Vec<String>> {
        let col = self.column(name)?;
        Ok((0..self.nrows).map(|i| col.cell(i).to_string()).collect())
    }

    pub fn cell(&self, name: &str, i: usize) -> Result<Cell> {
        Ok(self.column(name)?.cell(i))
    }

    pub fn take(&self, idx: &[usize]) -> TidyTable {
        TidyTable {
            columns: self
                .columns
                .iter()
                .map(|(k, c)| (k.clone(), c.take(idx)))
                .collect(),
            nrows: idx.len(),
        }
    }

    pub fn filter(&self, keep: &[bool]) -> TidyTable {
        let idx: Vec<usize> = keep
            .iter()
            .enumerate()
            .filter_map(|(i, &k)| k.then_some(i))
            .collect();
        self.take(&idx)
    }

    /// Stable sort by the given columns.
    pub fn sort_by(&self, cols: &[&str]) -> Result<TidyTable> {
        let cs: Vec<&Column> = cols.iter().map(|c| self.column(c)).collect::<Result<_>>()?;
        let mut idx: Vec<usize> = (0..self.nrows).collect();
        idx.sort_by(|&a, &b| {
            cs.iter()
                .map(|c| c.cell(a).cmp_key(&c.cell(b)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        });
        Ok(self.take(&idx))
    }

    /// Stacks tables row-wise. Columns are unioned in first-seen order and
    /// missing cells are null.
    pub fn vstack(tables: &[TidyTable]) -> Result<TidyTable> {
        let mut kinds: IndexMap<String, ColumnKind> = IndexMap::new();
        for t in tables {
            for (name, col) in t.iter() {
                match kinds.get(name) {
                    Some(k) if *k != col.kind() => {
                        return Err(Error::Schema(format!(
                            "column `{name}` is {} in one table and {} in another",
                            k.name(),
                            col.kind().name()
                        )))
                    }
                    Some(_) => {}
                    None => {
                        kinds.insert(name.to_string(), col.kind());
                    }
                }
            }
        }
        let mut columns: IndexMap<String, Column> = kinds
            .iter()
            .map(|(k, kind)| (k.clone(), Column::nulls(*kind, 0)))
            .collect();
        let mut nrows = 0;
        for t in tables {
            for (name, out) in columns.iter_mut() {
                match t.columns.get(name) {
                    Some(c) => {
                        out.extend_from(c);
                    }
                    None => out.extend_nulls(t.nrows),
                }
            }
            nrows += t.nrows;
        }
        Ok(TidyTable { columns, nrows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn year_month_parse_and_order() {
        let a = YearMonth::parse("1990-01").unwrap();
        assert_eq!(a.succ().to_string(), "1990-02");
        assert_eq!(YearMonth::parse("1990-12").unwrap().succ().to_string(), "1991-01");
        assert!(YearMonth::parse("1990-13").is_none());
        assert!(YearMonth::parse("90-1").is_none());
        assert_eq!(YearMonth::from_ordinal(a.ordinal()), a);
        assert_eq!(YearMonth::new(2000, 2).unwrap().days_in_month(), 29);
        assert_eq!(YearMonth::new(1900, 2).unwrap().days_in_month(), 28);
    }

    #[test]
    fn unequal_lengths_rejected() {
        let r = TidyTable::from_columns([("a", Column::real([1.0, 2.0])), ("b", Column::real([1.0]))]);
        assert!(matches!(r, Err(Error::Schema(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        let r = TidyTable::from_columns([("a", Column::real([1.0])), ("a", Column::real([1.0]))]);
        assert!(r.is_err());
    }

    #[test]
    fn vstack_unions_columns() {
        let a = TidyTable::from_columns([("x", Column::real([1.0]))]).unwrap();
        let b = TidyTable::from_columns([("x", Column::real([2.0])), ("y", Column::text(["q"]))]).unwrap();
        let s = TidyTable::vstack(&[a, b]).unwrap();
        assert_eq!(s.nrows(), 2);
        assert_eq!(s.column("y").unwrap(), &Column::Text(vec![None, Some("q".into())]));
    }

    #[test]
    fn rename_keeps_position() {
        let mut t = TidyTable::from_columns([("a", Column::real([1.0])), ("b", Column::real([2.0]))]).unwrap();
        t.rename("a", "z").unwrap();
        assert_eq!(t.names().collect::<Vec<_>>(), ["z", "b"]);
    }
}
