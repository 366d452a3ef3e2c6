//! Tabular output with a fixed column order, rendered as CSV or JSON.
//!
//! Every number is written with 17 significant digits so reruns are
//! byte-identical and values survive a round trip.

use std::io::{self, Write};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Undefined,
}

impl Cell {
    pub fn render(&self) -> String {
        match *self {
            // adding zero folds −0 into +0
            Cell::Num(v) if v.is_finite() => format!("{:.16e}", v + 0.0),
            Cell::Num(v) => format!("{v}"),
            Cell::Undefined => "undefined".into(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            // JSON has no NaN or infinity, so those fall back to strings like the g2 token
            Cell::Num(v) if v.is_finite() => {
                RawValue::from_string(self.render()).map_err(serde::ser::Error::custom)?.serialize(s)
            }
            _ => s.serialize_str(&self.render()),
        }
    }
}

/// Named scalars attached to a table, such as the time-independent photon block.
#[derive(Debug, Clone)]
pub struct Block {
    pub name: &'static str,
    pub entries: Vec<(&'static str, Cell)>,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub block: Option<Block>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new(), block: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a header row and LF endings. The block goes first as `# key=value` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(block) = &self.block {
            for (key, value) in &block.entries {
                out.push_str(&format!("# {key}={}\n", value.render()));
            }
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// An array of row objects, or `{block, rows}` when a block is attached.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("table serialises");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

struct Rows<'a>(&'a Table);

struct Row<'a>(&'a [String], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (key, cell) in self.0.iter().zip(self.1) {
            map.serialize_entry(key, cell)?;
        }
        map.end()
    }
}

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Row(&self.0.columns, row))?;
        }
        seq.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.block {
            None => Rows(self).serialize(s),
            Some(block) => {
                let keys: Vec<String> = block.entries.iter().map(|e| e.0.to_string()).collect();
                let values: Vec<Cell> = block.entries.iter().map(|e| e.1).collect();
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry(block.name, &Row(&keys, &values))?;
                map.serialize_entry("rows", &Rows(self))?;
                map.end()
            }
        }
    }
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind. Without a path the
/// text goes to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    let Some(path) = path else {
        let mut stdout = io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        return stdout.flush();
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
