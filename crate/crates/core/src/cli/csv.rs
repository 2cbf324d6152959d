//! Plain CSV tables: a header row, `,` delimiters, values with 17 significant digits.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Column-oriented table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new() -> Self {
        Table { headers: Vec::new(), columns: Vec::new() }
    }

    pub fn push(&mut self, header: impl Into<String>, column: Vec<f64>) {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.len(), column.len(), "columns must have equal length");
        }
        self.headers.push(header.into());
        self.columns.push(column);
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, header: &str) -> Option<&[f64]> {
        self.headers.iter().position(|h| h == header).map(|i| self.columns[i].as_slice())
    }

    pub fn write_to(&self, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
        writeln!(out, "{}", self.headers.join(","))?;
        for row in 0..self.rows() {
            let mut first = true;
            for column in &self.columns {
                if !first {
                    out.write_all(b",")?;
                }
                first = false;
                write!(out, "{}", format_value(column[row]))?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()
    }

    pub fn read(path: &Path) -> io::Result<Table> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> io::Result<Table> {
        let invalid = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| invalid("empty CSV".into()))?;
        let headers: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut columns = vec![Vec::new(); headers.len()];
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != headers.len() {
                return Err(invalid(format!("row {} has {} fields", i + 2, fields.len())));
            }
            for (column, field) in columns.iter_mut().zip(fields) {
                let value = if field.is_empty() {
                    f64::NAN
                } else {
                    field.parse().map_err(|_| invalid(format!("bad number `{field}` on row {}", i + 2)))?
                };
                column.push(value);
            }
        }
        Ok(Table { headers, columns })
    }
}

impl Default for Table {
    fn default() -> Self {
        Self::new()
    }
}

/// 17 significant digits; NaN is written as an empty field.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

/// Compact label for file names: `0.1`, `0.03`, `1.0`.
pub fn label(v: f64) -> String {
    format!("{v:?}")
}
