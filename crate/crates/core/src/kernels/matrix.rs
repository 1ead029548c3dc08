use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::formats::{format_hex, parse_bits, FormatSpec};

/// Row-major matrix of packed bit patterns.
///
/// Text form: a `rows,cols,format` line followed by one line per row of
/// comma-separated patterns. On input, entries may also be decimal literals,
/// which are rounded (nearest-even) into `format`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedMatrix {
    rows: usize,
    cols: usize,
    fmt: FormatSpec,
    data: Vec<u128>,
}

impl PackedMatrix {
    pub fn new(rows: usize, cols: usize, fmt: FormatSpec, data: Vec<u128>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("matrix must be non-empty, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} elements, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&b| b & !fmt.mask() != 0) {
            return Err(Error::WidthMismatch { bits: bad, width: fmt.width(), format: fmt.name() });
        }
        Ok(PackedMatrix { rows, cols, fmt, data })
    }

    pub fn zeros(rows: usize, cols: usize, fmt: FormatSpec) -> Result<Self> {
        Self::new(rows, cols, fmt, vec![0; rows * cols])
    }

    pub fn identity(n: usize, fmt: FormatSpec) -> Result<Self> {
        let one = parse_bits("1", fmt)?;
        let data = (0..n * n).map(|k| if k / n == k % n { one } else { 0 }).collect();
        Self::new(n, n, fmt, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn fmt(&self) -> FormatSpec {
        self.fmt
    }

    pub fn data(&self) -> &[u128] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u128 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{},{}\n", self.rows, self.cols, self.fmt);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|&b| format_hex(b, self.fmt)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let fields: Vec<&str> = header.split(',').map(str::trim).collect();
        let [rows, cols, fmt] = fields.as_slice() else {
            return Err(Error::Parse(format!("matrix header `{header}` must be rows,cols,format")));
        };
        let rows: usize = rows.parse().map_err(|_| Error::Parse(format!("bad row count `{rows}`")))?;
        let cols: usize = cols.parse().map_err(|_| Error::Parse(format!("bad column count `{cols}`")))?;
        let fmt: FormatSpec = fmt.parse()?;
        let mut data = Vec::with_capacity(rows * cols);
        for (i, line) in lines.enumerate() {
            let row: Vec<&str> = line.split(',').collect();
            if row.len() != cols {
                return Err(Error::Parse(format!("matrix row {i} has {} entries, expected {cols}", row.len())));
            }
            for entry in row {
                data.push(parse_bits(entry, fmt)?);
            }
        }
        Self::new(rows, cols, fmt, data)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}
