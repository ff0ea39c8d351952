use std::fs::File;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use super::Dataset;
use crate::error::{Error, Result};

/// A response column chosen by header name or 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<f64>>,
    width: usize,
}

fn csv_error(line: u64, message: impl Into<String>) -> Error {
    Error::Csv {
        line,
        message: message.into(),
    }
}

fn read_table(path: &Path, has_header: bool) -> Result<Table> {
    let file = File::open(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = if has_header {
        let h = reader
            .headers()
            .map_err(|e| csv_error(1, e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        Some(h)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut width = header.as_ref().map(Vec::len);
    for record in reader.records() {
        let record = record.map_err(|e| {
            csv_error(e.position().map_or(0, |p| p.line()), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        match width {
            Some(w) if w != record.len() => {
                return Err(csv_error(line, format!("expected {w} fields, found {}", record.len())));
            }
            None => width = Some(record.len()),
            _ => {}
        }
        let mut row = Vec::with_capacity(record.len());
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                let column = match &header {
                    Some(h) => format!("column '{}'", h[j]),
                    None => format!("column {j}"),
                };
                csv_error(line, format!("non-numeric value '{cell}' in {column}"))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(Table {
        header,
        rows,
        width: width.unwrap_or(0),
    })
}

/// Loads a numeric CSV into a [`Dataset`].
///
/// With a response column the other columns form the design. Without one, a
/// single-column file is read as a pure signal.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool, response: Option<&Column>) -> Result<Dataset> {
    let table = read_table(path.as_ref(), has_header)?;
    if table.rows.is_empty() {
        return Err(csv_error(0, "file has no data rows"));
    }
    let Some(response) = response else {
        if table.width != 1 {
            return Err(Error::InvalidParameter(format!(
                "{} columns but no response column given",
                table.width
            )));
        }
        return Ok(Dataset::signal(table.rows.into_iter().map(|r| r[0]).collect()));
    };
    let index = match response {
        Column::Index(i) => *i,
        Column::Name(name) => table
            .header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name))
            .ok_or_else(|| Error::InvalidParameter(format!("no column named '{name}'")))?,
    };
    if index >= table.width {
        return Err(Error::InvalidParameter(format!(
            "response column {index} out of range for {} columns",
            table.width
        )));
    }
    let n = table.rows.len();
    let p = table.width - 1;
    let mut x = Array2::zeros((n, p));
    let mut y = Vec::with_capacity(n);
    for (i, row) in table.rows.iter().enumerate() {
        y.push(row[index]);
        for (k, v) in row.iter().enumerate().filter(|(k, _)| *k != index) {
            x[[i, if k < index { k } else { k - 1 }]] = *v;
        }
    }
    let feature_names = table.header.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|(k, _)| *k != index)
            .map(|(_, s)| s)
            .collect()
    });
    let labels = !y.is_empty() && y.iter().all(|v| *v == 1.0 || *v == -1.0);
    Ok(Dataset {
        x: Some(x),
        y,
        feature_names,
        standardized: false,
        labels,
    })
}

/// Reads a numeric matrix, returning the header when present.
pub fn read_matrix(path: impl AsRef<Path>, has_header: bool) -> Result<(Array2<f64>, Option<Vec<String>>)> {
    let table = read_table(path.as_ref(), has_header)?;
    let n = table.rows.len();
    let flat: Vec<f64> = table.rows.into_iter().flatten().collect();
    let x = Array2::from_shape_vec((n, table.width), flat)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((x, table.header))
}

/// Reads a single numeric column.
pub fn read_vector(path: impl AsRef<Path>, has_header: bool) -> Result<Vec<f64>> {
    let table = read_table(path.as_ref(), has_header)?;
    if table.width > 1 {
        return Err(Error::InvalidParameter(format!(
            "expected one column, found {}",
            table.width
        )));
    }
    Ok(table.rows.into_iter().map(|r| r[0]).collect())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new().from_writer(File::create(path)?))
}

fn flush<W: Write>(w: csv::Writer<W>) -> Result<()> {
    w.into_inner()
        .map_err(|e| Error::Io(e.into_error()))?
        .flush()?;
    Ok(())
}

fn csv_write_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => csv_error(0, format!("{other:?}")),
    }
}

/// Writes a matrix; values use shortest round-trip formatting.
pub fn write_matrix(path: impl AsRef<Path>, x: &Array2<f64>, header: Option<&[String]>) -> Result<()> {
    let mut w = csv_writer(path.as_ref())?;
    if let Some(h) = header {
        w.write_record(h).map_err(csv_write_err)?;
    }
    for row in x.rows() {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_write_err)?;
    }
    flush(w)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64], header: Option<&str>) -> Result<()> {
    let mut w = csv_writer(path.as_ref())?;
    if let Some(h) = header {
        w.write_record([h]).map_err(csv_write_err)?;
    }
    for x in v {
        w.write_record([x.to_string()]).map_err(csv_write_err)?;
    }
    flush(w)
}
