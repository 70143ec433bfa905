//! CSV readers and writers for datasets, prediction matrices and tables.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a value
//! parsed back from a file compares equal to the one written.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::matrix::PredictionMatrix;
use crate::pipeline::Dataset;

fn parse_field(s: &str, line: u64, column: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}, column '{column}': '{s}' is not a number")))
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<csv::StringRecord>)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let records = rdr.records().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((header, records))
}

/// Dataset with a header row; the last column is the response.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let (header, records) = read_table(path)?;
    if header.len() < 2 {
        return Err(Error::Parse(format!(
            "{}: need at least one feature column and a response column",
            path.display()
        )));
    }
    let d = header.len() - 1;
    let mut x = Vec::with_capacity(records.len() * d);
    let mut y = Vec::with_capacity(records.len());
    for (r, rec) in records.iter().enumerate() {
        let line = r as u64 + 2;
        for (k, field) in rec.iter().enumerate() {
            let v = parse_field(field, line, &header[k])?;
            if k < d {
                x.push(v);
            } else {
                y.push(v);
            }
        }
    }
    Dataset::new(x, d, y)
}

pub fn dataset_to_csv(data: &Dataset) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=data.d()).map(|k| format!("x{k}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for i in 0..data.n() {
        let mut row: Vec<String> = data.row(i).iter().map(f64::to_string).collect();
        row.push(data.y()[i].to_string());
        w.write_record(&row)?;
    }
    into_bytes(w)
}

/// A prediction matrix with row identifiers, learner names and an optional response.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTable {
    pub ids: Vec<String>,
    pub learners: Vec<String>,
    pub matrix: PredictionMatrix,
    pub y: Option<Vec<f64>>,
}

/// Header `id,f_1,...,f_M[,y]`: first column row ids, then one column per learner,
/// then optionally the response in a column named `y`.
pub fn read_prediction_matrix(path: impl AsRef<Path>) -> Result<PredictionTable> {
    let path = path.as_ref();
    let (header, records) = read_table(path)?;
    let has_y = header.last().is_some_and(|h| h == "y");
    let m = header.len().saturating_sub(1 + usize::from(has_y));
    if m == 0 || header[0] != "id" {
        return Err(Error::Parse(format!(
            "{}: expected header 'id,f_1,...,f_M[,y]'",
            path.display()
        )));
    }
    let mut ids = Vec::with_capacity(records.len());
    let mut values = Vec::with_capacity(records.len() * m);
    let mut y = Vec::new();
    for (r, rec) in records.iter().enumerate() {
        let line = r as u64 + 2;
        ids.push(rec[0].trim().to_string());
        for k in 1..=m {
            values.push(parse_field(&rec[k], line, &header[k])?);
        }
        if has_y {
            y.push(parse_field(&rec[m + 1], line, "y")?);
        }
    }
    Ok(PredictionTable {
        ids,
        learners: header[1..=m].to_vec(),
        matrix: PredictionMatrix::from_row_major(records.len(), m, values)?,
        y: has_y.then_some(y),
    })
}

pub fn prediction_matrix_to_csv(table: &PredictionTable) -> Result<Vec<u8>> {
    let f = &table.matrix;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend(table.learners.iter().cloned());
    if table.y.is_some() {
        header.push("y".into());
    }
    w.write_record(&header)?;
    for i in 0..f.rows() {
        let mut row = vec![table.ids[i].clone()];
        row.extend(f.row(i).iter().map(f64::to_string));
        if let Some(y) = &table.y {
            row.push(y[i].to_string());
        }
        w.write_record(&row)?;
    }
    into_bytes(w)
}

pub(crate) fn into_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| Error::NumericFailure(format!("csv buffer: {e}")))
}

/// Write `bytes` to `path` through a temporary file in the same directory and a
/// rename, so readers never see a partial file.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no file name", path.display())))?;
    let mut tmp = PathBuf::from(path);
    tmp.set_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn create_dir(dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
