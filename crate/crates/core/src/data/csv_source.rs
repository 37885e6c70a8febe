use std::path::Path;

use super::DataSource;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Reads a rectangular numeric CSV (rows are samples, columns variables) and
/// centers its columns.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<DataSource> {
    DataSource::raw(read_matrix_csv(path, has_header)?)
}

/// Reads a rectangular numeric CSV as is.
pub fn read_matrix_csv(path: impl AsRef<Path>, has_header: bool) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let io_err = |e: csv::Error| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(io_err)?;

    let mut width: Option<usize> = None;
    let mut data = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(io_err)?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRows {
                path: path.to_path_buf(),
                row: line,
                expected,
                found: record.len(),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                row: line,
                column: j + 1,
                message: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    row: line,
                    column: j + 1,
                    message: format!("non-finite value {cell:?}"),
                });
            }
            data.push(v);
        }
        rows += 1;
    }
    let cols = width.unwrap_or(0);
    if rows == 0 || cols == 0 {
        return Err(Error::Io {
            path: path.to_path_buf(),
            message: "no data rows".into(),
        });
    }
    DenseMatrix::from_vec(rows, cols, data)
}
