//! Dataset files. Two formats, picked by extension: `.bin` is raw
//! little-endian 64-bit floats, `.csv` is a single numeric column with an
//! optional header. A separate reader ingests one numeric column out of a
//! general CSV file.

use crate::types::{Key, KeyError};
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("unsupported dataset extension {extension:?} (expected .bin or .csv)")]
    UnsupportedExtension { extension: String },
    #[error("binary dataset length {len} is not a multiple of 8")]
    MisalignedBinary { len: usize },
    #[error("{0}")]
    InvalidKey(#[from] KeyError),
    #[error("row {row}: cannot parse {cell:?} as a number")]
    BadCell { row: usize, cell: String },
    #[error("column {wanted:?} not found; available columns: {available:?}")]
    MissingColumn { wanted: String, available: Vec<String> },
    #[error("column index {index} out of range; file has {width} columns")]
    ColumnOutOfRange { index: usize, width: usize },
    #[error("csv file is empty")]
    EmptyCsv,
}

/// Column selector for general CSV ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSpec {
    Name(String),
    Index(usize),
}

impl std::str::FromStr for ColumnSpec {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSpec::Index(i),
            Err(_) => ColumnSpec::Name(s.to_string()),
        })
    }
}

/// Loads a dataset, auto-detecting the format from the extension.
pub fn load_keys(path: &Path) -> Result<Vec<Key>, DatasetError> {
    match extension(path)?.as_str() {
        "bin" => load_bin(path),
        "csv" => load_single_column_csv(path),
        other => Err(DatasetError::UnsupportedExtension { extension: other.to_string() }),
    }
}

/// Writes a dataset in the format named by the extension.
pub fn save_keys(keys: &[Key], path: &Path) -> Result<(), DatasetError> {
    match extension(path)?.as_str() {
        "bin" => save_bin(keys, path),
        "csv" => save_csv(keys, path),
        other => Err(DatasetError::UnsupportedExtension { extension: other.to_string() }),
    }
}

fn extension(path: &Path) -> Result<String, DatasetError> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .ok_or_else(|| DatasetError::UnsupportedExtension { extension: String::new() })
}

fn load_bin(path: &Path) -> Result<Vec<Key>, DatasetError> {
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(DatasetError::MisalignedBinary { len: bytes.len() });
    }
    let mut keys = Vec::with_capacity(bytes.len() / 8);
    for (i, chunk) in bytes.chunks_exact(8).enumerate() {
        let value = f64::from_le_bytes(chunk.try_into().unwrap());
        if !value.is_finite() {
            return Err(KeyError::NonFinite { index: i, value }.into());
        }
        keys.push(Key::new(value).unwrap());
    }
    Ok(keys)
}

fn save_bin(keys: &[Key], path: &Path) -> Result<(), DatasetError> {
    let mut bytes = Vec::with_capacity(keys.len() * 8);
    for k in keys {
        bytes.extend_from_slice(&k.value().to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

// Single column, header optional: if the first record parses as a number it
// is data, otherwise it is treated as a header.
fn load_single_column_csv(path: &Path) -> Result<Vec<Key>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(path)?;
    let mut keys = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let cell = record.get(0).unwrap_or("").trim();
        match cell.parse::<f64>() {
            Ok(value) => {
                if !value.is_finite() {
                    return Err(KeyError::NonFinite { index: row, value }.into());
                }
                keys.push(Key::new(value).unwrap());
            }
            Err(_) if row == 0 => continue, // header line
            Err(_) => {
                return Err(DatasetError::BadCell { row: row + 1, cell: cell.to_string() })
            }
        }
    }
    Ok(keys)
}

fn save_csv(keys: &[Key], path: &Path) -> Result<(), DatasetError> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "key")?;
    for k in keys {
        writeln!(out, "{}", k.value())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads one numeric column out of a general CSV file with a header row.
/// The column may be named or given as a zero-based index; parse failures
/// report the offending row.
pub fn load_csv_keys(path: &Path, column: &ColumnSpec) -> Result<Vec<Key>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();
    if headers.is_empty() {
        return Err(DatasetError::EmptyCsv);
    }
    let col = match column {
        ColumnSpec::Index(i) => {
            if *i >= headers.len() {
                return Err(DatasetError::ColumnOutOfRange { index: *i, width: headers.len() });
            }
            *i
        }
        ColumnSpec::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DatasetError::MissingColumn {
                wanted: name.clone(),
                available: headers.clone(),
            })?,
    };

    let mut keys = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let cell = record.get(col).unwrap_or("").trim().to_string();
        let value: f64 = cell
            .parse()
            .map_err(|_| DatasetError::BadCell { row: row + 2, cell: cell.clone() })?;
        if !value.is_finite() {
            return Err(KeyError::NonFinite { index: row, value }.into());
        }
        keys.push(Key::new(value).unwrap());
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, Distribution};
    use crate::types::keys_to_raw;

    #[test]
    fn bin_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.bin");
        let keys = generate(Distribution::standard_normal(), 1000, 4).unwrap();
        save_keys(&keys, &path).unwrap();
        assert_eq!(load_keys(&path).unwrap(), keys);
    }

    #[test]
    fn csv_round_trips_against_binary() {
        let dir = tempfile::tempdir().unwrap();
        let keys = generate(Distribution::uniform01(), 1_000_000, 9).unwrap();
        let bin = dir.path().join("d.bin");
        let csv = dir.path().join("d.csv");
        save_keys(&keys, &bin).unwrap();
        save_keys(&keys, &csv).unwrap();
        assert_eq!(load_keys(&bin).unwrap(), load_keys(&csv).unwrap());
    }

    #[test]
    fn headerless_csv_is_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "5\n1\n9\n").unwrap();
        assert_eq!(keys_to_raw(&load_keys(&path).unwrap()), vec![5.0, 1.0, 9.0]);
    }

    #[test]
    fn misaligned_binary_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.bin");
        std::fs::write(&path, [0u8; 11]).unwrap();
        assert!(matches!(load_keys(&path), Err(DatasetError::MisalignedBinary { len: 11 })));
    }

    #[test]
    fn unknown_extension_is_rejected() {
        let err = load_keys(Path::new("data.parquet")).unwrap_err();
        assert!(matches!(err, DatasetError::UnsupportedExtension { .. }));
    }

    #[test]
    fn column_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "id,timestamp,word\na,5,x\nb,1,y\nc,9,z\n").unwrap();
        let keys = load_csv_keys(&path, &ColumnSpec::Name("timestamp".into())).unwrap();
        assert_eq!(keys_to_raw(&keys), vec![5.0, 1.0, 9.0]);
        let keys = load_csv_keys(&path, &ColumnSpec::Index(1)).unwrap();
        assert_eq!(keys_to_raw(&keys), vec![5.0, 1.0, 9.0]);
    }

    #[test]
    fn missing_column_lists_available() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "id,ts\na,5\n").unwrap();
        match load_csv_keys(&path, &ColumnSpec::Name("when".into())) {
            Err(DatasetError::MissingColumn { wanted, available }) => {
                assert_eq!(wanted, "when");
                assert_eq!(available, vec!["id".to_string(), "ts".to_string()]);
            }
            other => panic!("expected MissingColumn, got {other:?}"),
        }
    }

    #[test]
    fn bad_cell_cites_the_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "ts\n5\noops\n").unwrap();
        match load_csv_keys(&path, &ColumnSpec::Name("ts".into())) {
            Err(DatasetError::BadCell { row, cell }) => {
                assert_eq!(row, 3);
                assert_eq!(cell, "oops");
            }
            other => panic!("expected BadCell, got {other:?}"),
        }
    }
}
