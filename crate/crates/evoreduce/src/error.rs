//! Error type shared across the crate.

use std::fmt;
use std::io;
use std::path::PathBuf;

#[derive(Debug)]
pub enum Error {
    /// Filesystem failure while reading or writing `path`.
    Io { path: PathBuf, source: io::Error },
    /// Low-level CSV parse failure.
    Csv { path: PathBuf, source: csv::Error },
    /// A data row that cannot be interpreted; `row` is the 1-based line in the file.
    MalformedRow { row: u64, detail: String },
    /// Structural problem with the table: bad label column, no feature
    /// columns, manifest referencing an unknown column, and the like.
    Schema { detail: String },
    /// No usable rows remain after dropping incomplete ones.
    EmptyDataset,
    /// Every remaining row carries the same label.
    SingleClass { label: String },
    /// Cross-validation fold count outside `2..=instances`.
    InvalidFolds { folds: usize, instances: usize },
    /// A decoded chromosome selects no attribute at all.
    EmptySelection,
    /// A candidate cut leaves one side of the split with every instance.
    EmptySplit,
    /// Prediction input width differs from the width the model was trained on.
    WidthMismatch { expected: usize, found: usize },
    /// Two paired slices differ in length.
    LengthMismatch { left: usize, right: usize },
    /// Invalid run parameters (population size, rates, seeds, paths, ...).
    InvalidConfig { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "i/o error on {}: {}", path.display(), source),
            Error::Csv { path, source } => write!(f, "csv error in {}: {}", path.display(), source),
            Error::MalformedRow { row, detail } => write!(f, "malformed row {}: {}", row, detail),
            Error::Schema { detail } => write!(f, "schema error: {}", detail),
            Error::EmptyDataset => write!(f, "dataset has no complete rows"),
            Error::SingleClass { label } => {
                write!(f, "dataset has a single class `{}`; nothing to separate", label)
            }
            Error::InvalidFolds { folds, instances } => {
                write!(f, "cannot split {} instances into {} folds", instances, folds)
            }
            Error::EmptySelection => write!(f, "chromosome selects no attributes"),
            Error::EmptySplit => write!(f, "cut point leaves an empty partition"),
            Error::WidthMismatch { expected, found } => {
                write!(f, "expected {} feature columns, found {}", expected, found)
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "paired sequences differ in length: {} vs {}", left, right)
            }
            Error::InvalidConfig { detail } => write!(f, "invalid configuration: {}", detail),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            Error::Csv { source, .. } => Some(source),
            _ => None,
        }
    }
}
