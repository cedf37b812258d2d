//! Tabular dataset ingestion and fold planning.
//!
//! A [`Dataset`] is a dense numeric matrix plus per-column metadata and an
//! integer-coded label vector. Nominal columns are carried as category codes
//! so the matrix stays `f64` throughout; the codes are only ever compared
//! for equality by consumers that care about nominality.

use std::collections::BTreeSet;
use std::fs::File;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Dense row-major `f64` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Matrix {
    pub fn from_vec(data: Vec<f64>, rows: usize, cols: usize) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix shape/len mismatch");
        Matrix { data, rows, cols }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { data: vec![0.0; rows * cols], rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[row * self.cols + col] = v;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.value(i, col))
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { data, rows: idx.len(), cols: self.cols }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttrKind {
    Continuous,
    Nominal,
}

/// Per-column metadata. `lower`/`upper` are the observed value bounds; for
/// nominal columns they span the category codes and `categories` maps code
/// `i` back to its original string.
#[derive(Clone, Debug, PartialEq)]
pub struct AttributeMeta {
    pub name: String,
    pub kind: AttrKind,
    pub lower: f64,
    pub upper: f64,
    pub categories: Vec<String>,
}

impl AttributeMeta {
    pub fn continuous(name: impl Into<String>) -> AttributeMeta {
        AttributeMeta {
            name: name.into(),
            kind: AttrKind::Continuous,
            lower: 0.0,
            upper: 0.0,
            categories: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    matrix: Matrix,
    pub attributes: Vec<AttributeMeta>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub rows_dropped: usize,
}

impl Dataset {
    /// Assemble a dataset, recomputing attribute bounds from the matrix.
    ///
    /// Fails when shapes disagree, a label index is out of range for
    /// `class_names`, or fewer than two classes actually occur.
    pub fn new(
        matrix: Matrix,
        mut attributes: Vec<AttributeMeta>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Dataset> {
        if matrix.rows() == 0 {
            return Err(Error::EmptyDataset);
        }
        if attributes.len() != matrix.cols() {
            return Err(Error::Schema {
                detail: format!(
                    "{} attribute descriptors for {} columns",
                    attributes.len(),
                    matrix.cols()
                ),
            });
        }
        if labels.len() != matrix.rows() {
            return Err(Error::LengthMismatch { left: labels.len(), right: matrix.rows() });
        }
        if let Some(&bad) = labels.iter().find(|&&c| c >= class_names.len()) {
            return Err(Error::Schema { detail: format!("label code {} has no class name", bad) });
        }
        let distinct: BTreeSet<usize> = labels.iter().copied().collect();
        if distinct.len() < 2 {
            let only = labels[0];
            return Err(Error::SingleClass { label: class_names[only].clone() });
        }
        for (j, meta) in attributes.iter_mut().enumerate() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for v in matrix.column(j) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            meta.lower = lo;
            meta.upper = hi;
        }
        Ok(Dataset { matrix, attributes, labels, class_names, rows_dropped: 0 })
    }

    /// Small all-continuous dataset from literal rows; class names are
    /// generated. Intended for tests and toy problems.
    pub fn from_numeric(rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::WidthMismatch { expected: cols, found: row.len() });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::Schema { detail: format!("non-finite value {}", v) });
            }
            data.extend_from_slice(row);
        }
        let matrix = Matrix::from_vec(data, rows.len(), cols);
        let attributes = (0..cols).map(|j| AttributeMeta::continuous(format!("a{}", j))).collect();
        let n_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
        let class_names = (0..n_classes).map(|c| format!("c{}", c)).collect();
        Dataset::new(matrix, attributes, labels, class_names)
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn attribute_count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.matrix.value(row, col)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.matrix.column(col)
    }

    /// `(lower, upper)` per attribute, in column order.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.attributes.iter().map(|a| (a.lower, a.upper)).collect()
    }

    pub fn kinds(&self) -> Vec<AttrKind> {
        self.attributes.iter().map(|a| a.kind).collect()
    }
}

/// How the label column is identified in a CSV file.
#[derive(Clone, Debug, PartialEq)]
pub enum LabelSelector {
    /// Rightmost column (the default).
    Last,
    /// 0-based column index in the file.
    Index(usize),
    /// Header name; requires a header row.
    Name(String),
}

impl LabelSelector {
    /// Parse a CLI argument: `last` keeps the default, a bare integer is an
    /// index, anything else a header name.
    pub fn parse(arg: &str) -> LabelSelector {
        if arg.eq_ignore_ascii_case("last") {
            return LabelSelector::Last;
        }
        match arg.parse::<usize>() {
            Ok(i) => LabelSelector::Index(i),
            Err(_) => LabelSelector::Name(arg.to_string()),
        }
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

fn parse_numeric(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Load a CSV file into a [`Dataset`].
///
/// - A header row is assumed when some column has a non-numeric first cell
///   above otherwise numeric data; selecting the label by name requires one.
/// - Cells that are empty or `?` mark a missing value; any row containing
///   one is dropped and the count is recorded in `rows_dropped` (and logged).
/// - A feature column is continuous when every kept cell parses as a finite
///   number, nominal otherwise. A sidecar file `<path>.manifest` can force
///   kinds, one `column: continuous|nominal` line each (column by header
///   name or 0-based index).
/// - Labels are coded against the sorted set of distinct label strings.
pub fn load_csv(path: &Path, label: &LabelSelector) -> Result<Dataset> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut raw: Vec<(u64, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|source| Error::Csv { path: path.to_path_buf(), source })?;
        let line = record.position().map_or(0, |p| p.line());
        raw.push((line, record.iter().map(str::to_string).collect()));
    }
    if raw.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let ncols = raw[0].1.len();
    for (line, row) in &raw {
        if row.len() != ncols {
            return Err(Error::MalformedRow {
                row: *line,
                detail: format!("{} fields where {} were expected", row.len(), ncols),
            });
        }
    }
    if ncols < 2 {
        return Err(Error::Schema {
            detail: "need at least one feature column besides the label".into(),
        });
    }

    // Header heuristic: a column whose first cell is non-numeric text while
    // every following cell is numeric (or missing, with at least one value
    // present) can only be explained by a header row.
    let has_header = raw.len() > 1
        && (0..ncols).any(|j| {
            let head = &raw[0].1[j];
            let body = raw[1..].iter().map(|(_, r)| r[j].as_str());
            !is_missing(head)
                && parse_numeric(head).is_none()
                && raw[1..].iter().any(|(_, r)| !is_missing(&r[j]))
                && body.clone().all(|c| is_missing(c) || parse_numeric(c).is_some())
        });
    let (header, body) = if has_header {
        (Some(raw[0].1.clone()), &raw[1..])
    } else {
        (None, &raw[..])
    };

    let label_idx = match label {
        LabelSelector::Last => ncols - 1,
        LabelSelector::Index(i) => {
            if *i >= ncols {
                return Err(Error::Schema {
                    detail: format!("label index {} out of range for {} columns", i, ncols),
                });
            }
            *i
        }
        LabelSelector::Name(name) => {
            let header = header.as_ref().ok_or_else(|| Error::Schema {
                detail: format!("label `{}` requested by name but no header row found", name),
            })?;
            header.iter().position(|c| c == name).ok_or_else(|| Error::Schema {
                detail: format!("label column `{}` not present in header", name),
            })?
        }
    };

    let mut kept: Vec<&(u64, Vec<String>)> = Vec::with_capacity(body.len());
    let mut dropped = 0usize;
    for entry in body {
        if entry.1.iter().any(|c| is_missing(c)) {
            dropped += 1;
        } else {
            kept.push(entry);
        }
    }
    if dropped > 0 {
        log::warn!("{}: dropped {} rows with missing values", path.display(), dropped);
    }
    if kept.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let feature_cols: Vec<usize> = (0..ncols).filter(|&j| j != label_idx).collect();
    let overrides = read_manifest(path, header.as_deref(), ncols, label_idx)?;

    let mut metas = Vec::with_capacity(feature_cols.len());
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(feature_cols.len());
    for (slot, &j) in feature_cols.iter().enumerate() {
        let name = header
            .as_ref()
            .map(|h| h[j].clone())
            .unwrap_or_else(|| format!("a{}", slot));
        let inferred_numeric = kept.iter().all(|(_, r)| parse_numeric(&r[j]).is_some());
        let kind = overrides
            .iter()
            .find(|(col, _)| *col == j)
            .map(|(_, k)| *k)
            .unwrap_or(if inferred_numeric { AttrKind::Continuous } else { AttrKind::Nominal });
        match kind {
            AttrKind::Continuous => {
                let mut col = Vec::with_capacity(kept.len());
                for (line, r) in &kept {
                    match parse_numeric(&r[j]) {
                        Some(v) => col.push(v),
                        None => {
                            return Err(Error::MalformedRow {
                                row: *line,
                                detail: format!(
                                    "column `{}` is continuous but `{}` is not numeric",
                                    name, r[j]
                                ),
                            })
                        }
                    }
                }
                metas.push(AttributeMeta {
                    name,
                    kind,
                    lower: 0.0,
                    upper: 0.0,
                    categories: Vec::new(),
                });
                columns.push(col);
            }
            AttrKind::Nominal => {
                let cats: BTreeSet<String> =
                    kept.iter().map(|(_, r)| r[j].clone()).collect();
                let categories: Vec<String> = cats.into_iter().collect();
                let col = kept
                    .iter()
                    .map(|(_, r)| {
                        categories.iter().position(|c| *c == r[j]).unwrap() as f64
                    })
                    .collect();
                metas.push(AttributeMeta { name, kind, lower: 0.0, upper: 0.0, categories });
                columns.push(col);
            }
        }
    }

    let label_set: BTreeSet<String> = kept.iter().map(|(_, r)| r[label_idx].clone()).collect();
    let class_names: Vec<String> = label_set.into_iter().collect();
    if class_names.len() < 2 {
        return Err(Error::SingleClass { label: class_names[0].clone() });
    }
    let labels: Vec<usize> = kept
        .iter()
        .map(|(_, r)| class_names.iter().position(|c| *c == r[label_idx]).unwrap())
        .collect();

    let rows = kept.len();
    let cols = columns.len();
    let mut matrix = Matrix::zeros(rows, cols);
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            matrix.set(i, j, v);
        }
    }

    let mut ds = Dataset::new(matrix, metas, labels, class_names)?;
    ds.rows_dropped = dropped;
    Ok(ds)
}

/// Read `<path>.manifest` if present: returns `(file_column_index, kind)`
/// overrides for feature columns.
fn read_manifest(
    csv_path: &Path,
    header: Option<&[String]>,
    ncols: usize,
    label_idx: usize,
) -> Result<Vec<(usize, AttrKind)>> {
    let mut path = PathBuf::from(csv_path);
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest");
    path.set_file_name(name);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|source| Error::Io { path: path.clone(), source })?;
    let mut overrides = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, kind) = line.split_once(':').ok_or_else(|| Error::Schema {
            detail: format!("manifest line `{}` is not `column: kind`", line),
        })?;
        let key = key.trim();
        let kind = match kind.trim() {
            "continuous" => AttrKind::Continuous,
            "nominal" => AttrKind::Nominal,
            other => {
                return Err(Error::Schema {
                    detail: format!("manifest kind `{}` is neither continuous nor nominal", other),
                })
            }
        };
        let col = match key.parse::<usize>() {
            Ok(i) if i < ncols => i,
            Ok(i) => {
                return Err(Error::Schema {
                    detail: format!("manifest column {} out of range for {} columns", i, ncols),
                })
            }
            Err(_) => {
                let header = header.ok_or_else(|| Error::Schema {
                    detail: format!("manifest names column `{}` but file has no header", key),
                })?;
                header.iter().position(|c| c == key).ok_or_else(|| Error::Schema {
                    detail: format!("manifest column `{}` not present in header", key),
                })?
            }
        };
        if col == label_idx {
            return Err(Error::Schema {
                detail: format!("manifest overrides the label column `{}`", key),
            });
        }
        overrides.push((col, kind));
    }
    Ok(overrides)
}

/// A stratified assignment of instances to `k` cross-validation folds.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldPlan {
    k: usize,
    assignment: Vec<usize>,
}

impl FoldPlan {
    /// Stratified k-fold split. Instances of each class are shuffled and
    /// dealt so per-class fold counts differ by at most one; the leftover
    /// instances of successive classes start at rotating fold offsets so
    /// total fold sizes also differ by at most one.
    pub fn stratified<R: Rng>(labels: &[usize], k: usize, rng: &mut R) -> Result<FoldPlan> {
        let m = labels.len();
        if k < 2 || k > m {
            return Err(Error::InvalidFolds { folds: k, instances: m });
        }
        let n_classes = labels.iter().copied().max().map_or(0, |c| c + 1);
        let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for (i, &c) in labels.iter().enumerate() {
            per_class[c].push(i);
        }
        let mut assignment = vec![0usize; m];
        let mut start = 0usize;
        for members in per_class.iter_mut() {
            members.shuffle(rng);
            let q = members.len() / k;
            let r = members.len() % k;
            let mut cursor = 0usize;
            for f in 0..k {
                let offset = (f + k - start) % k;
                let take = q + usize::from(offset < r);
                for _ in 0..take {
                    assignment[members[cursor]] = f;
                    cursor += 1;
                }
            }
            start = (start + r) % k;
        }
        Ok(FoldPlan { k, assignment })
    }

    pub fn folds(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// `(train, test)` row indices for one fold, both in ascending order.
    pub fn fold_indices(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        assert!(fold < self.k, "fold {} out of {}", fold, self.k);
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }
}
