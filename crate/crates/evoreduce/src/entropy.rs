//! Entropy-based quality of binary cut points.
//!
//! All logarithms are base 2. A cut splits a column into the instances
//! strictly above it and the rest; its information gain is the drop from the
//! class entropy of the whole set to the size-weighted entropy of the two
//! sides. The first search objective is the summed gain over every cut a
//! chromosome applies.

use crate::data::Dataset;
use crate::encoding::DecodedView;
use crate::error::{Error, Result};

/// Shannon entropy (bits) of a class count vector. Zero counts contribute
/// nothing; an all-zero vector has entropy 0.
pub fn class_entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total;
            h -= p * p.log2();
        }
    }
    h
}

/// Size-weighted entropy of a two-way partition given per-side class counts.
/// Fails when both sides are empty.
pub fn split_entropy(side0: &[usize], side1: &[usize]) -> Result<f64> {
    let n0: usize = side0.iter().sum();
    let n1: usize = side1.iter().sum();
    if n0 + n1 == 0 {
        return Err(Error::EmptySplit);
    }
    let total = (n0 + n1) as f64;
    Ok(n0 as f64 / total * class_entropy(side0) + n1 as f64 / total * class_entropy(side1))
}

/// Information gain of cutting `column` at `cut`: instances with value
/// strictly above the cut form one side, the rest the other. Clamped at 0
/// so float cancellation can never produce a negative gain.
///
/// `labels` must be class codes below `n_classes` and pair up 1:1 with
/// `column`, which must yield at least one value.
pub fn info_gain(
    labels: &[usize],
    column: impl IntoIterator<Item = f64>,
    n_classes: usize,
    cut: f64,
) -> f64 {
    let mut side0 = vec![0usize; n_classes];
    let mut side1 = vec![0usize; n_classes];
    let mut seen = 0usize;
    for (v, &c) in column.into_iter().zip(labels) {
        if v > cut {
            side1[c] += 1;
        } else {
            side0[c] += 1;
        }
        seen += 1;
    }
    assert!(seen > 0, "info_gain on empty column");
    assert_eq!(seen, labels.len(), "column/label arity");
    let mut whole = vec![0usize; n_classes];
    for (s0, (s1, w)) in side0.iter().zip(side1.iter().zip(whole.iter_mut())) {
        *w = s0 + s1;
    }
    let gain = class_entropy(&whole) - split_entropy(&side0, &side1).expect("nonempty split");
    gain.max(0.0)
}

/// First objective of the search: total information gain over every cut the
/// view applies, measured on the original columns. No cuts means 0.
pub fn discretization_fitness(dataset: &Dataset, view: &DecodedView) -> f64 {
    let n_classes = dataset.class_count();
    view.cuts
        .iter()
        .map(|&(j, cut)| info_gain(&dataset.labels, dataset.column(j), n_classes, cut))
        .sum()
}
