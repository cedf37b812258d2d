//! Hybrid chromosome encoding and dataset transformation.
//!
//! One gene per attribute: a selection bit, a discretization bit and a real
//! cut value constrained to the attribute's observed bounds. The
//! discretization bit is only meaningful when the attribute is selected,
//! and never applies to nominal attributes.

use rand::Rng;

use crate::data::{AttrKind, AttributeMeta, Dataset, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gene {
    pub select: bool,
    pub discretize: bool,
    pub cut: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<Gene>,
}

impl Chromosome {
    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// Project the genotype onto its meaning: which attributes survive, and
    /// which of those are binarized at which cut. Discretization bits of
    /// unselected or nominal attributes are ignored.
    pub fn decode(&self, attributes: &[AttributeMeta]) -> DecodedView {
        assert_eq!(self.genes.len(), attributes.len(), "chromosome/attribute arity");
        let mut selected = Vec::new();
        let mut cuts = Vec::new();
        for (j, gene) in self.genes.iter().enumerate() {
            if !gene.select {
                continue;
            }
            selected.push(j);
            if gene.discretize && attributes[j].kind == AttrKind::Continuous {
                cuts.push((j, gene.cut));
            }
        }
        DecodedView { selected, cuts }
    }
}

/// The phenotype of a chromosome: attribute indices to keep (ascending) and
/// `(attribute, cut)` pairs for the subset of those that get binarized.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodedView {
    pub selected: Vec<usize>,
    pub cuts: Vec<(usize, f64)>,
}

impl DecodedView {
    /// View that keeps every column untouched.
    pub fn identity(n: usize) -> DecodedView {
        DecodedView { selected: (0..n).collect(), cuts: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn cut_for(&self, attr: usize) -> Option<f64> {
        self.cuts.iter().find(|(j, _)| *j == attr).map(|(_, c)| *c)
    }
}

/// Uniformly random chromosome: both bits fair coins, cut uniform within the
/// attribute's bounds. Per gene the draw order is select, discretize, cut.
pub fn random_chromosome<R: Rng>(bounds: &[(f64, f64)], rng: &mut R) -> Chromosome {
    let genes = bounds
        .iter()
        .map(|&(lo, hi)| Gene {
            select: rng.gen_bool(0.5),
            discretize: rng.gen_bool(0.5),
            cut: if hi > lo { rng.gen_range(lo..=hi) } else { lo },
        })
        .collect();
    Chromosome { genes }
}

/// Materialize the reduced dataset a view describes: unselected columns are
/// dropped; columns with a cut become binary (`value > cut` maps to 1, else
/// 0); the rest are copied verbatim. Attribute bounds are recomputed.
pub fn transform(dataset: &Dataset, view: &DecodedView) -> Result<Dataset> {
    if view.is_empty() {
        return Err(Error::EmptySelection);
    }
    let n = dataset.attribute_count();
    let mut prev = None;
    for &j in &view.selected {
        if j >= n {
            return Err(Error::InvalidConfig {
                detail: format!("view selects column {} of {}", j, n),
            });
        }
        if prev.is_some_and(|p| p >= j) {
            return Err(Error::InvalidConfig {
                detail: "view selection must be strictly ascending".into(),
            });
        }
        prev = Some(j);
    }
    for &(j, _) in &view.cuts {
        if !view.selected.contains(&j) {
            return Err(Error::InvalidConfig {
                detail: format!("cut on unselected column {}", j),
            });
        }
    }

    let rows = dataset.rows();
    let mut matrix = Matrix::zeros(rows, view.selected.len());
    let mut attributes = Vec::with_capacity(view.selected.len());
    for (out, &j) in view.selected.iter().enumerate() {
        let meta = &dataset.attributes[j];
        match view.cut_for(j) {
            Some(cut) => {
                for i in 0..rows {
                    let bit = if dataset.value(i, j) > cut { 1.0 } else { 0.0 };
                    matrix.set(i, out, bit);
                }
                attributes.push(AttributeMeta {
                    name: meta.name.clone(),
                    kind: AttrKind::Continuous,
                    lower: 0.0,
                    upper: 0.0,
                    categories: Vec::new(),
                });
            }
            None => {
                for i in 0..rows {
                    matrix.set(i, out, dataset.value(i, j));
                }
                attributes.push(AttributeMeta {
                    name: meta.name.clone(),
                    kind: meta.kind,
                    lower: 0.0,
                    upper: 0.0,
                    categories: meta.categories.clone(),
                });
            }
        }
    }
    Dataset::new(matrix, attributes, dataset.labels.clone(), dataset.class_names.clone())
}
