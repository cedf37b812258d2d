//! Baseline classifiers used both as wrapper scorers inside the search and
//! as the final evaluation models.
//!
//! All three are trained from scratch on plain `f64` matrices: Gaussian
//! naive Bayes, a C4.5-style decision tree, and a linear SVM (one weight
//! vector per class, trained by dual coordinate descent). A training fold
//! that contains a single class yields a constant predictor instead.

pub mod naive_bayes;
pub mod svm;
pub mod tree;

use crate::data::{AttrKind, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnerKind {
    NaiveBayes,
    Tree,
    Svm,
}

impl LearnerKind {
    pub fn parse(name: &str) -> Option<LearnerKind> {
        match name {
            "nb" => Some(LearnerKind::NaiveBayes),
            "c45" => Some(LearnerKind::Tree),
            "svm" => Some(LearnerKind::Svm),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::NaiveBayes => "nb",
            LearnerKind::Tree => "c45",
            LearnerKind::Svm => "svm",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrainedModel {
    Constant { class: usize, width: usize },
    NaiveBayes(naive_bayes::NbModel),
    Tree(tree::TreeModel),
    Svm(svm::SvmModel),
}

/// Train a model of the requested kind with its default parameters.
///
/// `kinds` tags each column continuous or nominal; only the tree
/// distinguishes them. Labels must be class codes below `n_classes`.
pub fn train(
    kind: LearnerKind,
    x: &Matrix,
    kinds: &[AttrKind],
    labels: &[usize],
    n_classes: usize,
) -> Result<TrainedModel> {
    if x.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if x.rows() != labels.len() {
        return Err(Error::LengthMismatch { left: x.rows(), right: labels.len() });
    }
    if kinds.len() != x.cols() {
        return Err(Error::WidthMismatch { expected: x.cols(), found: kinds.len() });
    }
    if let Some(&bad) = labels.iter().find(|&&c| c >= n_classes) {
        return Err(Error::Schema { detail: format!("label code {} >= {}", bad, n_classes) });
    }
    let first = labels[0];
    if labels.iter().all(|&c| c == first) {
        return Ok(TrainedModel::Constant { class: first, width: x.cols() });
    }
    Ok(match kind {
        LearnerKind::NaiveBayes => {
            TrainedModel::NaiveBayes(naive_bayes::NbModel::fit(x, labels, n_classes))
        }
        LearnerKind::Tree => TrainedModel::Tree(tree::TreeModel::fit(
            x,
            kinds,
            labels,
            n_classes,
            &tree::TreeParams::default(),
        )),
        LearnerKind::Svm => {
            TrainedModel::Svm(svm::SvmModel::fit(x, labels, n_classes, &svm::SvmParams::default()))
        }
    })
}

impl TrainedModel {
    pub fn width(&self) -> usize {
        match self {
            TrainedModel::Constant { width, .. } => *width,
            TrainedModel::NaiveBayes(m) => m.width(),
            TrainedModel::Tree(m) => m.width(),
            TrainedModel::Svm(m) => m.width(),
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> Result<usize> {
        if row.len() != self.width() {
            return Err(Error::WidthMismatch { expected: self.width(), found: row.len() });
        }
        Ok(match self {
            TrainedModel::Constant { class, .. } => *class,
            TrainedModel::NaiveBayes(m) => m.predict_row(row),
            TrainedModel::Tree(m) => m.predict_row(row),
            TrainedModel::Svm(m) => m.predict_row(row),
        })
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<usize>> {
        (0..x.rows()).map(|i| self.predict_row(x.row(i))).collect()
    }
}

/// Fraction of positions where predictions and reference labels agree.
pub fn accuracy(predicted: &[usize], actual: &[usize]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch { left: predicted.len(), right: actual.len() });
    }
    if predicted.is_empty() {
        return Err(Error::InvalidConfig { detail: "accuracy of an empty prediction set".into() });
    }
    let hits = predicted.iter().zip(actual).filter(|(p, a)| p == a).count();
    Ok(hits as f64 / predicted.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (Matrix, Vec<AttrKind>, Vec<usize>) {
        let x = Matrix::from_vec(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0], 3, 2);
        (x, vec![AttrKind::Continuous; 2], vec![0, 1, 0])
    }

    #[test]
    fn single_class_training_yields_a_constant_model() {
        let (x, kinds, _) = small();
        for kind in [LearnerKind::NaiveBayes, LearnerKind::Tree, LearnerKind::Svm] {
            let model = train(kind, &x, &kinds, &[1, 1, 1], 3).unwrap();
            assert!(matches!(model, TrainedModel::Constant { class: 1, .. }));
            assert_eq!(model.predict_row(&[9.0, 9.0]).unwrap(), 1);
        }
    }

    #[test]
    fn width_mismatch_on_predict_is_an_error() {
        let (x, kinds, labels) = small();
        let model = train(LearnerKind::NaiveBayes, &x, &kinds, &labels, 2).unwrap();
        assert!(matches!(
            model.predict_row(&[1.0]),
            Err(Error::WidthMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn mismatched_shapes_fail_training() {
        let (x, kinds, _) = small();
        assert!(train(LearnerKind::Svm, &x, &kinds, &[0, 1], 2).is_err());
        assert!(train(LearnerKind::Svm, &x, &kinds[..1], &[0, 1, 0], 2).is_err());
        assert!(train(LearnerKind::Svm, &x, &kinds, &[0, 5, 0], 2).is_err());
    }

    #[test]
    fn accuracy_counts_matches() {
        assert_eq!(accuracy(&[0, 1, 2, 1], &[0, 1, 1, 1]).unwrap(), 0.75);
        assert_eq!(accuracy(&[1], &[0]).unwrap(), 0.0);
        assert!(accuracy(&[0, 1], &[0]).is_err());
        assert!(accuracy(&[], &[]).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in [LearnerKind::NaiveBayes, LearnerKind::Tree, LearnerKind::Svm] {
            assert_eq!(LearnerKind::parse(kind.name()), Some(kind));
        }
        assert_eq!(LearnerKind::parse("forest"), None);
    }
}
