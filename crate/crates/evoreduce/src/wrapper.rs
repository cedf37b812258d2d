//! Wrapper evaluation: score a decoded view by cross-validated accuracy of
//! a baseline learner on the transformed dataset.
//!
//! The fold plan is drawn once per evaluator from its own seed and reused
//! for every candidate, so all chromosomes of a search run are compared on
//! identical splits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, FoldPlan};
use crate::encoding::{transform, DecodedView};
use crate::error::Result;
use crate::learners::{self, LearnerKind};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WrapperConfig {
    pub learner: LearnerKind,
    pub folds: usize,
    pub fold_seed: u64,
}

impl WrapperConfig {
    pub fn new(learner: LearnerKind) -> WrapperConfig {
        WrapperConfig { learner, folds: 10, fold_seed: 0 }
    }
}

/// Reusable scorer holding the dataset reference and the frozen fold plan.
pub struct Evaluator<'a> {
    dataset: &'a Dataset,
    plan: FoldPlan,
    learner: LearnerKind,
}

impl<'a> Evaluator<'a> {
    pub fn new(dataset: &'a Dataset, config: &WrapperConfig) -> Result<Evaluator<'a>> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.fold_seed);
        let plan = FoldPlan::stratified(&dataset.labels, config.folds, &mut rng)?;
        Ok(Evaluator { dataset, plan, learner: config.learner })
    }

    pub fn plan(&self) -> &FoldPlan {
        &self.plan
    }

    /// Mean fold accuracy of the learner on the dataset reduced by `view`.
    pub fn cv_accuracy(&self, view: &DecodedView) -> Result<f64> {
        let reduced = transform(self.dataset, view)?;
        let accs = cv_fold_accuracies(&reduced, &self.plan, self.learner)?;
        Ok(accs.iter().sum::<f64>() / accs.len() as f64)
    }

    /// Second search objective: `1 - cv_accuracy`.
    pub fn error_fitness(&self, view: &DecodedView) -> Result<f64> {
        Ok(1.0 - self.cv_accuracy(view)?)
    }
}

/// One accuracy per fold of the plan, training on the remainder each time.
pub fn cv_fold_accuracies(
    dataset: &Dataset,
    plan: &FoldPlan,
    learner: LearnerKind,
) -> Result<Vec<f64>> {
    let kinds = dataset.kinds();
    let mut accs = Vec::with_capacity(plan.folds());
    for fold in 0..plan.folds() {
        let (train_idx, test_idx) = plan.fold_indices(fold);
        let x_train = dataset.matrix().select_rows(&train_idx);
        let y_train: Vec<usize> = train_idx.iter().map(|&i| dataset.labels[i]).collect();
        let model =
            learners::train(learner, &x_train, &kinds, &y_train, dataset.class_count())?;
        let x_test = dataset.matrix().select_rows(&test_idx);
        let y_test: Vec<usize> = test_idx.iter().map(|&i| dataset.labels[i]).collect();
        let predictions = model.predict(&x_test)?;
        accs.push(learners::accuracy(&predictions, &y_test)?);
    }
    Ok(accs)
}

/// One-shot mean CV accuracy of a view under the given config.
pub fn cv_accuracy(dataset: &Dataset, view: &DecodedView, config: &WrapperConfig) -> Result<f64> {
    Evaluator::new(dataset, config)?.cv_accuracy(view)
}

/// One-shot error fitness of a view under the given config.
pub fn error_fitness(dataset: &Dataset, view: &DecodedView, config: &WrapperConfig) -> Result<f64> {
    Evaluator::new(dataset, config)?.error_fitness(view)
}
