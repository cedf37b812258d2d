//! Joint feature selection and binary discretization driven by a
//! multi-objective genetic search.
//!
//! A candidate solution is a hybrid chromosome holding, per attribute, a
//! selection bit, a discretization bit and a real-valued cut point. Decoding
//! a chromosome yields a reduced dataset: unselected columns are dropped,
//! and selected columns whose discretization bit is on are binarized around
//! their cut. Candidates are scored on two axes — total information gain of
//! the chosen cuts (maximized) and wrapper cross-validation error of a
//! baseline classifier on the reduced data (minimized) — and evolved with
//! NSGA-II. The crate ships three self-contained classifiers (Gaussian
//! naive Bayes, a C4.5-style decision tree, a linear SVM), the search
//! engine, and a batch experiment driver with a CLI front end.

pub mod data;
pub mod encoding;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod learners;
pub mod nsga2;
pub mod wrapper;

pub use error::{Error, Result};
