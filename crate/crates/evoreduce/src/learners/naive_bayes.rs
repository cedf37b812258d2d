//! Gaussian naive Bayes.
//!
//! Per class: empirical prior, per-feature mean and population variance
//! (divide by the class count, not count − 1). Variances are floored at
//! `1e-9 × feature range²`, with an absolute floor of `1e-12`, so constant
//! features cannot produce infinite densities. Ties in the posterior go to
//! the lowest class index.

use crate::data::Matrix;

const REL_VAR_FLOOR: f64 = 1e-9;
const ABS_VAR_FLOOR: f64 = 1e-12;
const LN_2PI: f64 = 1.8378770664093453;

#[derive(Clone, Debug, PartialEq)]
pub struct NbModel {
    width: usize,
    ln_priors: Vec<f64>,
    means: Vec<Vec<f64>>,
    vars: Vec<Vec<f64>>,
}

impl NbModel {
    pub fn fit(x: &Matrix, labels: &[usize], n_classes: usize) -> NbModel {
        let m = x.rows();
        let p = x.cols();
        let mut counts = vec![0usize; n_classes];
        for &c in labels {
            counts[c] += 1;
        }

        let mut floors = vec![ABS_VAR_FLOOR; p];
        for (j, floor) in floors.iter_mut().enumerate() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for v in x.column(j) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let range = hi - lo;
            *floor = (REL_VAR_FLOOR * range * range).max(ABS_VAR_FLOOR);
        }

        let mut means = vec![vec![0.0; p]; n_classes];
        let mut vars = vec![vec![1.0; p]; n_classes];
        for (c, &n_c) in counts.iter().enumerate() {
            if n_c == 0 {
                continue;
            }
            let rows: Vec<usize> = (0..m).filter(|&i| labels[i] == c).collect();
            for j in 0..p {
                let mean = rows.iter().map(|&i| x.value(i, j)).sum::<f64>() / n_c as f64;
                let var = rows
                    .iter()
                    .map(|&i| {
                        let d = x.value(i, j) - mean;
                        d * d
                    })
                    .sum::<f64>()
                    / n_c as f64;
                means[c][j] = mean;
                vars[c][j] = var.max(floors[j]);
            }
        }

        let ln_priors = counts
            .iter()
            .map(|&n_c| {
                if n_c == 0 {
                    f64::NEG_INFINITY
                } else {
                    (n_c as f64 / m as f64).ln()
                }
            })
            .collect();

        NbModel { width: p, ln_priors, means, vars }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Log joint density `ln P(class) + Σ_j ln N(x_j; μ, σ²)` per class.
    /// Classes unseen in training score `-∞`.
    pub fn ln_scores(&self, row: &[f64]) -> Vec<f64> {
        self.ln_priors
            .iter()
            .enumerate()
            .map(|(c, &prior)| {
                if prior == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let mut score = prior;
                for (j, &v) in row.iter().enumerate() {
                    let mean = self.means[c][j];
                    let var = self.vars[c][j];
                    let d = v - mean;
                    score += -0.5 * (LN_2PI + var.ln() + d * d / var);
                }
                score
            })
            .collect()
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        let scores = self.ln_scores(row);
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = c;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> Matrix {
        let cols = rows[0].len();
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Matrix::from_vec(data, rows.len(), cols)
    }

    #[test]
    fn moments_are_population_statistics() {
        // class 0: values 1, 2, 3 -> mean 2, variance 2/3 (divide by n)
        let x = matrix(&[&[1.0], &[2.0], &[3.0], &[10.0]]);
        let model = NbModel::fit(&x, &[0, 0, 0, 1], 2);
        assert!((model.means[0][0] - 2.0).abs() < 1e-12);
        assert!((model.vars[0][0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((model.ln_priors[0] - (0.75f64).ln()).abs() < 1e-12);
    }

    /// Closed-form oracle: recompute the log joint with a separately written
    /// density formula and compare both the scores and the argmax.
    #[test]
    fn scores_match_direct_density_computation() {
        let x = matrix(&[
            &[1.0, 10.0],
            &[2.0, 12.0],
            &[1.5, 11.0],
            &[6.0, 3.0],
            &[7.0, 4.0],
            &[8.0, 2.0],
            &[6.5, 3.5],
            &[7.5, 2.5],
        ]);
        let labels = [0, 0, 0, 1, 1, 1, 1, 1];
        let model = NbModel::fit(&x, &labels, 2);

        let oracle = |row: &[f64]| -> Vec<f64> {
            let mut out = Vec::new();
            for c in 0..2 {
                let rows: Vec<&[f64]> = labels
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l == c)
                    .map(|(i, _)| x.row(i))
                    .collect();
                let n = rows.len() as f64;
                let mut score = (n / 8.0).ln();
                for j in 0..2 {
                    let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
                    let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
                    let gauss =
                        (-((row[j] - mean).powi(2)) / (2.0 * var)).exp()
                            / (2.0 * std::f64::consts::PI * var).sqrt();
                    score += gauss.ln();
                }
                out.push(score);
            }
            out
        };

        for probe in [[1.2, 10.5], [7.0, 3.0], [4.0, 7.0], [0.0, 0.0]] {
            let ours = model.ln_scores(&probe);
            let theirs = oracle(&probe);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
            }
            let best_oracle =
                if theirs[0] >= theirs[1] { 0 } else { 1 };
            assert_eq!(model.predict_row(&probe), best_oracle);
        }
    }

    #[test]
    fn constant_features_stay_finite() {
        let x = matrix(&[&[5.0, 1.0], &[5.0, 2.0], &[5.0, 8.0], &[5.0, 9.0]]);
        let model = NbModel::fit(&x, &[0, 0, 1, 1], 2);
        let scores = model.ln_scores(&[4.0, 5.0]);
        assert!(scores.iter().all(|s| s.is_finite()));
        assert_eq!(model.predict_row(&[5.0, 1.5]), 0);
        assert_eq!(model.predict_row(&[5.0, 8.5]), 1);
    }

    #[test]
    fn posterior_ties_go_to_the_lowest_class() {
        // perfectly mirrored classes; the midpoint scores identically
        let x = matrix(&[&[-2.0], &[-1.0], &[1.0], &[2.0]]);
        let model = NbModel::fit(&x, &[0, 0, 1, 1], 2);
        let scores = model.ln_scores(&[0.0]);
        assert!((scores[0] - scores[1]).abs() < 1e-12);
        assert_eq!(model.predict_row(&[0.0]), 0);
    }

    #[test]
    fn absent_classes_never_win() {
        let x = matrix(&[&[0.0], &[1.0]]);
        // n_classes = 3 but class 1 absent
        let model = NbModel::fit(&x, &[0, 2], 3);
        assert_eq!(model.ln_priors[1], f64::NEG_INFINITY);
        assert_eq!(model.predict_row(&[0.1]), 0);
        assert_eq!(model.predict_row(&[0.9]), 2);
    }

    #[test]
    fn flipping_a_binary_column_does_not_change_predictions() {
        let x = matrix(&[
            &[0.0, 1.0],
            &[0.0, 0.0],
            &[1.0, 1.0],
            &[1.0, 0.0],
            &[0.0, 1.0],
            &[1.0, 0.0],
        ]);
        let labels = [0, 0, 1, 1, 0, 1];
        let flipped_rows: Vec<Vec<f64>> =
            (0..x.rows()).map(|i| vec![1.0 - x.value(i, 0), x.value(i, 1)]).collect();
        let refs: Vec<&[f64]> = flipped_rows.iter().map(|r| r.as_slice()).collect();
        let flipped = matrix(&refs);

        let a = NbModel::fit(&x, &labels, 2);
        let b = NbModel::fit(&flipped, &labels, 2);
        for i in 0..x.rows() {
            assert_eq!(a.predict_row(x.row(i)), b.predict_row(flipped.row(i)));
        }
        for probe in [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]] {
            let mirrored = [1.0 - probe[0], probe[1]];
            assert_eq!(a.predict_row(&probe), b.predict_row(&mirrored));
        }
    }

    #[test]
    fn fitting_is_deterministic() {
        let x = matrix(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        let a = NbModel::fit(&x, &[0, 1, 0], 2);
        let b = NbModel::fit(&x, &[0, 1, 0], 2);
        assert_eq!(a, b);
    }
}
