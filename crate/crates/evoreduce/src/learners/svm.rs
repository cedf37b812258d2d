//! Linear SVM trained by dual coordinate descent (hinge loss, L2
//! regularization), one-vs-rest for multiclass.
//!
//! The bias is handled by augmenting each instance with a constant 1
//! feature. Coordinates are visited in a fixed cyclic order, so training is
//! fully deterministic; a sweep whose largest projected-gradient violation
//! falls below `tol` ends the optimization.

use crate::data::Matrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvmParams {
    /// Soft-margin penalty.
    pub c: f64,
    /// Stop once the worst projected-gradient violation of a full sweep is
    /// below this.
    pub tol: f64,
    pub max_epochs: usize,
}

impl Default for SvmParams {
    fn default() -> SvmParams {
        SvmParams { c: 1.0, tol: 1e-3, max_epochs: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    width: usize,
    /// One augmented weight vector per class; the last entry is the bias.
    weights: Vec<Vec<f64>>,
}

impl SvmModel {
    pub fn fit(x: &Matrix, labels: &[usize], n_classes: usize, params: &SvmParams) -> SvmModel {
        let m = x.rows();
        let p = x.cols();
        let q_diag: Vec<f64> = (0..m)
            .map(|i| x.row(i).iter().map(|v| v * v).sum::<f64>() + 1.0)
            .collect();

        let mut weights = Vec::with_capacity(n_classes);
        for class in 0..n_classes {
            let y: Vec<f64> =
                labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
            let mut w = vec![0.0f64; p + 1];
            let mut alpha = vec![0.0f64; m];
            for _ in 0..params.max_epochs {
                let mut worst = 0.0f64;
                for i in 0..m {
                    let row = x.row(i);
                    let margin: f64 =
                        row.iter().zip(&w).map(|(v, wj)| v * wj).sum::<f64>() + w[p];
                    let g = y[i] * margin - 1.0;
                    let pg = if alpha[i] <= 0.0 {
                        g.min(0.0)
                    } else if alpha[i] >= params.c {
                        g.max(0.0)
                    } else {
                        g
                    };
                    worst = worst.max(pg.abs());
                    if pg.abs() > 1e-12 {
                        let old = alpha[i];
                        alpha[i] = (old - g / q_diag[i]).clamp(0.0, params.c);
                        let step = (alpha[i] - old) * y[i];
                        if step != 0.0 {
                            for (wj, v) in w.iter_mut().zip(row) {
                                *wj += step * v;
                            }
                            w[p] += step;
                        }
                    }
                }
                if worst < params.tol {
                    break;
                }
            }
            weights.push(w);
        }
        SvmModel { width: p, weights }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Raw decision value `w · x + b` per class.
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| row.iter().zip(w).map(|(v, wj)| v * wj).sum::<f64>() + w[self.width])
            .collect()
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        let scores = self.scores(row);
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = c;
            }
        }
        best
    }
}
