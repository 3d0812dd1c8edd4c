//! Least-squares SVM: the soft-margin QP is replaced by one dense linear
//! system per class,
//!
//! ```text
//! [ 0   1^T        ] [ b ]   [ 0 ]
//! [ 1   K + I/gamma] [ a ] = [ y ]
//! ```
//!
//! with labels y in {-1, +1} and decision f(x) = b + sum_i a_i k(x_i, x).
//! Binary tasks solve one system; multi-class uses one-vs-rest with
//! argmax over the raw decision values. Solved by LU factorization with
//! partial pivoting; the kernel matrix is shared across the one-vs-rest
//! systems so it is factored once.

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::learners::{argmax, Prediction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Linear,
    Rbf { sigma: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Kernel::Rbf { sigma } => {
                let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-sq / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Linear => "linear",
            Kernel::Rbf { .. } => "rbf",
        }
    }
}

/// Dense LU factorization with partial pivoting, row-major.
struct Lu {
    n: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl Lu {
    fn factor(mut data: Vec<f64>, n: usize) -> Result<Lu> {
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = data[col * n + col].abs();
            for row in (col + 1)..n {
                let v = data[row * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = row;
                }
            }
            if pivot_val < 1e-300 {
                return Err(Error::SingularSystem { pivot: pivot_val });
            }
            pivots[col] = pivot_row;
            if pivot_row != col {
                for k in 0..n {
                    data.swap(col * n + k, pivot_row * n + k);
                }
            }
            let inv = 1.0 / data[col * n + col];
            for row in (col + 1)..n {
                let factor = data[row * n + col] * inv;
                data[row * n + col] = factor;
                for k in (col + 1)..n {
                    data[row * n + k] -= factor * data[col * n + k];
                }
            }
        }
        Ok(Lu { n, data, pivots })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = rhs.to_vec();
        // rows were swapped in full during factorization, so the
        // permutation applies to the right-hand side up front
        for col in 0..n {
            x.swap(col, self.pivots[col]);
        }
        for col in 0..n {
            let xc = x[col];
            for row in (col + 1)..n {
                x[row] -= self.data[row * n + col] * xc;
            }
        }
        for col in (0..n).rev() {
            x[col] /= self.data[col * n + col];
            let xc = x[col];
            for row in 0..col {
                x[row] -= self.data[row * n + col] * xc;
            }
        }
        x
    }
}

/// One one-vs-rest (or binary) decision function.
#[derive(Debug, Clone)]
struct DecisionFn {
    bias: f64,
    alpha: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct LsSvmModel {
    kernel: Kernel,
    gamma: f64,
    support: Vec<Vec<f64>>,
    decisions: Vec<DecisionFn>,
    n_classes: usize,
}

fn kkt_matrix(rows: &[Vec<f64>], kernel: Kernel, gamma: f64) -> Vec<f64> {
    let n = rows.len();
    let m = n + 1;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        a[i + 1] = 1.0; // top row
        a[(i + 1) * m] = 1.0; // left column
        for j in i..n {
            let mut k = kernel.eval(&rows[i], &rows[j]);
            if i == j {
                k += 1.0 / gamma;
            }
            a[(i + 1) * m + (j + 1)] = k;
            a[(j + 1) * m + (i + 1)] = k;
        }
    }
    a
}

fn signed_targets(labels: &[usize], positive: usize) -> Vec<f64> {
    labels
        .iter()
        .map(|&l| if l == positive { 1.0 } else { -1.0 })
        .collect()
}

pub(crate) fn train_lssvm(config: &super::LsSvmConfig, data: &LabeledDataset) -> Result<LsSvmModel> {
    let n = data.n_samples();
    let n_classes = data.n_classes();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|r| data.dataset.row(r))
        .collect::<Result<_>>()?;

    let lu = Lu::factor(kkt_matrix(&rows, config.kernel, config.gamma), n + 1)?;

    let positives: Vec<usize> = if n_classes == 2 { vec![1] } else { (0..n_classes).collect() };
    let mut decisions = Vec::with_capacity(positives.len());
    for positive in positives {
        let mut rhs = vec![0.0; n + 1];
        rhs[1..].copy_from_slice(&signed_targets(&data.labels, positive));
        let solution = lu.solve(&rhs);
        decisions.push(DecisionFn {
            bias: solution[0],
            alpha: solution[1..].to_vec(),
        });
    }

    Ok(LsSvmModel {
        kernel: config.kernel,
        gamma: config.gamma,
        support: rows,
        decisions,
        n_classes,
    })
}

impl LsSvmModel {
    fn decision_value(&self, d: &DecisionFn, x: &[f64]) -> f64 {
        d.bias
            + d.alpha
                .iter()
                .zip(&self.support)
                .map(|(a, s)| a * self.kernel.eval(s, x))
                .sum::<f64>()
    }

    pub fn predict(&self, features: &[f64]) -> Result<Prediction> {
        let scores: Vec<f64> = self
            .decisions
            .iter()
            .map(|d| self.decision_value(d, features))
            .collect();
        let class = if self.n_classes == 2 {
            usize::from(scores[0] >= 0.0)
        } else {
            argmax(&scores)
        };
        Ok(Prediction { class, scores })
    }

    /// Max-norm residual of the KKT system at the stored solution,
    /// maximized over the one-vs-rest systems.
    pub fn kkt_residual(&self, labels: &[usize]) -> f64 {
        let n = self.support.len();
        let m = n + 1;
        let a = kkt_matrix(&self.support, self.kernel, self.gamma);
        let positives: Vec<usize> = if self.n_classes == 2 {
            vec![1]
        } else {
            (0..self.n_classes).collect()
        };
        let mut worst = 0.0f64;
        for (d, positive) in self.decisions.iter().zip(positives) {
            let mut rhs = vec![0.0; m];
            rhs[1..].copy_from_slice(&signed_targets(labels, positive));
            let mut sol = vec![0.0; m];
            sol[0] = d.bias;
            sol[1..].copy_from_slice(&d.alpha);
            for i in 0..m {
                let ax: f64 = (0..m).map(|j| a[i * m + j] * sol[j]).sum();
                worst = worst.max((ax - rhs[i]).abs());
            }
        }
        worst
    }

    pub fn dump(&self) -> String {
        let mut out = format!("kernel {} gamma {}\n", self.kernel.name(), self.gamma);
        for (i, d) in self.decisions.iter().enumerate() {
            out.push_str(&format!("decision {i} bias {} alpha {:?}\n", d.bias, d.alpha));
        }
        out
    }
}
