//! Exhaustive reference solver for small SVM duals.
//!
//! Every multiplier is either 0, C or free. For each of the 3^n patterns the
//! free block is solved from its stationarity conditions
//!
//! ```text
//! [Q_FF  y_F] [α_F]   [e_F − Q_FB α_B]
//! [y_Fᵀ   0 ] [ ν ] = [   −y_Bᵀ α_B  ]
//! ```
//!
//! by least squares; consistent, box-feasible candidates are scored with the
//! dual objective and the best one is kept. The dual is concave, so its
//! maximizer is among these candidates.

use nalgebra::{DMatrix, DVector};

pub struct Reference {
    pub objective: f64,
}

fn objective(alpha: &[f64], q: &DMatrix<f64>) -> f64 {
    let a = DVector::from_column_slice(alpha);
    a.sum() - 0.5 * (a.transpose() * q * &a)[(0, 0)]
}

pub fn solve(kernel: &[f64], ys: &[i8], c: f64) -> Reference {
    let n = ys.len();
    assert!(n <= 12, "exhaustive solver is limited to 12 points");
    let y: Vec<f64> = ys.iter().map(|&v| f64::from(v)).collect();
    let q = DMatrix::from_fn(n, n, |i, j| y[i] * y[j] * kernel[i * n + j]);
    let mut best: Option<Reference> = None;
    let patterns = 3usize.pow(n as u32);
    let mut state = vec![0u8; n];
    for code in 0..patterns {
        let mut rest = code;
        for s in state.iter_mut() {
            *s = (rest % 3) as u8;
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        let bound_balance: f64 = (0..n).filter(|&i| state[i] == 1).map(|i| y[i] * c).sum();

        if free.is_empty() {
            if bound_balance.abs() > 1e-12 {
                continue;
            }
        } else {
            let m = free.len();
            let mut a = DMatrix::zeros(m + 1, m + 1);
            let mut b = DVector::zeros(m + 1);
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[(r, s)] = q[(i, j)];
                }
                a[(r, m)] = y[i];
                a[(m, r)] = y[i];
                let fixed: f64 = (0..n).filter(|&j| state[j] == 1).map(|j| q[(i, j)] * c).sum();
                b[r] = 1.0 - fixed;
            }
            b[m] = -bound_balance;
            let svd = a.clone().svd(true, true);
            let Ok(x) = svd.solve(&b, 1e-12) else { continue };
            if (&a * &x - &b).norm() > 1e-9 * (1.0 + b.norm()) {
                continue;
            }
            if free.iter().enumerate().any(|(r, _)| x[r] < -1e-12 || x[r] > c + 1e-12) {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = x[r].clamp(0.0, c);
            }
        }
        let obj = objective(&alpha, &q);
        if best.as_ref().is_none_or(|b| obj > b.objective) {
            best = Some(Reference { objective: obj });
        }
    }
    best.expect("α = 0 is always feasible")
}

/// Smallest eigenvalue of a symmetric row-major matrix.
pub fn min_eigenvalue(m: &[f64], n: usize) -> f64 {
    let mat = DMatrix::from_row_slice(n, n, m);
    mat.symmetric_eigenvalues().min()
}
