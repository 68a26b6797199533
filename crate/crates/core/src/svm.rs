//! RBF-kernel support vector machine trained with SMO, plus stratified
//! cross-validated grid search over C and γ.
//!
//! The dual solved is
//!
//! ```text
//! min_α ½ αᵀQα − eᵀα   s.t.  0 ≤ α_i ≤ C,  yᵀα = 0,   Q_ij = y_i y_j K(x_i, x_j)
//! ```
//!
//! Each iteration picks the maximal violating pair (second-order choice of
//! the second index) and solves the two-variable subproblem analytically.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::linalg::squared_distance;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_C_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
pub const DEFAULT_GAMMA_GRID: [f64; 5] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0];
pub const DEFAULT_FOLDS: usize = 5;

const TAU: f64 = 1e-12;

pub fn rbf_kernel(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    Ok(libm::exp(-gamma * squared_distance(x, y)))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")))
    }
}

/// Row-major n×n matrix of squared Euclidean distances.
pub fn squared_distances<R: AsRef<[f64]>>(xs: &[R]) -> Vec<f64> {
    let n = xs.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = squared_distance(xs[i].as_ref(), xs[j].as_ref());
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    d
}

/// Kernel matrix `exp(−γ d²)` from precomputed squared distances.
pub fn kernel_from_distances(d2: &[f64], gamma: f64) -> Vec<f64> {
    d2.iter().map(|d| libm::exp(-gamma * d)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoConfig {
    pub c: f64,
    pub gamma: f64,
    pub tol: f64,
    /// Iteration cap; 0 means `max(100_000, 100·n)`.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SmoConfig {
    fn default() -> Self {
        Self { c: 1.0, gamma: 0.01, tol: DEFAULT_TOL, max_iter: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_labels(ys: &[i8]) -> Result<()> {
    if ys.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(bad) = ys.iter().find(|&&y| y != 1 && y != -1) {
        return Err(Error::InvalidParameter(format!("labels must be ±1, got {bad}")));
    }
    if !(ys.contains(&1) && ys.contains(&-1)) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// `eᵀα − ½ αᵀQα`, the dual objective being maximized.
pub fn dual_objective(alpha: &[f64], ys: &[i8], kernel: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alpha[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alpha[i] * alpha[j] * f64::from(ys[i]) * f64::from(ys[j]) * kernel[i * n + j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Solves the dual for a precomputed kernel matrix.
pub fn solve_dual(kernel: &[f64], ys: &[i8], c: f64, tol: f64, max_iter: usize, seed: u64) -> Result<SmoSolution> {
    check_labels(ys)?;
    let n = ys.len();
    if kernel.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, found: kernel.len() });
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("C must be positive, got {c}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let max_iter = if max_iter == 0 { (100 * n).max(100_000) } else { max_iter };
    let y: Vec<f64> = ys.iter().map(|&v| f64::from(v)).collect();
    let k = |i: usize, j: usize| kernel[i * n + j];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut crate::seeded_rng(seed));

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let is_up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let is_low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let mut g_max = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for &t in &order {
            if is_up(alpha[t], y[t]) && -y[t] * grad[t] > g_max {
                g_max = -y[t] * grad[t];
                i = t;
            }
        }
        let mut g_max2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut best = f64::INFINITY;
        for &t in &order {
            if !is_low(alpha[t], y[t]) {
                continue;
            }
            g_max2 = g_max2.max(y[t] * grad[t]);
            if i == usize::MAX {
                continue;
            }
            let b = g_max + y[t] * grad[t];
            if b > 0.0 {
                let a = k(i, i) + k(t, t) - 2.0 * k(i, t);
                let a = if a > 0.0 { a } else { TAU };
                let obj = -(b * b) / a;
                if obj < best {
                    best = obj;
                    j = t;
                }
            }
        }
        if g_max + g_max2 < tol || j == usize::MAX {
            converged = true;
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
        let quad = if quad > 0.0 { quad } else { TAU };
        let (mut ai, mut aj);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = old_i - old_j;
            ai = old_i + delta;
            aj = old_j + delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = old_i + old_j;
            ai = old_i - delta;
            aj = old_j + delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        let (di, dj) = (ai - old_i, aj - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(t, i) * di + y[j] * k(t, j) * dj);
        }
    }

    let mut free_sum = 0.0;
    let mut free = 0usize;
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 { free_sum / free as f64 } else { (ub + lb) / 2.0 };
    if !converged {
        log::warn!("SMO stopped after {iterations} iterations without reaching tolerance {tol}");
    }
    Ok(SmoSolution { alpha, bias: -rho, iterations, converged })
}

/// Largest KKT violation of `(alpha, bias)` in margin units:
/// `y_i f(x_i) ≥ 1` at α = 0, `= 1` when free, `≤ 1` at α = C.
pub fn kkt_violation(alpha: &[f64], bias: f64, ys: &[i8], kernel: &[f64], c: f64) -> f64 {
    let n = alpha.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        let f: f64 = (0..n).map(|j| alpha[j] * f64::from(ys[j]) * kernel[i * n + j]).sum::<f64>() + bias;
        let m = f64::from(ys[i]) * f;
        let v = if alpha[i] <= 0.0 {
            (1.0 - m).max(0.0)
        } else if alpha[i] >= c {
            (m - 1.0).max(0.0)
        } else {
            (m - 1.0).abs()
        };
        worst = worst.max(v);
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub c: f64,
    pub gamma: f64,
    pub support_vectors: Vec<Vec<f64>>,
    /// α_i·y_i for each support vector.
    pub coef: Vec<f64>,
    pub bias: f64,
}

fn check_rows<R: AsRef<[f64]>>(xs: &[R]) -> Result<usize> {
    let dim = xs.first().ok_or(Error::EmptyDataset)?.as_ref().len();
    for (i, x) in xs.iter().enumerate() {
        let x = x.as_ref();
        if x.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature row {i}")));
        }
    }
    Ok(dim)
}

pub fn train_smo<R: AsRef<[f64]>>(xs: &[R], ys: &[i8], config: &SmoConfig) -> Result<SvmModel> {
    check_rows(xs)?;
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    check_gamma(config.gamma)?;
    let kernel = kernel_from_distances(&squared_distances(xs), config.gamma);
    let sol = solve_dual(&kernel, ys, config.c, config.tol, config.max_iter, config.seed)?;
    Ok(SvmModel::from_solution(xs, ys, &sol, config.c, config.gamma))
}

impl SvmModel {
    /// Keeps the rows with α > 0.
    pub fn from_solution<R: AsRef<[f64]>>(xs: &[R], ys: &[i8], sol: &SmoSolution, c: f64, gamma: f64) -> Self {
        let mut support_vectors = Vec::new();
        let mut coef = Vec::new();
        for ((x, &y), &a) in xs.iter().zip(ys).zip(&sol.alpha) {
            if a > 0.0 {
                support_vectors.push(x.as_ref().to_vec());
                coef.push(a * f64::from(y));
            }
        }
        Self { c, gamma, support_vectors, coef, bias: sol.bias }
    }

    pub fn dim(&self) -> Option<usize> {
        self.support_vectors.first().map(Vec::len)
    }

    /// `f(x) = Σ α_i y_i K(s_i, x) + b`.
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if d != x.len() {
                return Err(Error::DimensionMismatch { expected: d, found: x.len() });
            }
        }
        let sum: f64 = self
            .support_vectors
            .iter()
            .zip(&self.coef)
            .map(|(s, a)| a * libm::exp(-self.gamma * squared_distance(s, x)))
            .sum();
        Ok(sum + self.bias)
    }

    /// Label and decision value; `f = 0` maps to +1.
    pub fn predict(&self, x: &[f64]) -> Result<(i8, f64)> {
        let f = self.decision(x)?;
        Ok((if f >= 0.0 { 1 } else { -1 }, f))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchSpec {
    pub c_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub folds: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        Self {
            c_grid: DEFAULT_C_GRID.to_vec(),
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

impl GridSearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.c_grid.is_empty() || self.gamma_grid.is_empty() {
            return Err(Error::InvalidParameter("grids must be non-empty".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 folds, got {}", self.folds)));
        }
        if self.c_grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidParameter("C values must be positive".into()));
        }
        self.gamma_grid.iter().try_for_each(|&g| check_gamma(g))
    }

    /// Every (C, γ) cell in table order.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        self.c_grid.iter().flat_map(|&c| self.gamma_grid.iter().map(move |&g| (c, g))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub c: f64,
    pub gamma: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: GridCell,
    pub table: Vec<GridCell>,
}

/// Fold index per example; each class is shuffled and dealt round-robin so
/// every fold receives both classes.
pub fn stratified_folds(ys: &[i8], k: usize, seed: u64) -> Result<Vec<usize>> {
    check_labels(ys)?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k}")));
    }
    let mut rng = crate::seeded_rng(seed);
    let mut fold = vec![0; ys.len()];
    for class in [1i8, -1] {
        let mut idx: Vec<usize> = (0..ys.len()).filter(|&i| ys[i] == class).collect();
        if idx.len() < k {
            return Err(Error::InvalidParameter(format!(
                "class {class:+} has {} examples, fewer than {k} folds",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        for (pos, i) in idx.into_iter().enumerate() {
            fold[i] = pos % k;
        }
    }
    Ok(fold)
}

/// Pooled k-fold accuracy of one grid cell from precomputed squared
/// distances.
pub fn cross_validate(d2: &[f64], ys: &[i8], folds: &[usize], c: f64, gamma: f64, tol: f64, seed: u64) -> Result<f64> {
    let n = ys.len();
    let kernel = kernel_from_distances(d2, gamma);
    let k = folds.iter().max().map_or(0, |m| m + 1);
    let mut correct = 0usize;
    for f in 0..k {
        let train: Vec<usize> = (0..n).filter(|&i| folds[i] != f).collect();
        let test: Vec<usize> = (0..n).filter(|&i| folds[i] == f).collect();
        let m = train.len();
        let mut sub = vec![0.0; m * m];
        for (a, &i) in train.iter().enumerate() {
            for (b, &j) in train.iter().enumerate() {
                sub[a * m + b] = kernel[i * n + j];
            }
        }
        let y_train: Vec<i8> = train.iter().map(|&i| ys[i]).collect();
        let sol = solve_dual(&sub, &y_train, c, tol, 0, seed)?;
        for &t in &test {
            let f: f64 = train
                .iter()
                .zip(&sol.alpha)
                .filter(|(_, &a)| a > 0.0)
                .map(|(&i, &a)| a * f64::from(ys[i]) * kernel[t * n + i])
                .sum::<f64>()
                + sol.bias;
            if (if f >= 0.0 { 1 } else { -1 }) == ys[t] {
                correct += 1;
            }
        }
    }
    Ok(correct as f64 / n as f64)
}

/// Highest accuracy; ties go to the smaller C, then the smaller γ.
pub fn select_best(table: &[GridCell]) -> Option<GridCell> {
    table.iter().copied().reduce(|best, cell| {
        let better = cell.accuracy > best.accuracy
            || (cell.accuracy == best.accuracy
                && (cell.c < best.c || (cell.c == best.c && cell.gamma < best.gamma)));
        if better {
            cell
        } else {
            best
        }
    })
}

pub fn grid_search_cv<R: AsRef<[f64]>>(xs: &[R], ys: &[i8], spec: &GridSearchSpec) -> Result<GridResult> {
    spec.validate()?;
    check_rows(xs)?;
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    let folds = stratified_folds(ys, spec.folds, spec.seed)?;
    let d2 = squared_distances(xs);
    let mut table = Vec::new();
    for (c, gamma) in spec.cells() {
        let accuracy = cross_validate(&d2, ys, &folds, c, gamma, spec.tol, spec.seed)?;
        log::debug!("grid C={c} gamma={gamma}: accuracy {accuracy:.4}");
        table.push(GridCell { c, gamma, accuracy });
    }
    let best = select_best(&table).expect("non-empty grid");
    Ok(GridResult { best, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_values() {
        assert_eq!(rbf_kernel(&[1.0, 2.0], &[1.0, 2.0], 0.5).unwrap(), 1.0);
        assert!((rbf_kernel(&[0.0], &[1.0], 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(rbf_kernel(&[0.0], &[1.0], 0.0).is_err());
        assert!(rbf_kernel(&[0.0], &[1.0, 2.0], 1.0).is_err());
        let mut last = 1.0;
        for g in [0.1, 1.0, 10.0, 100.0] {
            let k = rbf_kernel(&[0.0, 0.0], &[0.3, 0.4], g).unwrap();
            assert!(k < last);
            last = k;
        }
    }

    #[test]
    fn two_points_are_both_support_vectors() {
        let xs = [[0.0, 0.0], [1.0, 1.0]];
        let ys = [-1, 1];
        let model = train_smo(&xs, &ys, &SmoConfig { c: 10.0, gamma: 1.0, ..SmoConfig::default() }).unwrap();
        assert_eq!(model.support_vectors.len(), 2);
        for (x, &y) in xs.iter().zip(&ys) {
            let (label, f) = model.predict(x).unwrap();
            assert_eq!(label, y);
            // both free: |f| = 1 at the margin
            assert!((f.abs() - 1.0).abs() < 1e-3);
        }
        // closed form: α = 2 / (2 − 2e^{−2})
        let k = (-2.0f64).exp();
        let alpha = 1.0 / (1.0 - k);
        assert!((model.coef[1] - alpha).abs() < 1e-9, "{:?}", model.coef);
        assert!(model.bias.abs() < 1e-9);
    }

    #[test]
    fn xor_is_separated() {
        let xs = [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
        let ys = [-1, -1, 1, 1];
        let model = train_smo(&xs, &ys, &SmoConfig { c: 10.0, gamma: 1.0, ..SmoConfig::default() }).unwrap();
        for (x, &y) in xs.iter().zip(&ys) {
            assert_eq!(model.predict(x).unwrap().0, y);
        }
    }

    #[test]
    fn invalid_inputs() {
        let cfg = SmoConfig::default();
        assert_eq!(train_smo(&[[0.0], [1.0]], &[1, 1], &cfg), Err(Error::SingleClass));
        assert!(matches!(train_smo(&[[0.0], [f64::NAN]], &[1, -1], &cfg), Err(Error::NonFinite(_))));
        assert!(train_smo(&[[0.0], [1.0]], &[1, 0], &cfg).is_err());
        assert!(train_smo(&[[0.0], [1.0]], &[1], &cfg).is_err());
        assert!(train_smo(&[[0.0], [1.0]], &[1, -1], &SmoConfig { c: 0.0, ..cfg }).is_err());
        let model = train_smo(&[[0.0], [1.0]], &[1, -1], &cfg).unwrap();
        assert!(model.predict(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn zero_decision_is_positive() {
        let model = SvmModel { c: 1.0, gamma: 1.0, support_vectors: vec![vec![0.0]], coef: vec![0.0], bias: 0.0 };
        assert_eq!(model.predict(&[3.0]).unwrap(), (1, 0.0));
    }

    fn separable(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<i8>) {
        use rand::Rng;
        let mut rng = crate::seeded_rng(seed);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n {
            let y: i8 = if i % 3 == 0 { 1 } else { -1 };
            let shift = if y > 0 { 2.0 } else { -2.0 };
            xs.push(vec![shift + rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            ys.push(y);
        }
        (xs, ys)
    }

    #[test]
    fn grid_search_finds_perfect_cell() {
        let (xs, ys) = separable(60, 1);
        let spec = GridSearchSpec { folds: 3, ..GridSearchSpec::default() };
        let r = grid_search_cv(&xs, &ys, &spec).unwrap();
        assert_eq!(r.table.len(), 25);
        assert_eq!(r.best.accuracy, 1.0);
        let first_perfect = r.table.iter().find(|c| c.accuracy == 1.0).unwrap();
        assert_eq!(r.best, *first_perfect);
    }

    #[test]
    fn single_cell_grid() {
        let (xs, ys) = separable(30, 2);
        let spec = GridSearchSpec { c_grid: vec![3.0], gamma_grid: vec![0.5], folds: 2, ..GridSearchSpec::default() };
        let r = grid_search_cv(&xs, &ys, &spec).unwrap();
        assert_eq!((r.best.c, r.best.gamma), (3.0, 0.5));
    }

    #[test]
    fn ties_prefer_smaller_c_then_gamma() {
        let cell = |c, gamma, accuracy| GridCell { c, gamma, accuracy };
        let table = [cell(10.0, 0.1, 0.9), cell(1.0, 1.0, 0.9), cell(1.0, 0.01, 0.9), cell(100.0, 0.1, 0.8)];
        assert_eq!(select_best(&table), Some(cell(1.0, 0.01, 0.9)));
        assert_eq!(select_best(&[]), None);
    }

    #[test]
    fn folds_are_stratified() {
        let ys: Vec<i8> = (0..23).map(|i| if i % 4 == 0 { 1 } else { -1 }).collect();
        let folds = stratified_folds(&ys, 5, 3).unwrap();
        for f in 0..5 {
            assert!((0..ys.len()).any(|i| folds[i] == f && ys[i] == 1));
            assert!((0..ys.len()).any(|i| folds[i] == f && ys[i] == -1));
        }
        assert!(stratified_folds(&ys, 7, 3).is_err());
        assert!(stratified_folds(&ys, 1, 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn dual_constraints_hold(
            points in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, any::<bool>()), 2..30),
            c in 0.05f64..50.0,
            gamma in 0.05f64..5.0,
            seed in 0u64..4,
        ) {
            let xs: Vec<[f64; 2]> = points.iter().map(|&(a, b, _)| [a, b]).collect();
            let mut ys: Vec<i8> = points.iter().map(|&(_, _, l)| if l { 1 } else { -1 }).collect();
            ys[0] = 1;
            ys[1] = -1;
            let kernel = kernel_from_distances(&squared_distances(&xs), gamma);
            let sol = solve_dual(&kernel, &ys, c, 1e-3, 0, seed).unwrap();
            prop_assert!(sol.converged);
            prop_assert!(sol.alpha.iter().all(|&a| (0.0..=c).contains(&a)));
            let balance: f64 = sol.alpha.iter().zip(&ys).map(|(a, &y)| a * f64::from(y)).sum();
            prop_assert!(balance.abs() < 1e-9, "Σαy = {}", balance);
            prop_assert!(kkt_violation(&sol.alpha, sol.bias, &ys, &kernel, c) <= 1e-3);
        }
    }
}
