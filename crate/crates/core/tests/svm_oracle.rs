mod support;

use fakenews_core::svm::{dual_objective, kernel_from_distances, kkt_violation, solve_dual, squared_distances, DEFAULT_TOL};
use proptest::prelude::*;
use support::qp;

fn check(points: &[Vec<f64>], ys: &[i8], c: f64, gamma: f64) {
    let kernel = kernel_from_distances(&squared_distances(points), gamma);
    let reference = qp::solve(&kernel, ys, c);
    let sol = solve_dual(&kernel, ys, c, DEFAULT_TOL, 0, 7).unwrap();
    let obj = dual_objective(&sol.alpha, ys, &kernel);
    let rel = (obj - reference.objective).abs() / reference.objective.abs().max(1e-12);
    assert!(rel < 1e-6, "objective {obj} vs reference {}", reference.objective);
    assert!(kkt_violation(&sol.alpha, sol.bias, ys, &kernel, c) <= DEFAULT_TOL);
}

#[test]
fn separable_toy() {
    let xs = vec![vec![0.0, 0.0], vec![0.2, 0.1], vec![0.1, 0.3], vec![2.0, 2.0], vec![2.2, 1.9], vec![1.8, 2.3]];
    check(&xs, &[-1, -1, -1, 1, 1, 1], 10.0, 1.0);
    check(&xs, &[-1, -1, -1, 1, 1, 1], 0.05, 0.3);
}

#[test]
fn xor() {
    let xs = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
    check(&xs, &[-1, -1, 1, 1], 10.0, 1.0);
    check(&xs, &[-1, -1, 1, 1], 0.5, 2.0);
}

#[test]
fn duplicated_points() {
    let base = [[0.0, 0.0], [1.0, 0.5], [0.3, 1.2], [2.0, 0.1], [1.5, 1.5], [0.7, 0.7]];
    let labels = [-1i8, 1, -1, 1, 1, -1];
    let xs: Vec<Vec<f64>> = base.iter().chain(base.iter()).map(|p| p.to_vec()).collect();
    let ys: Vec<i8> = labels.iter().chain(labels.iter()).copied().collect();
    check(&xs, &ys, 10.0, 1.0);
    check(&xs, &ys, 0.1, 1.0);
}

#[test]
fn duplicated_data_keeps_decision_signs() {
    use fakenews_core::svm::{train_smo, SmoConfig};
    let base = vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![0.3, 1.2], vec![2.0, 0.1], vec![1.5, 1.5], vec![0.7, 0.7]];
    let labels = vec![-1i8, 1, -1, 1, 1, -1];
    let doubled: Vec<Vec<f64>> = base.iter().chain(base.iter()).cloned().collect();
    let doubled_y: Vec<i8> = labels.iter().chain(labels.iter()).copied().collect();
    let cfg = SmoConfig { c: 10.0, gamma: 1.0, tol: 1e-6, ..SmoConfig::default() };
    let a = train_smo(&base, &labels, &cfg).unwrap();
    let b = train_smo(&doubled, &doubled_y, &SmoConfig { c: 5.0, ..cfg }).unwrap();
    for i in 0..=10 {
        for j in 0..=10 {
            let p = [i as f64 * 0.25 - 0.25, j as f64 * 0.2 - 0.25];
            let (fa, fb) = (a.decision(&p).unwrap(), b.decision(&p).unwrap());
            if fa.abs() > 1e-3 {
                assert_eq!(fa.signum(), fb.signum(), "probe {p:?}: {fa} vs {fb}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_reference_on_random_problems(
        points in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0, any::<bool>()), 2..=9),
        c in 0.1f64..20.0,
        gamma in 0.1f64..3.0,
    ) {
        let xs: Vec<Vec<f64>> = points.iter().map(|&(a, b, _)| vec![a, b]).collect();
        let mut ys: Vec<i8> = points.iter().map(|&(_, _, l)| if l { 1 } else { -1 }).collect();
        ys[0] = 1;
        ys[1] = -1;
        check(&xs, &ys, c, gamma);
    }

    #[test]
    fn kernel_matrix_is_psd(
        points in proptest::collection::vec(proptest::collection::vec(-3.0f64..3.0, 4), 2..=50),
        gamma in 0.001f64..10.0,
    ) {
        let n = points.len();
        let k = kernel_from_distances(&squared_distances(&points), gamma);
        for i in 0..n {
            prop_assert_eq!(k[i * n + i], 1.0);
            for j in 0..n {
                prop_assert_eq!(k[i * n + j], k[j * n + i]);
            }
        }
        prop_assert!(qp::min_eigenvalue(&k, n) >= -1e-9);
    }
}
