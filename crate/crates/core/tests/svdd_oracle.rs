use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satclass_core::kernels::{gram_matrix, KernelConfig};
use satclass_core::svdd::{SvddModel, TrainParams};
use satclass_testkit::{dual_objective, enumerate_dual, gaussian_gram, grid_dual, grid_step_for, min_eigenvalue};

fn random_points(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect()
}

/// Objective of the trained model, recomputed from its alphas in the
/// oracle's own Gram matrix.
fn trained_objective(rows: &[Vec<f64>], width: f64, c: f64) -> (f64, Vec<f64>) {
    let params = TrainParams {
        tol: 1e-10,
        standardize: false,
        ..TrainParams::new(KernelConfig::gaussian(width).unwrap(), c)
    };
    let (model, report) = SvddModel::train(rows, &params).unwrap();
    assert!(report.converged);
    let mut full = vec![0.0; rows.len()];
    for (sv, a) in model.support_vectors().iter().zip(model.alphas()) {
        let i = rows.iter().position(|r| r == sv).unwrap();
        full[i] = *a;
    }
    let gram = gaussian_gram(rows, width);
    (dual_objective(&gram, &full), full)
}

#[test]
fn matches_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let n = 2 + case % 4;
        let rows = random_points(&mut rng, n, 2);
        let width = [0.5, 1.0, 3.0][case % 3];
        let c = [0.3, 0.5, 1.0]
            .into_iter()
            .filter(|c| c * n as f64 >= 1.0)
            .nth(case % 2)
            .unwrap_or(1.0);
        let (obj, alphas) = trained_objective(&rows, width, c);
        let oracle = enumerate_dual(&gaussian_gram(&rows, width), c);
        assert!(obj >= oracle.objective - 1e-6, "case {case}: {obj} < {}", oracle.objective);
        assert!((obj - oracle.objective).abs() < 1e-6);
        assert!((alphas.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(alphas.iter().all(|&a| (0.0..=c + 1e-12).contains(&a)));
    }
}

#[test]
fn matches_grid_oracle_on_four_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let rows = random_points(&mut rng, 4, 2);
        let (obj, _) = trained_objective(&rows, 1.0, 0.5);
        let grid = grid_dual(&gaussian_gram(&rows, 1.0), 0.5, grid_step_for(4));
        assert!((obj - grid.objective).abs() < 1e-6, "{obj} vs {}", grid.objective);
    }
}

#[test]
fn gaussian_gram_is_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..50 {
        let n = 1 + case % 8;
        let rows = random_points(&mut rng, n, 3);
        let cfg = KernelConfig::gaussian(rng.random_range(0.2..4.0)).unwrap();
        let g = gram_matrix(&cfg, &rows).unwrap();
        let dense: Vec<Vec<f64>> = (0..n).map(|i| g.row(i).to_vec()).collect();
        assert!(min_eigenvalue(&dense) >= -1e-9);
        assert!(g.diagonal().iter().all(|&d| d == 1.0));
    }
}
