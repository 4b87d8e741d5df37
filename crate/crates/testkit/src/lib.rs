//! Reference computations used only by tests. Nothing here calls into the
//! crates under test: kernels, dual objectives and solvers are written out
//! again in the most direct form.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// `exp(-|x - y|^2 / s^2)` for every pair.
pub fn gaussian_gram(points: &[Vec<f64>], width: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|x| {
            points
                .iter()
                .map(|y| {
                    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
                    (-d2 / (width * width)).exp()
                })
                .collect()
        })
        .collect()
}

/// `sum_i a_i K_ii - sum_ij a_i a_j K_ij`
pub fn dual_objective(gram: &[Vec<f64>], alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut value = 0.0;
    for i in 0..n {
        value += alphas[i] * gram[i][i];
        for j in 0..n {
            value -= alphas[i] * alphas[j] * gram[i][j];
        }
    }
    value
}

pub fn min_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    SymmetricEigen::new(mat).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone)]
pub struct OracleOptimum {
    pub alphas: Vec<f64>,
    pub objective: f64,
}

/// Exact maximiser of the capped-simplex dual by active-set enumeration.
///
/// Every index is assigned to `alpha = 0`, `alpha = C` or free; for each of
/// the `3^n` assignments the equality-constrained stationary point of the
/// free block is solved from its KKT system, and the best feasible
/// candidate is kept. Practical for n <= 8.
pub fn enumerate_dual(gram: &[Vec<f64>], c: f64) -> OracleOptimum {
    let n = gram.len();
    let mut best = OracleOptimum {
        alphas: vec![],
        objective: f64::NEG_INFINITY,
    };
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = vec![0u8; n];
        let mut rest = code;
        for s in state.iter_mut() {
            *s = (rest % 3) as u8;
            rest /= 3;
        }
        let mut alphas: Vec<f64> = state
            .iter()
            .map(|&s| if s == 1 { c } else { 0.0 })
            .collect();
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let fixed_sum: f64 = alphas.iter().sum();
        if free.is_empty() {
            if (fixed_sum - 1.0).abs() > 1e-12 {
                continue;
            }
        } else {
            let m = free.len();
            let mut a = DMatrix::zeros(m + 1, m + 1);
            let mut b = DVector::zeros(m + 1);
            for (r, &i) in free.iter().enumerate() {
                for (q, &j) in free.iter().enumerate() {
                    a[(r, q)] = 2.0 * gram[i][j];
                }
                a[(r, m)] = -1.0;
                a[(m, r)] = 1.0;
                let coupling: f64 = (0..n).map(|j| gram[i][j] * alphas[j]).sum();
                b[r] = gram[i][i] - 2.0 * coupling;
            }
            b[m] = 1.0 - fixed_sum;
            let Some(sol) = a.lu().solve(&b) else { continue };
            let mut feasible = true;
            for (r, &i) in free.iter().enumerate() {
                let v = sol[r];
                if !(-1e-12..=c + 1e-12).contains(&v) || !v.is_finite() {
                    feasible = false;
                    break;
                }
                alphas[i] = v.clamp(0.0, c);
            }
            if !feasible {
                continue;
            }
        }
        let obj = dual_objective(gram, &alphas);
        if obj > best.objective {
            best = OracleOptimum {
                alphas,
                objective: obj,
            };
        }
    }
    best
}

/// Brute-force grid search over `{alpha : sum = 1, 0 <= alpha <= C}` with
/// spacing `step`, followed by a derivative-free pattern search (mass
/// transfers between pairs with a halving step) from the best grid point.
pub fn grid_dual(gram: &[Vec<f64>], c: f64, step: f64) -> OracleOptimum {
    let n = gram.len();
    let units = (1.0 / step).round() as usize;
    let cap = ((c / step) + 1e-9).floor() as usize;
    let mut best = OracleOptimum {
        alphas: vec![],
        objective: f64::NEG_INFINITY,
    };
    let mut counts = vec![0usize; n];
    grid_rec(gram, &mut counts, 0, units, cap, units, &mut best);

    let mut alphas = best.alphas.clone();
    let mut value = best.objective;
    let mut h = step;
    while h > 1e-13 {
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let delta = h.min(c - alphas[i]).min(alphas[j]);
                if delta <= 0.0 {
                    continue;
                }
                let mut trial = alphas.clone();
                trial[i] += delta;
                trial[j] -= delta;
                let v = dual_objective(gram, &trial);
                if v > value {
                    alphas = trial;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    OracleOptimum {
        alphas,
        objective: value,
    }
}

fn grid_rec(
    gram: &[Vec<f64>],
    counts: &mut Vec<usize>,
    idx: usize,
    remaining: usize,
    cap: usize,
    units: usize,
    best: &mut OracleOptimum,
) {
    let n = counts.len();
    if idx == n - 1 {
        if remaining > cap {
            return;
        }
        counts[idx] = remaining;
        let alphas: Vec<f64> = counts.iter().map(|&k| k as f64 / units as f64).collect();
        let v = dual_objective(gram, &alphas);
        if v > best.objective {
            *best = OracleOptimum { alphas, objective: v };
        }
        return;
    }
    for k in 0..=remaining.min(cap) {
        counts[idx] = k;
        grid_rec(gram, counts, idx + 1, remaining - k, cap, units, best);
    }
}

/// Grid spacing keeping the grid near a few hundred thousand points.
pub fn grid_step_for(n: usize) -> f64 {
    match n {
        0..=3 => 1e-3,
        4 => 1e-2,
        _ => 2e-2,
    }
}
