//! Pairwise coordinate ascent for the SVDD dual
//!
//! ```text
//! max  L(a) = sum_i a_i K_ii - sum_ij a_i a_j K_ij
//! s.t. sum_i a_i = 1,  0 <= a_i <= C
//! ```
//!
//! Internally we minimise `f = -L`. With gradient `g = 2 K a - diag(K)`,
//! moving mass `t` from `j` to `i` changes `f` by
//! `t (g_i - g_j) + t^2 (K_ii + K_jj - 2 K_ij)`, so each step picks the
//! maximal violating pair (smallest `g_i` among `a_i < C`, largest `g_j`
//! among `a_j > 0`) and takes the exact clipped minimiser along that line.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernels::Gram;

#[derive(Debug, Clone)]
pub struct DualSolution {
    pub alphas: Vec<f64>,
    pub iterations: usize,
    pub objective: f64,
    pub converged: bool,
    /// Largest KKT violation at exit.
    pub violation: f64,
}

/// Curvature below which the pair direction is treated as flat.
const FLAT: f64 = 1e-12;

/// Feasible starting point: fill the simplex greedily at the upper bound.
fn initial_alphas(n: usize, c: f64) -> Vec<f64> {
    let mut alphas = vec![0.0; n];
    let mut remaining: f64 = 1.0;
    for a in alphas.iter_mut() {
        if remaining <= 0.0 {
            break;
        }
        *a = remaining.min(c);
        remaining -= *a;
    }
    alphas
}

/// Dual objective `L(a)`, evaluated directly.
pub fn dual_objective(gram: &Gram, alphas: &[f64]) -> f64 {
    let mut linear = 0.0;
    let mut quad = 0.0;
    for (i, &ai) in alphas.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        linear += ai * gram.get(i, i);
        let row = gram.row(i);
        let s: f64 = alphas.iter().zip(row).map(|(aj, k)| aj * k).sum();
        quad += ai * s;
    }
    linear - quad
}

/// Solves the dual on a precomputed Gram matrix. Requires `c * n >= 1`.
pub fn solve(gram: &Gram, c: f64, tol: f64, max_iter: usize) -> DualSolution {
    let n = gram.n();
    let mut alphas = initial_alphas(n, c);

    let mut grad: Vec<f64> = (0..n)
        .map(|k| {
            let row = gram.row(k);
            2.0 * alphas.iter().zip(row).map(|(a, x)| a * x).sum::<f64>() - gram.get(k, k)
        })
        .collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut violation;

    loop {
        let mut up = None;
        let mut low = None;
        for k in 0..n {
            if alphas[k] < c && up.is_none_or(|u: usize| grad[k] < grad[u]) {
                up = Some(k);
            }
            if alphas[k] > 0.0 && low.is_none_or(|l: usize| grad[k] > grad[l]) {
                low = Some(k);
            }
        }
        let (i, j) = match (up, low) {
            (Some(i), Some(j)) => (i, j),
            // Every alpha is at a bound on the same side; nothing can move.
            _ => {
                violation = 0.0;
                converged = true;
                break;
            }
        };
        violation = grad[j] - grad[i];
        if violation < tol {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }

        let eta = gram.get(i, i) + gram.get(j, j) - 2.0 * gram.get(i, j);
        let t_max = (c - alphas[i]).min(alphas[j]);
        let t = if eta > FLAT {
            (violation / (2.0 * eta)).min(t_max)
        } else {
            t_max
        };

        let old_i = alphas[i];
        let old_j = alphas[j];
        alphas[i] = if t == c - old_i { c } else { old_i + t };
        alphas[j] = if t == old_j { 0.0 } else { old_j - t };
        let di = alphas[i] - old_i;
        let dj = alphas[j] - old_j;

        debug_assert!(
            t * (grad[i] - grad[j]) + t * t * eta <= 1e-12 * (1.0 + violation),
            "dual objective decreased at iteration {iterations}"
        );

        let row_i = gram.row(i);
        let row_j = gram.row(j);
        for k in 0..n {
            grad[k] += 2.0 * (di * row_i[k] + dj * row_j[k]);
        }
        iterations += 1;
    }

    let objective = dual_objective(gram, &alphas);
    DualSolution {
        alphas,
        iterations,
        objective,
        converged,
        violation,
    }
}
