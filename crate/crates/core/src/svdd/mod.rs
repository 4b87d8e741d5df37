//! Support Vector Data Description.
//!
//! Training solves the dual of
//!
//! ```text
//! min R^2 + C sum_i e_i   s.t.  |phi(x_i) - a|^2 <= R^2 + e_i,  e_i >= 0
//! ```
//!
//! whose solution gives the centre `a = sum_i alpha_i phi(x_i)`. The
//! squared feature-space distance of a point to the centre is
//!
//! ```text
//! d^2(x) = K(x, x) - 2 sum_i alpha_i K(x_i, x) + sum_ij alpha_i alpha_j K(x_i, x_j)
//! ```
//!
//! and a point is accepted as target (Class LOW) when `d^2(x) < R^2`.
//! Points on the boundary, including unbounded support vectors, are
//! outliers.

mod scaling;
pub mod solver;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use scaling::Standardization;

use crate::error::{Error, Result};
use crate::eval::ClassLabel;
use crate::kernels::{gram_matrix, KernelConfig};

/// Strict-acceptance margin for [`SvddModel::classify`].
pub const BOUNDARY_EPS: f64 = 1e-12;

/// Relative alpha threshold below which a training point is not kept as a
/// support vector.
pub const SV_THRESHOLD: f64 = 1e-8;

/// Relative slack for treating an alpha as sitting at the `C` bound.
const BOUND_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub kernel: KernelConfig,
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Standardize features with training mean/stddev before training.
    pub standardize: bool,
}

impl TrainParams {
    pub fn new(kernel: KernelConfig, c: f64) -> Self {
        Self {
            kernel,
            c,
            ..Self::default()
        }
    }
}

impl Default for TrainParams {
    /// Gaussian width 3.0, C = 0.005, tol = 1e-6, 1e5 pair updates.
    fn default() -> Self {
        Self {
            kernel: KernelConfig::gaussian(3.0).expect("valid width"),
            c: 0.005,
            tol: 1e-6,
            max_iter: 100_000,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub iterations: usize,
    pub final_objective: f64,
    pub n_support: usize,
    pub n_bounded: usize,
    pub converged: bool,
}

/// A trained hypersphere. Support vectors are stored in standardized
/// coordinates; [`SvddModel::score`] takes raw feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SvddModel {
    kernel: KernelConfig,
    support_vectors: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    r_squared: f64,
    c: f64,
    self_term: f64,
    feature_names: Vec<String>,
    scaling: Standardization,
}

fn is_bounded(alpha: f64, c: f64) -> bool {
    alpha >= c * (1.0 - BOUND_RTOL)
}

/// Squared radius: the largest distance-to-centre among unbounded support
/// vectors, or among all support vectors when every one sits at `C`.
pub fn radius_squared(
    support_vectors: &[Vec<f64>],
    alphas: &[f64],
    c: f64,
    kernel: &KernelConfig,
) -> f64 {
    let self_term = self_term(support_vectors, alphas, kernel);
    let dist = |x: &[f64]| distance_to_centre(support_vectors, alphas, kernel, self_term, x);
    let free = support_vectors
        .iter()
        .zip(alphas)
        .filter(|(_, &a)| !is_bounded(a, c))
        .map(|(x, _)| dist(x))
        .fold(f64::NEG_INFINITY, f64::max);
    let r2 = if free.is_finite() {
        free
    } else {
        support_vectors
            .iter()
            .map(|x| dist(x))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    r2.max(0.0)
}

fn self_term(support_vectors: &[Vec<f64>], alphas: &[f64], kernel: &KernelConfig) -> f64 {
    let mut total = 0.0;
    for (xi, ai) in support_vectors.iter().zip(alphas) {
        for (xj, aj) in support_vectors.iter().zip(alphas) {
            total += ai * aj * kernel.eval_unchecked(xi, xj);
        }
    }
    total
}

#[inline]
fn distance_to_centre(
    support_vectors: &[Vec<f64>],
    alphas: &[f64],
    kernel: &KernelConfig,
    self_term: f64,
    x: &[f64],
) -> f64 {
    let cross: f64 = support_vectors
        .iter()
        .zip(alphas)
        .map(|(sv, a)| a * kernel.eval_unchecked(sv, x))
        .sum();
    kernel.self_value(x) - 2.0 * cross + self_term
}

impl SvddModel {
    /// Fits the hypersphere to `rows` (the target class only).
    pub fn train(rows: &[Vec<f64>], params: &TrainParams) -> Result<(Self, TrainReport)> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyTraining);
        }
        if !(params.c > 0.0) || !params.c.is_finite() {
            return Err(Error::InvalidParameter(format!("C must be > 0, got {}", params.c)));
        }
        if params.c * (n as f64) < 1.0 - 1e-12 {
            return Err(Error::InfeasibleC { c: params.c, n });
        }
        if !(params.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {}", params.tol)));
        }
        let p = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::DimError {
                expected: p,
                got: bad.len(),
            });
        }

        let scaling = if params.standardize {
            Standardization::fit(rows)
        } else {
            Standardization::identity(p)
        };
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| scaling.apply(r)).collect();
        let gram = gram_matrix(&params.kernel, &scaled)?;
        let sol = solver::solve(&gram, params.c, params.tol, params.max_iter);

        let cutoff = SV_THRESHOLD * params.c;
        let keep: Vec<usize> = (0..n).filter(|&i| sol.alphas[i] > cutoff).collect();
        let n_bounded = keep
            .iter()
            .filter(|&&i| is_bounded(sol.alphas[i], params.c))
            .count();
        let kept_sum: f64 = keep.iter().map(|&i| sol.alphas[i]).sum();
        let alphas: Vec<f64> = keep
            .iter()
            .map(|&i| {
                let a = sol.alphas[i];
                if keep.len() == n {
                    a
                } else {
                    (a / kept_sum).min(params.c)
                }
            })
            .collect();
        let support_vectors: Vec<Vec<f64>> = keep.iter().map(|&i| scaled[i].clone()).collect();

        let mut self_term = 0.0;
        for (a, &i) in alphas.iter().zip(&keep) {
            let row = gram.row(i);
            for (b, &j) in alphas.iter().zip(&keep) {
                self_term += a * b * row[j];
            }
        }
        let self_term = self_term.max(0.0);

        let dist = |slot: usize| {
            let i = keep[slot];
            let row = gram.row(i);
            let cross: f64 = alphas.iter().zip(&keep).map(|(a, &j)| a * row[j]).sum();
            gram.get(i, i) - 2.0 * cross + self_term
        };
        let free = (0..keep.len())
            .filter(|&s| !is_bounded(alphas[s], params.c))
            .map(dist)
            .fold(f64::NEG_INFINITY, f64::max);
        let r_squared = if free.is_finite() {
            free
        } else {
            (0..keep.len()).map(dist).fold(f64::NEG_INFINITY, f64::max)
        }
        .max(0.0);

        if !r_squared.is_finite() || !self_term.is_finite() {
            return Err(Error::NumError("non-finite radius".into()));
        }

        let model = SvddModel {
            kernel: params.kernel,
            support_vectors,
            alphas,
            r_squared,
            c: params.c,
            self_term,
            feature_names: (0..p).map(|i| format!("f{i}")).collect(),
            scaling,
        };
        let report = TrainReport {
            iterations: sol.iterations,
            final_objective: sol.objective,
            n_support: keep.len(),
            n_bounded,
            converged: sol.converged,
        };
        Ok((model, report))
    }

    /// Reassembles a model from stored parts, checking its invariants.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        kernel: KernelConfig,
        support_vectors: Vec<Vec<f64>>,
        alphas: Vec<f64>,
        r_squared: f64,
        c: f64,
        self_term: f64,
        feature_names: Vec<String>,
        scaling: Standardization,
    ) -> Result<Self> {
        let p = feature_names.len();
        if support_vectors.is_empty() || support_vectors.len() != alphas.len() {
            return Err(Error::InvalidParameter(format!(
                "{} support vectors with {} alphas",
                support_vectors.len(),
                alphas.len()
            )));
        }
        if let Some(bad) = support_vectors.iter().find(|sv| sv.len() != p) {
            return Err(Error::DimError {
                expected: p,
                got: bad.len(),
            });
        }
        if scaling.dim() != p {
            return Err(Error::DimError {
                expected: p,
                got: scaling.dim(),
            });
        }
        if alphas.iter().any(|&a| !(a > 0.0) || a > c * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter("alpha outside (0, C]".into()));
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("alphas sum to {sum}, expected 1")));
        }
        if !(r_squared >= 0.0) || !(self_term >= 0.0) {
            return Err(Error::InvalidParameter("negative radius or self term".into()));
        }
        Ok(Self {
            kernel,
            support_vectors,
            alphas,
            r_squared,
            c,
            self_term,
            feature_names,
            scaling,
        })
    }

    pub fn set_feature_names(&mut self, names: Vec<String>) -> Result<()> {
        if names.len() != self.dim() {
            return Err(Error::DimError {
                expected: self.dim(),
                got: names.len(),
            });
        }
        self.feature_names = names;
        Ok(())
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.kernel
    }

    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support_vectors
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn r_squared(&self) -> f64 {
        self.r_squared
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn self_term(&self) -> f64 {
        self.self_term
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn scaling(&self) -> &Standardization {
        &self.scaling
    }

    pub fn dim(&self) -> usize {
        self.scaling.dim()
    }

    pub fn n_bounded(&self) -> usize {
        self.alphas.iter().filter(|&&a| is_bounded(a, self.c)).count()
    }

    /// Squared distance of `x` (raw features) to the centre.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimError {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let z = self.scaling.apply(x);
        Ok(distance_to_centre(
            &self.support_vectors,
            &self.alphas,
            &self.kernel,
            self.self_term,
            &z,
        ))
    }

    pub fn classify(&self, x: &[f64]) -> Result<ClassLabel> {
        Ok(self.label_for_score(self.score(x)?))
    }

    pub fn label_for_score(&self, score: f64) -> ClassLabel {
        if score < self.r_squared - BOUNDARY_EPS {
            ClassLabel::Low
        } else {
            ClassLabel::High
        }
    }
}
