//! Two-class Relief feature weighting (Kira & Rendell).
//!
//! Features are range-normalised, so `diff(f, a, b) = |a_f - b_f| / range_f`
//! lies in `[0, 1]` and every weight in `[-1, 1]`. For each sampled
//! instance the nearest hit (same class) and nearest miss (other class)
//! are found under Euclidean distance on the normalised features, and
//!
//! ```text
//! w_f <- w_f - diff(f, x, hit) / m + diff(f, x, miss) / m
//! ```
//!
//! Sampling: instances are visited in the order of a seeded shuffle of
//! `0..n`; when `m > n` further independent shuffles are appended. With
//! `m = n` every instance is used exactly once. Distance ties resolve to
//! the lower sample index; an instance whose class has no other member
//! contributes no hit term.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::ClassLabel;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureWeights {
    pub names: Vec<String>,
    pub weights: Vec<f64>,
}

impl FeatureWeights {
    pub fn weight(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.weights[i])
    }

    /// Weights restricted to `names`, in that order.
    pub fn restrict(&self, names: &[String]) -> Option<Self> {
        let weights = names
            .iter()
            .map(|n| self.weight(n))
            .collect::<Option<Vec<f64>>>()?;
        Some(Self {
            names: names.to_vec(),
            weights,
        })
    }

    /// `(name, weight)` pairs sorted by descending weight, ties by index.
    pub fn ranked(&self) -> Vec<(&str, f64)> {
        let mut idx: Vec<usize> = (0..self.weights.len()).collect();
        idx.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]));
        idx.into_iter()
            .map(|i| (self.names[i].as_str(), self.weights[i]))
            .collect()
    }
}

/// Visiting order of sampled instances.
fn sample_order(n: usize, m: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    while order.len() < m {
        perm.shuffle(&mut rng);
        let take = (m - order.len()).min(n);
        order.extend_from_slice(&perm[..take]);
    }
    order
}

pub fn relief_weights(
    names: &[String],
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    m: usize,
    seed: u64,
) -> Result<FeatureWeights> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("Relief needs >= 2 samples, got {n}")));
    }
    if labels.len() != n {
        return Err(Error::DimError {
            expected: n,
            got: labels.len(),
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter("Relief iteration count m must be >= 1".into()));
    }
    let p = names.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != p) {
        return Err(Error::DimError {
            expected: p,
            got: bad.len(),
        });
    }
    if !labels.contains(&ClassLabel::Low) || !labels.contains(&ClassLabel::High) {
        return Err(Error::DegenerateLabels);
    }

    let mut lo = vec![f64::INFINITY; p];
    let mut hi = vec![f64::NEG_INFINITY; p];
    for r in rows {
        for f in 0..p {
            lo[f] = lo[f].min(r[f]);
            hi[f] = hi[f].max(r[f]);
        }
    }
    // Constant features are left out of the distance and keep weight 0.
    let active: Vec<usize> = (0..p).filter(|&f| hi[f] > lo[f]).collect();
    let q = active.len();
    let mut norm = vec![0.0; n * q];
    for (i, r) in rows.iter().enumerate() {
        for (k, &f) in active.iter().enumerate() {
            norm[i * q + k] = (r[f] - lo[f]) / (hi[f] - lo[f]);
        }
    }
    let point = |i: usize| &norm[i * q..(i + 1) * q];

    let mut acc = vec![0.0; q];
    for x in sample_order(n, m, seed) {
        let xv = point(x);
        let mut hit: Option<(usize, f64)> = None;
        let mut miss: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == x {
                continue;
            }
            let d: f64 = xv
                .iter()
                .zip(point(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let slot = if labels[j] == labels[x] { &mut hit } else { &mut miss };
            if slot.is_none_or(|(_, best)| d < best) {
                *slot = Some((j, d));
            }
        }
        if let Some((h, _)) = hit {
            for (a, (u, v)) in acc.iter_mut().zip(xv.iter().zip(point(h))) {
                *a -= libm::fabs(u - v);
            }
        }
        if let Some((mi, _)) = miss {
            for (a, (u, v)) in acc.iter_mut().zip(xv.iter().zip(point(mi))) {
                *a += libm::fabs(u - v);
            }
        }
    }

    let mut weights = vec![0.0; p];
    for (k, &f) in active.iter().enumerate() {
        weights[f] = acc[k] / m as f64;
    }
    Ok(FeatureWeights {
        names: names.to_vec(),
        weights,
    })
}

/// Names of the `k` largest weights, by descending weight; ties go to the
/// lower original index.
pub fn select_top_k(w: &FeatureWeights, k: usize) -> Result<Vec<String>> {
    let n = w.names.len();
    if k == 0 || k > n {
        return Err(Error::BadK { k, n });
    }
    Ok(w.ranked()
        .into_iter()
        .take(k)
        .map(|(name, _)| String::from(name))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;
    use rand::Rng;

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|i| format!("f{}", i + 1)).collect()
    }

    /// Two clusters differing only in feature 1 by 20 units; feature 2 is
    /// uniform noise of width 1.
    fn clusters(n_per: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<ClassLabel>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for c in 0..2 {
            for _ in 0..n_per {
                let f1 = c as f64 * 20.0 + rng.random_range(-0.5..0.5);
                let f2 = rng.random_range(0.0..1.0);
                rows.push(vec![f1, f2]);
                labels.push(if c == 0 { ClassLabel::Low } else { ClassLabel::High });
            }
        }
        (rows, labels)
    }

    #[test]
    fn separated_clusters() {
        let (rows, labels) = clusters(30, 1);
        let w = relief_weights(&names(2), &rows, &labels, rows.len(), 7).unwrap();
        assert!(w.weights[0] > w.weights[1]);
        assert!(w.weights[0] > 0.5, "{:?}", w.weights);
        assert!(w.weights.iter().all(|x| (-1.0..=1.0).contains(x)));
    }

    #[test]
    fn constant_feature_has_zero_weight() {
        let (mut rows, labels) = clusters(10, 2);
        rows.iter_mut().for_each(|r| r.push(4.2));
        let w = relief_weights(&names(3), &rows, &labels, rows.len(), 1).unwrap();
        assert_eq!(w.weights[2], 0.0);
    }

    #[test]
    fn deterministic_for_seed() {
        let (rows, labels) = clusters(15, 3);
        let a = relief_weights(&names(2), &rows, &labels, 11, 42).unwrap();
        let b = relief_weights(&names(2), &rows, &labels, 11, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_cases() {
        let rows = vec![vec![1.0], vec![2.0]];
        assert_eq!(
            relief_weights(&names(1), &rows, &[ClassLabel::Low, ClassLabel::Low], 2, 0).unwrap_err(),
            Error::DegenerateLabels
        );
        assert!(matches!(
            relief_weights(&names(1), &rows[..1], &[ClassLabel::Low], 1, 0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn sample_order_covers_each_once_when_m_is_n() {
        let mut o = sample_order(17, 17, 5);
        o.sort_unstable();
        assert_eq!(o, (0..17).collect::<Vec<_>>());
        assert_eq!(sample_order(5, 12, 5).len(), 12);
    }

    #[test]
    fn top_k() {
        let w = FeatureWeights {
            names: names(5),
            weights: vec![0.5, 0.1, 0.4, 0.05, 0.3],
        };
        assert_eq!(select_top_k(&w, 3).unwrap(), vec!["f1", "f3", "f5"]);
        assert_eq!(select_top_k(&w, 5).unwrap().len(), 5);
        assert_eq!(select_top_k(&w, 0).unwrap_err(), Error::BadK { k: 0, n: 5 });
        assert!(select_top_k(&w, 6).is_err());
        let flat = FeatureWeights {
            names: names(4),
            weights: vec![0.2; 4],
        };
        assert_eq!(select_top_k(&flat, 2).unwrap(), vec!["f1", "f2"]);
    }

    proptest! {
        #[test]
        fn duplicated_feature_gets_equal_weight(seed in 0u64..500, n_per in 3usize..12) {
            let (rows, labels) = clusters(n_per, seed);
            let dup: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], r[1], r[1]]).collect();
            let w = relief_weights(&names(3), &dup, &labels, dup.len(), seed).unwrap();
            prop_assert!((w.weights[1] - w.weights[2]).abs() < 1e-12);
        }

        #[test]
        fn top_k_idempotent(ws in proptest::collection::vec(-1.0f64..1.0, 1..8), k in 1usize..8) {
            let w = FeatureWeights { names: names(ws.len()), weights: ws.clone() };
            let k = k.min(ws.len());
            let first = select_top_k(&w, k).unwrap();
            let again = select_top_k(&w.restrict(&first).unwrap(), k).unwrap();
            let mut a = first.clone();
            let mut b = again;
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn ranked_names() {
        let w = FeatureWeights {
            names: vec!["x".to_string(), "y".to_string()],
            weights: vec![0.1, 0.9],
        };
        assert_eq!(w.ranked()[0], ("y", 0.9));
    }
}
