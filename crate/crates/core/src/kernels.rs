//! Kernel functions and dense Gram matrices.
//!
//! The Gaussian kernel is `exp(-alpha * |x - y|^2)`. It can be configured
//! either with `alpha` directly or with a width `s`, in which case
//! `alpha = 1 / s^2`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    Gaussian,
    /// Exponential radial basis function, `exp(-|x - y| / s)`.
    Erbf,
    /// Inhomogeneous polynomial, `(x . y + 1)^d`.
    Polynomial,
}

impl KernelFamily {
    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "gaussian",
            KernelFamily::Erbf => "erbf",
            KernelFamily::Polynomial => "polynomial",
        }
    }

    /// Accepts `rbf` as an alias for `gaussian`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "rbf" => Ok(KernelFamily::Gaussian),
            "erbf" => Ok(KernelFamily::Erbf),
            "polynomial" | "poly" => Ok(KernelFamily::Polynomial),
            other => Err(Error::InvalidParameter(format!("unknown kernel family {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    GaussianWidth(f64),
    GaussianAlpha(f64),
    Erbf(f64),
    Polynomial(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig(Kind);

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl KernelConfig {
    pub fn gaussian(width: f64) -> Result<Self> {
        Ok(Self(Kind::GaussianWidth(positive("width", width)?)))
    }

    pub fn gaussian_alpha(alpha: f64) -> Result<Self> {
        Ok(Self(Kind::GaussianAlpha(positive("alpha", alpha)?)))
    }

    pub fn erbf(width: f64) -> Result<Self> {
        Ok(Self(Kind::Erbf(positive("width", width)?)))
    }

    pub fn polynomial(degree: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::InvalidParameter(format!(
                "polynomial degree must be in 1..={MAX_DEGREE}, got {degree}"
            )));
        }
        Ok(Self(Kind::Polynomial(degree)))
    }

    pub fn family(&self) -> KernelFamily {
        match self.0 {
            Kind::GaussianWidth(_) | Kind::GaussianAlpha(_) => KernelFamily::Gaussian,
            Kind::Erbf(_) => KernelFamily::Erbf,
            Kind::Polynomial(_) => KernelFamily::Polynomial,
        }
    }

    pub fn width(&self) -> Option<f64> {
        match self.0 {
            Kind::GaussianWidth(s) | Kind::Erbf(s) => Some(s),
            _ => None,
        }
    }

    /// Explicit Gaussian `alpha`, if the kernel was configured that way.
    pub fn alpha(&self) -> Option<f64> {
        match self.0 {
            Kind::GaussianAlpha(a) => Some(a),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self.0 {
            Kind::Polynomial(d) => Some(d),
            _ => None,
        }
    }

    /// Length scale used for "far away" in tests and diagnostics.
    pub fn length_scale(&self) -> f64 {
        match self.0 {
            Kind::GaussianWidth(s) | Kind::Erbf(s) => s,
            Kind::GaussianAlpha(a) => 1.0 / libm::sqrt(a),
            Kind::Polynomial(_) => 1.0,
        }
    }

    /// Kernel value with dimension and finiteness checks.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimError {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::NumError("non-finite kernel input".into()));
        }
        let k = self.eval_unchecked(x, y);
        if !k.is_finite() {
            return Err(Error::NumError(format!("kernel value {k} is not finite")));
        }
        Ok(k)
    }

    /// Kernel value without validation; `x` and `y` must have equal length.
    #[inline]
    pub fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.0 {
            Kind::GaussianWidth(s) => libm::exp(-squared_distance(x, y) / (s * s)),
            Kind::GaussianAlpha(a) => libm::exp(-a * squared_distance(x, y)),
            Kind::Erbf(s) => libm::exp(-libm::sqrt(squared_distance(x, y)) / s),
            Kind::Polynomial(d) => {
                let base = dot(x, y) + 1.0;
                (0..d).fold(1.0, |acc, _| acc * base)
            }
        }
    }

    /// `K(x, x)`; identically 1 for the radial families.
    #[inline]
    pub fn self_value(&self, x: &[f64]) -> f64 {
        match self.0 {
            Kind::Polynomial(_) => self.eval_unchecked(x, x),
            _ => 1.0,
        }
    }
}

impl fmt::Display for KernelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::GaussianWidth(s) => write!(f, "gaussian(width={s})"),
            Kind::GaussianAlpha(a) => write!(f, "gaussian(alpha={a})"),
            Kind::Erbf(s) => write!(f, "erbf(width={s})"),
            Kind::Polynomial(d) => write!(f, "polynomial(degree={d})"),
        }
    }
}

#[inline]
pub fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Dense symmetric Gram matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    n: usize,
    data: Vec<f64>,
}

impl Gram {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// Builds `G[i][j] = K(x_i, x_j)`, evaluating each unordered pair once.
pub fn gram_matrix(cfg: &KernelConfig, rows: &[Vec<f64>]) -> Result<Gram> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyTraining);
    }
    let p = rows[0].len();
    for r in rows {
        if r.len() != p {
            return Err(Error::DimError {
                expected: p,
                got: r.len(),
            });
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumError("non-finite training value".into()));
        }
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = cfg.eval_unchecked(&rows[i], &rows[j]);
            if !k.is_finite() {
                return Err(Error::NumError(format!("Gram entry ({i},{j}) = {k}")));
            }
            data[i * n + j] = k;
            data[j * n + i] = k;
        }
    }
    Ok(Gram { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gaussian_values() {
        let g = KernelConfig::gaussian(3.0).unwrap();
        assert_eq!(g.eval(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 1.0);
        // |x - y|^2 = 9 with s = 3 gives e^-1.
        let k = g.eval(&[0.0, 0.0], &[3.0, 0.0]).unwrap();
        assert!((k - libm::exp(-1.0)).abs() < 1e-15);
        assert!((k - 0.367879).abs() < 1e-6);
        let ga = KernelConfig::gaussian_alpha(1.0 / 9.0).unwrap();
        assert!((ga.eval(&[0.0, 0.0], &[3.0, 0.0]).unwrap() - k).abs() < 1e-15);
    }

    #[test]
    fn polynomial_and_erbf_values() {
        let p = KernelConfig::polynomial(2).unwrap();
        assert_eq!(p.eval(&[1.0, 0.0], &[1.0, 5.0]).unwrap(), 4.0);
        let e = KernelConfig::erbf(2.0).unwrap();
        assert!((e.eval(&[0.0], &[4.0]).unwrap() - libm::exp(-2.0)).abs() < 1e-15);
        assert!(KernelConfig::polynomial(0).is_err());
        assert!(KernelConfig::polynomial(11).is_err());
        assert!(KernelConfig::gaussian(0.0).is_err());
    }

    #[test]
    fn eval_errors() {
        let g = KernelConfig::gaussian(1.0).unwrap();
        assert!(matches!(g.eval(&[1.0], &[1.0, 2.0]), Err(Error::DimError { .. })));
        assert!(matches!(g.eval(&[f64::NAN], &[1.0]), Err(Error::NumError(_))));
    }

    #[test]
    fn single_point_gram() {
        let g = KernelConfig::gaussian(1.0).unwrap();
        let m = gram_matrix(&g, &[alloc::vec![0.3, -1.0]]).unwrap();
        assert_eq!(m.row(0), &[1.0]);
    }

    fn cfgs() -> impl Strategy<Value = KernelConfig> {
        prop_oneof![
            (0.1f64..10.0).prop_map(|s| KernelConfig::gaussian(s).unwrap()),
            (0.1f64..10.0).prop_map(|s| KernelConfig::erbf(s).unwrap()),
            (1u32..=10).prop_map(|d| KernelConfig::polynomial(d).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn symmetric(cfg in cfgs(), x in proptest::collection::vec(-2.0f64..2.0, 3),
                     y in proptest::collection::vec(-2.0f64..2.0, 3)) {
            prop_assert_eq!(cfg.eval(&x, &y).unwrap(), cfg.eval(&y, &x).unwrap());
        }

        #[test]
        fn radial_range(s in 1.0f64..10.0, x in proptest::collection::vec(-5.0f64..5.0, 2),
                        y in proptest::collection::vec(-5.0f64..5.0, 2)) {
            for cfg in [KernelConfig::gaussian(s).unwrap(), KernelConfig::erbf(s).unwrap()] {
                let k = cfg.eval(&x, &y).unwrap();
                prop_assert!(k > 0.0 && k <= 1.0);
                if x != y && squared_distance(&x, &y) > 1e-6 {
                    prop_assert!(k < 1.0);
                }
            }
        }

        #[test]
        fn gaussian_monotone(s in 0.2f64..5.0, d1 in 0.0f64..5.0, dd in 0.01f64..5.0, ds in 0.01f64..5.0) {
            let g = KernelConfig::gaussian(s).unwrap();
            let near = g.eval(&[0.0], &[d1]).unwrap();
            let far = g.eval(&[0.0], &[d1 + dd]).unwrap();
            prop_assert!(far <= near);
            let wider = KernelConfig::gaussian(s + ds).unwrap();
            prop_assert!(wider.eval(&[0.0], &[d1 + dd]).unwrap() >= far);
        }

        #[test]
        fn gram_is_symmetric(cfg in cfgs(),
                             rows in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 2), 1..7)) {
            let g = gram_matrix(&cfg, &rows).unwrap();
            for i in 0..g.n() {
                for j in 0..g.n() {
                    prop_assert_eq!(g.get(i, j), g.get(j, i));
                }
            }
        }
    }
}
