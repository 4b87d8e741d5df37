//! Interpolation primitives: piecewise-linear lookup and the natural cubic
//! spline used to bring 2 ms seismic onto the well-log time grid.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Index `i` of the segment `[xs[i], xs[i+1]]` containing `t`, clamped to
/// the first/last segment. `xs` must be strictly increasing with len >= 2.
fn segment(xs: &[f64], t: f64) -> usize {
    let idx = xs.partition_point(|&x| x <= t);
    idx.saturating_sub(1).min(xs.len() - 2)
}

/// Piecewise-linear interpolation of `(xs, ys)` at `t`; values outside the
/// knot range are clamped to the end values.
pub fn linear_interp(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    if t <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if t >= xs[last] {
        return ys[last];
    }
    let i = segment(xs, t);
    let w = (t - xs[i]) / (xs[i + 1] - xs[i]);
    if w == 0.0 {
        ys[i]
    } else {
        ys[i] + w * (ys[i + 1] - ys[i])
    }
}

/// Natural cubic spline (zero second derivative at both ends).
#[derive(Debug, Clone)]
pub struct NaturalCubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
}

impl NaturalCubicSpline {
    /// Fits the spline through `(xs, ys)`. Requires at least 4 knots and
    /// strictly increasing, finite abscissae.
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if ys.len() != n {
            return Err(Error::DimError {
                expected: n,
                got: ys.len(),
            });
        }
        if n < 4 {
            return Err(Error::TooShortForSpline(n));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::NumError(
                "spline knots must be strictly increasing and finite".into(),
            ));
        }

        // Tridiagonal system for the interior second derivatives (Thomas algorithm).
        let m = n - 2;
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for k in 0..m {
            let i = k + 1;
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            upper[k] = h[i];
            rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        for k in 1..m {
            let lower = h[k];
            let f = lower / diag[k - 1];
            diag[k] -= f * upper[k - 1];
            rhs[k] -= f * rhs[k - 1];
        }
        let mut second = vec![0.0; n];
        for k in (0..m).rev() {
            let next = if k + 1 < m { second[k + 2] } else { 0.0 };
            second[k + 1] = (rhs[k] - upper[k] * next) / diag[k];
        }

        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            second,
        })
    }

    pub fn start(&self) -> f64 {
        self.xs[0]
    }

    pub fn end(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Evaluates the spline at `t`, clamping `t` to the knot range.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(self.start(), self.end());
        let i = segment(&self.xs, t);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - t) / h;
        let b = (t - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_interp_basics() {
        let xs = [0.0, 1.0, 3.0];
        let ys = [0.0, 2.0, 6.0];
        assert_eq!(linear_interp(&xs, &ys, 0.5), 1.0);
        assert_eq!(linear_interp(&xs, &ys, 2.0), 4.0);
        assert_eq!(linear_interp(&xs, &ys, 1.0), 2.0);
        assert_eq!(linear_interp(&xs, &ys, -1.0), 0.0);
        assert_eq!(linear_interp(&xs, &ys, 9.0), 6.0);
    }

    #[test]
    fn spline_hits_knots_exactly() {
        let xs = [0.0, 1.0, 2.5, 3.0, 5.0];
        let ys = [1.0, -2.0, 0.5, 4.0, 3.0];
        let s = NaturalCubicSpline::new(&xs, &ys).unwrap();
        for (x, y) in xs.iter().zip(ys) {
            assert_eq!(s.eval(*x), y);
        }
    }

    #[test]
    fn spline_reproduces_linear_data() {
        // A straight line has zero second derivative everywhere, so the
        // natural spline must reproduce it.
        let xs = [0.0, 2.0, 4.0, 6.0, 8.0];
        let ys: alloc::vec::Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let s = NaturalCubicSpline::new(&xs, &ys).unwrap();
        for k in 0..=80 {
            let t = k as f64 * 0.1;
            assert!((s.eval(t) - (3.0 * t - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn spline_second_derivative_continuity() {
        // Finite-difference check that the fitted curvature matches across
        // an interior knot.
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [0.0, 1.0, 0.0, 2.0, -1.0, 0.5];
        let s = NaturalCubicSpline::new(&xs, &ys).unwrap();
        let e = 1e-4;
        let d2 = |t: f64| (s.eval(t + e) - 2.0 * s.eval(t) + s.eval(t - e)) / (e * e);
        let left = d2(2.0 - 3.0 * e);
        let right = d2(2.0 + 3.0 * e);
        assert!((left - right).abs() < 1e-2, "{left} vs {right}");
        // Natural end condition.
        assert!(d2(0.0 + 2.0 * e).abs() < 1e-2);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            NaturalCubicSpline::new(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]).unwrap_err(),
            Error::TooShortForSpline(3)
        );
    }
}
