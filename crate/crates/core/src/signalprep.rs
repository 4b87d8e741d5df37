//! Bringing well logs and seismic attributes onto one time grid.
//!
//! Well logs are converted from depth to two-way time through the well's
//! time-depth model, seismic attributes (2 ms) are spline-resampled to the
//! log interval, and both are sampled on a shared grid of integer
//! multiples of [`GRID_DT`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geodata::{SeismicTrace, TimeDepthModel, WellLog};
use crate::spline::{linear_interp, NaturalCubicSpline};

/// Well-log sampling interval in milliseconds.
pub const GRID_DT: f64 = 0.15;

/// Slack used when snapping times onto a grid.
const SNAP_EPS: f64 = 1e-9;

/// A uniformly sampled signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub name: String,
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "time series needs finite t0 and dt > 0, got t0={t0} dt={dt}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "time series needs at least 2 values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumError("time series has non-finite values".into()));
        }
        Ok(Self {
            name: name.into(),
            t0,
            dt,
            values,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.time(i)).collect()
    }

    /// Linear interpolation at `t`, clamped to the end values.
    pub fn linear_at(&self, t: f64) -> f64 {
        let pos = (t - self.t0) / self.dt;
        if pos <= 0.0 {
            return self.values[0];
        }
        let last = self.values.len() - 1;
        if pos >= last as f64 {
            return self.values[last];
        }
        let i = pos as usize;
        let w = pos - i as f64;
        if w == 0.0 {
            self.values[i]
        } else {
            self.values[i] + w * (self.values[i + 1] - self.values[i])
        }
    }
}

/// Index range `[first, last]` of multiples of `GRID_DT` inside `[start, end]`.
pub fn grid_span(start: f64, end: f64) -> Option<(i64, i64)> {
    let first = libm::ceil(start / GRID_DT - SNAP_EPS) as i64;
    let last = libm::floor(end / GRID_DT + SNAP_EPS) as i64;
    (first <= last).then_some((first, last))
}

pub fn grid_time(k: i64) -> f64 {
    k as f64 * GRID_DT
}

/// Converts a depth-indexed log to a uniformly sampled time series.
///
/// Each log sample is mapped to time by piecewise-linear interpolation of
/// the time-depth knots; the converted samples are then linearly
/// interpolated onto `t_first + i * GRID_DT`.
pub fn depth_to_time(log: &WellLog, td: &TimeDepthModel) -> Result<TimeSeries> {
    let (lo, hi) = td.depth_range();
    let depths = log.depths();
    let (first, last) = (depths[0], depths[depths.len() - 1]);
    if first < lo || last > hi {
        return Err(Error::OutOfRange(format!(
            "log depths [{first}, {last}] exceed time-depth range [{lo}, {hi}]"
        )));
    }
    let times = depths
        .iter()
        .map(|&d| td.time_at(d))
        .collect::<Result<Vec<f64>>>()?;
    let t_first = times[0];
    let t_last = times[times.len() - 1];
    let n = libm::floor((t_last - t_first) / GRID_DT + SNAP_EPS) as usize + 1;
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "converted log spans {} ms, less than one {GRID_DT} ms step",
            t_last - t_first
        )));
    }
    let values = (0..n)
        .map(|i| linear_interp(&times, log.values(), t_first + i as f64 * GRID_DT))
        .collect();
    TimeSeries::new(log.property_name(), t_first, GRID_DT, values)
}

/// Natural-cubic-spline resampling onto `t0 + k * dt_target` within the
/// original window. Knot values are reproduced exactly.
pub fn spline_resample(series: &TimeSeries, dt_target: f64) -> Result<TimeSeries> {
    if series.len() < 4 {
        return Err(Error::TooShortForSpline(series.len()));
    }
    if !(dt_target > 0.0) || !dt_target.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dt_target must be > 0, got {dt_target}"
        )));
    }
    let spline = NaturalCubicSpline::new(&series.times(), series.values())?;
    let n = libm::floor((series.t_end() - series.t0) / dt_target + SNAP_EPS) as usize + 1;
    let values = (0..n)
        .map(|k| spline.eval(series.t0 + k as f64 * dt_target))
        .collect();
    TimeSeries::new(series.name.clone(), series.t0, dt_target, values)
}

/// Per-well rows of (time, attribute vector, water saturation) on the
/// shared 0.15 ms grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratedDataset {
    pub well_id: String,
    pub feature_names: Vec<String>,
    pub times: Vec<f64>,
    pub features: Vec<Vec<f64>>,
    pub sw: Vec<f64>,
    /// Rows whose interpolated saturation had to be clamped into [0, 1].
    pub clamped_sw: usize,
}

impl IntegratedDataset {
    /// Validating constructor, used when reading a dataset back from disk.
    pub fn new(
        well_id: impl Into<String>,
        feature_names: Vec<String>,
        times: Vec<f64>,
        features: Vec<Vec<f64>>,
        sw: Vec<f64>,
    ) -> Result<Self> {
        let n = times.len();
        if features.len() != n || sw.len() != n {
            return Err(Error::DimError {
                expected: n,
                got: features.len().min(sw.len()),
            });
        }
        for w in times.windows(2) {
            if libm::fabs(w[1] - w[0] - GRID_DT) > SNAP_EPS {
                return Err(Error::InvalidParameter(format!(
                    "row times {} and {} are not {GRID_DT} ms apart",
                    w[0], w[1]
                )));
            }
        }
        for row in &features {
            if row.len() != feature_names.len() {
                return Err(Error::DimError {
                    expected: feature_names.len(),
                    got: row.len(),
                });
            }
        }
        if let Some(bad) = sw.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::RangeError(format!("sw = {bad} outside [0, 1]")));
        }
        Ok(Self {
            well_id: well_id.into(),
            feature_names,
            times,
            features,
            sw,
            clamped_sw: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Copy restricted to `names`, in the given order.
    pub fn select(&self, names: &[String]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown feature {n}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok(Self {
            well_id: self.well_id.clone(),
            feature_names: names.to_vec(),
            times: self.times.clone(),
            features: self
                .features
                .iter()
                .map(|row| idx.iter().map(|&i| row[i]).collect())
                .collect(),
            sw: self.sw.clone(),
            clamped_sw: self.clamped_sw,
        })
    }
}

/// Fuses the seismic trace at a well with the well's time-domain
/// saturation series over their common window.
pub fn integrate_at_well(
    well_id: &str,
    trace: &SeismicTrace,
    sw_series: &TimeSeries,
    feature_names: &[String],
) -> Result<IntegratedDataset> {
    let mut splines = Vec::with_capacity(feature_names.len());
    let knot_times: Vec<f64> = (0..trace.n_samples())
        .map(|i| trace.t0() + i as f64 * trace.dt())
        .collect();
    for name in feature_names {
        let values = trace.attribute(name).ok_or_else(|| {
            Error::IncompleteTrace(format!(
                "trace ({},{}) lacks attribute {name}",
                trace.inline, trace.crossline
            ))
        })?;
        splines.push(NaturalCubicSpline::new(&knot_times, values)?);
    }

    let start = trace.t0().max(sw_series.t0());
    let end = trace.t_end().min(sw_series.t_end());
    let (first, last) = grid_span(start, end).ok_or_else(|| {
        Error::NoOverlap(format!(
            "well {well_id}: seismic [{}, {}] ms vs log [{}, {}] ms",
            trace.t0(),
            trace.t_end(),
            sw_series.t0(),
            sw_series.t_end()
        ))
    })?;

    let n = (last - first + 1) as usize;
    let mut times = Vec::with_capacity(n);
    let mut features = Vec::with_capacity(n);
    let mut sw = Vec::with_capacity(n);
    let mut clamped = 0;
    for k in first..=last {
        let t = grid_time(k);
        times.push(t);
        features.push(splines.iter().map(|s| s.eval(t)).collect());
        let raw = sw_series.linear_at(t);
        let v = raw.clamp(0.0, 1.0);
        if v != raw {
            clamped += 1;
        }
        sw.push(v);
    }

    Ok(IntegratedDataset {
        well_id: well_id.into(),
        feature_names: feature_names.to_vec(),
        times,
        features,
        sw,
        clamped_sw: clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn two_point_depth_map() {
        let log = WellLog::new("A", "SW", &[(1000.0, 0.2), (1100.0, 0.8)]).unwrap();
        let td = TimeDepthModel::new("A", &[(1000.0, 800.0), (1100.0, 815.0)]).unwrap();
        let ts = depth_to_time(&log, &td).unwrap();
        assert_eq!(ts.t0(), 800.0);
        assert_eq!(ts.len(), 101);
        assert!((ts.t_end() - 815.0).abs() < 1e-9);
        assert_eq!(ts.values()[0], 0.2);
        assert!((ts.values()[100] - 0.8).abs() < 1e-12);
        assert!((ts.values()[50] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_log_stays_constant() {
        let samples: Vec<(f64, f64)> = (0..20).map(|i| (1000.0 + i as f64, 0.4)).collect();
        let log = WellLog::new("A", "SW", &samples).unwrap();
        let td = TimeDepthModel::new("A", &[(990.0, 790.0), (1050.0, 830.0)]).unwrap();
        let ts = depth_to_time(&log, &td).unwrap();
        assert!(ts.values().iter().all(|&v| v == 0.4));
    }

    #[test]
    fn depth_outside_model() {
        let log = WellLog::new("A", "SW", &[(900.0, 0.2), (1050.0, 0.8)]).unwrap();
        let td = TimeDepthModel::new("A", &[(1000.0, 800.0), (1100.0, 815.0)]).unwrap();
        assert!(matches!(depth_to_time(&log, &td), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn resample_constant_and_knots() {
        let s = TimeSeries::new("x", 10.0, 2.0, vec![3.5; 12]).unwrap();
        let r = spline_resample(&s, 0.15).unwrap();
        assert!(r.values().iter().all(|v| (v - 3.5).abs() < 1e-12));

        let vals: Vec<f64> = (0..12).map(|i| libm::sin(i as f64 * 0.7) * 4.0).collect();
        let s = TimeSeries::new("x", 10.0, 2.0, vals.clone()).unwrap();
        let r = spline_resample(&s, 0.5).unwrap();
        assert_eq!(r.len(), 11 * 4 + 1);
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(r.values()[i * 4], *v);
        }
        let same = spline_resample(&s, 2.0).unwrap();
        assert_eq!(same.values(), s.values());
        assert!(matches!(
            spline_resample(&TimeSeries::new("x", 0.0, 2.0, vec![1.0, 2.0, 3.0]).unwrap(), 0.15),
            Err(Error::TooShortForSpline(3))
        ));
    }

    fn trace_on(t0: f64, n: usize) -> SeismicTrace {
        let mut attrs = BTreeMap::new();
        attrs.insert(
            "imp".to_string(),
            (0..n).map(|i| 100.0 + i as f64).collect::<Vec<_>>(),
        );
        SeismicTrace::new(5, 7, t0, 2.0, attrs).unwrap()
    }

    #[test]
    fn integration_windows() {
        let names = vec!["imp".to_string()];
        let trace = trace_on(800.0, 51);
        let sw = TimeSeries::new("SW", 850.0, GRID_DT, vec![0.5; 667]).unwrap();
        let ds = integrate_at_well("A", &trace, &sw, &names).unwrap();
        assert!(ds.times[0] >= 850.0 && ds.times[0] < 850.0 + GRID_DT);
        assert!(*ds.times.last().unwrap() <= 900.0 + 1e-9);
        assert!(ds.times.windows(2).all(|w| (w[1] - w[0] - GRID_DT).abs() < 1e-9));

        let sw = TimeSeries::new("SW", 800.0, 2.0, vec![0.5; 51]).unwrap();
        let ds = integrate_at_well("A", &trace, &sw, &names).unwrap();
        assert_eq!(ds.len(), (100.0f64 / GRID_DT).floor() as usize + 1);

        let sw = TimeSeries::new("SW", 1000.0, 2.0, vec![0.5; 10]).unwrap();
        assert!(matches!(
            integrate_at_well("A", &trace, &sw, &names),
            Err(Error::NoOverlap(_))
        ));
    }

    #[test]
    fn saturation_is_clamped() {
        let names = vec!["imp".to_string()];
        let trace = trace_on(0.0, 10);
        let sw = TimeSeries::new("SW", 0.0, 9.0, vec![1.2, -0.1, 0.5]).unwrap();
        let ds = integrate_at_well("A", &trace, &sw, &names).unwrap();
        assert!(ds.sw.iter().all(|s| (0.0..=1.0).contains(s)));
        assert!(ds.clamped_sw > 0);
    }

    proptest! {
        #[test]
        fn row_count_matches_window_arithmetic(
            a0 in 0.0f64..500.0, alen in 10.0f64..300.0,
            b0 in 0.0f64..500.0, blen in 1.0f64..300.0,
        ) {
            let n = (alen / 2.0) as usize + 1;
            let trace = trace_on(a0, n.max(4));
            let sw = TimeSeries::new("SW", b0, 0.5, vec![0.3; (blen / 0.5) as usize + 2]).unwrap();
            let start = trace.t0().max(sw.t0());
            let end = trace.t_end().min(sw.t_end());
            let names = vec!["imp".to_string()];
            match integrate_at_well("A", &trace, &sw, &names) {
                Ok(ds) => {
                    let expected = (end / GRID_DT + 1e-9).floor() - (start / GRID_DT - 1e-9).ceil() + 1.0;
                    prop_assert_eq!(ds.len() as f64, expected);
                    prop_assert!(ds.times[0] >= start - 1e-9);
                    prop_assert!(*ds.times.last().unwrap() <= end + 1e-9);
                }
                Err(Error::NoOverlap(_)) => prop_assert!(end - start < GRID_DT + 1e-9),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn depth_to_time_is_monotone(
            d in proptest::collection::vec(1.0f64..30.0, 3..12),
            v in proptest::collection::vec(1500.0f64..5000.0, 3..12),
        ) {
            // Build a monotone time-depth model from interval velocities.
            let mut knots = vec![(1000.0, 800.0)];
            for (dz, vel) in d.iter().zip(&v) {
                let (z, t) = *knots.last().unwrap();
                knots.push((z + dz, t + 2000.0 * dz / vel));
            }
            let td = TimeDepthModel::new("A", &knots).unwrap();
            let (lo, hi) = td.depth_range();
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=50 {
                let z = lo + (hi - lo) * k as f64 / 50.0;
                let t = td.time_at(z).unwrap();
                prop_assert!(t >= prev);
                prev = t;
            }
        }
    }
}
