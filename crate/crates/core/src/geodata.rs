//! Validated containers for well logs, time-depth relationships and
//! seismic attribute traces. Depth is in meters and time in milliseconds
//! everywhere; nothing here infers units.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A depth-indexed measurement along a borehole, e.g. water saturation.
#[derive(Debug, Clone, PartialEq)]
pub struct WellLog {
    well_id: String,
    property_name: String,
    depths: Vec<f64>,
    values: Vec<f64>,
}

impl WellLog {
    pub fn new(
        well_id: impl Into<String>,
        property_name: impl Into<String>,
        samples: &[(f64, f64)],
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "well log needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (i, &(d, v)) in samples.iter().enumerate() {
            if !d.is_finite() || !v.is_finite() {
                return Err(Error::MalformedLog(format!("non-finite sample at row {i}")));
            }
            if i > 0 && d <= samples[i - 1].0 {
                return Err(Error::MalformedLog(format!(
                    "depth {d} at row {i} does not increase (previous {})",
                    samples[i - 1].0
                )));
            }
        }
        Ok(Self {
            well_id: well_id.into(),
            property_name: property_name.into(),
            depths: samples.iter().map(|s| s.0).collect(),
            values: samples.iter().map(|s| s.1).collect(),
        })
    }

    pub fn well_id(&self) -> &str {
        &self.well_id
    }

    pub fn property_name(&self) -> &str {
        &self.property_name
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }
}

/// Monotone depth to two-way-time mapping known at a well location.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDepthModel {
    well_id: String,
    depths: Vec<f64>,
    times: Vec<f64>,
}

impl TimeDepthModel {
    /// `knots` are `(depth_m, time_ms)` pairs.
    pub fn new(well_id: impl Into<String>, knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "time-depth model needs at least 2 knots, got {}",
                knots.len()
            )));
        }
        for (i, &(d, t)) in knots.iter().enumerate() {
            if !d.is_finite() || !t.is_finite() {
                return Err(Error::MalformedModel(format!("non-finite knot at row {i}")));
            }
            if i > 0 {
                let (pd, pt) = knots[i - 1];
                if d <= pd {
                    return Err(Error::MalformedModel(format!(
                        "depth {d} at row {i} does not increase"
                    )));
                }
                if t <= pt {
                    return Err(Error::MalformedModel(format!(
                        "time {t} at row {i} does not increase"
                    )));
                }
            }
        }
        Ok(Self {
            well_id: well_id.into(),
            depths: knots.iter().map(|k| k.0).collect(),
            times: knots.iter().map(|k| k.1).collect(),
        })
    }

    pub fn well_id(&self) -> &str {
        &self.well_id
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn depth_range(&self) -> (f64, f64) {
        (self.depths[0], self.depths[self.depths.len() - 1])
    }

    /// Piecewise-linear time at `depth`.
    pub fn time_at(&self, depth: f64) -> Result<f64> {
        let (lo, hi) = self.depth_range();
        if !(lo..=hi).contains(&depth) {
            return Err(Error::OutOfRange(format!(
                "depth {depth} outside time-depth range [{lo}, {hi}]"
            )));
        }
        Ok(crate::spline::linear_interp(&self.depths, &self.times, depth))
    }

    /// Inverse mapping, piecewise-linear in the same knots.
    pub fn depth_at(&self, time: f64) -> Result<f64> {
        let lo = self.times[0];
        let hi = self.times[self.times.len() - 1];
        if !(lo..=hi).contains(&time) {
            return Err(Error::OutOfRange(format!(
                "time {time} outside time-depth range [{lo}, {hi}]"
            )));
        }
        Ok(crate::spline::linear_interp(&self.times, &self.depths, time))
    }
}

/// One seismic trace carrying several attributes on a common time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SeismicTrace {
    pub inline: i32,
    pub crossline: i32,
    t0: f64,
    dt: f64,
    attributes: BTreeMap<String, Vec<f64>>,
}

impl SeismicTrace {
    pub fn new(
        inline: i32,
        crossline: i32,
        t0: f64,
        dt: f64,
        attributes: BTreeMap<String, Vec<f64>>,
    ) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "trace ({inline},{crossline}): need finite t0 and dt > 0, got t0={t0} dt={dt}"
            )));
        }
        let mut len = None;
        for (name, values) in &attributes {
            if let Some(l) = len {
                if l != values.len() {
                    return Err(Error::IncompleteTrace(format!(
                        "trace ({inline},{crossline}) attribute {name} has {} samples, expected {l}",
                        values.len()
                    )));
                }
            }
            len = Some(values.len());
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumError(format!(
                    "trace ({inline},{crossline}) attribute {name} has non-finite values"
                )));
            }
        }
        Ok(Self {
            inline,
            crossline,
            t0,
            dt,
            attributes,
        })
    }

    pub fn key(&self) -> (i32, i32) {
        (self.inline, self.crossline)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of time samples (0 for an attribute-less trace).
    pub fn n_samples(&self) -> usize {
        self.attributes.values().next().map_or(0, Vec::len)
    }

    /// Time of the last sample.
    pub fn t_end(&self) -> f64 {
        self.t0 + (self.n_samples().saturating_sub(1)) as f64 * self.dt
    }

    pub fn attribute(&self, name: &str) -> Option<&[f64]> {
        self.attributes.get(name).map(Vec::as_slice)
    }

    pub fn attributes(&self) -> &BTreeMap<String, Vec<f64>> {
        &self.attributes
    }
}

/// A set of traces keyed by `(inline, crossline)`, each carrying every
/// attribute in `attribute_names`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceCollection {
    attribute_names: Vec<String>,
    traces: BTreeMap<(i32, i32), SeismicTrace>,
}

impl TraceCollection {
    pub fn new(attribute_names: Vec<String>, traces: Vec<SeismicTrace>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for trace in traces {
            for name in &attribute_names {
                if trace.attribute(name).is_none() {
                    return Err(Error::IncompleteTrace(format!(
                        "trace ({},{}) lacks attribute {name}",
                        trace.inline, trace.crossline
                    )));
                }
            }
            let key = trace.key();
            if map.insert(key, trace).is_some() {
                return Err(Error::DuplicateTrace(format!("trace ({},{})", key.0, key.1)));
            }
        }
        Ok(Self {
            attribute_names,
            traces: map,
        })
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn get(&self, inline: i32, crossline: i32) -> Option<&SeismicTrace> {
        self.traces.get(&(inline, crossline))
    }

    /// Traces in `(inline, crossline)` order.
    pub fn iter(&self) -> impl Iterator<Item = &SeismicTrace> {
        self.traces.values()
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn well_log_rejects_bad_input() {
        assert!(WellLog::new("A", "SW", &[(1000.0, 0.9), (1001.0, 0.8)]).is_ok());
        assert!(matches!(
            WellLog::new("A", "SW", &[(1001.0, 0.9), (1000.0, 0.8)]),
            Err(Error::MalformedLog(_))
        ));
        assert!(matches!(
            WellLog::new("A", "SW", &[(1000.0, 0.9), (1000.0, 0.8)]),
            Err(Error::MalformedLog(_))
        ));
        assert!(matches!(
            WellLog::new("A", "SW", &[(1000.0, 0.9)]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn time_depth_lookup() {
        let td = TimeDepthModel::new("A", &[(1000.0, 800.0), (1100.0, 850.0)]).unwrap();
        assert_eq!(td.time_at(1050.0).unwrap(), 825.0);
        assert_eq!(td.depth_at(825.0).unwrap(), 1050.0);
        assert!(matches!(td.time_at(900.0), Err(Error::OutOfRange(_))));
        assert!(matches!(
            TimeDepthModel::new("A", &[(1000.0, 850.0), (1100.0, 800.0)]),
            Err(Error::MalformedModel(_))
        ));
    }

    fn trace(il: i32, xl: i32, names: &[&str]) -> SeismicTrace {
        let attrs = names
            .iter()
            .map(|n| (n.to_string(), vec![1.0, 2.0, 3.0]))
            .collect();
        SeismicTrace::new(il, xl, 0.0, 2.0, attrs).unwrap()
    }

    #[test]
    fn collection_validation() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let ok = TraceCollection::new(names.clone(), vec![trace(1, 1, &["a", "b", "c"])]);
        assert_eq!(ok.unwrap().len(), 1);
        let partial = TraceCollection::new(names.clone(), vec![trace(1, 1, &["a", "b"])]);
        assert!(matches!(partial, Err(Error::IncompleteTrace(_))));
        let dup = TraceCollection::new(
            names,
            vec![trace(1, 1, &["a", "b", "c"]), trace(1, 1, &["a", "b", "c"])],
        );
        assert!(matches!(dup, Err(Error::DuplicateTrace(_))));
    }

    #[test]
    fn ragged_trace_rejected() {
        let mut attrs = BTreeMap::new();
        attrs.insert("a".to_string(), vec![1.0, 2.0]);
        attrs.insert("b".to_string(), vec![1.0]);
        assert!(matches!(
            SeismicTrace::new(0, 0, 0.0, 2.0, attrs),
            Err(Error::IncompleteTrace(_))
        ));
    }
}
