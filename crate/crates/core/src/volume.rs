//! Sweeping a trained model over a seismic trace grid.
//!
//! Every trace is spline-resampled onto the shared 0.15 ms grid before
//! classification, the same way well data is prepared for training. Grid
//! cells outside a trace's recorded window are `None` (MISSING).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::eval::ClassLabel;
use crate::geodata::{SeismicTrace, TraceCollection};
use crate::signalprep::{grid_span, grid_time, GRID_DT};
use crate::spline::NaturalCubicSpline;
use crate::svdd::SvddModel;

pub type Cell = Option<ClassLabel>;

/// Axes of a classified volume.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeGrid {
    pub inlines: Vec<i32>,
    pub crosslines: Vec<i32>,
    /// Grid index of the first time sample (time = index * `GRID_DT`).
    pub first_index: i64,
    pub n_times: usize,
}

impl VolumeGrid {
    pub fn for_traces(traces: &TraceCollection) -> Self {
        let inlines: BTreeSet<i32> = traces.iter().map(|t| t.inline).collect();
        let crosslines: BTreeSet<i32> = traces.iter().map(|t| t.crossline).collect();
        let start = traces.iter().map(SeismicTrace::t0).fold(f64::INFINITY, f64::min);
        let end = traces
            .iter()
            .map(SeismicTrace::t_end)
            .fold(f64::NEG_INFINITY, f64::max);
        let (first_index, n_times) = match grid_span(start, end) {
            Some((a, b)) if start.is_finite() && end.is_finite() => (a, (b - a + 1) as usize),
            _ => (0, 0),
        };
        Self {
            inlines: inlines.into_iter().collect(),
            crosslines: crosslines.into_iter().collect(),
            first_index,
            n_times,
        }
    }

    pub fn t0(&self) -> f64 {
        grid_time(self.first_index)
    }

    pub fn time(&self, t_idx: usize) -> f64 {
        grid_time(self.first_index + t_idx as i64)
    }
}

/// Labels for one trace on the volume's time axis.
pub fn classify_trace(
    model: &SvddModel,
    trace: &SeismicTrace,
    feature_names: &[alloc::string::String],
    grid: &VolumeGrid,
) -> Result<Vec<Cell>> {
    let mut column = vec![None; grid.n_times];
    if feature_names.len() != model.dim() {
        return Err(Error::DimError {
            expected: model.dim(),
            got: feature_names.len(),
        });
    }
    let n = trace.n_samples();
    if n < 4 {
        return Ok(column);
    }
    let knots: Vec<f64> = (0..n).map(|i| trace.t0() + i as f64 * trace.dt()).collect();
    let splines = feature_names
        .iter()
        .map(|name| {
            let values = trace.attribute(name).ok_or_else(|| {
                Error::IncompleteTrace(format!(
                    "trace ({},{}) lacks attribute {name}",
                    trace.inline, trace.crossline
                ))
            })?;
            NaturalCubicSpline::new(&knots, values)
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some((a, b)) = grid_span(trace.t0(), trace.t_end()) {
        let mut x = vec![0.0; feature_names.len()];
        for k in a..=b {
            let t_idx = (k - grid.first_index) as usize;
            let t = grid_time(k);
            for (xi, s) in x.iter_mut().zip(&splines) {
                *xi = s.eval(t);
            }
            column[t_idx] = Some(model.classify(&x)?);
        }
    }
    Ok(column)
}

/// A dense `(inline, crossline, time)` label cube.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedVolume {
    grid: VolumeGrid,
    labels: Vec<Cell>,
}

impl ClassifiedVolume {
    /// Volume with every cell MISSING.
    pub fn empty(grid: VolumeGrid) -> Self {
        let len = grid.inlines.len() * grid.crosslines.len() * grid.n_times;
        Self {
            grid,
            labels: vec![None; len],
        }
    }

    pub fn grid(&self) -> &VolumeGrid {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.grid.t0()
    }

    pub fn dt(&self) -> f64 {
        GRID_DT
    }

    fn offset(&self, il_idx: usize, xl_idx: usize) -> usize {
        (il_idx * self.grid.crosslines.len() + xl_idx) * self.grid.n_times
    }

    fn indices(&self, inline: i32, crossline: i32) -> Option<(usize, usize)> {
        let i = self.grid.inlines.binary_search(&inline).ok()?;
        let x = self.grid.crosslines.binary_search(&crossline).ok()?;
        Some((i, x))
    }

    pub fn set_column(&mut self, inline: i32, crossline: i32, column: &[Cell]) -> Result<()> {
        let (i, x) = self.indices(inline, crossline).ok_or_else(|| {
            Error::InvalidParameter(format!("trace ({inline},{crossline}) outside volume grid"))
        })?;
        if column.len() != self.grid.n_times {
            return Err(Error::DimError {
                expected: self.grid.n_times,
                got: column.len(),
            });
        }
        let off = self.offset(i, x);
        self.labels[off..off + column.len()].copy_from_slice(column);
        Ok(())
    }

    pub fn get(&self, inline: i32, crossline: i32, t_idx: usize) -> Option<Cell> {
        let (i, x) = self.indices(inline, crossline)?;
        (t_idx < self.grid.n_times).then(|| self.labels[self.offset(i, x) + t_idx])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.labels
    }

    pub fn count(&self, cell: Cell) -> usize {
        self.labels.iter().filter(|&&c| c == cell).count()
    }

    /// Rebuilds a volume from the full set of its inline sections.
    pub fn stack(sections: &[Section]) -> Result<Self> {
        let first = sections
            .first()
            .ok_or_else(|| Error::InvalidParameter("no sections to stack".into()))?;
        let grid = VolumeGrid {
            inlines: sections.iter().map(|s| s.inline).collect(),
            crosslines: first.crosslines.clone(),
            first_index: first.first_index,
            n_times: first.n_times,
        };
        if grid.inlines.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("sections must be in increasing inline order".into()));
        }
        let mut labels = Vec::with_capacity(sections.len() * first.labels.len());
        for s in sections {
            if s.crosslines != grid.crosslines
                || s.first_index != grid.first_index
                || s.n_times != grid.n_times
            {
                return Err(Error::InvalidParameter(format!(
                    "section {} has different axes",
                    s.inline
                )));
            }
            labels.extend_from_slice(&s.labels);
        }
        Ok(Self { grid, labels })
    }
}

/// One inline of a volume: `labels[xl_idx * n_times + t_idx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub inline: i32,
    pub crosslines: Vec<i32>,
    pub first_index: i64,
    pub n_times: usize,
    pub labels: Vec<Cell>,
}

impl Section {
    pub fn get(&self, xl_idx: usize, t_idx: usize) -> Cell {
        self.labels[xl_idx * self.n_times + t_idx]
    }

    pub fn time(&self, t_idx: usize) -> f64 {
        grid_time(self.first_index + t_idx as i64)
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub fn extract_section(v: &ClassifiedVolume, inline: i32) -> Result<Section> {
    let i = v
        .grid
        .inlines
        .binary_search(&inline)
        .map_err(|_| Error::NoSuchInline(inline))?;
    let len = v.grid.crosslines.len() * v.grid.n_times;
    let off = v.offset(i, 0);
    Ok(Section {
        inline,
        crosslines: v.grid.crosslines.clone(),
        first_index: v.grid.first_index,
        n_times: v.grid.n_times,
        labels: v.labels[off..off + len].to_vec(),
    })
}

fn check_features(traces: &TraceCollection, feature_names: &[alloc::string::String]) -> Result<()> {
    if traces.is_empty() {
        return Ok(());
    }
    for name in feature_names {
        if !traces.attribute_names().contains(name) {
            return Err(Error::IncompleteTrace(format!("volume lacks attribute {name}")));
        }
    }
    Ok(())
}

/// Single-threaded sweep over every trace.
pub fn classify_volume(
    model: &SvddModel,
    traces: &TraceCollection,
    feature_names: &[alloc::string::String],
) -> Result<ClassifiedVolume> {
    check_features(traces, feature_names)?;
    let grid = VolumeGrid::for_traces(traces);
    let mut volume = ClassifiedVolume::empty(grid);
    for trace in traces.iter() {
        let column = classify_trace(model, trace, feature_names, volume.grid())?;
        volume.set_column(trace.inline, trace.crossline, &column)?;
    }
    Ok(volume)
}

/// Validation shared with parallel sweeps.
pub fn prepare_sweep(
    traces: &TraceCollection,
    feature_names: &[alloc::string::String],
) -> Result<VolumeGrid> {
    check_features(traces, feature_names)?;
    Ok(VolumeGrid::for_traces(traces))
}
