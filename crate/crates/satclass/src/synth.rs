//! Seeded synthetic surveys: a trace grid with layered LOW-saturation
//! bodies, a handful of wells with saturation logs and time-depth tables,
//! and the ground-truth label of every trace sample.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use satclass_core::geodata::{SeismicTrace, TimeDepthModel, TraceCollection, WellLog};
use satclass_core::ClassLabel;

use crate::error::{Error, Result};
use crate::formats::{self, WellEntry};

/// Depth sampling of generated logs: half a foot.
pub const LOG_STEP_M: f64 = 0.1524;

const TD_KNOT_SPACING_M: f64 = 25.0;
const NAMED_ATTRIBUTES: [&str; 5] = [
    "impedance",
    "inst_amplitude",
    "inst_frequency",
    "envelope",
    "sweetness",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_wells: usize,
    /// Fraction of each trace occupied by LOW samples.
    pub imbalance_ratio: f64,
    pub n_features: usize,
    pub n_informative: usize,
    /// Distance between class means on informative features, in units of
    /// `noise_std`.
    pub cluster_separation: f64,
    pub noise_std: f64,
    pub n_inlines: usize,
    pub n_crosslines: usize,
    pub inline_base: i32,
    pub crossline_base: i32,
    pub trace_samples: usize,
    /// Trace sample interval, ms.
    pub dt: f64,
    /// Time of the first trace sample, ms.
    pub t0: f64,
    pub tau: f64,
    /// Thickness of one LOW body, in trace samples.
    pub layer_samples: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 7,
            n_wells: 4,
            imbalance_ratio: 0.1,
            n_features: 5,
            n_informative: 3,
            cluster_separation: 10.0,
            noise_std: 1.0,
            n_inlines: 8,
            n_crosslines: 8,
            inline_base: 155,
            crossline_base: 300,
            trace_samples: 751,
            dt: 2.0,
            t0: 800.0,
            tau: 0.7,
            layer_samples: 20,
        }
    }
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::Spec(msg.into())
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_wells < 2 {
            return Err(spec_err("n_wells must be at least 2"));
        }
        if !(self.imbalance_ratio > 0.0 && self.imbalance_ratio < 0.5) {
            return Err(spec_err("imbalance_ratio must be in (0, 0.5)"));
        }
        if self.n_informative == 0 || self.n_informative > self.n_features {
            return Err(spec_err("need 1 <= n_informative <= n_features"));
        }
        if !(self.cluster_separation > 0.0) || !self.cluster_separation.is_finite() {
            return Err(spec_err("cluster_separation must be > 0"));
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(spec_err("noise_std must be >= 0"));
        }
        if self.n_inlines * self.n_crosslines < self.n_wells {
            return Err(spec_err("more wells than traces"));
        }
        if self.trace_samples < 4 || !(self.dt > 0.0) || !self.t0.is_finite() {
            return Err(spec_err("traces need >= 4 samples and dt > 0"));
        }
        if !(self.tau > 0.1 && self.tau < 1.0) {
            return Err(spec_err("tau must be in (0.1, 1)"));
        }
        if self.layer_samples == 0 {
            return Err(spec_err("layer_samples must be positive"));
        }
        Ok(())
    }

    pub fn attribute_names(&self) -> Vec<String> {
        if self.n_features == NAMED_ATTRIBUTES.len() {
            NAMED_ATTRIBUTES.iter().map(|s| s.to_string()).collect()
        } else {
            (0..self.n_features).map(|i| format!("attr{i}")).collect()
        }
    }

    /// Feature 0 plus the last `n_informative - 1` features.
    pub fn informative_indices(&self) -> Vec<usize> {
        let mut idx = vec![0];
        idx.extend(self.n_features + 1 - self.n_informative..self.n_features);
        idx
    }

    pub fn informative_names(&self) -> Vec<String> {
        let names = self.attribute_names();
        self.informative_indices().into_iter().map(|i| names[i].clone()).collect()
    }

    fn low_budget(&self) -> usize {
        (self.imbalance_ratio * self.trace_samples as f64).round().max(1.0) as usize
    }

    fn dip_shift(&self, il_idx: usize, xl_idx: usize) -> usize {
        (0.25 * il_idx as f64 + 0.15 * xl_idx as f64).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthWell {
    pub well_id: String,
    pub inline: i32,
    pub crossline: i32,
    pub log: WellLog,
    pub time_depth: TimeDepthModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub spec: SynthSpec,
    pub wells: Vec<SynthWell>,
    pub traces: TraceCollection,
    /// Label of every trace sample, keyed by `(inline, crossline)`.
    pub truth: BTreeMap<(i32, i32), Vec<ClassLabel>>,
    /// Saturation at each sample of the well traces.
    pub well_sw: BTreeMap<String, Vec<f64>>,
}

fn well_id(i: usize) -> String {
    let mut id = String::new();
    let mut k = i;
    loop {
        id.insert(0, (b'A' + (k % 26) as u8) as char);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    id
}

/// LOW body start/length pairs on the unshifted reference column.
fn place_bodies(spec: &SynthSpec, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let n = spec.trace_samples;
    let budget = spec.low_budget();
    let max_shift = spec.dip_shift(spec.n_inlines - 1, spec.n_crosslines - 1);
    let margin = spec.layer_samples.max(n / 20);
    let usable = n.saturating_sub(2 * margin + max_shift);
    let n_bodies = budget.div_ceil(spec.layer_samples);
    let slot = usable / n_bodies.max(1);
    if slot < spec.layer_samples + 1 {
        return Err(spec_err(format!(
            "{budget} LOW samples in layers of {} do not fit in {n}-sample traces",
            spec.layer_samples
        )));
    }
    let mut bodies = Vec::with_capacity(n_bodies);
    let mut left = budget;
    for b in 0..n_bodies {
        let len = left.min(spec.layer_samples);
        left -= len;
        let start = margin + b * slot + rng.random_range(0..=slot - len - 1);
        bodies.push((start, len));
    }
    Ok(bodies)
}

fn time_depth(spec: &SynthSpec, rng: &mut ChaCha8Rng, well: &str) -> Result<TimeDepthModel> {
    let t_start = spec.t0 - 10.0;
    let t_stop = spec.t0 + (spec.trace_samples - 1) as f64 * spec.dt + 10.0;
    let velocity = rng.random_range(2400.0..3200.0);
    let mut depth = 900.0 + rng.random_range(0.0..200.0);
    let mut time = t_start;
    let mut knots = vec![(depth, time)];
    while time < t_stop {
        let v = velocity * (1.0 + rng.random_range(-0.05..0.05));
        depth += TD_KNOT_SPACING_M;
        time += 2000.0 * TD_KNOT_SPACING_M / v;
        knots.push((depth, time));
    }
    Ok(TimeDepthModel::new(well, &knots)?)
}

fn saturation(label: ClassLabel, tau: f64, rng: &mut ChaCha8Rng) -> f64 {
    match label {
        ClassLabel::Low => rng.random_range(0.05..tau - 0.05),
        // Skewed toward fully water-saturated.
        ClassLabel::High => {
            let u: f64 = rng.random_range(0.0..0.95);
            1.0 - (1.0 - tau) * u * u
        }
    }
}

pub fn generate(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names = spec.attribute_names();
    let informative = spec.informative_indices();
    let n = spec.trace_samples;

    let affine: Vec<(f64, f64)> = (0..spec.n_features)
        .map(|_| (rng.random_range(-50.0..50.0), rng.random_range(0.5..2.0)))
        .collect();
    let bodies = place_bodies(spec, &mut rng)?;

    let mut traces = Vec::with_capacity(spec.n_inlines * spec.n_crosslines);
    let mut truth = BTreeMap::new();
    for il_idx in 0..spec.n_inlines {
        for xl_idx in 0..spec.n_crosslines {
            let il = spec.inline_base + il_idx as i32;
            let xl = spec.crossline_base + xl_idx as i32;
            let shift = spec.dip_shift(il_idx, xl_idx);
            let mut labels = vec![ClassLabel::High; n];
            for &(start, len) in &bodies {
                labels[start + shift..start + shift + len].fill(ClassLabel::Low);
            }
            let mut columns = vec![Vec::with_capacity(n); spec.n_features];
            for &label in &labels {
                for (f, col) in columns.iter_mut().enumerate() {
                    let mean = if label == ClassLabel::High && informative.contains(&f) {
                        spec.cluster_separation * spec.noise_std
                    } else {
                        0.0
                    };
                    let z: f64 = rng.sample(StandardNormal);
                    let (offset, scale) = affine[f];
                    col.push(offset + scale * (mean + spec.noise_std * z));
                }
            }
            let attrs = names.iter().cloned().zip(columns).collect();
            traces.push(SeismicTrace::new(il, xl, spec.t0, spec.dt, attrs)?);
            truth.insert((il, xl), labels);
        }
    }
    let traces = TraceCollection::new(names, traces)?;

    let positions = sample(&mut rng, spec.n_inlines * spec.n_crosslines, spec.n_wells).into_vec();
    let mut wells = Vec::with_capacity(spec.n_wells);
    let mut well_sw = BTreeMap::new();
    for (w, pos) in positions.into_iter().enumerate() {
        let id = well_id(w);
        let il = spec.inline_base + (pos / spec.n_crosslines) as i32;
        let xl = spec.crossline_base + (pos % spec.n_crosslines) as i32;
        let sw: Vec<f64> = truth[&(il, xl)]
            .iter()
            .map(|&l| saturation(l, spec.tau, &mut rng))
            .collect();
        let td = time_depth(spec, &mut rng, &id)?;
        let (d_first, d_last) = td.depth_range();
        let n_log = ((d_last - d_first) / LOG_STEP_M).floor() as usize + 1;
        let samples = (0..n_log)
            .map(|i| {
                let d = d_first + i as f64 * LOG_STEP_M;
                let t = td.time_at(d)?;
                let j = ((t - spec.t0) / spec.dt).round().clamp(0.0, (n - 1) as f64) as usize;
                Ok((d, sw[j]))
            })
            .collect::<satclass_core::Result<Vec<_>>>()?;
        wells.push(SynthWell {
            well_id: id.clone(),
            inline: il,
            crossline: xl,
            log: WellLog::new(id.clone(), "SW", &samples)?,
            time_depth: td,
        });
        well_sw.insert(id, sw);
    }

    Ok(SynthData {
        spec: spec.clone(),
        wells,
        traces,
        truth,
        well_sw,
    })
}

pub fn write_truth(data: &SynthData) -> String {
    let mut out = String::from("inline,crossline,time,label\n");
    for (&(il, xl), labels) in &data.truth {
        for (j, l) in labels.iter().enumerate() {
            let t = data.spec.t0 + j as f64 * data.spec.dt;
            let _ = writeln!(out, "{il},{xl},{t},{}", l.as_str());
        }
    }
    out
}

/// File names and contents written by [`write_dir`], in order.
pub fn render_files(data: &SynthData) -> Vec<(String, String)> {
    let mut files = vec![("traces.csv".to_string(), formats::write_traces(&data.traces))];
    let mut entries = Vec::new();
    for w in &data.wells {
        let log = format!("well_{}_sw.csv", w.well_id);
        let td = format!("well_{}_td.csv", w.well_id);
        files.push((log.clone(), formats::write_well_log(&w.log)));
        files.push((td.clone(), formats::write_time_depth(&w.time_depth)));
        entries.push(WellEntry {
            well_id: w.well_id.clone(),
            inline: w.inline,
            crossline: w.crossline,
            log: PathBuf::from(log),
            time_depth: PathBuf::from(td),
        });
    }
    files.push(("wells.csv".to_string(), formats::write_manifest(&entries)));
    files.push(("truth.csv".to_string(), write_truth(data)));
    files
}

pub fn write_dir(data: &SynthData, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    render_files(data)
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            formats::write_text(&path, &text)?;
            Ok(path)
        })
        .collect()
}
