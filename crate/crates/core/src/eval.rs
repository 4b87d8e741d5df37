//! Labeling, leave-one-well-out protocol, g-metric mean and the comparison
//! tables.
//!
//! The positive class is LOW water saturation: the minority class and the
//! target of the one-class model.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::signalprep::IntegratedDataset;
use crate::svdd::{Standardization, SvddModel, TrainParams, TrainReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    High,
    Low,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::High => "HIGH",
            ClassLabel::Low => "LOW",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "HIGH" => Some(ClassLabel::High),
            "LOW" => Some(ClassLabel::Low),
            _ => None,
        }
    }
}

/// `sw >= tau` is HIGH, otherwise LOW.
pub fn threshold_label(sw: f64, tau: f64) -> Result<ClassLabel> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::RangeError(format!("tau = {tau} outside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&sw) {
        return Err(Error::RangeError(format!("sw = {sw} outside [0, 1]")));
    }
    Ok(if sw >= tau {
        ClassLabel::High
    } else {
        ClassLabel::Low
    })
}

/// One well's feature rows with their thresholded labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledWell {
    pub well_id: String,
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<ClassLabel>,
}

impl LabeledWell {
    pub fn from_dataset(ds: &IntegratedDataset, tau: f64) -> Result<Self> {
        let labels = ds
            .sw
            .iter()
            .map(|&s| threshold_label(s, tau))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            well_id: ds.well_id.clone(),
            feature_names: ds.feature_names.clone(),
            features: ds.features.clone(),
            labels,
        })
    }

    pub fn count(&self, label: ClassLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    fn rows_with(&self, label: ClassLabel) -> impl Iterator<Item = &Vec<f64>> {
        self.features
            .iter()
            .zip(&self.labels)
            .filter(move |(_, &l)| l == label)
            .map(|(r, _)| r)
    }
}

/// Train/test partition for one held-out well.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<Vec<f64>>,
    pub train_labels: Vec<ClassLabel>,
    pub test: Vec<Vec<f64>>,
    pub test_labels: Vec<ClassLabel>,
}

fn find_well<'a>(wells: &'a [LabeledWell], held_out: &str) -> Result<&'a LabeledWell> {
    wells
        .iter()
        .find(|w| w.well_id == held_out)
        .ok_or_else(|| Error::UnknownWell(held_out.to_string()))
}

/// One-class split: train on the LOW rows of every well except `held_out`;
/// test on the LOW rows of `held_out` plus the HIGH rows of all wells.
pub fn build_lowo_split(wells: &[LabeledWell], held_out: &str) -> Result<Split> {
    let test_well = find_well(wells, held_out)?;
    let mut train = Vec::new();
    for w in wells.iter().filter(|w| w.well_id != held_out) {
        let before = train.len();
        train.extend(w.rows_with(ClassLabel::Low).cloned());
        if train.len() == before {
            return Err(Error::DegenerateWell(w.well_id.clone()));
        }
    }
    let mut test: Vec<Vec<f64>> = test_well.rows_with(ClassLabel::Low).cloned().collect();
    let mut test_labels = vec![ClassLabel::Low; test.len()];
    for w in wells {
        let before = test.len();
        test.extend(w.rows_with(ClassLabel::High).cloned());
        test_labels.resize(test_labels.len() + test.len() - before, ClassLabel::High);
    }
    let train_labels = vec![ClassLabel::Low; train.len()];
    Ok(Split {
        train,
        train_labels,
        test,
        test_labels,
    })
}

/// Two-class split used by supervised comparators: train on every row of
/// the other wells, test on every row of `held_out`.
pub fn build_supervised_split(wells: &[LabeledWell], held_out: &str) -> Result<Split> {
    let test_well = find_well(wells, held_out)?;
    let mut train = Vec::new();
    let mut train_labels = Vec::new();
    for w in wells.iter().filter(|w| w.well_id != held_out) {
        train.extend(w.features.iter().cloned());
        train_labels.extend(w.labels.iter().copied());
    }
    Ok(Split {
        train,
        train_labels,
        test: test_well.features.clone(),
        test_labels: test_well.labels.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub fp: usize,
}

impl ConfusionCounts {
    pub fn from_predictions(truth: &[ClassLabel], predicted: &[ClassLabel]) -> Self {
        let mut c = Self::default();
        for (t, p) in truth.iter().zip(predicted) {
            match (t, p) {
                (ClassLabel::Low, ClassLabel::Low) => c.tp += 1,
                (ClassLabel::Low, ClassLabel::High) => c.fn_ += 1,
                (ClassLabel::High, ClassLabel::High) => c.tn += 1,
                (ClassLabel::High, ClassLabel::Low) => c.fp += 1,
            }
        }
        c
    }

    pub fn tpr(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_) as f64
    }

    pub fn tnr(&self) -> f64 {
        self.tn as f64 / (self.tn + self.fp) as f64
    }
}

/// Geometric mean of sensitivity and specificity.
pub fn g_metric(c: &ConfusionCounts) -> Result<f64> {
    if c.tp + c.fn_ == 0 {
        return Err(Error::UndefinedMetric("no positive (LOW) samples".into()));
    }
    if c.tn + c.fp == 0 {
        return Err(Error::UndefinedMetric("no negative (HIGH) samples".into()));
    }
    Ok(libm::sqrt(c.tpr() * c.tnr()))
}

/// Two-class nearest-centroid classifier on standardized features.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestCentroid {
    scaling: Standardization,
    low: Vec<f64>,
    high: Vec<f64>,
}

impl NearestCentroid {
    pub fn fit(rows: &[Vec<f64>], labels: &[ClassLabel]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InsufficientData(format!("{} training rows", rows.len())));
        }
        let scaling = Standardization::fit(rows);
        let p = scaling.dim();
        let mut sums = [vec![0.0; p], vec![0.0; p]];
        let mut counts = [0usize; 2];
        for (r, l) in rows.iter().zip(labels) {
            let k = (*l == ClassLabel::Low) as usize;
            counts[k] += 1;
            for (s, v) in sums[k].iter_mut().zip(scaling.apply(r)) {
                *s += v;
            }
        }
        if counts.contains(&0) {
            return Err(Error::DegenerateLabels);
        }
        let [high, low] = sums;
        let mean = |v: Vec<f64>, n: usize| v.into_iter().map(|s| s / n as f64).collect();
        Ok(Self {
            low: mean(low, counts[1]),
            high: mean(high, counts[0]),
            scaling,
        })
    }

    /// Ties go to HIGH.
    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        let z = self.scaling.apply(x);
        let dl = crate::kernels::squared_distance(&z, &self.low);
        let dh = crate::kernels::squared_distance(&z, &self.high);
        if dl < dh {
            ClassLabel::Low
        } else {
            ClassLabel::High
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierSpec {
    Svdd(TrainParams),
    NearestCentroid,
}

impl ClassifierSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::Svdd(_) => "SVDD",
            ClassifierSpec::NearestCentroid => "NearestCentroid",
        }
    }

    pub fn hyperparameters(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        if let ClassifierSpec::Svdd(p) = self {
            map.insert("kernel".into(), p.kernel.to_string());
            map.insert("C".into(), p.c.to_string());
            map.insert("tol".into(), p.tol.to_string());
            map.insert("max_iter".into(), p.max_iter.to_string());
            map.insert("standardize".into(), p.standardize.to_string());
        }
        map
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub held_out_well: String,
    pub classifier_name: String,
    pub g_metric: f64,
    pub execution_seconds: f64,
    pub confusion: ConfusionCounts,
    pub hyperparameters: BTreeMap<String, String>,
}

/// Everything produced by one held-out-well run.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: ExperimentReport,
    pub test_labels: Vec<ClassLabel>,
    pub predictions: Vec<ClassLabel>,
    pub svdd: Option<(SvddModel, TrainReport)>,
}

/// Runs one classifier with `held_out` as the blind well.
///
/// `now` returns a monotonic time in seconds; only training and
/// prediction are inside the timed region.
pub fn run_experiment(
    wells: &[LabeledWell],
    held_out: &str,
    spec: &ClassifierSpec,
    now: impl Fn() -> f64,
) -> Result<Experiment> {
    let split = match spec {
        ClassifierSpec::Svdd(_) => build_lowo_split(wells, held_out)?,
        ClassifierSpec::NearestCentroid => build_supervised_split(wells, held_out)?,
    };

    let start = now();
    let (predictions, svdd) = match spec {
        ClassifierSpec::Svdd(params) => {
            let (mut model, report) = SvddModel::train(&split.train, params)?;
            if let Some(w) = wells.first() {
                model.set_feature_names(w.feature_names.clone())?;
            }
            let preds = split
                .test
                .iter()
                .map(|x| model.classify(x))
                .collect::<Result<Vec<_>>>()?;
            (preds, Some((model, report)))
        }
        ClassifierSpec::NearestCentroid => {
            let nc = NearestCentroid::fit(&split.train, &split.train_labels)?;
            (split.test.iter().map(|x| nc.predict(x)).collect(), None)
        }
    };
    let seconds = (now() - start).max(0.0);

    let confusion = ConfusionCounts::from_predictions(&split.test_labels, &predictions);
    let report = ExperimentReport {
        held_out_well: held_out.to_string(),
        classifier_name: spec.name().to_string(),
        g_metric: g_metric(&confusion)?,
        execution_seconds: seconds,
        confusion,
        hyperparameters: spec.hyperparameters(),
    };
    Ok(Experiment {
        report,
        test_labels: split.test_labels,
        predictions,
        svdd,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMetric {
    GMetric,
    Seconds,
}

/// Per-well by per-classifier table with an average row.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub metric: TableMetric,
    pub wells: Vec<String>,
    pub classifiers: Vec<String>,
    /// `values[well][classifier]`
    pub values: Vec<Vec<f64>>,
    pub averages: Vec<f64>,
}

pub fn comparison_table(reports: &[ExperimentReport], metric: TableMetric) -> Result<ComparisonTable> {
    if reports.is_empty() {
        return Err(Error::TableError("no reports".into()));
    }
    let mut wells: Vec<String> = Vec::new();
    let mut classifiers: Vec<String> = Vec::new();
    for r in reports {
        if !wells.contains(&r.held_out_well) {
            wells.push(r.held_out_well.clone());
        }
        if !classifiers.contains(&r.classifier_name) {
            classifiers.push(r.classifier_name.clone());
        }
    }
    let mut values = vec![vec![None; classifiers.len()]; wells.len()];
    for r in reports {
        let w = wells.iter().position(|x| *x == r.held_out_well).unwrap();
        let c = classifiers.iter().position(|x| *x == r.classifier_name).unwrap();
        if values[w][c].is_some() {
            return Err(Error::TableError(format!(
                "duplicate report for well {} / {}",
                r.held_out_well, r.classifier_name
            )));
        }
        values[w][c] = Some(match metric {
            TableMetric::GMetric => r.g_metric,
            TableMetric::Seconds => r.execution_seconds,
        });
    }
    let values = values
        .into_iter()
        .zip(&wells)
        .map(|(row, w)| {
            row.into_iter()
                .zip(&classifiers)
                .map(|(v, c)| {
                    v.ok_or_else(|| Error::TableError(format!("{c} has no report for well {w}")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let averages = (0..classifiers.len())
        .map(|c| values.iter().map(|row| row[c]).sum::<f64>() / wells.len() as f64)
        .collect();
    Ok(ComparisonTable {
        metric,
        wells,
        classifiers,
        values,
        averages,
    })
}

pub const AVERAGE_ROW: &str = "Average Performance";

impl ComparisonTable {
    fn title(&self) -> &'static str {
        match self.metric {
            TableMetric::GMetric => "g-metric mean",
            TableMetric::Seconds => "program execution time (s)",
        }
    }

    fn rows(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.wells
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().map(Vec::as_slice))
            .chain(core::iter::once((AVERAGE_ROW, self.averages.as_slice())))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("well");
        for c in &self.classifiers {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (name, vals) in self.rows() {
            out.push_str(name);
            for v in vals {
                let _ = write!(out, ",{v:.3}");
            }
            out.push('\n');
        }
        out
    }

    /// Fixed-width rendering with a title line.
    pub fn to_text(&self) -> String {
        let first = self
            .rows()
            .map(|(n, _)| n.len())
            .chain(core::iter::once("Well Name".len()))
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = self.classifiers.iter().map(|c| c.len().max(10)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "Value of {}", self.title());
        let _ = write!(out, "{:<first$}", "Well Name");
        for (c, w) in self.classifiers.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
        for (name, vals) in self.rows() {
            let _ = write!(out, "{name:<first$}");
            for (v, w) in vals.iter().zip(&widths) {
                let _ = write!(out, "  {v:>w$.3}");
            }
            out.push('\n');
        }
        out
    }
}
