//! File-backed pipeline stages shared by the CLI and tests.

use std::fs;
use std::path::{Path, PathBuf};

use satclass_core::eval::LabeledWell;
use satclass_core::geodata::TraceCollection;
use satclass_core::signalprep::{depth_to_time, integrate_at_well, IntegratedDataset};

use crate::error::{Error, Result};
use crate::formats::{self, WellEntry};

pub fn load_manifest(path: &Path) -> Result<Vec<WellEntry>> {
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    formats::parse_manifest(&formats::read_text(path)?, base).map_err(|e| e.in_file(path))
}

pub fn load_traces(path: &Path) -> Result<TraceCollection> {
    formats::parse_traces(&formats::read_text(path)?, None).map_err(|e| e.in_file(path))
}

/// Converts one well's log to time and fuses it with the trace at the
/// well location, using every attribute in `traces`.
pub fn prep_well(entry: &WellEntry, traces: &TraceCollection) -> Result<IntegratedDataset> {
    let log = formats::parse_well_log(&formats::read_text(&entry.log)?, &entry.well_id, "SW")
        .map_err(|e| e.in_file(&entry.log))?;
    let td = formats::parse_time_depth(&formats::read_text(&entry.time_depth)?, &entry.well_id)
        .map_err(|e| e.in_file(&entry.time_depth))?;
    let series = depth_to_time(&log, &td)?;
    let trace = traces.get(entry.inline, entry.crossline).ok_or_else(|| {
        satclass_core::Error::IncompleteTrace(format!(
            "no trace at well {} location ({},{})",
            entry.well_id, entry.inline, entry.crossline
        ))
    })?;
    Ok(integrate_at_well(
        &entry.well_id,
        trace,
        &series,
        traces.attribute_names(),
    )?)
}

pub fn integrated_file_name(well_id: &str) -> String {
    format!("integrated_{well_id}.csv")
}

/// Reads every `integrated_<well>.csv` in `dir`, ordered by well id.
pub fn load_integrated_dir(dir: &Path) -> Result<Vec<IntegratedDataset>> {
    let mut files: Vec<(String, PathBuf)> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| {
            let path = entry.ok()?.path();
            let name = path.file_name()?.to_str()?;
            let id = name.strip_prefix("integrated_")?.strip_suffix(".csv")?.to_string();
            Some((id, path))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(satclass_core::Error::InsufficientData(format!(
            "no integrated_<well>.csv files in {}",
            dir.display()
        ))
        .into());
    }
    files
        .into_iter()
        .map(|(id, path)| {
            formats::parse_integrated(&formats::read_text(&path)?, &id).map_err(|e| e.in_file(&path))
        })
        .collect()
}

/// Restricts each dataset to `features` and labels rows by `tau`.
pub fn label_wells(
    datasets: &[IntegratedDataset],
    features: &[String],
    tau: f64,
) -> Result<Vec<LabeledWell>> {
    datasets
        .iter()
        .map(|ds| Ok(LabeledWell::from_dataset(&ds.select(features)?, tau)?))
        .collect()
}

/// One feature name per line.
pub fn read_feature_list(path: &Path) -> Result<Vec<String>> {
    Ok(formats::read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}
