use std::path::Path;

use satclass::formats;
use satclass::synth::{generate, render_files, write_dir, SynthSpec};
use satclass_core::ClassLabel;

#[test]
fn same_seed_same_bytes() {
    let spec = SynthSpec { n_inlines: 3, n_crosslines: 4, trace_samples: 301, ..SynthSpec::default() };
    let a = render_files(&generate(&spec).unwrap());
    let b = render_files(&generate(&spec).unwrap());
    assert_eq!(a, b);
    let other = render_files(&generate(&SynthSpec { seed: spec.seed + 1, ..spec }).unwrap());
    assert_ne!(a, other);
}

#[test]
fn low_count_within_binomial_band() {
    let spec = SynthSpec { trace_samples: 1000, n_inlines: 4, n_crosslines: 4, ..SynthSpec::default() };
    let data = generate(&spec).unwrap();
    let n = spec.trace_samples as f64;
    let mean = spec.imbalance_ratio * n;
    let sigma = (n * spec.imbalance_ratio * (1.0 - spec.imbalance_ratio)).sqrt();
    for w in &data.wells {
        let low = data.truth[&(w.inline, w.crossline)]
            .iter()
            .filter(|&&l| l == ClassLabel::Low)
            .count() as f64;
        assert!((low - mean).abs() <= 4.0 * sigma, "well {}: {low} LOW rows", w.well_id);
    }
}

#[test]
fn written_files_parse_back() {
    let spec = SynthSpec { n_inlines: 2, n_crosslines: 3, trace_samples: 201, ..SynthSpec::default() };
    let data = generate(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_dir(&data, dir.path()).unwrap();
    let read = |name: &str| formats::read_text(&dir.path().join(name)).unwrap();

    let traces = formats::parse_traces(&read("traces.csv"), None).unwrap();
    let mut names = spec.attribute_names();
    names.sort();
    assert_eq!(traces.attribute_names(), names.as_slice());
    for t in data.traces.iter() {
        assert_eq!(traces.get(t.inline, t.crossline).unwrap().attributes(), t.attributes());
    }

    let wells = formats::parse_manifest(&read("wells.csv"), dir.path()).unwrap();
    assert_eq!(wells.len(), spec.n_wells);
    for (entry, w) in wells.iter().zip(&data.wells) {
        assert_eq!((entry.inline, entry.crossline), (w.inline, w.crossline));
        let rel = |p: &Path| p.file_name().unwrap().to_string_lossy().into_owned();
        let log = formats::parse_well_log(&read(&rel(&entry.log)), &w.well_id, "SW").unwrap();
        assert_eq!(log, w.log);
        let td = formats::parse_time_depth(&read(&rel(&entry.time_depth)), &w.well_id).unwrap();
        assert_eq!(td, w.time_depth);
    }

    let truth = read("truth.csv");
    assert_eq!(truth.lines().count(), 1 + 6 * 201);
    assert!(truth.starts_with("inline,crossline,time,label\n"));
}
