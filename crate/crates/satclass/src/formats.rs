//! CSV and PGM file formats.
//!
//! All CSV inputs are UTF-8 with a `.` decimal separator; `\n` and `\r\n`
//! line endings are both accepted. Numbers are written with Rust's
//! shortest round-trip formatting, so write-then-parse is lossless.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use satclass_core::eval::ExperimentReport;
use satclass_core::geodata::{SeismicTrace, TimeDepthModel, TraceCollection, WellLog};
use satclass_core::relief::FeatureWeights;
use satclass_core::signalprep::{IntegratedDataset, GRID_DT};
use satclass_core::volume::Section;
use satclass_core::ClassLabel;

use crate::error::{Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Non-empty lines with 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    expected: &str,
) -> Result<()> {
    match lines.next() {
        Some((_, h)) if h.replace(' ', "") == expected => Ok(()),
        Some((n, h)) => Err(Error::parse(n, format!("expected header `{expected}`, found `{h}`"))),
        None => Err(Error::parse(1, format!("empty input, expected header `{expected}`"))),
    }
}

fn number(line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("`{field}` is not a number")))
}

fn integer(line: usize, field: &str) -> Result<i32> {
    field
        .trim()
        .parse::<i32>()
        .map_err(|_| Error::parse(line, format!("`{field}` is not an integer")))
}

fn pairs(text: &str, header: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = data_lines(text);
    expect_header(&mut lines, header)?;
    lines
        .map(|(n, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 2 {
                return Err(Error::parse(n, format!("expected 2 fields, found {}", f.len())));
            }
            Ok((number(n, f[0])?, number(n, f[1])?))
        })
        .collect()
}

/// `depth,value` rows.
pub fn parse_well_log(text: &str, well_id: &str, property_name: &str) -> Result<WellLog> {
    Ok(WellLog::new(well_id, property_name, &pairs(text, "depth,value")?)?)
}

pub fn write_well_log(log: &WellLog) -> String {
    let mut out = String::from("depth,value\n");
    for (d, v) in log.depths().iter().zip(log.values()) {
        let _ = writeln!(out, "{d},{v}");
    }
    out
}

/// `depth,time` rows (meters, milliseconds).
pub fn parse_time_depth(text: &str, well_id: &str) -> Result<TimeDepthModel> {
    Ok(TimeDepthModel::new(well_id, &pairs(text, "depth,time")?)?)
}

pub fn write_time_depth(td: &TimeDepthModel) -> String {
    let mut out = String::from("depth,time\n");
    for (d, t) in td.depths().iter().zip(td.times()) {
        let _ = writeln!(out, "{d},{t}");
    }
    out
}

pub const TRACE_HEADER_PREFIX: &str = "inline,crossline,t0,dt,attr";

/// One row per trace per attribute: `inline,crossline,t0,dt,attr,v0,v1,...`.
///
/// When `attribute_names` is `None` the attribute list is the sorted set of
/// names found in the file. Row order does not matter.
pub fn parse_traces(text: &str, attribute_names: Option<&[String]>) -> Result<TraceCollection> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, h)) if h.replace(' ', "").starts_with(TRACE_HEADER_PREFIX) => {}
        Some((n, h)) => {
            return Err(Error::parse(
                n,
                format!("expected header starting `{TRACE_HEADER_PREFIX}`, found `{h}`"),
            ))
        }
        None => return Ok(TraceCollection::new(attribute_names.unwrap_or(&[]).to_vec(), vec![])?),
    }

    type Partial = (f64, f64, BTreeMap<String, Vec<f64>>);
    let mut grouped: BTreeMap<(i32, i32), Partial> = BTreeMap::new();
    let mut seen_names = BTreeSet::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split(',').collect();
        if f.len() < 6 {
            return Err(Error::parse(n, "trace row needs at least one sample"));
        }
        let key = (integer(n, f[0])?, integer(n, f[1])?);
        let t0 = number(n, f[2])?;
        let dt = number(n, f[3])?;
        let attr = f[4].trim().to_string();
        let values = f[5..].iter().map(|v| number(n, v)).collect::<Result<Vec<f64>>>()?;
        seen_names.insert(attr.clone());
        let entry = grouped.entry(key).or_insert_with(|| (t0, dt, BTreeMap::new()));
        if entry.0 != t0 || entry.1 != dt {
            return Err(Error::parse(
                n,
                format!("trace ({},{}) has inconsistent t0/dt across attributes", key.0, key.1),
            ));
        }
        if entry.2.insert(attr.clone(), values).is_some() {
            return Err(satclass_core::Error::DuplicateTrace(format!(
                "({},{}) attribute {attr}",
                key.0, key.1
            ))
            .into());
        }
    }

    let names: Vec<String> = match attribute_names {
        Some(names) => names.to_vec(),
        None => seen_names.into_iter().collect(),
    };
    let traces = grouped
        .into_iter()
        .map(|((il, xl), (t0, dt, attrs))| SeismicTrace::new(il, xl, t0, dt, attrs))
        .collect::<satclass_core::Result<Vec<_>>>()?;
    Ok(TraceCollection::new(names, traces)?)
}

/// Writes the attributes listed in the collection, traces in key order.
pub fn write_traces(traces: &TraceCollection) -> String {
    let mut out = String::from(TRACE_HEADER_PREFIX);
    let max_len = traces.iter().map(SeismicTrace::n_samples).max().unwrap_or(0);
    for i in 0..max_len {
        let _ = write!(out, ",v{i}");
    }
    out.push('\n');
    for t in traces.iter() {
        for name in traces.attribute_names() {
            let _ = write!(out, "{},{},{},{},{name}", t.inline, t.crossline, t.t0(), t.dt());
            for v in t.attribute(name).unwrap_or(&[]) {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
    }
    out
}

/// `time,<features...>,sw`
pub fn write_integrated(ds: &IntegratedDataset) -> String {
    let mut out = String::from("time");
    for n in &ds.feature_names {
        let _ = write!(out, ",{n}");
    }
    out.push_str(",sw\n");
    for ((t, row), sw) in ds.times.iter().zip(&ds.features).zip(&ds.sw) {
        let _ = write!(out, "{t}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{sw}");
    }
    out
}

pub fn parse_integrated(text: &str, well_id: &str) -> Result<IntegratedDataset> {
    let mut lines = data_lines(text);
    let (n, header) = lines.next().ok_or_else(|| Error::parse(1, "empty dataset"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "time" || cols[cols.len() - 1] != "sw" {
        return Err(Error::parse(n, "expected header `time,<features...>,sw`"));
    }
    let names: Vec<String> = cols[1..cols.len() - 1].iter().map(|s| s.to_string()).collect();
    let mut times = Vec::new();
    let mut features = Vec::new();
    let mut sw = Vec::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != cols.len() {
            return Err(Error::parse(n, format!("expected {} fields, found {}", cols.len(), f.len())));
        }
        times.push(number(n, f[0])?);
        features.push(
            f[1..f.len() - 1]
                .iter()
                .map(|v| number(n, v))
                .collect::<Result<Vec<_>>>()?,
        );
        sw.push(number(n, f[f.len() - 1])?);
    }
    Ok(IntegratedDataset::new(well_id, names, times, features, sw)?)
}

/// A well listed in `wells.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct WellEntry {
    pub well_id: String,
    pub inline: i32,
    pub crossline: i32,
    pub log: PathBuf,
    pub time_depth: PathBuf,
}

pub const MANIFEST_HEADER: &str = "well_id,inline,crossline,log,time_depth";

/// `well_id,inline,crossline,log,time_depth`; relative paths are resolved
/// against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<WellEntry>> {
    let mut lines = data_lines(text);
    expect_header(&mut lines, MANIFEST_HEADER)?;
    let mut out: Vec<WellEntry> = Vec::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(Error::parse(n, format!("expected 5 fields, found {}", f.len())));
        }
        if out.iter().any(|w| w.well_id == f[0]) {
            return Err(Error::parse(n, format!("well {} listed twice", f[0])));
        }
        out.push(WellEntry {
            well_id: f[0].to_string(),
            inline: integer(n, f[1])?,
            crossline: integer(n, f[2])?,
            log: base.join(f[3]),
            time_depth: base.join(f[4]),
        });
    }
    Ok(out)
}

pub fn write_manifest(entries: &[WellEntry]) -> String {
    let mut out = format!("{MANIFEST_HEADER}\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.well_id,
            e.inline,
            e.crossline,
            e.log.display(),
            e.time_depth.display()
        );
    }
    out
}

/// `feature,weight`, sorted by descending weight.
pub fn write_weights(w: &FeatureWeights) -> String {
    let mut out = String::from("feature,weight\n");
    for (name, weight) in w.ranked() {
        let _ = writeln!(out, "{name},{weight}");
    }
    out
}

pub const REPORT_HEADER: &str = "well,classifier,g_metric,seconds,tp,fn,tn,fp";

pub fn write_reports(reports: &[ExperimentReport]) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for r in reports {
        let c = &r.confusion;
        let _ = writeln!(
            out,
            "{},{},{},{:.3},{},{},{},{}",
            r.held_out_well, r.classifier_name, r.g_metric, r.execution_seconds, c.tp, c.fn_, c.tn, c.fp
        );
    }
    out
}

fn cell_str(c: Option<ClassLabel>) -> &'static str {
    c.map_or("MISSING", ClassLabel::as_str)
}

/// `crossline,time,label` rows, crossline-major.
pub fn write_section_csv(s: &Section) -> String {
    let mut out = String::from("crossline,time,label\n");
    for (xi, xl) in s.crosslines.iter().enumerate() {
        for t in 0..s.n_times {
            let _ = writeln!(out, "{xl},{:.2},{}", s.time(t), cell_str(s.get(xi, t)));
        }
    }
    out
}

pub fn parse_section_csv(text: &str, inline: i32) -> Result<Section> {
    let mut lines = data_lines(text);
    expect_header(&mut lines, "crossline,time,label")?;
    let mut cells = BTreeMap::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(Error::parse(n, format!("expected 3 fields, found {}", f.len())));
        }
        let xl = integer(n, f[0])?;
        let k = (number(n, f[1])? / GRID_DT).round() as i64;
        let label = match f[2] {
            "MISSING" => None,
            s => Some(
                ClassLabel::parse(s).ok_or_else(|| Error::parse(n, format!("bad label `{s}`")))?,
            ),
        };
        cells.insert((xl, k), label);
    }
    let crosslines: Vec<i32> = cells.keys().map(|k| k.0).collect::<BTreeSet<_>>().into_iter().collect();
    let ks: BTreeSet<i64> = cells.keys().map(|k| k.1).collect();
    let first_index = ks.iter().next().copied().unwrap_or(0);
    let n_times = ks.len();
    let mut labels = Vec::with_capacity(crosslines.len() * n_times);
    for &xl in &crosslines {
        for t in 0..n_times as i64 {
            let cell = cells
                .get(&(xl, first_index + t))
                .ok_or_else(|| Error::parse(0, format!("section is missing crossline {xl} sample {t}")))?;
            labels.push(*cell);
        }
    }
    Ok(Section {
        inline,
        crosslines,
        first_index,
        n_times,
        labels,
    })
}

/// Binary PGM (P5): one row per time sample, one column per crossline;
/// HIGH = 255, LOW = 0, MISSING = 128.
pub fn section_pgm(s: &Section) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", s.crosslines.len(), s.n_times).into_bytes();
    for t in 0..s.n_times {
        for xi in 0..s.crosslines.len() {
            out.push(match s.get(xi, t) {
                Some(ClassLabel::High) => 255,
                Some(ClassLabel::Low) => 0,
                None => 128,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionFormat {
    Csv,
    Pgm,
}

/// Writes `section_inline<k>.{csv,pgm}` into `dir` and returns the path.
pub fn export_section(s: &Section, dir: &Path, format: SectionFormat) -> Result<PathBuf> {
    if s.is_empty() {
        return Err(satclass_core::Error::InvalidParameter(format!(
            "section for inline {} is empty",
            s.inline
        ))
        .into());
    }
    let (ext, bytes) = match format {
        SectionFormat::Csv => ("csv", write_section_csv(s).into_bytes()),
        SectionFormat::Pgm => ("pgm", section_pgm(s)),
    };
    let path = dir.join(format!("section_inline{}.{ext}", s.inline));
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn well_log_examples() {
        let log = parse_well_log("depth,value\n1000,0.9\n1001,0.8", "A", "SW").unwrap();
        assert_eq!(log.len(), 2);
        assert_eq!(log.values(), &[0.9, 0.8]);
        let crlf = parse_well_log("depth,value\r\n1000,0.9\r\n1001,0.8\r\n", "A", "SW").unwrap();
        assert_eq!(crlf, log);
        let err = parse_well_log("depth,value\n1001,0.9\n1000,0.8", "A", "SW").unwrap_err();
        assert_eq!(err.kind(), "MalformedLog");
        let err = parse_well_log("depth,value\n1000,abc", "A", "SW").unwrap_err();
        assert_eq!(err.kind(), "ParseError");
        let err = parse_well_log("depth,value\n1000,0.5", "A", "SW").unwrap_err();
        assert_eq!(err.kind(), "InsufficientData");
    }

    #[test]
    fn time_depth_examples() {
        let td = parse_time_depth("depth,time\n1000,800\n1100,850", "A").unwrap();
        assert_eq!(td.depths().len(), 2);
        assert_eq!(
            parse_time_depth("depth,time\n1000,850\n1100,800", "A").unwrap_err().kind(),
            "MalformedModel"
        );
        assert_eq!(
            parse_time_depth("depth,time\n1000,800", "A").unwrap_err().kind(),
            "InsufficientData"
        );
    }

    fn names3() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn trace_examples() {
        let text = "inline,crossline,t0,dt,attr,v0,v1,v2\n\
                    1,2,800,2,a,1,2,3\n1,2,800,2,b,4,5,6\n1,2,800,2,c,7,8,9\n";
        let tc = parse_traces(text, Some(&names3())).unwrap();
        assert_eq!(tc.len(), 1);
        assert_eq!(tc.get(1, 2).unwrap().attribute("b").unwrap(), &[4.0, 5.0, 6.0]);

        let partial = "inline,crossline,t0,dt,attr,v0\n1,2,800,2,a,1\n1,2,800,2,b,4\n";
        assert_eq!(parse_traces(partial, Some(&names3())).unwrap_err().kind(), "IncompleteTrace");

        let dup = "inline,crossline,t0,dt,attr,v0\n1,2,800,2,a,1\n1,2,800,2,a,4\n";
        assert_eq!(parse_traces(dup, None).unwrap_err().kind(), "DuplicateTrace");
    }

    #[test]
    fn section_formats() {
        let s = Section {
            inline: 3,
            crosslines: vec![10, 11],
            first_index: 5334,
            n_times: 2,
            labels: vec![Some(ClassLabel::High); 4],
        };
        let pgm = section_pgm(&s);
        assert!(pgm.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(&pgm[pgm.len() - 4..], &[255, 255, 255, 255]);
        assert_eq!(pgm.len(), b"P5\n2 2\n255\n".len() + 4);

        let mixed = Section {
            labels: vec![Some(ClassLabel::Low), None, Some(ClassLabel::High), Some(ClassLabel::Low)],
            ..s
        };
        let csv = write_section_csv(&mixed);
        assert_eq!(csv.lines().count(), 1 + 2 * 2);
        assert_eq!(parse_section_csv(&csv, 3).unwrap(), mixed);
    }

    #[test]
    fn manifest_round_trip() {
        let entries = vec![WellEntry {
            well_id: "A".into(),
            inline: 159,
            crossline: 300,
            log: PathBuf::from("well_A_sw.csv"),
            time_depth: PathBuf::from("well_A_td.csv"),
        }];
        let text = write_manifest(&entries);
        assert_eq!(parse_manifest(&text, Path::new("")).unwrap(), entries);
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6f64..1e6, -1.0f64..1.0, Just(0.0), Just(1e-300)]
    }

    proptest! {
        #[test]
        fn geodata_round_trips(
            steps in proptest::collection::vec(1e-3f64..10.0, 2..20),
            tsteps in proptest::collection::vec(1e-3f64..10.0, 20),
            vals in proptest::collection::vec(finite(), 20),
            t0 in -100.0f64..1000.0, dt in 0.1f64..4.0,
        ) {
            let mut depth = 500.0;
            let samples: Vec<(f64, f64)> = steps.iter().zip(&vals).map(|(s, v)| { depth += s; (depth, *v) }).collect();
            let log = WellLog::new("A", "SW", &samples).unwrap();
            prop_assert_eq!(parse_well_log(&write_well_log(&log), "A", "SW").unwrap(), log);

            let mut t = 700.0;
            let knots: Vec<(f64, f64)> = samples.iter().zip(&tsteps).map(|((d, _), s)| { t += s; (*d, t) }).collect();
            let td = TimeDepthModel::new("A", &knots).unwrap();
            prop_assert_eq!(parse_time_depth(&write_time_depth(&td), "A").unwrap(), td);

            let names = vec!["z".to_string(), "a".to_string()];
            let traces: Vec<SeismicTrace> = (0..3i32).map(|i| {
                let attrs = names.iter().enumerate()
                    .map(|(k, n)| (n.clone(), vals.iter().map(|v| v + (i as usize * 10 + k) as f64).collect()))
                    .collect();
                SeismicTrace::new(i, -i, t0, dt, attrs).unwrap()
            }).collect();
            let tc = TraceCollection::new(names.clone(), traces).unwrap();
            prop_assert_eq!(parse_traces(&write_traces(&tc), Some(&names)).unwrap(), tc);
        }

        #[test]
        fn trace_rows_are_order_insensitive(perm_seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let names = names3();
            let traces: Vec<SeismicTrace> = (0..4).map(|i| {
                let attrs = names.iter().map(|n| (n.clone(), vec![i as f64, 1.5, -2.0, 7.0])).collect();
                SeismicTrace::new(i / 2, i % 2, 800.0, 2.0, attrs).unwrap()
            }).collect();
            let tc = TraceCollection::new(names.clone(), traces).unwrap();
            let text = write_traces(&tc);
            let mut lines: Vec<&str> = text.lines().collect();
            let header = lines.remove(0);
            lines.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let shuffled = std::iter::once(header).chain(lines).collect::<Vec<_>>().join("\n");
            prop_assert_eq!(parse_traces(&shuffled, Some(&names)).unwrap(), tc.clone());
            prop_assert_eq!(parse_traces(&shuffled, None).unwrap(), tc);
        }
    }
}
