//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use satclass_core::eval::{
    build_lowo_split, comparison_table, ClassifierSpec, ConfusionCounts, Experiment,
    ExperimentReport, LabeledWell, TableMetric,
};
use satclass_core::relief::{relief_weights, select_top_k};
use satclass_core::signalprep::IntegratedDataset;
use satclass_core::volume::extract_section;
use satclass_core::{ClassLabel, SvddModel};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::formats::{self, SectionFormat};
use crate::{experiment, model_io, pipeline, sweep, synth};

/// Relief iterations when `relief_m` is unset, capped by the row count.
pub const DEFAULT_RELIEF_M: usize = 1000;

pub const RUN_HEADER: &str = "run_header.txt";
pub const MODEL_FILE: &str = "model.txt";
pub const SELECTED_FILE: &str = "selected_features.txt";

#[derive(Debug, Parser)]
#[command(name = "satclass", version, about = "SVDD water-saturation classification")]
pub struct Cli {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Generate a synthetic survey with wells and ground truth.
    Synth,
    /// Convert well logs to time and merge them with trace attributes.
    Prep,
    /// Rank attributes with Relief and keep the top `relief_k`.
    Relief,
    /// Train an SVDD model on LOW rows.
    Train,
    /// Leave-one-well-out evaluation against a nearest-centroid baseline.
    Evaluate,
    /// Classify every trace sample and export inline sections.
    ClassifyVolume,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Prep => "prep",
            Command::Relief => "relief",
            Command::Train => "train",
            Command::Evaluate => "evaluate",
            Command::ClassifyVolume => "classify-volume",
        }
    }
}

macro_rules! overrides {
    ($($field:ident),* $(,)?) => {
        /// One flag per config key.
        #[derive(Debug, Default, Clone, Args)]
        pub struct Overrides {
            $(
                #[arg(long, global = true, value_name = "VALUE", hide_short_help = true)]
                pub $field: Option<String>,
            )*
        }

        impl Overrides {
            pub fn pairs(&self) -> Vec<(&'static str, &str)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push((stringify!($field), v.as_str()));
                    }
                )*
                out
            }

            pub fn keys() -> &'static [&'static str] {
                &[$(stringify!($field)),*]
            }
        }
    };
}

overrides!(
    wells,
    traces,
    data,
    model,
    selected,
    features,
    kernel,
    width,
    alpha,
    degree,
    c,
    tol,
    max_iter,
    tau,
    relief_m,
    relief_k,
    held_out,
    seed,
    out,
    workers,
    inlines,
    section_format,
    n_wells,
    imbalance_ratio,
    n_features,
    n_informative,
    cluster_separation,
    noise_std,
    n_inlines,
    n_crosslines,
    trace_samples,
    layer_samples,
);

impl Cli {
    pub fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        for (k, v) in self.overrides.pairs() {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Failures print one `error kind=<Kind> msg="..."` line to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error");
            eprintln!("{}", error_line("UsageError", first.trim_start_matches("error: ")));
            return 2;
        }
    };
    match cli.run_config().and_then(|cfg| execute(cli.command, &cfg)) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            1
        }
    }
}

pub fn error_line(kind: &str, msg: &str) -> String {
    let msg = msg.replace('\\', "\\\\").replace('"', "\\\"").replace(['\n', '\r'], " ");
    format!("error kind={kind} msg=\"{msg}\"")
}

/// Runs one subcommand and returns a short human-readable summary.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<String> {
    match command {
        Command::Synth => cmd_synth(cfg),
        Command::Prep => cmd_prep(cfg),
        Command::Relief => cmd_relief(cfg),
        Command::Train => cmd_train(cfg),
        Command::Evaluate => cmd_evaluate(cfg),
        Command::ClassifyVolume => cmd_classify_volume(cfg),
    }
}

fn required<'a, T>(value: &'a Option<T>, key: &str, command: Command) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::Config(format!("`{}` needs `{key}`", command.name())))
}

fn prepare_out(cfg: &RunConfig, command: Command) -> Result<PathBuf> {
    let dir = cfg.out.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let header = format!(
        "satclass {}\ncommand = {}\nseed = {}\nconfig_hash = {}\n",
        env!("CARGO_PKG_VERSION"),
        command.name(),
        cfg.seed,
        cfg.hash()
    );
    formats::write_text(&dir.join(RUN_HEADER), &header)?;
    Ok(dir)
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<String> {
    let data = synth::generate(&cfg.synth_spec())?;
    let dir = prepare_out(cfg, Command::Synth)?;
    let files = synth::write_dir(&data, &dir)?;
    Ok(format!(
        "synth: {} traces, {} wells, {} files in {}\n",
        data.traces.len(),
        data.wells.len(),
        files.len(),
        dir.display()
    ))
}

pub fn cmd_prep(cfg: &RunConfig) -> Result<String> {
    let wells = pipeline::load_manifest(required(&cfg.wells, "wells", Command::Prep)?)?;
    let traces = pipeline::load_traces(required(&cfg.traces, "traces", Command::Prep)?)?;
    let datasets = wells
        .iter()
        .map(|w| pipeline::prep_well(w, &traces))
        .collect::<Result<Vec<_>>>()?;
    let dir = prepare_out(cfg, Command::Prep)?;
    let mut summary = String::from("well,rows,clamped_sw\n");
    for ds in &datasets {
        let path = dir.join(pipeline::integrated_file_name(&ds.well_id));
        formats::write_text(&path, &formats::write_integrated(ds))?;
        let _ = writeln!(summary, "{},{},{}", ds.well_id, ds.len(), ds.clamped_sw);
        if ds.clamped_sw > 0 {
            log::warn!("well {}: {} saturation values clamped into [0, 1]", ds.well_id, ds.clamped_sw);
        }
    }
    formats::write_text(&dir.join("prep_summary.csv"), &summary)?;
    Ok(format!("prep: {} wells written to {}\n", datasets.len(), dir.display()))
}

/// Explicit `features`, else the `selected` file, else every column.
fn resolve_features(cfg: &RunConfig, datasets: &[IntegratedDataset]) -> Result<Vec<String>> {
    if let Some(f) = &cfg.features {
        return Ok(f.clone());
    }
    if let Some(path) = &cfg.selected {
        return pipeline::read_feature_list(path);
    }
    Ok(datasets
        .first()
        .map(|d| d.feature_names.clone())
        .unwrap_or_default())
}

fn load_labeled(cfg: &RunConfig, command: Command) -> Result<(Vec<String>, Vec<LabeledWell>)> {
    let datasets = pipeline::load_integrated_dir(required(&cfg.data, "data", command)?)?;
    let features = resolve_features(cfg, &datasets)?;
    let wells = pipeline::label_wells(&datasets, &features, cfg.tau)?;
    Ok((features, wells))
}

pub fn cmd_relief(cfg: &RunConfig) -> Result<String> {
    let (features, wells) = load_labeled(cfg, Command::Relief)?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for w in &wells {
        rows.extend(w.features.iter().cloned());
        labels.extend_from_slice(&w.labels);
    }
    let m = cfg.relief_m.unwrap_or(DEFAULT_RELIEF_M.min(rows.len()));
    let weights = relief_weights(&features, &rows, &labels, m, cfg.seed)?;
    let selected = select_top_k(&weights, cfg.relief_k)?;
    let dir = prepare_out(cfg, Command::Relief)?;
    formats::write_text(&dir.join("relief_weights.csv"), &formats::write_weights(&weights))?;
    formats::write_text(&dir.join(SELECTED_FILE), &(selected.join("\n") + "\n"))?;
    Ok(format!("relief: selected {}\n", selected.join(",")))
}

/// LOW rows of every well except `held_out`.
fn training_rows(wells: &[LabeledWell], held_out: Option<&str>) -> Vec<Vec<f64>> {
    wells
        .iter()
        .filter(|w| Some(w.well_id.as_str()) != held_out)
        .flat_map(|w| {
            w.features
                .iter()
                .zip(&w.labels)
                .filter(|(_, l)| **l == ClassLabel::Low)
                .map(|(x, _)| x.clone())
        })
        .collect()
}

pub fn cmd_train(cfg: &RunConfig) -> Result<String> {
    let (features, wells) = load_labeled(cfg, Command::Train)?;
    if let Some(h) = &cfg.held_out {
        if !wells.iter().any(|w| &w.well_id == h) {
            return Err(satclass_core::Error::UnknownWell(h.clone()).into());
        }
    }
    let rows = training_rows(&wells, cfg.held_out.as_deref());
    let params = cfg.train_params(rows.len())?;
    let (mut model, report) = SvddModel::train(&rows, &params)?;
    model.set_feature_names(features)?;

    let dir = prepare_out(cfg, Command::Train)?;
    model_io::save(&model, &dir.join(MODEL_FILE))?;
    let text = format!(
        "n_train = {}\nc = {}\niterations = {}\nfinal_objective = {}\nn_support = {}\nn_bounded = {}\nconverged = {}\nr_squared = {}\n",
        rows.len(),
        params.c,
        report.iterations,
        report.final_objective,
        report.n_support,
        report.n_bounded,
        report.converged,
        model.r_squared()
    );
    formats::write_text(&dir.join("train_report.txt"), &text)?;
    if !report.converged {
        log::warn!("solver stopped at max_iter = {} before convergence", params.max_iter);
    }
    Ok(format!(
        "train: {} rows, {} support vectors, model at {}\n",
        rows.len(),
        report.n_support,
        dir.join(MODEL_FILE).display()
    ))
}

fn write_predictions(path: &Path, truth: &[ClassLabel], predicted: &[ClassLabel]) -> Result<()> {
    let mut out = String::from("truth,predicted\n");
    for (t, p) in truth.iter().zip(predicted) {
        let _ = writeln!(out, "{},{}", t.as_str(), p.as_str());
    }
    formats::write_text(path, &out)
}

pub fn predictions_file_name(well: &str) -> String {
    format!("predictions_{well}.csv")
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<String> {
    match &cfg.model {
        Some(path) => evaluate_saved_model(cfg, path),
        None => evaluate_lowo(cfg),
    }
}

/// Scores a saved model on the held-out well's leave-one-well-out test set.
fn evaluate_saved_model(cfg: &RunConfig, path: &Path) -> Result<String> {
    let held_out = required(&cfg.held_out, "held_out", Command::Evaluate)?;
    let model = model_io::load(path)?;
    let datasets =
        pipeline::load_integrated_dir(required(&cfg.data, "data", Command::Evaluate)?)?;
    let wells = pipeline::label_wells(&datasets, model.feature_names(), cfg.tau)?;
    let split = build_lowo_split(&wells, held_out)?;
    let predictions = split
        .test
        .iter()
        .map(|x| model.classify(x))
        .collect::<satclass_core::Result<Vec<_>>>()?;
    let confusion = ConfusionCounts::from_predictions(&split.test_labels, &predictions);
    let report = ExperimentReport {
        held_out_well: held_out.clone(),
        classifier_name: "SVDD".into(),
        g_metric: satclass_core::eval::g_metric(&confusion)?,
        execution_seconds: 0.0,
        confusion,
        hyperparameters: Default::default(),
    };
    let dir = prepare_out(cfg, Command::Evaluate)?;
    write_predictions(&dir.join(predictions_file_name(held_out)), &split.test_labels, &predictions)?;
    formats::write_text(&dir.join("reports.csv"), &formats::write_reports(std::slice::from_ref(&report)))?;
    Ok(format!("evaluate: well {held_out} g = {:.3}\n", report.g_metric))
}

fn evaluate_lowo(cfg: &RunConfig) -> Result<String> {
    let (_, wells) = load_labeled(cfg, Command::Evaluate)?;
    let held: Vec<String> = match &cfg.held_out {
        Some(h) => vec![h.clone()],
        None => wells.iter().map(|w| w.well_id.clone()).collect(),
    };
    let mut jobs = Vec::new();
    for h in &held {
        let n_train = training_rows(&wells, Some(h)).len();
        jobs.push((h.clone(), ClassifierSpec::Svdd(cfg.train_params(n_train)?)));
    }
    for h in &held {
        jobs.push((h.clone(), ClassifierSpec::NearestCentroid));
    }
    let results: Vec<Experiment> = experiment::run_all(&wells, &jobs, cfg.workers)?;
    let reports: Vec<ExperimentReport> = results.iter().map(|e| e.report.clone()).collect();

    let dir = prepare_out(cfg, Command::Evaluate)?;
    for e in results.iter().filter(|e| e.svdd.is_some()) {
        write_predictions(
            &dir.join(predictions_file_name(&e.report.held_out_well)),
            &e.test_labels,
            &e.predictions,
        )?;
    }
    formats::write_text(&dir.join("reports.csv"), &formats::write_reports(&reports))?;
    let g_table = comparison_table(&reports, TableMetric::GMetric)?;
    let t_table = comparison_table(&reports, TableMetric::Seconds)?;
    formats::write_text(&dir.join("table_g_metric.csv"), &g_table.to_csv())?;
    formats::write_text(&dir.join("table_g_metric.txt"), &g_table.to_text())?;
    formats::write_text(&dir.join("table_seconds.csv"), &t_table.to_csv())?;
    formats::write_text(&dir.join("table_seconds.txt"), &t_table.to_text())?;
    Ok(format!("{}\n{}", g_table.to_text(), t_table.to_text()))
}

pub fn cmd_classify_volume(cfg: &RunConfig) -> Result<String> {
    let model = model_io::load(required(&cfg.model, "model", Command::ClassifyVolume)?)?;
    let traces = pipeline::load_traces(required(&cfg.traces, "traces", Command::ClassifyVolume)?)?;
    let names = model.feature_names().to_vec();
    let volume = sweep::classify_volume_parallel(&model, &traces, &names, cfg.workers)?;

    let dir = prepare_out(cfg, Command::ClassifyVolume)?;
    let inlines = cfg
        .inlines
        .clone()
        .unwrap_or_else(|| volume.grid().inlines.clone());
    let formats_wanted: &[SectionFormat] = match cfg.section_format.as_str() {
        "csv" => &[SectionFormat::Csv],
        "pgm" => &[SectionFormat::Pgm],
        _ => &[SectionFormat::Csv, SectionFormat::Pgm],
    };
    let mut written = 0;
    for &il in &inlines {
        let section = extract_section(&volume, il)?;
        if section.is_empty() {
            continue;
        }
        for &f in formats_wanted {
            formats::export_section(&section, &dir, f)?;
            written += 1;
        }
    }
    let summary = format!(
        "inlines = {}\ncrosslines = {}\ntimes = {}\nhigh = {}\nlow = {}\nmissing = {}\n",
        volume.grid().inlines.len(),
        volume.grid().crosslines.len(),
        volume.grid().n_times,
        volume.count(Some(ClassLabel::High)),
        volume.count(Some(ClassLabel::Low)),
        volume.count(None),
    );
    formats::write_text(&dir.join("volume_summary.txt"), &summary)?;
    Ok(format!("classify-volume: {written} section files in {}\n", dir.display()))
}
