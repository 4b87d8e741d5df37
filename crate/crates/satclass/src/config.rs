//! Run configuration: a flat `key = value` file overlaid by command-line
//! flags.
//!
//! ```text
//! # comments start with '#'
//! kernel = gaussian
//! width = 3.0
//! c = 0.005
//! held_out = B
//! ```
//!
//! Keys may be written with `-` or `_`. Unknown keys are rejected.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use satclass_core::{KernelConfig, KernelFamily, TrainParams};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::synth::SynthSpec;

/// Fallback SVDD cap, used when `c` is not given.
pub const DEFAULT_C: f64 = 0.005;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub wells: Option<PathBuf>,
    pub traces: Option<PathBuf>,
    /// Directory of `integrated_<well>.csv` files written by `prep`.
    pub data: Option<PathBuf>,
    pub model: Option<PathBuf>,
    /// File listing one selected feature per line, as written by `relief`.
    pub selected: Option<PathBuf>,
    pub features: Option<Vec<String>>,
    pub kernel: KernelFamily,
    pub width: Option<f64>,
    pub alpha: Option<f64>,
    pub degree: Option<u32>,
    pub c: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub tau: f64,
    pub relief_m: Option<usize>,
    pub relief_k: usize,
    pub held_out: Option<String>,
    pub seed: u64,
    pub out: PathBuf,
    pub workers: usize,
    pub inlines: Option<Vec<i32>>,
    pub section_format: String,
    pub synth: SynthSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = TrainParams::default();
        Self {
            wells: None,
            traces: None,
            data: None,
            model: None,
            selected: None,
            features: None,
            kernel: KernelFamily::Gaussian,
            width: None,
            alpha: None,
            degree: None,
            c: None,
            tol: params.tol,
            max_iter: params.max_iter,
            tau: 0.7,
            relief_m: None,
            relief_k: 3,
            held_out: None,
            seed: SynthSpec::default().seed,
            out: PathBuf::from("out"),
            workers: 1,
            inlines: None,
            section_format: "both".into(),
            synth: SynthSpec::default(),
        }
    }
}

/// Every key accepted in config files and as `--<key>` flags.
pub const KEYS: &[&str] = &[
    "wells",
    "traces",
    "data",
    "model",
    "selected",
    "features",
    "kernel",
    "width",
    "alpha",
    "degree",
    "c",
    "tol",
    "max_iter",
    "tau",
    "relief_m",
    "relief_k",
    "held_out",
    "seed",
    "out",
    "workers",
    "inlines",
    "section_format",
    "n_wells",
    "imbalance_ratio",
    "n_features",
    "n_informative",
    "cluster_separation",
    "noise_std",
    "n_inlines",
    "n_crosslines",
    "trace_samples",
    "layer_samples",
];

/// Keys that change how a command runs but not what it produces.
const EXECUTION_ONLY: &[&str] = &["out", "workers"];

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse `{v}`")))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| value(key, s))
        .collect()
}

impl RunConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let v = v.trim();
        let k = key.as_str();
        match k {
            "wells" => self.wells = Some(v.into()),
            "traces" => self.traces = Some(v.into()),
            "data" => self.data = Some(v.into()),
            "model" => self.model = Some(v.into()),
            "selected" => self.selected = Some(v.into()),
            "features" => self.features = Some(list(k, v)?),
            "kernel" => self.kernel = KernelFamily::parse(v)?,
            "width" => self.width = Some(value(k, v)?),
            "alpha" => self.alpha = Some(value(k, v)?),
            "degree" => self.degree = Some(value(k, v)?),
            "c" => self.c = Some(value(k, v)?),
            "tol" => self.tol = value(k, v)?,
            "max_iter" => self.max_iter = value(k, v)?,
            "tau" => self.tau = value(k, v)?,
            "relief_m" => self.relief_m = Some(value(k, v)?),
            "relief_k" => self.relief_k = value(k, v)?,
            "held_out" => self.held_out = Some(v.to_string()),
            "seed" => self.seed = value(k, v)?,
            "out" => self.out = v.into(),
            "workers" => self.workers = value(k, v)?,
            "inlines" => self.inlines = Some(list(k, v)?),
            "section_format" => match v {
                "csv" | "pgm" | "both" => self.section_format = v.to_string(),
                _ => return Err(Error::Config(format!("section_format must be csv, pgm or both, got `{v}`"))),
            },
            "n_wells" => self.synth.n_wells = value(k, v)?,
            "imbalance_ratio" => self.synth.imbalance_ratio = value(k, v)?,
            "n_features" => self.synth.n_features = value(k, v)?,
            "n_informative" => self.synth.n_informative = value(k, v)?,
            "cluster_separation" => self.synth.cluster_separation = value(k, v)?,
            "noise_std" => self.synth.noise_std = value(k, v)?,
            "n_inlines" => self.synth.n_inlines = value(k, v)?,
            "n_crosslines" => self.synth.n_crosslines = value(k, v)?,
            "trace_samples" => self.synth.trace_samples = value(k, v)?,
            "layer_samples" => self.synth.layer_samples = value(k, v)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies a config file's text. Relative paths stay relative to the
    /// working directory.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(&crate::formats::read_text(path)?)?;
        Ok(cfg)
    }

    /// Kernel built from `kernel` plus `width`/`alpha`/`degree`.
    pub fn kernel_config(&self) -> Result<KernelConfig> {
        Ok(match self.kernel {
            KernelFamily::Gaussian => match (self.width, self.alpha) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config("give either width or alpha, not both".into()))
                }
                (None, Some(a)) => KernelConfig::gaussian_alpha(a)?,
                (w, None) => KernelConfig::gaussian(w.unwrap_or(3.0))?,
            },
            KernelFamily::Erbf => KernelConfig::erbf(self.width.unwrap_or(3.0))?,
            KernelFamily::Polynomial => KernelConfig::polynomial(self.degree.unwrap_or(2))?,
        })
    }

    /// Training parameters for `n` training rows. An unset `c` defaults to
    /// 0.005, raised to `1/n` with a warning when that is infeasible; an
    /// explicit `c` is used as given.
    pub fn train_params(&self, n: usize) -> Result<TrainParams> {
        let c = match self.c {
            Some(c) => c,
            None if n > 0 && DEFAULT_C * (n as f64) < 1.0 => {
                let raised = 1.0 / n as f64;
                log::warn!("only {n} training rows; raising C from {DEFAULT_C} to {raised}");
                raised
            }
            None => DEFAULT_C,
        };
        Ok(TrainParams {
            kernel: self.kernel_config()?,
            c,
            tol: self.tol,
            max_iter: self.max_iter,
            standardize: true,
        })
    }

    /// Canonical `key = value` listing of every field, in [`KEYS`] order.
    pub fn canonical(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(String::new, T::to_string)
        }
        fn path(v: &Option<PathBuf>) -> String {
            v.as_ref().map_or_else(String::new, |p| p.display().to_string())
        }
        fn join<T: ToString>(v: &Option<Vec<T>>) -> String {
            v.as_ref().map_or_else(String::new, |xs| {
                xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
            })
        }
        let s = &self.synth;
        let values = [
            path(&self.wells),
            path(&self.traces),
            path(&self.data),
            path(&self.model),
            path(&self.selected),
            join(&self.features),
            self.kernel.name().to_string(),
            opt(&self.width),
            opt(&self.alpha),
            opt(&self.degree),
            opt(&self.c),
            self.tol.to_string(),
            self.max_iter.to_string(),
            self.tau.to_string(),
            opt(&self.relief_m),
            self.relief_k.to_string(),
            opt(&self.held_out),
            self.seed.to_string(),
            self.out.display().to_string(),
            self.workers.to_string(),
            join(&self.inlines),
            self.section_format.clone(),
            s.n_wells.to_string(),
            s.imbalance_ratio.to_string(),
            s.n_features.to_string(),
            s.n_informative.to_string(),
            s.cluster_separation.to_string(),
            s.noise_std.to_string(),
            s.n_inlines.to_string(),
            s.n_crosslines.to_string(),
            s.trace_samples.to_string(),
            s.layer_samples.to_string(),
        ];
        let mut out = String::new();
        for (k, v) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// SHA-256 of the canonical listing, ignoring `out` and `workers`.
    pub fn hash(&self) -> String {
        let text: String = self
            .canonical()
            .lines()
            .filter(|l| !EXECUTION_ONLY.iter().any(|k| l.starts_with(&format!("{k} ="))))
            .map(|l| format!("{l}\n"))
            .collect();
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn synth_spec(&self) -> SynthSpec {
        SynthSpec {
            seed: self.seed,
            tau: self.tau,
            ..self.synth.clone()
        }
    }
}
