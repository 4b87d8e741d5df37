//! Plain-text model files.
//!
//! ```text
//! satclass-svdd-model
//! format_version = 1
//! kernel = gaussian
//! width = 3
//! c = 0.005
//! r_squared = 0.93
//! self_term = 0.07
//! features = impedance,envelope,sweetness
//! mean = 0.1,2.5,-1
//! std = 1,0.5,2
//! n_support = 2
//! sv = <alpha>,<x1>,<x2>,<x3>
//! sv = ...
//! end
//! ```
//!
//! Floats use shortest round-trip formatting, so a loaded model is
//! bit-identical to the saved one.

use std::fmt::Write as _;
use std::path::Path;

use satclass_core::svdd::Standardization;
use satclass_core::{KernelConfig, KernelFamily, SvddModel};

use crate::error::{Error, Result};
use crate::formats::{read_text, write_text};

pub const MAGIC: &str = "satclass-svdd-model";
pub const FORMAT_VERSION: u32 = 1;

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub fn to_text(model: &SvddModel) -> String {
    let mut out = format!("{MAGIC}\nformat_version = {FORMAT_VERSION}\n");
    let k = model.kernel();
    let _ = writeln!(out, "kernel = {}", k.family().name());
    if let Some(w) = k.width() {
        let _ = writeln!(out, "width = {w}");
    }
    if let Some(a) = k.alpha() {
        let _ = writeln!(out, "alpha = {a}");
    }
    if let Some(d) = k.degree() {
        let _ = writeln!(out, "degree = {d}");
    }
    let _ = writeln!(out, "c = {}", model.c());
    let _ = writeln!(out, "r_squared = {}", model.r_squared());
    let _ = writeln!(out, "self_term = {}", model.self_term());
    let _ = writeln!(out, "features = {}", model.feature_names().join(","));
    let _ = writeln!(out, "mean = {}", join(&model.scaling().mean));
    let _ = writeln!(out, "std = {}", join(&model.scaling().std));
    let _ = writeln!(out, "n_support = {}", model.alphas().len());
    for (a, sv) in model.alphas().iter().zip(model.support_vectors()) {
        let _ = writeln!(out, "sv = {a},{}", join(sv));
    }
    out.push_str("end\n");
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::ModelFormat(msg.into())
}

fn floats(key: &str, s: &str) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad(format!("{key}: `{v}` is not a number"))))
        .collect()
}

pub fn from_text(text: &str) -> Result<SvddModel> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some(MAGIC) {
        return Err(bad(format!("missing `{MAGIC}` header")));
    }

    let mut fields: Vec<(&str, &str)> = Vec::new();
    let mut svs: Vec<&str> = Vec::new();
    let mut ended = false;
    for line in lines.by_ref() {
        if line == "end" {
            ended = true;
            break;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("expected `key = value`, found `{line}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "sv" {
            svs.push(v);
        } else if fields.iter().any(|(f, _)| *f == k) {
            return Err(bad(format!("duplicate field {k}")));
        } else {
            fields.push((k, v));
        }
    }
    if !ended {
        return Err(bad("truncated: no `end` marker"));
    }
    if lines.next().is_some() {
        return Err(bad("content after `end`"));
    }

    let get = |k: &str| fields.iter().find(|(f, _)| *f == k).map(|(_, v)| *v);
    let req = |k: &str| get(k).ok_or_else(|| bad(format!("missing field {k}")));
    let num = |k: &str| -> Result<f64> {
        req(k)?.parse::<f64>().map_err(|_| bad(format!("{k} is not a number")))
    };

    let version: u32 = req("format_version")?
        .parse()
        .map_err(|_| bad("format_version is not an integer"))?;
    if version != FORMAT_VERSION {
        return Err(bad(format!("unsupported format_version {version}")));
    }

    let kernel = match KernelFamily::parse(req("kernel")?)? {
        KernelFamily::Gaussian => match (get("width"), get("alpha")) {
            (Some(_), None) => KernelConfig::gaussian(num("width")?)?,
            (None, Some(_)) => KernelConfig::gaussian_alpha(num("alpha")?)?,
            _ => return Err(bad("gaussian kernel needs exactly one of width, alpha")),
        },
        KernelFamily::Erbf => KernelConfig::erbf(num("width")?)?,
        KernelFamily::Polynomial => KernelConfig::polynomial(
            req("degree")?.parse().map_err(|_| bad("degree is not an integer"))?,
        )?,
    };

    let names: Vec<String> = match req("features")? {
        "" => Vec::new(),
        s => s.split(',').map(|n| n.trim().to_string()).collect(),
    };
    let scaling = Standardization {
        mean: floats("mean", req("mean")?)?,
        std: floats("std", req("std")?)?,
    };
    let n_support: usize = req("n_support")?
        .parse()
        .map_err(|_| bad("n_support is not an integer"))?;
    if svs.len() != n_support {
        return Err(bad(format!("n_support = {n_support} but {} sv rows", svs.len())));
    }
    let mut alphas = Vec::with_capacity(n_support);
    let mut vectors = Vec::with_capacity(n_support);
    for row in svs {
        let mut v = floats("sv", row)?;
        if v.len() != names.len() + 1 {
            return Err(bad(format!(
                "sv row has {} values, expected {}",
                v.len(),
                names.len() + 1
            )));
        }
        alphas.push(v.remove(0));
        vectors.push(v);
    }
    if scaling.mean.len() != names.len() || scaling.std.len() != names.len() {
        return Err(bad("mean/std length does not match features"));
    }

    Ok(SvddModel::from_parts(
        kernel,
        vectors,
        alphas,
        num("r_squared")?,
        num("c")?,
        num("self_term")?,
        names,
        scaling,
    )?)
}

pub fn save(model: &SvddModel, path: &Path) -> Result<()> {
    write_text(path, &to_text(model))
}

pub fn load(path: &Path) -> Result<SvddModel> {
    from_text(&read_text(path)?)
}
