use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the core can report. Variant names are stable and are
/// printed verbatim by the CLI (see [`Error::kind`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    MalformedLog(String),
    MalformedModel(String),
    InsufficientData(String),
    IncompleteTrace(String),
    DuplicateTrace(String),
    OutOfRange(String),
    TooShortForSpline(usize),
    NoOverlap(String),
    DegenerateLabels,
    BadK { k: usize, n: usize },
    DimError { expected: usize, got: usize },
    NumError(String),
    InfeasibleC { c: f64, n: usize },
    EmptyTraining,
    RangeError(String),
    DegenerateWell(String),
    UnknownWell(String),
    UndefinedMetric(String),
    TableError(String),
    NoSuchInline(i32),
    InvalidParameter(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedLog(_) => "MalformedLog",
            Error::MalformedModel(_) => "MalformedModel",
            Error::InsufficientData(_) => "InsufficientData",
            Error::IncompleteTrace(_) => "IncompleteTrace",
            Error::DuplicateTrace(_) => "DuplicateTrace",
            Error::OutOfRange(_) => "OutOfRange",
            Error::TooShortForSpline(_) => "TooShortForSpline",
            Error::NoOverlap(_) => "NoOverlap",
            Error::DegenerateLabels => "DegenerateLabels",
            Error::BadK { .. } => "BadK",
            Error::DimError { .. } => "DimError",
            Error::NumError(_) => "NumError",
            Error::InfeasibleC { .. } => "InfeasibleC",
            Error::EmptyTraining => "EmptyTraining",
            Error::RangeError(_) => "RangeError",
            Error::DegenerateWell(_) => "DegenerateWell",
            Error::UnknownWell(_) => "UnknownWell",
            Error::UndefinedMetric(_) => "UndefinedMetric",
            Error::TableError(_) => "TableError",
            Error::NoSuchInline(_) => "NoSuchInline",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedLog(m) => write!(f, "malformed log: {m}"),
            Error::MalformedModel(m) => write!(f, "malformed time-depth model: {m}"),
            Error::InsufficientData(m) => write!(f, "insufficient data: {m}"),
            Error::IncompleteTrace(m) => write!(f, "incomplete trace: {m}"),
            Error::DuplicateTrace(m) => write!(f, "duplicate trace: {m}"),
            Error::OutOfRange(m) => write!(f, "out of range: {m}"),
            Error::TooShortForSpline(n) => {
                write!(f, "series of length {n} is too short for a cubic spline (need 4)")
            }
            Error::NoOverlap(m) => write!(f, "no time overlap: {m}"),
            Error::DegenerateLabels => write!(f, "labels contain a single class"),
            Error::BadK { k, n } => write!(f, "k = {k} outside 1..={n}"),
            Error::DimError { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NumError(m) => write!(f, "numerical error: {m}"),
            Error::InfeasibleC { c, n } => {
                write!(f, "C = {c} with n = {n} gives C*n < 1; sum(alpha) = 1 is infeasible")
            }
            Error::EmptyTraining => write!(f, "training set is empty"),
            Error::RangeError(m) => write!(f, "value out of range: {m}"),
            Error::DegenerateWell(w) => write!(f, "training well {w} has no LOW rows"),
            Error::UnknownWell(w) => write!(f, "well {w} not found"),
            Error::UndefinedMetric(m) => write!(f, "g-metric undefined: {m}"),
            Error::TableError(m) => write!(f, "table error: {m}"),
            Error::NoSuchInline(il) => write!(f, "inline {il} not present in volume"),
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
        }
    }
}

impl core::error::Error for Error {}
