use thiserror::Error;

/// Error raised while reading a knot expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("T({p},{q}) is not a knot: gcd({p},{q}) = {gcd} != 1")]
    NotCoprime { p: u64, q: u64, gcd: u64 },
    #[error("torus indices must be at least 1, got T({p},{q})")]
    IndexTooSmall { p: u64, q: u64 },
    #[error("value {value} exceeds the bound {bound}")]
    OutOfRange { value: u64, bound: u64 },
    #[error("unknown named knot `{0}`")]
    UnknownName(String),
}

/// Error raised by registry loading and merging.
#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("cannot read registry {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed registry: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid registry entry: {0}")]
    Invalid(String),
}

/// Error raised while computing invariants or classifying points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unresolved named knot `{0}`")]
    Unresolved(String),
    #[error(
        "T({p},{q}) needs the Upsilon base value for T({a},{}), which is extrapolated; \
         pass --allow-extrapolated-upsilon-base to accept it",
        a + 1
    )]
    ExtrapolatedUpsilon { p: u64, q: u64, a: u64 },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("query box too large: {points} points exceeds the cap of {cap}")]
    BoxTooLarge { points: u128, cap: u128 },
    #[error("invalid query box: {0}")]
    InvalidBox(String),
    #[error("outside the supported range: {0}")]
    OutOfScope(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
