use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("invalid modulus {0} (must be >= 1)")]
    InvalidModulus(i64),
    #[error("invalid qudit dimension {0} (must be >= 2)")]
    InvalidDimension(u32),
    #[error("operators live on different qudit systems")]
    SystemMismatch,
    #[error("unknown slot `{0}`")]
    UnknownSlot(String),
    #[error("duplicate slot name `{0}`")]
    DuplicateSlot(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("phase {num}/{den} is not representable with phase modulus {modulus}")]
    PhaseNotRepresentable { num: i64, den: i64, modulus: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid gauge group: {0}")]
    InvalidGaugeGroup(String),
    #[error("torus {lx}x{ly} too small (needs at least {needed} in each direction)")]
    TorusTooSmall { lx: usize, ly: usize, needed: usize },
    #[error("operator is not in the group: {0}")]
    NotInGroup(String),
    #[error("gauge-out target is not a string of the expected kind: {0}")]
    NotAString(String),
    #[error("operator does not commute with the code: {0}")]
    NotALogical(String),
    #[error("invalid theory data: {0}")]
    InvalidTheory(String),
    #[error("theory is not modular: {0}")]
    NotModular(String),
    #[error("theory admits no Lagrangian subgroup: {0}")]
    NoLagrangian(String),
    #[error("anyon extraction failed: {0}")]
    Extraction(String),
    #[error("unknown catalog code `{0}`")]
    UnknownCode(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TorusTooSmall { .. } => 4,
            Error::InvalidGaugeGroup(_) | Error::Extraction(_) => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
