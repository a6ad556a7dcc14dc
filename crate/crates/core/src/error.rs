use thiserror::Error;

use crate::xarith::XArithError;

/// Every failure an estimator, source or experiment can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("unknown source id `{0}`")]
    UnknownId(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("index sequence is not proper: {0}")]
    NotProper(String),
    #[error("no usable coefficient in window [{0}, {1}]")]
    EmptyWindow(u64, u64),
    #[error("degenerate least-squares fit: {0}")]
    DegenerateFit(String),
    #[error("rho = {0} is outside (0, inf)")]
    RhoOutOfRange(f64),
    #[error("radius grid too small: {0}")]
    GridTooSmall(String),
    #[error("g#(r) <= e on the whole grid")]
    NotInAsymptoticRegime,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("recentered series for n = {n} not certified after {terms} terms")]
    NotCertified { n: u64, terms: usize },
    #[error("value for n = {n} indistinguishable from zero at the certified tolerance")]
    ZeroAmbiguous { n: u64 },
    #[error("every term in the window was skipped")]
    AllSkipped,
    #[error(transparent)]
    Arith(#[from] XArithError),
}

impl GrowthError {
    /// Stable error name for reports.
    pub fn name(&self) -> &'static str {
        match self {
            GrowthError::UnknownId(_) => "UnknownId",
            GrowthError::BadParam(_) => "BadParam",
            GrowthError::NotProper(_) => "NotProper",
            GrowthError::EmptyWindow(..) => "EmptyWindow",
            GrowthError::DegenerateFit(_) => "DegenerateFit",
            GrowthError::RhoOutOfRange(_) => "RhoOutOfRange",
            GrowthError::GridTooSmall(_) => "GridTooSmall",
            GrowthError::NotInAsymptoticRegime => "NotInAsymptoticRegime",
            GrowthError::DomainError(_) => "DomainError",
            GrowthError::NotCertified { .. } => "NotCertified",
            GrowthError::ZeroAmbiguous { .. } => "ZeroAmbiguous",
            GrowthError::AllSkipped => "AllSkipped",
            GrowthError::Arith(_) => "OverflowDomain",
        }
    }
}
