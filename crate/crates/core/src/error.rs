use thiserror::Error;

/// Domain errors shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is zero and has no square class")]
    DegenerateColor,
    #[error("element is not a square")]
    NotASquare,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve roots are not pairwise distinct")]
    SingularCurve,
    #[error("base point has y = 0 (2-torsion)")]
    TwoTorsionBasePoint,
    #[error("translated root e_i - x0 vanishes")]
    SingularTranslate,
    #[error("point maps to the quartic points at infinity (translated x = 0)")]
    MapsToInfinity,
    #[error("quartic point with u = 0 must have v = 0")]
    MapsToBasePointPair,
    #[error("quartic model has no recorded Weierstrass provenance")]
    MissingProvenance,
    #[error("input point is 2-torsion")]
    TwoTorsionInput,
    #[error("curve has bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("quartic is not squarefree modulo p = {0}")]
    BadReductionF(u64),
    #[error("p = {0} divides a coordinate denominator")]
    BadPrimeForPoint(u64),
    #[error("u collides with a root of f")]
    TwoTorsionHit,
    #[error("full {m}-torsion is not rational over F_{p}")]
    TorsionNotRational { m: u64, p: u64 },
    #[error("{0} is not an odd prime below 2^63")]
    InvalidModulus(u64),
    #[error("invalid coloring spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("relation search over {points} points with bound {bound} exceeds the work limit")]
    SearchTooLarge { points: usize, bound: i64 },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateColor => "DegenerateColor",
            Error::NotASquare => "NotASquare",
            Error::NotOnCurve => "NotOnCurve",
            Error::SingularCurve => "SingularCurve",
            Error::TwoTorsionBasePoint => "TwoTorsionBasePoint",
            Error::SingularTranslate => "SingularTranslate",
            Error::MapsToInfinity => "MapsToInfinity",
            Error::MapsToBasePointPair => "MapsToBasePointPair",
            Error::MissingProvenance => "MissingProvenance",
            Error::TwoTorsionInput => "TwoTorsionInput",
            Error::BadReduction(_) => "BadReduction",
            Error::BadReductionF(_) => "BadReductionF",
            Error::BadPrimeForPoint(_) => "BadPrimeForPoint",
            Error::TwoTorsionHit => "TwoTorsionHit",
            Error::TorsionNotRational { .. } => "TorsionNotRational",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "Parse",
            Error::SearchTooLarge { .. } => "SearchTooLarge",
            Error::Internal(_) => "InternalError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
