use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate code: {0}")]
    DegenerateCode(String),
    #[error("degenerate theta: {0} produces coincident points")]
    DegenerateTheta(f64),
    #[error("degenerate span: code does not span R^4")]
    DegenerateSpan,
    #[error("potential {potential} is undefined at t = {t}")]
    Domain { potential: String, t: f64 },
    #[error("derivative order {0} is not supported (expected 0, 1 or 2)")]
    Order(u8),
    #[error("size mismatch: {0} vs {1} points")]
    SizeMismatch(usize, usize),
    #[error("non-unit scalar {0} (modulus must be 1)")]
    NonUnit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("no sign change on [{0}, {1}]")]
    NoSignChange(f64, f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
