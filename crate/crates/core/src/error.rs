use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("form vanishes identically mod {0}")]
    ZeroModP(u64),
    #[error("not a ring class (content {0})")]
    NotARing(i64),
    #[error("the zero character has no Whittaker function of this shape")]
    ZeroCharacter,
    #[error("evaluation point is a zero of h_w")]
    AtZero,
    #[error("division not exact: {0}")]
    InexactDivision(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
