use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incomparable levels {0} and {1}")]
    LevelMismatch(u32, u32),

    #[error("objects live over different relation lattices")]
    LatticeMismatch,

    #[error("pullback expects a level-1 divisor, got level {0}")]
    PullbackLevel(u32),

    #[error("not elliptic: A(pz) != A(z) under the given relation lattice")]
    NotElliptic,

    #[error("relation lattice is not the generic lattice for case {0}")]
    NonGenericLattice(String),

    #[error("constraint search needs multiplicity-1 support, found multiplicity {0}")]
    Multiplicity(i64),

    #[error("divisor degree {needed} exceeds the enumeration budget {budget}")]
    BudgetExceeded { needed: i64, budget: usize },

    #[error("search aborted after {0} nodes")]
    SearchLimit(u64),

    #[error("divisor of b is empty")]
    EmptyDivisor,

    #[error("pole hit at {0}")]
    Pole(String),

    #[error("parameter window violated: {0}")]
    Window(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),
}
