use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),

    #[error("modulus {0} is even")]
    EvenModulus(u64),

    #[error("value {0} is outside the 64-bit working range")]
    RangeExceeded(u128),

    #[error("unit group modulo {0} is not cyclic")]
    NonCyclicGroup(u64),

    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(i64, u64),

    #[error("{x} is not a power of {generator} modulo {modulus}")]
    NotInSubgroup { x: u64, generator: u64, modulus: u64 },

    #[error("{what}: requested {requested}, budget {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("character is principal")]
    PrincipalCharacter,

    #[error("character modulo {0} is not primitive")]
    NonPrimitive(u64),

    #[error("character modulo {0} is odd")]
    OddCharacter(u64),

    #[error("coefficient at n = {n} has modulus {modulus} > 1")]
    CoefficientTooLarge { n: i64, modulus: f64 },

    #[error("no prime congruent to {residue} mod {modulus} below {ceiling}")]
    SearchExhausted {
        residue: u64,
        modulus: u64,
        ceiling: u64,
    },

    #[error("product character is principal")]
    DegenerateProduct,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable machine-readable category, used by the CLI on stderr.
    pub fn category(&self) -> &'static str {
        match self {
            Error::NonCoprimeModuli(..) => "NonCoprimeModuli",
            Error::EvenModulus(_) => "EvenModulus",
            Error::RangeExceeded(_) => "RangeExceeded",
            Error::NonCyclicGroup(_) => "NonCyclicGroup",
            Error::NotAUnit(..) => "NotAUnit",
            Error::NotInSubgroup { .. } => "NotInSubgroup",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::PrincipalCharacter => "PrincipalCharacter",
            Error::NonPrimitive(_) => "NonPrimitive",
            Error::OddCharacter(_) => "OddCharacter",
            Error::CoefficientTooLarge { .. } => "CoefficientTooLarge",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::DegenerateProduct => "DegenerateProduct",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }

    pub(crate) fn budget(what: &'static str, requested: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::BudgetExceeded {
            what,
            requested: requested.into(),
            limit: limit.into(),
        }
    }
}
