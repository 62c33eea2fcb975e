use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("operands live in different ambient rings")]
    AmbientMismatch,
    #[error("substitution map has no image for variable `{0}`")]
    SubstitutionDomainError(String),
    #[error("reduction budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("colon by the zero element")]
    ZeroColonDivisor,
    #[error("operation undefined on the zero ring")]
    ZeroRing,
    #[error("ideal is the unit ideal")]
    UnitIdeal,
    #[error("prime does not contain the annihilator of the module")]
    OutsideSupport,
    #[error("no polynomial-grade witness found: {0}")]
    WitnessSearchFailed(String),
    #[error("exponent denominator {denominator} needs level {needed}, have {level}")]
    LevelTooLow { denominator: u64, needed: u32, level: u32 },
    #[error("group order {order} is zero in characteristic {characteristic}")]
    BadCharacteristic { order: usize, characteristic: u32 },
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("name `{0}` is already bound")]
    DuplicateName(String),
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("unsupported field `{0}`: only QQ and prime fields GF(p) are available")]
    UnsupportedField(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
