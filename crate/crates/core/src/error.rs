use thiserror::Error;

/// Errors raised by arithmetic, set membership, the bijection registry and
/// the verification harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("working precision must be at least 4, got {0}")]
    PrecisionTooSmall(u32),
    #[error("p^N does not fit the 63-bit digit window (p = {p}, N = {n})")]
    PrecisionOverflow { p: u32, n: u32 },
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by an element indistinguishable from zero")]
    DivisionUndecidable,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no digit of the result can be certified")]
    PrecisionExhausted,
    #[error("valuation undecidable: element indistinguishable from zero")]
    ValuationUndecidable,
    #[error("input not in domain: {0}")]
    NotInDomain(String),
    #[error("exponent {0} is divisible by the characteristic; Hensel lifting does not apply")]
    WildExponent(u32),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("not in the image of the Frobenius pairing (nonzero coefficient at t^{0})")]
    NotInImage(i64),
    #[error("modulus is not irreducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("enumeration of {0} representatives exceeds the cap")]
    EnumerationOverflow(u64),
    #[error("coset grouping did not stabilize ({0}); the subgroup has infinite index")]
    CosetIndexOverflow(String),
    #[error("membership undecidable at the available precision")]
    UndecidableMembership,
    #[error("the excluded point has no image")]
    ExcludedPoint,
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("map `{map}` is not available for {field}")]
    UnsupportedField { map: String, field: String },
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("term t^{0} lies beyond the O-tail")]
    InconsistentPrecision(i64),
    #[error("pieces overlap: {0}")]
    PartitionViolation(String),
    #[error("relation cites `{0}`, which has not been verified")]
    UnverifiedProvenance(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("insufficient relations: missing {0}")]
    InsufficientRelations(String),
}

pub type Result<T> = std::result::Result<T, Error>;
