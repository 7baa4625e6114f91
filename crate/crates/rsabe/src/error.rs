//! Crate-wide error type.

use thiserror::Error;

/// Which game restriction a misbehaving adversary tripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictionRule {
    /// A private key for the same user was requested twice.
    DuplicateUser,
    /// A time-update key for the same time was requested twice.
    DuplicateTime,
    /// The challenge (S*, T*) is decryptable by keys issued in phase I.
    ChallengeCondition,
    /// A phase-II private-key query would decrypt the challenge.
    PhaseTwoKeyCondition,
    /// A phase-II time-update query would decrypt the challenge.
    PhaseTwoUpdateCondition,
    /// The two challenge plaintexts must differ.
    EqualChallengeMessages,
}

impl std::fmt::Display for RestrictionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RestrictionRule::DuplicateUser => "duplicate user in private-key query",
            RestrictionRule::DuplicateTime => "duplicate time in time-update query",
            RestrictionRule::ChallengeCondition => "challenge decryptable by phase-I queries",
            RestrictionRule::PhaseTwoKeyCondition => "phase-II private-key query decrypts challenge",
            RestrictionRule::PhaseTwoUpdateCondition => "phase-II time-update query decrypts challenge",
            RestrictionRule::EqualChallengeMessages => "challenge plaintexts are equal",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter search failed: {0}")]
    ParameterSearch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed encoding: {0}")]
    Codec(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("invalid policy: {0}")]
    Policy(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    PolicyParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("attribute set does not satisfy the access structure")]
    NotAuthorized,

    #[error("elimination hit a non-invertible pivot; nontrivial modulus factor {0}")]
    ModulusFactor(u128),

    #[error("user is revoked")]
    Revoked,

    #[error("no ciphertext sub-header matches the key time")]
    NoMatchingHeader,

    #[error("ciphertext time is later than the update-key time")]
    TimeTooEarly,

    #[error("time {0} out of range")]
    TimeOutOfRange(u64),

    #[error("user index {0} out of range")]
    UserOutOfRange(u64),

    #[error("restriction violated at query {index}: {rule}")]
    RestrictionViolated {
        index: usize,
        rule: RestrictionRule,
    },

    #[error("integrity tag mismatch")]
    TagMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
