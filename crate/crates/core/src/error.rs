//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors produced by the core engine.
///
/// Resource-limit variants ([`Error::SearchSpaceTooLarge`],
/// [`Error::EnumerationTooLarge`], [`Error::SubsetCapExceeded`]) carry the
/// computed size so callers can report how far over budget a request was.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A chain carrier must have at least two elements.
    InvalidSize { size: usize },
    /// An element index lies outside a carrier or domain.
    InvalidElement { index: usize, size: usize },
    /// A chain table has the wrong shape or out-of-range entries.
    MalformedChain { reason: String },
    /// Formula text could not be parsed; `offset` is a byte position.
    Parse { offset: usize, message: String },
    /// A symbol was redeclared with a different arity, or two structures
    /// disagree on their signature.
    SignatureMismatch { reason: String },
    /// A symbol was applied to the wrong number of arguments.
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    /// A reserved word was used as a symbol or variable name.
    ReservedName { name: String },
    /// Formula enumeration exceeded the configured ceiling.
    EnumerationTooLarge { count: u128, ceiling: u128 },
    /// Structure enumeration would exceed the candidate ceiling.
    SearchSpaceTooLarge { count: u128, ceiling: u128 },
    /// A subset search over a formula set exceeded the configured cap.
    SubsetCapExceeded { size: usize, cap: usize },
    /// A free variable had no binding in the evaluation.
    UnboundVariable { name: String },
    /// An atom used a predicate the structure does not interpret.
    UnknownPredicate { name: String },
    /// A term used a function or constant the structure does not interpret.
    UnknownFunction { name: String },
    /// An operation restricted to sentences received an open formula.
    NotASentence { formula: String },
    /// One structure is required to be a substructure of another and is not.
    NotASubstructure { reason: String },
    /// A sequence of structures violates the chain-of-models invariant.
    NotAChain { reason: String },
    /// Henkin completion requires a consistent starting tableau.
    InconsistentInput,
    /// Henkin completion ran out of fresh witness constants.
    FreshConstantsExhausted,
    /// The given pair is not a type of the reference tableau.
    NotAType,
    /// A realizing extension exists in principle but not within the space.
    BoundsExhausted,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSize { size } => {
                write!(f, "invalid chain size {size}: carrier needs at least 2 elements")
            }
            Error::InvalidElement { index, size } => {
                write!(f, "element index {index} out of range (size {size})")
            }
            Error::MalformedChain { reason } => write!(f, "malformed chain: {reason}"),
            Error::Parse { offset, message } => {
                write!(f, "syntax error at offset {offset}: {message}")
            }
            Error::SignatureMismatch { reason } => write!(f, "signature mismatch: {reason}"),
            Error::ArityMismatch {
                name,
                expected,
                found,
            } => write!(f, "symbol {name} expects {expected} argument(s), got {found}"),
            Error::ReservedName { name } => write!(f, "{name} is a reserved word"),
            Error::EnumerationTooLarge { count, ceiling } => {
                write!(f, "enumeration too large: {count} formulas exceed ceiling {ceiling}")
            }
            Error::SearchSpaceTooLarge { count, ceiling } => write!(
                f,
                "search space too large: {count} candidate structures exceed ceiling {ceiling}"
            ),
            Error::SubsetCapExceeded { size, cap } => {
                write!(f, "subset search over {size} formulas exceeds cap {cap}")
            }
            Error::UnboundVariable { name } => write!(f, "unbound variable {name}"),
            Error::UnknownPredicate { name } => write!(f, "unknown predicate {name}"),
            Error::UnknownFunction { name } => write!(f, "unknown function or constant {name}"),
            Error::NotASentence { formula } => {
                write!(f, "not a sentence (has free variables): {formula}")
            }
            Error::NotASubstructure { reason } => write!(f, "not a substructure: {reason}"),
            Error::NotAChain { reason } => write!(f, "not a chain of models: {reason}"),
            Error::InconsistentInput => write!(f, "input tableau is inconsistent"),
            Error::FreshConstantsExhausted => write!(f, "fresh witness constants exhausted"),
            Error::NotAType => write!(f, "pair is not a type of the reference tableau"),
            Error::BoundsExhausted => {
                write!(f, "no realizing extension within the search space bounds")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
