//! Formulas, permutations, contexts and sequents.

mod formula;
mod parse;
mod perm;
mod sequent;

use std::fmt;

use thiserror::Error;

pub use formula::Formula;
pub use parse::{parse, parse_context, parse_formula, parse_sequent, Parsed};
pub use perm::Permutation;
pub use sequent::{Context, Sequent};

/// The number `n >= 2` of truth values (dimensions).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub const TWO: Dimension = Dimension(2);

    pub fn new(n: usize) -> Result<Self, SyntaxError> {
        if n < 2 || n > u8::MAX as usize {
            return Err(SyntaxError::InvalidDimension(n));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// The dimension indices `1..=n`.
    pub fn indices(self) -> std::ops::RangeInclusive<usize> {
        1..=self.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("q expects {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("{0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),
    #[error("constant e{index} is out of range for n = {n}")]
    ConstantOutOfRange { index: usize, n: usize },
    #[error("index {index} is out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0} (need n >= 2)")]
    InvalidDimension(usize),
}
