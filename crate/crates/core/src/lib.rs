//! Exact verification kernel for Virasoro minimal-model and level-k sl2
//! character identities.

pub mod characters;
pub mod error;
pub mod hypergeom;
pub mod linalg;
pub mod minimal_model;
pub mod qseries;
pub mod rational;
pub mod report;
pub mod sl2;
pub mod straightening;
pub mod suites;

pub use error::{Error, Result};
pub use rational::Rational;

/// A sign label `+` or `-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// The sign of a unit step `+1` / `-1`.
    pub fn from_step(d: i64) -> Self {
        if d > 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}
