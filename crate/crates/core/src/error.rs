use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypergeometric pole: lower parameter {c} hits a non-positive integer at term {term}")]
    Pole { c: Box<Rational>, term: usize },

    #[error("series is not invertible: constant term is zero")]
    NotInvertible,

    #[error("exponent lattice 1/{requested} exceeds the configured bound 1/{bound}")]
    LatticeOverflow { requested: u64, bound: u64 },

    #[error("exponent {exp} is not on the lattice (1/{lattice})Z")]
    OffLattice { exp: Box<Rational>, lattice: u64 },

    #[error("ramp exponents differ by a non-integer: {0} vs {1}")]
    RampMismatch(Box<Rational>, Box<Rational>),

    #[error("z-window [{min}, {max}] clipped a needed term at z^{exp}")]
    WindowClipped { min: i64, max: i64, exp: i64 },

    #[error("oracle self-gate failed: {0}")]
    SelfGate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
