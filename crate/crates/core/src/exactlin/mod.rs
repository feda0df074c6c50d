//! Exact rational arithmetic and linear solving over Q.

mod rational;
mod system;

pub use rational::{JsonInt, Rational};
pub use system::{Analysis, Certificate, LinearSystem, Row, SolveResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("row {row} has {found} coefficients, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
