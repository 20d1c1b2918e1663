use thiserror::Error;

use crate::qz::FracQZ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// `F(x) = mult(x) + mult(-x)` is not constant on the order-`order` class.
    #[error("not Galois-stable on the order-{order} class: {}", fmt_values(.values))]
    Unstable {
        order: u64,
        values: Vec<(FracQZ, u32)>,
    },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("no strategy applies to {0}")]
    ClassificationFailure(String),

    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("fixture error: {0}")]
    Fixture(String),
}

fn fmt_values(values: &[(FracQZ, u32)]) -> String {
    values
        .iter()
        .map(|(x, f)| format!("F({x})={f}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
