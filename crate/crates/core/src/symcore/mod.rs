//! Exact multivariate rational functions over ℚ.

mod expr;
mod gcd;
pub mod linalg;
mod parse;
mod poly;

pub use expr::{ArithOp, Expr, RationalPoint};
pub use gcd::gcd;
pub use parse::parse;
pub use poly::{var, Monomial, Poly, VarName};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    ZeroDenominator,
    #[error("expression is not polynomial in `{0}`")]
    NonPolynomial(String),
}

/// Parse text that must denote a polynomial.
pub fn parse_poly(text: &str) -> Result<Poly, ExprError> {
    let e = parse(text)?;
    if !e.is_polynomial() {
        return Err(ExprError::Parse { pos: 0, msg: "expected a polynomial".into() });
    }
    Ok(e.numer().clone())
}

/// Point with integer coordinates, for tests and fixtures.
pub fn point(pairs: &[(&str, i64)]) -> RationalPoint {
    pairs
        .iter()
        .map(|(k, v)| (var(k), num_rational::BigRational::from_integer((*v).into())))
        .collect()
}

/// Parse a string known to be valid; panics otherwise.
pub fn ex(text: &str) -> Expr {
    parse(text).unwrap_or_else(|e| panic!("bad expression `{text}`: {e}"))
}
