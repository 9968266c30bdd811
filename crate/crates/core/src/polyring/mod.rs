//! Exact sparse multivariate polynomials over the rationals.
//!
//! Every polynomial carries the [`Ring`] it lives in (an ordered list of
//! variable names, first-declared variable greatest). Terms are stored in a
//! map keyed by [`Monomial`], whose `Ord` is graded-lexicographic, so the
//! canonical rendering walks the map backwards.

mod division;
mod display;
mod monomial;
mod poly;
pub mod univariate;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use division::reduce;
pub use monomial::{Monomial, TermOrder};
pub use poly::Polynomial;
pub use univariate::UnivariatePolynomial;

/// Exact arbitrary-precision fraction, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// A point in affine space: one rational coordinate per ring variable.
pub type Point = Vec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands belong to different polynomial rings")]
    RingMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("variable `{0}` has no image in the substitution")]
    MissingImage(String),
}

/// An ordered list of variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Ring> {
        Arc::new(Ring { names: names.into_iter().map(Into::into).collect() })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring{:?}", self.names)
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d == num_bigint::BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
