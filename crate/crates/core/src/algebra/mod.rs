//! Exact scalar arithmetic: monomials, multivariate polynomials over the
//! rationals, and quotients of polynomials.
//!
//! Everything downstream (forms, metrics, the integrating-factor search)
//! reduces to arithmetic in this module, so results are exact by
//! construction and every zero test is decidable.

mod monomial;
mod polynomial;
mod rational;

pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::RationalFunction;

pub(crate) use rational::leading_is_negative;

