//! Exact coefficient arithmetic: arbitrary-precision rationals and sparse
//! multivariate polynomials with integer (Laurent) exponents on designated
//! unit variables.

mod parse;
mod poly;
pub mod rational;
mod vars;

pub use parse::{collect_identifiers, parse_poly, parse_poly_at, parse_rational};
pub use poly::{poly_arith, poly_eval, poly_substitute, ArithOp, Expo, ParamPoly};
pub use rational::{binomial_int, binomial_rational, nth_root_exact, rat, Rational};
pub use vars::{Ring, VarId, VarTable};

pub(crate) use vars::same_ring;
