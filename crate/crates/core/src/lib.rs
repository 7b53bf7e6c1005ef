//! Exact symbolic engine for germs of neighborhoods of a rational curve.
//!
//! A germ is encoded as a truncated transition cocycle between two charts
//! covering the curve. The crate reduces cocycles to a normal form, applies
//! the residual four-parameter action that preserves it, builds the
//! obstruction ideals controlling fibrations by discs transverse to the
//! curve, and decides (up to a truncation order) how many such fibrations
//! exist. All arithmetic is exact over ℚ.

pub mod algebra;
mod cancel;
mod error;
pub mod fibrations;
pub mod groebner;
pub mod normalform;
pub mod series;

pub use cancel::CancelToken;
pub use error::{Error, Result};
