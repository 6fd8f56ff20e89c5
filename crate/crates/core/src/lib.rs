//! Folded Reed-Solomon codes over prime fields, with interpolation-based
//! list decoding, list recovery, a channel simulator and a brute-force
//! reference decoder.
pub mod decoder;
pub mod error;
pub mod frs;
pub mod galois;
pub mod harness;
pub mod interp;
mod ntt;
pub mod poly;
pub mod rootfind;

pub use error::{Error, Result};
