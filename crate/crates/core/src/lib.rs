//! Exact computations on intersections of the `N`-part homogeneous Cantor
//! set `Γ_{β,N}` with its translates `Γ_{β,N} + t`.
//!
//! Translation parameters are described by their `Ω_{±N}`-codes. The crate
//! decides whether a code is the unique code of its value, whether the
//! intersection is self-similar (and produces the generating IFS), and
//! computes the two critical bases at which these sets change size.
//!
//! All inequalities are decided in exact rational arithmetic; irrational
//! quantities are returned as certified rational enclosures.

pub mod admissible;
pub mod critical;
pub mod error;
pub mod expansion;
pub mod rational;
pub mod selfsimilar;
pub mod sequence;
pub mod uniqueness;

pub use error::{Error, Result};
pub use expansion::Verdict;
pub use rational::{Rat, RatInterval};
pub use sequence::{Alphabet, Digit, EpSequence, Params, Word};
