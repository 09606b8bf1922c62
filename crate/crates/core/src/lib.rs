//! The greedy partition of the naturals into 3-free sequences, read through
//! base 3/2.
//!
//! Row `i` of the partition is row `i` of a grid `G` of `{0,1,2}` strings read
//! in base 3. [`grid`] builds `G` from the carry rule of [`radix`], [`greedy`]
//! computes the partition directly, [`fractal`] exposes the self-similar
//! structure of `G`, and [`witness`] constructs the progressions that place
//! each number in its row.

pub mod fractal;
pub mod greedy;
pub mod grid;
pub mod radix;
pub mod witness;

pub use grid::{Grid, GridCoord, GridWindow};
pub use radix::{DigitString, ExactRational, RationalBase};
