//! Odd-integer arithmetic progressions, three squares in arithmetic
//! progression, and 3×3 magic squares of squares, all in exact arithmetic.

pub mod ap;
pub mod audit;
pub mod grid;
pub mod int;
pub mod kappa;
pub mod ratio;
pub mod search;

pub use ap::{ApPair, OddAp, RootTriple};
pub use grid::{Grid, VerifyReport};
pub use int::Int;
pub use ratio::Ratio;
