//! Continued fractions with prescribed quotient growth, the lattices
//! `Λθ = A·Z²` with `A = [[θ, −1], [1, θ]]`, and certified estimates of
//! weak uniform Diophantine exponents.
//!
//! All certified quantities are closed intervals with exact rational
//! endpoints. [`exact::Interval`] is generic over the scalar; the rest of
//! the crate works over [`Rat`].

pub mod cf;
pub mod error;
pub mod exact;
pub mod exponents;
pub mod json;
pub mod lattice;

pub use error::{Error, Result};
pub use exact::{rat, rat_int};

pub type Rat = num_rational::BigRational;
pub type RatInterval = exact::Interval<Rat>;
