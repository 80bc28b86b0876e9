//! Admissible words, Adem rewriting, and operation decompositions.

pub mod algebra;
pub mod element;
pub mod word;

pub use algebra::{adem_pbp, adem_pp, p_power_exponent, SteenrodAlgebra};
pub use element::SteenrodElement;
pub use word::{Letter, OperationWord};
