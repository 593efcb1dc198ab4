//! Generators for stable Kneser graphs and relatives, their independence
//! complexes, discrete Morse matchings built from matching trees, and an
//! integral homology oracle that cross-checks the Morse output.

pub mod complexes;
pub mod error;
pub mod graphs;
pub mod homology;
pub mod morse;
pub mod theorems;
