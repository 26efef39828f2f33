//! Exact arithmetic: prime fields, sparse rank over F_p, big rationals and
//! integer polynomials with their mod-p reductions.

pub mod field;
pub mod poly;
pub mod rational;
pub mod sparse;

pub use field::{is_prime, PrimeField, PrimeFieldElement, MODULUS_LIMIT};
pub use poly::{reduce_integer_poly, IntPoly, IntTerm, ModPoly};
pub use rational::{rat, Rational};
pub use sparse::SparseColumnMatrix;
