//! Exact computation of Hilbert-Kunz density functions and multiplicities of
//! standard graded rings reduced mod p, together with closed forms for
//! Segre products and for curves with known Harder-Narasimhan data.

pub mod curvehn;
pub mod densityfn;
pub mod error;
pub mod exactalg;
pub mod gradedring;
pub mod hilbertpoly;
pub mod piecewise;
pub mod segre;

pub use error::{Error, Result};
