//! Standard graded presentations over the integers, their mod-p fibers and
//! graded-piece dimensions of quotients by Frobenius powers.

mod fiber;
mod hilbert;
pub mod monomials;
mod presentation;

pub use fiber::{ComputeOptions, ModPFiber, DEFAULT_DEGREE_CAP};
pub use hilbert::{fit_hilbert_data, HilbertData};
pub use presentation::GradedPresentation;
