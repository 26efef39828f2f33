//! Closed forms for curves in characteristic 0: densities from
//! Harder-Narasimhan data, the Segre product of two curves, the plane
//! trinomial classifier and the congruence conditions on primes.

mod hn;
mod trinomial;

pub use hn::{
    density_from_hn, density_from_slopes, ehk_inf_segre_curves, ehk_inf_segre_from_hn, finf_from_hn, HNBlock, HNData,
    HNSlope, RefinedHNData, Refinement,
};
pub use trinomial::{
    classify_trinomial, classify_trinomial_str, congruence_agreement, CongruenceVariant, Exponents, TernaryPoly,
    TrinomialClassification, TrinomialKind,
};
