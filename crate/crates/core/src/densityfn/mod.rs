//! Hilbert-Kunz density step functions `f_n`, their norms and integrals, and
//! `e_HK` estimates.
//!
//! For a fiber of dimension `d` and `q = p^n`, `f_n` takes the value
//! `l(R/I^[q])_j / q^(d-1)` on `[j/q, (j+1)/q)`. Its integral over `x >= 0` is
//! the estimate `l(R/I^[q]) / q^d`.

mod convergence;
mod step;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use convergence::{
    convergence_report, convergence_report_with, prime_report, ConvergenceReport, ConvergenceRow, CrossPrimeGap,
    ErrorRecord, PrimeReport, PrimeStatus,
};
pub use step::{integrate, sup_norm_diff, StepFunction, StepKind, StepMeta, View};

use crate::error::Result;
use crate::exactalg::rational::{self, Rational};
use crate::gradedring::ModPFiber;

pub(crate) fn step_meta(fiber: &ModPFiber, n: u32, kind: StepKind) -> StepMeta {
    StepMeta {
        prime: fiber.prime(),
        power: n,
        dimension: fiber.dimension(),
        n0: fiber.n0(),
        mu: fiber.mu(),
        ring_hash: fiber.ring_hash().to_string(),
        kind,
    }
}

/// Divide degreewise lengths by `q^(d-1)`.
pub(crate) fn scaled_step(fiber: &ModPFiber, n: u32, lengths: &[u64], kind: StepKind) -> Result<StepFunction> {
    let q = fiber.frobenius_q(n)?;
    let scale = num_traits::pow(BigInt::from(q), fiber.dimension() as usize - 1);
    let values = lengths
        .iter()
        .map(|&l| Rational::new(BigInt::from(l), scale.clone()))
        .collect();
    StepFunction::from_parts(q, View::Full, 0, values, Some(step_meta(fiber, n, kind)))
}

/// `f_n` for `q = p^n`. The full view stores `j = 0 .. n0 mu q`; the tail view
/// keeps only the cells with `j >= q`, i.e. `x >= 1`.
pub fn density_function(fiber: &ModPFiber, n: u32, view: View) -> Result<StepFunction> {
    let (full, _) = density_with_estimate(fiber, n)?;
    Ok(match view {
        View::Full => full,
        View::Tail => full.tail(),
    })
}

/// `l(R/I^[q]) / q^d`.
pub fn ehk_estimate(fiber: &ModPFiber, n: u32) -> Result<Rational> {
    Ok(density_with_estimate(fiber, n)?.1)
}

/// The full density function and the estimate, from one length computation.
/// Panics if the estimate differs from the integral of the density.
pub fn density_with_estimate(fiber: &ModPFiber, n: u32) -> Result<(StepFunction, Rational)> {
    let lengths = fiber.frobenius_lengths(n)?;
    let q = fiber.frobenius_q(n)?;
    let colength: u64 = lengths.iter().sum();
    let estimate = Rational::new(
        BigInt::from(colength),
        num_traits::pow(BigInt::from(q), fiber.dimension() as usize),
    );
    let f = scaled_step(fiber, n, &lengths, StepKind::Density)?;
    assert_eq!(f.integrate(), estimate, "e_HK estimate must equal the integral of f_n");
    Ok((f, estimate))
}

/// Split of the estimate at `x = 1`, next to the Hilbert-Samuel limit
/// `e~_0 / d!` that the part below 1 converges to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhkDecomposition {
    pub prime: u64,
    pub power: u32,
    #[serde(with = "rational::serde_rational")]
    pub estimate: Rational,
    /// `int_0^1 f_n = l(R/m^q) / q^d`.
    #[serde(with = "rational::serde_rational")]
    pub below_one: Rational,
    /// `int_1^oo f_n`.
    #[serde(with = "rational::serde_rational")]
    pub above_one: Rational,
    /// `e~_0 / d!`, when the Hilbert function could be fitted.
    #[serde(with = "rational::serde_rational_opt")]
    pub samuel_limit: Option<Rational>,
    /// `e~_0 / d! + int_1^oo f_n`.
    #[serde(with = "rational::serde_rational_opt")]
    pub limit_form: Option<Rational>,
}

pub fn ehk_decomposition(fiber: &ModPFiber, n: u32) -> Result<EhkDecomposition> {
    let (full, estimate) = density_with_estimate(fiber, n)?;
    let above_one = full.tail().integrate();
    let below_one = &estimate - &above_one;
    let samuel_limit = fiber.hilbert_data().ok().map(|h| {
        let fact: BigInt = (1..=h.dimension as u64).map(BigInt::from).product();
        Rational::new(h.e0().clone(), fact)
    });
    let limit_form = samuel_limit.as_ref().map(|s| s + &above_one);
    Ok(EhkDecomposition {
        prime: fiber.prime(),
        power: n,
        estimate,
        below_one,
        above_one,
        samuel_limit,
        limit_form,
    })
}

/// True when every entry is `>= 0` and `value * q^(d-1)` is an integer.
pub fn is_length_valued(f: &StepFunction) -> bool {
    f.values().iter().all(|v| v >= &Rational::zero()) && f.lengths().is_some()
}
