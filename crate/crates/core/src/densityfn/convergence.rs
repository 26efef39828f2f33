//! Per-prime tables of `||f_n - f_{n+1}||` and of successive `e_HK` estimates,
//! with the decay shape `||f_n - f_{n+1}|| * p^(n-d+2)` checked for
//! monotonicity, and sampled gaps between primes.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density_with_estimate;
use super::step::{sup_norm_diff, StepFunction};
use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};
use crate::gradedring::{ComputeOptions, GradedPresentation, ModPFiber};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    /// `||f_n - f_{n+1}||`.
    #[serde(with = "rational::serde_rational")]
    pub norm: Rational,
    /// Estimate `l(R/I^[p^n]) / p^(nd)`.
    #[serde(with = "rational::serde_rational")]
    pub ehk: Rational,
    /// `|e_n - e_{n+1}|`.
    #[serde(with = "rational::serde_rational")]
    pub ehk_diff: Rational,
    /// `norm * p^(n-d+2)`.
    #[serde(with = "rational::serde_rational")]
    pub product: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub name: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            name: e.name().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub prime: u64,
    pub status: PrimeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    pub rows: Vec<ConvergenceRow>,
    /// Whether `product` never increases with `n`.
    pub products_non_increasing: Option<bool>,
    /// Mean of `log_p(norm_n / norm_{n+1})` over consecutive rows with
    /// non-zero norms; reporting only.
    pub decay_exponent: Option<f64>,
    /// Estimate at the top level `n = max_power`.
    #[serde(with = "rational::serde_rational_opt")]
    pub final_ehk: Option<Rational>,
    #[serde(skip)]
    finest: Option<StepFunction>,
}

impl PrimeReport {
    fn failed(prime: u64, e: &Error) -> Self {
        PrimeReport {
            prime,
            status: PrimeStatus::Failed,
            error: Some(e.into()),
            rows: Vec::new(),
            products_non_increasing: None,
            decay_exponent: None,
            final_ehk: None,
            finest: None,
        }
    }

    /// `f_n` at the top level, when the prime succeeded.
    pub fn finest(&self) -> Option<&StepFunction> {
        self.finest.as_ref()
    }
}

/// Sampled sup of `|f - g|` for two primes at the same level, on the grid of
/// the coarser function (no common refinement exists).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossPrimeGap {
    pub primes: (u64, u64),
    pub power: u32,
    #[serde(with = "rational::serde_rational")]
    pub sampled_gap: Rational,
    #[serde(with = "rational::serde_rational")]
    pub ehk_gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub ring_hash: String,
    pub dimension: u32,
    pub max_power: u32,
    pub primes: Vec<PrimeReport>,
    pub cross_prime: Vec<CrossPrimeGap>,
}

impl ConvergenceReport {
    pub fn succeeded(&self) -> usize {
        self.primes.iter().filter(|p| p.status == PrimeStatus::Ok).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Levels `1..=max_power` for one prime. Failures are recorded, not raised.
pub fn prime_report(presentation: &GradedPresentation, p: u64, max_power: u32, options: ComputeOptions) -> PrimeReport {
    match prime_levels(presentation, p, max_power, options) {
        Ok(r) => r,
        Err(e) => PrimeReport::failed(p, &e),
    }
}

fn prime_levels(
    presentation: &GradedPresentation,
    p: u64,
    max_power: u32,
    options: ComputeOptions,
) -> Result<PrimeReport> {
    let fiber = ModPFiber::with_options(presentation, p, options)?;
    // Fail fast on the largest level before spending time on the others.
    fiber.frobenius_q(max_power)?;
    let levels: Vec<(StepFunction, Rational)> = (1..=max_power)
        .into_par_iter()
        .map(|n| density_with_estimate(&fiber, n))
        .collect::<Result<_>>()?;
    let d = fiber.dimension() as i64;
    let mut rows = Vec::new();
    for (i, w) in levels.windows(2).enumerate() {
        let n = i as u32 + 1;
        let norm = sup_norm_diff(&w[0].0, &w[1].0)?;
        let product = &norm * rational::pow_i(p, n as i64 - d + 2);
        rows.push(ConvergenceRow {
            n,
            norm,
            ehk: w[0].1.clone(),
            ehk_diff: (&w[0].1 - &w[1].1).abs(),
            product,
        });
    }
    let products_non_increasing = (!rows.is_empty()).then(|| rows.windows(2).all(|w| w[1].product <= w[0].product));
    let ratios: Vec<f64> = rows
        .windows(2)
        .filter(|w| !w[0].norm.is_zero() && !w[1].norm.is_zero())
        .map(|w| (rational::to_f64(&(&w[0].norm / &w[1].norm))).ln() / (p as f64).ln())
        .collect();
    let decay_exponent = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    let (finest, final_ehk) = levels.into_iter().last().expect("max_power >= 1");
    Ok(PrimeReport {
        prime: p,
        status: PrimeStatus::Ok,
        error: None,
        rows,
        products_non_increasing,
        decay_exponent,
        final_ehk: Some(final_ehk),
        finest: Some(finest),
    })
}

/// Largest `|f(x) - g(x)|` over the left endpoints of the coarser grid.
fn sampled_gap(f: &StepFunction, g: &StepFunction) -> Rational {
    let (coarse, fine) = if f.q() <= g.q() { (f, g) } else { (g, f) };
    let qc = coarse.q();
    let top = coarse.end().max(fine.end() * qc / fine.q() + 1);
    let mut best = Rational::zero();
    for j in 0..top {
        let x = rational::rat(j as i64, qc as i64);
        let gap = (coarse.value(j) - fine.value_at(&x)).abs();
        if gap > best {
            best = gap;
        }
    }
    best
}

pub fn convergence_report(
    presentation: &GradedPresentation,
    primes: &[u64],
    max_power: u32,
    options: ComputeOptions,
) -> Result<ConvergenceReport> {
    convergence_report_with(presentation, primes, max_power, options, |_| {})
}

/// As [`convergence_report`], calling `progress` as each prime finishes.
/// The report itself is assembled in the order of `primes`.
pub fn convergence_report_with(
    presentation: &GradedPresentation,
    primes: &[u64],
    max_power: u32,
    options: ComputeOptions,
    progress: impl Fn(&PrimeReport) + Sync,
) -> Result<ConvergenceReport> {
    if primes.is_empty() {
        return Err(Error::InvalidInput("no primes given".into()));
    }
    if max_power == 0 {
        return Err(Error::InvalidInput("max power must be at least 1".into()));
    }
    presentation.validate()?;
    let reports: Vec<PrimeReport> = primes
        .par_iter()
        .map(|&p| {
            let r = prime_report(presentation, p, max_power, options);
            progress(&r);
            r
        })
        .collect();
    let ok: Vec<&PrimeReport> = reports.iter().filter(|r| r.status == PrimeStatus::Ok).collect();
    let cross_prime = ok
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            CrossPrimeGap {
                primes: (a.prime, b.prime),
                power: max_power,
                sampled_gap: sampled_gap(a.finest().expect("ok"), b.finest().expect("ok")),
                ehk_gap: (a.final_ehk.clone().expect("ok") - b.final_ehk.clone().expect("ok")).abs(),
            }
        })
        .collect();
    Ok(ConvergenceReport {
        ring_hash: presentation.content_hash(),
        dimension: presentation.dimension,
        max_power,
        primes: reports,
        cross_prime,
    })
}
