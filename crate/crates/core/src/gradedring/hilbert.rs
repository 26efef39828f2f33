use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational;
use crate::hilbertpoly::BinomialPolynomial;

/// Binomial-basis coefficients of the Hilbert-Samuel polynomial
///
/// ```text
/// P(m) = e~_0 C(m+d-1, d) - e~_1 C(m+d-2, d-1) + ... + (-1)^d e~_d
/// ```
///
/// which equals `l(R/m^m) = sum_{j<m} l(R_j)` for `m >= stable_from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub dimension: u32,
    #[serde(with = "rational::serde_bigint_vec")]
    pub coeffs: Vec<BigInt>,
    pub stable_from: u64,
}

impl HilbertData {
    /// Multiplicity `e~_0 = e_0(R, m)`.
    pub fn e0(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// `P(m)`; the same coefficients read as a [`BinomialPolynomial`] shifted by one.
    pub fn samuel(&self, m: i64) -> BigInt {
        BinomialPolynomial::new(self.coeffs.clone()).eval_i64(m - 1)
    }

    /// Hilbert polynomial `chi(O_X(m))` of `X = Proj R`, degree `d - 1`.
    pub fn hilbert_polynomial(&self) -> BinomialPolynomial {
        BinomialPolynomial::new(self.coeffs[..self.dimension as usize].to_vec())
    }
}

/// Fit Hilbert data from a Hilbert-function prefix `l(R_0), ..., l(R_L)`.
///
/// Windows of `d + 3` consecutive cumulative sums are tried from the top of
/// the prefix downward; the first window whose interpolation on `d + 1`
/// points reproduces the other two fixes the polynomial. It must then agree
/// with every cumulative sum above the window, cover at least `2d + 4` of
/// them, and have `e~_0 >= 1`; otherwise the prefix is reported as not
/// stabilized (too short, or the declared dimension is wrong).
pub fn fit_hilbert_data(values: &[u64], dimension: u32) -> Result<HilbertData> {
    let d = dimension as usize;
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    // cumulative[m] = sum_{j<m} values[j]
    let mut cumulative = Vec::with_capacity(values.len() + 1);
    let mut acc = BigInt::from(0);
    cumulative.push(acc.clone());
    for &v in values {
        acc += BigInt::from(v);
        cumulative.push(acc.clone());
    }
    let width = d + 3;
    if cumulative.len() < width {
        return Err(Error::NotStabilized(format!(
            "prefix of length {} is shorter than one window",
            values.len()
        )));
    }
    let mut fitted = None;
    for lo in (0..=cumulative.len() - width).rev() {
        // cumulative[m] = B(m - 1) for the BinomialPolynomial B with the e~ coefficients
        if let Ok(b) = BinomialPolynomial::from_values(&cumulative[lo..lo + width], lo as i64 - 1, d) {
            fitted = Some((lo, b));
            break;
        }
    }
    let Some((lo, poly)) = fitted else {
        return Err(Error::NotStabilized("no polynomial window".into()));
    };
    let matches = |m: usize| poly.eval_i64(m as i64 - 1) == cumulative[m];
    if !(lo..cumulative.len()).all(matches) {
        return Err(Error::NotStabilized(format!(
            "fitted window at {lo} disagrees with later values"
        )));
    }
    let mut stable_from = lo;
    while stable_from > 0 && matches(stable_from - 1) {
        stable_from -= 1;
    }
    if cumulative.len() - stable_from < 2 * d + 4 {
        return Err(Error::NotStabilized(format!(
            "stable range from {stable_from} covers fewer than {} values",
            2 * d + 4
        )));
    }
    let coeffs = poly.coeffs().to_vec();
    if coeffs[0] < BigInt::one() || coeffs[0].is_negative() {
        return Err(Error::NotStabilized(format!(
            "leading coefficient {} inconsistent with dimension {d}",
            coeffs[0]
        )));
    }
    Ok(HilbertData {
        dimension,
        coeffs,
        stable_from: stable_from as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn polynomial_ring_in_two_variables() {
        let values: Vec<u64> = (0..20).map(|j| j + 1).collect();
        let h = fit_hilbert_data(&values, 2).unwrap();
        assert_eq!(h.coeffs, vec![b(1), b(0), b(0)]);
        assert_eq!(h.stable_from, 0);
    }

    #[test]
    fn plane_quartic() {
        // l(R_j) = C(j+2, 2) below the relation degree, 4j - 2 from there on
        let values: Vec<u64> = (0..20u64)
            .map(|j| if j < 4 { (j + 1) * (j + 2) / 2 } else { 4 * j - 2 })
            .collect();
        let h = fit_hilbert_data(&values, 2).unwrap();
        assert_eq!(&h.coeffs[..2], &[b(4), b(6)]);
        // The fitted polynomial reproduces l(R/m^m) on the stable range.
        for m in h.stable_from..h.stable_from + 4 {
            let direct: u64 = values[..m as usize].iter().sum();
            assert_eq!(h.samuel(m as i64), b(direct as i64));
        }
        assert_eq!(h.hilbert_polynomial().coeffs(), &[b(4), b(6)]);
    }

    #[test]
    fn constant_sequence_dimension_one() {
        let h = fit_hilbert_data(&[5; 12], 1).unwrap();
        assert_eq!(h.coeffs[0], b(5));
    }

    #[test]
    fn wrong_dimension_is_not_stabilized() {
        let values: Vec<u64> = (0..20).map(|j| j + 1).collect();
        assert_eq!(fit_hilbert_data(&values, 3).unwrap_err().name(), "NotStabilized");
        assert_eq!(fit_hilbert_data(&values, 1).unwrap_err().name(), "NotStabilized");
        assert_eq!(fit_hilbert_data(&values[..4], 2).unwrap_err().name(), "NotStabilized");
    }
}
