//! Hilbert polynomials in the binomial basis, and the identities relating the
//! Hilbert polynomial of `O_X` to those of Frobenius and twist cokernels.
//!
//! A [`BinomialPolynomial`] of degree `D` with coefficients `c_0..c_D` is
//!
//! ```text
//! P(m) = c_0 C(m+D, D) - c_1 C(m+D-1, D-1) + ... + (-1)^D c_D
//! ```
//!
//! where `C(x, k) = x(x-1)...(x-k+1)/k!` is read as a polynomial in `x`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialPolynomial {
    degree: usize,
    #[serde(with = "rational::serde_bigint_vec")]
    coeffs: Vec<BigInt>,
}

/// Which short exact sequence a twist cokernel comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistSide {
    /// `0 -> O(-m0) -> O -> Q -> 0`, so `chi(Q(m)) = P(m) - P(m - m0)`.
    Sub,
    /// `0 -> O -> O(m0) -> Q -> 0`, so `chi(Q(m)) = P(m + m0) - P(m)`.
    Quot,
}

/// `C(x, k)` as a polynomial in `x`, valid for negative `x`.
pub fn binomial_poly(x: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

impl BinomialPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "binomial polynomial needs at least c_0");
        BinomialPolynomial {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        BinomialPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinomialPolynomial::new(vec![BigInt::zero(); degree + 1])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, m: &BigInt) -> BigInt {
        let d = self.degree;
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = d - i;
            let term = c * binomial_poly(&(m + BigInt::from(k)), k);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    pub fn eval_i64(&self, m: i64) -> BigInt {
        self.eval(&BigInt::from(m))
    }

    /// Interpolate from values at consecutive points `start, start+1, ...`.
    ///
    /// Needs at least `degree + 2` values; the first `degree + 1` determine
    /// the coefficients and every further value must be reproduced.
    pub fn from_values(values: &[BigInt], start: i64, degree: usize) -> Result<Self> {
        if values.len() < degree + 2 {
            return Err(Error::InvalidInput(format!(
                "need at least {} values to fit degree {degree}, got {}",
                degree + 2,
                values.len()
            )));
        }
        let n = degree + 1;
        // Rows: points; columns: basis element i evaluated there, with sign.
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let m = BigInt::from(start + r as i64);
                let mut row: Vec<Rational> = (0..n)
                    .map(|i| {
                        let k = degree - i;
                        let b = binomial_poly(&(&m + BigInt::from(k)), k);
                        rational::big(&if i % 2 == 0 { b } else { -b })
                    })
                    .collect();
                row.push(rational::big(&values[r]));
                row
            })
            .collect();
        solve_in_place(&mut a, n);
        let mut coeffs = Vec::with_capacity(n);
        for row in &a {
            let c = &row[n];
            if !c.is_integer() {
                return Err(Error::NotPolynomial { degree });
            }
            coeffs.push(c.to_integer());
        }
        let poly = BinomialPolynomial::new(coeffs);
        for (k, v) in values.iter().enumerate().skip(n) {
            if &poly.eval_i64(start + k as i64) != v {
                return Err(Error::NotPolynomial { degree });
            }
        }
        Ok(poly)
    }

    fn from_fn(degree: usize, f: impl Fn(i64) -> BigInt) -> Result<Self> {
        let values: Vec<BigInt> = (0..(degree as i64 + 2)).map(f).collect();
        BinomialPolynomial::from_values(&values, 0, degree)
    }

    /// Hilbert polynomial of the cokernel `Q` of `O_X(-d)^{p^{d-1}} -> F_* O_X`:
    /// `m -> P(mp) - p^{d-1} P(m)` where `self = P` has degree `d-1`.
    /// The degree `d-1` parts cancel and the result has degree `d-2`.
    pub fn cokernel_hp(&self, p: u64) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::CancellationFailure("input must have degree at least 1".into()));
        }
        if p == 0 {
            return Err(Error::InvalidInput("Frobenius degree p must be positive".into()));
        }
        let pb = BigInt::from(p);
        let scale = num_traits::pow(pb.clone(), self.degree);
        let target = self.degree - 1;
        let g = |m: i64| {
            let mb = BigInt::from(m);
            self.eval(&(&mb * &pb)) - &scale * self.eval(&mb)
        };
        // degree + 1 points: a degree-D polynomial that fits degree D-1 on all of
        // them must have a vanishing leading coefficient.
        let values: Vec<BigInt> = (0..(self.degree as i64 + 1)).map(g).collect();
        BinomialPolynomial::from_values(&values, 0, target).map_err(|_| {
            Error::CancellationFailure(format!("P(mp) - p^{} P(m) is not of degree {target}", self.degree))
        })
    }

    /// Hilbert polynomial of the twist cokernel for `m0 >= 0`, one degree lower.
    /// `m0 = 0` gives the zero polynomial.
    pub fn twist_difference_hp(&self, m0: u64, side: TwistSide) -> Self {
        let target = self.degree.saturating_sub(1);
        if m0 == 0 || self.degree == 0 {
            return BinomialPolynomial::zero(target);
        }
        let shift = m0 as i64;
        let diff = |m: i64| match side {
            TwistSide::Sub => self.eval_i64(m) - self.eval_i64(m - shift),
            TwistSide::Quot => self.eval_i64(m + shift) - self.eval_i64(m),
        };
        BinomialPolynomial::from_fn(target, diff).expect("finite differences lower the degree")
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Gauss-Jordan on an `n x (n+1)` augmented system with a nonsingular
/// (triangular-up-to-ordering) coefficient block.
fn solve_in_place(a: &mut [Vec<Rational>], n: usize) {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("binomial basis evaluation matrix is nonsingular");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in col..=n {
                    let sub = &factor * &a[col][k];
                    a[r][k] -= sub;
                }
            }
        }
    }
}
