//! Homogeneous polynomials with integer coefficients and their mod-p reductions.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// One term `coeff * x^exps`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntTerm {
    pub coeff: i64,
    pub exps: Vec<u32>,
}

/// Integer-coefficient polynomial, as it appears in ring-specification files.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    pub terms: Vec<IntTerm>,
}

impl IntPoly {
    pub fn new(terms: Vec<(i64, Vec<u32>)>) -> Self {
        IntPoly {
            terms: terms.into_iter().map(|(coeff, exps)| IntTerm { coeff, exps }).collect(),
        }
    }

    pub fn monomial(exps: Vec<u32>) -> Self {
        IntPoly::new(vec![(1, exps)])
    }

    /// Combine like terms, drop zeros, order terms by descending lex exponent.
    pub fn normalized(&self) -> Self {
        let mut acc: BTreeMap<Reverse<Vec<u32>>, i64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry(Reverse(t.exps.clone())).or_insert(0) += t.coeff;
        }
        IntPoly {
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(Reverse(exps), coeff)| IntTerm { coeff, exps })
                .collect(),
        }
    }

    /// Common total degree of all terms, or `None` if empty or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|t| t.exps.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Check arity, homogeneity and positive degree.
    pub fn validate(&self, nvars: usize) -> Result<u32> {
        let norm = self.normalized();
        if norm.terms.is_empty() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        if let Some(t) = norm.terms.iter().find(|t| t.exps.len() != nvars) {
            return Err(Error::InvalidInput(format!(
                "exponent vector {:?} has length {}, expected {nvars}",
                t.exps,
                t.exps.len()
            )));
        }
        match norm.homogeneous_degree() {
            Some(0) => Err(Error::InvalidInput("polynomial of degree 0".into())),
            Some(d) => Ok(d),
            None => Err(Error::InvalidInput(format!("polynomial {norm} is not homogeneous"))),
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            for (v, e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{v}")?,
                    _ => write!(f, "*x{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Homogeneous polynomial over F_p. Terms are sorted by descending lex
/// exponent and carry nonzero residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    field: PrimeField,
    nvars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, u32)>,
}

impl ModPoly {
    /// Build from raw terms, combining like terms. Fails if the result is zero
    /// or inhomogeneous.
    pub fn from_terms(field: PrimeField, nvars: usize, terms: Vec<(Vec<u32>, u32)>) -> Result<Self> {
        let mut acc: BTreeMap<Reverse<Vec<u32>>, u32> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::InvalidInput("exponent vector of wrong length".into()));
            }
            let e = acc.entry(Reverse(exps)).or_insert(0);
            *e = field.add(*e, c % field.modulus());
        }
        let terms: Vec<(Vec<u32>, u32)> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(Reverse(e), c)| (e, c))
            .collect();
        let Some(first) = terms.first() else {
            return Err(Error::InvalidInput("zero polynomial".into()));
        };
        let degree: u32 = first.0.iter().sum();
        if terms.iter().any(|(e, _)| e.iter().sum::<u32>() != degree) {
            return Err(Error::InvalidInput("inhomogeneous polynomial".into()));
        }
        Ok(ModPoly {
            field,
            nvars,
            degree,
            terms,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<u32>, u32)] {
        &self.terms
    }

    /// The exponent vector, if this polynomial is a single monomial.
    pub fn as_monomial(&self) -> Option<&[u32]> {
        match self.terms.as_slice() {
            [(e, _)] => Some(e),
            _ => None,
        }
    }

    /// `g^q` for `q` a power of p: coefficients are fixed by Frobenius and
    /// cross terms vanish, so every exponent is scaled by `q`.
    pub fn frobenius(&self, q: u64) -> Result<Self> {
        let q32 = u32::try_from(q).map_err(|_| Error::InvalidInput(format!("power {q} too large")))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let scaled: Option<Vec<u32>> = e.iter().map(|&x| x.checked_mul(q32)).collect();
            let scaled = scaled.ok_or_else(|| Error::InvalidInput("exponent overflow".into()))?;
            terms.push((scaled, *c));
        }
        Ok(ModPoly {
            field: self.field,
            nvars: self.nvars,
            degree: self.degree * q32,
            terms,
        })
    }

    /// Ordinary product.
    pub fn mul(&self, other: &ModPoly) -> Result<Self> {
        let f = self.field;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((e, f.mul(*ca, *cb)));
            }
        }
        ModPoly::from_terms(f, self.nvars, terms)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*x{v}")?,
                    _ => write!(f, "*x{v}^{x}")?,
                }
            }
        }
        write!(f, " (mod {})", self.field.modulus())
    }
}

/// Reduce an integer homogeneous polynomial mod p, dropping terms whose
/// coefficient vanishes. A polynomial that vanishes entirely marks a bad prime.
pub fn reduce_integer_poly(poly: &IntPoly, field: PrimeField) -> Result<ModPoly> {
    let nvars = poly.terms.first().map_or(0, |t| t.exps.len());
    poly.validate(nvars)?;
    let terms: Vec<(Vec<u32>, u32)> = poly
        .terms
        .iter()
        .map(|t| (t.exps.clone(), field.reduce(t.coeff)))
        .collect();
    ModPoly::from_terms(field, nvars, terms).map_err(|_| Error::BadPrime {
        prime: field.modulus() as u64,
        reason: format!("{poly} vanishes mod {}", field.modulus()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn reduction_kills_coefficients() {
        let g = IntPoly::new(vec![(2, vec![2, 0]), (3, vec![0, 2])]);
        let r = reduce_integer_poly(&g, f(3)).unwrap();
        assert_eq!(r.terms(), &[(vec![2, 0], 2)]);
    }

    #[test]
    fn reduction_identity() {
        let g = IntPoly::new(vec![(1, vec![4, 0, 0]), (1, vec![0, 4, 0]), (1, vec![0, 0, 4])]);
        let r = reduce_integer_poly(&g, f(5)).unwrap();
        assert_eq!(r.terms().len(), 3);
        assert!(r.terms().iter().all(|(_, c)| *c == 1));
        assert_eq!(r.degree(), 4);
    }

    #[test]
    fn reduction_to_zero_is_bad_prime() {
        let g = IntPoly::new(vec![(6, vec![1, 1])]);
        let err = reduce_integer_poly(&g, f(3)).unwrap_err();
        assert_eq!(err.name(), "BadPrime");
    }

    #[test]
    fn inhomogeneous_rejected() {
        let g = IntPoly::new(vec![(1, vec![2, 0]), (1, vec![0, 1])]);
        assert!(g.validate(2).is_err());
        assert!(reduce_integer_poly(&g, f(5)).is_err());
    }

    fn pow(g: &ModPoly, k: u64) -> ModPoly {
        let mut acc = g.clone();
        for _ in 1..k {
            acc = acc.mul(g).unwrap();
        }
        acc
    }

    #[test]
    fn frobenius_matches_repeated_multiplication() {
        // (x + y)^2 over F_2
        let g = reduce_integer_poly(&IntPoly::new(vec![(1, vec![1, 0]), (1, vec![0, 1])]), f(2)).unwrap();
        let fr = g.frobenius(2).unwrap();
        assert_eq!(fr.terms(), &[(vec![2, 0], 1), (vec![0, 2], 1)]);
        assert_eq!(fr, pow(&g, 2));

        // x^9 over F_3
        let x = reduce_integer_poly(&IntPoly::monomial(vec![1, 0]), f(3)).unwrap();
        assert_eq!(x.frobenius(9).unwrap().terms(), &[(vec![9, 0], 1)]);

        // (x^2 + yz)^5 over F_5: all cross terms carry a binomial factor divisible by 5.
        let h = IntPoly::new(vec![(1, vec![2, 0, 0]), (1, vec![0, 1, 1])]);
        let h5 = reduce_integer_poly(&h, f(5)).unwrap();
        let expected = pow(&h5, 5);
        assert_eq!(expected.terms(), &[(vec![10, 0, 0], 1), (vec![0, 5, 5], 1)]);
        assert_eq!(h5.frobenius(5).unwrap(), expected);
    }

    #[test]
    fn frobenius_fixes_nonunit_coefficients() {
        let g = IntPoly::new(vec![(3, vec![1, 1, 0]), (-2, vec![0, 1, 1]), (4, vec![2, 0, 0])]);
        let g7 = reduce_integer_poly(&g, f(7)).unwrap();
        assert_eq!(g7.frobenius(7).unwrap(), pow(&g7, 7));
    }
}
