//! Exact piecewise-polynomial functions on the real line with rational
//! breakpoints, zero outside the listed pieces.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};

/// One polynomial piece on `[from, to)`, coefficients in `x`, low to high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(with = "rational::serde_rational")]
    pub from: Rational,
    #[serde(with = "rational::serde_rational")]
    pub to: Rational,
    #[serde(with = "rational::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

/// Sorted, non-overlapping pieces. Serializes as the bare list of pieces.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PiecewisePoly {
    pieces: Vec<Piece>,
}

impl PiecewisePoly {
    pub fn zero() -> Self {
        PiecewisePoly { pieces: Vec::new() }
    }

    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        pieces.sort_by(|a, b| a.from.cmp(&b.from));
        for p in &pieces {
            if p.from >= p.to {
                return Err(Error::InvalidInput(format!("empty piece [{}, {})", p.from, p.to)));
            }
        }
        for w in pieces.windows(2) {
            if w[0].to > w[1].from {
                return Err(Error::InvalidInput(format!(
                    "pieces overlap at [{}, {})",
                    w[1].from, w[0].to
                )));
            }
        }
        Ok(PiecewisePoly { pieces })
    }

    /// A single polynomial on `[from, to)`.
    pub fn polynomial_on(from: Rational, to: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        PiecewisePoly::new(vec![Piece { from, to, coeffs }])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pieces: Vec<Piece> =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("piecewise function: {e}")))?;
        PiecewisePoly::new(pieces)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("piecewise function serializes")
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.coeffs.iter().all(Zero::is_zero))
    }

    /// Value at `x`, using the right-continuous convention of `[from, to)`.
    pub fn eval(&self, x: &Rational) -> Rational {
        match self.piece_at(x) {
            Some(p) => poly_eval(&p.coeffs, x),
            None => Rational::zero(),
        }
    }

    /// Limit from the left at `x`.
    pub fn eval_left(&self, x: &Rational) -> Rational {
        self.pieces
            .iter()
            .find(|p| &p.from < x && x <= &p.to)
            .map(|p| poly_eval(&p.coeffs, x))
            .unwrap_or_else(Rational::zero)
    }

    fn piece_at(&self, x: &Rational) -> Option<&Piece> {
        let idx = self.pieces.partition_point(|p| &p.from <= x);
        if idx == 0 {
            return None;
        }
        let p = &self.pieces[idx - 1];
        (x < &p.to).then_some(p)
    }

    /// Sorted distinct piece endpoints.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .pieces
            .iter()
            .flat_map(|p| [p.from.clone(), p.to.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Smallest `x` beyond which the function vanishes identically.
    pub fn support_end(&self) -> Option<Rational> {
        let c = self.canonical();
        c.pieces.last().map(|p| p.to.clone())
    }

    /// True when left and right values agree at every breakpoint after the
    /// first, i.e. continuity on `[first breakpoint, oo)`.
    pub fn is_continuous(&self) -> bool {
        self.breakpoints()
            .iter()
            .skip(1)
            .all(|x| self.eval_left(x) == self.eval(x))
    }

    pub fn integrate(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| poly_integral(&p.coeffs, &p.from, &p.to))
            .sum()
    }

    /// Pointwise combination over the union of breakpoints. `op` sees the
    /// two polynomials in force on each elementary interval (empty = zero).
    pub fn combine(&self, other: &PiecewisePoly, op: impl Fn(&[Rational], &[Rational]) -> Vec<Rational>) -> Self {
        let mut pts = self.breakpoints();
        pts.extend(other.breakpoints());
        pts.sort();
        pts.dedup();
        let empty: Vec<Rational> = Vec::new();
        let mut pieces = Vec::new();
        for w in pts.windows(2) {
            let a = self.piece_at(&w[0]).map_or(&empty, |p| &p.coeffs);
            let b = other.piece_at(&w[0]).map_or(&empty, |p| &p.coeffs);
            let coeffs = op(a, b);
            if coeffs.iter().any(|c| !c.is_zero()) {
                pieces.push(Piece {
                    from: w[0].clone(),
                    to: w[1].clone(),
                    coeffs,
                });
            }
        }
        PiecewisePoly { pieces }.canonical()
    }

    pub fn add(&self, other: &PiecewisePoly) -> Self {
        self.combine(other, poly_add)
    }

    pub fn sub(&self, other: &PiecewisePoly) -> Self {
        self.combine(other, |a, b| poly_add(a, &poly_scale(b, &-Rational::one())))
    }

    pub fn mul(&self, other: &PiecewisePoly) -> Self {
        self.combine(other, poly_mul)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                from: p.from.clone(),
                to: p.to.clone(),
                coeffs: poly_scale(&p.coeffs, c),
            })
            .collect();
        PiecewisePoly { pieces }.canonical()
    }

    /// Canonical form: trailing zero coefficients trimmed, zero pieces
    /// dropped, and touching pieces with equal polynomials merged.
    pub fn canonical(&self) -> Self {
        let mut out: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            let coeffs = trim(p.coeffs.clone());
            if coeffs.is_empty() {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.to == p.from && last.coeffs == coeffs {
                    last.to = p.to.clone();
                    continue;
                }
            }
            out.push(Piece {
                from: p.from.clone(),
                to: p.to.clone(),
                coeffs,
            });
        }
        PiecewisePoly { pieces: out }
    }

    /// Equality of the underlying functions.
    pub fn same_function(&self, other: &PiecewisePoly) -> bool {
        self.canonical() == other.canonical()
    }
}

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

pub fn poly_eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn poly_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x + y
        })
        .collect()
}

pub fn poly_scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `int_from^to sum c_k x^k dx`.
pub fn poly_integral(coeffs: &[Rational], from: &Rational, to: &Rational) -> Rational {
    let anti: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(coeffs.iter().enumerate().map(|(k, c)| c / rational::int(k as i64 + 1)))
        .collect();
    poly_eval(&anti, to) - poly_eval(&anti, from)
}
