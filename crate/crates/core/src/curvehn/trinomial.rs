use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Exponents = [u32; 3];

/// A polynomial in `x, y, z` with integer coefficients, zero terms removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryPoly {
    terms: BTreeMap<Exponents, i64>,
}

impl TernaryPoly {
    pub fn terms(&self) -> &BTreeMap<Exponents, i64> {
        &self.terms
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Exponents)>) -> Result<Self> {
        let mut map: BTreeMap<Exponents, i64> = BTreeMap::new();
        for (c, e) in terms {
            let slot = map.entry(e).or_insert(0);
            *slot = slot
                .checked_add(c)
                .ok_or_else(|| Error::InvalidInput("coefficient overflow".into()))?;
        }
        map.retain(|_, c| *c != 0);
        Ok(TernaryPoly { terms: map })
    }

    /// Parse strings such as `"x^3*y + y^3*z - 2*z^3*x"`.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).polynomial()
    }

    pub fn scaled(&self, c: i64) -> Result<Self> {
        TernaryPoly::from_terms(self.terms.iter().map(|(e, v)| (v * c, *e)))
    }

    /// Rename variables: variable `i` of the result is variable `perm[i]` here.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        TernaryPoly {
            terms: self.terms.iter().map(|(e, c)| (permute(e, perm), *c)).collect(),
        }
    }
}

fn permute(e: &Exponents, perm: [usize; 3]) -> Exponents {
    [e[perm[0]], e[perm[1]], e[perm[2]]]
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.char_indices().peekable(),
            text,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::InvalidInput(format!("cannot parse {:?}: {msg}", self.text))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.chars.next();
        }
        digits.parse().map_err(|_| self.err("expected a number"))
    }

    fn polynomial(&mut self) -> Result<TernaryPoly> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty polynomial")),
                Some('+') => {
                    self.chars.next();
                    1
                }
                Some('-') => {
                    self.chars.next();
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return Err(self.err(&format!("unexpected {c:?}"))),
            };
            first = false;
            let (c, e) = self.term()?;
            terms.push((sign * c, e));
        }
        TernaryPoly::from_terms(terms)
    }

    fn term(&mut self) -> Result<(i64, Exponents)> {
        let mut coeff: i64 = 1;
        let mut exps = [0u32; 3];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()?;
                    let n = i64::try_from(n).map_err(|_| self.err("coefficient too large"))?;
                    coeff = coeff.checked_mul(n).ok_or_else(|| self.err("coefficient too large"))?;
                }
                Some(v @ ('x' | 'y' | 'z')) => {
                    self.chars.next();
                    let i = (v as u8 - b'x') as usize;
                    let e = if self.peek() == Some('^') {
                        self.chars.next();
                        u32::try_from(self.number()?).map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    };
                    exps[i] += e;
                }
                Some(c) => return Err(self.err(&format!("unexpected {c:?}"))),
                None => return Err(self.err("dangling operator")),
            }
            factors += 1;
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                }
                // implicit product such as "2x" or "x y"
                Some(c) if c.is_ascii_digit() || matches!(c, 'x' | 'y' | 'z') => {}
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        Ok((coeff, exps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrinomialKind {
    Irregular,
    RegularA,
    RegularB,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrinomialClassification {
    pub kind: TrinomialKind,
    pub degree: u32,
    pub alpha: Option<i64>,
    pub beta: Option<i64>,
    pub nu: Option<i64>,
    pub lambda: Option<i64>,
    pub lambda_h: u64,
}

/// Matches monomials in slot order, returning `(alpha, beta, nu, lambda)`.
type Pattern = fn(&[Exponents; 3], i64) -> Option<[i64; 4]>;

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Classify a plane trinomial curve `h = 0`.
///
/// Irregular: a coordinate point lies on the curve with multiplicity (lowest
/// degree of the dehomogenization there) at least `d/2`. Otherwise `h` is
/// matched, up to renaming variables, against
///
/// * (b) `x^d + x^a1 y^a2 z^a3 + y^b z^c` with `a2, c > d/2`:
///   `alpha = a2`, `beta = c`, `nu = a2+c-d`, `lambda = a2 c - a3 b`;
/// * (a) `x^a1 y^a2 + y^b1 z^b2 + z^c1 x^c2` with `a1, b1, c1 > d/2`:
///   `alpha = a1+b1-d`, `beta = a1+c1-d`, `nu = b1+c1-d`, `lambda = a1 b1 + a2 c2 - b1 c2`,
///
/// in that order (a Fermat curve fits both and is reported as (b)),
/// with renamings tried in lexicographic order, and
/// `lambda_h = |lambda| / gcd(alpha, beta, nu, lambda)`. Coefficients
/// play no role. The monomials are first put in a canonical order under
/// renaming, so the result does not depend on the variable names.
pub fn classify_trinomial(h: &TernaryPoly) -> Result<TrinomialClassification> {
    let monos: Vec<Exponents> = h.terms().keys().copied().collect();
    if monos.len() != 3 {
        return Err(Error::NotTrinomial(format!("{} monomials", monos.len())));
    }
    let degree = monos[0].iter().sum::<u32>();
    if monos.iter().any(|m| m.iter().sum::<u32>() != degree) {
        return Err(Error::NotTrinomial("monomials of different degrees".into()));
    }
    if degree < 3 {
        return Err(Error::NotTrinomial(format!("degree {degree} < 3")));
    }
    let monos = [monos[0], monos[1], monos[2]];
    if is_irregular(&monos, degree) {
        return Ok(TrinomialClassification {
            kind: TrinomialKind::Irregular,
            degree,
            alpha: None,
            beta: None,
            nu: None,
            lambda: None,
            lambda_h: 1,
        });
    }
    let canon = canonical(&monos);
    let patterns: [(TrinomialKind, Pattern); 2] =
        [(TrinomialKind::RegularB, match_b), (TrinomialKind::RegularA, match_a)];
    for (kind, pattern) in patterns {
        for perm in PERMUTATIONS {
            let renamed = canon.map(|m| permute(&m, perm));
            for order in PERMUTATIONS {
                let slots = [renamed[order[0]], renamed[order[1]], renamed[order[2]]];
                if let Some([alpha, beta, nu, lambda]) = pattern(&slots, degree as i64) {
                    if lambda == 0 {
                        continue;
                    }
                    let g = alpha.gcd(&beta).gcd(&nu).gcd(&lambda);
                    return Ok(TrinomialClassification {
                        kind,
                        degree,
                        alpha: Some(alpha),
                        beta: Some(beta),
                        nu: Some(nu),
                        lambda: Some(lambda),
                        lambda_h: (lambda.abs() / g) as u64,
                    });
                }
            }
        }
    }
    Err(Error::Unmatched(format!(
        "exponents {canon:?} fit neither normal form with lambda != 0"
    )))
}

/// Parse and classify.
pub fn classify_trinomial_str(text: &str) -> Result<TrinomialClassification> {
    classify_trinomial(&TernaryPoly::parse(text)?)
}

fn is_irregular(monos: &[Exponents; 3], d: u32) -> bool {
    (0..3).any(|k| {
        // The point e_k lies on the curve iff x_k^d is not a term.
        let on_curve = !monos.iter().any(|m| m[k] == d);
        let multiplicity = monos.iter().map(|m| d - m[k]).min().expect("three monomials");
        on_curve && 2 * multiplicity >= d
    })
}

/// Smallest sorted monomial triple over all renamings.
fn canonical(monos: &[Exponents; 3]) -> [Exponents; 3] {
    PERMUTATIONS
        .iter()
        .map(|&perm| {
            let mut m = monos.map(|e| permute(&e, perm));
            m.sort();
            m
        })
        .min()
        .expect("six permutations")
}

fn match_a(s: &[Exponents; 3], d: i64) -> Option<[i64; 4]> {
    let [a, b, c] = s;
    if a[2] != 0 || b[0] != 0 || c[1] != 0 {
        return None;
    }
    let (a1, a2) = (a[0] as i64, a[1] as i64);
    let b1 = b[1] as i64;
    let (c1, c2) = (c[2] as i64, c[0] as i64);
    if 2 * a1 <= d || 2 * b1 <= d || 2 * c1 <= d {
        return None;
    }
    Some([a1 + b1 - d, a1 + c1 - d, b1 + c1 - d, a1 * b1 + a2 * c2 - b1 * c2])
}

fn match_b(s: &[Exponents; 3], d: i64) -> Option<[i64; 4]> {
    let [p, m, t] = s;
    if p != &[d as u32, 0, 0] || t[0] != 0 {
        return None;
    }
    let (a2, a3) = (m[1] as i64, m[2] as i64);
    let (b, c) = (t[1] as i64, t[2] as i64);
    if 2 * a2 <= d || 2 * c <= d {
        return None;
    }
    Some([a2, c, a2 + c - d, a2 * c - a3 * b])
}

/// Which divisibility the primes are tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CongruenceVariant {
    /// `p = +-1 mod lcm(lambda_h)`.
    Statement,
    /// `p = +-1 mod lcm(2 lambda_h)`.
    Proof,
}

/// Whether `p` is `+-1` modulo the lcm of the `lambda_h` (or of `2 lambda_h`).
pub fn congruence_agreement(p: u64, lambdas: &[u64], variant: CongruenceVariant) -> bool {
    let factor = match variant {
        CongruenceVariant::Statement => 1,
        CongruenceVariant::Proof => 2,
    };
    let modulus = lambdas.iter().fold(1u64, |acc, &l| acc.lcm(&(factor * l.max(1))));
    let r = p % modulus;
    r == 1 % modulus || r == modulus - 1
}
