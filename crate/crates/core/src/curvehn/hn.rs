use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};
use crate::piecewise::{Piece, PiecewisePoly};
use crate::segre::{segre_density_limit, HSDensity};

/// One Harder-Narasimhan subquotient: slope and rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HNSlope {
    #[serde(with = "rational::serde_rational")]
    pub mu: Rational,
    pub rank: u64,
}

/// Slopes `mu_1 > mu_2 > ...` with ranks, for a bundle on a curve polarized in
/// degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HNData {
    pub degree: u64,
    pub blocks: Vec<HNSlope>,
}

/// A subquotient of the refinement of one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    #[serde(with = "rational::serde_rational")]
    pub a: Rational,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HNBlock {
    #[serde(with = "rational::serde_rational")]
    pub mu: Rational,
    pub rank: u64,
    /// Empty means the block is not refined.
    #[serde(default)]
    pub refine: Vec<Refinement>,
}

/// HN data together with the refinement of each block by the filtration of a
/// Frobenius pull-back, slopes rescaled by the Frobenius degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedHNData {
    pub degree: u64,
    pub blocks: Vec<HNBlock>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidHN(msg.into())
}

impl HNData {
    pub fn new(degree: u64, blocks: Vec<(Rational, u64)>) -> Result<Self> {
        let data = HNData {
            degree,
            blocks: blocks.into_iter().map(|(mu, rank)| HNSlope { mu, rank }).collect(),
        };
        data.validate()?;
        Ok(data)
    }

    /// Single semistable block of slope `-d/r`, as for the syzygy bundle of a
    /// curve of degree `d` with `r + 1` sections.
    pub fn semistable(degree: u64, rank: u64) -> Result<Self> {
        if rank == 0 {
            return Err(invalid("rank must be positive"));
        }
        HNData::new(degree, vec![(rational::rat(-(degree as i64), rank as i64), rank)])
    }

    pub fn total_rank(&self) -> u64 {
        self.blocks.iter().map(|b| b.rank).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(invalid("degree must be positive"));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.rank == 0 {
                return Err(invalid(format!("block {i} has rank 0")));
            }
            if b.mu.is_positive() {
                return Err(invalid(format!("block {i} has positive slope {}", b.mu)));
            }
        }
        for (i, w) in self.blocks.windows(2).enumerate() {
            if w[0].mu <= w[1].mu {
                return Err(invalid(format!(
                    "slopes must strictly decrease: mu_{} = {} <= mu_{} = {}",
                    i + 1,
                    w[0].mu,
                    i + 2,
                    w[1].mu
                )));
            }
        }
        Ok(())
    }

    /// Every block refined by itself.
    pub fn trivially_refined(&self) -> RefinedHNData {
        RefinedHNData {
            degree: self.degree,
            blocks: self
                .blocks
                .iter()
                .map(|b| HNBlock {
                    mu: b.mu.clone(),
                    rank: b.rank,
                    refine: vec![Refinement {
                        a: b.mu.clone(),
                        rank: b.rank,
                    }],
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: HNData = serde_json::from_str(text).map_err(|e| invalid(format!("{e}")))?;
        d.validate()?;
        Ok(d)
    }
}

impl RefinedHNData {
    pub fn from_json(text: &str) -> Result<Self> {
        let d: RefinedHNData = serde_json::from_str(text).map_err(|e| invalid(format!("{e}")))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("HN data serializes")
    }

    pub fn unrefined(&self) -> HNData {
        HNData {
            degree: self.degree,
            blocks: self
                .blocks
                .iter()
                .map(|b| HNSlope {
                    mu: b.mu.clone(),
                    rank: b.rank,
                })
                .collect(),
        }
    }

    /// Refinement of block `i`, with an empty list read as the block itself.
    pub fn refinement(&self, i: usize) -> Vec<Refinement> {
        let b = &self.blocks[i];
        if b.refine.is_empty() {
            vec![Refinement {
                a: b.mu.clone(),
                rank: b.rank,
            }]
        } else {
            b.refine.clone()
        }
    }

    /// True when every block is refined only by itself.
    pub fn is_trivial(&self) -> bool {
        (0..self.blocks.len()).all(|i| {
            let r = self.refinement(i);
            r.len() == 1 && r[0].a == self.blocks[i].mu
        })
    }

    /// Checks the unrefined data, then per block: ranks add up, slopes
    /// strictly decrease and are `<= 0`, the rank-weighted mean slope is
    /// `mu_i` (the refinement has the block's degree), and the last slope of a
    /// block is at least the first slope of the next.
    pub fn validate(&self) -> Result<()> {
        self.unrefined().validate()?;
        let mut prev_last: Option<Rational> = None;
        for (i, b) in self.blocks.iter().enumerate() {
            let refs = self.refinement(i);
            if refs.iter().any(|r| r.rank == 0) {
                return Err(invalid(format!("block {i} has a refinement of rank 0")));
            }
            let rank: u64 = refs.iter().map(|r| r.rank).sum();
            if rank != b.rank {
                return Err(invalid(format!(
                    "block {i}: refinement ranks sum to {rank}, not {}",
                    b.rank
                )));
            }
            if let Some(r) = refs.iter().find(|r| r.a.is_positive()) {
                return Err(invalid(format!("block {i} has positive refined slope {}", r.a)));
            }
            if refs.windows(2).any(|w| w[0].a <= w[1].a) {
                return Err(invalid(format!("block {i}: refined slopes must strictly decrease")));
            }
            let degree: Rational = refs.iter().map(|r| &r.a * BigInt::from(r.rank)).sum();
            if degree != &b.mu * BigInt::from(b.rank) {
                return Err(invalid(format!(
                    "block {i}: refined degree {degree} differs from mu * rank = {}",
                    &b.mu * BigInt::from(b.rank)
                )));
            }
            if let Some(last) = &prev_last {
                if last < &refs[0].a {
                    return Err(invalid(format!(
                        "block {i}: first refined slope {} exceeds the previous block's last {last}",
                        refs[0].a
                    )));
                }
            }
            prev_last = Some(refs.last().expect("non-empty").a.clone());
        }
        Ok(())
    }
}

/// `f(x) = sum_k r_k max(0, -a_k - d(x - 1))` on `x >= 1` for slopes
/// `a_k <= 0` with ranks `r_k`; equal slopes simply add up.
pub fn density_from_slopes(degree: u64, slopes: &[(Rational, u64)]) -> Result<PiecewisePoly> {
    if degree == 0 {
        return Err(invalid("degree must be positive"));
    }
    if let Some((a, _)) = slopes.iter().find(|(a, _)| a.is_positive()) {
        return Err(invalid(format!("positive slope {a}")));
    }
    let d = Rational::from_integer(BigInt::from(degree));
    let one = rational::int(1);
    let end = |a: &Rational| &one - a / &d;
    let mut pts: Vec<Rational> = slopes.iter().map(|(a, _)| end(a)).collect();
    pts.push(one.clone());
    pts.sort();
    pts.dedup();
    let mut pieces = Vec::new();
    for w in pts.windows(2) {
        let (mut c0, mut c1) = (Rational::zero(), Rational::zero());
        for (a, r) in slopes {
            if end(a) >= w[1] {
                // r(-a - d(x - 1)) = r(d - a) - r d x
                let r = Rational::from_integer(BigInt::from(*r));
                c0 += &r * (&d - a);
                c1 -= &r * &d;
            }
        }
        pieces.push(Piece {
            from: w[0].clone(),
            to: w[1].clone(),
            coeffs: vec![c0, c1],
        });
    }
    Ok(PiecewisePoly::new(pieces)?.canonical())
}

/// Density on `x >= 1` determined by refined HN data.
pub fn density_from_hn(data: &RefinedHNData) -> Result<PiecewisePoly> {
    data.validate()?;
    let slopes: Vec<(Rational, u64)> = (0..data.blocks.len())
        .flat_map(|i| data.refinement(i))
        .map(|r| (r.a, r.rank))
        .collect();
    density_from_slopes(data.degree, &slopes)
}

/// Limit density `f^oo` on `x >= 1` from unrefined HN data.
pub fn finf_from_hn(data: &HNData) -> Result<PiecewisePoly> {
    data.validate()?;
    let slopes: Vec<(Rational, u64)> = data.blocks.iter().map(|b| (b.mu.clone(), b.rank)).collect();
    density_from_slopes(data.degree, &slopes)
}

/// `e_HK^oo` of the Segre product of two curves with semistable syzygy
/// bundles of ranks `r >= s`, polarized in degrees `d1`, `d2`:
/// `d1 d2/3 + d1 d2 (1/(2s) + 1/(6s^2) + 1/(6r^2) + s/(6r^2))`.
pub fn ehk_inf_segre_curves(d1: u64, d2: u64, r: u64, s: u64) -> Result<Rational> {
    if s == 0 || d1 == 0 || d2 == 0 {
        return Err(Error::PreconditionViolated("degrees and ranks must be positive".into()));
    }
    if r < s {
        return Err(Error::PreconditionViolated(format!(
            "need r >= s, got r = {r}, s = {s}"
        )));
    }
    let dd = rational::int((d1 * d2) as i64);
    let (r, s) = (r as i64, s as i64);
    let bracket = rational::rat(1, 2 * s)
        + rational::rat(1, 6 * s * s)
        + rational::rat(1, 6 * r * r)
        + rational::rat(s, 6 * r * r);
    Ok(&dd / rational::int(3) + dd * bracket)
}

/// `e_HK^oo(R # S)` for two curves from their HN data: the integral over
/// `[0, 1]` of `F_R F_S` plus the integral over `x >= 1` of the Segre
/// combination of the two limit densities, with `F = degree * x`.
pub fn ehk_inf_segre_from_hn(a: &HNData, b: &HNData) -> Result<Rational> {
    let fa = finf_from_hn(a)?;
    let fb = finf_from_hn(b)?;
    let big_a = HSDensity::new(BigInt::from(a.degree), 2)?;
    let big_b = HSDensity::new(BigInt::from(b.degree), 2)?;
    let below = big_a
        .on_interval(&rational::int(1))
        .mul(&big_b.on_interval(&rational::int(1)));
    let above = segre_density_limit(&fa, &big_a, &fb, &big_b);
    Ok(below.integrate() + above.integrate())
}
