//! Densities of Segre products `R # S` with ideal `I # J`.
//!
//! At a fixed level the lengths satisfy
//! `l((R#S)/(I#J)^[q])_j = l(R_j) l(S_j) - (l(R_j) - l(R/I^[q])_j)(l(S_j) - l(S/J^[q])_j)`,
//! which after scaling reads `F_R g + F_S f - f g`. The same expression
//! combines limit densities.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::densityfn::{scaled_step, StepFunction, StepKind, StepMeta, View};
use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};
use crate::exactalg::IntPoly;
use crate::gradedring::{GradedPresentation, HilbertData, ModPFiber};
use crate::piecewise::PiecewisePoly;

/// `F_R(x) = e_0 x^(d-1) / (d-1)!` for `x >= 0`, zero for `x < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HSDensity {
    #[serde(with = "rational::serde_bigint")]
    e0: BigInt,
    dimension: u32,
}

impl HSDensity {
    pub fn new(e0: BigInt, dimension: u32) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if e0 <= BigInt::zero() {
            return Err(Error::InvalidInput(format!("multiplicity {e0} must be positive")));
        }
        Ok(HSDensity { e0, dimension })
    }

    pub fn e0(&self) -> &BigInt {
        &self.e0
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Coefficients of `F_R` in `x`, low to high.
    pub fn coeffs(&self) -> Vec<Rational> {
        let k = self.dimension as usize - 1;
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::new(self.e0().clone(), fact);
        c
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if x < &Rational::zero() {
            return Rational::zero();
        }
        crate::piecewise::poly_eval(&self.coeffs(), x)
    }

    /// `F_R` restricted to `[0, upper)`.
    pub fn on_interval(&self, upper: &Rational) -> PiecewisePoly {
        if upper <= &Rational::zero() {
            return PiecewisePoly::zero();
        }
        PiecewisePoly::polynomial_on(Rational::zero(), upper.clone(), self.coeffs()).expect("non-empty interval")
    }
}

pub fn hs_density(hd: &HilbertData) -> HSDensity {
    HSDensity::new(hd.e0().clone(), hd.dimension).expect("fitted Hilbert data has e0 >= 1")
}

/// `F_n(x) = l(R_floor(xq)) / q^(d-1)` on `0 <= j < n0 mu q`, the range where
/// the density at the same level can be non-zero.
pub fn hs_partial(fiber: &ModPFiber, n: u32) -> Result<StepFunction> {
    let q = fiber.frobenius_q(n)?;
    let bound = fiber.support_bound(q);
    let lengths = fiber.hilbert_function_prefix(bound - 1)?;
    scaled_step(fiber, n, &lengths, StepKind::HilbertSamuel)
}

fn level_of(f: &StepFunction) -> Option<(u64, u32)> {
    f.meta().map(|m| (m.prime, m.power))
}

/// Entrywise `F_R g + F_S f - f g` for `f = fR`, `g = fS`, all at one level.
pub fn segre_density_finite(
    f_r: &StepFunction,
    cap_f_r: &StepFunction,
    f_s: &StepFunction,
    cap_f_s: &StepFunction,
) -> Result<StepFunction> {
    let all = [f_r, cap_f_r, f_s, cap_f_s];
    let q = f_r.q();
    if all.iter().any(|f| f.q() != q) {
        return Err(Error::MismatchedLevel("resolutions differ".into()));
    }
    if all.iter().any(|f| f.view() != View::Full) {
        return Err(Error::MismatchedLevel("inputs must use the full view".into()));
    }
    let levels: Vec<(u64, u32)> = all.iter().filter_map(|f| level_of(f)).collect();
    if levels.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::MismatchedLevel(format!("inputs come from levels {levels:?}")));
    }
    let expect_kind = |f: &StepFunction, kind: StepKind| f.meta().is_none_or(|m| m.kind == kind);
    if !expect_kind(f_r, StepKind::Density)
        || !expect_kind(f_s, StepKind::Density)
        || !expect_kind(cap_f_r, StepKind::HilbertSamuel)
        || !expect_kind(cap_f_s, StepKind::HilbertSamuel)
    {
        return Err(Error::MismatchedLevel(
            "expected (density, Hilbert-Samuel) pairs".into(),
        ));
    }
    // F_R is needed wherever g is stored, and F_S wherever f is.
    if cap_f_r.end() < f_s.end() || cap_f_s.end() < f_r.end() {
        return Err(Error::MismatchedLevel(
            "Hilbert-Samuel data does not cover the density support".into(),
        ));
    }
    let len = f_r.end().max(f_s.end());
    let values = (0..len)
        .map(|j| {
            let (f, g) = (f_r.value(j), f_s.value(j));
            cap_f_r.value(j) * &g + cap_f_s.value(j) * &f - f * g
        })
        .collect();
    let meta = match (f_r.meta(), f_s.meta()) {
        (Some(a), Some(b)) => Some(product_meta(a, b)),
        _ => None,
    };
    StepFunction::from_parts(q, View::Full, 0, values, meta)
}

fn product_meta(a: &StepMeta, b: &StepMeta) -> StepMeta {
    let mut h = Sha256::new();
    h.update(b"segre:");
    h.update(a.ring_hash.as_bytes());
    h.update(b":");
    h.update(b.ring_hash.as_bytes());
    StepMeta {
        prime: a.prime,
        power: a.power,
        dimension: a.dimension + b.dimension - 1,
        n0: a.n0.max(b.n0),
        mu: a.mu * b.mu,
        ring_hash: hex::encode(h.finalize()),
        kind: StepKind::SegreDensity,
    }
}

/// `F_S f + F_R g - f g` on piecewise polynomials; `F` vanishes for `x < 0`.
pub fn segre_density_limit(
    f_r: &PiecewisePoly,
    cap_f_r: &HSDensity,
    f_s: &PiecewisePoly,
    cap_f_s: &HSDensity,
) -> PiecewisePoly {
    let upper = [f_r.support_end(), f_s.support_end()]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or_else(Rational::zero);
    let big_r = cap_f_r.on_interval(&upper);
    let big_s = cap_f_s.on_interval(&upper);
    big_s.mul(f_r).add(&big_r.mul(f_s)).sub(&f_r.mul(f_s))
}

/// `k[x_0..x_{a-1}] # k[y_0..y_{b-1}]` as `k[z_ij]` modulo the 2x2 minors of
/// `(z_ij)`, with its graded maximal ideal. Variables are named `z{i}{j}`.
pub fn segre_of_polynomial_rings(a: usize, b: usize) -> Result<GradedPresentation> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("both factors need at least one variable".into()));
    }
    let n = a * b;
    let idx = |i: usize, j: usize| i * b + j;
    let names: Vec<String> = (0..a).flat_map(|i| (0..b).map(move |j| format!("z{i}{j}"))).collect();
    let unit = |v: &[usize]| {
        let mut e = vec![0u32; n];
        for &k in v {
            e[k] += 1;
        }
        e
    };
    let mut relations = Vec::new();
    for i in 0..a {
        for k in i + 1..a {
            for j in 0..b {
                for l in j + 1..b {
                    relations.push(IntPoly::new(vec![
                        (1, unit(&[idx(i, j), idx(k, l)])),
                        (-1, unit(&[idx(i, l), idx(k, j)])),
                    ]));
                }
            }
        }
    }
    let ideal = (0..n).map(|k| IntPoly::monomial(unit(&[k]))).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    GradedPresentation::new(&refs, (a + b - 1) as u32, relations, ideal)
}

/// Sufficient syntactic test for `I ∩ R_1 != 0`: some generator has degree 1.
pub fn has_linear_generator(presentation: &GradedPresentation) -> bool {
    presentation.generator_degrees().contains(&1)
}

/// `(F_R F_S)(x)` for reference: the Hilbert-Samuel density of `R # S`.
pub fn hs_density_product(a: &HSDensity, b: &HSDensity) -> HSDensity {
    let da = a.dimension as u64 - 1;
    let db = b.dimension as u64 - 1;
    // e0 x^da/da! * e0' x^db/db! = (e0 e0' C(da+db, da)) x^(da+db)/(da+db)!
    let mut binom = BigInt::one();
    for i in 0..da {
        binom = binom * BigInt::from(db + i + 1) / BigInt::from(i + 1);
    }
    HSDensity::new(a.e0() * b.e0() * binom, a.dimension + b.dimension - 1).expect("positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densityfn::density_function;
    use crate::exactalg::rational::{int, rat};
    use crate::piecewise::Piece;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn plane() -> GradedPresentation {
        GradedPresentation::polynomial_ring(&["x", "y"])
    }

    fn quartic() -> GradedPresentation {
        GradedPresentation::new(
            &["x", "y", "z"],
            2,
            vec![IntPoly::new(vec![
                (1, vec![4, 0, 0]),
                (1, vec![0, 4, 0]),
                (1, vec![0, 0, 4]),
            ])],
            vec![
                IntPoly::monomial(vec![1, 0, 0]),
                IntPoly::monomial(vec![0, 1, 0]),
                IntPoly::monomial(vec![0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hs_densities() {
        let fib = ModPFiber::new(&plane(), 2).unwrap();
        let f = hs_density(&fib.hilbert_data().unwrap());
        assert_eq!(f.eval(&rat(3, 2)), rat(3, 2));
        assert_eq!(f.eval(&int(-1)), int(0));
        let fib = ModPFiber::new(&quartic(), 5).unwrap();
        let f = hs_density(&fib.hilbert_data().unwrap());
        assert_eq!(f.e0(), &BigInt::from(4));
        assert_eq!(f.eval(&int(3)), int(12));
        let c = HSDensity::new(BigInt::from(5), 1).unwrap();
        assert_eq!(c.eval(&int(7)), int(5));
    }

    #[test]
    fn hs_partial_values() {
        let fib = ModPFiber::new(&plane(), 2).unwrap();
        let f = hs_partial(&fib, 1).unwrap();
        assert_eq!(f.values()[..4], [rat(1, 2), int(1), rat(3, 2), int(2)]);
        let fib = ModPFiber::new(&quartic(), 5).unwrap();
        let f = hs_partial(&fib, 1).unwrap();
        assert_eq!(f.value(0), rat(1, 5));
        assert_eq!(f.value(5), rat(18, 5));
    }

    #[test]
    fn segre_presentation_shape() {
        let p = segre_of_polynomial_rings(2, 2).unwrap();
        assert_eq!(p.dimension, 3);
        assert_eq!(p.relations.len(), 1);
        let rel = p.relations[0].normalized();
        assert_eq!(
            rel,
            IntPoly::new(vec![(1, vec![1, 0, 0, 1]), (-1, vec![0, 1, 1, 0])]).normalized()
        );
        let p = segre_of_polynomial_rings(2, 3).unwrap();
        assert_eq!(p.relations.len(), 3);
        assert!(has_linear_generator(&p));
        let fib = ModPFiber::new(&p, 3).unwrap();
        // dim (k[x0,x1] # k[y0,y1,y2])_j = (j+1) C(j+2, 2)
        let prefix = fib.hilbert_function_prefix(5).unwrap();
        let expect: Vec<u64> = (0..6u64).map(|j| (j + 1) * (j + 2) * (j + 1) / 2).collect();
        assert_eq!(prefix, expect);
    }

    #[test]
    fn finite_identity_at_entry_one() {
        let fib = ModPFiber::new(&plane(), 2).unwrap();
        let f = density_function(&fib, 1, View::Full).unwrap();
        let big = hs_partial(&fib, 1).unwrap();
        let s = segre_density_finite(&f, &big, &f, &big).unwrap();
        assert_eq!(s.value(1), int(1));
        assert_eq!(s.meta().unwrap().dimension, 3);
    }

    #[test]
    fn finite_identity_matches_direct_segre_fiber() {
        let pres = segre_of_polynomial_rings(2, 2).unwrap();
        for (p, n) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let fib = ModPFiber::new(&plane(), p).unwrap();
            let f = density_function(&fib, n, View::Full).unwrap();
            let big = hs_partial(&fib, n).unwrap();
            let combined = segre_density_finite(&f, &big, &f, &big).unwrap();
            let direct_fib = ModPFiber::new(&pres, p).unwrap();
            let direct = density_function(&direct_fib, n, View::Full).unwrap();
            assert!(combined.same_values(&direct), "p={p} n={n}");
        }
    }

    #[test]
    fn mismatched_levels_are_rejected() {
        let f2 = density_function(&ModPFiber::new(&plane(), 2).unwrap(), 1, View::Full).unwrap();
        let b2 = hs_partial(&ModPFiber::new(&plane(), 2).unwrap(), 1).unwrap();
        let f4 = density_function(&ModPFiber::new(&plane(), 2).unwrap(), 2, View::Full).unwrap();
        assert_eq!(
            segre_density_finite(&f2, &b2, &f4, &b2).unwrap_err().name(),
            "MismatchedLevel"
        );
        assert_eq!(
            segre_density_finite(&f2, &f2, &f2, &b2).unwrap_err().name(),
            "MismatchedLevel"
        );
        assert_eq!(
            segre_density_finite(&f2.tail(), &b2, &f2, &b2).unwrap_err().name(),
            "MismatchedLevel"
        );
    }

    #[test]
    fn absorbing_and_identity_cases() {
        let big = StepFunction::new(3, vec![int(1), int(2), int(3)]).unwrap();
        let g = StepFunction::new(3, vec![int(1), int(1), int(2)]).unwrap();
        let zero = StepFunction::new(3, vec![]).unwrap();
        let out = segre_density_finite(&zero, &big, &g, &big).unwrap();
        for j in 0..3 {
            assert_eq!(out.value(j), big.value(j) * g.value(j));
        }
        let out = segre_density_finite(&big, &big, &big, &big).unwrap();
        for j in 0..3 {
            assert_eq!(out.value(j), big.value(j) * big.value(j));
        }
    }

    #[test]
    fn limit_of_two_lines() {
        // f = 2(1 - (x - 1)) on [1, 2], F = 2x
        let f = PiecewisePoly::new(vec![Piece {
            from: int(1),
            to: int(2),
            coeffs: vec![int(4), int(-2)],
        }])
        .unwrap();
        let big = HSDensity::new(BigInt::from(2), 2).unwrap();
        let s = segre_density_limit(&f, &big, &f, &big);
        assert_eq!(s.eval(&int(1)), int(4));
        assert_eq!(s.eval(&int(2)), int(0));
        assert_eq!(s.eval(&rat(1, 2)), int(0));
        // 2x(4-2x)*2 - (4-2x)^2 = (4-2x)(6x-4) at x = 3/2: 1 * 5
        assert_eq!(s.eval(&rat(3, 2)), int(5));
        assert_eq!(s.eval_left(&int(1)), int(0));
    }

    #[test]
    fn limit_against_direct_segre_fiber() {
        // tent for k[x,y]; F = x
        let tent = PiecewisePoly::new(vec![
            Piece {
                from: int(0),
                to: int(1),
                coeffs: vec![int(0), int(1)],
            },
            Piece {
                from: int(1),
                to: int(2),
                coeffs: vec![int(2), int(-1)],
            },
        ])
        .unwrap();
        let big = HSDensity::new(BigInt::one(), 2).unwrap();
        let limit = segre_density_limit(&tent, &big, &tent, &big);
        let fib = ModPFiber::new(&segre_of_polynomial_rings(2, 2).unwrap(), 3).unwrap();
        let direct = density_function(&fib, 2, View::Full).unwrap();
        // Both factors have l_j = q F((j+1)/q) and l(R_j) = q f((j+1)/q), so
        // the cell j agrees with the limit at its right end. The left end can
        // be off by up to 4/q, the slope of the limit near x = 2.
        let q = 9i64;
        for j in 0..(4 * q) {
            let v = direct.value(j as u64);
            assert_eq!(v, limit.eval(&rat(j + 1, q)), "j={j}");
            assert!((v - limit.eval(&rat(j, q))).abs() <= rat(4, q), "j={j}");
        }
    }

    #[test]
    fn hs_product() {
        let a = HSDensity::new(BigInt::from(4), 2).unwrap();
        let b = HSDensity::new(BigInt::from(3), 3).unwrap();
        let prod = hs_density_product(&a, &b);
        let x = rat(5, 3);
        assert_eq!(prod.eval(&x), a.eval(&x) * b.eval(&x));
    }

    fn arb_pair() -> impl Strategy<Value = (Rational, Rational)> {
        // (f, F) with 0 <= f <= F
        (0i64..10, 0i64..10).prop_map(|(a, b)| {
            let big = int(a.max(b));
            let small = int(a.min(b));
            (small, big)
        })
    }

    proptest! {
        #[test]
        fn output_is_bounded_and_monotone(
            r in prop::collection::vec((arb_pair(), 0i64..10), 1..8),
            s in prop::collection::vec((arb_pair(), 0i64..10), 1..8),
        ) {
            let len = r.len().min(s.len());
            let mk = |v: Vec<Rational>| StepFunction::new(4, v).unwrap();
            let f = mk(r[..len].iter().map(|((f, _), _)| f.clone()).collect());
            let big_r = mk(r[..len].iter().map(|((_, b), _)| b.clone()).collect());
            // f' <= f: shrink by an integer amount, clamped at zero
            let f_low = mk(r[..len].iter().map(|((f, _), k)| rational::max(f - int(*k), int(0))).collect());
            let g = mk(s[..len].iter().map(|((g, _), _)| g.clone()).collect());
            let big_s = mk(s[..len].iter().map(|((_, b), _)| b.clone()).collect());
            let g_low = mk(s[..len].iter().map(|((g, _), k)| rational::max(g - int(*k), int(0))).collect());
            let hi = segre_density_finite(&f, &big_r, &g, &big_s).unwrap();
            let lo = segre_density_finite(&f_low, &big_r, &g_low, &big_s).unwrap();
            for j in 0..len as u64 {
                prop_assert!(hi.value(j) >= int(0));
                prop_assert!(hi.value(j) <= big_r.value(j) * big_s.value(j));
                prop_assert!(hi.value(j) >= lo.value(j));
            }
        }
    }
}
