//! Mod-p fibers of a graded presentation and graded-piece dimensions of
//! their quotients, computed by rank of degreewise multiplication matrices.

use std::collections::HashMap;

use rayon::prelude::*;

use super::hilbert::{fit_hilbert_data, HilbertData};
use super::monomials::{monomial_count, MonomialFilter};
use super::presentation::GradedPresentation;
use crate::error::{Error, Result};
use crate::exactalg::{reduce_integer_poly, ModPoly, PrimeField, SparseColumnMatrix};

/// Knobs shared by all degreewise computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComputeOptions {
    /// Hard upper bound on any degree (and on any Frobenius power q).
    pub degree_cap: u64,
    /// Treat monomial generators by restricting the monomial basis instead of
    /// adding matrix columns.
    pub monomial_shortcut: bool,
}

pub const DEFAULT_DEGREE_CAP: u64 = 4096;

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
            monomial_shortcut: true,
        }
    }
}

/// The reduction mod p of a [`GradedPresentation`], with its `n0`.
///
/// Geometric integrality of the fiber is not checked; supplying a presentation
/// whose reductions are domains for the primes used is the caller's job.
#[derive(Debug, Clone)]
pub struct ModPFiber {
    field: PrimeField,
    nvars: usize,
    dimension: u32,
    relations: Vec<ModPoly>,
    generators: Vec<ModPoly>,
    n0: u64,
    ring_hash: String,
    options: ComputeOptions,
}

impl ModPFiber {
    pub fn new(presentation: &GradedPresentation, p: u64) -> Result<Self> {
        ModPFiber::with_options(presentation, p, ComputeOptions::default())
    }

    /// Reduce mod p and witness finite colength. Errors with `BadPrime` if any
    /// relation or generator vanishes mod p, and `InfiniteColength` if no `n0`
    /// is found below `4 * max(d_i) * mu`.
    pub fn with_options(presentation: &GradedPresentation, p: u64, options: ComputeOptions) -> Result<Self> {
        presentation.validate()?;
        let field = PrimeField::new(p)?;
        let relations = presentation
            .relations
            .iter()
            .map(|r| reduce_integer_poly(r, field))
            .collect::<Result<Vec<_>>>()?;
        let generators = presentation
            .ideal
            .iter()
            .map(|g| reduce_integer_poly(g, field))
            .collect::<Result<Vec<_>>>()?;
        let mut fiber = ModPFiber {
            field,
            nvars: presentation.nvars(),
            dimension: presentation.dimension,
            relations,
            generators,
            n0: 0,
            ring_hash: presentation.content_hash(),
            options,
        };
        fiber.n0 = fiber.find_n0()?;
        Ok(fiber)
    }

    pub fn prime(&self) -> u64 {
        self.field.modulus() as u64
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn relations(&self) -> &[ModPoly] {
        &self.relations
    }

    pub fn generators(&self) -> &[ModPoly] {
        &self.generators
    }

    pub fn mu(&self) -> u64 {
        self.generators.len() as u64
    }

    /// Smallest n with `R_n` inside `I`.
    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn ring_hash(&self) -> &str {
        &self.ring_hash
    }

    pub fn options(&self) -> ComputeOptions {
        self.options
    }

    /// `q = p^n`, checked against the degree cap.
    pub fn frobenius_q(&self, n: u32) -> Result<u64> {
        let p = self.prime();
        let overflow = Error::Overflow {
            prime: p,
            power: n,
            cap: self.options.degree_cap,
        };
        match p.checked_pow(n) {
            Some(q) if q <= self.options.degree_cap => Ok(q),
            _ => Err(overflow),
        }
    }

    /// Generators of the Frobenius power `I^[q]`, `q = p^n`: `g_i^q`, of
    /// degree `d_i q`.
    pub fn frobenius_power(&self, n: u32) -> Result<Vec<ModPoly>> {
        if n == 0 {
            return Err(Error::InvalidInput("Frobenius power needs n >= 1".into()));
        }
        let q = self.frobenius_q(n)?;
        self.generators.iter().map(|g| g.frobenius(q)).collect()
    }

    /// Degree past which `R/I^[q]` vanishes: `n0 * mu * q`.
    pub fn support_bound(&self, q: u64) -> u64 {
        self.n0 * self.mu() * q
    }

    /// `dim_k (k[x]/(relations + extra))_j`.
    pub fn graded_piece_dim(&self, extra: &[ModPoly], j: u64) -> Result<u64> {
        if j > self.options.degree_cap {
            return Err(Error::DegreeCapExceeded {
                needed: j,
                cap: self.options.degree_cap,
            });
        }
        Ok(self.piece_dim(extra, j as u32))
    }

    /// Graded-piece dimensions for every degree in `degrees`, evaluated in
    /// parallel and returned in degree order.
    pub fn graded_piece_dims(&self, extra: &[ModPoly], degrees: std::ops::Range<u64>) -> Result<Vec<u64>> {
        if degrees.end > 0 && degrees.end - 1 > self.options.degree_cap {
            return Err(Error::DegreeCapExceeded {
                needed: degrees.end - 1,
                cap: self.options.degree_cap,
            });
        }
        let degrees: Vec<u64> = degrees.collect();
        Ok(degrees
            .into_par_iter()
            .map(|j| self.piece_dim(extra, j as u32))
            .collect())
    }

    /// `l(R_j)` for `j = 0..=up_to`.
    pub fn hilbert_function_prefix(&self, up_to: u64) -> Result<Vec<u64>> {
        self.graded_piece_dims(&[], 0..up_to + 1)
    }

    /// `l(R/I^[q])_j` for `0 <= j < n0 mu q`.
    pub fn frobenius_lengths(&self, n: u32) -> Result<Vec<u64>> {
        let gens = self.frobenius_power(n)?;
        let q = self.frobenius_q(n)?;
        let bound = self.support_bound(q);
        self.graded_piece_dims(&gens, 0..bound)
    }

    /// `l(R/I^[q])`, summing graded pieces below the support bound.
    pub fn colength(&self, n: u32) -> Result<u64> {
        Ok(self.frobenius_lengths(n)?.iter().sum())
    }

    /// Check that `l(R/I^[q])_j = 0` on `d + 2` degrees past the support bound.
    pub fn support_margin_vanishes(&self, n: u32) -> Result<bool> {
        let gens = self.frobenius_power(n)?;
        let bound = self.support_bound(self.frobenius_q(n)?);
        let margin = self.graded_piece_dims(&gens, bound..bound + self.dimension as u64 + 2)?;
        Ok(margin.iter().all(|&v| v == 0))
    }

    /// Hilbert data fitted from a growing Hilbert-function prefix.
    pub fn hilbert_data(&self) -> Result<HilbertData> {
        let d = self.dimension as u64;
        let rel_degrees: u64 = self.relations.iter().map(|r| r.degree() as u64).sum();
        let mut up_to = rel_degrees + 2 * d + 6;
        loop {
            let capped = up_to.min(self.options.degree_cap);
            let prefix = self.hilbert_function_prefix(capped)?;
            match fit_hilbert_data(&prefix, self.dimension) {
                Ok(h) => return Ok(h),
                Err(e) if capped >= self.options.degree_cap => return Err(e),
                Err(_) => up_to *= 2,
            }
        }
    }

    /// Smallest n with `l(R/I)_n = 0`, witnessed on the next `d + 2` degrees.
    fn find_n0(&self) -> Result<u64> {
        let max_deg = self.generators.iter().map(|g| g.degree() as u64).max().unwrap_or(1);
        let cap = (4 * max_deg * self.mu()).min(self.options.degree_cap);
        let witness = self.dimension as u64 + 2;
        let mut n = 1;
        while n <= cap {
            if self.piece_dim(&self.generators, n as u32) == 0 {
                let tail_ok = (n + 1..=n + witness).all(|j| self.piece_dim(&self.generators, j as u32) == 0);
                if tail_ok {
                    return Ok(n);
                }
            }
            n += 1;
        }
        Err(Error::InfiniteColength { cap })
    }

    fn piece_dim(&self, extra: &[ModPoly], j: u32) -> u64 {
        let (monomial_gens, poly_gens): (Vec<&ModPoly>, Vec<&ModPoly>) = if self.options.monomial_shortcut {
            extra.iter().partition(|g| g.as_monomial().is_some())
        } else {
            (Vec::new(), extra.iter().collect())
        };
        let filter = MonomialFilter::new(
            self.nvars,
            monomial_gens.iter().map(|g| g.as_monomial().expect("partitioned")),
        );
        let column_gens: Vec<&ModPoly> = self
            .relations
            .iter()
            .chain(poly_gens)
            .filter(|g| g.degree() <= j)
            .collect();
        if column_gens.is_empty() && filter.is_trivial() {
            return monomial_count(self.nvars, j);
        }
        let basis = filter.standard_monomials(j);
        if basis.is_empty() || column_gens.is_empty() {
            return basis.len() as u64;
        }
        let index: HashMap<&[u32], usize> = basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut matrix = SparseColumnMatrix::new(self.field, basis.len());
        let mut prod = vec![0u32; self.nvars];
        for g in column_gens {
            for m in filter.standard_monomials(j - g.degree()) {
                let mut entries = Vec::with_capacity(g.terms().len());
                for (e, c) in g.terms() {
                    for (k, slot) in prod.iter_mut().enumerate() {
                        *slot = m[k] + e[k];
                    }
                    if let Some(&row) = index.get(prod.as_slice()) {
                        entries.push((row, *c));
                    }
                }
                if !entries.is_empty() {
                    matrix.push_column(entries).expect("rows come from the basis index");
                }
            }
        }
        (basis.len() - matrix.rank()) as u64
    }
}
