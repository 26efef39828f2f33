//! Column-sparse matrices over F_p and their rank.
//!
//! The matrices built by the colength code have very few nonzeros per
//! column (one per term of a relation or generator), so rank is computed by
//! sparse column elimination keyed on the leading (smallest) row index.

use std::collections::HashMap;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Width at or below which [`SparseColumnMatrix::rank_dense`] is allowed.
pub const DENSE_ORACLE_MAX_WIDTH: usize = 256;

/// A matrix stored as a list of sparse columns.
///
/// Each column is a list of `(row, value)` pairs sorted by row with no
/// duplicate rows and no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseColumnMatrix {
    field: PrimeField,
    rows: usize,
    columns: Vec<Vec<(u32, u32)>>,
}

impl SparseColumnMatrix {
    pub fn new(field: PrimeField, rows: usize) -> Self {
        SparseColumnMatrix {
            field,
            rows,
            columns: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<(u32, u32)>] {
        &self.columns
    }

    /// Append a column given as arbitrary `(row, residue)` pairs. Entries
    /// are reduced, duplicate rows summed, zeros dropped.
    pub fn push_column<I>(&mut self, entries: I) -> Result<()>
    where
        I: IntoIterator<Item = (usize, u32)>,
    {
        let f = self.field;
        let mut col: Vec<(u32, u32)> = Vec::new();
        for (row, v) in entries {
            if row >= self.rows {
                return Err(Error::InvalidInput(format!(
                    "row index {row} out of range for {} rows",
                    self.rows
                )));
            }
            col.push((row as u32, v % f.modulus()));
        }
        col.sort_unstable_by_key(|&(r, _)| r);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(col.len());
        for (r, v) in col {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 = f.add(last.1, v),
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0);
        self.columns.push(merged);
        Ok(())
    }

    /// Build from a dense row-major array of signed integers.
    pub fn from_dense(field: PrimeField, dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let mut m = SparseColumnMatrix::new(field, rows);
        for c in 0..cols {
            m.push_column((0..rows).map(|r| (r, field.reduce(dense[r][c]))))
                .expect("rows in range");
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0u32; self.columns.len()]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                out[r as usize][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                cols[r as usize].push((c as u32, v));
            }
        }
        SparseColumnMatrix {
            field: self.field,
            rows: self.columns.len(),
            columns: cols,
        }
    }

    /// Rank over F_p by sparse column elimination.
    ///
    /// Columns are processed shortest first (ties by original position).
    /// Each pivot is a reduced column normalized to a leading 1 at its
    /// smallest row; a new column is reduced against the pivot owning its
    /// current leading row until it either vanishes or claims a free row.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut order: Vec<usize> = (0..self.columns.len()).collect();
        order.sort_by_key(|&c| (self.columns[c].len(), c));

        let mut pivots: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
        let mut scratch: Vec<(u32, u32)> = Vec::new();
        for c in order {
            let mut col = self.columns[c].clone();
            while let Some(&(lead, coeff)) = col.first() {
                match pivots.get(&lead) {
                    Some(piv) => {
                        axpy_into(f, &col, f.neg(coeff), piv, &mut scratch);
                        std::mem::swap(&mut col, &mut scratch);
                    }
                    None => {
                        let scale = f.inv(coeff);
                        for e in col.iter_mut() {
                            e.1 = f.mul(e.1, scale);
                        }
                        pivots.insert(lead, col);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    /// Rank by dense Gaussian elimination. Only for small widths; used as an
    /// independent check of [`rank`](Self::rank).
    pub fn rank_dense(&self) -> usize {
        assert!(
            self.columns.len() <= DENSE_ORACLE_MAX_WIDTH,
            "dense oracle limited to {DENSE_ORACLE_MAX_WIDTH} columns"
        );
        dense_rank(self.field, self.to_dense())
    }
}

/// `out = a + s * b` for sorted sparse vectors, dropping zeros.
fn axpy_into(f: PrimeField, a: &[(u32, u32)], s: u32, b: &[(u32, u32)], out: &mut Vec<(u32, u32)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i]);
            i += 1;
        } else if rb < ra {
            out.push((rb, f.mul(s, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(s, b[j].1));
            if v != 0 {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
}

/// Row-echelon rank of a dense matrix over F_p.
pub fn dense_rank(f: PrimeField, mut m: Vec<Vec<u32>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = f.inv(m[rank][c]);
        for v in m[rank].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                for k in c..cols {
                    let sub = f.mul(factor, m[rank][k]);
                    m[r][k] = f.sub(m[r][k], sub);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
