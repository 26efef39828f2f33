use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{self, Rational};

/// Which part of the half line a step function is stored on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    /// Entries from `j = 0`, covering `x >= 0`.
    Full,
    /// Entries from `j = q`, covering `x >= 1`.
    Tail,
}

impl std::str::FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(View::Full),
            "tail" => Ok(View::Tail),
            other => Err(Error::InvalidInput(format!("unknown view {other:?}"))),
        }
    }
}

impl std::fmt::Display for View {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            View::Full => "full",
            View::Tail => "tail",
        })
    }
}

/// What the entries of a step function measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// `l(R/I^[q])_j / q^(d-1)`.
    Density,
    /// `l(R_j) / q^(d-1)`.
    HilbertSamuel,
    /// Density of a Segre product assembled from its factors.
    SegreDensity,
}

/// Where a computed step function came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepMeta {
    pub prime: u64,
    pub power: u32,
    pub dimension: u32,
    pub n0: u64,
    pub mu: u64,
    pub ring_hash: String,
    pub kind: StepKind,
}

/// Right-continuous step function on the grid `1/q`: entry `i` is the value
/// on `[(start + i)/q, (start + i + 1)/q)`, and the function is zero outside
/// the stored entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFunction {
    q: u64,
    view: View,
    start: u64,
    #[serde(with = "rational::serde_rational_vec")]
    values: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<StepMeta>,
}

impl StepFunction {
    /// Step function stored from `j = 0`.
    pub fn new(q: u64, values: Vec<Rational>) -> Result<Self> {
        StepFunction::from_parts(q, View::Full, 0, values, None)
    }

    pub fn from_parts(q: u64, view: View, start: u64, values: Vec<Rational>, meta: Option<StepMeta>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("step resolution q must be positive".into()));
        }
        if view == View::Tail && start < q {
            return Err(Error::InvalidInput(format!("tail view must start at j >= q = {q}")));
        }
        Ok(StepFunction {
            q,
            view,
            start,
            values,
            meta,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn view(&self) -> View {
        self.view
    }

    /// Index `j` of the first stored entry.
    pub fn start(&self) -> u64 {
        self.start
    }

    /// One past the last stored index.
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn meta(&self) -> Option<&StepMeta> {
        self.meta.as_ref()
    }

    /// Value on the cell `[j/q, (j+1)/q)`.
    pub fn value(&self, j: u64) -> Rational {
        if j < self.start {
            return Rational::zero();
        }
        self.values
            .get((j - self.start) as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Value at `x`, i.e. entry `floor(x q)`.
    pub fn value_at(&self, x: &Rational) -> Rational {
        if x.is_negative() {
            return Rational::zero();
        }
        let cell = (x * BigInt::from(self.q)).floor().to_integer();
        match u64::try_from(cell) {
            Ok(j) => self.value(j),
            Err(_) => Rational::zero(),
        }
    }

    /// The same data restricted to `x >= 1`.
    pub fn tail(&self) -> StepFunction {
        let from = self.start.max(self.q);
        let values = (from..self.end().max(from)).map(|j| self.value(j)).collect();
        StepFunction {
            q: self.q,
            view: View::Tail,
            start: from,
            values,
            meta: self.meta.clone(),
        }
    }

    /// The same function with trailing zero entries dropped.
    pub fn trimmed(&self) -> StepFunction {
        let keep = self.values.iter().rposition(|v| !v.is_zero()).map_or(0, |i| i + 1);
        StepFunction {
            values: self.values[..keep].to_vec(),
            ..self.clone()
        }
    }

    /// Equality as functions: same grid and the same value on every cell.
    pub fn same_values(&self, other: &StepFunction) -> bool {
        self.q == other.q && {
            let lo = self.start.min(other.start);
            let hi = self.end().max(other.end());
            (lo..hi).all(|j| self.value(j) == other.value(j))
        }
    }

    /// `l_j = value_j * q^(d-1)` for every stored entry, when those are
    /// non-negative integers. Needs metadata for `d`.
    pub fn lengths(&self) -> Option<Vec<BigInt>> {
        let d = self.meta.as_ref()?.dimension;
        let scale = num_traits::pow(BigInt::from(self.q), d as usize - 1);
        self.values
            .iter()
            .map(|v| {
                let l = v * &scale;
                (l.is_integer() && !l.is_negative()).then(|| l.to_integer())
            })
            .collect()
    }

    /// `sum_j values_j / q`.
    pub fn integrate(&self) -> Rational {
        let s: Rational = self.values.iter().sum();
        s / BigInt::from(self.q)
    }

    /// CSV with header `j,x_lo,num,den`. `x_lo = j/q` is a decimal for plotting
    /// only; the exact value is `num/den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,x_lo,num,den\n");
        for (i, v) in self.values.iter().enumerate() {
            let j = self.start + i as u64;
            let x = j as f64 / self.q as f64;
            writeln!(out, "{j},{x:?},{},{}", v.numer(), v.denom()).expect("write to string");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("step function serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: StepFunction =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("step function: {e}")))?;
        StepFunction::from_parts(f.q, f.view, f.start, f.values, f.meta)
    }
}

/// Exact `sup |f - g|` over the finer of the two grids.
pub fn sup_norm_diff(f: &StepFunction, g: &StepFunction) -> Result<Rational> {
    let (qf, qg) = (f.q(), g.q());
    let fine = qf.max(qg);
    let coarse = qf.min(qg);
    if fine % coarse != 0 {
        return Err(Error::IncompatibleGrids(qf, qg));
    }
    let (sf, sg) = (fine / qf, fine / qg);
    let lo = (f.start() * sf).min(g.start() * sg);
    let hi = (f.end() * sf).max(g.end() * sg);
    let mut best = Rational::zero();
    for k in lo..hi {
        let diff = (f.value(k / sf) - g.value(k / sg)).abs();
        if diff > best {
            best = diff;
        }
    }
    Ok(best)
}

/// `int f`, exact.
pub fn integrate(f: &StepFunction) -> Rational {
    f.integrate()
}
