//! Enumeration of monomials of a fixed degree, optionally outside a monomial ideal.

/// Membership test for a monomial ideal. Pure powers `x_i^a` become per-variable
/// exponent bounds so they prune enumeration; other monomials are checked by
/// divisibility.
#[derive(Debug, Clone, Default)]
pub struct MonomialFilter {
    bounds: Vec<u32>,
    others: Vec<Vec<u32>>,
}

impl MonomialFilter {
    pub fn none(nvars: usize) -> Self {
        MonomialFilter {
            bounds: vec![u32::MAX; nvars],
            others: Vec::new(),
        }
    }

    pub fn new<'a>(nvars: usize, generators: impl IntoIterator<Item = &'a [u32]>) -> Self {
        let mut f = MonomialFilter::none(nvars);
        for g in generators {
            let support: Vec<usize> = (0..nvars).filter(|&i| g[i] > 0).collect();
            match support.as_slice() {
                [i] => f.bounds[*i] = f.bounds[*i].min(g[*i]),
                _ => f.others.push(g.to_vec()),
            }
        }
        f
    }

    pub fn is_trivial(&self) -> bool {
        self.others.is_empty() && self.bounds.iter().all(|&b| b == u32::MAX)
    }

    /// True if `m` lies in the monomial ideal.
    pub fn contains(&self, m: &[u32]) -> bool {
        m.iter().zip(&self.bounds).any(|(e, b)| e >= b)
            || self.others.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b))
    }

    /// Monomials of total degree `degree` not in the ideal, in descending lex
    /// order (so the first variable's exponent is largest first).
    pub fn standard_monomials(&self, degree: u32) -> Vec<Vec<u32>> {
        let n = self.bounds.len();
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        // Largest total degree reachable by variables i.. under their bounds.
        let mut reach = vec![0u64; n + 1];
        for i in (0..n).rev() {
            let cap = if self.bounds[i] == u32::MAX {
                u64::MAX / 4
            } else {
                self.bounds[i] as u64 - 1
            };
            reach[i] = reach[i + 1].saturating_add(cap);
        }
        let mut cur = vec![0u32; n];
        self.fill(0, degree, &reach, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, left: u32, reach: &[u64], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if (left as u64) > reach[i] {
            return;
        }
        if i == n - 1 {
            if left < self.bounds[i] {
                cur[i] = left;
                if self.others.is_empty() || !self.contains(cur) {
                    out.push(cur.clone());
                }
            }
            return;
        }
        let hi = left.min(self.bounds[i].saturating_sub(1));
        for e in (0..=hi).rev() {
            cur[i] = e;
            self.fill(i + 1, left - e, reach, cur, out);
        }
        cur[i] = 0;
    }
}

/// Number of monomials of degree `degree` in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> u64 {
    if nvars == 0 {
        return u64::from(degree == 0);
    }
    // C(degree + nvars - 1, nvars - 1)
    let k = (nvars - 1) as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (degree as u128 + 1 + i as u128) / (i as u128 + 1);
    }
    acc as u64
}
