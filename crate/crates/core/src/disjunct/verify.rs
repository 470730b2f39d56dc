//! Exhaustive disjunctness check.

use crate::bits::RowSet;
use crate::combin::binomial_u128;
use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::matrix::BinaryMatrix;

/// Largest number of `(S1, S2)` pairs [`verify_disjunct`] will examine.
pub const DEFAULT_PAIR_CAP: u128 = 100_000_000;

/// A pair violating the disjunct property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctWitness {
    /// The `d`-set that must be all-zero.
    pub zeros: ItemSet,
    /// The `r`-set that must be all-one.
    pub ones: ItemSet,
    /// Rows that do satisfy the pattern (fewer than `z`).
    pub covered_rows: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Disjunct,
    Violated(DisjunctWitness),
}

impl Verdict {
    pub fn is_disjunct(&self) -> bool {
        matches!(self, Verdict::Disjunct)
    }
}

/// Number of ordered pairs (`r`-set, disjoint `d`-set) out of `n` columns.
pub fn pair_count(n: usize, d: usize, r: usize) -> u128 {
    if d + r > n {
        return 0;
    }
    binomial_u128(n, r).saturating_mul(binomial_u128(n - r, d))
}

/// [`verify_disjunct_with_cap`] with [`DEFAULT_PAIR_CAP`].
pub fn verify_disjunct(m: &BinaryMatrix, d: usize, r: usize, z: usize) -> Result<Verdict> {
    verify_disjunct_with_cap(m, d, r, z, DEFAULT_PAIR_CAP)
}

/// Checks that for every `r`-set `S2` and disjoint `d`-set `S1` at least `z`
/// rows are all-one on `S2` and all-zero on `S1`.
///
/// Pairs are scanned with `S2` in lexicographic order and `S1` inner, so a
/// violation reported is the first one in that order.
pub fn verify_disjunct_with_cap(
    m: &BinaryMatrix,
    d: usize,
    r: usize,
    z: usize,
    cap: u128,
) -> Result<Verdict> {
    let n = m.cols();
    if r == 0 || z == 0 {
        return Err(Error::InvalidParams(format!("need r, z >= 1, got r={r}, z={z}")));
    }
    if d + r > n {
        return Err(Error::InvalidParams(format!("need d + r <= n, got {} > {n}", d + r)));
    }
    let needed = pair_count(n, d, r);
    if needed > cap {
        return Err(Error::CapExceeded {
            what: "disjunct verification pairs".into(),
            needed,
            cap,
        });
    }

    let mut search = Search {
        m,
        d,
        z,
        prefix: Vec::with_capacity(d),
        cand: Vec::with_capacity(n),
    };
    for ones in itertools::Itertools::combinations(0..n, r) {
        let rows = m.rows_containing(&ones);
        search.cand.clear();
        search.cand.extend((0..n).filter(|j| !ones.contains(j)));
        if let Some(zeros) = search.first_failure(0, &rows) {
            let mut covered = rows;
            for &j in &zeros {
                covered.and_not_assign(m.column(j));
            }
            return Ok(Verdict::Violated(DisjunctWitness {
                zeros: ItemSet::from_zero_based(zeros),
                ones: ItemSet::from_zero_based(ones),
                covered_rows: covered.count_ones(),
            }));
        }
    }
    Ok(Verdict::Disjunct)
}

struct Search<'a> {
    m: &'a BinaryMatrix,
    d: usize,
    z: usize,
    prefix: Vec<usize>,
    cand: Vec<usize>,
}

impl Search<'_> {
    /// Depth-first scan of `d`-subsets of `cand` in lexicographic order.
    /// Coverage only shrinks as columns are added, so once a prefix drops
    /// below `z` its smallest completion is the first failure.
    fn first_failure(&mut self, start: usize, remaining: &RowSet) -> Option<Vec<usize>> {
        let depth = self.prefix.len();
        if remaining.count_ones() < self.z {
            let mut out = self.prefix.clone();
            out.extend_from_slice(&self.cand[start..start + (self.d - depth)]);
            return Some(out);
        }
        if depth == self.d {
            return None;
        }
        let last = self.cand.len() - (self.d - depth);
        for i in start..=last {
            let j = self.cand[i];
            let mut next = remaining.clone();
            next.and_not_assign(self.m.column(j));
            self.prefix.push(j);
            let found = self.first_failure(i + 1, &next);
            self.prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}
