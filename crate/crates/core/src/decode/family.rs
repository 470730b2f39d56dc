//! The candidate family: `u`-sets that appear together in at most `e`
//! negative pools.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::combin::binomial_u128;
use crate::encode::t0_with_negatives;
use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::matrix::{BinaryMatrix, OutcomeVector};

/// Largest number of `u`-subsets a family build will examine.
pub const DEFAULT_FAMILY_CAP: u128 = 10_000_000;

/// A set of `u`-subsets of items, iterated in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    u: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Family {
    pub fn new(u: usize) -> Self {
        Family { u, edges: BTreeSet::new() }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// Inserts a sorted, duplicate-free `u`-subset (0-based).
    pub fn insert(&mut self, edge: Vec<usize>) -> Result<()> {
        if edge.len() != self.u || edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(format!(
                "family members must be sorted distinct {}-sets, got {edge:?}",
                self.u
            )));
        }
        self.edges.insert(edge);
        Ok(())
    }

    pub fn contains(&self, edge: &[usize]) -> bool {
        self.edges.contains(edge)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.iter().map(Vec::as_slice)
    }

    /// The lexicographically smallest member.
    pub fn first(&self) -> Option<&[usize]> {
        self.edges.first().map(Vec::as_slice)
    }

    /// Whether every `u`-subset of `set` is a member. Needs `|set| >= u`.
    pub fn is_u_complete(&self, set: &ItemSet) -> Result<bool> {
        if set.len() < self.u {
            return Err(Error::InvalidParams(format!(
                "completeness needs at least {} items, got {}",
                self.u,
                set.len()
            )));
        }
        Ok(self.covers_all(set.as_slice()))
    }

    pub(crate) fn covers_all(&self, items: &[usize]) -> bool {
        items
            .iter()
            .copied()
            .combinations(self.u)
            .all(|c| self.edges.contains(&c))
    }

    /// Like [`Family::covers_all`], checking only subsets that meet `fresh`.
    /// The caller guarantees the remaining subsets are already members.
    pub(crate) fn covers_all_touching(&self, items: &[usize], fresh: &[usize]) -> bool {
        items
            .iter()
            .copied()
            .combinations(self.u)
            .filter(|c| c.iter().any(|j| fresh.contains(j)))
            .all(|c| self.edges.contains(&c))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{{{}}}", e.iter().map(|j| (j + 1).to_string()).join(",")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// All `u`-subsets of `[n]` with `t0 <= e`.
pub fn build_family(m: &BinaryMatrix, y: &OutcomeVector, u: usize, e: usize) -> Result<Family> {
    let all = ItemSet::from_zero_based(0..m.cols());
    build_family_within(m, y, u, e, &all, DEFAULT_FAMILY_CAP)
}

/// All `u`-subsets of `vertices` with `t0 <= e`.
pub fn build_family_within(
    m: &BinaryMatrix,
    y: &OutcomeVector,
    u: usize,
    e: usize,
    vertices: &ItemSet,
    cap: u128,
) -> Result<Family> {
    y.check_rows(m)?;
    vertices.check_within(m.cols())?;
    if u == 0 {
        return Err(Error::InvalidParams("family needs u >= 1".into()));
    }
    let needed = binomial_u128(vertices.len(), u);
    if needed > cap {
        return Err(Error::CapExceeded {
            what: "family candidate u-subsets".into(),
            needed,
            cap,
        });
    }
    let negatives = y.negatives();
    let mut family = Family::new(u);
    for edge in vertices.iter().combinations(u) {
        if t0_with_negatives(m, &negatives, &edge) <= e {
            family.edges.insert(edge);
        }
    }
    Ok(family)
}
