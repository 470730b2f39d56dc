//! Sorted sets of item indices.
//!
//! Items are stored 0-based. Text I/O (parsing and `Display`) uses the
//! 1-based, comma-separated form `1,2,4,5`; the empty set prints as an
//! empty string.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemSet {
    members: Vec<usize>,
}

impl ItemSet {
    pub fn empty() -> Self {
        ItemSet::default()
    }

    /// Builds a set from 0-based indices, sorting and removing duplicates.
    pub fn from_zero_based<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut members: Vec<usize> = items.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        ItemSet { members }
    }

    /// Builds a set from 1-based indices, rejecting 0 and anything above `n`.
    pub fn from_one_based(items: &[usize], n: usize) -> Result<Self> {
        for &item in items {
            if item == 0 || item > n {
                return Err(Error::ItemOutOfRange { item, n });
            }
        }
        Ok(Self::from_zero_based(items.iter().map(|i| i - 1)))
    }

    /// Parses `1,2,4,5` (whitespace tolerated, empty string is the empty set).
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(ItemSet::empty());
        }
        let items = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad item index {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&items, n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// 0-based members in ascending order.
    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.members.binary_search(&item).is_ok()
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&last) if last >= n => Err(Error::ItemOutOfRange { item: last + 1, n }),
            _ => Ok(()),
        }
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        Self::from_zero_based(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        ItemSet {
            members: self.iter().filter(|&i| !other.contains(i)).collect(),
        }
    }

    pub fn intersection_len(&self, other: &ItemSet) -> usize {
        self.iter().filter(|&i| other.contains(i)).count()
    }

    pub fn is_disjoint(&self, other: &ItemSet) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// 1-based members, for reporting.
    pub fn one_based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, item) in self.members.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", item + 1)?;
        }
        Ok(())
    }
}
