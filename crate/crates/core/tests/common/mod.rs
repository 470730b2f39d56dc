//! Oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use itertools::Itertools;
use tgt_core::{BinaryMatrix, ItemSet, OutcomeVector};

/// Runs the `tgt` binary and returns its output with the wall time.
pub fn run_cli(args: &[&str], cwd: &Path) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tgt"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("tgt binary runs");
    (out, start.elapsed())
}

/// Definition-level disjunct check, row by row, independent of the library
/// verifier. Returns the first violating `(zeros, ones)` pair with `ones`
/// outer and `zeros` inner in lexicographic order.
pub fn naive_disjunct(m: &BinaryMatrix, d: usize, r: usize, z: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = m.cols();
    for ones in (0..n).combinations(r) {
        let rest: Vec<usize> = (0..n).filter(|j| !ones.contains(j)).collect();
        for zeros in rest.into_iter().combinations(d) {
            let good = (0..m.rows())
                .filter(|&i| ones.iter().all(|&j| m.get(i, j)) && zeros.iter().all(|&j| !m.get(i, j)))
                .count();
            if good < z {
                return Some((zeros, ones));
            }
        }
    }
    None
}

/// All `u`-subsets of `[n]` in lexicographic order; a family is a bitmask
/// over this list.
pub fn u_subsets(n: usize, u: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(u).collect()
}

fn contains_all(m: &BinaryMatrix, row: usize, items: &[usize]) -> bool {
    items.iter().all(|&j| m.get(row, j))
}

/// Family bitmask read off an outcome vector by direct counting.
pub fn family_mask(m: &BinaryMatrix, y: &OutcomeVector, subsets: &[Vec<usize>], e: usize) -> u64 {
    let mut mask = 0u64;
    for (k, t) in subsets.iter().enumerate() {
        let t0 = (0..m.rows()).filter(|&i| !y.get(i) && contains_all(m, i, t)).count();
        if t0 <= e {
            mask |= 1 << k;
        }
    }
    mask
}

/// Row classes for a defective set.
pub struct RowClasses {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub gap: Vec<usize>,
}

pub fn classify(m: &BinaryMatrix, s: &ItemSet, ell: usize, u: usize) -> RowClasses {
    let mut c = RowClasses { positive: vec![], negative: vec![], gap: vec![] };
    for i in 0..m.rows() {
        let k = s.iter().filter(|&j| m.get(i, j)).count();
        if k >= u {
            c.positive.push(i);
        } else if k <= ell {
            c.negative.push(i);
        } else {
            c.gap.push(i);
        }
    }
    c
}

/// A family reachable by some gap assignment, with an outcome vector that
/// realises it.
pub struct Reachable {
    pub mask: u64,
    pub witness: OutcomeVector,
}

/// Every family `{T : t0(T) <= e}` reachable over all `2^|gap|` gap
/// assignments for defectives `s`, with the outcome of `flipped` (a
/// non-gap row) inverted when given.
///
/// A family depends on an assignment only through, for each `u`-set `T`,
/// the number of negative rows containing `T`, and only up to `e + 1`.
/// Gap rows containing the same live sets are interchangeable, so it is
/// enough to choose how many rows of each such class are negative, capped
/// at `e + 1`. Sets already above `e` from fixed rows never enter.
pub fn reachable_families(
    m: &BinaryMatrix,
    s: &ItemSet,
    ell: usize,
    u: usize,
    e: usize,
    flipped: Option<usize>,
    subsets: &[Vec<usize>],
) -> Vec<Reachable> {
    let classes = classify(m, s, ell, u);
    assert!(subsets.len() <= 16, "state packing holds 16 sets");
    let cap = (e + 1) as u64;

    let mut base_y = vec![false; m.rows()];
    for &i in &classes.positive {
        base_y[i] = true;
    }
    if let Some(f) = flipped {
        assert!(!classes.gap.contains(&f), "gap-row flips are gap assignments");
        base_y[f] = !base_y[f];
    }
    let mut is_gap = vec![false; m.rows()];
    for &i in &classes.gap {
        is_gap[i] = true;
    }
    let fixed: Vec<u64> = subsets
        .iter()
        .map(|t| (0..m.rows()).filter(|&i| !is_gap[i] && !base_y[i] && contains_all(m, i, t)).count() as u64)
        .collect();
    let live: Vec<usize> = (0..subsets.len()).filter(|&k| fixed[k] <= e as u64).collect();

    // 4 bits per live set, counts saturating at e + 1
    let mut start = 0u64;
    for (slot, &k) in live.iter().enumerate() {
        start |= fixed[k].min(cap) << (4 * slot);
    }

    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for &i in &classes.gap {
        let pattern = live
            .iter()
            .enumerate()
            .filter(|(_, &k)| contains_all(m, i, &subsets[k]))
            .fold(0u64, |acc, (slot, _)| acc | 1 << slot);
        groups.entry(pattern).or_default().push(i);
    }
    let groups: Vec<(u64, Vec<usize>)> = groups.into_iter().collect();

    // state -> negatives chosen per group
    let mut states: HashMap<u64, Vec<u8>> = HashMap::from([(start, Vec::new())]);
    for (pattern, rows) in &groups {
        let mut next: HashMap<u64, Vec<u8>> = HashMap::with_capacity(states.len() * 2);
        for (state, choice) in &states {
            let top = if *pattern == 0 { 0 } else { rows.len().min(e + 1) };
            for j in 0..=top {
                let mut st = *state;
                for slot in 0..live.len() {
                    if pattern >> slot & 1 == 1 {
                        let c = (st >> (4 * slot)) & 0xF;
                        let c = (c + j as u64).min(cap);
                        st = (st & !(0xF << (4 * slot))) | c << (4 * slot);
                    }
                }
                next.entry(st).or_insert_with(|| {
                    let mut v = choice.clone();
                    v.push(j as u8);
                    v
                });
            }
        }
        states = next;
    }

    let mut by_family: BTreeMap<u64, Vec<u8>> = BTreeMap::new();
    for (state, choice) in states {
        let mask = live
            .iter()
            .enumerate()
            .filter(|(slot, _)| (state >> (4 * slot)) & 0xF <= e as u64)
            .fold(0u64, |acc, (_, &k)| acc | 1 << k);
        by_family.entry(mask).or_insert(choice);
    }

    by_family
        .into_iter()
        .map(|(mask, choice)| {
            let mut y = base_y.clone();
            for ((_, rows), &j) in groups.iter().zip(&choice) {
                for (pos, &i) in rows.iter().enumerate() {
                    y[i] = pos >= j as usize;
                }
            }
            Reachable { mask, witness: OutcomeVector::new(y) }
        })
        .collect()
}

/// Non-gap rows whose flips act differently on the family: one
/// representative per (outcome, support) class.
pub fn distinct_fixed_flips(m: &BinaryMatrix, s: &ItemSet, ell: usize, u: usize) -> Vec<usize> {
    let classes = classify(m, s, ell, u);
    let mut seen = BTreeMap::new();
    for &i in classes.positive.iter().chain(&classes.negative) {
        let support: Vec<usize> = (0..m.cols()).filter(|&j| m.get(i, j)).collect();
        let positive = classes.positive.contains(&i);
        seen.entry((positive, support)).or_insert(i);
    }
    seen.into_values().collect()
}

/// Families reached by literally enumerating every gap assignment.
pub fn literal_families(
    m: &BinaryMatrix,
    s: &ItemSet,
    ell: usize,
    u: usize,
    e: usize,
    flipped: Option<usize>,
    subsets: &[Vec<usize>],
) -> std::collections::BTreeSet<u64> {
    let classes = classify(m, s, ell, u);
    assert!(classes.gap.len() <= 20, "literal sweep limited to 2^20 assignments");
    let mut out = std::collections::BTreeSet::new();
    for bits in 0u64..(1 << classes.gap.len()) {
        let mut y = vec![false; m.rows()];
        for &i in &classes.positive {
            y[i] = true;
        }
        for (pos, &i) in classes.gap.iter().enumerate() {
            y[i] = bits >> pos & 1 == 1;
        }
        if let Some(f) = flipped {
            y[f] = !y[f];
        }
        out.insert(family_mask(m, &OutcomeVector::new(y), subsets, e));
    }
    out
}
