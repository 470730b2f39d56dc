//! Threshold-test encoding, gap resolution, noise injection and the
//! negative-pool counter `t0`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::matrix::{BinaryMatrix, OutcomeVector};

/// How outcomes of gap rows (`ell < |row ∩ x| < u`) are decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapPolicy {
    AlwaysPositive,
    AlwaysNegative,
    /// Each gap row is positive with probability 1/2.
    Bernoulli { seed: u64 },
    /// Per-row values keyed by 0-based row index. Every gap row must be
    /// covered and no other row may appear.
    Explicit(BTreeMap<usize, bool>),
}

/// Outcome errors applied after gap resolution.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum NoiseSpec {
    #[default]
    None,
    /// Flip these 0-based rows.
    FlipIndices(BTreeSet<usize>),
    /// Flip `count` distinct rows chosen uniformly at random.
    RandomFlips { count: usize, seed: u64 },
}

impl NoiseSpec {
    /// Resolves the rows to flip for a `rows`-long outcome vector.
    pub fn flipped_rows(&self, rows: usize) -> Result<Vec<usize>> {
        match self {
            NoiseSpec::None => Ok(Vec::new()),
            NoiseSpec::FlipIndices(set) => {
                if let Some(&bad) = set.iter().find(|&&r| r >= rows) {
                    return Err(Error::RowOutOfRange { row: bad + 1, rows });
                }
                Ok(set.iter().copied().collect())
            }
            NoiseSpec::RandomFlips { count, seed } => {
                if *count > rows {
                    return Err(Error::TooManyFlips { count: *count, rows });
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut picked = index::sample(&mut rng, rows, *count).into_vec();
                picked.sort_unstable();
                Ok(picked)
            }
        }
    }
}

/// Computes the outcome vector for defective set `x`.
///
/// Row `i` with `c = |row_i ∩ x|` is positive when `c >= u`, negative when
/// `c <= ell`, and otherwise decided by `policy`. Noise flips are applied
/// last.
pub fn encode(
    m: &BinaryMatrix,
    x: &ItemSet,
    ell: usize,
    u: usize,
    policy: &GapPolicy,
    noise: &NoiseSpec,
) -> Result<OutcomeVector> {
    if ell >= u {
        return Err(Error::InvalidParams(format!("need ell < u, got ell={ell}, u={u}")));
    }
    x.check_within(m.cols())?;
    let counts = m.defective_counts(x)?;
    let is_gap = |c: usize| c > ell && c < u;

    if let GapPolicy::Explicit(values) = policy {
        for (&row, _) in values.iter() {
            let count = *counts
                .get(row)
                .ok_or(Error::RowOutOfRange { row: row + 1, rows: m.rows() })?;
            if !is_gap(count) {
                return Err(Error::OverrideOnNonGapRow { row: row + 1, count, ell, u });
            }
        }
    }

    let mut rng = match policy {
        GapPolicy::Bernoulli { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut bits = Vec::with_capacity(m.rows());
    for (row, &c) in counts.iter().enumerate() {
        let bit = if c >= u {
            true
        } else if c <= ell {
            false
        } else {
            match policy {
                GapPolicy::AlwaysPositive => true,
                GapPolicy::AlwaysNegative => false,
                GapPolicy::Bernoulli { .. } => rng.as_mut().expect("seeded above").gen_bool(0.5),
                GapPolicy::Explicit(values) => {
                    *values.get(&row).ok_or(Error::UnresolvedGapRow { row: row + 1 })?
                }
            }
        };
        bits.push(bit);
    }
    let mut y = OutcomeVector::new(bits);
    for row in noise.flipped_rows(m.rows())? {
        y.flip(row);
    }
    Ok(y)
}

/// Rows whose defective count lies strictly between `ell` and `u`.
pub fn gap_rows(m: &BinaryMatrix, x: &ItemSet, ell: usize, u: usize) -> Result<Vec<usize>> {
    Ok(m.defective_counts(x)?
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > ell && c < u)
        .map(|(i, _)| i)
        .collect())
}

/// Minimum number of flipped outcomes needed to explain `y` from `x`, with
/// gap rows resolved in the best possible way (they never count).
pub fn check_consistency(
    m: &BinaryMatrix,
    x: &ItemSet,
    y: &OutcomeVector,
    ell: usize,
    u: usize,
) -> Result<usize> {
    y.check_rows(m)?;
    let counts = m.defective_counts(x)?;
    Ok(counts
        .iter()
        .zip(y.as_slice())
        .filter(|&(&c, &bit)| (c >= u && !bit) || (c <= ell && bit))
        .count())
}

/// Number of negative pools in which every column of `set` appears.
pub fn t0(m: &BinaryMatrix, y: &OutcomeVector, set: &ItemSet) -> Result<usize> {
    y.check_rows(m)?;
    if set.is_empty() {
        return Err(Error::InvalidParams("t0 needs a non-empty column set".into()));
    }
    set.check_within(m.cols())?;
    Ok(t0_with_negatives(m, &y.negatives(), set.as_slice()))
}

/// `t0` against a precomputed negative-row bitset.
pub(crate) fn t0_with_negatives(m: &BinaryMatrix, negatives: &crate::bits::RowSet, cols: &[usize]) -> usize {
    let mut acc = negatives.clone();
    for &j in cols {
        acc.and_assign(m.column(j));
    }
    acc.count_ones()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn rows_one_based(v: &[usize]) -> Vec<usize> {
        v.iter().map(|r| r + 1).collect()
    }

    #[test]
    fn explicit_policy_reproduces_worked_outcome() {
        let m = fixtures::worked_matrix();
        let x = fixtures::worked_defectives();
        let y = encode(&m, &x, 0, 2, &fixtures::worked_gap_policy(), &NoiseSpec::None).unwrap();
        assert_eq!(y, fixtures::worked_outcome());
    }

    #[test]
    fn worked_gap_rows() {
        let m = fixtures::worked_matrix();
        let gaps = gap_rows(&m, &fixtures::worked_defectives(), 0, 2).unwrap();
        assert_eq!(rows_one_based(&gaps), vec![2, 5, 6, 9, 10, 11, 14, 15, 18, 20]);
    }

    #[test]
    fn always_positive_sets_gap_rows() {
        let m = fixtures::worked_matrix();
        let x = fixtures::worked_defectives();
        let y = encode(&m, &x, 0, 2, &GapPolicy::AlwaysPositive, &NoiseSpec::None).unwrap();
        // hand count: rows with >= 2 of {1,2,4,5} are 1,3,4,7,8,13,16,17,19
        let mut expected = vec![false; 20];
        for r in [1, 3, 4, 7, 8, 13, 16, 17, 19, 2, 5, 6, 9, 10, 11, 14, 15, 18, 20] {
            expected[r - 1] = true;
        }
        assert_eq!(y.as_slice(), &expected[..]);
        assert!(!y.get(11));
    }

    #[test]
    fn empty_defective_set_gives_all_negative() {
        let m = fixtures::worked_matrix();
        for policy in [GapPolicy::AlwaysPositive, GapPolicy::Bernoulli { seed: 3 }] {
            let y = encode(&m, &ItemSet::empty(), 0, 2, &policy, &NoiseSpec::None).unwrap();
            assert_eq!(y.positives(), 0);
        }
    }

    #[test]
    fn explicit_override_errors() {
        let m = fixtures::worked_matrix();
        let x = fixtures::worked_defectives();
        // row 1 holds two defectives
        let policy = GapPolicy::Explicit(BTreeMap::from([(0, false)]));
        assert!(matches!(
            encode(&m, &x, 0, 2, &policy, &NoiseSpec::None),
            Err(Error::OverrideOnNonGapRow { row: 1, count: 2, .. })
        ));
        let policy = GapPolicy::Explicit(BTreeMap::from([(1, true)]));
        assert!(matches!(
            encode(&m, &x, 0, 2, &policy, &NoiseSpec::None),
            Err(Error::UnresolvedGapRow { row: 5 })
        ));
    }

    #[test]
    fn noise_errors_and_flips() {
        let m = fixtures::worked_matrix();
        let x = fixtures::worked_defectives();
        let too_many = NoiseSpec::RandomFlips { count: 21, seed: 0 };
        assert!(matches!(
            encode(&m, &x, 0, 2, &GapPolicy::AlwaysNegative, &too_many),
            Err(Error::TooManyFlips { .. })
        ));
        let out_of_range = NoiseSpec::FlipIndices(BTreeSet::from([20]));
        assert!(encode(&m, &x, 0, 2, &GapPolicy::AlwaysNegative, &out_of_range).is_err());

        let flips = NoiseSpec::FlipIndices(BTreeSet::from([0, 11]));
        let clean = encode(&m, &x, 0, 2, &GapPolicy::AlwaysNegative, &NoiseSpec::None).unwrap();
        let noisy = encode(&m, &x, 0, 2, &GapPolicy::AlwaysNegative, &flips).unwrap();
        assert_eq!(check_consistency(&m, &x, &noisy, 0, 2).unwrap(), 2);
        assert_eq!(clean.as_slice()[2..11], noisy.as_slice()[2..11]);
    }

    #[test]
    fn random_flips_are_deterministic() {
        let noise = NoiseSpec::RandomFlips { count: 3, seed: 42 };
        let a = noise.flipped_rows(20).unwrap();
        assert_eq!(a, noise.flipped_rows(20).unwrap());
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let m = fixtures::worked_matrix();
        let y = OutcomeVector::zeros(5);
        assert!(matches!(
            check_consistency(&m, &ItemSet::empty(), &y, 0, 2),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(encode(&m, &ItemSet::from_zero_based([6]), 0, 2, &GapPolicy::AlwaysNegative, &NoiseSpec::None).is_err());
    }

    #[test]
    fn consistency_examples() {
        let m = fixtures::worked_matrix();
        let x = fixtures::worked_defectives();
        let mut y = fixtures::worked_outcome();
        assert_eq!(check_consistency(&m, &x, &y, 0, 2).unwrap(), 0);
        // every 1 in y is unexplained when nobody is defective
        assert_eq!(check_consistency(&m, &ItemSet::empty(), &y, 0, 2).unwrap(), 14);
        y.flip(0);
        assert_eq!(check_consistency(&m, &x, &y, 0, 2).unwrap(), 1);
    }

    #[test]
    fn t0_examples() {
        let m = fixtures::worked_matrix();
        let y = fixtures::worked_outcome();
        let t = |items: &[usize]| t0(&m, &y, &ItemSet::from_one_based(items, 6).unwrap()).unwrap();
        assert_eq!(t(&[1, 2]), 0);
        assert_eq!(t(&[1, 3]), 1);
        assert_eq!(t(&[3, 6]), 3);
        assert!(t0(&m, &y, &ItemSet::empty()).is_err());
    }

    mod properties {
        use super::*;
        use crate::matrix::BinaryMatrix;
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = (BinaryMatrix, Vec<usize>, Vec<usize>, usize, usize)> {
            (1usize..12, 2usize..9).prop_flat_map(|(t, n)| {
                (
                    proptest::collection::vec(any::<bool>(), t * n),
                    proptest::collection::vec(0..n, 0..n),
                    proptest::collection::vec(0..n, 0..n),
                    0usize..3,
                    1usize..3,
                )
                    .prop_map(move |(bits, x, extra, ell, gap)| {
                        let m = BinaryMatrix::from_fn(t, n, |i, j| bits[i * n + j]).unwrap();
                        (m, x, extra, ell, ell + gap)
                    })
            })
        }

        proptest! {
            #[test]
            fn outcomes_monotone_in_defectives((m, x, extra, ell, u) in instance(), seed in any::<u64>()) {
                let small = ItemSet::from_zero_based(x.iter().copied());
                let big = small.union(&ItemSet::from_zero_based(extra.iter().copied()));
                for policy in [GapPolicy::AlwaysPositive, GapPolicy::AlwaysNegative] {
                    let a = encode(&m, &small, ell, u, &policy, &NoiseSpec::None).unwrap();
                    let b = encode(&m, &big, ell, u, &policy, &NoiseSpec::None).unwrap();
                    prop_assert!(a.as_slice().iter().zip(b.as_slice()).all(|(&p, &q)| !p || q));
                }
                let y = encode(&m, &big, ell, u, &GapPolicy::Bernoulli { seed }, &NoiseSpec::None).unwrap();
                prop_assert_eq!(check_consistency(&m, &big, &y, ell, u).unwrap(), 0);
            }

            #[test]
            fn t0_shrinks_on_supersets((m, x, extra, ell, u) in instance(), seed in any::<u64>()) {
                let y = encode(&m, &ItemSet::from_zero_based(x.iter().copied()), ell, u, &GapPolicy::Bernoulli { seed }, &NoiseSpec::None).unwrap();
                let small = ItemSet::from_zero_based(extra.iter().copied().take(1));
                let big = small.union(&ItemSet::from_zero_based(extra.iter().copied()));
                if !small.is_empty() {
                    prop_assert!(t0(&m, &y, &big).unwrap() <= t0(&m, &y, &small).unwrap());
                }
            }

            #[test]
            fn flips_add_exactly_their_count((m, x, _extra, ell, u) in instance(), count in 0usize..4, seed in any::<u64>()) {
                let x = ItemSet::from_zero_based(x.iter().copied());
                let noise = NoiseSpec::RandomFlips { count: count.min(m.rows()), seed };
                let y = encode(&m, &x, ell, u, &GapPolicy::AlwaysNegative, &noise).unwrap();
                let clean = encode(&m, &x, ell, u, &GapPolicy::AlwaysNegative, &NoiseSpec::None).unwrap();
                let diff = y.as_slice().iter().zip(clean.as_slice()).filter(|(a, b)| a != b).count();
                prop_assert_eq!(diff, count.min(m.rows()));
            }
        }
    }
}
