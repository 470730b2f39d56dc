//! The standard worked instance: `n = 6, d = 4, ell = 0, u = 2, z = 1`,
//! defectives `{1, 2, 4, 5}`, a 20-row `(6, 4, 2; 1]`-disjunct matrix and
//! its observed outcome vector.

use std::collections::BTreeMap;

use crate::encode::GapPolicy;
use crate::items::ItemSet;
use crate::matrix::{BinaryMatrix, OutcomeVector};
use crate::params::TgtParams;

pub const WORKED_MATRIX: [[u8; 6]; 20] = [
    [1, 1, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0],
    [1, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 1],
    [0, 1, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 1],
    [0, 0, 1, 1, 0, 0],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 1, 0, 0, 1],
    [0, 0, 0, 1, 1, 0],
    [0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0],
    [0, 1, 1, 0, 1, 1],
    [0, 0, 1, 1, 0, 1],
    [1, 0, 1, 1, 0, 1],
    [1, 0, 1, 0, 0, 1],
];

pub const WORKED_OUTCOME: [u8; 20] = [1, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0];

pub fn worked_matrix() -> BinaryMatrix {
    BinaryMatrix::from_rows(&WORKED_MATRIX).expect("static matrix is well formed")
}

pub fn worked_outcome() -> OutcomeVector {
    OutcomeVector::from_bits(&WORKED_OUTCOME).expect("static outcome is well formed")
}

pub fn worked_defectives() -> ItemSet {
    ItemSet::from_zero_based([0, 1, 3, 4])
}

pub fn worked_params() -> TgtParams {
    TgtParams::new(6, 4, 0, 2, 1).expect("static params are valid")
}

/// Explicit gap values that reproduce [`WORKED_OUTCOME`] from the defectives.
pub fn worked_gap_policy() -> GapPolicy {
    let gap_rows = [1usize, 4, 5, 8, 9, 10, 13, 14, 17, 19];
    GapPolicy::Explicit(
        gap_rows
            .iter()
            .map(|&r| (r, WORKED_OUTCOME[r] == 1))
            .collect::<BTreeMap<_, _>>(),
    )
}
