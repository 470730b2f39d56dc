//! Disjunct matrices: row bounds, random construction and verification.

pub mod bounds;
pub mod construct;
pub mod verify;

pub use bounds::{
    alpha, baseline_rows, chernoff_delta, chernoff_rows, chernoff_rows_formula, sharp_chernoff_rows,
    sharp_chernoff_rows_formula, sharp_delta, BoundParams, RowCount,
};
pub use construct::{generate, generate_verified, Construction, Generated, VerifiedMatrix};
pub use verify::{pair_count, verify_disjunct, verify_disjunct_with_cap, DisjunctWitness, Verdict, DEFAULT_PAIR_CAP};
