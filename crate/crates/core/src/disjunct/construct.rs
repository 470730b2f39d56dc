//! Random construction of disjunct matrices.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bounds::{chernoff_rows_formula, sharp_chernoff_rows_formula, BoundParams, RowCount};
use super::verify::{pair_count, verify_disjunct_with_cap, Verdict};
use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// Largest matrix (`rows * n` entries) [`generate`] will allocate.
pub const MAX_GENERATED_ENTRIES: u128 = 1 << 31;

/// Which row bound sizes the random matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Construction {
    #[default]
    Chernoff,
    SharpChernoff,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Chernoff => "thm4",
            Construction::SharpChernoff => "thm5",
        })
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm4" => Ok(Construction::Chernoff),
            "thm5" => Ok(Construction::SharpChernoff),
            other => Err(Error::Parse(format!("unknown construction {other:?}, expected thm4 or thm5"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub matrix: BinaryMatrix,
    pub rows: RowCount,
    /// Entry probability `u / (d + u)`.
    pub p: f64,
    /// Whether `(d + u)^2 / u <= n` held. Generation proceeds either way;
    /// without it the matrix is only likely disjunct and should be verified.
    pub size_condition_met: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifiedMatrix {
    pub generated: Generated,
    /// Number of matrices drawn, including the accepted one.
    pub attempts: usize,
}

fn plan(n: usize, d: usize, u: usize, z: usize, construction: Construction) -> Result<(BoundParams, RowCount, usize)> {
    let bp = BoundParams::new(n, d, u, z)?;
    if u < 2 || u > d {
        return Err(Error::Precondition(format!("need 2 <= u <= d, got u={u}, d={d}")));
    }
    let rows = match construction {
        Construction::Chernoff => chernoff_rows_formula(&bp),
        Construction::SharpChernoff => sharp_chernoff_rows_formula(&bp)?,
    };
    let entries = rows.rows * n as f64;
    if !(entries <= MAX_GENERATED_ENTRIES as f64) {
        return Err(Error::CapExceeded {
            what: "generated matrix entries".into(),
            needed: if entries.is_finite() { entries as u128 } else { u128::MAX },
            cap: MAX_GENERATED_ENTRIES,
        });
    }
    let t = rows.rows as usize;
    Ok((bp, rows, t))
}

fn draw(rng: &mut ChaCha8Rng, bp: &BoundParams, rows: RowCount, t: usize) -> Result<Generated> {
    let matrix = BinaryMatrix::from_fn(t, bp.n, |_, _| rng.gen_bool(bp.p))?;
    Ok(Generated {
        matrix,
        rows,
        p: bp.p,
        size_condition_met: bp.size_condition_holds(),
    })
}

/// Draws a `rows x n` matrix with i.i.d. Bernoulli(`u / (d + u)`) entries,
/// `rows` given by the chosen bound for `(n, d, u; z]`.
pub fn generate(
    n: usize,
    d: usize,
    u: usize,
    z: usize,
    seed: u64,
    construction: Construction,
) -> Result<Generated> {
    let (bp, rows, t) = plan(n, d, u, z, construction)?;
    draw(&mut ChaCha8Rng::seed_from_u64(seed), &bp, rows, t)
}

/// Like [`generate`], but redraws from the same random stream until the
/// matrix passes exhaustive verification, giving up after `max_attempts`.
#[allow(clippy::too_many_arguments)]
pub fn generate_verified(
    n: usize,
    d: usize,
    u: usize,
    z: usize,
    seed: u64,
    construction: Construction,
    max_attempts: usize,
    pair_cap: u128,
) -> Result<VerifiedMatrix> {
    let needed = pair_count(n, d, u);
    if needed > pair_cap {
        return Err(Error::CapExceeded {
            what: "disjunct verification pairs".into(),
            needed,
            cap: pair_cap,
        });
    }
    let (bp, rows, t) = plan(n, d, u, z, construction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let generated = draw(&mut rng, &bp, rows, t)?;
        if let Verdict::Disjunct = verify_disjunct_with_cap(&generated.matrix, d, u, z, pair_cap)? {
            return Ok(VerifiedMatrix { generated, attempts: attempt });
        }
    }
    Err(Error::AttemptsExhausted { attempts: max_attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunct::verify::{verify_disjunct, DEFAULT_PAIR_CAP};

    #[test]
    fn deterministic_and_sized() {
        let a = generate(12, 3, 2, 1, 7, Construction::Chernoff).unwrap();
        let b = generate(12, 3, 2, 1, 7, Construction::Chernoff).unwrap();
        assert_eq!(a, b);
        // formula value 1203.87...
        assert_eq!(a.matrix.rows(), 1204);
        assert_eq!(a.matrix.cols(), 12);
        assert!((a.p - 0.4).abs() < 1e-15);
        assert!(!a.size_condition_met);
        let c = generate(12, 3, 2, 1, 8, Construction::Chernoff).unwrap();
        assert_ne!(a.matrix, c.matrix);
    }

    #[test]
    fn density_close_to_p() {
        let g = generate(12, 3, 2, 1, 1, Construction::Chernoff).unwrap();
        let total = (g.matrix.rows() * g.matrix.cols()) as f64;
        let freq = g.matrix.ones() as f64 / total;
        // about 14450 entries: 5 standard deviations is 0.02
        assert!((freq - 0.4).abs() < 0.02, "density {freq}");
    }

    #[test]
    fn verified_matrix_passes() {
        let v = generate_verified(6, 4, 2, 1, 0, Construction::Chernoff, 10, DEFAULT_PAIR_CAP).unwrap();
        assert!(v.attempts >= 1);
        assert!(verify_disjunct(&v.generated.matrix, 4, 2, 1).unwrap().is_disjunct());
    }

    #[test]
    fn rejected_requests() {
        assert!(matches!(
            generate_verified(1_000_000, 18, 4, 3, 0, Construction::Chernoff, 10, DEFAULT_PAIR_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert!(generate(6, 4, 1, 1, 0, Construction::Chernoff).is_err());
        assert!(generate(6, 4, 2, 1, 0, Construction::SharpChernoff).is_err());
        assert!(matches!(
            generate(1_000_000_000, 900, 200, 3, 0, Construction::Chernoff),
            Err(Error::CapExceeded { .. })
        ));
    }
}
