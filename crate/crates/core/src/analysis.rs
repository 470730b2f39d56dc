//! Exact operation-count estimates for the decoders.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, Zero};

use crate::combin::binomial;
use crate::decode::w_bound;
use crate::disjunct::{baseline_rows, chernoff_rows_formula, BoundParams, RowCount};
use crate::error::{Error, Result};
use crate::params::TgtParams;

/// Which decoder/row-bound pairing to cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexityFormula {
    /// Complete extension on a matrix sized by the baseline bound.
    ExtensionBaselineRows,
    /// Complete extension on a matrix sized by the Chernoff bound.
    ExtensionChernoffRows,
    /// Greedy union on a Chernoff-sized matrix.
    GreedyUnion,
    /// Greedy union followed by extension, Chernoff-sized matrix.
    UnionThenExtension,
}

impl ComplexityFormula {
    pub const ALL: [ComplexityFormula; 4] = [
        ComplexityFormula::ExtensionBaselineRows,
        ComplexityFormula::ExtensionChernoffRows,
        ComplexityFormula::GreedyUnion,
        ComplexityFormula::UnionThenExtension,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ComplexityFormula::ExtensionBaselineRows => "thm3",
            ComplexityFormula::ExtensionChernoffRows => "thm6",
            ComplexityFormula::GreedyUnion => "thm7",
            ComplexityFormula::UnionThenExtension => "thm8",
        }
    }
}

impl fmt::Display for ComplexityFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ComplexityFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ComplexityFormula::ALL
            .into_iter()
            .find(|f| f.token() == s)
            .ok_or_else(|| Error::Parse(format!("unknown formula {s:?}, expected thm3, thm6, thm7 or thm8")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityReport {
    pub formula: ComplexityFormula,
    /// Number of tests `t` the cost is scaled by.
    pub tests: BigUint,
    /// Cost of building the candidate family: `t u C(n, u)`.
    pub family_term: BigUint,
    /// Cost of the extension phase.
    pub extension_term: BigUint,
    pub total: BigUint,
    /// Whether `(d + u)^2 / u <= n` held for the Chernoff row count (always
    /// true for the baseline count, which has no such requirement).
    pub size_condition_met: bool,
}

fn exact_rows(rows: &RowCount) -> Result<BigUint> {
    if !rows.rows.is_finite() {
        return Err(Error::Precondition(format!(
            "row count 10^{:.1} exceeds floating-point range",
            rows.log10_rows
        )));
    }
    // integer-valued f64, so the conversion is exact
    BigUint::from_f64(rows.rows).ok_or_else(|| Error::Precondition("row count is not representable".into()))
}

/// Operation count of `formula` for `params`. `s_size` is the true-set size
/// used in the union-then-extension width and defaults to `d`.
pub fn complexity(formula: ComplexityFormula, params: &TgtParams, s_size: Option<usize>) -> Result<ComplexityReport> {
    let TgtParams { n, d, ell, u, z } = *params;
    let g = params.g();
    let (rows, size_condition_met) = match formula {
        ComplexityFormula::ExtensionBaselineRows => (baseline_rows(n, d - ell, u, z)?, true),
        _ => {
            let bp = BoundParams::new(n, d - ell, u, z)?;
            (chernoff_rows_formula(&bp), bp.size_condition_holds())
        }
    };
    let tests = exact_rows(&rows)?;
    let per_test_family = BigUint::from(u) * binomial(n, u);
    let common = BigUint::from(d - u) * binomial(d - 1, g) * binomial(d, u);
    let extension_width = match formula {
        ComplexityFormula::ExtensionBaselineRows | ComplexityFormula::ExtensionChernoffRows => Some(n - u),
        ComplexityFormula::GreedyUnion => None,
        ComplexityFormula::UnionThenExtension => {
            let w = w_bound(s_size.unwrap_or(d), ell, u, g);
            Some(w + d - u)
        }
    };
    let family_term = &tests * per_test_family;
    let extension_term = match extension_width {
        Some(width) => &tests * BigUint::from(u) * common * binomial(width, g + 1),
        None => BigUint::zero(),
    };
    Ok(ComplexityReport {
        formula,
        total: &family_term + &extension_term,
        tests,
        family_term,
        extension_term,
        size_condition_met,
    })
}

/// Smallest `n` for which the extension-term comparison is stated:
/// `ceil(8 (2u - 1) / (8 - sqrt 7))`.
pub fn dominance_threshold(u: usize) -> usize {
    (8.0 * (2 * u - 1) as f64 / (8.0 - 7f64.sqrt())).ceil() as usize
}

/// Extension term against the family term in the regime `d = 2u`,
/// `ell = 0`, `g = u - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceCheck {
    pub u: usize,
    pub n: usize,
    /// `u C(n-u, u) C(2u-1, u-1) C(2u, u)`.
    pub extension: BigUint,
    /// `C(n, u)`.
    pub family: BigUint,
    pub extension_dominates: bool,
}

/// Compares the per-test extension cost with the family cost for `d = 2u`,
/// `ell = 0`. Requires `u >= 2` and `n` at least [`dominance_threshold`].
pub fn extension_term_dominance(u: usize, n: usize) -> Result<DominanceCheck> {
    if u < 2 {
        return Err(Error::InvalidParams(format!("need u >= 2, got {u}")));
    }
    let threshold = dominance_threshold(u);
    if n < threshold {
        return Err(Error::Precondition(format!("need n >= {threshold} for u = {u}, got n = {n}")));
    }
    let d = 2 * u;
    let extension = BigUint::from(u) * binomial(n - u, u) * binomial(d - 1, u - 1) * binomial(d, u);
    let family = binomial(n, u);
    Ok(DominanceCheck {
        u,
        n,
        extension_dominates: extension > family,
        extension,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_examples() {
        let c = extension_term_dominance(2, 6).unwrap();
        assert_eq!((c.extension.to_string(), c.family.to_string()), ("216".into(), "15".into()));
        assert!(c.extension_dominates);
        let c = extension_term_dominance(2, 5).unwrap();
        assert_eq!((c.extension.to_string(), c.family.to_string()), ("108".into(), "10".into()));
        assert!(extension_term_dominance(2, 4).is_err());
        assert!(extension_term_dominance(1, 40).is_err());
        assert_eq!(dominance_threshold(2), 5);
    }

    #[test]
    fn baseline_extension_cost_by_hand() {
        // n=6, d=4, ell=0, u=2, z=1: t = 509, g = 1
        let p = TgtParams::new(6, 4, 0, 2, 1).unwrap();
        let r = complexity(ComplexityFormula::ExtensionBaselineRows, &p, None).unwrap();
        assert_eq!(r.tests, BigUint::from(509u32));
        // 509 * 2 * 15
        assert_eq!(r.family_term, BigUint::from(15_270u32));
        // 509 * 2 * (4-2) * C(4,2) * C(3,1) * C(4,2) = 509 * 2 * 2 * 6 * 3 * 6
        assert_eq!(r.extension_term, BigUint::from(219_888u32));
        assert_eq!(r.total, BigUint::from(235_158u32));
    }

    #[test]
    fn union_formulas() {
        let p = TgtParams::new(100, 8, 1, 4, 3).unwrap();
        let t6 = complexity(ComplexityFormula::ExtensionChernoffRows, &p, None).unwrap();
        let t7 = complexity(ComplexityFormula::GreedyUnion, &p, None).unwrap();
        let t8 = complexity(ComplexityFormula::UnionThenExtension, &p, None).unwrap();
        assert!(t7.total < t6.total);
        assert!(t7.extension_term.is_zero());
        assert_eq!(t6.tests, t8.tests);
        assert!(t6.size_condition_met);
        // w = (8/2 + 3) * 2 = 14, width w + d - u = 18 < n - u = 96
        assert!(t8.extension_term < t6.extension_term);
        let smaller = complexity(ComplexityFormula::UnionThenExtension, &p, Some(2)).unwrap();
        assert!(smaller.total < t8.total);
    }

    #[test]
    fn tokens_round_trip() {
        for f in ComplexityFormula::ALL {
            assert_eq!(f.token().parse::<ComplexityFormula>().unwrap(), f);
        }
        assert!("thm2".parse::<ComplexityFormula>().is_err());
    }
}
