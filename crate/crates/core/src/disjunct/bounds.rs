//! Row-count bounds for `(n, d, u; z]`-disjunct matrices.
//!
//! Three schemes are provided:
//!
//! * [`baseline_rows`]: `z (k/u)^u (k/d)^d [1 + k (1 + ln(n/k + 1))]`, the
//!   classical hypergraph-based bound.
//! * [`chernoff_rows`]: `3 alpha / (delta^2 q)` from the direct random
//!   construction, with `delta` the positive root of
//!   `z delta^2 + 3 alpha delta - 3 alpha = 0`.
//! * [`sharp_chernoff_rows`]: `floor(2 alpha / (delta^2 q)) + 1` with
//!   `z delta^2 + 2 alpha delta - 2 alpha = 0`, valid for
//!   `z >= 4 / beta^2 + 1`.
//!
//! Here `k = d + u`, `q = (u/k)^u (d/k)^d`,
//! `alpha = k ln(e n / k) + u ln(e k / u)` and `beta = 1 - 2 / alpha`.
//! `1/q` overflows quickly, so everything is evaluated in the log domain and
//! row counts are reported as integer-valued `f64`s.

use std::fmt;

use crate::error::{Error, Result};

/// Derived quantities shared by the random-construction bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub n: usize,
    pub d: usize,
    pub u: usize,
    pub z: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `ln(1/q)`; `q` itself underflows for large `d`.
    pub ln_inv_q: f64,
    /// Entry probability `u / k`.
    pub p: f64,
}

impl BoundParams {
    /// Checks only the domain of the formulas: `u, d, z >= 1` and `d + u <= n`.
    pub fn new(n: usize, d: usize, u: usize, z: usize) -> Result<Self> {
        if u == 0 || d == 0 || z == 0 {
            return Err(Error::Precondition(format!(
                "need u, d, z >= 1, got u={u}, d={d}, z={z}"
            )));
        }
        let k = d + u;
        if k > n {
            return Err(Error::Precondition(format!("need d + u <= n, got {k} > {n}")));
        }
        let alpha = alpha(k, u, n)?;
        let (kf, uf, df) = (k as f64, u as f64, d as f64);
        Ok(BoundParams {
            n,
            d,
            u,
            z,
            k,
            alpha,
            beta: 1.0 - 2.0 / alpha,
            ln_inv_q: uf * (kf / uf).ln() + df * (kf / df).ln(),
            p: uf / kf,
        })
    }

    pub fn q(&self) -> f64 {
        (-self.ln_inv_q).exp()
    }

    /// `(d + u)^2 / u <= n`, required by the random-construction theorems.
    pub fn size_condition_holds(&self) -> bool {
        let k = self.k as f64;
        k * k / self.u as f64 <= self.n as f64
    }

    /// Smallest admissible `z` for [`sharp_chernoff_rows`]: `4 / beta^2 + 1`.
    pub fn sharp_z_threshold(&self) -> f64 {
        4.0 / (self.beta * self.beta) + 1.0
    }

    fn check_size_condition(&self) -> Result<()> {
        if self.u < 2 || self.u > self.d {
            return Err(Error::Precondition(format!(
                "need 2 <= u <= d, got u={}, d={}",
                self.u, self.d
            )));
        }
        if !self.size_condition_holds() {
            let k = self.k as f64;
            return Err(Error::Precondition(format!(
                "(d+u)^2/u = {} > n = {}",
                fmt_real(k * k / self.u as f64),
                self.n
            )));
        }
        Ok(())
    }
}

/// `k ln(e n / k) + u ln(e k / u)`.
pub fn alpha(k: usize, u: usize, n: usize) -> Result<f64> {
    if u == 0 || u > k || k > n {
        return Err(Error::Precondition(format!(
            "alpha needs 1 <= u <= k <= n, got u={u}, k={k}, n={n}"
        )));
    }
    let (k, u, n) = (k as f64, u as f64, n as f64);
    Ok(k * (1.0 + (n / k).ln()) + u * (1.0 + (k / u).ln()))
}

/// Positive root of `z x^2 + c alpha x - c alpha = 0`, computed without
/// cancellation as `2 c alpha / (c alpha + sqrt(c^2 alpha^2 + 4 c alpha z))`.
fn chernoff_root(alpha: f64, z: f64, c: f64) -> f64 {
    let b = c * alpha;
    2.0 * b / (b + (b * b + 4.0 * b * z).sqrt())
}

/// `delta` for [`chernoff_rows`]: root of `z delta^2 + 3 alpha delta - 3 alpha = 0`.
pub fn chernoff_delta(alpha: f64, z: usize) -> Result<f64> {
    check_delta_inputs(alpha, z)?;
    Ok(chernoff_root(alpha, z as f64, 3.0))
}

/// `delta` for [`sharp_chernoff_rows`]: root of `z delta^2 + 2 alpha delta - 2 alpha = 0`.
pub fn sharp_delta(alpha: f64, z: usize) -> Result<f64> {
    check_delta_inputs(alpha, z)?;
    Ok(chernoff_root(alpha, z as f64, 2.0))
}

fn check_delta_inputs(alpha: f64, z: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) || z == 0 {
        return Err(Error::Precondition(format!(
            "delta needs alpha > 0 and z >= 1, got alpha={alpha}, z={z}"
        )));
    }
    Ok(())
}

/// An integer-valued row count together with the real expression it rounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowCount {
    /// The real-valued expression before rounding (may be `inf` on overflow).
    pub exact: f64,
    /// Integer-valued row count.
    pub rows: f64,
    /// `log10(rows)`, finite even when `rows` overflows.
    pub log10_rows: f64,
    /// `delta` used by the random-construction schemes.
    pub delta: Option<f64>,
}

impl RowCount {
    fn from_ln(ln_exact: f64, round: fn(f64) -> f64, delta: Option<f64>) -> Self {
        let exact = ln_exact.exp();
        if exact.is_finite() {
            let rows = round(exact);
            RowCount {
                exact,
                rows,
                log10_rows: rows.log10(),
                delta,
            }
        } else {
            RowCount {
                exact,
                rows: f64::INFINITY,
                log10_rows: ln_exact / std::f64::consts::LN_10,
                delta,
            }
        }
    }

    /// Strict comparison that stays meaningful when either count overflows
    /// `f64`, falling back to `log10_rows`.
    pub fn is_below(&self, other: &RowCount) -> bool {
        if self.rows.is_finite() && other.rows.is_finite() {
            self.rows < other.rows
        } else {
            self.log10_rows < other.log10_rows
        }
    }

    /// The row count as an integer, when it fits exactly.
    pub fn as_u64(&self) -> Option<u64> {
        (self.rows.is_finite() && self.rows <= (1u64 << 53) as f64).then_some(self.rows as u64)
    }
}

impl fmt::Display for RowCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_u64() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{:e}", self.rows),
        }
    }
}

fn fmt_real(x: f64) -> String {
    format!("{:.4}", x).trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Classical bound `z (k/u)^u (k/d)^d [1 + k (1 + ln(n/k + 1))]`, rounded up.
pub fn baseline_rows(n: usize, d: usize, u: usize, z: usize) -> Result<RowCount> {
    let bp = BoundParams::new(n, d, u, z)?;
    let k = bp.k as f64;
    let bracket = 1.0 + k * (1.0 + (n as f64 / k + 1.0).ln());
    let ln_exact = (z as f64).ln() + bp.ln_inv_q + bracket.ln();
    Ok(RowCount::from_ln(ln_exact, f64::ceil, None))
}

/// Random-construction bound `ceil(3 alpha / (delta^2 q))`, checking the
/// theorem's preconditions `2 <= u <= d` and `(d + u)^2 / u <= n`.
pub fn chernoff_rows(n: usize, d: usize, u: usize, z: usize) -> Result<RowCount> {
    let bp = BoundParams::new(n, d, u, z)?;
    bp.check_size_condition()?;
    Ok(chernoff_rows_formula(&bp))
}

/// [`chernoff_rows`] without the size precondition.
pub fn chernoff_rows_formula(bp: &BoundParams) -> RowCount {
    let delta = chernoff_root(bp.alpha, bp.z as f64, 3.0);
    let ln_exact = (3.0 * bp.alpha).ln() - 2.0 * delta.ln() + bp.ln_inv_q;
    RowCount::from_ln(ln_exact, f64::ceil, Some(delta))
}

/// Sharpened bound `floor(2 alpha / (delta^2 q)) + 1`, checking
/// `2 <= u <= d`, `(d + u)^2 / u <= n` and `z >= 4 / beta^2 + 1`.
pub fn sharp_chernoff_rows(n: usize, d: usize, u: usize, z: usize) -> Result<RowCount> {
    let bp = BoundParams::new(n, d, u, z)?;
    bp.check_size_condition()?;
    sharp_chernoff_rows_formula(&bp)
}

/// [`sharp_chernoff_rows`] without the size precondition (the `z` threshold
/// is still enforced).
pub fn sharp_chernoff_rows_formula(bp: &BoundParams) -> Result<RowCount> {
    if bp.beta <= 0.0 {
        return Err(Error::Precondition(format!(
            "beta = 1 - 2/alpha = {} is not positive",
            fmt_real(bp.beta)
        )));
    }
    let threshold = bp.sharp_z_threshold();
    if (bp.z as f64) < threshold {
        return Err(Error::Precondition(format!(
            "z = {} below 4/beta^2 + 1 = {}",
            bp.z,
            fmt_real(threshold)
        )));
    }
    let delta = chernoff_root(bp.alpha, bp.z as f64, 2.0);
    if delta > bp.beta {
        return Err(Error::Precondition(format!(
            "delta = {delta} exceeds beta = {}",
            bp.beta
        )));
    }
    let ln_exact = (2.0 * bp.alpha).ln() - 2.0 * delta.ln() + bp.ln_inv_q;
    Ok(RowCount::from_ln(ln_exact, |x| x.floor() + 1.0, Some(delta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn alpha_values() {
        // n = k makes ln(en/k) = 1
        assert!((alpha(2, 1, 2).unwrap() - (3.0 + 2f64.ln())).abs() < 1e-12);
        // reference values from 50-digit evaluation of the closed form
        assert!(rel(alpha(22, 4, 1_000_000).unwrap(), 268.757_290_670_284_8) < 1e-13);
        assert!(rel(alpha(110, 20, 1_000_000).unwrap(), 1166.748_282_983_672_9) < 1e-13);
        assert!(alpha(3, 4, 10).is_err());
        assert!(alpha(11, 4, 10).is_err());
        assert!(alpha(3, 0, 10).is_err());
    }

    #[test]
    fn delta_values() {
        let a = alpha(22, 4, 1_000_000).unwrap();
        assert!(rel(chernoff_delta(a, 3).unwrap(), 0.996_306_604_935_026_9) < 1e-13);
        assert!(rel(chernoff_delta(a, 101).unwrap(), 0.898_802_761_617_066) < 1e-13);
        assert!(chernoff_delta(0.0, 3).is_err());
        assert!(chernoff_delta(1.0, 0).is_err());
    }

    #[test]
    fn baseline_reference_values() {
        // exact 26331298.5338...
        let r = baseline_rows(1_000_000, 18, 4, 3).unwrap();
        assert_eq!(r.as_u64(), Some(26_331_299));
        let r11 = baseline_rows(1_000_000, 18, 4, 11).unwrap();
        assert!(rel(r11.exact, r.exact * 11.0 / 3.0) < 1e-13);
        // exact 508.4266...
        assert_eq!(baseline_rows(6, 4, 2, 1).unwrap().as_u64(), Some(509));
        assert!(baseline_rows(5, 4, 2, 1).is_err());
    }

    #[test]
    fn chernoff_reference_values() {
        let q_inv = 33_896.426_921_656_967;
        let r = chernoff_rows(1_000_000, 18, 4, 11).unwrap();
        assert!(rel(r.exact / q_inv, 828.125_758_937_212_9) < 1e-12);
        assert_eq!(r.as_u64(), Some(28_070_505));
        let t = baseline_rows(1_000_000, 18, 4, 11).unwrap();
        assert!(r.rows < t.rows);

        let r3 = chernoff_rows(1_000_000, 18, 4, 3).unwrap();
        assert_eq!(r3.as_u64(), Some(27_532_739));
        let ratio = r3.rows / baseline_rows(1_000_000, 18, 4, 3).unwrap().rows;
        assert!((ratio - 1.0456).abs() < 1e-4);

        let big = chernoff_rows(1_000_000, 90, 20, 101).unwrap();
        assert!(big.rows < baseline_rows(1_000_000, 90, 20, 101).unwrap().rows);
    }

    #[test]
    fn chernoff_size_condition_reported() {
        let err = chernoff_rows(6, 4, 2, 1).unwrap_err();
        assert_eq!(err, Error::Precondition("(d+u)^2/u = 18 > n = 6".into()));
        assert!(chernoff_rows(100, 4, 1, 1).is_err());
        // formula alone still evaluates (reference 1483.5588...)
        let bp = BoundParams::new(6, 4, 2, 1).unwrap();
        assert_eq!(chernoff_rows_formula(&bp).as_u64(), Some(1484));
    }

    #[test]
    fn sharp_reference_values() {
        let q_inv = 33_896.426_921_656_967;
        let r = sharp_chernoff_rows(1_000_000, 18, 4, 11).unwrap();
        assert_eq!(r.as_u64(), Some(18_958_212));
        assert!((r.rows / q_inv - 559.3).abs() < 0.05);
        assert!(r.rows < baseline_rows(1_000_000, 18, 4, 11).unwrap().rows);

        let err = sharp_chernoff_rows(1_000_000, 18, 4, 5).unwrap_err();
        assert_eq!(err, Error::Precondition("z = 5 below 4/beta^2 + 1 = 5.0602".into()));
    }

    #[test]
    fn huge_counts_stay_finite_in_log10() {
        let r = baseline_rows(100_000_000_000, 900, 200, 101).unwrap();
        assert!(r.rows.is_finite());
        assert!((r.log10_rows - 232.840).abs() < 1e-3);
        assert!(r.as_u64().is_none());
        let overflow = baseline_rows(7_204_122, 1665, 799, 1120).unwrap();
        assert!(overflow.rows.is_infinite() && overflow.log10_rows.is_finite());
        let sharp = sharp_chernoff_rows(7_204_122, 1665, 799, 1120).unwrap();
        assert!(sharp.is_below(&overflow) && !overflow.is_below(&sharp));
        assert!(!overflow.is_below(&overflow));
        let shown = r.to_string();
        assert_eq!(shown.parse::<f64>().unwrap(), r.rows);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn deltas_solve_their_quadratics(a in 0.01f64..1e7, z in 1usize..1_000_000) {
                let d3 = chernoff_delta(a, z).unwrap();
                let d2 = sharp_delta(a, z).unwrap();
                let zf = z as f64;
                prop_assert!(d3 > 0.0 && d3 < 1.0 && d2 > 0.0 && d2 < 1.0);
                prop_assert!(((zf * d3 * d3 + 3.0 * a * d3 - 3.0 * a) / (3.0 * a)).abs() < 1e-12);
                prop_assert!(((zf * d2 * d2 + 2.0 * a * d2 - 2.0 * a) / (2.0 * a)).abs() < 1e-12);
            }

            #[test]
            fn sharp_below_baseline(d in 2usize..400, u_frac in 0.0f64..1.0, extra in 0.0f64..8.0, z in 6usize..2000) {
                let u = 2 + ((d - 2) as f64 * u_frac) as usize;
                let k = (d + u) as f64;
                let n = (k * k / u as f64 * 10f64.powf(extra)).ceil() as usize;
                if let Ok(h) = sharp_chernoff_rows(n, d, u, z) {
                    prop_assert!(h.is_below(&baseline_rows(n, d, u, z).unwrap()));
                }
            }

            #[test]
            fn chernoff_rows_per_unit_z_non_increasing(d in 2usize..200, u_frac in 0.0f64..1.0, z in 1usize..5000) {
                let u = 2 + ((d - 2) as f64 * u_frac) as usize;
                let k = d + u;
                let n = k * k;
                let a = chernoff_rows(n, d, u, z).unwrap();
                let b = chernoff_rows(n, d, u, z + 1).unwrap();
                prop_assert!(b.exact / (z + 1) as f64 <= a.exact / z as f64 * (1.0 + 1e-12));
                prop_assert!(b.rows >= a.rows);
            }
        }
    }
}
