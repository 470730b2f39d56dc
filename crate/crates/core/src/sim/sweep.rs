//! Bound-comparison sweeps over `(n, d, z)` grids.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::disjunct::{baseline_rows, chernoff_rows, sharp_chernoff_rows, RowCount};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Baseline,
    Chernoff,
    SharpChernoff,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Baseline, Scheme::Chernoff, Scheme::SharpChernoff];

    pub fn token(self) -> &'static str {
        match self {
            Scheme::Baseline => "thm1",
            Scheme::Chernoff => "thm4",
            Scheme::SharpChernoff => "thm5",
        }
    }

    /// Row count for `(n, d, u; z]` with the scheme's full preconditions.
    pub fn rows(self, n: usize, d: usize, u: usize, z: usize) -> Result<RowCount> {
        match self {
            Scheme::Baseline => baseline_rows(n, d, u, z),
            Scheme::Chernoff => chernoff_rows(n, d, u, z),
            Scheme::SharpChernoff => sharp_chernoff_rows(n, d, u, z),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.token() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scheme {s:?}, expected thm1, thm4 or thm5")))
    }
}

/// `round(0.2 d)`, halves rounded up.
pub fn upper_threshold(d: usize) -> usize {
    (2 * d + 5) / 10
}

/// `round(0.1 d)`, halves rounded up.
pub fn lower_threshold(d: usize) -> usize {
    (d + 5) / 10
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub n_values: Vec<usize>,
    pub d_values: Vec<usize>,
    pub z_values: Vec<usize>,
    pub schemes: Vec<Scheme>,
}

impl SweepSpec {
    pub const STANDARD_N: [usize; 5] = [
        1_000_000,
        100_000_000,
        1_000_000_000,
        10_000_000_000,
        100_000_000_000,
    ];
    pub const STANDARD_D: [usize; 3] = [20, 100, 1000];
    pub const STANDARD_Z: [usize; 3] = [3, 11, 101];

    /// The standard comparison grid with the baseline and Chernoff schemes.
    pub fn standard() -> Self {
        SweepSpec {
            n_values: Self::STANDARD_N.to_vec(),
            d_values: Self::STANDARD_D.to_vec(),
            z_values: Self::STANDARD_Z.to_vec(),
            schemes: vec![Scheme::Baseline, Scheme::Chernoff],
        }
    }
}

/// One grid point. `outcome` holds the row count or the violated condition.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub n: usize,
    pub d: usize,
    pub u: usize,
    pub ell: usize,
    pub z: usize,
    pub outcome: std::result::Result<RowCount, String>,
}

/// Evaluates every `(scheme, n, d, z)` point. Bounds are taken for
/// `(n, d - ell, u; z]`; points violating a precondition become N/A rows.
/// Rows are sorted by scheme, then `n`, `d`, `z`.
pub fn simulate_bounds(spec: &SweepSpec) -> Vec<SweepRow> {
    let mut schemes = spec.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let sorted = |v: &[usize]| {
        let mut v = v.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (ns, ds, zs) = (sorted(&spec.n_values), sorted(&spec.d_values), sorted(&spec.z_values));

    let mut out = Vec::with_capacity(schemes.len() * ns.len() * ds.len() * zs.len());
    for &scheme in &schemes {
        for &n in &ns {
            for &d in &ds {
                let (u, ell) = (upper_threshold(d), lower_threshold(d));
                for &z in &zs {
                    let outcome = if ell >= d {
                        Err(format!("ell = {ell} not below d = {d}"))
                    } else {
                        scheme.rows(n, d - ell, u, z).map_err(|e| e.to_string())
                    };
                    out.push(SweepRow { scheme, n, d, u, ell, z, outcome });
                }
            }
        }
    }
    out
}

/// CSV with header `scheme,n,d,u,ell,z,rows,log10_rows`.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("scheme,n,d,u,ell,z,rows,log10_rows\n");
    for r in rows {
        let (count, log10) = match &r.outcome {
            Ok(c) => (c.to_string(), c.log10_rows.to_string()),
            Err(why) => ("N/A".to_string(), format!("N/A: {}", why.replace(',', ";"))),
        };
        let _ = writeln!(s, "{},{},{},{},{},{},{},{}", r.scheme, r.n, r.d, r.u, r.ell, r.z, count, log10);
    }
    s
}

/// Gnuplot data: one indexed block per `(scheme, d, z)` curve with columns
/// `log10_n log10_rows`, blocks separated by two blank lines. N/A points
/// are skipped.
pub fn to_gnuplot(rows: &[SweepRow]) -> String {
    let mut curves: Vec<(Scheme, usize, usize, usize, usize)> = rows
        .iter()
        .map(|r| (r.scheme, r.d, r.z, r.u, r.ell))
        .collect();
    curves.sort();
    curves.dedup();
    let mut s = String::new();
    for (i, &(scheme, d, z, u, ell)) in curves.iter().enumerate() {
        if i > 0 {
            s.push_str("\n\n");
        }
        let _ = writeln!(s, "# scheme={scheme} d={d} u={u} ell={ell} z={z}");
        let mut points: Vec<&SweepRow> = rows
            .iter()
            .filter(|r| r.scheme == scheme && r.d == d && r.z == z && r.outcome.is_ok())
            .collect();
        points.sort_by_key(|r| r.n);
        for r in points {
            if let Ok(c) = &r.outcome {
                let _ = writeln!(s, "{} {}", (r.n as f64).log10(), c.log10_rows);
            }
        }
    }
    s
}
