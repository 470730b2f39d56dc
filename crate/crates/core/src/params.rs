use crate::error::{Error, Result};

/// Parameters of an `(n, d, ell, u)` threshold group testing instance with
/// disjunct multiplicity `z`.
///
/// A pool with at least `u` defectives tests positive, one with at most
/// `ell` tests negative, and anything in between is arbitrary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TgtParams {
    pub n: usize,
    pub d: usize,
    pub ell: usize,
    pub u: usize,
    pub z: usize,
}

impl TgtParams {
    /// Validates `0 <= ell < u <= d < n` and `z >= 1`.
    pub fn new(n: usize, d: usize, ell: usize, u: usize, z: usize) -> Result<Self> {
        if ell >= u {
            return Err(Error::InvalidParams(format!("need ell < u, got ell={ell}, u={u}")));
        }
        if u > d {
            return Err(Error::InvalidParams(format!("need u <= d, got u={u}, d={d}")));
        }
        if d >= n {
            return Err(Error::InvalidParams(format!("need d < n, got d={d}, n={n}")));
        }
        if z == 0 {
            return Err(Error::InvalidParams("need z >= 1".into()));
        }
        Ok(TgtParams { n, d, ell, u, z })
    }

    /// Gap `u - ell - 1`.
    pub fn g(&self) -> usize {
        self.u - self.ell - 1
    }

    /// Maximum number of tolerated outcome errors, `floor((z - 1) / 2)`.
    pub fn e(&self) -> usize {
        (self.z - 1) / 2
    }

    /// `d - ell`: the defective count the decoding matrix must be disjunct for.
    pub fn d_effective(&self) -> usize {
        self.d - self.ell
    }

    /// `d - ell + u`, used with decoding matrices.
    pub fn k_decoding(&self) -> usize {
        self.d - self.ell + self.u
    }

    /// `d + u`, used with raw disjunct bounds.
    pub fn k_disjunct(&self) -> usize {
        self.d + self.u
    }

    /// `(d + u)^2 / u <= n`.
    pub fn size_condition_holds(&self) -> bool {
        let k = self.k_disjunct() as f64;
        k * k / self.u as f64 <= self.n as f64
    }
}
