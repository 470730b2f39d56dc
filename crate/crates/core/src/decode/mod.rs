//! Decoders recovering an approximation of the defective set from test
//! outcomes, and their error envelopes.

pub mod family;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::combin::binomial_u128;
use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::matrix::{BinaryMatrix, OutcomeVector};
use crate::params::TgtParams;

pub use family::{build_family, build_family_within, Family, DEFAULT_FAMILY_CAP};

/// Largest number of `(A, B)` pairs a single extension step may examine.
pub const DEFAULT_STEP_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoder {
    /// Grow a `u`-complete set by swapping `g` members for `g + 1` outsiders.
    CompleteExtension,
    /// Greedily union family members, first disjoint ones, then any adding
    /// at least `g + 1` new items.
    GreedyUnion,
    /// [`Decoder::GreedyUnion`], then [`Decoder::CompleteExtension`] inside
    /// its output.
    UnionThenExtension,
}

impl Decoder {
    pub const ALL: [Decoder; 3] = [Decoder::CompleteExtension, Decoder::GreedyUnion, Decoder::UnionThenExtension];

    /// Command-line number `1 | 2 | 3`.
    pub fn number(self) -> u8 {
        match self {
            Decoder::CompleteExtension => 1,
            Decoder::GreedyUnion => 2,
            Decoder::UnionThenExtension => 3,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Decoder::CompleteExtension),
            2 => Ok(Decoder::GreedyUnion),
            3 => Ok(Decoder::UnionThenExtension),
            other => Err(Error::Parse(format!("unknown decoder {other}, expected 1, 2 or 3"))),
        }
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<u8>()
            .map_err(|_| Error::Parse(format!("unknown decoder {s:?}, expected 1, 2 or 3")))
            .and_then(Decoder::from_number)
    }
}

/// Guaranteed bounds on `|recovered \ true|` and `|true \ recovered|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub max_false_positives: usize,
    pub max_false_negatives: usize,
}

/// `(floor(s / (ell + 1)) + u - 1) g`: false positives allowed for the
/// greedy union when the true set has `s` items.
pub fn w_bound(s: usize, ell: usize, u: usize, g: usize) -> usize {
    (s / (ell + 1) + u - 1) * g
}

/// Envelope of `decoder` for a true defective set of size `s`.
pub fn envelope_for(decoder: Decoder, s: usize, params: &TgtParams) -> Envelope {
    let g = params.g();
    match decoder {
        Decoder::CompleteExtension => Envelope { max_false_positives: g, max_false_negatives: g },
        Decoder::GreedyUnion => Envelope {
            max_false_positives: w_bound(s, params.ell, params.u, g),
            max_false_negatives: g,
        },
        Decoder::UnionThenExtension => Envelope { max_false_positives: g, max_false_negatives: 2 * g },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub recovered: ItemSet,
    pub decoder: Decoder,
    /// Envelope assuming the true set has `d` items.
    pub envelope: Envelope,
    /// Set when the candidate family is empty and nothing can be inferred.
    pub underdetermined: bool,
    pub family_size: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeLimits {
    pub family_cap: u128,
    pub step_cap: u128,
}

impl Default for DecodeLimits {
    fn default() -> Self {
        DecodeLimits { family_cap: DEFAULT_FAMILY_CAP, step_cap: DEFAULT_STEP_CAP }
    }
}

/// Runs `decoder` with default feasibility caps.
pub fn decode(decoder: Decoder, m: &BinaryMatrix, y: &OutcomeVector, params: &TgtParams) -> Result<DecodeResult> {
    decode_with_limits(decoder, m, y, params, DecodeLimits::default())
}

pub fn decode_with_limits(
    decoder: Decoder,
    m: &BinaryMatrix,
    y: &OutcomeVector,
    params: &TgtParams,
    limits: DecodeLimits,
) -> Result<DecodeResult> {
    if m.cols() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} columns, n = {}",
            m.cols(),
            params.n
        )));
    }
    y.check_rows(m)?;
    let all = ItemSet::from_zero_based(0..params.n);
    let family = build_family_within(m, y, params.u, params.e(), &all, limits.family_cap)?;
    decode_family(decoder, &family, m, y, params, limits)
}

/// Runs `decoder` on a prebuilt family for outcome `y`.
pub fn decode_family(
    decoder: Decoder,
    family: &Family,
    m: &BinaryMatrix,
    y: &OutcomeVector,
    params: &TgtParams,
    limits: DecodeLimits,
) -> Result<DecodeResult> {
    let mut warnings = Vec::new();
    if matches!(decoder, Decoder::GreedyUnion | Decoder::UnionThenExtension) {
        let k = params.k_disjunct() as f64;
        let lhs = (2.0f64).exp() * k * k / params.u as f64;
        if lhs > params.n as f64 {
            warnings.push(format!(
                "exp(2) (d+u)^2/u = {lhs:.1} exceeds n = {}; the false-positive bound may not hold",
                params.n
            ));
        }
    }
    if decoder == Decoder::UnionThenExtension {
        let w = w_bound(params.d, params.ell, params.u, params.g());
        if w + params.d > params.n {
            warnings.push(format!(
                "w + d = {} exceeds n = {}; the union step may return every item",
                w + params.d,
                params.n
            ));
        }
    }

    let g = params.g();
    let recovered = match decoder {
        Decoder::CompleteExtension => {
            let all = ItemSet::from_zero_based(0..params.n);
            extend_complete(family, &all, params.d, g, limits.step_cap)?
        }
        Decoder::GreedyUnion => greedy_union(family, g),
        Decoder::UnionThenExtension => match greedy_union(family, g) {
            Some(v) => {
                let restricted = build_family_within(m, y, params.u, params.e(), &v, limits.family_cap)?;
                extend_complete(&restricted, &v, params.d, g, limits.step_cap)?
            }
            None => None,
        },
    };
    Ok(DecodeResult {
        underdetermined: recovered.is_none(),
        recovered: recovered.unwrap_or_default(),
        decoder,
        envelope: envelope_for(decoder, params.d, params),
        family_size: family.len(),
        warnings,
    })
}

/// Starting from the first family member, repeatedly replaces `S` by
/// `(S ∪ A) \ B` for the lexicographically first `(g+1)`-set `A` outside `S`
/// and `g`-set `B` inside `S` that keep `S` `u`-complete. Stops once no such
/// pair exists or `|S| >= d`. `None` when the family is empty.
fn extend_complete(
    family: &Family,
    vertices: &ItemSet,
    d: usize,
    g: usize,
    step_cap: u128,
) -> Result<Option<ItemSet>> {
    let Some(first) = family.first() else {
        return Ok(None);
    };
    let mut s = ItemSet::from_zero_based(first.iter().copied());
    'grow: while s.len() < d {
        let outside = vertices.difference(&s);
        let needed = binomial_u128(outside.len(), g + 1).saturating_mul(binomial_u128(s.len(), g));
        if needed > step_cap {
            return Err(Error::CapExceeded {
                what: "extension (A, B) pairs".into(),
                needed,
                cap: step_cap,
            });
        }
        let members = s.as_slice().to_vec();
        for a in outside.iter().combinations(g + 1) {
            let grown = s.union(&ItemSet::from_zero_based(a.iter().copied()));
            for b in members.iter().copied().combinations(g) {
                let cand = grown.difference(&ItemSet::from_zero_based(b));
                // subsets avoiding A lie inside S and are members already
                if family.covers_all_touching(cand.as_slice(), &a) {
                    s = cand;
                    continue 'grow;
                }
            }
        }
        break;
    }
    Ok(Some(s))
}

/// Greedy union of family members. `None` when the family is empty.
fn greedy_union(family: &Family, g: usize) -> Option<ItemSet> {
    let edges: Vec<&[usize]> = family.iter().collect();
    let first = edges.first()?;
    let mut s = ItemSet::from_zero_based(first.iter().copied());
    let mut used = vec![false; edges.len()];

    let fresh = |s: &ItemSet, e: &[usize]| e.iter().filter(|&&j| !s.contains(j)).count();
    let mut absorb = |s: &mut ItemSet, accept: &dyn Fn(&ItemSet, &[usize]) -> bool| loop {
        let pick = (0..edges.len()).find(|&i| !used[i] && accept(s, edges[i]));
        match pick {
            Some(i) => {
                used[i] = true;
                *s = s.union(&ItemSet::from_zero_based(edges[i].iter().copied()));
            }
            None => break,
        }
    };
    absorb(&mut s, &|s, e| fresh(s, e) == e.len());
    absorb(&mut s, &|s, e| fresh(s, e) > g);
    Some(s)
}

/// Observed errors of a decoder output against the true set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvelopeReport {
    pub false_positives: usize,
    pub false_negatives: usize,
    pub envelope: Envelope,
    pub within: bool,
}

/// Compares `recovered` with `truth` against `decoder`'s envelope for `|truth|`.
pub fn check_envelope(truth: &ItemSet, recovered: &ItemSet, decoder: Decoder, params: &TgtParams) -> EnvelopeReport {
    let false_positives = recovered.difference(truth).len();
    let false_negatives = truth.difference(recovered).len();
    let envelope = envelope_for(decoder, truth.len(), params);
    EnvelopeReport {
        false_positives,
        false_negatives,
        envelope,
        within: false_positives <= envelope.max_false_positives
            && false_negatives <= envelope.max_false_negatives,
    }
}
