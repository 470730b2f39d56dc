//! End-to-end recovery experiments: build or load a matrix, then repeatedly
//! sample defectives, encode, decode and check the decoder's envelope.
//!
//! Experiment files are flat `key = value` lines; `#` starts a comment.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `n`, `d`, `ell`, `u`, `z` | instance parameters | required |
//! | `algorithm` | decoder `1`, `2` or `3` | `1` |
//! | `trials` | number of trials | `1` |
//! | `seed` | seed for matrix generation | `0` |
//! | `matrix` | matrix file, relative to the experiment file | generate |
//! | `verify_matrix` | check a loaded matrix is disjunct | `true` |
//! | `construction` | `thm4` or `thm5` when generating | `thm4` |
//! | `max_attempts` | generation attempts before giving up | `1000` |
//! | `defectives` | fixed 1-based defective list | |
//! | `defective_size` | sample this many defectives per trial | |
//! | `defective_seed` | seed for defective sampling | `seed` |
//! | `policy` | `positive`, `negative`, `bernoulli` or `explicit` | `bernoulli` |
//! | `policy_seed` | seed for Bernoulli gap outcomes | `seed` |
//! | `gap_values` | explicit gap outcomes `row:bit,...` (1-based rows) | |
//! | `flip_rows` | 1-based rows to flip | |
//! | `random_flips` | number of rows to flip at random | |
//! | `noise_seed` | seed for random flips | `seed` |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decode::{check_envelope, decode, Decoder, EnvelopeReport};
use crate::disjunct::{generate_verified, verify_disjunct, Construction, DEFAULT_PAIR_CAP};
use crate::encode::{encode, GapPolicy, NoiseSpec};
use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::matrix::{BinaryMatrix, OutcomeVector};
use crate::params::TgtParams;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefectiveRule {
    Explicit(ItemSet),
    /// `size` items drawn uniformly per trial from a stream seeded by `seed`.
    RandomSize { size: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixSource {
    /// Draw a random matrix and keep the first one that verifies as
    /// `(n, d - ell, u; z]`-disjunct.
    Generate { construction: Construction, seed: u64, max_attempts: usize },
    Loaded { matrix: BinaryMatrix, verify: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub params: TgtParams,
    pub matrix: MatrixSource,
    pub defectives: DefectiveRule,
    /// Random policies are reseeded per trial from their seed's stream.
    pub policy: GapPolicy,
    /// Random flips are reseeded per trial from their seed's stream.
    pub noise: NoiseSpec,
    pub decoder: Decoder,
    pub trials: usize,
}

impl ExperimentSpec {
    /// Reads an experiment file; a `matrix` path is resolved against the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got {line:?}", i + 1)))?;
            let key = k.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse(format!("line {}: unknown key {key:?}", i + 1)));
            }
            if kv.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key {key:?}", i + 1)));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let num = |k: &str, default: Option<u64>| -> Result<u64> {
            match get(k) {
                Some(v) => v.parse().map_err(|_| Error::Parse(format!("{k}: not a number: {v:?}"))),
                None => default.ok_or_else(|| Error::Parse(format!("missing required key {k:?}"))),
            }
        };
        let size = |k: &str, default: Option<u64>| num(k, default).map(|v| v as usize);

        let params = TgtParams::new(
            size("n", None)?,
            size("d", None)?,
            size("ell", None)?,
            size("u", None)?,
            size("z", None)?,
        )?;
        let seed = num("seed", Some(0))?;
        let decoder: Decoder = get("algorithm").unwrap_or("1").parse()?;
        let trials = size("trials", Some(1))?;

        let matrix = match get("matrix") {
            Some(rel) => {
                if get("construction").is_some() || get("max_attempts").is_some() {
                    return Err(Error::Parse("construction/max_attempts apply only to generated matrices".into()));
                }
                let path = base_dir.join(rel);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                MatrixSource::Loaded {
                    matrix: BinaryMatrix::parse(&text)?,
                    verify: parse_bool("verify_matrix", get("verify_matrix").unwrap_or("true"))?,
                }
            }
            None => {
                if get("verify_matrix").is_some() {
                    return Err(Error::Parse("verify_matrix applies only to loaded matrices".into()));
                }
                MatrixSource::Generate {
                    construction: get("construction").unwrap_or("thm4").parse()?,
                    seed,
                    max_attempts: size("max_attempts", Some(1000))?,
                }
            }
        };

        let defectives = match (get("defectives"), get("defective_size")) {
            (Some(list), None) => {
                let set = ItemSet::parse(list, params.n)?;
                DefectiveRule::Explicit(set)
            }
            (None, Some(_)) => DefectiveRule::RandomSize {
                size: size("defective_size", None)?,
                seed: num("defective_seed", Some(seed))?,
            },
            _ => return Err(Error::Parse("give exactly one of defectives, defective_size".into())),
        };
        let s = match &defectives {
            DefectiveRule::Explicit(set) => set.len(),
            DefectiveRule::RandomSize { size, .. } => *size,
        };
        if s > params.d {
            return Err(Error::InvalidParams(format!("defective count {s} exceeds d = {}", params.d)));
        }

        let policy_name = get("policy").unwrap_or("bernoulli");
        if get("gap_values").is_some() != (policy_name == "explicit") {
            return Err(Error::Parse("gap_values is required with, and only with, policy=explicit".into()));
        }
        let policy = match policy_name {
            "positive" => GapPolicy::AlwaysPositive,
            "negative" => GapPolicy::AlwaysNegative,
            "bernoulli" => GapPolicy::Bernoulli { seed: num("policy_seed", Some(seed))? },
            "explicit" => GapPolicy::Explicit(parse_gap_values(get("gap_values").unwrap_or(""))?),
            other => return Err(Error::Parse(format!("unknown policy {other:?}"))),
        };

        let noise = match (get("flip_rows"), get("random_flips")) {
            (None, None) => NoiseSpec::None,
            (Some(list), None) => NoiseSpec::FlipIndices(
                parse_list(list)?
                    .into_iter()
                    .map(|r| r.checked_sub(1).ok_or_else(|| Error::Parse("flip rows are 1-based".into())))
                    .collect::<Result<BTreeSet<_>>>()?,
            ),
            (None, Some(_)) => NoiseSpec::RandomFlips {
                count: size("random_flips", None)?,
                seed: num("noise_seed", Some(seed))?,
            },
            _ => return Err(Error::Parse("give at most one of flip_rows, random_flips".into())),
        };

        Ok(ExperimentSpec { params, matrix, defectives, policy, noise, decoder, trials })
    }
}

const KNOWN_KEYS: [&str; 21] = [
    "n",
    "d",
    "ell",
    "u",
    "z",
    "algorithm",
    "trials",
    "seed",
    "matrix",
    "verify_matrix",
    "construction",
    "max_attempts",
    "defectives",
    "defective_size",
    "defective_seed",
    "policy",
    "policy_seed",
    "gap_values",
    "flip_rows",
    "random_flips",
    "noise_seed",
];

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::Parse(format!("{key}: expected true/false, got {other:?}"))),
    }
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
        .collect()
}

/// `row:bit` pairs with 1-based rows, e.g. `2:1,5:0`.
pub fn parse_gap_values(text: &str) -> Result<BTreeMap<usize, bool>> {
    let mut out = BTreeMap::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (r, b) = tok
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("gap value {tok:?} is not row:bit")))?;
        let row: usize = r.trim().parse().map_err(|_| Error::Parse(format!("bad row in {tok:?}")))?;
        let bit = match b.trim() {
            "0" => false,
            "1" => true,
            _ => return Err(Error::Parse(format!("bad bit in {tok:?}"))),
        };
        if row == 0 {
            return Err(Error::Parse("gap rows are 1-based".into()));
        }
        if out.insert(row - 1, bit).is_some() {
            return Err(Error::Parse(format!("row {row} given twice")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub index: usize,
    pub defectives: ItemSet,
    pub outcome: OutcomeVector,
    pub recovered: ItemSet,
    pub flips: usize,
    pub underdetermined: bool,
    pub envelope: EnvelopeReport,
    /// Whether the decoder's envelope is guaranteed for this trial: the
    /// matrix is verified, `u <= |S| <= d` and at most `e` flips occurred.
    pub guaranteed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentReport {
    pub rows: usize,
    pub cols: usize,
    pub matrix_verified: bool,
    /// Matrices drawn before one verified, when generated.
    pub attempts: Option<usize>,
    pub decoder: Decoder,
    pub trials: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn passed(&self) -> usize {
        self.trials.iter().filter(|t| t.envelope.within).count()
    }

    pub fn pass_rate(&self) -> Option<f64> {
        (!self.trials.is_empty()).then(|| self.passed() as f64 / self.trials.len() as f64)
    }

    /// Envelope failures where the envelope was guaranteed.
    pub fn defects(&self) -> usize {
        self.trials.iter().filter(|t| t.guaranteed && !t.envelope.within).count()
    }

    pub fn false_positive_histogram(&self) -> BTreeMap<usize, usize> {
        histogram(self.trials.iter().map(|t| t.envelope.false_positives))
    }

    pub fn false_negative_histogram(&self) -> BTreeMap<usize, usize> {
        histogram(self.trials.iter().map(|t| t.envelope.false_negatives))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let origin = match self.attempts {
            Some(a) => format!("generated, verified after {a} attempt(s)"),
            None if self.matrix_verified => "loaded, verified".into(),
            None => "loaded, unverified".into(),
        };
        let _ = writeln!(s, "matrix: {}x{} ({origin})", self.rows, self.cols);
        let _ = writeln!(s, "algorithm: {}", self.decoder);
        for t in &self.trials {
            let _ = writeln!(
                s,
                "trial {}: S={{{}}} y={} S'={{{}}} flips={} fp={} fn={} envelope={}{}",
                t.index + 1,
                t.defectives,
                t.outcome,
                t.recovered,
                t.flips,
                t.envelope.false_positives,
                t.envelope.false_negatives,
                if t.envelope.within { "pass" } else { "fail" },
                if t.underdetermined { " underdetermined" } else { "" },
            );
        }
        let hist = |h: BTreeMap<usize, usize>| h.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "trials: {}", self.trials.len());
        let _ = writeln!(s, "passed: {}", self.passed());
        match self.pass_rate() {
            Some(r) => {
                let _ = writeln!(s, "pass_rate: {r:.6}");
            }
            None => s.push_str("pass_rate: n/a\n"),
        }
        let _ = writeln!(s, "false_positive_histogram: {}", hist(self.false_positive_histogram()));
        let _ = writeln!(s, "false_negative_histogram: {}", hist(self.false_negative_histogram()));
        let _ = writeln!(s, "defects: {}", self.defects());
        s
    }
}

fn histogram(values: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let p = spec.params;
    let (matrix, verified, attempts) = match &spec.matrix {
        MatrixSource::Generate { construction, seed, max_attempts } => {
            let v = generate_verified(
                p.n,
                p.d_effective(),
                p.u,
                p.z,
                *seed,
                *construction,
                *max_attempts,
                DEFAULT_PAIR_CAP,
            )?;
            (v.generated.matrix, true, Some(v.attempts))
        }
        MatrixSource::Loaded { matrix, verify } => {
            if matrix.cols() != p.n {
                return Err(Error::DimensionMismatch(format!(
                    "matrix has {} columns, n = {}",
                    matrix.cols(),
                    p.n
                )));
            }
            let ok = *verify && verify_disjunct(matrix, p.d_effective(), p.u, p.z)?.is_disjunct();
            (matrix.clone(), ok, None)
        }
    };

    let stream = |seed: u64| ChaCha8Rng::seed_from_u64(seed);
    let mut defect_rng = match &spec.defectives {
        DefectiveRule::RandomSize { seed, .. } => Some(stream(*seed)),
        DefectiveRule::Explicit(_) => None,
    };
    let mut policy_rng = match &spec.policy {
        GapPolicy::Bernoulli { seed } => Some(stream(*seed)),
        _ => None,
    };
    let mut noise_rng = match &spec.noise {
        NoiseSpec::RandomFlips { seed, .. } => Some(stream(*seed)),
        _ => None,
    };

    let mut trials = Vec::with_capacity(spec.trials);
    for index in 0..spec.trials {
        let defectives = match (&spec.defectives, defect_rng.as_mut()) {
            (DefectiveRule::Explicit(set), _) => set.clone(),
            (DefectiveRule::RandomSize { size, .. }, Some(rng)) => {
                ItemSet::from_zero_based(index::sample(rng, p.n, *size).into_vec())
            }
            (DefectiveRule::RandomSize { .. }, None) => unreachable!("seeded above"),
        };
        let policy = match (&spec.policy, policy_rng.as_mut()) {
            (GapPolicy::Bernoulli { .. }, Some(rng)) => GapPolicy::Bernoulli { seed: rng.gen() },
            (other, _) => other.clone(),
        };
        let noise = match (&spec.noise, noise_rng.as_mut()) {
            (NoiseSpec::RandomFlips { count, .. }, Some(rng)) => NoiseSpec::RandomFlips { count: *count, seed: rng.gen() },
            (other, _) => other.clone(),
        };
        let flips = noise.flipped_rows(matrix.rows())?.len();
        let outcome = encode(&matrix, &defectives, p.ell, p.u, &policy, &noise)?;
        let result = decode(spec.decoder, &matrix, &outcome, &p)?;
        let envelope = check_envelope(&defectives, &result.recovered, spec.decoder, &p);
        let guaranteed = verified && flips <= p.e() && (p.u..=p.d).contains(&defectives.len());
        trials.push(TrialRecord {
            index,
            defectives,
            outcome,
            recovered: result.recovered,
            flips,
            underdetermined: result.underdetermined,
            envelope,
            guaranteed,
        });
    }
    Ok(ExperimentReport {
        rows: matrix.rows(),
        cols: matrix.cols(),
        matrix_verified: verified,
        attempts,
        decoder: spec.decoder,
        trials,
    })
}
