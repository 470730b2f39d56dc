use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tgt_core::analysis::{complexity, extension_term_dominance, ComplexityFormula};
use tgt_core::decode::{check_envelope, decode, Decoder};
use tgt_core::disjunct::{
    generate, generate_verified, verify_disjunct, BoundParams, Construction, Verdict, DEFAULT_PAIR_CAP,
};
use tgt_core::encode::{encode, GapPolicy, NoiseSpec};
use tgt_core::sim::experiment::parse_gap_values;
use tgt_core::sim::{run_experiment, simulate_bounds, to_csv, to_gnuplot, ExperimentSpec, Scheme, SweepSpec};
use tgt_core::{BinaryMatrix, Error, ItemSet, OutcomeVector, TgtParams};

const EXIT_VALIDATION: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_DEFECT: u8 = 3;

/// Threshold group testing with gap: matrices, bounds and decoders.
#[derive(Parser, Debug)]
#[command(name = "tgt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a random (n, d, u; z]-disjunct matrix.
    Gen(GenArgs),
    /// Exhaustively check a matrix for the (n, d, r; z]-disjunct property.
    Verify(VerifyArgs),
    /// Row-count bounds for (n, d, u; z]-disjunct matrices.
    Bounds(BoundsArgs),
    /// Compute threshold test outcomes for a defective set.
    Encode(EncodeArgs),
    /// Recover defectives from test outcomes.
    Decode(DecodeArgs),
    /// Exact operation counts of the decoders.
    Complexity(ComplexityArgs),
    /// Compare extension and family cost terms for d = 2u, ell = 0.
    AppendixCheck(AppendixArgs),
    /// Sweep row bounds over an (n, d, z) grid and write CSV.
    SimulateBounds(SimulateArgs),
    /// Run a recovery experiment described by a key=value file.
    Experiment(ExperimentArgs),
}

/// Accepts plain integers and integral scientific notation such as `1e6`.
fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 9_007_199_254_740_992.0 {
        Ok(f as usize)
    } else {
        Err(format!("not a non-negative integer: {s:?}"))
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long, value_parser = parse_count)]
    d: usize,
    #[arg(long)]
    u: usize,
    #[arg(long, default_value_t = 1)]
    z: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Row bound sizing the matrix: thm4 or thm5.
    #[arg(long, default_value = "thm4")]
    scheme: Construction,
    /// Redraw until the matrix passes exhaustive verification.
    #[arg(long)]
    verified: bool,
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
    /// Write the matrix here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    z: usize,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long, value_parser = parse_count)]
    d: usize,
    #[arg(long)]
    u: usize,
    #[arg(long, default_value_t = 1)]
    z: usize,
    /// Schemes to evaluate (thm1, thm4, thm5); all by default.
    #[arg(long, value_delimiter = ',')]
    schemes: Vec<Scheme>,
}

#[derive(Args, Debug)]
struct NoiseArgs {
    /// 1-based rows to flip after gap resolution.
    #[arg(long, value_delimiter = ',', conflicts_with = "random_flips")]
    flip_rows: Vec<usize>,
    /// Flip this many random rows.
    #[arg(long)]
    random_flips: Option<usize>,
    #[arg(long, default_value_t = 0)]
    noise_seed: u64,
}

impl NoiseArgs {
    fn spec(&self) -> Result<NoiseSpec, Error> {
        if let Some(count) = self.random_flips {
            return Ok(NoiseSpec::RandomFlips { count, seed: self.noise_seed });
        }
        if self.flip_rows.is_empty() {
            return Ok(NoiseSpec::None);
        }
        let rows = self
            .flip_rows
            .iter()
            .map(|&r| r.checked_sub(1).ok_or_else(|| Error::Parse("flip rows are 1-based".into())))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(NoiseSpec::FlipIndices(rows))
    }
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// 1-based comma-separated defective items (may be empty).
    #[arg(long, allow_hyphen_values = true)]
    defectives: String,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    u: usize,
    /// Gap outcome rule: positive, negative, bernoulli or explicit.
    #[arg(long, default_value = "bernoulli")]
    policy: String,
    /// Seed for the bernoulli policy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit gap outcomes as row:bit pairs with 1-based rows.
    #[arg(long)]
    gap_values: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Outcome vector file.
    #[arg(long, conflicts_with = "y", required_unless_present = "y")]
    outcome: Option<PathBuf>,
    /// Outcome vector given inline as a 0/1 string.
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    u: usize,
    #[arg(long, default_value_t = 1)]
    z: usize,
    /// Decoder: 1 (complete extension), 2 (greedy union), 3 (union then extension).
    #[arg(long, default_value = "1")]
    alg: Decoder,
    /// Known defectives; the decoder's envelope is checked against them.
    #[arg(long)]
    truth: Option<String>,
}

#[derive(Args, Debug)]
struct ComplexityArgs {
    /// thm3, thm6, thm7 or thm8.
    #[arg(long)]
    formula: ComplexityFormula,
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    u: usize,
    #[arg(long, default_value_t = 1)]
    z: usize,
    /// True defective count for the thm8 width (defaults to d).
    #[arg(long)]
    s_size: Option<usize>,
}

#[derive(Args, Debug)]
struct AppendixArgs {
    #[arg(long)]
    u: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    z: Vec<usize>,
    /// Schemes (thm1, thm4, thm5); thm1,thm4 by default.
    #[arg(long, value_delimiter = ',')]
    schemes: Vec<Scheme>,
    /// Also write gnuplot-style blocks here.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Defect(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_matrix(path: &Path) -> Result<BinaryMatrix, Error> {
    BinaryMatrix::parse(&read(path)?)
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let (g, attempts) = if a.verified {
        let v = generate_verified(a.n, a.d, a.u, a.z, a.seed, a.scheme, a.max_attempts, DEFAULT_PAIR_CAP)?;
        (v.generated, Some(v.attempts))
    } else {
        (generate(a.n, a.d, a.u, a.z, a.seed, a.scheme)?, None)
    };
    let mut note = format!("rows={} cols={} p={}", g.matrix.rows(), g.matrix.cols(), g.p);
    if let Some(k) = attempts {
        let _ = write!(note, " attempts={k}");
    }
    if !g.size_condition_met {
        note.push_str(" warning=size-condition-violated");
    }
    eprintln!("{note}");
    write_or_print(a.out.as_deref(), &g.matrix.to_string())?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let m = load_matrix(&a.matrix)?;
    match verify_disjunct(&m, a.d, a.r, a.z)? {
        Verdict::Disjunct => println!("disjunct"),
        Verdict::Violated(w) => println!(
            "not disjunct: ones={{{}}} zeros={{{}}} rows={}",
            w.ones, w.zeros, w.covered_rows
        ),
    }
    Ok(())
}

fn cmd_bounds(a: BoundsArgs) -> CmdResult {
    let bp = BoundParams::new(a.n, a.d, a.u, a.z)?;
    let schemes = if a.schemes.is_empty() { Scheme::ALL.to_vec() } else { a.schemes };
    println!("alpha={} beta={} log10_inv_q={}", bp.alpha, bp.beta, bp.ln_inv_q / std::f64::consts::LN_10);
    println!("size_condition={}", bp.size_condition_holds());
    for s in schemes {
        match s.rows(a.n, a.d, a.u, a.z) {
            Ok(r) => {
                let delta = r.delta.map(|x| format!(" delta={x}")).unwrap_or_default();
                println!("{s} rows={r} log10_rows={}{delta}", r.log10_rows);
            }
            Err(e) => println!("{s} N/A: {e}"),
        }
    }
    Ok(())
}

fn cmd_encode(a: EncodeArgs) -> CmdResult {
    let m = load_matrix(&a.matrix)?;
    let x = ItemSet::parse(&a.defectives, m.cols())?;
    if a.gap_values.is_some() != (a.policy == "explicit") {
        return Err(Error::InvalidParams("--gap-values is required with, and only with, --policy explicit".into()).into());
    }
    let policy = match a.policy.as_str() {
        "positive" => GapPolicy::AlwaysPositive,
        "negative" => GapPolicy::AlwaysNegative,
        "bernoulli" => GapPolicy::Bernoulli { seed: a.seed },
        "explicit" => GapPolicy::Explicit(parse_gap_values(a.gap_values.as_deref().unwrap_or(""))?),
        other => return Err(Error::Parse(format!("unknown policy {other:?}")).into()),
    };
    let y = encode(&m, &x, a.ell, a.u, &policy, &a.noise.spec()?)?;
    write_or_print(a.out.as_deref(), &format!("{y}\n"))?;
    Ok(())
}

fn cmd_decode(a: DecodeArgs) -> CmdResult {
    let m = load_matrix(&a.matrix)?;
    let y = match (&a.outcome, &a.y) {
        (Some(p), _) => OutcomeVector::parse(&read(p)?)?,
        (None, Some(s)) => OutcomeVector::parse(s)?,
        (None, None) => return Err(Error::InvalidParams("give --outcome or --y".into()).into()),
    };
    let params = TgtParams::new(m.cols(), a.d, a.ell, a.u, a.z)?;
    let r = decode(a.alg, &m, &y, &params)?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    if r.underdetermined {
        eprintln!("warning: candidate family is empty; output is underdetermined");
    }
    println!("{{{}}}", r.recovered);
    eprintln!(
        "family={} envelope: false_positives<={} false_negatives<={}",
        r.family_size, r.envelope.max_false_positives, r.envelope.max_false_negatives
    );
    if let Some(truth) = &a.truth {
        let truth = ItemSet::parse(truth, m.cols())?;
        let rep = check_envelope(&truth, &r.recovered, a.alg, &params);
        eprintln!(
            "false_positives={} false_negatives={} within_envelope={}",
            rep.false_positives, rep.false_negatives, rep.within
        );
        if !rep.within {
            return Err(Failure::Defect("decoder output outside its envelope".into()));
        }
    }
    Ok(())
}

fn cmd_complexity(a: ComplexityArgs) -> CmdResult {
    let params = TgtParams::new(a.n, a.d, a.ell, a.u, a.z)?;
    let r = complexity(a.formula, &params, a.s_size)?;
    println!("formula={}", r.formula);
    println!("tests={}", r.tests);
    println!("family_term={}", r.family_term);
    println!("extension_term={}", r.extension_term);
    println!("total={}", r.total);
    if !r.size_condition_met {
        println!("warning: (d+u)^2/u > n; test count is the formula value only");
    }
    Ok(())
}

fn cmd_appendix(a: AppendixArgs) -> CmdResult {
    let c = extension_term_dominance(a.u, a.n)?;
    println!("u={} n={} L={} R={} L>R={}", c.u, c.n, c.extension, c.family, c.extension_dominates);
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let mut spec = SweepSpec::standard();
    if !a.n.is_empty() {
        spec.n_values = a.n;
    }
    if !a.d.is_empty() {
        spec.d_values = a.d;
    }
    if !a.z.is_empty() {
        spec.z_values = a.z;
    }
    if !a.schemes.is_empty() {
        spec.schemes = a.schemes;
    }
    let rows = simulate_bounds(&spec);
    write_or_print(Some(&a.out), &to_csv(&rows))?;
    if let Some(g) = &a.gnuplot {
        write_or_print(Some(g), &to_gnuplot(&rows))?;
    }
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> CmdResult {
    let spec = ExperimentSpec::from_file(&a.spec)?;
    let report = run_experiment(&spec)?;
    write_or_print(a.out.as_deref(), &report.render())?;
    match report.defects() {
        0 => Ok(()),
        k => Err(Failure::Defect(format!("{k} trial(s) violated a guaranteed envelope"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Complexity(a) => cmd_complexity(a),
        Command::AppendixCheck(a) => cmd_appendix(a),
        Command::SimulateBounds(a) => cmd_simulate(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_feasibility() { EXIT_CAP } else { EXIT_VALIDATION })
        }
        Err(Failure::Defect(msg)) => {
            eprintln!("defect: {msg}");
            ExitCode::from(EXIT_DEFECT)
        }
    }
}
