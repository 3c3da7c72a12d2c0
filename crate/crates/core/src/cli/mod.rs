//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 infeasible
//! or invalid parameters, 4 inconclusive (budget exhausted), 5 input shorter
//! than the spec's source, 6 seed length mismatch, 7 unreadable spec,
//! 8 other I/O failure.

pub mod spec_doc;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::rngs::OsRng;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::compose::{build_high_entropy_extractor, build_pipeline};
use crate::condenser::{build_condenser, GuvCondenser, StrongForm};
use crate::error::Error;
use crate::extractor::{Packed, SeededFunction};
use crate::hashing::ToeplitzSpec;
use crate::oracle::{sample_flat_sources, Budget};
use crate::trevisan::{build_trevisan, Preset, TrevisanExtractor};
pub use spec_doc::SpecDocument;
use verify::Status;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_SHORT_INPUT: i32 = 5;
pub const EXIT_SEED_MISMATCH: i32 = 6;
pub const EXIT_BAD_SPEC: i32 = 7;
pub const EXIT_IO: i32 = 8;

/// Verification randomness when `--test-seed` is omitted.
pub const DEFAULT_TEST_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Parser)]
#[command(name = "extractorforge", version, about = "Seeded extractors and condensers with an exact oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Resolve parameters and print a spec document.
    Params(ParamsArgs),
    /// Run a spec on a source file.
    Extract(ExtractArgs),
    /// Run a condenser spec and write `C(x, y) ∥ y`.
    Condense(ExtractArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Time a spec on pseudo-random input.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Condense-then-extract for flat sources with (1-β)k entropy.
    Flat,
    /// The same pipeline, read against a βk-bit storage bound.
    Storage,
    /// Block-composed extractor for sources missing b bits of entropy.
    Qproof,
    Trevisan,
    Toeplitz,
    Condenser,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Thm42,
    Thm43,
}

#[derive(Debug, Args)]
struct ParamsArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "thm43")]
    preset: PresetArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("seed_source").required(true).args(["seed", "seed_file"])))]
struct ExtractArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    /// Hex seed, or `system` to draw one from the OS (logged).
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    seed_file: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Design,
    Code,
    Extractor,
    Condenser,
    Lemmas,
    Pipeline,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Source min-entropy for the extractor target.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    eps: Option<f64>,
    /// Number of sources, tables or replay inputs.
    #[arg(long)]
    sources: Option<usize>,
    /// Maximum function evaluations per enumeration.
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    test_seed: Option<u64>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Runs to time.
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long)]
    test_seed: Option<u64>,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Error carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::InvalidParameters(_) | Error::UnsupportedWidth(_) => EXIT_INFEASIBLE,
            Error::BudgetExceeded { .. } | Error::ResourceLimit(_) => EXIT_INCONCLUSIVE,
            Error::LengthMismatch { .. } => EXIT_SEED_MISMATCH,
            _ => EXIT_INFEASIBLE,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Params(a) => cmd_params(a),
        Command::Extract(a) => cmd_extract(a, false),
        Command::Condense(a) => cmd_extract(a, true),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn need<T>(v: Option<T>, flag: &str, mode: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::new(EXIT_USAGE, format!("--{flag} is required for {mode}")))
}

fn write_out(path: &Path, bytes: &[u8]) -> std::result::Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::new(EXIT_IO, format!("writing {}: {e}", path.display())))
}

fn emit_report<T: Serialize>(path: Option<&Path>, report: &T) -> std::result::Result<(), Failure> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    match path {
        Some(p) => write_out(p, json.as_bytes()),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ParamsReport {
    kind: &'static str,
    spec_hash: String,
    seed_len: Option<usize>,
    output_len: Option<usize>,
    error_total: Option<f64>,
    notes: Vec<String>,
}

fn cmd_params(a: ParamsArgs) -> CliResult {
    let mode = format!("--mode {:?}", a.mode).to_lowercase();
    let mut notes = Vec::new();
    let (doc, error_total) = match a.mode {
        Mode::Flat | Mode::Storage => {
            let beta = need(a.beta, "beta", &mode)?;
            if !(0.0..0.5).contains(&beta) {
                return Err(Failure::new(EXIT_INFEASIBLE, format!("beta must satisfy beta < 1/2, got {beta}")));
            }
            let spec = build_pipeline(need(a.n, "n", &mode)?, need(a.k, "k", &mode)?, beta, need(a.eps, "eps", &mode)?)?;
            if a.mode == Mode::Storage {
                notes.push(format!("tolerates {} bits of adversary storage", (beta * spec.k as f64).floor()));
            } else {
                notes.push(format!("flat sources with {} bits of entropy", spec.k as f64 * (1.0 - beta)));
            }
            if !spec.epsilon_in_regime {
                notes.push(format!("epsilon below 2^(-k^beta) = {}", spec.epsilon_floor));
            }
            notes.extend(spec.roundings.iter().cloned());
            let total = spec.error_total;
            (SpecDocument::Pipeline(spec), Some(total))
        }
        Mode::Qproof => {
            let spec = build_high_entropy_extractor(need(a.n, "n", &mode)?, need(a.b, "b", &mode)?, need(a.eps, "eps", &mode)?)?;
            notes.push(format!("block entropy n/2 - b - log2(1/eps) = {}", spec.block_entropy));
            let total = spec.error_budget;
            (SpecDocument::HighEntropy(spec), Some(total))
        }
        Mode::Trevisan => {
            let preset = match a.preset {
                PresetArg::Thm42 => Preset::Thm42,
                PresetArg::Thm43 => Preset::Thm43,
            };
            let spec = build_trevisan(preset, need(a.n, "n", &mode)?, need(a.m, "m", &mode)?, need(a.eps, "eps", &mode)?)?;
            let eps = spec.epsilon_target;
            (SpecDocument::Trevisan(spec), Some(eps))
        }
        Mode::Toeplitz => (
            SpecDocument::Toeplitz(ToeplitzSpec::new(need(a.n, "n", &mode)?, need(a.m, "m", &mode)?)?),
            None,
        ),
        Mode::Condenser => {
            let spec = build_condenser(need(a.n, "n", &mode)?, need(a.k, "k", &mode)?, need(a.eps, "eps", &mode)?, a.alpha)?;
            let eps = spec.epsilon;
            (SpecDocument::Condenser(spec), Some(eps))
        }
    };
    let f = doc.seeded().ok();
    let report = ParamsReport {
        kind: doc.kind(),
        spec_hash: doc.hash(),
        seed_len: f.as_ref().map(|f| f.seed_len()),
        output_len: f.as_ref().map(|f| f.output_len()),
        error_total,
        notes,
    };
    let json = doc.to_json_pretty();
    match &a.out {
        Some(p) => write_out(p, json.as_bytes())?,
        None => println!("{json}"),
    }
    match &a.report {
        Some(p) => emit_report(Some(p), &report)?,
        None => eprintln!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    Ok(EXIT_PASS)
}

fn load_spec(path: &Path) -> std::result::Result<SpecDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_BAD_SPEC, format!("reading {}: {e}", path.display())))?;
    SpecDocument::from_json(&text).map_err(|e| Failure::new(EXIT_BAD_SPEC, format!("parsing {}: {e}", path.display())))
}

fn build_seeded(doc: &SpecDocument) -> std::result::Result<Box<dyn SeededFunction + Sync>, Failure> {
    doc.seeded().map_err(|e| Failure::new(EXIT_BAD_SPEC, format!("spec does not build: {e}")))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ExtractReport {
    spec_kind: &'static str,
    spec_hash: String,
    seed_source: String,
    seed_hex: String,
    input_digest: String,
    input_bytes: usize,
    bits_used: usize,
    output_digest: String,
    output_bits: usize,
    elapsed_seconds: f64,
    throughput_mib_per_second: f64,
}

fn cmd_extract(a: ExtractArgs, strong: bool) -> CliResult {
    let doc = load_spec(&a.spec)?;
    if strong && !matches!(doc, SpecDocument::Condenser(_)) {
        return Err(Failure::new(EXIT_BAD_SPEC, format!("condense needs a condenser spec, got {}", doc.kind())));
    }
    let f: Box<dyn SeededFunction + Sync> = match (&doc, strong) {
        (SpecDocument::Condenser(s), true) => {
            let c = GuvCondenser::new(s.clone()).map_err(|e| Failure::new(EXIT_BAD_SPEC, e.to_string()))?;
            Box::new(OwnedStrong(c))
        }
        _ => build_seeded(&doc)?,
    };
    let input = fs::read(&a.input).map_err(|e| Failure::new(EXIT_IO, format!("reading {}: {e}", a.input.display())))?;
    let n = f.input_len();
    if input.len() * 8 < n {
        return Err(Failure::new(
            EXIT_SHORT_INPUT,
            format!("input has {} bits, spec needs {n}", input.len() * 8),
        ));
    }
    let (seed_bytes, seed_source) = read_seed(&a)?;
    let t = f.seed_len();
    if seed_bytes.len() != t.div_ceil(8) {
        return Err(Failure::new(
            EXIT_SEED_MISMATCH,
            format!("seed has {} bytes, spec needs {t} bits ({} bytes)", seed_bytes.len(), t.div_ceil(8)),
        ));
    }
    let x = BitString::from_bytes(&input[..n.div_ceil(8)], n)?;
    let y = BitString::from_bytes(&seed_bytes, t)?;
    let start = Instant::now();
    let out = f.apply(&x, &y)?;
    let elapsed = start.elapsed().as_secs_f64();
    let out_bytes = out.as_bytes().to_vec();
    write_out(&a.out, &out_bytes)?;
    let report = ExtractReport {
        spec_kind: doc.kind(),
        spec_hash: doc.hash(),
        seed_source,
        seed_hex: hex::encode(&seed_bytes),
        input_digest: sha256_hex(&input),
        input_bytes: input.len(),
        bits_used: n,
        output_digest: sha256_hex(&out_bytes),
        output_bits: out.len(),
        elapsed_seconds: elapsed,
        throughput_mib_per_second: if elapsed > 0.0 { n as f64 / 8.0 / 1048576.0 / elapsed } else { f64::INFINITY },
    };
    match &a.report {
        Some(p) => emit_report(Some(p), &report)?,
        None => eprintln!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    Ok(EXIT_PASS)
}

/// Strong form that owns its condenser, for boxing.
struct OwnedStrong(GuvCondenser);

impl SeededFunction for OwnedStrong {
    fn input_len(&self) -> usize {
        StrongForm(&self.0).input_len()
    }
    fn seed_len(&self) -> usize {
        StrongForm(&self.0).seed_len()
    }
    fn output_len(&self) -> usize {
        StrongForm(&self.0).output_len()
    }
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        StrongForm(&self.0).apply_unchecked(x, y)
    }
}

fn read_seed(a: &ExtractArgs) -> std::result::Result<(Vec<u8>, String), Failure> {
    if let Some(path) = &a.seed_file {
        let bytes = fs::read(path).map_err(|e| Failure::new(EXIT_IO, format!("reading {}: {e}", path.display())))?;
        return Ok((bytes, format!("file:{}", path.display())));
    }
    let literal = a.seed.as_deref().expect("clap enforces one seed source");
    if literal == "system" {
        let spec = load_spec(&a.spec)?;
        let t = build_seeded(&spec)?.seed_len();
        let mut bytes = vec![0u8; t.div_ceil(8)];
        OsRng.fill_bytes(&mut bytes);
        eprintln!("seed drawn from system entropy: {}", hex::encode(&bytes));
        return Ok((bytes, "system".into()));
    }
    let cleaned = literal.trim_start_matches("0x");
    let bytes = hex::decode(cleaned).map_err(|e| Failure::new(EXIT_USAGE, format!("--seed is not hex: {e}")))?;
    Ok((bytes, "literal".into()))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyReport<T: Serialize> {
    target: String,
    status: Status,
    test_seed: u64,
    spec_hash: Option<String>,
    detail: T,
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let test_seed = a.test_seed.unwrap_or(DEFAULT_TEST_SEED);
    let mut budget = Budget::from_env()?;
    if let Some(b) = a.budget {
        if b == 0 {
            return Err(Failure::new(EXIT_USAGE, "--budget must be positive"));
        }
        budget = budget.with_evaluations(b);
    }
    let doc = a.spec.as_deref().map(load_spec).transpose()?;
    let spec_hash = doc.as_ref().map(|d| d.hash());
    let target = format!("{:?}", a.target).to_lowercase();
    macro_rules! finish {
        ($verdict:expr) => {{
            let verdict = $verdict;
            let status = verdict.status;
            emit_report(
                a.report.as_deref(),
                &VerifyReport {
                    target: target.clone(),
                    status,
                    test_seed,
                    spec_hash: spec_hash.clone(),
                    detail: verdict,
                },
            )?;
            Ok(status.exit_code())
        }};
    }
    let wrong = |want: &str| Failure::new(EXIT_BAD_SPEC, format!("target {target} needs a {want} spec"));
    let result: CliResult = (|| match a.target {
        Target::Design => match &doc {
            Some(SpecDocument::Design(d)) => finish!(verify::verify_design_doc(d)),
            Some(SpecDocument::Trevisan(s)) => finish!(verify::verify_design_doc(&s.design)),
            _ => Err(wrong("design or trevisan")),
        },
        Target::Code => match &doc {
            Some(SpecDocument::Trevisan(s)) => finish!(verify::verify_code(&s.code, &budget)?),
            _ => Err(wrong("trevisan")),
        },
        Target::Extractor => {
            let doc = doc.as_ref().ok_or_else(|| wrong("trevisan, toeplitz or high-entropy"))?;
            let f = build_seeded(doc)?;
            let k = need(a.k, "k", "--target extractor")?;
            let eps = match (a.eps, doc) {
                (Some(e), _) => e,
                (None, SpecDocument::Trevisan(s)) => s.epsilon_target,
                (None, SpecDocument::HighEntropy(s)) => s.error_budget,
                _ => return Err(Failure::new(EXIT_USAGE, "--eps is required for this spec")),
            };
            let sources = sample_flat_sources(f.input_len() as u32, k, a.sources.unwrap_or(50), test_seed)?;
            let verdict = match doc {
                SpecDocument::Trevisan(s) => {
                    let ext = TrevisanExtractor::new(s.clone())?;
                    verify::verify_extractor(&ext.words()?, &sources, eps, &budget)?
                }
                SpecDocument::Toeplitz(s) => verify::verify_extractor(&s.words()?, &sources, eps, &budget)?,
                _ => {
                    if f.input_len() > 64 || f.seed_len() > 40 || f.output_len() > 20 {
                        return Err(Error::ResourceLimit(format!(
                            "{} spec too large to enumerate (n={}, t={}, m={})",
                            doc.kind(),
                            f.input_len(),
                            f.seed_len(),
                            f.output_len()
                        ))
                        .into());
                    }
                    verify::verify_extractor(&Packed(f.as_ref()), &sources, eps, &budget)?
                }
            };
            finish!(verdict)
        }
        Target::Condenser => match &doc {
            Some(SpecDocument::Condenser(s)) => {
                let c = GuvCondenser::new(s.clone())?;
                let sources = sample_flat_sources(s.n as u32, s.target_entropy as u32, a.sources.unwrap_or(50), test_seed)?;
                finish!(verify::verify_condenser(&c, &sources, &budget)?)
            }
            _ => Err(wrong("condenser")),
        },
        Target::Lemmas => finish!(verify::verify_lemmas(a.sources.unwrap_or(200), test_seed, &budget)?),
        Target::Pipeline => match &doc {
            Some(SpecDocument::Pipeline(s)) => finish!(verify::verify_pipeline(s, a.sources.unwrap_or(100), test_seed)?),
            _ => Err(wrong("pipeline")),
        },
    })();
    if let Err(f) = &result {
        if f.code == EXIT_INCONCLUSIVE {
            #[derive(Serialize)]
            struct Reason<'a> {
                reason: &'a str,
            }
            emit_report(
                a.report.as_deref(),
                &VerifyReport {
                    target,
                    status: Status::Inconclusive,
                    test_seed,
                    spec_hash,
                    detail: Reason { reason: &f.message },
                },
            )?;
        }
    }
    result
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BenchReport {
    spec_kind: &'static str,
    spec_hash: String,
    test_seed: u64,
    input_bits: usize,
    seed_bits: usize,
    output_bits: usize,
    runs: usize,
    best_seconds: f64,
    mean_seconds: f64,
    throughput_mib_per_second: f64,
}

fn cmd_bench(a: BenchArgs) -> CliResult {
    let doc = load_spec(&a.spec)?;
    let f = build_seeded(&doc)?;
    if a.runs == 0 {
        return Err(Failure::new(EXIT_USAGE, "--runs must be positive"));
    }
    let test_seed = a.test_seed.unwrap_or(DEFAULT_TEST_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(test_seed);
    let x = verify::random_bits(&mut rng, f.input_len());
    let y = verify::random_bits(&mut rng, f.seed_len());
    let mut times = Vec::with_capacity(a.runs);
    for _ in 0..a.runs {
        let start = Instant::now();
        let out = f.apply(&x, &y)?;
        times.push(start.elapsed().as_secs_f64());
        std::hint::black_box(out);
    }
    let best = times.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    emit_report(
        a.report.as_deref(),
        &BenchReport {
            spec_kind: doc.kind(),
            spec_hash: doc.hash(),
            test_seed,
            input_bits: f.input_len(),
            seed_bits: f.seed_len(),
            output_bits: f.output_len(),
            runs: a.runs,
            best_seconds: best,
            mean_seconds: mean,
            throughput_mib_per_second: f.input_len() as f64 / 8.0 / 1048576.0 / best.max(1e-12),
        },
    )?;
    Ok(EXIT_PASS)
}
