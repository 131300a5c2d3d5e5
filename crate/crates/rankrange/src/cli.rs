//! Command-line surface: argument parsing, file IO, and the report envelope.
//!
//! Every command emits a single JSON document that carries the artifact
//! version, a SHA-256 digest of each input, and the full effective
//! configuration, so any report can be reproduced from its own header.
//! Exit code 0 means the command succeeded, 2 means it ran to completion
//! but the verified answer is negative (no code found, a check failed),
//! and 1 means an error stopped the run. Errors print a one-line JSON
//! object to stderr.
//!
//! Tolerance defaults form one hierarchy: verification accepts at 1e-8,
//! the direct construction at 1e-8, the descent solver targets 1e-10, and
//! the eigensolver runs at 1e-13 internally.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::formats::{
    CertificateJson, ChannelJson, CodeCertificateJson, HalfspaceSetJson, MatrixJson, TupleJson,
};
use crate::geometry::{
    check_against_halfspaces, outer_halfspaces, sample_inner, segment_witness, sphere_family,
    HalfspaceCheck,
};
use crate::hermitian::{HermitianMatrix, HermitianTuple};
use crate::qec::{builtin_channel, find_code, verify_code};
use crate::random::{derive_seed, random_unit_direction};
use crate::range::{
    membership_solve_target, single_matrix_interval, Membership, RangeCertificate, SolveOptions,
    Target,
};
use crate::tverberg::{construct_point, MAX_CHAIN_LEN};
use crate::channel::KrausChannel;

const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Acceptance threshold for verification commands.
const DEFAULT_VERIFY_TOL: f64 = 1e-8;
/// Acceptance threshold for the direct construction.
const DEFAULT_CONSTRUCT_TOL: f64 = 1e-8;
/// Success threshold inside the descent solver.
const DEFAULT_OPT_TOL: f64 = 1e-10;
/// Closed-form sphere witnesses are exact up to roundoff.
const DEFAULT_SPHERE_TOL: f64 = 1e-12;
/// Endpoint witnesses of the single-matrix interval.
const DEFAULT_INTERVAL_TOL: f64 = 1e-9;

/// Entry point for the binary; returns the process exit code.
pub fn run(args: impl Iterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("rankrange".to_owned()).chain(args)) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion) {
                print!("{err}");
                return 0;
            }
            report_error(&CliError::usage(&err.to_string()));
            return 1;
        }
    };
    init_workers(cli.workers);
    let globals = Globals { workers: cli.workers, output: cli.output };
    match execute(&globals, cli.command) {
        Ok(outcome) => match deliver(globals.output.as_deref(), &outcome.text) {
            Ok(()) => outcome.exit,
            Err(err) => {
                report_error(&err);
                1
            }
        },
        Err(err) => {
            report_error(&err);
            1
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rankrange",
    version,
    about = "Joint rank-k numerical ranges: certificates, constructions, outer bounds, and code search"
)]
struct Cli {
    /// Worker threads for parallel sections; RANKRANGE_WORKERS is the fallback.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bound a tuple's rank-k range from outside and sample it from inside.
    Range(RangeArgs),
    /// Build a rank-k point deterministically when the dimension allows it.
    Construct(ConstructArgs),
    /// Search a Kraus channel for a rank-k error-correcting code.
    FindCode(FindCodeArgs),
    /// Recheck a code certificate against its channel.
    VerifyCode(VerifyCodeArgs),
    /// Walk segments from a high-rank center point to a sampled tip.
    Starshape(StarshapeArgs),
    /// Certify the sphere family's closed-form witnesses.
    SphereDemo(SphereDemoArgs),
    /// Exact rank-k interval of a single Hermitian matrix.
    OracleInterval(OracleIntervalArgs),
}

#[derive(Args, Debug, Serialize)]
struct RangeArgs {
    /// Hermitian tuple JSON file.
    #[arg(long)]
    tuple: PathBuf,
    /// Rank of the compression.
    #[arg(long)]
    k: usize,
    /// RNG seed for outer directions and sample starts.
    #[arg(long)]
    seed: u64,
    /// Random outer directions beyond the 2m axis ones.
    #[arg(long, default_value_t = 512)]
    directions: usize,
    /// Inner sample attempts.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Acceptance threshold for certificates.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
    /// Success threshold inside the descent solver.
    #[arg(long, default_value_t = DEFAULT_OPT_TOL)]
    opt_tol: f64,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Re-verify this certificate file instead of sampling fresh points.
    #[arg(long)]
    check: Option<PathBuf>,
    /// Also write the sampled point cloud to this CSV path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    /// Hermitian tuple JSON file.
    #[arg(long)]
    tuple: PathBuf,
    /// Rank of the compression.
    #[arg(long)]
    k: usize,
    /// Acceptance threshold for the constructed certificate.
    #[arg(long, default_value_t = DEFAULT_CONSTRUCT_TOL)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct FindCodeArgs {
    /// Kraus channel JSON file.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    channel: Option<PathBuf>,
    /// Named example channel; requires --p.
    #[arg(long, requires = "p")]
    builtin: Option<String>,
    /// Parameter for the builtin channel.
    #[arg(long)]
    p: Option<f64>,
    /// Code dimension to search for.
    #[arg(long)]
    k: usize,
    /// RNG seed for the descent solver.
    #[arg(long)]
    seed: u64,
    /// Acceptance threshold for the Knill-Laflamme residual.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

#[derive(Args, Debug, Serialize)]
struct VerifyCodeArgs {
    /// Kraus channel JSON file.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    channel: Option<PathBuf>,
    /// Named example channel; requires --p.
    #[arg(long, requires = "p")]
    builtin: Option<String>,
    /// Parameter for the builtin channel.
    #[arg(long)]
    p: Option<f64>,
    /// Code certificate JSON file.
    #[arg(long)]
    certificate: PathBuf,
    /// Acceptance threshold for the Knill-Laflamme residual.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct StarshapeArgs {
    /// Hermitian tuple JSON file.
    #[arg(long)]
    tuple: PathBuf,
    /// Rank of the segment tip.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Rank of the star center.
    #[arg(long)]
    center_rank: usize,
    /// RNG seed for the tip sample and any solver fallback.
    #[arg(long)]
    seed: u64,
    /// Equally spaced segment parameters to certify, including both ends.
    #[arg(long, default_value_t = 21)]
    samples: usize,
    /// Acceptance threshold for every certificate on the segment.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

#[derive(Args, Debug, Serialize)]
struct SphereDemoArgs {
    /// Rank of the sphere family.
    #[arg(long)]
    k: usize,
    /// RNG seed for the sampled unit points.
    #[arg(long)]
    seed: u64,
    /// Number of unit points to certify.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Acceptance threshold for the closed-form witnesses.
    #[arg(long, default_value_t = DEFAULT_SPHERE_TOL)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct OracleIntervalArgs {
    /// Hermitian matrix JSON file.
    #[arg(long, required_unless_present = "diag", conflicts_with = "diag")]
    matrix: Option<PathBuf>,
    /// Comma-separated diagonal entries instead of a file.
    #[arg(long)]
    diag: Option<String>,
    /// Rank of the compression.
    #[arg(long)]
    k: usize,
    /// Acceptance threshold for the endpoint witnesses.
    #[arg(long, default_value_t = DEFAULT_INTERVAL_TOL)]
    tol: f64,
}

struct Globals {
    workers: Option<usize>,
    output: Option<PathBuf>,
}

struct Outcome {
    text: String,
    exit: i32,
}

struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn usage(full: &str) -> CliError {
        let first = full.lines().next().unwrap_or("invalid arguments");
        CliError { kind: "usage", message: first.trim_start_matches("error: ").to_owned() }
    }

    fn io(path: &Path, err: &std::io::Error) -> CliError {
        CliError { kind: "io", message: format!("{}: {err}", path.display()) }
    }

    fn parse(path: &Path, err: &serde_json::Error) -> CliError {
        CliError { kind: "parse", message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> CliError {
        let kind = match err {
            Error::Shape(_) => "shape",
            Error::Dimension(_) => "dimension",
            Error::NotHermitian { .. } => "not-hermitian",
            Error::NotIsometry { .. } => "not-isometry",
            Error::NoConvergence { .. } => "no-convergence",
            Error::Degeneracy(_) => "degeneracy",
            Error::Domain(_) => "domain",
            Error::TooLarge(_) => "too-large",
            Error::NonFinite(_) => "non-finite",
        };
        CliError { kind, message: err.to_string() }
    }
}

fn report_error(err: &CliError) {
    eprintln!("{}", json!({ "error": { "kind": err.kind, "message": err.message } }));
}

fn init_workers(explicit: Option<usize>) {
    let n = explicit.or_else(|| {
        std::env::var("RANKRANGE_WORKERS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn deliver(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, &e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct InputDigest {
    role: &'static str,
    source: String,
    sha256: String,
}

fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn digest_value<T: Serialize>(role: &'static str, source: String, value: &T) -> InputDigest {
    let canonical = serde_json::to_string(value).unwrap_or_default();
    InputDigest { role, source, sha256: digest_bytes(canonical.as_bytes()) }
}

fn read_input(role: &'static str, path: &Path) -> Result<(Vec<u8>, InputDigest), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, &e))?;
    let digest = InputDigest {
        role,
        source: path.display().to_string(),
        sha256: digest_bytes(&bytes),
    };
    Ok((bytes, digest))
}

fn load_tuple(path: &Path) -> Result<(HermitianTuple, InputDigest), CliError> {
    let (bytes, digest) = read_input("tuple", path)?;
    let dto: TupleJson = serde_json::from_slice(&bytes).map_err(|e| CliError::parse(path, &e))?;
    Ok((dto.to_tuple()?, digest))
}

fn load_channel(
    path: Option<&Path>,
    builtin: Option<&str>,
    p: Option<f64>,
) -> Result<(KrausChannel, InputDigest), CliError> {
    if let Some(path) = path {
        let (bytes, digest) = read_input("channel", path)?;
        let dto: ChannelJson =
            serde_json::from_slice(&bytes).map_err(|e| CliError::parse(path, &e))?;
        return Ok((dto.to_channel()?, digest));
    }
    let name = builtin.expect("clap enforces channel/builtin");
    let p = p.expect("clap enforces --p with --builtin");
    let ch = builtin_channel(name, p)?;
    let digest = digest_value("channel", format!("builtin:{name}(p={p})"), &ChannelJson::from_channel(&ch));
    Ok((ch, digest))
}

fn render<R: Serialize>(
    command: &'static str,
    inputs: Vec<InputDigest>,
    config: Value,
    result: &R,
) -> Result<String, CliError> {
    let report = json!({
        "version": VERSION,
        "command": command,
        "inputs": inputs,
        "config": config,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError { kind: "parse", message: e.to_string() })?;
    text.push('\n');
    Ok(text)
}

fn config_value<A: Serialize>(globals: &Globals, args: &A) -> Value {
    let mut map = match serde_json::to_value(args) {
        Ok(Value::Object(map)) => map,
        _ => serde_json::Map::new(),
    };
    map.insert("workers".into(), json!(globals.workers));
    map.insert(
        "output".into(),
        json!(globals.output.as_ref().map(|p| p.display().to_string())),
    );
    Value::Object(map)
}

fn execute(globals: &Globals, command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Range(args) => cmd_range(globals, args),
        Command::Construct(args) => cmd_construct(globals, args),
        Command::FindCode(args) => cmd_find_code(globals, args),
        Command::VerifyCode(args) => cmd_verify_code(globals, args),
        Command::Starshape(args) => cmd_starshape(globals, args),
        Command::SphereDemo(args) => cmd_sphere_demo(globals, args),
        Command::OracleInterval(args) => cmd_oracle_interval(globals, args),
    }
}

#[derive(Serialize)]
struct HalfspaceCheckJson {
    min_slack: f64,
    worst_direction: Option<usize>,
    consistent: bool,
}

impl HalfspaceCheckJson {
    fn from_check(check: &HalfspaceCheck) -> HalfspaceCheckJson {
        HalfspaceCheckJson {
            min_slack: check.min_slack,
            worst_direction: check.worst,
            consistent: check.consistent,
        }
    }
}

#[derive(Serialize)]
struct RangeSampleResult {
    mode: &'static str,
    m: usize,
    n: usize,
    k: usize,
    outer: HalfspaceSetJson,
    samples: Vec<CertificateJson>,
    sample_checks: Vec<HalfspaceCheckJson>,
    requested_samples: usize,
    accepted_samples: usize,
    consistent: bool,
}

#[derive(Serialize)]
struct RangeCheckResult {
    mode: &'static str,
    m: usize,
    n: usize,
    k: usize,
    point: Vec<f64>,
    residual: f64,
    tol: f64,
    accepted: bool,
    halfspace: HalfspaceCheckJson,
    consistent: bool,
}

fn cmd_range(globals: &Globals, args: RangeArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    let (a, tuple_digest) = load_tuple(&args.tuple)?;
    let mut inputs = vec![tuple_digest];
    let outer = outer_halfspaces(&a, args.k, args.directions, args.seed)?;

    if let Some(cert_path) = &args.check {
        let (bytes, digest) = read_input("certificate", cert_path)?;
        inputs.push(digest);
        let dto: CertificateJson =
            serde_json::from_slice(&bytes).map_err(|e| CliError::parse(cert_path, &e))?;
        let stored = dto.to_certificate()?;
        let fresh = RangeCertificate::evaluate_at(&a, stored.witness.clone(), &stored.point)?;
        let accepted = fresh.residual <= args.tol;
        let halfspace = check_against_halfspaces(&stored.point, &outer)?;
        let consistent = halfspace.consistent;
        let result = RangeCheckResult {
            mode: "check",
            m: a.m(),
            n: a.n(),
            k: args.k,
            point: stored.point.clone(),
            residual: fresh.residual,
            tol: args.tol,
            accepted,
            halfspace: HalfspaceCheckJson::from_check(&halfspace),
            consistent,
        };
        let text = render("range", inputs, config, &result)?;
        return Ok(Outcome { text, exit: if accepted && consistent { 0 } else { 2 } });
    }

    let opts = SolveOptions {
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.opt_tol,
        seed: args.seed,
        ..SolveOptions::default()
    };
    let samples = sample_inner(&a, args.k, args.samples, &opts)?;
    let mut checks = Vec::with_capacity(samples.len());
    let mut consistent = true;
    for cert in &samples {
        let check = check_against_halfspaces(&cert.point, &outer)?;
        consistent = consistent && check.consistent;
        checks.push(HalfspaceCheckJson::from_check(&check));
    }
    if let Some(csv_path) = &args.csv {
        write_point_cloud_csv(csv_path, a.m(), &samples)?;
    }
    let result = RangeSampleResult {
        mode: "sample",
        m: a.m(),
        n: a.n(),
        k: args.k,
        outer: HalfspaceSetJson::from_outer(&outer),
        accepted_samples: samples.len(),
        requested_samples: args.samples,
        samples: samples.iter().map(CertificateJson::from_certificate).collect(),
        sample_checks: checks,
        consistent,
    };
    let text = render("range", inputs, config, &result)?;
    Ok(Outcome { text, exit: if consistent { 0 } else { 2 } })
}

fn write_point_cloud_csv(
    path: &Path,
    m: usize,
    samples: &[RangeCertificate],
) -> Result<(), CliError> {
    let mut text = String::new();
    for j in 1..=m {
        text.push_str(&format!("a{j},"));
    }
    text.push_str("residual\n");
    for cert in samples {
        for v in &cert.point {
            text.push_str(&format!("{v},"));
        }
        text.push_str(&format!("{}\n", cert.residual));
    }
    fs::write(path, text).map_err(|e| CliError::io(path, &e))
}

#[derive(Serialize)]
struct ConstructResult {
    m: usize,
    n: usize,
    k: usize,
    guaranteed_dimension: usize,
    certificate: CertificateJson,
    residual: f64,
    tol: f64,
    accepted: bool,
}

fn cmd_construct(globals: &Globals, args: ConstructArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    let (a, digest) = load_tuple(&args.tuple)?;
    let cert = construct_point(&a, args.k)?;
    let accepted = cert.residual <= args.tol;
    let result = ConstructResult {
        m: a.m(),
        n: a.n(),
        k: args.k,
        guaranteed_dimension: (args.k.max(1) - 1) * (a.m() + 1) * (a.m() + 1),
        certificate: CertificateJson::from_certificate(&cert),
        residual: cert.residual,
        tol: args.tol,
        accepted,
    };
    let text = render("construct", vec![digest], config, &result)?;
    Ok(Outcome { text, exit: if accepted { 0 } else { 2 } })
}

#[derive(Serialize)]
struct FindCodeResult {
    n: usize,
    k: usize,
    family_size: usize,
    reduced_size: usize,
    via_construction: bool,
    residual: f64,
    tol: f64,
    found: bool,
    certificate: CodeCertificateJson,
}

fn cmd_find_code(globals: &Globals, args: FindCodeArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    let (ch, digest) = load_channel(args.channel.as_deref(), args.builtin.as_deref(), args.p)?;
    let opts = SolveOptions {
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
        ..SolveOptions::default()
    };
    let search = find_code(&ch, args.k, &opts)?;
    let found = search.check.accepted;
    let result = FindCodeResult {
        n: ch.n(),
        k: args.k,
        family_size: search.family_size,
        reduced_size: search.reduced_size,
        via_construction: search.via_construction,
        residual: search.check.certificate.residual,
        tol: args.tol,
        found,
        certificate: CodeCertificateJson::from_certificate(&search.check.certificate),
    };
    let text = render("find-code", vec![digest], config, &result)?;
    Ok(Outcome { text, exit: if found { 0 } else { 2 } })
}

#[derive(Serialize)]
struct VerifyCodeResult {
    n: usize,
    k: usize,
    residual: f64,
    tol: f64,
    accepted: bool,
    /// Frobenius distance between the stored gamma and the recomputed one.
    gamma_deviation: f64,
    certificate: CodeCertificateJson,
}

fn cmd_verify_code(globals: &Globals, args: VerifyCodeArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    let (ch, channel_digest) =
        load_channel(args.channel.as_deref(), args.builtin.as_deref(), args.p)?;
    let (bytes, cert_digest) = read_input("certificate", &args.certificate)?;
    let dto: CodeCertificateJson =
        serde_json::from_slice(&bytes).map_err(|e| CliError::parse(&args.certificate, &e))?;
    let stored = dto.to_certificate()?;
    let check = verify_code(&ch, &stored.basis, args.tol)?;
    let gamma_deviation = check.certificate.gamma.sub(&stored.gamma).frobenius_norm();
    let result = VerifyCodeResult {
        n: ch.n(),
        k: stored.basis.k(),
        residual: check.certificate.residual,
        tol: args.tol,
        accepted: check.accepted,
        gamma_deviation,
        certificate: CodeCertificateJson::from_certificate(&check.certificate),
    };
    let text = render("verify-code", vec![channel_digest, cert_digest], config, &result)?;
    Ok(Outcome { text, exit: if check.accepted { 0 } else { 2 } })
}

#[derive(Serialize)]
struct SegmentSampleJson {
    t: f64,
    certificate: CertificateJson,
    accepted: bool,
}

#[derive(Serialize)]
struct StarshapeResult {
    m: usize,
    n: usize,
    tip_rank: usize,
    center_rank: usize,
    tol: f64,
    center: CertificateJson,
    center_accepted: bool,
    tip: Option<CertificateJson>,
    samples: Vec<SegmentSampleJson>,
    all_accepted: bool,
}

fn cmd_starshape(globals: &Globals, args: StarshapeArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    if args.samples < 2 {
        return Err(CliError::from(Error::Domain(format!(
            "need at least 2 segment samples, got {}",
            args.samples
        ))));
    }
    let (a, digest) = load_tuple(&args.tuple)?;
    let opts = SolveOptions {
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
        ..SolveOptions::default()
    };
    let center = certified_point(&a, args.center_rank, &opts)?;
    let center_accepted = center.residual <= args.tol;
    if !center_accepted {
        let result = StarshapeResult {
            m: a.m(),
            n: a.n(),
            tip_rank: args.k,
            center_rank: args.center_rank,
            tol: args.tol,
            center: CertificateJson::from_certificate(&center),
            center_accepted,
            tip: None,
            samples: Vec::new(),
            all_accepted: false,
        };
        let text = render("starshape", vec![digest], config, &result)?;
        return Ok(Outcome { text, exit: 2 });
    }
    let tip_opts = SolveOptions { seed: derive_seed(args.seed, 7001), ..opts.clone() };
    let tip = sample_inner(&a, args.k, 1, &tip_opts)?.into_iter().next();
    let Some(tip) = tip else {
        let result = StarshapeResult {
            m: a.m(),
            n: a.n(),
            tip_rank: args.k,
            center_rank: args.center_rank,
            tol: args.tol,
            center: CertificateJson::from_certificate(&center),
            center_accepted,
            tip: None,
            samples: Vec::new(),
            all_accepted: false,
        };
        let text = render("starshape", vec![digest], config, &result)?;
        return Ok(Outcome { text, exit: 2 });
    };
    let mut samples = Vec::with_capacity(args.samples);
    let mut all_accepted = true;
    for i in 0..args.samples {
        let t = i as f64 / (args.samples - 1) as f64;
        let cert = segment_witness(&a, &tip, &center, t)?;
        let accepted = cert.residual <= args.tol;
        all_accepted = all_accepted && accepted;
        samples.push(SegmentSampleJson {
            t,
            certificate: CertificateJson::from_certificate(&cert),
            accepted,
        });
    }
    let result = StarshapeResult {
        m: a.m(),
        n: a.n(),
        tip_rank: args.k,
        center_rank: args.center_rank,
        tol: args.tol,
        center: CertificateJson::from_certificate(&center),
        center_accepted,
        tip: Some(CertificateJson::from_certificate(&tip)),
        samples,
        all_accepted,
    };
    let text = render("starshape", vec![digest], config, &result)?;
    Ok(Outcome { text, exit: if all_accepted { 0 } else { 2 } })
}

/// A certified point of the rank-k range: the deterministic construction
/// when the dimension bound allows it, the descent solver otherwise.
fn certified_point(
    a: &HermitianTuple,
    k: usize,
    opts: &SolveOptions,
) -> Result<RangeCertificate, CliError> {
    let m = a.m();
    let n = a.n();
    let chain = (m + 1) * (k.max(1) - 1) + 1;
    let constructible =
        k == 1 || (n >= (k - 1) * (m + 1) * (m + 1) && chain <= MAX_CHAIN_LEN);
    if constructible {
        if let Ok(cert) = construct_point(a, k) {
            return Ok(cert);
        }
    }
    let cert = match membership_solve_target(a, Target::Free, k, opts)? {
        Membership::Member { certificate, .. } => certificate,
        Membership::Unresolved { best, .. } => best,
    };
    Ok(cert)
}

#[derive(Serialize)]
struct SphereDemoResult {
    k: usize,
    n: usize,
    count: usize,
    verified: usize,
    max_residual: f64,
    /// Largest deviation of any outer support bound from the exact value 1.
    outer_bound_deviation: f64,
    tol: f64,
    accepted: bool,
}

fn cmd_sphere_demo(globals: &Globals, args: SphereDemoArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    let fam = sphere_family(args.k)?;
    let mut verified = 0usize;
    let mut max_residual = 0.0f64;
    for i in 0..args.count {
        let point = random_unit_direction(3, derive_seed(args.seed, i as u64));
        let cert = fam.witness(&point)?;
        max_residual = max_residual.max(cert.residual);
        if cert.residual <= args.tol {
            verified += 1;
        }
    }
    let outer = outer_halfspaces(fam.tuple(), args.k, 64, derive_seed(args.seed, u64::MAX))?;
    let outer_bound_deviation = outer
        .halfspaces
        .iter()
        .map(|h| (h.bound - 1.0).abs())
        .fold(0.0f64, f64::max);
    let accepted = verified == args.count;
    let result = SphereDemoResult {
        k: args.k,
        n: fam.tuple().n(),
        count: args.count,
        verified,
        max_residual,
        outer_bound_deviation,
        tol: args.tol,
        accepted,
    };
    let text = render("sphere-demo", Vec::new(), config, &result)?;
    Ok(Outcome { text, exit: if accepted { 0 } else { 2 } })
}

#[derive(Serialize)]
struct OracleIntervalResult {
    n: usize,
    k: usize,
    eigenvalues: Vec<f64>,
    empty: bool,
    interval: Option<[f64; 2]>,
    witness_residuals: Option<[f64; 3]>,
    tol: f64,
    accepted: bool,
}

fn cmd_oracle_interval(globals: &Globals, args: OracleIntervalArgs) -> Result<Outcome, CliError> {
    let config = config_value(globals, &args);
    let (a1, digest) = match (&args.matrix, &args.diag) {
        (Some(path), _) => {
            let (bytes, digest) = read_input("matrix", path)?;
            let dto: MatrixJson =
                serde_json::from_slice(&bytes).map_err(|e| CliError::parse(path, &e))?;
            (HermitianMatrix::new(dto.to_matrix()?)?, digest)
        }
        (None, Some(spec)) => {
            let values = parse_diag(spec)?;
            let a1 = HermitianMatrix::diagonal(&values);
            let digest = digest_value(
                "matrix",
                format!("literal:diag({spec})"),
                &MatrixJson::from_matrix(a1.matrix()),
            );
            (a1, digest)
        }
        (None, None) => unreachable!("clap enforces matrix/diag"),
    };
    let range = single_matrix_interval(&a1, args.k)?;
    let (interval, residuals, accepted) = match &range.interval {
        Some(w) => {
            let rs = [w.lo_certificate.residual, w.mid_certificate.residual, w.hi_certificate.residual];
            let ok = rs.iter().all(|&r| r <= args.tol);
            (Some([w.lo, w.hi]), Some(rs), ok)
        }
        None => (None, None, true),
    };
    let result = OracleIntervalResult {
        n: a1.n(),
        k: args.k,
        eigenvalues: range.eigenvalues.clone(),
        empty: range.interval.is_none(),
        interval,
        witness_residuals: residuals,
        tol: args.tol,
        accepted,
    };
    let text = render("oracle-interval", vec![digest], config, &result)?;
    Ok(Outcome { text, exit: if accepted { 0 } else { 2 } })
}

fn parse_diag(spec: &str) -> Result<Vec<f64>, CliError> {
    let values = spec
        .split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| CliError::from(Error::Domain(format!("bad --diag entry: {e}"))))?;
    if values.is_empty() {
        return Err(CliError::from(Error::Domain("--diag needs at least one entry".into())));
    }
    Ok(values)
}
