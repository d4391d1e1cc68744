//! The `entlock` command line: `verify` runs the property sweeps, `compute`
//! evaluates the correlation measures, `table` emits plot-ready CSV data.
//!
//! Exit codes: 0 = all checks passed, 1 = at least one violation,
//! 2 = usage or input-file error. Same flags + same seed produce
//! byte-identical output files; timing goes to stderr only.

use clap::{Args, Parser, Subcommand, ValueEnum};
use entlock_core::entropy::conditional_mutual_information;
use entlock_core::harness::{self, GroupKind, SweepReport};
use entlock_core::io::{
    density_to_json, opt_report_to_json, state_from_json, to_json_string, MatrixJson,
};
use entlock_core::states::flower_purification_general;
use entlock_core::linalg::haar_unitary;
use entlock_core::opt::{
    accessible_information, ef_flower, entanglement_of_purification, squashed_upper_bound,
    squashed_upper_bound_measured, OptConfig,
};
use entlock_core::states::{
    conjugate_pair_ensemble, flower_purification, fourier_unitary, omega_state, singlet,
};
use entlock_core::{Density, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "entlock",
    about = "Entropic correlation measures and locking verification sweeps",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification sweep and write its report(s).
    Verify(VerifyArgs),
    /// Compute a correlation measure or entropy.
    Compute(ComputeArgs),
    /// Emit plot-ready CSV tables.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupFlag {
    Zd,
    Z2l,
}

impl From<GroupFlag> for GroupKind {
    fn from(g: GroupFlag) -> GroupKind {
        match g {
            GroupFlag::Zd => GroupKind::Cyclic,
            GroupFlag::Z2l => GroupKind::BitStrings,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Random seed; falls back to ENTLOCK_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Cap the rayon worker count.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of: lemma1, lemma1-relent, omega, prop1, prop2, prop3,
    /// omega-corollary, coherent, maassen-uffink, all.
    pub property: String,
    /// Dimension of the swept system.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of extra unitaries for prop2.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Samples per sweep.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Abelian group behind the Fourier transform.
    #[arg(long, value_enum, default_value = "zd")]
    pub group: GroupFlag,
    /// Environment dimensions for prop1 (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2, 4])]
    pub env_dims: Vec<usize>,
    /// Restarts for optimizer-backed properties.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Quick profile: samples capped at 100, dimensions at 3, 4 restarts.
    #[arg(long)]
    pub quick: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// One of: esq-flower, ep, iacc, ef-flower, entropy, cmi.
    pub what: String,
    /// Dimension parameter for built-in families.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of extra unitaries for the generalised flower family.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Squashed-entanglement environment dimensions (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2, 4])]
    pub env_dim: Vec<usize>,
    /// Extension dimension for entanglement of purification.
    #[arg(long)]
    pub ext_dim: Option<usize>,
    /// POVM outcome count for accessible information.
    #[arg(long)]
    pub outcomes: Option<usize>,
    /// Optimizer restarts.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Serialized state file ({dims, re, im}).
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Built-in state family: omega, omega-ab, singlet, flower.
    #[arg(long)]
    pub family: Option<String>,
    /// A-side factor indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub aside: Option<Vec<usize>>,
    /// B-side factor indices (defaults to the complement of A and E).
    #[arg(long, value_delimiter = ',')]
    pub bside: Option<Vec<usize>>,
    /// Conditioning factor indices for cmi.
    #[arg(long, value_delimiter = ',')]
    pub eside: Option<Vec<usize>>,
    /// Use the Fourier-conjugate pair ensemble (iacc).
    #[arg(long)]
    pub conjugate_pair: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// One of: locking-gap, slack-histogram.
    pub which: String,
    /// Dimensions for locking-gap (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8])]
    pub dims: Vec<usize>,
    /// Dimension for slack-histogram.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Samples for slack-histogram.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Histogram bin count.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Sweep a Haar-random basis rotation instead of the Fourier transform
    /// (conjecture exploration; nothing is asserted).
    #[arg(long)]
    pub arbitrary_u: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Compute(args) => cmd_compute(args),
        Command::Table(args) => cmd_table(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn seed_of(common: &CommonArgs) -> u64 {
    common.seed.unwrap_or_else(|| {
        std::env::var("ENTLOCK_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn setup_threads(common: &CommonArgs) {
    if let Some(n) = common.threads {
        // a global pool can only be installed once; later calls are no-ops
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn emit(common: &CommonArgs, content: &str) -> Result<(), String> {
    match &common.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn opt_cfg(seed: u64, restarts: usize) -> OptConfig {
    OptConfig {
        restarts,
        max_iters: 400,
        ..OptConfig::with_seed(seed)
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(mut args: VerifyArgs) -> Result<i32, String> {
    setup_threads(&args.common);
    if args.quick {
        args.samples = args.samples.min(100);
        args.d = args.d.min(3);
        args.restarts = args.restarts.min(4);
    }
    let seed = seed_of(&args.common);
    let started = Instant::now();
    let reports = run_verify_property(&args, seed).map_err(|e| e.to_string())?;
    eprintln!(
        "verify {}: {} report(s) in {} ms",
        args.property,
        reports.len(),
        started.elapsed().as_millis()
    );
    let content = match args.common.format {
        OutputFormat::Json => to_json_string(&reports),
        OutputFormat::Csv => verify_csv(&reports),
    };
    emit(&args.common, &content)?;
    let ok = reports.iter().all(SweepReport::passed);
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn run_verify_property(
    args: &VerifyArgs,
    seed: u64,
) -> entlock_core::Result<Vec<SweepReport>> {
    let d = args.d;
    let samples = args.samples;
    let group: GroupKind = args.group.into();
    let cfg = opt_cfg(seed, args.restarts);
    match args.property.as_str() {
        "lemma1" => Ok(vec![harness::verify_lemma1(d, group, samples, d, d, seed)?]),
        "lemma1-relent" => Ok(vec![harness::verify_lemma1_relent_form(d, samples, seed)?]),
        "omega" => Ok(vec![harness::verify_omega_identities(d, samples, seed)?]),
        "prop1" => harness::verify_prop1(d, samples, &args.env_dims, seed),
        "prop2" => Ok(vec![harness::verify_prop2_formula(d, args.m, samples, seed)?]),
        "prop3" => Ok(vec![harness::verify_prop3(d, samples, seed)?]),
        "omega-corollary" => Ok(vec![harness::verify_omega_corollary(d, &cfg)?]),
        "coherent" => Ok(vec![harness::verify_coherent_info_bound(d, samples, seed)?]),
        "maassen-uffink" => Ok(vec![harness::verify_maassen_uffink(d, samples, seed)?]),
        "all" => verify_all(samples, args.restarts, seed),
        other => Err(entlock_core::Error::malformed(
            "property",
            format!(
                "unknown property `{other}`; expected one of lemma1, lemma1-relent, omega, \
                 prop1, prop2, prop3, omega-corollary, coherent, maassen-uffink, all"
            ),
        )),
    }
}

/// One invocation of every sweep at its default parameters.
fn verify_all(samples: usize, restarts: usize, seed: u64) -> entlock_core::Result<Vec<SweepReport>> {
    let cfg = opt_cfg(seed, restarts);
    let mut reports = Vec::new();
    reports.push(harness::verify_lemma1(2, GroupKind::Cyclic, samples, 2, 2, seed)?);
    reports.push(harness::verify_lemma1_relent_form(2, samples, seed)?);
    reports.push(harness::verify_omega_identities(2, samples, seed)?);
    reports.extend(harness::verify_prop1(2, samples, &[1, 2, 4], seed)?);
    reports.push(harness::verify_prop2_formula(2, 2, samples, seed)?);
    reports.push(harness::verify_prop3(2, samples, seed)?);
    reports.push(harness::verify_omega_corollary(2, &cfg)?);
    reports.push(harness::verify_coherent_info_bound(2, samples, seed)?);
    reports.push(harness::verify_maassen_uffink(2, samples, seed)?);
    Ok(reports)
}

fn verify_csv(reports: &[SweepReport]) -> String {
    let mut out = String::from("property,d,samples,violations,min_slack_bits,seed\n");
    for r in reports {
        let d = r
            .params
            .get("d")
            .and_then(serde_json::Value::as_u64)
            .map(|v| v.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.property, d, r.samples, r.violations, r.min_slack, r.seed
        );
    }
    out
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ValueOutput {
    value_bits: f64,
}

fn cmd_compute(args: ComputeArgs) -> Result<i32, String> {
    setup_threads(&args.common);
    let seed = seed_of(&args.common);
    let started = Instant::now();
    let content = match args.what.as_str() {
        "esq-flower" => compute_esq_flower(&args, seed)?,
        "ep" => compute_ep(&args, seed)?,
        "iacc" => compute_iacc(&args, seed)?,
        "ef-flower" => compute_ef_flower(&args, seed)?,
        "entropy" => compute_entropy(&args)?,
        "cmi" => compute_cmi(&args)?,
        other => {
            return Err(format!(
                "unknown computation `{other}`; expected one of esq-flower, ep, iacc, \
                 ef-flower, entropy, cmi"
            ))
        }
    };
    eprintln!("compute {}: {} ms", args.what, started.elapsed().as_millis());
    emit(&args.common, &content)?;
    Ok(EXIT_OK)
}

fn flower_unitaries(d: usize, m: usize, seed: u64) -> Vec<Matrix> {
    if m <= 1 {
        vec![Matrix::identity(d)]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX); // distinct from optimizer restart streams
        (0..m).map(|_| haar_unitary::<f64, _>(d, &mut rng)).collect()
    }
}

fn compute_esq_flower(args: &ComputeArgs, seed: u64) -> Result<String, String> {
    let d = args.d;
    let vs = flower_unitaries(d, args.m, seed);
    let psi = flower_purification_general(d, &vs).map_err(|e| e.to_string())?;
    let rho = psi.reduced_density(&[0, 1, 2, 3]).map_err(|e| e.to_string())?;
    let cfg = opt_cfg(seed, args.restarts);

    let mut per_env = Vec::new();
    let mut best = f64::INFINITY;
    for &env in &args.env_dim {
        let report =
            squashed_upper_bound(&rho, &[0, 1], &[2, 3], env, &cfg).map_err(|e| e.to_string())?;
        if report.value.0 < best {
            best = report.value.0;
        }
        per_env.push(json!({
            "env_dim": env,
            "report": opt_report_to_json(&report),
        }));
    }
    let outcomes = args.outcomes.unwrap_or(d * d);
    let measured = squashed_upper_bound_measured(&rho, &[0, 1], &[2, 3], outcomes, &cfg)
        .map_err(|e| e.to_string())?;

    Ok(to_json_string(&json!({
        "value_bits": best,
        "measured_extension_bits": measured.value.0,
        "per_env_dim": per_env,
        "d": d,
        "m": args.m,
        "seed": seed,
    })))
}

fn load_or_build_state(args: &ComputeArgs) -> Result<Density, String> {
    if let Some(path) = &args.state {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let json: MatrixJson =
            serde_json::from_str(&text).map_err(|e| format!("malformed state file: {e}"))?;
        return Ok(state_from_json(&json).map_err(|e| e.to_string())?.into_density());
    }
    match args.family.as_deref() {
        Some("omega") => Ok(omega_state::<f64>(args.d)),
        Some("omega-ab") => omega_state::<f64>(args.d)
            .partial_trace(&[1, 2])
            .map_err(|e| e.to_string()),
        Some("singlet") => Ok(singlet::<f64>()),
        Some("flower") => flower_purification::<f64>(args.d)
            .reduced_density(&[0, 1, 2, 3])
            .map_err(|e| e.to_string()),
        Some(other) => Err(format!(
            "unknown family `{other}`; expected omega, omega-ab, singlet or flower"
        )),
        None => Err("need either --state FILE or --family NAME".to_string()),
    }
}

fn compute_ep(args: &ComputeArgs, seed: u64) -> Result<String, String> {
    let rho = load_or_build_state(args)?;
    let aside = args
        .aside
        .clone()
        .ok_or_else(|| "--aside I,J,... is required for ep".to_string())?;
    let bside = args
        .bside
        .clone()
        .unwrap_or_else(|| (0..rho.dims().len()).filter(|i| !aside.contains(i)).collect());
    let ext_dim = args.ext_dim.unwrap_or(2);
    let mut cfg = opt_cfg(seed, args.restarts);
    cfg.d_env = Some(2);
    let report = entanglement_of_purification(&rho, &aside, &bside, ext_dim, &cfg)
        .map_err(|e| e.to_string())?;
    Ok(to_json_string(&opt_report_to_json(&report)))
}

fn compute_iacc(args: &ComputeArgs, seed: u64) -> Result<String, String> {
    if !args.conjugate_pair {
        return Err("iacc needs --conjugate-pair (the only built-in ensemble)".to_string());
    }
    let d = args.d;
    let ens = conjugate_pair_ensemble(d, &fourier_unitary::<f64>(d)).map_err(|e| e.to_string())?;
    let outcomes = args.outcomes.unwrap_or(d * d);
    let cfg = opt_cfg(seed, args.restarts);
    let report = accessible_information(&ens, outcomes, &cfg).map_err(|e| e.to_string())?;
    Ok(to_json_string(&opt_report_to_json(&report)))
}

fn compute_ef_flower(args: &ComputeArgs, seed: u64) -> Result<String, String> {
    let vs = flower_unitaries(args.d, args.m, seed);
    let cfg = opt_cfg(seed, args.restarts);
    let value = ef_flower(args.d, &vs, &cfg).map_err(|e| e.to_string())?;
    Ok(to_json_string(&ValueOutput { value_bits: value.0 }))
}

fn compute_entropy(args: &ComputeArgs) -> Result<String, String> {
    let rho = load_or_build_state(args)?;
    let s = entlock_core::entropy::entropy(&rho).map_err(|e| e.to_string())?;
    Ok(to_json_string(&ValueOutput { value_bits: s.0 }))
}

fn compute_cmi(args: &ComputeArgs) -> Result<String, String> {
    let rho = load_or_build_state(args)?;
    let aside = args
        .aside
        .clone()
        .ok_or_else(|| "--aside I,J,... is required for cmi".to_string())?;
    let eside = args.eside.clone().unwrap_or_default();
    let bside = args.bside.clone().unwrap_or_else(|| {
        (0..rho.dims().len())
            .filter(|i| !aside.contains(i) && !eside.contains(i))
            .collect()
    });
    let v = conditional_mutual_information(&rho, &aside, &bside, &eside)
        .map_err(|e| e.to_string())?;
    Ok(to_json_string(&ValueOutput { value_bits: v.0 }))
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

fn cmd_table(args: TableArgs) -> Result<i32, String> {
    setup_threads(&args.common);
    let seed = seed_of(&args.common);
    let content = match args.which.as_str() {
        "locking-gap" => table_locking_gap(&args.dims)?,
        "slack-histogram" => table_slack_histogram(args.d, args.samples, args.bins, args.arbitrary_u, seed)?,
        other => {
            return Err(format!(
                "unknown table `{other}`; expected locking-gap or slack-histogram"
            ))
        }
    };
    emit(&args.common, &content)?;
    Ok(EXIT_OK)
}

/// (d, E_sq of the full flower state, E_sq bound after the qubit registers
/// A' are lost, gap). Full value: ½ I(AA';BB') at the trivial extension;
/// after-loss: ½ CMI of the classical-flag extension of ρ^{ABB'}.
fn table_locking_gap(dims: &[usize]) -> Result<String, String> {
    let mut out = String::from("d,e_sq_full_bits,e_sq_after_qubit_loss_bits,gap_bits\n");
    for &d in dims {
        if !(2..=8).contains(&d) {
            return Err(format!("locking-gap supports 2 ≤ d ≤ 8, got {d}"));
        }
        let psi = flower_purification::<f64>(d);
        let s = |keep: &[usize]| {
            entlock_core::entropy::subsystem_entropy(psi.vec(), psi.dims(), keep)
                .map(|b| b.0)
                .map_err(|e| e.to_string())
        };
        let full = 0.5 * (s(&[0, 1])? + s(&[2, 3])? - s(&[0, 1, 2, 3])?);
        let after = 0.5 * harness::flower_flag_extension_cmi(d).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{},{},{},{}", d, full, after, full - after);
    }
    Ok(out)
}

fn table_slack_histogram(
    d: usize,
    samples: usize,
    bins: usize,
    arbitrary_u: bool,
    seed: u64,
) -> Result<String, String> {
    let mut out = String::from("bin_lo_bits,bin_hi_bits,count\n");
    if samples == 0 {
        return Ok(out);
    }
    if bins == 0 {
        return Err("need at least one bin".to_string());
    }
    let slacks =
        harness::lemma1_slack_samples(d, samples, seed, arbitrary_u).map_err(|e| e.to_string())?;
    let lo = slacks.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = slacks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1e-12 };
    let mut counts = vec![0usize; bins];
    for &s in &slacks {
        let mut idx = ((s - lo) / width) as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        counts[idx] += 1;
    }
    for (i, &count) in counts.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{}",
            lo + i as f64 * width,
            lo + (i + 1) as f64 * width,
            count
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// helpers for tests
// ---------------------------------------------------------------------------

/// Parse a full command line (including the binary name) and run it.
pub fn run_from<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli),
        Err(e) => {
            // clap reserves exit code 2 for usage errors; --help/--version
            // exit 0 through the same path
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

/// Serialize the omega state for README examples and tests.
pub fn write_omega_state_file(d: usize, path: &std::path::Path) -> Result<(), String> {
    let omega = omega_state::<f64>(d);
    let json = density_to_json(&omega);
    std::fs::write(path, to_json_string(&json)).map_err(|e| e.to_string())
}
