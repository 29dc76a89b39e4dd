//! Command-line driver: solve, generate, reduce, and validate.
//!
//! One JSON object per invocation on stdout, diagnostics on stderr.
//! Exit codes: 0 yes/solved, 1 no, 2 usage or precondition, 3 internal
//! invariant failure.

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use olse::approx::{approx_olise, approx_olse};
use olse::exact::{solve_dp_no_edges, solve_oracle, ExactError};
use olse::fpt_split::{solve_random_sep_simple, solve_split_fpt, FptError, TrialBudget};
use olse::fpt_vc::solve_vc_fpt;
use olse::instances::{
    encode_lapcs_as_olise, generate_random, parse_instance, reduce_is_to_olse,
    reduce_mcis_to_olse, serialize_instance, GenParams, LapcsPair, McisInstance,
};
use olse::model::{
    check_embedding, degree_stats, embedding_is_valid, validate_instance, Embedding,
    Instance, Solution, Variant,
};
use olse::unordered::{solve_lise_matching, solve_lse_rules, UnorderedError};

#[derive(Parser)]
#[command(name = "olse", about = "Ordered list subgraph embedding solver suite")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a solver on an instance file.
    Solve(SolveArgs),
    /// Emit a seeded random instance.
    Generate(GenArgs),
    /// Build an instance from a source-problem file.
    Reduce(ReduceArgs),
    /// Check instance invariants and optionally a solution certificate.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CliVariant {
    Olse,
    Olise,
    Lse,
    Lise,
}

impl From<CliVariant> for Variant {
    fn from(v: CliVariant) -> Variant {
        match v {
            CliVariant::Olse => Variant::Olse,
            CliVariant::Olise => Variant::Olise,
            CliVariant::Lse => Variant::Lse,
            CliVariant::Lise => Variant::Lise,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    Oracle,
    Dp,
    Approx,
    LseRules,
    LiseMatching,
    SplitFpt,
    RandomSep,
    VcFpt,
}

#[derive(Parser)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    variant: CliVariant,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Target size; turns optimization solvers into deciders.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// One-sided error bound for randomized solvers.
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long)]
    max_trials: Option<usize>,
    /// Color-enumeration cutoff below which randomized solvers run
    /// exhaustively (deterministic answers).
    #[arg(long, default_value_t = 20)]
    exhaustive_threshold: usize,
}

#[derive(Parser)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    n_g: usize,
    #[arg(long, default_value_t = 8)]
    n_h: usize,
    #[arg(long, default_value_t = 2)]
    max_delta_g: usize,
    #[arg(long, default_value_t = 2)]
    max_delta_h: usize,
    #[arg(long, default_value_t = 2)]
    max_delta_l: usize,
    #[arg(long, default_value_t = 0.3)]
    density_g: f64,
    #[arg(long, default_value_t = 0.3)]
    density_h: f64,
    #[arg(long, default_value_t = 0.5)]
    density_l: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    Mcis,
    Is,
    Lapcs,
}

#[derive(Parser)]
struct ReduceArgs {
    #[arg(value_enum)]
    kind: SourceKind,
    #[arg(long)]
    input: PathBuf,
}

#[derive(Parser)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "olse")]
    variant: CliVariant,
}

#[derive(Serialize)]
struct RunReport {
    n_g: usize,
    n_h: usize,
    delta_g: usize,
    delta_h: usize,
    delta_l: usize,
    algorithm: String,
    variant: String,
    k: Option<usize>,
    decision: Option<bool>,
    size: usize,
    pairs: Vec<(usize, usize)>,
    valid: bool,
    wall_ms: f64,
    trials: Option<usize>,
    guesses: Option<usize>,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct ValidateReport {
    violations: Vec<String>,
    solution_size: Option<usize>,
    solution_valid: Option<bool>,
    violated_condition: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    size: usize,
    pairs: Vec<(usize, usize)>,
    // Accepted but not consulted: the certificate is re-checked here.
    #[serde(default)]
    #[allow(dead_code)]
    algorithm: Option<String>,
    #[serde(default)]
    #[allow(dead_code)]
    valid: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IsSource {
    n: usize,
    edges: Vec<(usize, usize)>,
    k: usize,
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve(args) => cmd_solve(&args),
        Cmd::Generate(args) => cmd_generate(&args),
        Cmd::Reduce(args) => cmd_reduce(&args),
        Cmd::Validate(args) => cmd_validate(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&bytes).map_err(|e| usage(e.to_string()))
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, CliError> {
    let inst = read_instance(&args.input)?;
    let variant: Variant = args.variant.into();
    let stats = degree_stats(&inst);
    let budget = TrialBudget {
        seed: args.seed,
        delta: args.delta,
        max_trials: args.max_trials,
        exhaustive_threshold: args.exhaustive_threshold,
    };
    let k = args.k.or(inst.k);
    let started = Instant::now();

    let mut trials = None;
    let mut guesses = None;
    let mut seed_used = None;
    // decision: Some for decision procedures; derived from size for the
    // optimization solvers when a target k is available.
    let mut decision = None;

    let solution: Option<Solution> = match args.algo {
        Algo::Oracle => Some(solve_oracle(&inst, variant).map_err(exact_usage)?),
        Algo::Dp => {
            match variant {
                Variant::Olse => {
                    if stats.delta_g != 0 {
                        return Err(usage(format!(
                            "dp requires an edgeless G for olse (Δ_G = {})",
                            stats.delta_g
                        )));
                    }
                }
                Variant::Olise => {
                    if stats.delta_g != 0 || stats.delta_h != 0 {
                        return Err(usage(format!(
                            "dp requires edgeless G and H for olise (Δ_G = {}, Δ_H = {})",
                            stats.delta_g, stats.delta_h
                        )));
                    }
                }
                _ => return Err(usage("dp supports the ordered variants only")),
            }
            let (sol, _) = solve_dp_no_edges(&inst).map_err(exact_usage)?;
            Some(sol)
        }
        Algo::Approx => match variant {
            Variant::Olse => Some(approx_olse(&inst).map_err(exact_usage)?),
            Variant::Olise => Some(approx_olise(&inst).map_err(exact_usage)?),
            _ => return Err(usage("approx supports olse and olise only")),
        },
        Algo::LseRules => match variant {
            Variant::Lse => Some(solve_lse_rules(&inst).map_err(unordered_err)?),
            _ => return Err(usage("lse-rules solves the lse variant only")),
        },
        Algo::LiseMatching => match variant {
            Variant::Lise => Some(solve_lise_matching(&inst).map_err(unordered_err)?),
            _ => return Err(usage("lise-matching solves the lise variant only")),
        },
        Algo::SplitFpt => {
            if !matches!(variant, Variant::Olse) {
                return Err(usage("split-fpt solves the olse variant only"));
            }
            let k = k.ok_or_else(|| usage("split-fpt needs --k (or a k in the instance)"))?;
            let out = solve_split_fpt(&inst, k, &budget).map_err(fpt_err)?;
            trials = Some(out.trials);
            seed_used = Some(args.seed);
            decision = Some(out.accepted);
            out.witness
        }
        Algo::RandomSep => {
            if !matches!(variant, Variant::Olse | Variant::Olise) {
                return Err(usage("random-sep solves olse/olise (with Δ_H = 0) only"));
            }
            let k = k.ok_or_else(|| usage("random-sep needs --k (or a k in the instance)"))?;
            let out = solve_random_sep_simple(&inst, k, &budget).map_err(fpt_err)?;
            trials = Some(out.trials);
            seed_used = Some(args.seed);
            decision = Some(out.accepted);
            out.witness
        }
        Algo::VcFpt => {
            if !matches!(variant, Variant::Olse) {
                return Err(usage("vc-fpt solves the olse variant only"));
            }
            let k = k.ok_or_else(|| usage("vc-fpt needs --k (or a k in the instance)"))?;
            let out = solve_vc_fpt(&inst, k);
            guesses = Some(out.guesses);
            decision = Some(out.accepted);
            out.witness
        }
    };

    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let (size, pairs) = match &solution {
        Some(s) => (s.size, s.embedding.pairs().to_vec()),
        None => (0, Vec::new()),
    };
    if decision.is_none() {
        if let Some(k) = k {
            decision = Some(size >= k);
        }
    }
    // Re-validate before emitting: a bad witness is a solver bug.
    if let Some(s) = &solution {
        if !embedding_is_valid(&inst, &s.embedding, variant) {
            return Err(CliError::Internal(format!(
                "witness from {} failed re-validation",
                s.algorithm
            )));
        }
    }
    let report = RunReport {
        n_g: inst.n_g,
        n_h: inst.n_h,
        delta_g: stats.delta_g,
        delta_h: stats.delta_h,
        delta_l: stats.delta_l,
        algorithm: solution
            .as_ref()
            .map(|s| s.algorithm.clone())
            .unwrap_or_else(|| format!("{:?}", args.algo).to_lowercase()),
        variant: variant.to_string(),
        k,
        decision,
        size,
        pairs,
        valid: true,
        wall_ms,
        trials,
        guesses,
        seed: seed_used,
    };
    emit(&report)?;
    Ok(if decision == Some(false) { 1 } else { 0 })
}

fn cmd_generate(args: &GenArgs) -> Result<u8, CliError> {
    let params = GenParams {
        n_g: args.n_g,
        n_h: args.n_h,
        max_delta_g: args.max_delta_g,
        max_delta_h: args.max_delta_h,
        max_delta_l: args.max_delta_l,
        density_g: args.density_g,
        density_h: args.density_h,
        density_l: args.density_l,
    };
    let inst = generate_random(&params, args.seed).map_err(|e| usage(e.to_string()))?;
    write_stdout(&serialize_instance(&inst))?;
    Ok(0)
}

fn cmd_reduce(args: &ReduceArgs) -> Result<u8, CliError> {
    let bytes = std::fs::read(&args.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.input.display())))?;
    let inst = match args.kind {
        SourceKind::Mcis => {
            let m: McisInstance =
                serde_json::from_slice(&bytes).map_err(|e| usage(e.to_string()))?;
            m.validate().map_err(|e| usage(e.to_string()))?;
            let (inst, _target) = reduce_mcis_to_olse(&m);
            inst
        }
        SourceKind::Is => {
            let s: IsSource =
                serde_json::from_slice(&bytes).map_err(|e| usage(e.to_string()))?;
            reduce_is_to_olse(s.n, &s.edges, s.k)
        }
        SourceKind::Lapcs => {
            let p: LapcsPair =
                serde_json::from_slice(&bytes).map_err(|e| usage(e.to_string()))?;
            encode_lapcs_as_olise(&p.s1, &p.s2).map_err(|e| usage(e.to_string()))?
        }
    };
    write_stdout(&serialize_instance(&inst))?;
    Ok(0)
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8, CliError> {
    let bytes = std::fs::read(&args.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.input.display())))?;
    let inst: Instance = serde_json::from_slice(&bytes).map_err(|e| usage(e.to_string()))?;
    let violations: Vec<String> =
        validate_instance(&inst).iter().map(|v| v.to_string()).collect();

    let mut report = ValidateReport {
        violations: violations.clone(),
        solution_size: None,
        solution_valid: None,
        violated_condition: None,
    };
    let mut ok = violations.is_empty();

    if let Some(path) = &args.solution {
        let bytes = std::fs::read(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let sol: SolutionFile =
            serde_json::from_slice(&bytes).map_err(|e| usage(e.to_string()))?;
        if sol.pairs.len() != sol.size {
            return Err(usage(format!(
                "solution size {} does not match {} pairs",
                sol.size,
                sol.pairs.len()
            )));
        }
        let emb = Embedding::new(sol.pairs);
        report.solution_size = Some(sol.size);
        match check_embedding(&inst, &emb, args.variant.into()) {
            Ok(None) => report.solution_valid = Some(true),
            Ok(Some(cond)) => {
                report.solution_valid = Some(false);
                report.violated_condition =
                    Some(serde_json::to_value(cond).unwrap().as_str().unwrap().to_string());
                ok = false;
            }
            Err(e) => return Err(usage(e.to_string())),
        }
    }
    emit(&report)?;
    Ok(if ok { 0 } else { 1 })
}

fn emit<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = serde_json::to_vec(value)
        .map_err(|e| CliError::Internal(format!("report serialization failed: {e}")))?;
    out.push(b'\n');
    write_stdout(&out)
}

fn write_stdout(bytes: &[u8]) -> Result<(), CliError> {
    use std::io::Write;
    std::io::stdout()
        .write_all(bytes)
        .map_err(|e| CliError::Internal(format!("stdout write failed: {e}")))
}

fn exact_usage(e: ExactError) -> CliError {
    usage(e.to_string())
}

fn unordered_err(e: UnorderedError) -> CliError {
    match e {
        UnorderedError::Precondition(_) => usage(e.to_string()),
        UnorderedError::Internal(_) => CliError::Internal(e.to_string()),
    }
}

fn fpt_err(e: FptError) -> CliError {
    match e {
        FptError::Precondition(_) => usage(e.to_string()),
        FptError::Internal(_) => CliError::Internal(e.to_string()),
    }
}
