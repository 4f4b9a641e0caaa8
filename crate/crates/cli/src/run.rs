//! Subcommand implementations. Every command computes through the core
//! crate inside an explicitly sized thread pool, writes one artifact, and
//! prints a one-line summary; invariant breaches surface as exit code 1
//! after the artifact is written.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use roughsum_core::bv::{self, BilinearWeights, BvParameters, Weight};
use roughsum_core::decomposition::{self, ReportOptions, TypeIiConfig};
use roughsum_core::func::TestFunction;
use roughsum_core::identities;
use roughsum_core::sieve::SieveTable;
use roughsum_core::sum::KahanComplex;
use roughsum_core::tolerance;

use crate::error::{CliError, CliResult};
use crate::output::{resolve_out_path, sig12, Artifact, ConfigEcho, Format};
use crate::spec::parse_function_spec;

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scan the Λ identity residual over 1 ≤ n ≤ x.
    Identity(IdentityArgs),
    /// Scan Ramaré's identity over squarefree n in (√x, x].
    Ramare(RamareArgs),
    /// Full decomposition report for one (F, x, y).
    Decompose(DecomposeArgs),
    /// Grid-restricted Type II maximum for one (F, x, y).
    Typeii(TypeiiArgs),
    /// Worst-residue discrepancy profile with the A − B + E split.
    Bv(BvArgs),
    /// Both sides of the bilinear-weight discrepancy bound.
    Theorem2(Theorem2Args),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Sieve limit (defaults to x).
    #[arg(long)]
    pub limit: Option<u64>,

    /// Output path; `-` writes the artifact to stdout. Defaults to
    /// `<command>.<format>` in $ROUGHSUM_OUT_DIR or the working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Artifact format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads; 0 uses the library default pool. Results are
    /// bit-identical for any value.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    /// Scan bound n_max.
    #[arg(long)]
    pub x: u64,

    /// Max residual allowed over the scan.
    #[arg(long, default_value_t = tolerance::IDENTITY_SCAN_ABS)]
    pub tol_identity: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct RamareArgs {
    /// Range endpoint: scans squarefree n in (√x, x].
    #[arg(long)]
    pub x: u64,

    /// Max residual allowed over the scan.
    #[arg(long, default_value_t = tolerance::RAMARE_ABS)]
    pub tol_ramare: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Sum bound x.
    #[arg(long)]
    pub x: u64,

    /// Roughness threshold y (1 ≤ y < x).
    #[arg(long)]
    pub y: u64,

    #[arg(
        long,
        help = "Weight: const[=c], expo=<alpha>, char=<q>,<index>, table=<path>"
    )]
    pub function: String,

    /// Relative tolerance for the three-term identity residual.
    #[arg(long, default_value_t = tolerance::DECOMP_IDENTITY_REL)]
    pub tol_identity: f64,

    /// Tolerance for the Möbius-expansion equality check.
    #[arg(long, default_value_t = tolerance::MOEBIUS_EQ_ABS)]
    pub tol_moebius: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct TypeiiArgs {
    /// Sum bound x.
    #[arg(long)]
    pub x: u64,

    /// Roughness threshold y (1 ≤ y < x).
    #[arg(long)]
    pub y: u64,

    #[arg(
        long,
        help = "Weight: const[=c], expo=<alpha>, char=<q>,<index>, table=<path>"
    )]
    pub function: String,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum WeightArg {
    Psi,
    Pi,
}

impl WeightArg {
    fn to_core(self) -> Weight {
        match self {
            WeightArg::Psi => Weight::Psi,
            WeightArg::Pi => Weight::Pi,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            WeightArg::Psi => "psi",
            WeightArg::Pi => "pi",
        }
    }
}

#[derive(Args, Debug)]
pub struct BvArgs {
    /// Scan bound x (≥ 16).
    #[arg(long)]
    pub x: u64,

    /// Exponent B in Q = ⌊√x/(log x)^B⌋.
    #[arg(long, default_value_t = 1.0)]
    pub b_exponent: f64,

    /// Override the modulus bound Q.
    #[arg(long)]
    pub q_max: Option<u64>,

    /// Override the roughness threshold y (default round(x^{1/log log x})).
    #[arg(long)]
    pub y: Option<u64>,

    /// Which counting function the discrepancies weight.
    #[arg(long, value_enum, default_value_t = WeightArg::Psi)]
    pub weight: WeightArg,

    /// Per-progression tolerance for |ψ(x;q,a) − (A − B + E)|.
    #[arg(long, default_value_t = tolerance::ABE_SPLIT_ABS)]
    pub tol_abe: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct Theorem2Args {
    /// Evaluation bound x.
    #[arg(long)]
    pub x: u64,

    /// Exponent B in the default Q = ⌊√x/(log x)^B⌋.
    #[arg(long, default_value_t = 1.0)]
    pub b_exponent: f64,

    /// Override the modulus bound Q.
    #[arg(long)]
    pub q_max: Option<u64>,

    /// Override the weight threshold y (default round(x^{1/log log x})).
    #[arg(long)]
    pub y: Option<u64>,

    /// Cap on pairs × moduli work.
    #[arg(long)]
    pub budget: Option<u64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Identity(a) => run_identity(a),
        Command::Ramare(a) => run_ramare(a),
        Command::Decompose(a) => run_decompose(a),
        Command::Typeii(a) => run_typeii(a),
        Command::Bv(a) => run_bv(a),
        Command::Theorem2(a) => run_theorem2(a),
    }
}

fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> CliResult<R> + Send) -> CliResult<R> {
    if threads == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build a {threads}-thread pool: {e}")))?
            .install(f)
    }
}

fn resolve_limit(x: u64, flag: Option<u64>) -> CliResult<u64> {
    let limit = flag.unwrap_or(x).max(2);
    if limit < x {
        return Err(CliError::Usage(format!(
            "--limit {limit} is smaller than --x {x}"
        )));
    }
    Ok(limit)
}

fn build_table(limit: u64) -> CliResult<SieveTable<f64>> {
    Ok(SieveTable::build(limit)?)
}

fn run_identity(args: IdentityArgs) -> CliResult<()> {
    let limit = resolve_limit(args.x, args.common.limit)?;
    let report = with_pool(args.common.threads, || {
        let table = build_table(limit)?;
        Ok(identities::scan_trivial_identity(&table, args.x)?)
    })?;

    let mut config = ConfigEcho::new(
        "identity",
        args.x,
        limit,
        args.common.threads,
        args.common.format,
    );
    config
        .tolerances
        .insert("identity".into(), args.tol_identity);
    let artifact = Artifact {
        config,
        header: vec!["n_max", "count_checked", "max_abs_residual", "argmax_n"],
        rows: vec![vec![
            report.n_max.to_string(),
            report.count_checked.to_string(),
            sig12(report.max_abs_residual),
            report.argmax_n.to_string(),
        ]],
    };
    let dest = resolve_out_path(args.common.out.as_deref(), "identity", args.common.format);
    let written = artifact.write(dest.as_deref(), args.common.format)?;
    println!(
        "identity x={} max_abs_residual={} argmax_n={} -> {written}",
        args.x,
        sig12(report.max_abs_residual),
        report.argmax_n
    );
    if report.max_abs_residual > args.tol_identity {
        return Err(CliError::Invariant(format!(
            "identity residual {:e} exceeds {:e} at n = {}",
            report.max_abs_residual, args.tol_identity, report.argmax_n
        )));
    }
    Ok(())
}

fn run_ramare(args: RamareArgs) -> CliResult<()> {
    let limit = resolve_limit(args.x, args.common.limit)?;
    let report = with_pool(args.common.threads, || {
        let table = build_table(limit)?;
        Ok(identities::scan_ramare(&table, args.x)?)
    })?;

    let mut config = ConfigEcho::new(
        "ramare",
        args.x,
        limit,
        args.common.threads,
        args.common.format,
    );
    config.tolerances.insert("ramare".into(), args.tol_ramare);
    let artifact = Artifact {
        config,
        header: vec!["x", "count_checked", "max_abs_residual", "argmax_n"],
        rows: vec![vec![
            args.x.to_string(),
            report.count_checked.to_string(),
            sig12(report.max_abs_residual),
            report.argmax_n.to_string(),
        ]],
    };
    let dest = resolve_out_path(args.common.out.as_deref(), "ramare", args.common.format);
    let written = artifact.write(dest.as_deref(), args.common.format)?;
    println!(
        "ramare x={} count={} max_abs_residual={} -> {written}",
        args.x,
        report.count_checked,
        sig12(report.max_abs_residual)
    );
    if report.max_abs_residual > args.tol_ramare {
        return Err(CliError::Invariant(format!(
            "ramare residual {:e} exceeds {:e} at n = {}",
            report.max_abs_residual, args.tol_ramare, report.argmax_n
        )));
    }
    Ok(())
}

/// Recompute the rough prefix sum at `t` directly; the Möbius expansion
/// must match it.
fn moebius_equality_gap(
    table: &SieveTable<f64>,
    f: &TestFunction<f64>,
    t: u64,
    y: u64,
) -> CliResult<f64> {
    let (expanded, _) = decomposition::type_i_moebius_expansion(table, f, t, y)?;
    let mut direct = KahanComplex::new();
    for n in 1..=t {
        if table.is_rough(n, y)? {
            direct.add(f.eval(n));
        }
    }
    Ok((expanded - direct.value()).norm())
}

fn run_decompose(args: DecomposeArgs) -> CliResult<()> {
    let limit = resolve_limit(args.x, args.common.limit)?;
    let f = parse_function_spec(&args.function)?;
    let opts = ReportOptions {
        identity_rel_tol: args.tol_identity,
    };
    let (report, moebius_gap) = with_pool(args.common.threads, || {
        let table = build_table(limit)?;
        let report = decomposition::proposition_report_with(&table, &f, args.x, args.y, &opts)?;
        let gap = moebius_equality_gap(&table, &f, report.s1_argmax_t, args.y)?;
        Ok((report, gap))
    })?;

    let mut config = ConfigEcho::new(
        "decompose",
        args.x,
        limit,
        args.common.threads,
        args.common.format,
    );
    config.y = Some(args.y);
    config.function = Some(args.function.clone());
    config
        .tolerances
        .insert("identity".into(), args.tol_identity);
    config.tolerances.insert("moebius".into(), args.tol_moebius);
    let artifact = Artifact {
        config,
        header: vec![
            "x",
            "y",
            "function",
            "true_re",
            "true_im",
            "log_re",
            "log_im",
            "bilinear_re",
            "bilinear_im",
            "identity_residual",
            "s1",
            "s1_t",
            "s1_divisor_form",
            "s2",
            "s2_L",
            "s2_m",
            "bound",
            "ratio",
        ],
        rows: vec![vec![
            report.x.to_string(),
            report.y.to_string(),
            args.function.clone(),
            sig12(report.true_sum.re),
            sig12(report.true_sum.im),
            sig12(report.log_term.re),
            sig12(report.log_term.im),
            sig12(report.bilinear_term.re),
            sig12(report.bilinear_term.im),
            sig12(report.identity_residual),
            sig12(report.s1_value),
            report.s1_argmax_t.to_string(),
            sig12(report.s1_divisor_form),
            sig12(report.s2_value),
            report.s2_arg_l.to_string(),
            report.s2_arg_m.to_string(),
            sig12(report.bound_value),
            sig12(report.ratio),
        ]],
    };
    let dest = resolve_out_path(args.common.out.as_deref(), "decompose", args.common.format);
    let written = artifact.write(dest.as_deref(), args.common.format)?;
    println!(
        "decompose x={} y={} f={} identity_residual={} s1={} s2={} -> {written}",
        report.x,
        report.y,
        args.function,
        sig12(report.identity_residual),
        sig12(report.s1_value),
        sig12(report.s2_value)
    );
    if moebius_gap > args.tol_moebius {
        return Err(CliError::Invariant(format!(
            "Möbius expansion differs from the rough prefix sum by {moebius_gap:e} at t = {}",
            report.s1_argmax_t
        )));
    }
    Ok(())
}

fn run_typeii(args: TypeiiArgs) -> CliResult<()> {
    let limit = resolve_limit(args.x, args.common.limit)?;
    let f = parse_function_spec(&args.function)?;
    let result = with_pool(args.common.threads, || {
        let table = build_table(limit)?;
        let cfg = TypeIiConfig::new(args.x, args.y);
        Ok(decomposition::type_ii(&table, &f, args.x, args.y, &cfg)?)
    })?;

    let mut config = ConfigEcho::new(
        "typeii",
        args.x,
        limit,
        args.common.threads,
        args.common.format,
    );
    config.y = Some(args.y);
    config.function = Some(args.function.clone());
    let artifact = Artifact {
        config,
        header: vec!["x", "y", "function", "s2", "s2_L", "s2_m", "vacuous"],
        rows: vec![vec![
            args.x.to_string(),
            args.y.to_string(),
            args.function.clone(),
            sig12(result.value),
            result.arg_l.to_string(),
            result.arg_m.to_string(),
            result.vacuous.to_string(),
        ]],
    };
    let dest = resolve_out_path(args.common.out.as_deref(), "typeii", args.common.format);
    let written = artifact.write(dest.as_deref(), args.common.format)?;
    println!(
        "typeii x={} y={} f={} s2={} at (L={}, m={}){} -> {written}",
        args.x,
        args.y,
        args.function,
        sig12(result.value),
        result.arg_l,
        result.arg_m,
        if result.vacuous { " [vacuous]" } else { "" }
    );
    Ok(())
}

fn run_bv(args: BvArgs) -> CliResult<()> {
    let limit = resolve_limit(args.x, args.common.limit)?;
    let params = BvParameters::with_overrides(
        args.x,
        args.b_exponent,
        args.q_max,
        args.y,
        args.weight.to_core(),
    )?;
    let (records, stat, worst_gap) = with_pool(args.common.threads, || {
        let table = build_table(limit)?;
        let records = bv::discrepancy_profile(&table, &params)?;
        let stat = bv::bv_statistic_from_records(&records, &params)?;
        // The split must close at every recorded residue.
        let mut worst = 0.0f64;
        for r in &records {
            let psi = bv::psi_progression(&table, params.x, r.q, r.a_worst)?;
            worst = worst.max((psi - (r.a_term - r.b_term + r.e_term)).abs());
        }
        Ok((records, stat, worst))
    })?;

    let normalized = stat
        .normalized_psi
        .or(stat.normalized_pi)
        .expect("one normalization is always populated");
    let mut config = ConfigEcho::new("bv", args.x, limit, args.common.threads, args.common.format);
    config.y = Some(params.y);
    config.q_max = Some(params.q_max);
    config.b_exponent = Some(args.b_exponent);
    config.weight = Some(args.weight.as_str().to_string());
    config.tolerances.insert("abe".into(), args.tol_abe);
    let mut rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.q.to_string(),
                r.a_worst.to_string(),
                sig12(r.discrepancy),
                sig12(r.a_term),
                sig12(r.b_term),
                sig12(r.e_term),
                String::new(),
                String::new(),
            ]
        })
        .collect();
    rows.push(vec![
        "summary".to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        sig12(stat.lhs),
        sig12(normalized),
    ]);
    let artifact = Artifact {
        config,
        header: vec![
            "q",
            "a_worst",
            "discrepancy",
            "a_term",
            "b_term",
            "e_term",
            "lhs",
            "normalized",
        ],
        rows,
    };
    let dest = resolve_out_path(args.common.out.as_deref(), "bv", args.common.format);
    let written = artifact.write(dest.as_deref(), args.common.format)?;
    println!(
        "bv x={} Q={} y={} weight={} lhs={} normalized={} -> {written}",
        params.x,
        params.q_max,
        params.y,
        args.weight.as_str(),
        sig12(stat.lhs),
        sig12(normalized)
    );
    if worst_gap > args.tol_abe {
        return Err(CliError::Invariant(format!(
            "A − B + E split misses ψ(x;q,a) by {worst_gap:e}, allowed {:e}",
            args.tol_abe
        )));
    }
    Ok(())
}

fn run_theorem2(args: Theorem2Args) -> CliResult<()> {
    let limit = resolve_limit(args.x, args.common.limit)?;
    if args.b_exponent <= 0.0 {
        return Err(CliError::Usage("--b-exponent must be positive".into()));
    }
    let y = args.y.unwrap_or_else(|| bv::default_y(args.x));
    let q_max = args
        .q_max
        .unwrap_or_else(|| bv::default_q(args.x, args.b_exponent));
    let (check, a_const, b_const) = with_pool(args.common.threads, || {
        let table = build_table(limit)?;
        let weights = BilinearWeights::rough_lambda_weights(&table, args.x, y)?;
        let check = bv::bilinear_discrepancy(&table, &weights, args.x, q_max, args.budget)?;
        Ok((check, weights.a_const, weights.b_const))
    })?;

    let mut config = ConfigEcho::new(
        "theorem2",
        args.x,
        limit,
        args.common.threads,
        args.common.format,
    );
    config.y = Some(y);
    config.q_max = Some(q_max);
    config.b_exponent = Some(args.b_exponent);
    config.budget = args.budget;
    let artifact = Artifact {
        config,
        header: vec![
            "x", "q_max", "y", "a_const", "b_const", "lhs", "rhs", "ratio",
        ],
        rows: vec![vec![
            args.x.to_string(),
            q_max.to_string(),
            y.to_string(),
            sig12(a_const),
            sig12(b_const),
            sig12(check.lhs),
            sig12(check.rhs),
            sig12(check.ratio),
        ]],
    };
    let dest = resolve_out_path(args.common.out.as_deref(), "theorem2", args.common.format);
    let written = artifact.write(dest.as_deref(), args.common.format)?;
    println!(
        "theorem2 x={} Q={q_max} y={y} lhs={} rhs={} ratio={} -> {written}",
        args.x,
        sig12(check.lhs),
        sig12(check.rhs),
        sig12(check.ratio)
    );
    Ok(())
}
