use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quadapn::admissibility::enumerate_admissible;
use quadapn::blocking::{ccz_check_set, BlockingOptions, PairOutcome, PointSet, ScanMode, DEFAULT_PAIR_BUDGET};
use quadapn::catalog::parse_catalog_spec;
use quadapn::construct::{bu_partition, refine_member, spread, ExplicitPartition};
use quadapn::equivalence::{verify_nonbent_equivariance, verify_partition_equivariance, EaTriple};
use quadapn::io::{parse_lut, serialize_lut};
use quadapn::report::{analyze, AnalysisOptions, AnalysisReport, Source};
use quadapn::{Error, Vbf};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "quadapn", version, about = "Analyze quadratic APN functions and vector space partitions")]
struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true, env = "QUADAPN_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral, differential, partition and blocking-set report for a function.
    Analyze(AnalyzeArgs),
    /// List the amplitude distributions not excluded for quadratic APN functions on F_2^n.
    Enumerate(EnumerateArgs),
    /// Build and verify an explicit vector space partition.
    Construct(ConstructArgs),
    /// Apply a seeded random EA transform and check the equivariance of N_F and the partition.
    Ea(EaArgs),
    /// Necessary conditions for CCZ-equivalence to a permutation.
    CczCheck(CczArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// LUT file, `-` for stdin, or `catalog:<name>:<n>`.
    input: String,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    skip_blocking: bool,
    /// Samples drawn when a subspace family is too large to scan.
    #[arg(long, default_value_t = 100_000)]
    sample_budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Families up to this size are scanned exhaustively.
    #[arg(long, default_value_t = 2_000_000)]
    exhaustive_limit: u64,
    /// Node budget of the subspace searches.
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    budget: u64,
    /// Treat a non-crooked function as a violation.
    #[arg(long)]
    expect_crooked: bool,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: u32,
    /// Include excluded packing solutions and the rules that exclude them.
    #[arg(long)]
    verbose: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Spread,
    Bu,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: u32,
    /// `t` for a spread, `s` for the two-dimension construction.
    #[arg(long)]
    param: u32,
    /// Replace member `idx` by a `t`-spread of it; applied in order.
    #[arg(long = "refine", value_name = "IDX:T")]
    refine: Vec<String>,
    /// Print every member's basis.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EaArgs {
    input: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the transformed LUT here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CczArgs {
    /// LUT file or catalog spec; omit when `--set` is given.
    input: Option<String>,
    /// A point set instead of a function: first entry `n`, then the points.
    #[arg(long, conflicts_with = "input")]
    set: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 2_000_000)]
    exhaustive_limit: u64,
    #[arg(long, default_value_t = 100_000)]
    sample_budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::Budget { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        anyhow::Error::from(err).into()
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: could not configure {t} threads: {e}");
        }
    }
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Ea(a) => cmd_ea(a),
        Command::CczCheck(a) => cmd_ccz(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn read_text(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load_function(input: &str) -> anyhow::Result<(Vbf, Source)> {
    if let Some(entry) = parse_catalog_spec(input) {
        let e = entry?;
        if !e.apn_condition {
            eprintln!("note: {input} does not satisfy gcd(k, n) = 1");
        }
        let source = Source {
            name: input.to_string(),
            modulus: Some(e.modulus),
        };
        return Ok((e.function, source));
    }
    let f = parse_lut(&read_text(input)?).with_context(|| format!("parsing {input}"))?;
    Ok((
        f,
        Source {
            name: input.to_string(),
            modulus: None,
        },
    ))
}

fn write_json<T: serde::Serialize + ?Sized>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    if path == Path::new("-") {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_report(r: &AnalysisReport) {
    println!("source: {} (n = {}, m = {})", r.source.name, r.n, r.m);
    if let Some(m) = r.source.modulus {
        println!("field modulus: {m:#b}");
    }
    println!("degree: {}", r.degree);
    println!("differential uniformity: {} (APN: {})", r.differential_uniformity, yes_no(r.is_apn));
    println!("linearity: {}", r.linearity);
    match &r.amplitude_distribution {
        Some(d) => println!("amplitude distribution: {d}"),
        None => println!("amplitude distribution: not plateaued"),
    }
    if let Some(p) = &r.partition {
        println!(
            "partition: {} ({} members, verified: {}, dim = exponent: {})",
            p.ptype,
            p.members,
            yes_no(p.verified),
            yes_no(p.dims_match_amplitudes)
        );
    } else if let Some(e) = &r.partition_error {
        println!("partition: none ({e})");
    }
    if let Some(size) = r.nonbent_size {
        println!("|N_F|: {size} (mod 4 = {})", size % 4);
    }
    if let Some(b) = &r.blocking {
        let scan = match b.odd.mode {
            ScanMode::Exhaustive => "exhaustive".to_string(),
            ScanMode::Sampled { samples, seed } => format!("sampled {samples}, seed {seed}"),
        };
        println!(
            "odd intersections with {}-spaces: {} ({} scanned, {scan})",
            b.scan_dim,
            yes_no(b.odd.ok()),
            b.odd.scanned
        );
        println!("blocking: {}", yes_no(b.is_blocking));
        if let Some(min) = &b.minimality {
            println!("minimal: {}", yes_no(min.minimal));
        }
        println!(
            "largest subspace inside N_F: dim {}{}",
            b.max_inner_dim,
            if b.max_inner_exact { "" } else { " (lower bound, budget exhausted)" }
        );
        println!("trivial: {}", yes_no(b.is_trivial));
        if let Some(t) = b.threefold_ok() {
            println!("3-fold blocking: {}", yes_no(t));
        }
        println!("complementary pair: {}", pair_text(&b.pair));
    }
    if let Some(ok) = r.admissible {
        println!("distribution excluded by rules: {}", yes_no(!ok));
    }
    if r.violations.is_empty() {
        println!("violations: none");
    } else {
        for v in &r.violations {
            println!("violation: {v}");
        }
    }
}

fn pair_text(p: &PairOutcome) -> String {
    match p {
        PairOutcome::Found { v, w, nodes } => {
            format!("found, dims {} + {} ({nodes} nodes)", v.dim(), w.dim())
        }
        PairOutcome::None { nodes } => format!("none ({nodes} nodes)"),
        PairOutcome::BudgetExhausted { nodes } => format!("budget exhausted after {nodes} nodes"),
        PairOutcome::Skipped => "skipped".into(),
    }
}

fn cmd_analyze(a: AnalyzeArgs) -> CmdResult {
    let (f, source) = load_function(&a.input)?;
    let opts = AnalysisOptions {
        skip_blocking: a.skip_blocking,
        expect_crooked: a.expect_crooked,
        record_timing: a.timing,
        blocking: BlockingOptions {
            exhaustive_limit: a.exhaustive_limit,
            samples: a.sample_budget,
            seed: a.seed,
            pair_budget: a.budget,
            search_budget: a.budget,
            ..BlockingOptions::default()
        },
    };
    let report = analyze(&f, source, &opts)?;
    let to_stdout = a.json.as_deref() == Some(Path::new("-"));
    if !to_stdout {
        print_report(&report);
    }
    if let Some(path) = &a.json {
        write_json(path, &report)?;
    }
    if !report.violations.is_empty() {
        return Ok(EXIT_VIOLATION);
    }
    let exhausted = report
        .blocking
        .as_ref()
        .is_some_and(|b| matches!(b.pair, PairOutcome::BudgetExhausted { .. }));
    Ok(if exhausted { EXIT_BUDGET } else { 0 })
}

fn cmd_enumerate(a: EnumerateArgs) -> CmdResult {
    let list = enumerate_admissible(a.n, a.verbose)?;
    let admissible = list.iter().filter(|e| e.admissible()).count();
    println!("n = {}: {admissible} types not excluded", a.n);
    for e in &list {
        if e.admissible() {
            println!("{}  {}", e.partition_type, e.amplitude_distribution);
        } else {
            println!(
                "{}  {}  excluded by {}",
                e.partition_type,
                e.amplitude_distribution,
                e.failing_rules().join(", ")
            );
        }
    }
    if let Some(path) = &a.json {
        write_json(path, &list)?;
    }
    Ok(0)
}

fn parse_refine(spec: &str) -> anyhow::Result<(usize, u32)> {
    let (idx, t) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("refinement must look like IDX:T, got {spec:?}"))?;
    Ok((idx.trim().parse()?, t.trim().parse()?))
}

fn cmd_construct(a: ConstructArgs) -> CmdResult {
    let mut p: ExplicitPartition = match a.kind {
        Kind::Spread => spread(a.n, a.param)?,
        Kind::Bu => bu_partition(a.n, a.param)?,
    };
    for spec in &a.refine {
        let (idx, t) = parse_refine(spec)?;
        p = refine_member(&p, idx, t)?;
    }
    let ok = p.verify();
    println!("type: {}", p.partition_type());
    println!("members: {}", p.members.len());
    println!("verify: {}", if ok { "pass" } else { "FAIL" });
    if a.list {
        for (i, m) in p.members.iter().enumerate() {
            println!("{i}: dim {} basis {:?}", m.dim(), m.basis());
        }
    }
    if let Some(path) = &a.json {
        let out = serde_json::json!({
            "schema": 1,
            "type": p.partition_type().to_string(),
            "verified": ok,
            "partition": &p,
        });
        write_json(path, &out)?;
    }
    Ok(if ok { 0 } else { EXIT_VIOLATION })
}

fn cmd_ea(a: EaArgs) -> CmdResult {
    let (f, _) = load_function(&a.input)?;
    let t = EaTriple::random(f.n(), f.m(), a.seed)?;
    let g = t.apply(&f)?;
    let lut = serialize_lut(&g);
    let mut notes = vec![format!("seed {}", a.seed)];
    let mut ok = true;
    match f.amplitude_distribution() {
        Ok(df) => {
            let same = g.amplitude_distribution()? == df;
            let nonbent = verify_nonbent_equivariance(&f, &g, &t.a1)?;
            ok &= same && nonbent;
            notes.push(format!("amplitude distribution preserved: {}", yes_no(same)));
            notes.push(format!("N_G maps onto N_F under L1^T: {}", yes_no(nonbent)));
        }
        Err(Error::NotPlateaued { .. }) => notes.push("not plateaued; N_F check skipped".into()),
        Err(e) => return Err(e.into()),
    }
    if f.n() == f.m() && f.is_apn() && f.is_quadratic() {
        let part = verify_partition_equivariance(&f, &g, &t.a1, &t.a2, &t.a3)?;
        ok &= part;
        notes.push(format!("partition members correspond: {}", yes_no(part)));
    }
    match &a.out {
        Some(path) => {
            fs::write(path, &lut).with_context(|| format!("writing {}", path.display()))?;
            for n in &notes {
                println!("{n}");
            }
        }
        None => {
            print!("{lut}");
            for n in &notes {
                println!("# {n}");
            }
        }
    }
    Ok(if ok { 0 } else { EXIT_VIOLATION })
}

fn parse_point_set(text: &str) -> anyhow::Result<PointSet> {
    let mut tokens = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.starts_with('#'))
        .flat_map(str::split_whitespace);
    let n: u32 = tokens
        .next()
        .ok_or_else(|| anyhow!("empty point set file"))?
        .parse()
        .context("point set width")?;
    let points = tokens
        .map(|t| match t.strip_prefix("0x") {
            Some(h) => u32::from_str_radix(h, 16),
            None => t.parse(),
        })
        .collect::<Result<Vec<u32>, _>>()
        .context("point set entries")?;
    Ok(PointSet::new(n, points)?)
}

fn cmd_ccz(a: CczArgs) -> CmdResult {
    let set = match (&a.set, &a.input) {
        (Some(path), _) => parse_point_set(&read_text(&path.to_string_lossy())?)?,
        (None, Some(input)) => {
            let (f, _) = load_function(input)?;
            if f.n() != f.m() {
                return Err(Error::WidthMismatch { left: f.n(), right: f.m() }.into());
            }
            quadapn::blocking::nonbent_set(&f)?
        }
        (None, None) => bail_input("give a function or --set FILE")?,
    };
    let mode = ScanMode::auto(set.m(), set.m() / 2 + 1, a.exhaustive_limit, a.sample_budget, a.seed);
    let r = ccz_check_set(&set, mode, a.budget)?;
    println!("n = {}, |N_F| = {}, size threshold {}", r.n, r.n_size, r.size_threshold);
    println!("size condition: {}", if r.size_ok { "holds" } else { "fails" });
    println!("3-fold blocking: {} ({} scanned)", yes_no(r.threefold.ok()), r.threefold.scanned);
    println!("complementary pair: {}", pair_text(&r.pair));
    if r.certified_not_permutation {
        println!("certified: not CCZ-equivalent to a permutation");
        for reason in &r.reasons {
            println!("  - {reason}");
        }
    } else {
        println!("not certified: every necessary condition checked holds");
    }
    if let Some(path) = &a.json {
        write_json(path, &r)?;
    }
    let exhausted = matches!(r.pair, PairOutcome::BudgetExhausted { .. });
    Ok(if exhausted && !r.certified_not_permutation { EXIT_BUDGET } else { 0 })
}

fn bail_input<T>(msg: &str) -> Result<T, Failure> {
    Err(Failure {
        code: EXIT_INPUT,
        err: anyhow!("{msg}"),
    })
}
