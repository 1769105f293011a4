//! Command-line front end: build the named constructions, verify system
//! files against the exact checkers, run the exhaustive search, and scan
//! the binomial-ratio bounds.
//!
//! Exit codes: 0 — success and every selected check passed; 1 — the run
//! completed but a check reported failure; 2 — usage, parse, or resource
//! errors; 3 — a mathematical contradiction (a theorem-violating input
//! was found; its dump is written next to the working directory).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spsys::analysis::{
    check_averaging, check_bollobas, check_main_theorem, exception_classify, find_diamond,
};
use spsys::constructions::{
    bollobas_family, figure1_fixture, five_cycle, power_construction, singleton_swap,
};
use spsys::json::{system_from_json, system_to_json};
use spsys::report::{sha256_hex, RunReport};
use spsys::search::{search_max, SearchConfig};
use spsys::system::Side;
use spsys::{Error, ExactRational, SetPairSystem};

#[derive(Parser)]
#[command(
    name = "spsys",
    version,
    about = "Construct, verify, and exhaustively search 1-cross intersecting set pair systems"
)]
struct Cli {
    /// Print the machine-readable run report as JSON instead of the
    /// human-readable summary.
    #[arg(long, global = true)]
    json: bool,
    /// Attach wall-clock timings to the report. Off by default so that
    /// identical runs produce byte-identical output.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a JSON system file against the exact verifiers.
    Verify(VerifyArgs),
    /// Build a named construction and write it as a JSON system file.
    Construct(ConstructArgs),
    /// Exhaustively search for the maximum number of pairs within bounds.
    Search(SearchArgs),
    /// Scan the binomial-ratio bounds exactly over a lattice square.
    Lemmas(LemmasArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to a JSON system file.
    path: PathBuf,
    /// Subset of checks to run (comma-separated; default: all).
    #[arg(long, value_delimiter = ',', value_enum)]
    checks: Vec<CheckKind>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum CheckKind {
    /// Diagonals empty, off-diagonals nonempty.
    Cross,
    /// Diagonals empty, off-diagonals exactly one element.
    OneCross,
    /// Σ ≤ 1 with the exact value reported.
    Bollobas,
    /// The ground-set averaging identity, both sides.
    Averaging,
    /// Exceptions present or Σ ≤ 5/6 (and Σ ≤ 29/30 when all sizes ≥ 2).
    MainTheorem,
    /// Locate a (2,2)-diamond index pair if one exists.
    Diamond,
    /// Classify the singleton exception patterns.
    Exceptions,
}

impl CheckKind {
    const ALL: [CheckKind; 7] = [
        CheckKind::Cross,
        CheckKind::OneCross,
        CheckKind::Bollobas,
        CheckKind::Averaging,
        CheckKind::MainTheorem,
        CheckKind::Diamond,
        CheckKind::Exceptions,
    ];

    fn name(self) -> &'static str {
        match self {
            CheckKind::Cross => "cross",
            CheckKind::OneCross => "one-cross",
            CheckKind::Bollobas => "bollobas",
            CheckKind::Averaging => "averaging",
            CheckKind::MainTheorem => "main-theorem",
            CheckKind::Diamond => "diamond",
            CheckKind::Exceptions => "exceptions",
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    /// Which construction to build.
    #[arg(value_enum)]
    kind: ConstructKind,
    /// |A_i| for the binomial equality family.
    #[arg(long)]
    a: Option<usize>,
    /// |B_i| for the binomial equality family.
    #[arg(long)]
    b: Option<usize>,
    /// Index of the power construction (n ≥ 2).
    #[arg(long)]
    n: Option<usize>,
    /// Output file path (default: "<kind>.json").
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ConstructKind {
    /// The 5-pair complementary-cycles system.
    FiveCycle,
    /// The 2-pair singleton swap.
    SingletonSwap,
    /// The C(a+b, a)-pair family attaining Σ = 1 (needs --a, --b).
    Bollobas,
    /// The 5^{n/2} (or 2·5^{(n-1)/2}) pair blow-up (needs --n).
    Power,
    /// The 5-pair mixed-overlap worked example.
    Figure1,
}

impl ConstructKind {
    fn name(self) -> &'static str {
        match self {
            ConstructKind::FiveCycle => "five-cycle",
            ConstructKind::SingletonSwap => "singleton-swap",
            ConstructKind::Bollobas => "bollobas",
            ConstructKind::Power => "power",
            ConstructKind::Figure1 => "figure1",
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Maximum |A_i|.
    #[arg(long)]
    a: usize,
    /// Maximum |B_i|.
    #[arg(long)]
    b: usize,
    /// Admit systems containing the singleton exception patterns.
    #[arg(long)]
    allow_exceptions: bool,
    /// Stop extending beyond this many pairs.
    #[arg(long)]
    max_pairs: Option<usize>,
    /// Wall-clock budget in seconds (default 300).
    #[arg(long)]
    time_budget: Option<f64>,
    /// Parallel workers (default: $SPSYS_WORKERS, or 1).
    #[arg(long)]
    workers: Option<usize>,
    /// Write each extremal class representative as a JSON file here.
    #[arg(long, value_name = "DIR")]
    emit_extremal: Option<PathBuf>,
}

#[derive(Args)]
struct LemmasArgs {
    /// Scan all lattice points 2 ≤ a, b ≤ max.
    #[arg(long)]
    max: u64,
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(&cli, started) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    };
    std::process::exit(code);
}

fn run(cli: &Cli, started: Instant) -> spsys::Result<i32> {
    match &cli.command {
        Command::Verify(args) => cmd_verify(cli, args, started),
        Command::Construct(args) => cmd_construct(cli, args, started),
        Command::Search(args) => cmd_search(cli, args, started),
        Command::Lemmas(args) => cmd_lemmas(cli, args, started),
    }
}

/// Maps library errors to exit codes, writing contradiction dumps to disk.
fn report_error(e: &Error) -> i32 {
    match e {
        Error::Parse(msg) | Error::InvalidArgument(msg) | Error::ResourceLimit(msg) => {
            eprintln!("error: {msg}");
            2
        }
        Error::Contradiction { summary, dump } => {
            eprintln!("MATHEMATICAL CONTRADICTION: {summary}");
            if let Some(dump) = dump {
                let name = format!(
                    "counterexample_{}.json",
                    &sha256_hex(dump.as_bytes())[..12]
                );
                match std::fs::write(&name, dump) {
                    Ok(()) => eprintln!("counterexample dumped to {name}"),
                    Err(io) => {
                        eprintln!("(could not write {name}: {io}); dump follows:\n{dump}");
                    }
                }
            }
            3
        }
    }
}

/// Echo of the invocation with a stable program name.
fn command_echo() -> Vec<String> {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(first) = argv.first_mut() {
        *first = "spsys".to_string();
    }
    argv
}

fn emit(cli: &Cli, started: Instant, results: Value, human: &str, digest: Option<String>) {
    if cli.json {
        let mut report = RunReport::new(command_echo(), results);
        if let Some(d) = digest {
            report = report.with_input_digest(d);
        }
        if cli.timings {
            report = report.with_duration(started.elapsed().as_secs_f64());
        }
        print!("{}", report.render());
    } else {
        println!("{human}");
        if cli.timings {
            println!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
        }
    }
}

fn sigma_human(sigma: &ExactRational) -> String {
    format!("{sigma} (~{:.6})", sigma.to_f64())
}

// ====================================================================
// verify
// ====================================================================

struct CheckOutcome {
    kind: CheckKind,
    passed: bool,
    detail: Value,
    line: String,
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, started: Instant) -> spsys::Result<i32> {
    let bytes = std::fs::read(&args.path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", args.path.display())))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Parse("input file is not valid UTF-8".into()))?;
    let system = system_from_json(&text)?;

    let selected: Vec<CheckKind> = if args.checks.is_empty() {
        CheckKind::ALL.to_vec()
    } else {
        args.checks.clone()
    };

    let mut outcomes = Vec::new();
    for &kind in &selected {
        outcomes.push(run_check(&system, kind)?);
    }
    let all_passed = outcomes.iter().all(|o| o.passed);

    let mut human = format!(
        "system {} — {} pairs over {} elements\n",
        args.path.display(),
        system.m(),
        system.ground_size()
    );
    for o in &outcomes {
        let _ = writeln!(
            human,
            "  {:13} {} — {}",
            o.kind.name(),
            if o.passed { "ok  " } else { "FAIL" },
            o.line
        );
    }
    human.push_str(if all_passed {
        "all selected checks passed"
    } else {
        "SOME CHECKS FAILED"
    });

    let results = json!({
        "path": args.path.display().to_string(),
        "pairs": system.m(),
        "ground_size": system.ground_size(),
        "checks": outcomes.iter().map(|o| json!({
            "name": o.kind.name(),
            "passed": o.passed,
            "detail": o.detail,
        })).collect::<Vec<_>>(),
        "all_passed": all_passed,
    });
    emit(cli, started, results, &human, Some(digest));
    Ok(if all_passed { 0 } else { 1 })
}

/// Runs one check. Precondition violations (not cross intersecting, too few
/// pairs, empty sides) surface as a *failed check*, not a usage error;
/// contradictions propagate and become exit 3.
fn run_check(s: &SetPairSystem, kind: CheckKind) -> spsys::Result<CheckOutcome> {
    let soften = |r: spsys::Result<(bool, Value, String)>| -> spsys::Result<(bool, Value, String)> {
        match r {
            Err(Error::InvalidArgument(msg)) => {
                Ok((false, json!({ "error": msg }), msg_line(&msg)))
            }
            other => other,
        }
    };
    let (passed, detail, line) = soften(match kind {
        CheckKind::Cross => s.is_cross_intersecting().map(|v| {
            (
                v,
                json!(v),
                format!("cross intersecting: {}", yes_no(v)),
            )
        }),
        CheckKind::OneCross => s.is_one_cross_intersecting().map(|v| {
            (
                v,
                json!(v),
                format!("1-cross intersecting: {}", yes_no(v)),
            )
        }),
        CheckKind::Bollobas => check_bollobas(s).map(|(sigma, at_equality)| {
            let line = format!(
                "Σ = {} ≤ 1{}",
                sigma_human(&sigma),
                if at_equality { " with equality" } else { "" }
            );
            (
                true,
                json!({ "sigma": sigma, "at_equality": at_equality }),
                line,
            )
        }),
        CheckKind::Averaging => {
            let run = || -> spsys::Result<(bool, Value, String)> {
                let a = check_averaging(s, Side::A)?;
                let b = check_averaging(s, Side::B)?;
                Ok((
                    a && b,
                    json!({ "side_a": a, "side_b": b }),
                    format!("identity holds on side A: {}, side B: {}", yes_no(a), yes_no(b)),
                ))
            };
            run()
        }
        CheckKind::MainTheorem => check_main_theorem(s).map(|out| {
            let cases: Vec<String> = out
                .exceptions
                .cases()
                .iter()
                .map(|c| c.to_string())
                .collect();
            let line = if cases.is_empty() {
                format!("Σ = {} ≤ 5/6, no exceptions", sigma_human(&out.sigma))
            } else {
                format!(
                    "Σ = {}, consistent via exception case(s) {}",
                    sigma_human(&out.sigma),
                    cases.join(",")
                )
            };
            (out.consistent, serde_json::to_value(&out).expect("plain data"), line)
        }),
        CheckKind::Diamond => {
            let run = || -> spsys::Result<(bool, Value, String)> {
                let found = find_diamond(s);
                if let Some((i, j)) = found {
                    // The diamond consequence is a theorem on 1-cross
                    // intersecting systems; a violation must surface loudly.
                    if s.is_one_cross_intersecting().unwrap_or(false) {
                        let sigma = s.sigma()?;
                        if sigma > ExactRational::of(5, 6) {
                            return Err(Error::contradiction(
                                format!(
                                    "diamond at ({i}, {j}) but Σ = {sigma} > 5/6 on a \
                                     1-cross intersecting system"
                                ),
                                Some(system_to_json(s)),
                            ));
                        }
                    }
                }
                let line = match found {
                    Some((i, j)) => format!("diamond at pair indices ({i}, {j})"),
                    None => "no diamond".to_string(),
                };
                Ok((true, json!(found), line))
            };
            run()
        }
        CheckKind::Exceptions => {
            let report = exception_classify(s);
            let cases: Vec<String> = report.cases().iter().map(|c| c.to_string()).collect();
            let line = if cases.is_empty() {
                "no exception patterns".to_string()
            } else {
                format!("exception case(s): {}", cases.join(","))
            };
            Ok((
                true,
                serde_json::to_value(&report).expect("plain data"),
                line,
            ))
        }
    })?;
    Ok(CheckOutcome { kind, passed, detail, line })
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn msg_line(msg: &str) -> String {
    format!("not applicable: {msg}")
}

// ====================================================================
// construct
// ====================================================================

fn cmd_construct(cli: &Cli, args: &ConstructArgs, started: Instant) -> spsys::Result<i32> {
    let reject_unused = |flag: &str, present: bool| -> spsys::Result<()> {
        if present {
            return Err(Error::invalid(format!(
                "--{flag} does not apply to '{}'",
                args.kind.name()
            )));
        }
        Ok(())
    };
    let system = match args.kind {
        ConstructKind::FiveCycle | ConstructKind::SingletonSwap | ConstructKind::Figure1 => {
            reject_unused("a", args.a.is_some())?;
            reject_unused("b", args.b.is_some())?;
            reject_unused("n", args.n.is_some())?;
            match args.kind {
                ConstructKind::FiveCycle => five_cycle(),
                ConstructKind::SingletonSwap => singleton_swap(),
                _ => figure1_fixture(),
            }
        }
        ConstructKind::Bollobas => {
            reject_unused("n", args.n.is_some())?;
            let a = args.a.ok_or_else(|| Error::invalid("bollobas needs --a"))?;
            let b = args.b.ok_or_else(|| Error::invalid("bollobas needs --b"))?;
            bollobas_family(a, b)?
        }
        ConstructKind::Power => {
            reject_unused("a", args.a.is_some())?;
            reject_unused("b", args.b.is_some())?;
            let n = args.n.ok_or_else(|| Error::invalid("power needs --n"))?;
            power_construction(n)?
        }
    };

    let out_path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.json", args.kind.name())));
    let text = system_to_json(&system);
    std::fs::write(&out_path, &text)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", out_path.display())))?;

    let sigma = system.sigma()?;
    let sizes: std::collections::BTreeSet<(usize, usize)> = system
        .pairs()
        .iter()
        .map(|p| (p.a_size(), p.b_size()))
        .collect();
    let sizes_str: Vec<String> = sizes.iter().map(|(a, b)| format!("({a},{b})")).collect();

    let human = format!(
        "wrote {}: {} pairs over {} elements, sizes {{{}}}, Σ = {}",
        out_path.display(),
        system.m(),
        system.ground_size(),
        sizes_str.join(", "),
        sigma_human(&sigma)
    );
    let results = json!({
        "kind": args.kind.name(),
        "path": out_path.display().to_string(),
        "pairs": system.m(),
        "ground_size": system.ground_size(),
        "sizes": sizes.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "sigma": sigma,
        "output_digest": sha256_hex(text.as_bytes()),
    });
    emit(cli, started, results, &human, None);
    Ok(0)
}

// ====================================================================
// search
// ====================================================================

fn cmd_search(cli: &Cli, args: &SearchArgs, started: Instant) -> spsys::Result<i32> {
    let workers = match args.workers {
        Some(w) => w,
        None => match std::env::var("SPSYS_WORKERS") {
            Ok(v) => v.parse::<usize>().map_err(|_| {
                Error::invalid(format!("SPSYS_WORKERS must be a positive integer (got {v:?})"))
            })?,
            Err(_) => 1,
        },
    };
    let mut cfg = SearchConfig::new(args.a, args.b);
    cfg.allow_exceptions = args.allow_exceptions;
    cfg.max_pairs = args.max_pairs;
    cfg.worker_count = workers;
    if let Some(secs) = args.time_budget {
        if !(secs > 0.0 && secs.is_finite()) {
            return Err(Error::invalid("--time-budget must be a positive number of seconds"));
        }
        cfg.time_budget = Duration::from_secs_f64(secs);
    }

    let outcome = search_max(&cfg)?;

    let emitted = match &args.emit_extremal {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::invalid(format!("cannot create {}: {e}", dir.display())))?;
            let mut paths = Vec::new();
            for class in &outcome.extremal_classes {
                let path = dir.join(format!("class_{}.json", class.form.short_digest()));
                std::fs::write(&path, system_to_json(&class.representative)).map_err(|e| {
                    Error::invalid(format!("cannot write {}: {e}", path.display()))
                })?;
                paths.push(path.display().to_string());
            }
            Some(paths)
        }
        None => None,
    };

    let mut human = format!(
        "search a={} b={} exceptions={} workers={}\n",
        args.a,
        args.b,
        if args.allow_exceptions { "allowed" } else { "excluded" },
        workers
    );
    if outcome.proof_of_maximality {
        let _ = writeln!(human, "max_m = {} (proven maximal)", outcome.max_m);
    } else {
        let _ = writeln!(
            human,
            "max_m = {} — NOT PROVEN MAXIMAL: the budget ran out before the space did",
            outcome.max_m
        );
    }
    let _ = writeln!(human, "extremal classes: {}", outcome.extremal_classes.len());
    for class in &outcome.extremal_classes {
        let _ = writeln!(
            human,
            "  [{}] {} pairs over {} elements",
            class.form.short_digest(),
            class.representative.m(),
            class.representative.ground_size()
        );
    }
    let _ = write!(human, "nodes explored: {}", outcome.nodes_explored);
    if let Some(paths) = &emitted {
        let _ = write!(human, "\nrepresentatives written: {}", paths.join(", "));
    }

    let results = json!({
        "a": args.a,
        "b": args.b,
        "allow_exceptions": args.allow_exceptions,
        "workers": workers,
        "max_m": outcome.max_m,
        "proof_of_maximality": outcome.proof_of_maximality,
        "nodes_explored": outcome.nodes_explored,
        "extremal_classes": outcome.extremal_classes.iter().map(|c| json!({
            "digest": c.form.digest_hex(),
            "pairs": c.representative.m(),
            "ground_size": c.representative.ground_size(),
        })).collect::<Vec<_>>(),
        "emitted": emitted,
    });
    emit(cli, started, results, &human, None);
    Ok(0)
}

// ====================================================================
// lemmas
// ====================================================================

fn cmd_lemmas(cli: &Cli, args: &LemmasArgs, started: Instant) -> spsys::Result<i32> {
    if args.max < 2 {
        return Err(Error::invalid("--max must be at least 2"));
    }
    let third = spsys::analysis::scan_lemma_one_third(args.max)?;
    let fifth = spsys::analysis::scan_lemma_one_fifth(args.max)?;

    // Exact equality sets of the two ratios (derivable from the closed
    // forms): 1/3 only at (2,2); 1/5 at (3,2) and (4,2).
    let expect_third: Vec<(u64, u64)> = vec![(2, 2)];
    let expect_fifth: Vec<(u64, u64)> = [(3, 2), (4, 2)]
        .into_iter()
        .filter(|&(a, b)| a <= args.max && b <= args.max)
        .collect();

    let ok = third.violations.is_empty()
        && fifth.violations.is_empty()
        && third.equality_points == expect_third
        && fifth.equality_points == expect_fifth;

    let fmt_points = |pts: &[(u64, u64)]| -> String {
        if pts.is_empty() {
            "none".to_string()
        } else {
            pts.iter()
                .map(|(a, b)| format!("({a},{b})"))
                .collect::<Vec<_>>()
                .join(", ")
        }
    };
    let human = format!(
        "ratio scans over 2 ≤ a,b ≤ {}\n  1/3 bound: {} violations, equality at {}\n  1/5 bound: {} violations, equality at {}\n{}",
        args.max,
        third.violations.len(),
        fmt_points(&third.equality_points),
        fifth.violations.len(),
        fmt_points(&fifth.equality_points),
        if ok { "scans passed" } else { "SCANS FAILED" }
    );
    let results = json!({
        "max": args.max,
        "one_third": third,
        "one_fifth": fifth,
        "passed": ok,
    });
    emit(cli, started, results, &human, None);
    Ok(if ok { 0 } else { 1 })
}
