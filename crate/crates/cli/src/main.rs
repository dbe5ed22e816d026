//! `binarity` — command-line driver for the binarity decision procedures.
//!
//! Subcommands: `analyze`, `closure`, `arity`, `rell`, `test5`, `verify`,
//! `corpus`. All reports are deterministic: byte-identical across repeated
//! runs with the same flags. Timings never reach stdout; `--timings` prints
//! them to stderr.
//!
//! Exit codes: 0 — the command produced a verdict or report (whatever the
//! verdict); 2 — invalid input (parse errors, hypothesis violations,
//! unsupported fragments, rejected certificates); 3 — a resource budget was
//! exceeded (a partial report is printed when one exists); 1 — internal
//! error.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use binarity_core::binarity::{
    r_ell, verify_witness, ArityResult, CountMethod, TestSelection, Verdict, VerifyOutcome,
    WitnessCertificate,
};
use binarity_core::closure::{two_closure, ClosureGroup, ClosureResult};
use binarity_core::corpus::builtin_corpus;
use binarity_core::format::{
    read_group_file, read_witness_file, write_group_file, write_witness_file, GroupFile,
};
use binarity_core::reduction::{test5_alot, Test5Config, Test5Outcome};
use binarity_core::report::{analyze, render_json, render_text, verdict_str, AnalysisOptions};
use binarity_core::{action::coset_action, group::PermGroup, Budgets, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "binarity",
    version,
    about = "Decide or gather evidence on whether a permutation group action is binary",
    after_help = "Exit codes: 0 verdict/report produced, 2 invalid input, 3 budget exceeded, 1 internal error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    budgets: BudgetArgs,

    /// Interpret points in input files as 1-based.
    #[arg(long, global = true)]
    one_based: bool,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Print elapsed wall-clock time to stderr (never stdout).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Budget flags, each with an environment-variable mirror.
#[derive(Args)]
struct BudgetArgs {
    /// Backtrack node budget (setwise stabilizer, 2-closure search).
    #[arg(long, global = true, env = "BINARITY_BUDGET_NODES")]
    budget_nodes: Option<u64>,

    /// Maximum degree of a constructed coset action.
    #[arg(long, global = true, env = "BINARITY_DEGREE_CAP")]
    degree_cap: Option<u64>,

    /// Maximum degree for the general 2-closure backtrack.
    #[arg(long, global = true, env = "BINARITY_CLOSURE_DEGREE_CAP")]
    closure_degree_cap: Option<u64>,

    /// Cap on full element enumeration (character sums, conjugacy scans).
    #[arg(long, global = true, env = "BINARITY_ELEMENT_CAP")]
    element_cap: Option<u64>,

    /// Cap on visited tuples in orbit counting and the arity oracle.
    #[arg(long, global = true, env = "BINARITY_TUPLE_BUDGET")]
    tuple_budget: Option<u64>,

    /// Largest tuple length probed by the character-bound test.
    #[arg(long, global = true, env = "BINARITY_MAX_ELL")]
    max_ell: Option<u32>,

    /// Largest degree for which full pair-transporter tables are built.
    #[arg(long, global = true, env = "BINARITY_WITNESS_DEGREE_CAP")]
    witness_degree_cap: Option<usize>,
}

impl BudgetArgs {
    fn resolve(&self) -> Budgets {
        let mut b = Budgets::default();
        if let Some(v) = self.budget_nodes {
            b.node_budget = v;
        }
        if let Some(v) = self.degree_cap {
            b.degree_cap = v;
        }
        if let Some(v) = self.closure_degree_cap {
            b.closure_degree_cap = v;
        }
        if let Some(v) = self.element_cap {
            b.element_cap = v;
        }
        if let Some(v) = self.tuple_budget {
            b.tuple_budget = v;
        }
        if let Some(v) = self.max_ell {
            b.max_ell = v;
        }
        if let Some(v) = self.witness_degree_cap {
            b.witness_degree_cap = v;
        }
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the test battery (1, 2, 3, suborbit reduction) on a group file.
    Analyze {
        /// Group file (JSON).
        group: PathBuf,
        /// Act on the cosets of this subgroup (JSON group file of the same
        /// degree) instead of the points of the group file itself.
        #[arg(long, value_name = "SUBGROUP-FILE")]
        cosets_of: Option<PathBuf>,
        /// Comma-separated subset of 1,2,3,4 (4 is the suborbit reduction).
        #[arg(long, value_name = "LIST", default_value = "1,2,3,4")]
        tests: String,
        /// Skip the exhaustive small-degree arity oracle.
        #[arg(long)]
        no_oracle: bool,
        /// Write the first witness certificate produced to this path.
        #[arg(long, value_name = "PATH")]
        emit_witness: Option<PathBuf>,
    },
    /// Compute the 2-closure of a group and report whether it is 2-closed.
    Closure {
        group: PathBuf,
        #[arg(long, value_name = "SUBGROUP-FILE")]
        cosets_of: Option<PathBuf>,
    },
    /// Compute the exact arity by exhaustive search (degree at most 8).
    Arity {
        group: PathBuf,
        #[arg(long, value_name = "SUBGROUP-FILE")]
        cosets_of: Option<PathBuf>,
    },
    /// Count orbits on injective ℓ-tuples.
    Rell {
        group: PathBuf,
        #[arg(long, value_name = "SUBGROUP-FILE")]
        cosets_of: Option<PathBuf>,
        /// Tuple length ℓ.
        #[arg(long)]
        ell: u32,
        /// Counting method.
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Reduce a huge action to small coset actions of the point stabilizer.
    Test5 {
        /// Group file for the point stabilizer M in a faithful permutation
        /// representation.
        stabilizer: PathBuf,
        /// |Ω|, the size of the big action (decimal, arbitrary precision).
        #[arg(long, value_name = "N")]
        omega_size: String,
        /// The prime-power parameter d.
        #[arg(long)]
        d: u64,
        /// Require subgroup-membership condition (2) exactly instead of the
        /// sound relaxation (currently unsupported; fails rather than guess).
        #[arg(long)]
        exact_condition2: bool,
        /// Require normal-subgroup condition (3) exactly instead of the
        /// sound relaxation.
        #[arg(long)]
        exact_condition3: bool,
    },
    /// Check a witness certificate file independently of its producer.
    Verify {
        /// Witness file (JSON).
        witness: PathBuf,
    },
    /// Manage and batch-run the group corpus.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Character sum when the group is enumerable, otherwise direct orbits.
    Auto,
    CharacterSum,
    DirectOrbit,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Analyze every .json group file in a directory.
    Run {
        directory: PathBuf,
        /// Number of worker threads.
        #[arg(long, env = "BINARITY_WORKERS", default_value_t = 1)]
        workers: usize,
        /// Comma-separated subset of 1,2,3,4 (4 is the suborbit reduction).
        #[arg(long, value_name = "LIST", default_value = "1,2,3,4")]
        tests: String,
        /// Skip the exhaustive small-degree arity oracle.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Write the built-in corpus as group files into a directory.
    Generate { directory: PathBuf },
    /// List the built-in corpus entries.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let timings = cli.timings;
    let code = run(cli);
    if timings {
        eprintln!("timing: completed in {:.3}s", start.elapsed().as_secs_f64());
    }
    ExitCode::from(code)
}

/// Maps library errors to exit codes: budget exhaustion → 3, internal
/// invariant violations → 1, everything else (bad or unsupported input) → 2.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } | Error::DegreeCap { .. } => 3,
        Error::Unsupported(msg) if msg.starts_with("internal error") => 1,
        _ => 2,
    }
}

fn fail(e: &Error) -> u8 {
    eprintln!("error: {e}");
    exit_code_for(e)
}

fn run(cli: Cli) -> u8 {
    let budgets = cli.budgets.resolve();
    let one_based = cli.one_based;
    let format = cli.format;
    match cli.command {
        Command::Analyze {
            group,
            cosets_of,
            tests,
            no_oracle,
            emit_witness,
        } => cmd_analyze(
            &group,
            cosets_of.as_deref(),
            &tests,
            no_oracle,
            emit_witness.as_deref(),
            one_based,
            format,
            &budgets,
        ),
        Command::Closure { group, cosets_of } => {
            cmd_closure(&group, cosets_of.as_deref(), one_based, format, &budgets)
        }
        Command::Arity { group, cosets_of } => {
            cmd_arity(&group, cosets_of.as_deref(), one_based, format, &budgets)
        }
        Command::Rell {
            group,
            cosets_of,
            ell,
            method,
        } => cmd_rell(
            &group,
            cosets_of.as_deref(),
            ell,
            method,
            one_based,
            format,
            &budgets,
        ),
        Command::Test5 {
            stabilizer,
            omega_size,
            d,
            exact_condition2,
            exact_condition3,
        } => cmd_test5(
            &stabilizer,
            &omega_size,
            d,
            exact_condition2,
            exact_condition3,
            one_based,
            format,
            &budgets,
        ),
        Command::Verify { witness } => cmd_verify(&witness, format),
        Command::Corpus { command } => match command {
            CorpusCommand::Run {
                directory,
                workers,
                tests,
                no_oracle,
            } => cmd_corpus_run(&directory, workers, &tests, no_oracle, one_based, format, &budgets),
            CorpusCommand::Generate { directory } => cmd_corpus_generate(&directory),
            CorpusCommand::List => cmd_corpus_list(format),
        },
    }
}

/// A loaded action: the group to analyze plus a display name.
struct LoadedAction {
    name: String,
    group: PermGroup,
}

fn display_name(file: &GroupFile, path: &Path) -> String {
    file.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string())
    })
}

/// Loads a group file and, with `--cosets-of`, realizes the coset action.
fn load_action(
    group_path: &Path,
    cosets_of: Option<&Path>,
    one_based: bool,
    budgets: &Budgets,
) -> Result<LoadedAction, Error> {
    let file = read_group_file(group_path)?;
    let name = display_name(&file, group_path);
    let g = file.to_group_with(one_based)?;
    match cosets_of {
        None => Ok(LoadedAction { name, group: g }),
        Some(sub_path) => {
            let sub_file = read_group_file(sub_path)?;
            let sub_name = display_name(&sub_file, sub_path);
            let h = sub_file.to_group_with(one_based)?;
            let action = coset_action(&g, &h, budgets)?;
            Ok(LoadedAction {
                name: format!("{name} on cosets of {sub_name}"),
                group: action.group,
            })
        }
    }
}

/// Parses `--tests 1,2,3,4` into (selection, suborbit) with the oracle flag
/// applied.
fn parse_tests(list: &str, no_oracle: bool) -> Result<AnalysisOptions, Error> {
    let mut selection = TestSelection {
        test1: false,
        test2: false,
        test3: false,
        oracle: !no_oracle,
        stop_at_first_nonbinary: false,
    };
    let mut suborbit = false;
    for part in list.split(',') {
        let part = part.trim();
        match part {
            "1" => selection.test1 = true,
            "2" => selection.test2 = true,
            "3" => selection.test3 = true,
            "4" => suborbit = true,
            "" => {}
            other => {
                return Err(Error::Parse(format!(
                    "--tests accepts a comma-separated subset of 1,2,3,4; got {other:?}"
                )))
            }
        }
    }
    Ok(AnalysisOptions { selection, suborbit })
}

#[allow(clippy::too_many_arguments)]
fn cmd_analyze(
    group_path: &Path,
    cosets_of: Option<&Path>,
    tests: &str,
    no_oracle: bool,
    emit_witness: Option<&Path>,
    one_based: bool,
    format: Format,
    budgets: &Budgets,
) -> u8 {
    let options = match parse_tests(tests, no_oracle) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let loaded = match load_action(group_path, cosets_of, one_based, budgets) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let report = match analyze(&loaded.group, &loaded.name, &options, budgets) {
        Ok(r) => r,
        Err(e) => {
            // Partial report: the group loaded fine, so print its header
            // before failing. The battery converts per-test budget errors
            // into skips, so an error here is infrastructural.
            print_partial_header(&loaded, format, &e);
            return fail(&e);
        }
    };
    match format {
        Format::Text => print!("{}", render_text(&report)),
        Format::Json => print!("{}", render_json(&report)),
    }
    if let Some(path) = emit_witness {
        let mut certs: Vec<&WitnessCertificate> = report.battery.certificates();
        if let Some(out) = &report.suborbit {
            if let Some(fired) = &out.firing_battery {
                certs.extend(fired.certificates());
            }
        }
        match certs.first() {
            Some(cert) => {
                if let Err(e) = write_witness_file(path, cert) {
                    return fail(&e);
                }
                eprintln!("witness written to {}", path.display());
            }
            None => eprintln!("no witness certificate produced; nothing written"),
        }
    }
    0
}

fn print_partial_header(loaded: &LoadedAction, format: Format, e: &Error) {
    match format {
        Format::Text => {
            print!(
                "group: {}\ndegree: {}\norder: {}\nerror: {e}\n",
                loaded.name,
                loaded.group.degree(),
                loaded.group.order()
            );
        }
        Format::Json => {
            let v = json!({
                "group": loaded.name,
                "degree": loaded.group.degree(),
                "order": loaded.group.order().to_string(),
                "error": e.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
}

fn closure_json(name: &str, degree: usize, r: &ClosureResult) -> Value {
    let mut m = Map::new();
    m.insert("group".into(), json!(name));
    m.insert("degree".into(), json!(degree));
    m.insert("order".into(), json!(r.group_order.to_string()));
    m.insert("closure_order".into(), json!(r.closure_order.to_string()));
    m.insert("two_closed".into(), json!(r.is_two_closed));
    m.insert(
        "two_transitive_shortcut".into(),
        json!(r.two_transitive_shortcut),
    );
    m.insert(
        "full_symmetric".into(),
        json!(matches!(r.closure, ClosureGroup::FullSymmetric { .. })),
    );
    m.insert(
        "witness_element".into(),
        match &r.witness_element {
            Some(w) => json!(w.to_cycle_string()),
            None => Value::Null,
        },
    );
    m.insert("nodes_visited".into(), json!(r.nodes_visited));
    Value::Object(m)
}

fn cmd_closure(
    group_path: &Path,
    cosets_of: Option<&Path>,
    one_based: bool,
    format: Format,
    budgets: &Budgets,
) -> u8 {
    let loaded = match load_action(group_path, cosets_of, one_based, budgets) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let result = match two_closure(&loaded.group, budgets) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    match format {
        Format::Text => {
            println!("group: {}", loaded.name);
            println!("degree: {}", loaded.group.degree());
            println!("order: {}", result.group_order);
            println!("closure order: {}", result.closure_order);
            if matches!(result.closure, ClosureGroup::FullSymmetric { .. }) {
                println!("closure: full symmetric group (symbolic)");
            }
            println!(
                "2-transitive shortcut: {}",
                if result.two_transitive_shortcut { "yes" } else { "no" }
            );
            match &result.witness_element {
                Some(w) => println!("witness element: {}", w.to_cycle_string()),
                None => println!("witness element: none"),
            }
            println!("nodes visited: {}", result.nodes_visited);
            println!(
                "2-closed: {}",
                if result.is_two_closed { "yes" } else { "no" }
            );
        }
        Format::Json => {
            let v = closure_json(&loaded.name, loaded.group.degree(), &result);
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    0
}

fn cmd_arity(
    group_path: &Path,
    cosets_of: Option<&Path>,
    one_based: bool,
    format: Format,
    budgets: &Budgets,
) -> u8 {
    let loaded = match load_action(group_path, cosets_of, one_based, budgets) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let arity = match binarity_core::binarity::exact_arity(&loaded.group, budgets) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    match format {
        Format::Text => {
            println!("group: {}", loaded.name);
            println!("degree: {}", loaded.group.degree());
            println!("order: {}", loaded.group.order());
            match arity {
                ArityResult::Exact(k) => {
                    println!("arity: {k} (exact)");
                    println!("binary: {}", if k == 2 { "yes" } else { "no" });
                }
                ArityResult::LowerBound(k) => {
                    println!("arity: >= {k} (lower bound, budget exhausted)");
                }
            }
        }
        Format::Json => {
            let v = match arity {
                ArityResult::Exact(k) => json!({
                    "group": loaded.name,
                    "degree": loaded.group.degree(),
                    "order": loaded.group.order().to_string(),
                    "arity": k,
                    "exact": true,
                    "binary": k == 2,
                }),
                ArityResult::LowerBound(k) => json!({
                    "group": loaded.name,
                    "degree": loaded.group.degree(),
                    "order": loaded.group.order().to_string(),
                    "arity": k,
                    "exact": false,
                }),
            };
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    0
}

fn cmd_rell(
    group_path: &Path,
    cosets_of: Option<&Path>,
    ell: u32,
    method: MethodArg,
    one_based: bool,
    format: Format,
    budgets: &Budgets,
) -> u8 {
    let loaded = match load_action(group_path, cosets_of, one_based, budgets) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let method = match method {
        MethodArg::CharacterSum => CountMethod::CharacterSum,
        MethodArg::DirectOrbit => CountMethod::DirectOrbit,
        MethodArg::Auto => {
            if loaded.group.order() <= BigUint::from(budgets.element_cap) {
                CountMethod::CharacterSum
            } else {
                CountMethod::DirectOrbit
            }
        }
    };
    let counts = match r_ell(&loaded.group, ell, method, budgets) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let method_name = match counts.method {
        CountMethod::CharacterSum => "character-sum",
        CountMethod::DirectOrbit => "direct-orbit",
    };
    match format {
        Format::Text => {
            println!("group: {}", loaded.name);
            println!("degree: {}", loaded.group.degree());
            println!("order: {}", loaded.group.order());
            println!("r_{} = {} ({method_name})", counts.ell, counts.count);
        }
        Format::Json => {
            let v = json!({
                "group": loaded.name,
                "degree": loaded.group.degree(),
                "order": loaded.group.order().to_string(),
                "ell": counts.ell,
                "count": counts.count.to_string(),
                "method": method_name,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    0
}

#[allow(clippy::too_many_arguments)]
fn cmd_test5(
    stabilizer_path: &Path,
    omega_size: &str,
    d: u64,
    exact_condition2: bool,
    exact_condition3: bool,
    one_based: bool,
    format: Format,
    budgets: &Budgets,
) -> u8 {
    let file = match read_group_file(stabilizer_path) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let name = display_name(&file, stabilizer_path);
    let m = match file.to_group_with(one_based) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    let omega: BigUint = match omega_size.parse() {
        Ok(n) => n,
        Err(_) => {
            return fail(&Error::Parse(format!(
                "--omega-size must be a decimal integer; got {omega_size:?}"
            )))
        }
    };
    let mut cfg = Test5Config::new(m, name.clone(), omega, d);
    cfg.relax_condition2 = !exact_condition2;
    cfg.relax_condition3 = !exact_condition3;
    let outcome = match test5_alot(&cfg, budgets) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let (verdict, reason, actions) = match &outcome {
        Test5Outcome::NonBinary { actions } => ("NonBinary", None, actions),
        Test5Outcome::Inconclusive { reason, actions } => {
            ("Inconclusive", Some(reason.clone()), actions)
        }
    };
    match format {
        Format::Text => {
            println!("stabilizer: {name}");
            println!("stabilizer order: {}", cfg.m.order());
            println!("omega size: {}", cfg.omega_size);
            println!("d: {d}");
            println!("candidate actions: {}", actions.len());
            for a in actions {
                let status = match a.excluded_by {
                    Some(cond) => format!("excluded ({cond})"),
                    None => match a.verdict_source {
                        Some(src) => format!("{} ({src})", verdict_str(a.verdict)),
                        None => verdict_str(a.verdict).to_string(),
                    },
                };
                println!(
                    "  degree {} (stabilizer subgroup order {}): {status}",
                    a.degree, a.subgroup_order
                );
            }
            match &reason {
                Some(r) => println!("verdict: {verdict} ({r})"),
                None => println!("verdict: {verdict}"),
            }
        }
        Format::Json => {
            let rows: Vec<Value> = actions
                .iter()
                .map(|a| {
                    json!({
                        "degree": a.degree,
                        "subgroup_order": a.subgroup_order.to_string(),
                        "verdict": verdict_str(a.verdict),
                        "verdict_source": a.verdict_source,
                        "excluded_by": a.excluded_by,
                    })
                })
                .collect();
            let v = json!({
                "stabilizer": name,
                "stabilizer_order": cfg.m.order().to_string(),
                "omega_size": cfg.omega_size.to_string(),
                "d": d,
                "actions": rows,
                "verdict": verdict,
                "reason": reason,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    0
}

fn cmd_verify(witness_path: &Path, format: Format) -> u8 {
    let cert = match read_witness_file(witness_path) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let outcome = verify_witness(&cert);
    let (ok, reason) = match &outcome {
        VerifyOutcome::Verified => (true, None),
        VerifyOutcome::Rejected(r) => (false, Some(r.clone())),
    };
    match format {
        Format::Text => {
            println!("group: {}", cert.group_name);
            println!("degree: {}", cert.group.degree());
            println!("|I| = |J| = {}", cert.i.len());
            match &reason {
                None => println!("verified"),
                Some(r) => println!("rejected: {r}"),
            }
        }
        Format::Json => {
            let v = json!({
                "group": cert.group_name,
                "degree": cert.group.degree(),
                "tuple_length": cert.i.len(),
                "verified": ok,
                "reason": reason,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    if ok {
        0
    } else {
        2
    }
}

/// One row of a corpus run.
struct CorpusRow {
    text: String,
    json: Value,
    outcome: RowOutcome,
}

enum RowOutcome {
    Verdict(Verdict),
    Error,
}

fn corpus_row(path: &Path, options: &AnalysisOptions, budgets: &Budgets, one_based: bool) -> CorpusRow {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let run = || -> Result<_, Error> {
        let file = read_group_file(path)?;
        let name = display_name(&file, path);
        let g = file.to_group_with(one_based)?;
        let report = analyze(&g, &name, options, budgets)?;
        Ok(report)
    };
    match run() {
        Ok(report) => {
            let source = report.verdict_source.clone().unwrap_or_default();
            let text = format!(
                "{stem}: verdict={} source={} degree={} order={} certificates={}",
                verdict_str(report.verdict),
                if source.is_empty() { "-" } else { &source },
                report.degree,
                report.order,
                report.certificates_verified,
            );
            let json = json!({
                "file": stem,
                "group": report.name,
                "degree": report.degree,
                "order": report.order,
                "verdict": verdict_str(report.verdict),
                "verdict_source": report.verdict_source,
                "certificates_verified": report.certificates_verified,
            });
            CorpusRow {
                text,
                json,
                outcome: RowOutcome::Verdict(report.verdict),
            }
        }
        Err(e) => {
            let text = format!("{stem}: error: {e}");
            let json = json!({ "file": stem, "error": e.to_string() });
            CorpusRow {
                text,
                json,
                outcome: RowOutcome::Error,
            }
        }
    }
}

fn cmd_corpus_run(
    directory: &Path,
    workers: usize,
    tests: &str,
    no_oracle: bool,
    one_based: bool,
    format: Format,
    budgets: &Budgets,
) -> u8 {
    let options = match parse_tests(tests, no_oracle) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let entries = match std::fs::read_dir(directory) {
        Ok(iter) => iter,
        Err(e) => {
            return fail(&Error::Parse(format!(
                "cannot read directory {}: {e}",
                directory.display()
            )))
        }
    };
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        match entry {
            Ok(entry) => {
                let path = entry.path();
                if path.extension().is_some_and(|e| e == "json") {
                    files.push(path);
                }
            }
            Err(e) => {
                return fail(&Error::Parse(format!(
                    "cannot read directory {}: {e}",
                    directory.display()
                )))
            }
        }
    }
    files.sort();
    let workers = workers.max(1).min(files.len().max(1));

    // Work-stealing over a shared counter; rows land in their input slot so
    // the printed order is deterministic regardless of scheduling.
    let next = AtomicUsize::new(0);
    let rows: Vec<Mutex<Option<CorpusRow>>> = files.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let row = corpus_row(&files[i], &options, budgets, one_based);
                *rows[i].lock().expect("row slot") = Some(row);
            });
        }
    });
    let rows: Vec<CorpusRow> = rows
        .into_iter()
        .map(|slot| slot.into_inner().expect("row slot").expect("row computed"))
        .collect();

    let mut nonbinary = 0usize;
    let mut binary = 0usize;
    let mut inconclusive = 0usize;
    let mut errors = 0usize;
    for row in &rows {
        match row.outcome {
            RowOutcome::Verdict(Verdict::NonBinary) => nonbinary += 1,
            RowOutcome::Verdict(Verdict::Binary) => binary += 1,
            RowOutcome::Verdict(Verdict::Inconclusive) => inconclusive += 1,
            RowOutcome::Error => errors += 1,
        }
    }
    match format {
        Format::Text => {
            let out = std::io::stdout();
            let mut out = out.lock();
            for row in &rows {
                writeln!(out, "{}", row.text).expect("stdout");
            }
            writeln!(
                out,
                "summary: {} groups, {nonbinary} non-binary, {binary} binary, {inconclusive} inconclusive, {errors} errors",
                rows.len()
            )
            .expect("stdout");
        }
        Format::Json => {
            let v = json!({
                "rows": rows.iter().map(|r| r.json.clone()).collect::<Vec<_>>(),
                "summary": {
                    "groups": rows.len(),
                    "nonbinary": nonbinary,
                    "binary": binary,
                    "inconclusive": inconclusive,
                    "errors": errors,
                },
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    // Per-file errors are rows, not failures; nonzero exit is reserved for
    // infrastructure problems (unreadable directory).
    0
}

fn cmd_corpus_generate(directory: &Path) -> u8 {
    if let Err(e) = std::fs::create_dir_all(directory) {
        return fail(&Error::Parse(format!(
            "cannot create directory {}: {e}",
            directory.display()
        )));
    }
    let entries = builtin_corpus();
    let count = entries.len();
    for entry in &entries {
        let file = GroupFile::from_group(entry.name.clone(), &entry.group);
        let path = directory.join(format!("{}.json", entry.slug));
        if let Err(e) = write_group_file(&path, &file) {
            return fail(&e);
        }
    }
    println!("wrote {count} group files to {}", directory.display());
    0
}

fn cmd_corpus_list(format: Format) -> u8 {
    let entries = builtin_corpus();
    match format {
        Format::Text => {
            for e in &entries {
                println!(
                    "{}  degree={} order={}  {}",
                    e.slug,
                    e.group.degree(),
                    e.order,
                    e.name
                );
            }
        }
        Format::Json => {
            let rows: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "slug": e.slug,
                        "name": e.name,
                        "degree": e.group.degree(),
                        "order": e.order,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
        }
    }
    0
}
