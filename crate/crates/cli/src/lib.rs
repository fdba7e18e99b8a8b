//! Command dispatch for the `chainbound` binary.
//!
//! [`run`] parses arguments and returns the exit code and the text that
//! would go to stdout and stderr, so commands can be tested in-process.
//! Exit code 1 means a check failed (a lemma checker found a violation, or
//! an input claim such as inflationarity turned out false); 2 means the
//! input or the invocation was unusable.

use std::fs;
use std::path::{Path, PathBuf};

use chainbound::bounding::{falsify_bound_assignment, zorn_maximal, Verdict};
use chainbound::fixpoint::{
    bw_chain_equals_ggc, bw_fixpoint_finite, reaching_definitions, FinitePosetCpo, FixpointError, DEFAULT_CAP,
};
use chainbound::gen_io::{
    parse_dataflow, parse_h_table, parse_poset, parse_selector, random_poset, to_dot, write_poset, GenConfig,
};
use chainbound::good_chains::{
    comparability_check_with_limit, greatest_good_chain_bruteforce_with_limit, greatest_good_chain_iter,
    GoodChainReport,
};
use chainbound::{Error, Expander, Poset, Selector, SizeLimit, SubsetBits};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "chainbound", version, about = "Good chains, chain bounding and Bourbaki-Witt fixpoints on finite posets")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a poset and run the comparability, union and greatest-good-chain checks.
    Check {
        poset: PathBuf,
        #[arg(long, default_value_t = SizeLimit::MAX)]
        exhaustive_n_limit: usize,
        /// Seed for the seeded-random selector.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the greatest good chain for a selector and its trace.
    Ggc {
        poset: PathBuf,
        selector: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Iter)]
        method: MethodArg,
    },
    /// Find the chain on which a supposed strict-upper-bound assignment fails.
    Cbc { poset: PathBuf, selector: PathBuf },
    /// Find a maximal element through an unbounded chain.
    Zorn { poset: PathBuf, selector: Option<PathBuf> },
    /// Bourbaki-Witt fixpoint of an inflationary map, or a reaching-definitions solution.
    Bw(BwArgs),
    /// Generate a seeded random poset.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        edge_prob: f64,
        #[arg(long)]
        seed: u64,
        /// Print the Hasse diagram as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("map").required(true).args(["h", "builtin"])))]
struct BwArgs {
    /// Poset file, or a dataflow file with `--builtin rd`.
    input: PathBuf,
    /// Table for h as {"h": [[x, h(x)], ...]}.
    #[arg(long)]
    h: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Iter,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    Rd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A command failure with its exit code.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
        }
    }

    fn violation(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            kind,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InternalLemmaViolation(_) => (1, "lemma-violation"),
            Error::InvalidSelector { .. } => (1, "invalid-selector"),
            Error::PreconditionFailed(_) => (1, "precondition-failed"),
            Error::SizeLimitExceeded { .. } => (2, "size-limit"),
            Error::MalformedInput { .. } => (2, "malformed-input"),
            Error::UnknownLabel(_) | Error::DuplicateLabel(_) => (2, "label"),
            Error::CycleDetected { .. } | Error::NotTransitive { .. } => (2, "invalid-order"),
            Error::UnknownStrategy(_) => (2, "unknown-strategy"),
            Error::EmptyPoset => (2, "empty-poset"),
            Error::NotAChain | Error::Usage(_) => (2, "usage"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// Text and JSON renderings of a successful command.
struct Report {
    text: String,
    json: Value,
    exit_code: i32,
}

pub fn run<I, T>(args: I) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                CliResult { exit_code: 0, stdout: rendered, stderr: String::new() }
            } else {
                CliResult { exit_code: 2, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let json_out = cli.json;
    match dispatch(cli.command) {
        Ok(report) => CliResult {
            exit_code: report.exit_code,
            stdout: if json_out {
                pretty(&report.json)
            } else {
                report.text
            },
            stderr: String::new(),
        },
        Err(f) => CliResult {
            exit_code: f.code,
            stdout: if json_out {
                pretty(&json!({"error": {"kind": f.kind, "message": f.message}}))
            } else {
                String::new()
            },
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Check {
            poset,
            exhaustive_n_limit,
            seed,
        } => cmd_check(&poset, exhaustive_n_limit, seed),
        Command::Ggc {
            poset,
            selector,
            method,
        } => cmd_ggc(&poset, &selector, method),
        Command::Cbc { poset, selector } => cmd_cbc(&poset, &selector),
        Command::Zorn { poset, selector } => cmd_zorn(&poset, selector.as_deref()),
        Command::Bw(args) => cmd_bw(&args),
        Command::Gen {
            n,
            edge_prob,
            seed,
            dot,
        } => cmd_gen(n, edge_prob, seed, dot),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(parse_poset(&read(path)?)?)
}

fn load_selector(path: &Path, p: &Poset) -> Result<Selector, Failure> {
    Ok(parse_selector(&read(path)?, p)?)
}

fn set_text(p: &Poset, s: &SubsetBits) -> String {
    format!("{{{}}}", p.sorted_labels(s).join(", "))
}

fn set_json(p: &Poset, s: &SubsetBits) -> Value {
    json!(p.sorted_labels(s))
}

fn trace_text(p: &Poset, trace: &[SubsetBits]) -> String {
    trace.iter().map(|c| format!("  {}\n", set_text(p, c))).collect()
}

fn strategy_name(f: &Selector) -> String {
    match f.strategy {
        chainbound::Strategy::MinStrictUb => "min-strict-ub".into(),
        chainbound::Strategy::MaxStrictUb => "max-strict-ub".into(),
        chainbound::Strategy::SeededRandom(s) => format!("seeded-random({s})"),
        chainbound::Strategy::None => "none".into(),
    }
}

fn cmd_check(path: &Path, limit: usize, seed: u64) -> Result<Report, Failure> {
    let limit = SizeLimit::new(limit)?;
    let p = load_poset(path)?;
    limit.check(&p)?;
    let mut text = format!("poset: {} elements, valid\n", p.len());
    let mut rows = Vec::new();
    let mut all_ok = true;
    for f in [Selector::min_strict_ub(), Selector::max_strict_ub(), Selector::seeded_random(seed)] {
        let name = strategy_name(&f);
        let g = Expander::from_selector(f.clone());
        let violation = comparability_check_with_limit(&p, &g, limit)?;
        let (brute, union_ok) = match greatest_good_chain_bruteforce_with_limit(&p, &g, limit) {
            Ok(r) => (Some(r), true),
            Err(Error::InternalLemmaViolation(_)) => (None, false),
            Err(e) => return Err(e.into()),
        };
        let iter = greatest_good_chain_iter(&p, &f);
        let agree = brute.as_ref().is_some_and(|b| b.chain == iter.chain);
        let ok = violation.is_none() && union_ok && agree;
        all_ok &= ok;
        let mark = |b: bool| if b { "ok" } else { "FAILED" };
        text.push_str(&format!(
            "selector {name}: ggc {}\n  comparability: {}\n  union good: {}\n  iter = brute: {}\n",
            set_text(&p, &iter.chain),
            mark(violation.is_none()),
            mark(union_ok),
            mark(agree),
        ));
        if let Some((a, b)) = &violation {
            text.push_str(&format!("  incomparable good chains: {} and {}\n", set_text(&p, a), set_text(&p, b)));
        }
        rows.push(json!({
            "selector": name,
            "ggc": set_json(&p, &iter.chain),
            "comparability": violation.as_ref().map(|(a, b)| json!([set_json(&p, a), set_json(&p, b)])),
            "union_good": union_ok,
            "iter_equals_brute": agree,
            "ok": ok,
        }));
    }
    Ok(Report {
        text,
        json: json!({"elements": p.len(), "checks": rows, "ok": all_ok}),
        exit_code: if all_ok { 0 } else { 1 },
    })
}

fn ggc_report(p: &Poset, r: &GoodChainReport, method: &str) -> Report {
    Report {
        text: format!("ggc ({method}): {}\ntrace:\n{}", set_text(p, &r.chain), trace_text(p, &r.trace)),
        json: json!({
            "method": method,
            "chain": set_json(p, &r.chain),
            "trace": r.trace.iter().map(|c| set_json(p, c)).collect::<Vec<_>>(),
        }),
        exit_code: 0,
    }
}

fn cmd_ggc(poset: &Path, selector: &Path, method: MethodArg) -> Result<Report, Failure> {
    let p = load_poset(poset)?;
    let f = load_selector(selector, &p)?;
    Ok(match method {
        MethodArg::Iter => ggc_report(&p, &greatest_good_chain_iter(&p, &f), "iter"),
        MethodArg::Brute => {
            let r = greatest_good_chain_bruteforce_with_limit(&p, &Expander::from_selector(f), SizeLimit::default())?;
            ggc_report(&p, &r, "brute")
        }
    })
}

fn cmd_cbc(poset: &Path, selector: &Path) -> Result<Report, Failure> {
    let p = load_poset(poset)?;
    let f = load_selector(selector, &p)?;
    let w = falsify_bound_assignment(&p, &f);
    let (verdict_text, verdict_json) = match w.verdict {
        Verdict::SelectorUndefined => ("selector undefined".to_string(), json!({"kind": "selector-undefined"})),
        Verdict::ValueNotStrictBound(v) => (
            format!("{} is not a strict upper bound", p.label(v)),
            json!({"kind": "value-not-strict-bound", "value": p.label(v)}),
        ),
    };
    Ok(Report {
        text: format!(
            "chain: {}\nverdict: {verdict_text}\ntrace:\n{}",
            set_text(&p, &w.chain),
            trace_text(&p, &w.trace)
        ),
        json: json!({
            "chain": set_json(&p, &w.chain),
            "verdict": verdict_json,
            "trace": w.trace.iter().map(|c| set_json(&p, c)).collect::<Vec<_>>(),
        }),
        exit_code: 0,
    })
}

fn cmd_zorn(poset: &Path, selector: Option<&Path>) -> Result<Report, Failure> {
    let p = load_poset(poset)?;
    let f = match selector {
        Some(path) => load_selector(path, &p)?,
        None => Selector::min_strict_ub(),
    };
    let (top, chain) = zorn_maximal(&p, &f)?;
    let confirmed = p.maximal_elements().contains(top) && p.upper_bounds(&chain).contains(top);
    Ok(Report {
        text: format!(
            "maximal: {}\nchain: {}\ncross-check: {}\n",
            p.label(top),
            set_text(&p, &chain),
            if confirmed { "ok" } else { "FAILED" }
        ),
        json: json!({"maximal": p.label(top), "chain": set_json(&p, &chain), "confirmed": confirmed}),
        exit_code: if confirmed { 0 } else { 1 },
    })
}

fn fixpoint_failure<T: std::fmt::Debug>(e: FixpointError<T>, show: impl Fn(&T) -> String) -> Failure {
    match e {
        FixpointError::NotInflationary { at, image } => Failure::violation(
            "not-inflationary",
            format!("h is not inflationary at {}: h(x) = {}", show(&at), show(&image)),
        ),
        FixpointError::OrderInconsistent { a, b } => Failure::violation(
            "order-inconsistent",
            format!("{} and {} are mutually below but not equal", show(&a), show(&b)),
        ),
        FixpointError::CapExceeded { cap } => {
            Failure::violation("cap-exceeded", format!("no fixed point within {cap} iterations"))
        }
        FixpointError::InvalidCap => Failure::usage("--cap must be positive"),
    }
}

fn cmd_bw(args: &BwArgs) -> Result<Report, Failure> {
    if let Some(Builtin::Rd) = args.builtin {
        return cmd_bw_dataflow(&args.input, args.cap);
    }
    let p = load_poset(&args.input)?;
    let h = parse_h_table(&read(args.h.as_deref().expect("clap requires --h or --builtin"))?, &p)?;
    let cpo = FinitePosetCpo::new(&p)?;
    let report = bw_fixpoint_finite(&cpo, &h, args.cap).map_err(|e| fixpoint_failure(e, |x| p.label(*x).to_owned()))?;
    let equal = bw_chain_equals_ggc(&p, &h)?;
    let trace: Vec<&str> = report.trace.iter().map(|&x| p.label(x)).collect();
    Ok(Report {
        text: format!(
            "fixpoint: {}\niterations: {}\ntrace:\n{}ggc equals iterates: {}\n",
            p.label(report.fixpoint),
            report.iterations,
            trace.iter().map(|l| format!("  {l}\n")).collect::<String>(),
            if equal { "yes" } else { "NO" }
        ),
        json: json!({
            "fixpoint": p.label(report.fixpoint),
            "iterations": report.iterations,
            "trace": trace,
            "ggc_equals_iterates": equal,
        }),
        exit_code: if equal { 0 } else { 1 },
    })
}

fn cmd_bw_dataflow(input: &Path, cap: usize) -> Result<Report, Failure> {
    let inst = parse_dataflow(&read(input)?)?;
    let sol = reaching_definitions(&inst, cap).map_err(|e| fixpoint_failure(e, |s| format!("{s:?}")))?;
    let defs = inst.defs();
    let names = |s: &SubsetBits| {
        let mut v: Vec<&str> = s.iter().map(|e| defs[e.index()].as_str()).collect();
        v.sort();
        v
    };
    let mut text = format!("iterations: {}\n", sol.iterations);
    let mut nodes = Vec::new();
    for (i, node) in inst.nodes().iter().enumerate() {
        text.push_str(&format!(
            "{}: in {{{}}} out {{{}}}\n",
            node.name,
            names(&sol.ins[i]).join(", "),
            names(&sol.outs[i]).join(", ")
        ));
        nodes.push(json!({"name": node.name, "in": names(&sol.ins[i]), "out": names(&sol.outs[i])}));
    }
    Ok(Report {
        text,
        json: json!({"iterations": sol.iterations, "nodes": nodes}),
        exit_code: 0,
    })
}

fn cmd_gen(n: usize, edge_prob: f64, seed: u64, dot: bool) -> Result<Report, Failure> {
    let p = random_poset(&GenConfig::new(n, edge_prob, seed)?);
    let text = if dot { to_dot(&p) } else { write_poset(&p) };
    let json = if dot {
        json!({"dot": text})
    } else {
        serde_json::from_str(&text).expect("writer emits JSON")
    };
    Ok(Report {
        text,
        json,
        exit_code: 0,
    })
}
