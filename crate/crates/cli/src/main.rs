//! `ssb`: command-line front end for surface singular braid words.
//!
//! Exit codes: 0 on success, 2 when a bounded search ends without an answer,
//! 1 on any error (bad input, failed replay, ...).

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ssb_core::classify::enumerate_csb2;
use ssb_core::rewrite::{
    equiv_search, equiv_search_open, normalize_csb2_certified, replay_certificate, CsbCache, RewriteCertificate,
    RewriteStep, RuleFilter, SearchConfig, SearchOutcome, Strictness,
};
use ssb_core::surface::{
    csb_membership, default_csb_budget, default_index_config, dnk_word, index_upper_bound, resolve, surface_invariants,
    twist_spin, ResolutionSign,
};
use ssb_core::tangle::{
    kauffman_bracket, reidemeister_simplify, Closure, MoveSet, PlanarDiagram, SimplifyBudget, SimplifyOutcome,
    TangleWord, TrivialityVerdict,
};
use ssb_core::word::{parse_closed, parse_word, ClosedSurfaceWord};

const EXIT_UNKNOWN: u8 = 2;

#[derive(Parser)]
#[command(name = "ssb", version, about = "Rewrite, resolve and classify surface singular braid words")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a closed word on 2 strands, with its derivation.
    Normalize {
        /// Closed word, e.g. "[b1 c1 a1 C1]_2".
        word: String,
    },
    /// Search for a derivation between two words.
    Equiv(EquivArgs),
    /// Marker resolution of a word as a tangle word.
    Resolve {
        word: String,
        #[arg(long, value_enum, default_value = "plus")]
        sign: Sign,
        /// Strand count for an open word (default: read `[..]_n`).
        #[arg(long)]
        strands: Option<usize>,
        /// Also print the PD code of the closure.
        #[arg(long)]
        pd: bool,
    },
    /// Certify both resolutions as unlinks.
    CsbCheck {
        word: String,
        #[arg(long)]
        max_exp: Option<usize>,
    },
    /// Euler characteristic and resolution component counts.
    Euler { word: String },
    /// Twist-spun closure of a crossing-only word.
    TwistSpin {
        /// Open word of c/C letters, e.g. "c1 c1 c1".
        word: String,
        #[arg(long)]
        strands: usize,
        #[arg(long, allow_hyphen_values = true)]
        twists: i64,
    },
    /// The tangle word D(n,k) and its plat closure.
    Dnk {
        n: usize,
        k: usize,
        #[arg(long)]
        emit_pd: bool,
    },
    /// Reidemeister simplification of a tangle closure or a PD code.
    Simplify(SimplifyArgs),
    /// Enumerate CSB words on 2 strands and sort them into classes.
    Classify {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Upper bound on the braid index from destabilizing searches.
    Index {
        word: String,
        #[arg(long)]
        max_exp: Option<usize>,
    },
    /// Re-run every step of a certificate file.
    Replay { file: String },
}

#[derive(Args)]
struct EquivArgs {
    u: String,
    v: String,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    max_exp: Option<usize>,
    /// Check the CSB condition at every closure move (default).
    #[arg(long, conflicts_with = "lax")]
    strict: bool,
    #[arg(long)]
    lax: bool,
    /// Rule subset, e.g. "A1-A13,C1" or "all".
    #[arg(long, default_value = "all")]
    rules: String,
    /// Treat both words as open words (no closure moves).
    #[arg(long)]
    open: bool,
    /// Strand count for open words.
    #[arg(long)]
    strands: Option<usize>,
}

#[derive(Args)]
struct SimplifyArgs {
    /// Tangle word such as "s1 s1 S2 e1", or a PD code with --pd.
    input: String,
    #[arg(long)]
    pd: bool,
    #[arg(long, default_value_t = 2)]
    strands: usize,
    #[arg(long, value_enum, default_value = "trace")]
    closure: ClosureArg,
    /// Allowed moves, e.g. "r1,r2".
    #[arg(long, default_value = "r1,r2,r3")]
    moves: String,
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long)]
    max_exp: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureArg {
    Trace,
    Plat,
}

type CliResult = Result<ExitCode, String>;

fn closed(text: &str) -> Result<ClosedSurfaceWord, String> {
    parse_closed(text).map_err(|e| format!("{text:?}: {e}"))
}

fn emit(json_mode: bool, value: serde_json::Value, text: String) {
    let out = if json_mode { serde_json::to_string_pretty(&value).unwrap() } else { text };
    // A closed pipe (`ssb classify | head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn verdict_line(v: &TrivialityVerdict) -> String {
    match v {
        TrivialityVerdict::Trivial(t) => format!("Trivial ({} -> 0 crossings, {})", t.start_crossings, t.counts),
        TrivialityVerdict::NonTrivial { components, normalized, .. } => {
            format!("NonTrivial ({components} components, normalized bracket {normalized})")
        }
        TrivialityVerdict::Unknown { expansions } => format!("Unknown after {expansions} expansions"),
    }
}

fn step_line(i: usize, s: &RewriteStep) -> String {
    format!("{:>3}. {} {} @{} {}", i + 1, s.rule, s.direction, s.position, s.params)
}

fn certificate_text(cert: &RewriteCertificate) -> String {
    let mut lines = vec![format!("{} -> {} in {} steps", cert.start_closed(), cert.end_closed(), cert.steps.len())];
    match cert.intermediate_words() {
        Ok(words) => {
            for (i, (s, w)) in cert.steps.iter().zip(words.iter().skip(1)).enumerate() {
                lines.push(format!("{}   => {}", step_line(i, s), ClosedSurfaceWord::new(w.clone())));
            }
        }
        Err(_) => lines.extend(cert.steps.iter().enumerate().map(|(i, s)| step_line(i, s))),
    }
    lines.join("\n")
}

fn normalize(json_mode: bool, word: &str) -> CliResult {
    let w = closed(word)?;
    let (form, cert) = normalize_csb2_certified(&w).map_err(|e| e.to_string())?;
    emit(
        json_mode,
        json!({ "word": w.to_string(), "normal_form": form.to_string(), "certificate": cert }),
        format!("{form}\n{}", certificate_text(&cert)),
    );
    Ok(ExitCode::SUCCESS)
}

fn equiv(json_mode: bool, a: &EquivArgs) -> CliResult {
    let rules = RuleFilter::parse(&a.rules)?;
    let outcome = if a.open {
        let strands = a.strands.ok_or("--open needs --strands")?;
        let u = parse_word(&a.u, strands).map_err(|e| e.to_string())?;
        let v = parse_word(&a.v, strands).map_err(|e| e.to_string())?;
        let mut cfg = config(a, u.len(), v.len(), rules);
        cfg.strictness = Strictness::Lax;
        equiv_search_open(&u, &v, &cfg)
    } else {
        let (u, v) = (closed(&a.u)?, closed(&a.v)?);
        let cfg = config(a, u.letters().len(), v.letters().len(), rules);
        equiv_search(&u, &v, &cfg)
    };
    match outcome {
        SearchOutcome::Found(cert) => {
            emit(json_mode, json!({ "result": "found", "certificate": cert }), certificate_text(&cert));
            Ok(ExitCode::SUCCESS)
        }
        SearchOutcome::Unknown { expansions, exhausted } => {
            let why = if exhausted { "search space exhausted" } else { "budget exhausted" };
            emit(
                json_mode,
                json!({ "result": "unknown", "expansions": expansions, "exhausted": exhausted }),
                format!("Unknown: {why} after {expansions} expansions"),
            );
            Ok(ExitCode::from(EXIT_UNKNOWN))
        }
    }
}

fn config(a: &EquivArgs, len_u: usize, len_v: usize, rules: RuleFilter) -> SearchConfig {
    let mut cfg = SearchConfig::for_words(len_u, len_v);
    cfg.rules = rules;
    if let Some(l) = a.max_len {
        cfg.max_word_length = l;
    }
    if let Some(e) = a.max_exp {
        cfg.max_expansions = e;
    }
    cfg.strictness = if a.lax { Strictness::Lax } else { Strictness::Strict };
    cfg
}

fn resolve_cmd(json_mode: bool, word: &str, sign: Sign, strands: Option<usize>, pd: bool) -> CliResult {
    let w = match strands {
        Some(n) => parse_word(word, n).map_err(|e| e.to_string())?,
        None => closed(word)?.into_word(),
    };
    let sign = match sign {
        Sign::Plus => ResolutionSign::Plus,
        Sign::Minus => ResolutionSign::Minus,
    };
    let t = resolve(&w, sign);
    let d = PlanarDiagram::from_tangle(&t, Closure::Trace).map_err(|e| e.to_string())?;
    let bracket = kauffman_bracket(&t, Closure::Trace).map_err(|e| e.to_string())?;
    let mut text = format!(
        "L{sign}: {t}\nstrands {}, crossings {}, components {}\nbracket {bracket}",
        t.strands(),
        d.crossing_count(),
        d.component_count()
    );
    if pd {
        text.push_str(&format!("\n{}", d.to_pd_string()));
    }
    emit(
        json_mode,
        json!({
            "sign": sign.to_string(),
            "tangle": t.to_string(),
            "strands": t.strands(),
            "crossings": d.crossing_count(),
            "components": d.component_count(),
            "bracket": bracket.to_pairs_string(),
            "pd": pd.then(|| d.to_pd_string()),
        }),
        text,
    );
    Ok(ExitCode::SUCCESS)
}

fn csb_check(json_mode: bool, word: &str, max_exp: Option<usize>) -> CliResult {
    let w = closed(word)?;
    let mut budget = default_csb_budget(w.word());
    if let Some(e) = max_exp {
        budget.max_expansions = e;
    }
    let (plus, minus) = csb_membership(&w, budget);
    let member = plus.is_trivial() && minus.is_trivial();
    let undecided = !member && !matches!(plus, TrivialityVerdict::NonTrivial { .. }) && !matches!(minus, TrivialityVerdict::NonTrivial { .. });
    let summary = if member {
        "in CSB"
    } else if undecided {
        "undecided"
    } else {
        "not in CSB"
    };
    emit(
        json_mode,
        json!({ "word": w.to_string(), "csb": summary, "plus": plus, "minus": minus }),
        format!("{w}: {summary}\nL+ {}\nL- {}", verdict_line(&plus), verdict_line(&minus)),
    );
    Ok(if undecided { ExitCode::from(EXIT_UNKNOWN) } else { ExitCode::SUCCESS })
}

fn euler(json_mode: bool, word: &str) -> CliResult {
    let w = closed(word)?;
    let inv = surface_invariants(&w);
    emit(
        json_mode,
        json!({ "word": w.to_string(), "invariants": inv }),
        format!(
            "{w}: chi = {} (L+ {} components, L- {} components, {} saddles)",
            inv.euler_characteristic, inv.components_plus, inv.components_minus, inv.saddle_count
        ),
    );
    Ok(ExitCode::SUCCESS)
}

fn twist(json_mode: bool, word: &str, strands: usize, twists: i64) -> CliResult {
    let k = parse_word(word, strands).map_err(|e| e.to_string())?;
    let w = twist_spin(&k, twists).map_err(|e| e.to_string())?;
    let inv = surface_invariants(&w);
    emit(
        json_mode,
        json!({ "word": w.to_string(), "invariants": inv }),
        format!("{w}\nchi = {}", inv.euler_characteristic),
    );
    Ok(ExitCode::SUCCESS)
}

fn dnk(json_mode: bool, n: usize, k: usize, emit_pd: bool) -> CliResult {
    let t = dnk_word(n, k).map_err(|e| e.to_string())?;
    let d = PlanarDiagram::from_tangle(&t, Closure::Plat).map_err(|e| e.to_string())?;
    let mut text = format!("D({n},{k}) = {t}\ncrossings {}, components {}", d.crossing_count(), d.component_count());
    if emit_pd {
        text.push_str(&format!("\n{}", d.to_pd_string()));
    }
    emit(
        json_mode,
        json!({
            "word": t.to_string(),
            "crossings": d.crossing_count(),
            "components": d.component_count(),
            "pd": emit_pd.then(|| d.to_pd_string()),
        }),
        text,
    );
    Ok(ExitCode::SUCCESS)
}

fn simplify(json_mode: bool, a: &SimplifyArgs) -> CliResult {
    let d = if a.pd {
        PlanarDiagram::parse_pd(&a.input).map_err(|e| e.to_string())?
    } else {
        let t = TangleWord::parse(&a.input, a.strands).map_err(|e| e.to_string())?;
        let closure = match a.closure {
            ClosureArg::Trace => Closure::Trace,
            ClosureArg::Plat => Closure::Plat,
        };
        PlanarDiagram::from_tangle(&t, closure).map_err(|e| e.to_string())?
    };
    let moves = MoveSet::parse(&a.moves).ok_or_else(|| format!("bad move set {:?}", a.moves))?;
    let mut budget = SimplifyBudget::for_diagram(&d);
    if let Some(c) = a.max_crossings {
        budget.max_crossings = c;
    }
    if let Some(e) = a.max_exp {
        budget.max_expansions = e;
    }
    match reidemeister_simplify(&d, moves, budget) {
        SimplifyOutcome::Unlinked(trace) => {
            let loops = trace.end.component_count();
            emit(
                json_mode,
                json!({ "result": "unlinked", "components": loops, "trace": trace }),
                format!(
                    "unlinked: {} -> 0 crossings in {} moves ({}), {loops} components",
                    trace.start_crossings,
                    trace.moves.len(),
                    trace.counts
                ),
            );
            Ok(ExitCode::SUCCESS)
        }
        SimplifyOutcome::Unknown { expansions } => {
            emit(
                json_mode,
                json!({ "result": "unknown", "expansions": expansions }),
                format!("Unknown after {expansions} expansions"),
            );
            Ok(ExitCode::from(EXIT_UNKNOWN))
        }
    }
}

fn classify(json_mode: bool, max_len: usize) -> CliResult {
    let report = enumerate_csb2(max_len);
    emit(json_mode, serde_json::to_value(&report).unwrap(), report.to_string());
    Ok(ExitCode::SUCCESS)
}

fn index(json_mode: bool, word: &str, max_exp: Option<usize>) -> CliResult {
    let w = closed(word)?;
    let mut cfg = default_index_config(&w);
    if let Some(e) = max_exp {
        cfg.max_expansions = e;
    }
    let bound = index_upper_bound(&w, &cfg);
    emit(
        json_mode,
        json!({ "word": w.to_string(), "strands": w.closure_strands(), "index_upper_bound": bound }),
        format!("{w}: braid index <= {bound}"),
    );
    Ok(ExitCode::SUCCESS)
}

fn replay(json_mode: bool, file: &str) -> CliResult {
    let text = fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{file}: {e}"))?;
    // Accept either a bare certificate or the output of `equiv --json`.
    let inner = value.get("certificate").cloned().unwrap_or(value);
    let cert: RewriteCertificate = serde_json::from_value(inner).map_err(|e| format!("{file}: {e}"))?;
    match replay_certificate(&cert, &mut CsbCache::default()) {
        Ok(report) => {
            emit(
                json_mode,
                json!({ "valid": true, "steps": report.steps, "closure_checks": report.closure_checks }),
                format!(
                    "valid: {} -> {} ({} steps, {} closure moves checked)",
                    cert.start_closed(),
                    cert.end_closed(),
                    report.steps,
                    report.closure_checks
                ),
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(f) => {
            emit(json_mode, json!({ "valid": false, "step": f.step, "error": f.error.to_string() }), format!("invalid: {f}"));
            Ok(ExitCode::FAILURE)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let j = cli.json;
    match &cli.command {
        Command::Normalize { word } => normalize(j, word),
        Command::Equiv(a) => equiv(j, a),
        Command::Resolve { word, sign, strands, pd } => resolve_cmd(j, word, *sign, *strands, *pd),
        Command::CsbCheck { word, max_exp } => csb_check(j, word, *max_exp),
        Command::Euler { word } => euler(j, word),
        Command::TwistSpin { word, strands, twists } => twist(j, word, *strands, *twists),
        Command::Dnk { n, k, emit_pd } => dnk(j, *n, *k, *emit_pd),
        Command::Simplify(a) => simplify(j, a),
        Command::Classify { max_len } => classify(j, *max_len),
        Command::Index { word, max_exp } => index(j, word, *max_exp),
        Command::Replay { file } => replay(j, file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
