//! `pmp`: command-line front end. Reports are JSON on standard output.
//!
//! Exit codes: 0 success, 1 violated precondition (report on stdout),
//! 2 malformed input or usage.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pmp_core::action::{action_distance, support_witness, t_term, uniform_distance, Action, Word};
use pmp_core::conjugacy::{approximate_conjugacy, verify_witness, ConjugacyWitness, Mode};
use pmp_core::format::{parse_action, serialize_action, ActionDocument};
use pmp_core::gen;
use pmp_core::graphing::{build_schreier, edge_measure, hyperfinite_decomposition, incident_vertices, Strategy};
use pmp_core::irs::{
    cylinder_inclusion_exclusion, empirical_irs, irs_cylinder, irs_difference, CylinderQuery, EmpiricalIRS,
};
use pmp_core::joining::{amalgamate, join_over_irs, CommonAlgebra};
use pmp_core::logic::{check_theta_axioms, eval_formula_with, parse_formula, qe_failure_demo, Assignment, EvalOptions};
use pmp_core::measure::{generated_subalgebra, is_independent, tp_equal, Event, Independence, Subalgebra};
use pmp_core::rational::{fmt_q, parse_q, to_f64};
use pmp_core::{Error, Q};

#[derive(Parser)]
#[command(name = "pmp", version, about = "Exact tools for finite pmp actions of free groups")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Seed for random instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on exhaustive enumerations (quantifier domains, event lists).
    #[arg(long, global = true, default_value_t = 1 << 12)]
    max_enum: usize,
    /// Ask for an exact conjugacy (the default when no budget is given).
    #[arg(long, global = true, conflicts_with = "epsilon")]
    exact: bool,
    /// Error budget p/q for approximate conjugacy.
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// Component size bound M for decompositions.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Add labeled decimal approximations next to rationals.
    #[arg(long, global = true)]
    human: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Exact,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical IRS: mass of every rooted Schreier class.
    Irs {
        action: String,
        /// Write the plain `class mass` text form instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Compare two empirical IRSs.
    IrsEq { left: String, right: String },
    /// Cylinder mass of words fixed (`--fix`) and moved (`--supp`).
    Cyl {
        action: String,
        #[arg(long, default_value = "")]
        fix: String,
        #[arg(long, default_value = "")]
        supp: String,
    },
    /// Cut the Schreier graphing into components of at most `--bound` atoms.
    Decomp {
        action: String,
        /// Comma-separated words; defaults to the generators.
        #[arg(long)]
        words: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Uniform distance between two actions on the same space.
    Du { left: String, right: String },
    /// Support witness of a word.
    Support {
        action: String,
        #[arg(long)]
        word: String,
    },
    /// Conditional independence of named events over a generated subalgebra.
    Indep {
        action: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        over: String,
    },
    /// Equality of types of two event tuples over a generated subalgebra.
    Tp {
        action: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        over: String,
    },
    /// Independent joining over the common IRS factor.
    Join { left: String, right: String },
    /// Amalgam over common block labels.
    Amalg {
        left: String,
        right: String,
        /// Block label of each left atom, comma-separated.
        #[arg(long)]
        left_blocks: String,
        #[arg(long)]
        right_blocks: String,
        /// Words whose supports must be kept.
        #[arg(long, default_value = "")]
        words: String,
    },
    /// Approximate conjugacy witness (`--exact`, `--bound M`, `--epsilon p/q`).
    Conj {
        left: String,
        right: String,
        #[arg(long)]
        words: Option<String>,
    },
    /// Recheck a witness produced by `conj`.
    ConjVerify { left: String, right: String, witness: String },
    /// Axiom report of an action against an IRS (its own by default).
    CheckAxioms {
        action: String,
        /// IRS in `pmp irs --text` form.
        #[arg(long, conflicts_with = "against")]
        irs: Option<String>,
        /// Use the IRS of another action.
        #[arg(long)]
        against: Option<String>,
        /// Word sets, `;`-separated, each `,`-separated; defaults to each generator.
        #[arg(long)]
        sets: Option<String>,
    },
    /// Two models with equal IRS that a quantifier-free formula separates.
    DemoQe {
        left: String,
        right: String,
        #[arg(long, default_value = "1/4")]
        t: String,
        #[arg(long)]
        sets: Option<String>,
    },
    /// Evaluate a formula.
    Eval {
        action: String,
        formula: String,
        /// `x=EVENT` or `x=0,1,2`, repeatable.
        #[arg(long = "assign")]
        assign: Vec<String>,
        /// `NAME=EVENT,EVENT`: the subalgebra generated by named events.
        #[arg(long = "domain")]
        domain: Vec<String>,
    },
    /// Generate an action document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Cyclic { n: usize },
    Orbits { spec: String },
    Random { n: usize, k: usize },
    Coset { spec: String },
}

enum Output {
    Json(Value),
    Text(String),
    /// A report for a failed check: printed, exit code 1.
    Failed(Value),
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        message: msg.into(),
    }
}

fn read_doc(path: &str) -> Result<ActionDocument, Error> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    parse_action(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{path}: {message}"),
        },
        other => other,
    })
}

fn words(text: &str, names: &[String]) -> Result<Vec<Word>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Word::parse(t, names).map_err(usage))
        .collect()
}

fn words_or_generators(text: Option<&str>, action: &Action) -> Result<Vec<Word>, Error> {
    match text {
        Some(t) => words(t, action.names()),
        None => Ok((0..action.generator_count()).map(Word::generator).collect()),
    }
}

fn word_sets(text: Option<&str>, action: &Action) -> Result<Vec<Vec<Word>>, Error> {
    match text {
        Some(t) => t.split(';').map(|s| words(s, action.names())).collect(),
        None => Ok((0..action.generator_count()).map(|g| vec![Word::generator(g)]).collect()),
    }
}

fn named_events(doc: &ActionDocument, list: &str) -> Result<Vec<Event>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|n| doc.event(n).cloned().ok_or_else(|| usage(format!("no event named `{n}`"))))
        .collect()
}

fn over(doc: &ActionDocument, list: &str) -> Result<Subalgebra, Error> {
    generated_subalgebra(doc.action.space(), &named_events(doc, list)?)
}

fn labels(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("`{t}` is not a block label"))))
        .collect()
}

fn rational(text: &str) -> Result<Q, Error> {
    parse_q(text).map_err(|e| usage(e.0))
}

fn qs(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn irs_json(irs: &EmpiricalIRS) -> Value {
    serde_json::to_value(irs.entries()).unwrap()
}

fn run(cli: Cli) -> Result<Output, Error> {
    let o = &cli.opts;
    let cap = o.max_enum;
    Ok(match cli.command {
        Command::Irs { action, text } => {
            let irs = empirical_irs(&read_doc(&action)?.action);
            if text {
                Output::Text(irs.to_text())
            } else {
                Output::Json(json!({ "irs": irs_json(&irs) }))
            }
        }
        Command::IrsEq { left, right } => {
            let a = empirical_irs(&read_doc(&left)?.action);
            let b = empirical_irs(&read_doc(&right)?.action);
            let diff = irs_difference(&a, &b)
                .map(|(class, l, r)| json!({ "class": class, "left": qs(&l), "right": qs(&r) }));
            Output::Json(json!({ "equal": diff.is_none(), "difference": diff }))
        }
        Command::Cyl { action, fix, supp } => {
            let a = read_doc(&action)?.action;
            let q = CylinderQuery::new(words(&fix, a.names())?, words(&supp, a.names())?)?;
            let value = irs_cylinder(&a, &q)?;
            let expansion = cylinder_inclusion_exclusion(&a, &q)?;
            Output::Json(json!({ "value": qs(&value), "inclusion_exclusion": qs(&expansion) }))
        }
        Command::Decomp { action, words: ws, strategy } => {
            let a = read_doc(&action)?.action;
            let bound = o.bound.ok_or_else(|| usage("decomp needs --bound M"))?;
            let g = build_schreier(&a, &words_or_generators(ws.as_deref(), &a)?, &[])?;
            let strategy = match strategy {
                StrategyArg::Greedy => Strategy::Greedy,
                StrategyArg::Exact => Strategy::Exact,
                StrategyArg::Auto => Strategy::Auto,
            };
            let cert = hyperfinite_decomposition(&g, bound, strategy)?;
            cert.validate(&g)?;
            let m = edge_measure(&g, &cert.z)?;
            let v = incident_vertices(&g, &cert.z)?;
            Output::Json(json!({
                "bound": bound,
                "degree": g.degree(),
                "mu_e": qs(&m.mu_e),
                "mu_l": qs(&m.mu_l),
                "mu_r": qs(&m.mu_r),
                "incident_measure": qs(&a.space().measure(&v)),
                "cut": cert.z.pairs().filter(|(x, y)| x < y).collect::<Vec<_>>(),
                "components": cert.components,
            }))
        }
        Command::Du { left, right } => {
            let a = read_doc(&left)?.action;
            let b = read_doc(&right)?.action;
            let d = action_distance(&a, &b)?;
            let k = a.generator_count().max(b.generator_count());
            let (pa, pb) = (a.padded(k), b.padded(k));
            let per: Vec<Value> = (0..k)
                .map(|g| uniform_distance(a.space(), &pa.generators()[g], &pb.generators()[g]).map(|x| qs(&x)))
                .collect::<Result<_, _>>()?;
            Output::Json(json!({ "distance": qs(&d), "per_generator": per }))
        }
        Command::Support { action, word } => {
            let a = read_doc(&action)?.action;
            let w = Word::parse(&word, a.names()).map_err(usage)?;
            let p = a.evaluate_word(&w);
            let sw = support_witness(&p)?;
            let t = t_term(&p, &sw.a0);
            Output::Json(json!({
                "word": w.display(a.names()),
                "a0": sw.a0.to_vec(),
                "support": sw.support.to_vec(),
                "measure": qs(&a.space().measure(&sw.support)),
                "t_term_is_support": t == a.support(&w),
            }))
        }
        Command::Indep { action, a, b, over: c } => {
            let doc = read_doc(&action)?;
            let r = is_independent(doc.action.space(), &named_events(&doc, &a)?, &named_events(&doc, &b)?, &over(&doc, &c)?)?;
            match r {
                Independence::Independent => Output::Json(json!({ "independent": true })),
                Independence::Dependent { a, b, block, product, joint } => Output::Json(json!({
                    "independent": false,
                    "witness": { "a": a.to_vec(), "b": b.to_vec(), "block": block,
                                 "product": qs(&product), "joint": qs(&joint) },
                })),
            }
        }
        Command::Tp { action, a, b, over: c } => {
            let doc = read_doc(&action)?;
            let eq = tp_equal(doc.action.space(), &named_events(&doc, &a)?, &named_events(&doc, &b)?, &over(&doc, &c)?)?;
            Output::Json(json!({ "equal": eq }))
        }
        Command::Join { left, right } => {
            let a = read_doc(&left)?.action;
            let b = read_doc(&right)?.action;
            let j = join_over_irs(&a, &b)?;
            Output::Json(json!({
                "pairs": j.pairs,
                "document": serialize_action(&ActionDocument::new(j.action.clone())),
                "irs": irs_json(&empirical_irs(&j.action)),
            }))
        }
        Command::Amalg { left, right, left_blocks, right_blocks, words: ws } => {
            let a = read_doc(&left)?.action;
            let b = read_doc(&right)?.action;
            let z = CommonAlgebra::new(labels(&left_blocks)?, labels(&right_blocks)?)?;
            let am = amalgamate(&a, &b, &z, &words(&ws, a.names())?)?;
            Output::Json(json!({
                "pairs": am.pairs,
                "document": serialize_action(&ActionDocument::new(am.action.clone())),
            }))
        }
        Command::Conj { left, right, words: ws } => {
            let a = read_doc(&left)?.action;
            let b = read_doc(&right)?.action;
            let mode = match (&o.epsilon, o.bound) {
                (Some(e), bound) if !o.exact => Mode::Epsilon { epsilon: rational(e)?, bound },
                (_, Some(m)) if !o.exact => Mode::Bound(m),
                _ => Mode::Exact,
            };
            let w = approximate_conjugacy(&a, &b, &words_or_generators(ws.as_deref(), &a)?, &mode)?;
            Output::Json(serde_json::to_value(&w).unwrap())
        }
        Command::ConjVerify { left, right, witness } => {
            let a = read_doc(&left)?.action;
            let b = read_doc(&right)?.action;
            let text = fs::read_to_string(&witness).map_err(|e| usage(format!("{witness}: {e}")))?;
            let w = ConjugacyWitness::from_json(&text)?;
            let r = verify_witness(&w, &a, &b, &[]);
            let v = json!({ "ok": r.passed(), "report": r });
            if r.passed() {
                Output::Json(v)
            } else {
                Output::Failed(v)
            }
        }
        Command::CheckAxioms { action, irs, against, sets } => {
            let a = read_doc(&action)?.action;
            let theta = match (irs, against) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).map_err(|e| usage(format!("{path}: {e}")))?;
                    EmpiricalIRS::from_text(&text)?
                }
                (None, Some(path)) => empirical_irs(&read_doc(&path)?.action),
                (None, None) => empirical_irs(&a),
            };
            let r = check_theta_axioms(&a, &theta, &word_sets(sets.as_deref(), &a)?);
            Output::Json(json!({ "passed": r.passed(), "entries": r.entries }))
        }
        Command::DemoQe { left, right, t, sets } => {
            let k1 = read_doc(&left)?.action;
            let k2 = read_doc(&right)?.action;
            let names = if k1.generator_count() >= k2.generator_count() { &k1 } else { &k2 };
            let sets = word_sets(sets.as_deref(), names)?;
            let d = qe_failure_demo(&k1, &k2, &rational(&t)?, &sets)?;
            Output::Json(json!({
                "differs": d.differs(),
                "values": d.values,
                "blocks": d.blocks,
                "irs": irs_json(&d.irs),
                "alpha": serialize_action(&ActionDocument::new(d.alpha.clone())),
                "beta": serialize_action(&ActionDocument::new(d.beta.clone())),
            }))
        }
        Command::Eval { action, formula, assign, domain } => {
            let doc = read_doc(&action)?;
            let a = &doc.action;
            let f = parse_formula(&formula, a.names())?;
            let mut env = Assignment::new();
            for item in &assign {
                let (v, rhs) = item.split_once('=').ok_or_else(|| usage(format!("`{item}`: expected x=EVENT")))?;
                let e = match doc.event(rhs.trim()) {
                    Some(e) => e.clone(),
                    None => {
                        let ids = rhs
                            .split(',')
                            .map(str::trim)
                            .filter(|t| !t.is_empty())
                            .map(|t| t.parse::<usize>().map_err(|_| usage(format!("`{t}` is neither an event nor an atom id"))))
                            .collect::<Result<Vec<_>, _>>()?;
                        a.space().event(ids).map_err(|e| usage(e.to_string()))?
                    }
                };
                env.insert(v.trim().to_string(), e);
            }
            let mut opts = EvalOptions { cap, domains: BTreeMap::new() };
            for item in &domain {
                let (name, list) = item.split_once('=').ok_or_else(|| usage(format!("`{item}`: expected NAME=EVENTS")))?;
                opts.domains.insert(name.trim().to_string(), over(&doc, list)?);
            }
            let v = eval_formula_with(a, &f, &env, &opts)?;
            Output::Json(json!({ "formula": f.display(a.names()).to_string(), "value": qs(&v) }))
        }
        Command::Gen { kind } => {
            let a = match kind {
                GenKind::Cyclic { n } => gen::cyclic(n)?,
                GenKind::Orbits { spec } => gen::orbits(&spec)?,
                GenKind::Random { n, k } => gen::random(n, k, o.seed)?,
                GenKind::Coset { spec } => gen::coset_action(&spec)?,
            };
            Output::Text(serialize_action(&ActionDocument::new(a)))
        }
    })
}

/// Appends `(≈ decimal)` to every `p/q` string.
fn humanize(v: Value) -> Value {
    match v {
        Value::String(s) => match parse_q(&s) {
            Ok(x) if s.contains('/') => Value::String(format!("{s} (≈ {:.6})", to_f64(&x))),
            _ => Value::String(s),
        },
        Value::Array(xs) => Value::Array(xs.into_iter().map(humanize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, humanize(v))).collect()),
        other => other,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DomainMismatch(_) => "domain_mismatch",
        Error::InvalidSpace(_) => "invalid_space",
        Error::InvalidPermutation(_) => "invalid_permutation",
        Error::WeightMismatch { .. } => "weight_mismatch",
        Error::SplitMismatch { .. } => "split_mismatch",
        Error::InvalidEdgeSet(_) => "invalid_edge_set",
        Error::InvarianceViolation { .. } => "invariance_violation",
        Error::Resource { .. } => "resource",
        Error::IrsMismatch { .. } => "irs_mismatch",
        Error::Precondition(_) => "precondition",
        Error::NoIsomorphism(_) => "no_isomorphism",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::Internal(_) => "internal",
        Error::Parse { .. } => "parse",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let human = cli.opts.human;
    let print = |v: Value| {
        let v = if human { humanize(v) } else { v };
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&v).unwrap());
    };
    match run(cli) {
        Ok(Output::Json(v)) => {
            print(v);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            let _ = write!(std::io::stdout(), "{t}");
            ExitCode::SUCCESS
        }
        Ok(Output::Failed(v)) => {
            print(v);
            ExitCode::from(1)
        }
        Err(e) => {
            print(json!({ "error": error_kind(&e), "message": e.to_string() }));
            ExitCode::from(if e.is_precondition() { 1 } else { 2 })
        }
    }
}
