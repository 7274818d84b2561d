//! A finite evaluator for continuous formulas over measure algebras with a
//! group action.
//!
//! Terms denote events, formulas denote rationals in `[0, 1]` (affine
//! combinations may leave that range; nothing clamps them). Quantifiers
//! range over every event of the space or every element of a named
//! subalgebra, enumerated up to a cap.
//!
//! Text syntax, one s-expression per formula:
//!
//! ```text
//! term    := VAR | 0 | 1 | (or T T) | (and T T) | (not T) | (diff T T)
//!          | (sym T T) | (apply WORD T) | (t WORD T)
//! formula := RATIONAL | (mu T) | (d T T) | (neg F) | (absdiff F F)
//!          | (add F F ...) | (scale RATIONAL F) | (min F F ...) | (max F F ...)
//!          | (sup VAR F) | (inf VAR F) | (sup VAR @DOMAIN F) | (inf VAR @DOMAIN F)
//! ```
//!
//! `WORD` uses the generator names of the action, e.g. `g0*g1^-1`; quote it
//! as `"g0 g1^-1"` to use spaces. `(t w x)` is
//! `w⁻¹(x ∖ wx) ∨ (x ∖ wx) ∨ w(x ∖ wx)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::action::{support_witness, t_term, action_distance, Action, Word};
use crate::error::{Error, Result};
use crate::irs::{empirical_irs, irs_equal, irs_supp_cylinder, EmpiricalIRS};
use crate::measure::{AtomSpace, Event, Subalgebra};
use crate::rational::{fmt_q, Q};

/// Default cap on the size of a quantifier domain.
pub const DEFAULT_CAP: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Or(Box<Term>, Box<Term>),
    And(Box<Term>, Box<Term>),
    Not(Box<Term>),
    Diff(Box<Term>, Box<Term>),
    Sym(Box<Term>, Box<Term>),
    Apply(Word, Box<Term>),
    TSupp(Word, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Full,
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Const(Q),
    Mu(Term),
    D(Term, Term),
    Neg(Box<Formula>),
    AbsDiff(Box<Formula>, Box<Formula>),
    Add(Vec<Formula>),
    Scale(Q, Box<Formula>),
    Min(Vec<Formula>),
    Max(Vec<Formula>),
    Sup(String, Domain, Box<Formula>),
    Inf(String, Domain, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn apply(w: Word, t: Term) -> Term {
        Term::Apply(w, Box::new(t))
    }

    pub fn t(w: Word, t: Term) -> Term {
        Term::TSupp(w, Box::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    pub fn sym(a: Term, b: Term) -> Term {
        Term::Sym(Box::new(a), Box::new(b))
    }

    /// Lipschitz constant in any one variable, for `d_μ` on events.
    pub fn variable_modulus(&self) -> Q {
        match self {
            Term::Var(_) => Q::one(),
            Term::Zero | Term::One => Q::zero(),
            Term::Not(t) | Term::Apply(_, t) => t.variable_modulus(),
            Term::Or(a, b) | Term::And(a, b) | Term::Diff(a, b) | Term::Sym(a, b) => {
                a.variable_modulus() + b.variable_modulus()
            }
            Term::TSupp(_, t) => Q::from_integer(6.into()) * t.variable_modulus(),
        }
    }

    /// Bound on `μ(τ^α(ā) △ τ^β(ā))` per unit of `d_u(α, β)`.
    pub fn action_modulus(&self) -> Q {
        match self {
            Term::Var(_) | Term::Zero | Term::One => Q::zero(),
            Term::Not(t) => t.action_modulus(),
            Term::Or(a, b) | Term::And(a, b) | Term::Diff(a, b) | Term::Sym(a, b) => {
                a.action_modulus() + b.action_modulus()
            }
            Term::Apply(w, t) => t.action_modulus() + Q::from_integer((w.len() as i64).into()),
            Term::TSupp(w, t) => {
                let len = Q::from_integer((w.len() as i64).into());
                Q::from_integer(6.into()) * t.action_modulus() + Q::from_integer(5.into()) * len
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, op: &str, a: &Term, b: &Term| {
            write!(f, "({op} ")?;
            a.write(f, names)?;
            write!(f, " ")?;
            b.write(f, names)?;
            write!(f, ")")
        };
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Or(a, b) => bin(f, "or", a, b),
            Term::And(a, b) => bin(f, "and", a, b),
            Term::Diff(a, b) => bin(f, "diff", a, b),
            Term::Sym(a, b) => bin(f, "sym", a, b),
            Term::Not(a) => {
                write!(f, "(not ")?;
                a.write(f, names)?;
                write!(f, ")")
            }
            Term::Apply(w, a) | Term::TSupp(w, a) => {
                let op = if matches!(self, Term::Apply(..)) { "apply" } else { "t" };
                write!(f, "({op} {} ", w.display(names))?;
                a.write(f, names)?;
                write!(f, ")")
            }
        }
    }
}

impl Formula {
    pub fn mu(t: Term) -> Formula {
        Formula::Mu(t)
    }

    pub fn d(a: Term, b: Term) -> Formula {
        Formula::D(a, b)
    }

    pub fn sup(var: &str, body: Formula) -> Formula {
        Formula::Sup(var.to_string(), Domain::Full, Box::new(body))
    }

    pub fn inf(var: &str, body: Formula) -> Formula {
        Formula::Inf(var.to_string(), Domain::Full, Box::new(body))
    }

    /// Lipschitz constant in any one free variable.
    pub fn variable_modulus(&self) -> Q {
        self.modulus(&Term::variable_modulus)
    }

    /// Lipschitz constant in `d_u(α, β)` at a fixed assignment.
    pub fn action_modulus(&self) -> Q {
        self.modulus(&Term::action_modulus)
    }

    fn modulus(&self, term: &dyn Fn(&Term) -> Q) -> Q {
        match self {
            Formula::Const(_) => Q::zero(),
            Formula::Mu(t) => term(t),
            Formula::D(a, b) => term(a) + term(b),
            Formula::Neg(f) => f.modulus(term),
            Formula::AbsDiff(a, b) => a.modulus(term) + b.modulus(term),
            Formula::Add(fs) => fs.iter().map(|f| f.modulus(term)).sum(),
            Formula::Scale(c, f) => c.abs() * f.modulus(term),
            Formula::Min(fs) | Formula::Max(fs) => fs.iter().map(|f| f.modulus(term)).max().unwrap_or_else(Q::zero),
            Formula::Sup(_, _, f) | Formula::Inf(_, _, f) => f.modulus(term),
        }
    }

    /// Renders in the text syntax, with words spelled by `names`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a Formula, &'a [String]);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(f, self.1)
            }
        }
        Show(self, names)
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, fs: &[&Formula]| {
            write!(f, "({op}")?;
            for g in fs {
                write!(f, " ")?;
                g.write(f, names)?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Const(c) => write!(f, "{}", fmt_q(c)),
            Formula::Mu(t) => {
                write!(f, "(mu ")?;
                t.write(f, names)?;
                write!(f, ")")
            }
            Formula::D(a, b) => {
                write!(f, "(d ")?;
                a.write(f, names)?;
                write!(f, " ")?;
                b.write(f, names)?;
                write!(f, ")")
            }
            Formula::Neg(g) => list(f, "neg", &[g]),
            Formula::AbsDiff(a, b) => list(f, "absdiff", &[a, b]),
            Formula::Add(fs) => list(f, "add", &fs.iter().collect::<Vec<_>>()),
            Formula::Scale(c, g) => {
                write!(f, "(scale {} ", fmt_q(c))?;
                g.write(f, names)?;
                write!(f, ")")
            }
            Formula::Min(fs) => list(f, "min", &fs.iter().collect::<Vec<_>>()),
            Formula::Max(fs) => list(f, "max", &fs.iter().collect::<Vec<_>>()),
            Formula::Sup(v, d, g) | Formula::Inf(v, d, g) => {
                let op = if matches!(self, Formula::Sup(..)) { "sup" } else { "inf" };
                write!(f, "({op} {v} ")?;
                if let Domain::Named(n) = d {
                    write!(f, "@{n} ")?;
                }
                g.write(f, names)?;
                write!(f, ")")
            }
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn read_sexp(text: &str) -> Result<Sexp> {
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 1)];
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\n' => line += 1,
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            '(' => stack.push((Vec::new(), line)),
            ')' => {
                let (items, at) = stack.pop().unwrap();
                let parent = stack.last_mut().ok_or_else(|| Error::parse(line, "unbalanced `)`"))?;
                parent.0.push(Sexp::List(items, at));
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c)
                        }
                        None => return Err(Error::parse(line, "unterminated string")),
                    }
                }
                stack.last_mut().unwrap().0.push(Sexp::Atom(s, line));
            }
            c if c.is_whitespace() => {}
            c => {
                let mut s = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == '"' || d == ';' {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                stack.last_mut().unwrap().0.push(Sexp::Atom(s, line));
            }
        }
    }
    if stack.len() != 1 {
        return Err(Error::parse(line, "unbalanced `(`"));
    }
    let mut top = stack.pop().unwrap().0;
    match top.len() {
        1 => Ok(top.pop().unwrap()),
        0 => Err(Error::parse(1, "empty formula")),
        _ => Err(Error::parse(top[1].line(), "trailing input after formula")),
    }
}

fn is_var(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

struct Parser<'a> {
    names: &'a [String],
}

impl Parser<'_> {
    fn word(&self, s: &Sexp) -> Result<Word> {
        match s {
            Sexp::Atom(text, line) => Word::parse(text, self.names).map_err(|m| Error::parse(*line, m)),
            Sexp::List(_, line) => Err(Error::parse(*line, "expected a word")),
        }
    }

    fn rational(&self, s: &Sexp) -> Result<Q> {
        match s {
            Sexp::Atom(text, line) => crate::rational::parse_q(text).map_err(|e| Error::parse(*line, e.0)),
            Sexp::List(_, line) => Err(Error::parse(*line, "expected a rational")),
        }
    }

    fn term(&self, s: &Sexp) -> Result<Term> {
        match s {
            Sexp::Atom(a, line) => match a.as_str() {
                "0" => Ok(Term::Zero),
                "1" => Ok(Term::One),
                v if is_var(v) => Ok(Term::Var(v.to_string())),
                other => Err(Error::parse(*line, format!("`{other}` is not a term"))),
            },
            Sexp::List(items, line) => {
                let (head, args) = split_head(items, *line)?;
                let arity = |k: usize| {
                    if args.len() == k {
                        Ok(())
                    } else {
                        Err(Error::parse(*line, format!("`{head}` takes {k} arguments, got {}", args.len())))
                    }
                };
                let two = |f: fn(Box<Term>, Box<Term>) -> Term| -> Result<Term> {
                    arity(2)?;
                    Ok(f(Box::new(self.term(&args[0])?), Box::new(self.term(&args[1])?)))
                };
                match head {
                    "or" => two(Term::Or),
                    "and" => two(Term::And),
                    "diff" => two(Term::Diff),
                    "sym" => two(Term::Sym),
                    "not" => {
                        arity(1)?;
                        Ok(Term::Not(Box::new(self.term(&args[0])?)))
                    }
                    "apply" | "t" => {
                        arity(2)?;
                        let w = self.word(&args[0])?;
                        let t = Box::new(self.term(&args[1])?);
                        Ok(if head == "apply" { Term::Apply(w, t) } else { Term::TSupp(w, t) })
                    }
                    other => Err(Error::parse(*line, format!("unknown term operator `{other}`"))),
                }
            }
        }
    }

    fn formula(&self, s: &Sexp) -> Result<Formula> {
        let (items, line) = match s {
            Sexp::Atom(..) => return Ok(Formula::Const(self.rational(s)?)),
            Sexp::List(items, line) => (items, *line),
        };
        let (head, args) = split_head(items, line)?;
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::parse(line, format!("`{head}` takes {k} arguments, got {}", args.len())))
            }
        };
        let many = || -> Result<Vec<Formula>> {
            if args.is_empty() {
                return Err(Error::parse(line, format!("`{head}` needs at least one argument")));
            }
            args.iter().map(|a| self.formula(a)).collect()
        };
        match head {
            "const" => {
                arity(1)?;
                Ok(Formula::Const(self.rational(&args[0])?))
            }
            "mu" => {
                arity(1)?;
                Ok(Formula::Mu(self.term(&args[0])?))
            }
            "d" => {
                arity(2)?;
                Ok(Formula::D(self.term(&args[0])?, self.term(&args[1])?))
            }
            "neg" => {
                arity(1)?;
                Ok(Formula::Neg(Box::new(self.formula(&args[0])?)))
            }
            "absdiff" => {
                arity(2)?;
                Ok(Formula::AbsDiff(Box::new(self.formula(&args[0])?), Box::new(self.formula(&args[1])?)))
            }
            "add" => Ok(Formula::Add(many()?)),
            "scale" => {
                arity(2)?;
                Ok(Formula::Scale(self.rational(&args[0])?, Box::new(self.formula(&args[1])?)))
            }
            "min" => Ok(Formula::Min(many()?)),
            "max" => Ok(Formula::Max(many()?)),
            "sup" | "inf" => {
                let (var, domain, body) = match args.len() {
                    2 => (&args[0], Domain::Full, &args[1]),
                    3 => match &args[1] {
                        Sexp::Atom(d, _) if d.starts_with('@') && d.len() > 1 => {
                            (&args[0], Domain::Named(d[1..].to_string()), &args[2])
                        }
                        other => return Err(Error::parse(other.line(), "expected a domain `@NAME`")),
                    },
                    k => return Err(Error::parse(line, format!("`{head}` takes 2 or 3 arguments, got {k}"))),
                };
                let var = match var {
                    Sexp::Atom(v, _) if is_var(v) => v.clone(),
                    other => return Err(Error::parse(other.line(), "expected a variable name")),
                };
                let body = Box::new(self.formula(body)?);
                Ok(if head == "sup" {
                    Formula::Sup(var, domain, body)
                } else {
                    Formula::Inf(var, domain, body)
                })
            }
            other => Err(Error::parse(line, format!("unknown formula operator `{other}`"))),
        }
    }
}

fn split_head(items: &[Sexp], line: usize) -> Result<(&str, &[Sexp])> {
    match items.split_first() {
        Some((Sexp::Atom(h, _), rest)) => Ok((h.as_str(), rest)),
        _ => Err(Error::parse(line, "expected an operator")),
    }
}

/// Parses a formula; words are resolved against `names`.
pub fn parse_formula(text: &str, names: &[String]) -> Result<Formula> {
    Parser { names }.formula(&read_sexp(text)?)
}

// ------------------------------------------------------------- evaluation

pub type Assignment = BTreeMap<String, Event>;

/// Quantifier cap and named subalgebra domains.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub cap: usize,
    pub domains: BTreeMap<String, Subalgebra>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            cap: DEFAULT_CAP,
            domains: BTreeMap::new(),
        }
    }
}

struct Evaluator<'a> {
    action: &'a Action,
    opts: &'a EvalOptions,
    domains: BTreeMap<String, Vec<Event>>,
}

impl Evaluator<'_> {
    fn term(&self, t: &Term, env: &Assignment) -> Result<Event> {
        let n = self.action.len();
        Ok(match t {
            Term::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| Error::Precondition(format!("variable `{v}` is not assigned")))?,
            Term::Zero => Event::empty(n),
            Term::One => Event::full(n),
            Term::Or(a, b) => self.term(a, env)?.union(&self.term(b, env)?),
            Term::And(a, b) => self.term(a, env)?.intersection(&self.term(b, env)?),
            Term::Diff(a, b) => self.term(a, env)?.difference(&self.term(b, env)?),
            Term::Sym(a, b) => self.term(a, env)?.sym_diff(&self.term(b, env)?),
            Term::Not(a) => self.term(a, env)?.complement(),
            Term::Apply(w, a) => self.action.image_event(w, &self.term(a, env)?),
            Term::TSupp(w, a) => t_term(&self.action.evaluate_word(w), &self.term(a, env)?),
        })
    }

    fn formula(&mut self, f: &Formula, env: &mut Assignment) -> Result<Q> {
        let space = self.action.space();
        Ok(match f {
            Formula::Const(c) => c.clone(),
            Formula::Mu(t) => space.measure(&self.term(t, env)?),
            Formula::D(a, b) => space.measure(&self.term(a, env)?.sym_diff(&self.term(b, env)?)),
            Formula::Neg(g) => Q::one() - self.formula(g, env)?,
            Formula::AbsDiff(a, b) => (self.formula(a, env)? - self.formula(b, env)?).abs(),
            Formula::Add(fs) => {
                let mut acc = Q::zero();
                for g in fs {
                    acc += self.formula(g, env)?;
                }
                acc
            }
            Formula::Scale(c, g) => c * self.formula(g, env)?,
            Formula::Min(fs) | Formula::Max(fs) => {
                let mut vals = Vec::with_capacity(fs.len());
                for g in fs {
                    vals.push(self.formula(g, env)?);
                }
                let it = vals.into_iter();
                if matches!(f, Formula::Min(_)) { it.min() } else { it.max() }.unwrap()
            }
            Formula::Sup(v, d, body) | Formula::Inf(v, d, body) => {
                let events = self.domain(d)?;
                let shadowed = env.remove(v);
                let mut best: Option<Q> = None;
                let sup = matches!(f, Formula::Sup(..));
                for e in events {
                    env.insert(v.clone(), e);
                    let val = self.formula(body, env)?;
                    best = Some(match best {
                        None => val,
                        Some(b) if sup => b.max(val),
                        Some(b) => b.min(val),
                    });
                }
                env.remove(v);
                if let Some(old) = shadowed {
                    env.insert(v.clone(), old);
                }
                best.expect("domains contain at least the empty event")
            }
        })
    }

    fn domain(&mut self, d: &Domain) -> Result<Vec<Event>> {
        let key = match d {
            Domain::Full => String::new(),
            Domain::Named(n) => n.clone(),
        };
        if let Some(es) = self.domains.get(&key) {
            return Ok(es.clone());
        }
        let events = match d {
            Domain::Full => self.action.space().all_events(self.opts.cap)?,
            Domain::Named(n) => {
                let alg = self
                    .opts
                    .domains
                    .get(n)
                    .ok_or_else(|| Error::Precondition(format!("unknown quantifier domain `{n}`")))?;
                if alg.universe() != self.action.len() {
                    return Err(Error::DomainMismatch(format!("domain `{n}` lives on another space")));
                }
                alg.elements(self.opts.cap)?
            }
        };
        self.domains.insert(key, events.clone());
        Ok(events)
    }
}

/// Evaluates with the default cap and no named domains.
pub fn eval_formula(action: &Action, f: &Formula, assignment: &Assignment) -> Result<Q> {
    eval_formula_with(action, f, assignment, &EvalOptions::default())
}

pub fn eval_formula_with(action: &Action, f: &Formula, assignment: &Assignment, opts: &EvalOptions) -> Result<Q> {
    for (v, e) in assignment {
        action
            .space()
            .check(e)
            .map_err(|_| Error::DomainMismatch(format!("variable `{v}` is not an event of the space")))?;
    }
    let mut ev = Evaluator {
        action,
        opts,
        domains: BTreeMap::new(),
    };
    ev.formula(f, &mut assignment.clone())
}

// ---------------------------------------------------------------- axioms

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomEntry {
    pub name: String,
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub target: Q,
    pub pass: bool,
    /// On failure, an assignment (variable → atom ids) realizing `value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// `sup_{a_1..a_k} μ(t_{γ_1}(a_1) ∧ … ∧ t_{γ_k}(a_k))` over the full algebra.
pub fn theta_formula(words: &[Word]) -> Formula {
    let vars: Vec<String> = (0..words.len()).map(|i| format!("a{i}")).collect();
    let body = words
        .iter()
        .zip(&vars)
        .map(|(w, v)| Term::t(w.clone(), Term::var(v)))
        .reduce(Term::and)
        .unwrap_or(Term::One);
    vars.iter()
        .rev()
        .fold(Formula::mu(body), |f, v| Formula::sup(v, f))
}

/// Spaces up to this many atoms also get exhaustive automorphism checks.
const AUTOMORPHISM_SCAN_ATOMS: usize = 6;

/// Checks the action laws and, for each word set `F`, that the supremum
/// `μ(⋀ t_γ(a_γ))`, attained at support witnesses, equals `θ` of the
/// subgroups avoiding every `γ ∈ F`.
pub fn check_theta_axioms(action: &Action, theta: &EmpiricalIRS, f_list: &[Vec<Word>]) -> AxiomReport {
    let space = action.space();
    let names = action.names();
    let mut entries = Vec::new();
    let atoms_of = |e: &Event| e.to_vec();
    for (g, p) in action.generators().iter().enumerate() {
        let name = &names[g];
        let bad = (0..action.len()).find(|&x| space.weight(p.apply(x)) != space.weight(x));
        entries.push(AxiomEntry {
            name: format!("measure-preserving {name}"),
            value: bad.map_or_else(Q::zero, |x| (space.weight(p.apply(x)) - space.weight(x)).abs()),
            target: Q::zero(),
            pass: bad.is_none(),
            witness: bad.map(|x| BTreeMap::from([("a".to_string(), vec![x])])),
        });
        let inv = action.evaluate_word(&Word::generator_inverse(g));
        let bad = (0..action.len()).find(|&x| p.apply(inv.apply(x)) != x || inv.apply(p.apply(x)) != x);
        entries.push(AxiomEntry {
            name: format!("inverse law {name}"),
            value: bad.map_or_else(Q::zero, |x| space.weight(x).clone()),
            target: Q::zero(),
            pass: bad.is_none(),
            witness: bad.map(|x| BTreeMap::from([("a".to_string(), vec![x])])),
        });
        if action.len() <= AUTOMORPHISM_SCAN_ATOMS {
            let events = space.all_events(usize::MAX).expect("small space");
            let mut worst = (Q::zero(), None);
            for a in &events {
                for b in &events {
                    let lhs = p.image_event(&a.union(b));
                    let rhs = p.image_event(a).union(&p.image_event(b));
                    let neg = p.image_event(&a.complement()).sym_diff(&p.image_event(a).complement());
                    let v = space.measure(&lhs.sym_diff(&rhs)) + space.measure(&neg);
                    if v > worst.0 {
                        worst = (v, Some((a.clone(), b.clone())));
                    }
                }
            }
            let witness = worst
                .1
                .map(|(a, b)| BTreeMap::from([("a".to_string(), atoms_of(&a)), ("b".to_string(), atoms_of(&b))]));
            entries.push(AxiomEntry {
                name: format!("automorphism {name}"),
                pass: worst.0.is_zero(),
                value: worst.0,
                target: Q::zero(),
                witness,
            });
        }
    }
    for f in f_list {
        let mut meet = space.full_event();
        let mut witness = BTreeMap::new();
        for (i, w) in f.iter().enumerate() {
            let perm = action.evaluate_word(w);
            let sw = support_witness(&perm).expect("support witness of a permutation");
            meet = meet.intersection(&t_term(&perm, &sw.a0));
            witness.insert(format!("a{i}"), atoms_of(&sw.a0));
        }
        let value = space.measure(&meet);
        let target = irs_supp_cylinder(theta, f);
        let pass = value == target;
        let label: Vec<String> = f.iter().map(|w| w.display(names)).collect();
        entries.push(AxiomEntry {
            name: format!("theta {{{}}}", label.join(", ")),
            value,
            target,
            pass,
            witness: (!pass).then_some(witness),
        });
    }
    AxiomReport { entries }
}

// --------------------------------------------------------------- QE demo

#[derive(Clone, Debug, Serialize)]
pub struct DemoBlock {
    pub name: String,
    #[serde(with = "crate::rational::serde_q")]
    pub measure: Q,
    pub alpha_atoms: Vec<usize>,
    pub beta_atoms: Vec<usize>,
    /// Both copies of the block are invariant, so the block algebra with
    /// the trivial action sits inside each model in the same way.
    pub invariant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoValue {
    pub words: Vec<String>,
    #[serde(with = "crate::rational::serde_q")]
    pub alpha: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub beta: Q,
}

#[derive(Clone, Debug)]
pub struct QeDemo {
    pub alpha: Action,
    pub beta: Action,
    pub irs: EmpiricalIRS,
    pub blocks: Vec<DemoBlock>,
    /// `μ(a ∧ ⋀_{γ∈F} Supp γ)` in both models.
    pub values: Vec<DemoValue>,
}

impl QeDemo {
    pub fn differs(&self) -> bool {
        self.values.iter().any(|v| v.alpha != v.beta)
    }
}

fn disjoint_union(parts: &[(&Action, Q)], names: &[String]) -> Result<(Action, Vec<Vec<usize>>)> {
    let k = names.len();
    let mut weights = Vec::new();
    let mut offsets = Vec::new();
    let mut gens: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (a, scale) in parts {
        let a = a.padded(k);
        let off = weights.len();
        offsets.push((off..off + a.len()).collect());
        weights.extend(a.space().weights().iter().map(|w| w * scale));
        for (g, images) in gens.iter_mut().enumerate() {
            images.extend(a.generators()[g].images().iter().map(|&y| y + off));
        }
    }
    let gens = gens
        .into_iter()
        .map(crate::action::Perm::from_images)
        .collect::<Result<Vec<_>>>()?;
    Ok((Action::new(AtomSpace::new(weights)?, names.to_vec(), gens)?, offsets))
}

/// Two models with the same IRS that disagree on a quantifier-free formula
/// over a common three-block substructure `a, b, c` of weights
/// `t, t, 1 − 2t`: `α` runs `κ1` on `a` and `κ2` on `b, c`; `β` runs `κ2` on
/// `a, c` and `κ1` on `b`. Block `c` is left out when `t = 1/2`.
pub fn qe_failure_demo(k1: &Action, k2: &Action, t: &Q, f_list: &[Vec<Word>]) -> Result<QeDemo> {
    let half = Q::new(1.into(), 2.into());
    if !t.is_positive() || t > &half {
        return Err(Error::Precondition(format!("t = {} is outside (0, 1/2]", fmt_q(t))));
    }
    let k = k1.generator_count().max(k2.generator_count());
    let names = if k1.generator_count() == k { k1.names() } else { k2.names() }.to_vec();
    let (k1, k2) = (k1.padded(k), k2.padded(k));
    if irs_equal(&empirical_irs(&k1), &empirical_irs(&k2)) {
        return Err(Error::Precondition(
            "degenerate demo: the two input actions have the same IRS".into(),
        ));
    }
    let rest = Q::one() - t - t;
    let mut alpha_parts = vec![(&k1, t.clone()), (&k2, t.clone())];
    let mut beta_parts = vec![(&k2, t.clone()), (&k1, t.clone())];
    if rest.is_positive() {
        alpha_parts.push((&k2, rest.clone()));
        beta_parts.push((&k2, rest.clone()));
    }
    let (alpha, ablocks) = disjoint_union(&alpha_parts, &names)?;
    let (beta, bblocks) = disjoint_union(&beta_parts, &names)?;
    let irs = empirical_irs(&alpha);
    if !irs_equal(&irs, &empirical_irs(&beta)) {
        return Err(Error::Internal("demo models have different IRS".into()));
    }
    let measures = [t.clone(), t.clone(), rest];
    let blocks: Vec<DemoBlock> = ablocks
        .iter()
        .zip(&bblocks)
        .zip(["a", "b", "c"])
        .zip(&measures)
        .map(|(((aa, ba), name), m)| {
            let ea = alpha.space().event(aa.iter().copied()).unwrap();
            let eb = beta.space().event(ba.iter().copied()).unwrap();
            let invariant = (0..k).all(|g| {
                alpha.image_event(&Word::generator(g), &ea) == ea && beta.image_event(&Word::generator(g), &eb) == eb
            }) && alpha.space().measure(&ea) == *m
                && beta.space().measure(&eb) == *m;
            DemoBlock {
                name: name.to_string(),
                measure: m.clone(),
                alpha_atoms: aa.clone(),
                beta_atoms: ba.clone(),
                invariant,
            }
        })
        .collect();
    let value = |act: &Action, block: &[usize], f: &[Word]| {
        let e = f
            .iter()
            .fold(act.space().event(block.iter().copied()).unwrap(), |acc, w| acc.intersection(&act.support(w)));
        act.space().measure(&e)
    };
    let values = f_list
        .iter()
        .map(|f| DemoValue {
            words: f.iter().map(|w| w.display(&names)).collect(),
            alpha: value(&alpha, &ablocks[0], f),
            beta: value(&beta, &bblocks[0], f),
        })
        .collect();
    Ok(QeDemo {
        alpha,
        beta,
        irs,
        blocks,
        values,
    })
}

// ------------------------------------------------------- continuity probe

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    #[serde(with = "crate::rational::serde_q")]
    pub distance: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub gap: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub modulus: Q,
    /// `modulus · distance`, the bound the gap must respect.
    #[serde(with = "crate::rational::serde_q")]
    pub chain_bound: Q,
    pub chain_holds: bool,
    /// Index of an assignment attaining the gap.
    pub worst: Option<usize>,
}

/// Evaluates `f` in both actions over the sample assignments and compares
/// the largest gap with `d_u(α, β)` times the formula's modulus.
pub fn formula_continuity_probe(
    f: &Formula,
    alpha: &Action,
    beta: &Action,
    assignments: &[Assignment],
    opts: &EvalOptions,
) -> Result<ProbeReport> {
    if alpha.space() != beta.space() {
        return Err(Error::DomainMismatch("the two actions live on different spaces".into()));
    }
    let distance = action_distance(alpha, beta)?;
    let mut gap = Q::zero();
    let mut worst = None;
    for (i, env) in assignments.iter().enumerate() {
        let g = (eval_formula_with(alpha, f, env, opts)? - eval_formula_with(beta, f, env, opts)?).abs();
        if worst.is_none() || g > gap {
            gap = g;
            worst = Some(i);
        }
    }
    let modulus = f.action_modulus();
    let chain_bound = &modulus * &distance;
    Ok(ProbeReport {
        chain_holds: gap <= chain_bound,
        distance,
        gap,
        modulus,
        chain_bound,
        worst,
    })
}

/// Every assignment of the given variables to events of the space.
pub fn all_assignments(space: &AtomSpace, vars: &[&str], cap: usize) -> Result<Vec<Assignment>> {
    let events = space.all_events(cap)?;
    let total = events.len().checked_pow(vars.len() as u32).filter(|&t| t <= cap);
    let total = total.ok_or_else(|| Error::resource("assignment enumeration", format!("{}^{}", events.len(), vars.len()), cap))?;
    Ok((0..total)
        .map(|mut idx| {
            vars.iter()
                .map(|v| {
                    let e = events[idx % events.len()].clone();
                    idx /= events.len();
                    (v.to_string(), e)
                })
                .collect()
        })
        .collect())
}
