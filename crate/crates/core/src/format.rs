//! The `pmp-action` text format.
//!
//! ```text
//! pmp-action 1
//! atom 0 1/4
//! atom 1 1/4
//! atom 2 1/2
//! gen a 1 0 2
//! event A 0 2
//! ```
//!
//! Atom ids run `0..n` in order. A `gen` line lists the image of every atom.
//! Blank lines and `#` comments are ignored on input; [`serialize_action`]
//! writes neither, so its output is the canonical form and reparses to the
//! same bytes.

use num_traits::{One, Signed};

use crate::action::{Action, Perm};
use crate::error::{Error, Result};
use crate::measure::{AtomSpace, Event};
use crate::rational::{fmt_q, parse_q, Q};

pub const HEADER: &str = "pmp-action 1";

/// An action with named events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDocument {
    pub action: Action,
    pub events: Vec<(String, Event)>,
}

impl ActionDocument {
    pub fn new(action: Action) -> Self {
        ActionDocument {
            action,
            events: Vec::new(),
        }
    }

    pub fn event(&self, name: &str) -> Option<&Event> {
        self.events.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn to_text(&self) -> String {
        serialize_action(self)
    }
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_id(tok: &str, n: usize, line: usize, what: &str) -> Result<usize> {
    let id: usize = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: `{tok}` is not an atom id")))?;
    if id >= n {
        return Err(Error::parse(line, format!("{what}: atom {id} out of range (n = {n})")));
    }
    Ok(id)
}

/// Parses a document; every error names the offending line.
pub fn parse_action(text: &str) -> Result<ActionDocument> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l.split_whitespace().eq(HEADER.split_whitespace()) => {}
        Some((i, l)) => return Err(Error::parse(i, format!("expected `{HEADER}`, found `{l}`"))),
        None => return Err(Error::parse(1, format!("empty document, expected `{HEADER}`"))),
    }
    let mut weights: Vec<Q> = Vec::new();
    let mut last_atom_line = 1;
    let mut space: Option<AtomSpace> = None;
    let mut names: Vec<String> = Vec::new();
    let mut gens: Vec<Perm> = Vec::new();
    let mut events: Vec<(String, Event)> = Vec::new();
    let close_atoms = |weights: &[Q], line: usize| -> Result<AtomSpace> {
        if weights.is_empty() {
            return Err(Error::parse(line, "no atoms declared"));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::parse(line, format!("atom weights sum to {}, not 1", fmt_q(&total))));
        }
        AtomSpace::new(weights.to_vec()).map_err(|e| Error::parse(line, e.to_string()))
    };
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let kind = toks.next().unwrap();
        let rest: Vec<&str> = toks.collect();
        match kind {
            "atom" => {
                if space.is_some() {
                    return Err(Error::parse(line, "atom lines must precede gen and event lines"));
                }
                let [id, w] = rest[..] else {
                    return Err(Error::parse(line, "expected `atom <id> <p/q>`"));
                };
                if id.parse::<usize>().ok() != Some(weights.len()) {
                    return Err(Error::parse(line, format!("atom id `{id}`: expected {}", weights.len())));
                }
                let w = parse_q(w).map_err(|e| Error::parse(line, format!("weight of atom {id}: {}", e.0)))?;
                if !w.is_positive() {
                    return Err(Error::parse(line, format!("weight of atom {id} must be positive")));
                }
                weights.push(w);
                last_atom_line = line;
            }
            "gen" | "event" => {
                if space.is_none() {
                    space = Some(close_atoms(&weights, last_atom_line)?);
                }
                let sp = space.as_ref().unwrap();
                let n = sp.len();
                let Some((name, ids)) = rest.split_first() else {
                    return Err(Error::parse(line, format!("expected `{kind} <name> ...`")));
                };
                if !valid_name(name) {
                    return Err(Error::parse(line, format!("`{name}` is not a valid name")));
                }
                if kind == "gen" {
                    if !events.is_empty() {
                        return Err(Error::parse(line, "gen lines must precede event lines"));
                    }
                    if names.iter().any(|m| m == name) {
                        return Err(Error::parse(line, format!("generator `{name}` declared twice")));
                    }
                    if ids.len() != n {
                        return Err(Error::parse(line, format!("generator {name}: {} images for {n} atoms", ids.len())));
                    }
                    let images = ids
                        .iter()
                        .map(|t| parse_id(t, n, line, &format!("generator {name}")))
                        .collect::<Result<Vec<_>>>()?;
                    let p = Perm::from_images(images)
                        .map_err(|e| Error::parse(line, format!("generator {name}: {e}")))?;
                    p.check_weights(sp, name).map_err(|e| Error::parse(line, e.to_string()))?;
                    names.push(name.to_string());
                    gens.push(p);
                } else {
                    if events.iter().any(|(m, _)| m == name) {
                        return Err(Error::parse(line, format!("event `{name}` declared twice")));
                    }
                    let mut e = Event::empty(n);
                    for t in ids {
                        let x = parse_id(t, n, line, &format!("event {name}"))?;
                        if e.contains(x) {
                            return Err(Error::parse(line, format!("event {name}: atom {x} listed twice")));
                        }
                        e.insert(x);
                    }
                    events.push((name.to_string(), e));
                }
            }
            other => return Err(Error::parse(line, format!("unknown line kind `{other}`"))),
        }
    }
    let space = match space {
        Some(s) => s,
        None => close_atoms(&weights, last_atom_line)?,
    };
    let action = Action::new(space, names, gens).map_err(|e| Error::parse(last_atom_line, e.to_string()))?;
    Ok(ActionDocument { action, events })
}

/// Canonical text of a document.
pub fn serialize_action(doc: &ActionDocument) -> String {
    let a = &doc.action;
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (i, w) in a.space().weights().iter().enumerate() {
        out.push_str(&format!("atom {i} {}\n", fmt_q(w)));
    }
    for (name, p) in a.names().iter().zip(a.generators()) {
        out.push_str("gen ");
        out.push_str(name);
        for y in p.images() {
            out.push_str(&format!(" {y}"));
        }
        out.push('\n');
    }
    for (name, e) in &doc.events {
        out.push_str("event ");
        out.push_str(name);
        for x in e.atoms() {
            out.push_str(&format!(" {x}"));
        }
        out.push('\n');
    }
    out
}
