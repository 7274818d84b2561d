//! Empirical invariant random subgroups.
//!
//! A subgroup arising as a point stabilizer is represented by the canonical
//! rooted Schreier class of the point; unlisted generators lie in every
//! stabilizer.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::action::{Action, FactorMap, Perm, Word};
use crate::canonical::{rooted_classes, RootedSchreierClass};
use crate::error::{Error, Result};
use crate::measure::{AtomSpace, Event};
use crate::rational::{fmt_q, Q};

/// Distribution of rooted Schreier classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalIRS {
    masses: BTreeMap<RootedSchreierClass, Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrsEntry {
    pub class: String,
    #[serde(with = "crate::rational::serde_q")]
    pub mass: Q,
}

impl EmpiricalIRS {
    pub fn from_masses(masses: BTreeMap<RootedSchreierClass, Q>) -> Result<Self> {
        if masses.values().any(|m| *m <= Q::zero()) {
            return Err(Error::Precondition("IRS masses must be positive".into()));
        }
        let total: Q = masses.values().sum();
        if !total.is_one() {
            return Err(Error::Precondition(format!("IRS masses sum to {}", fmt_q(&total))));
        }
        Ok(EmpiricalIRS { masses })
    }

    pub fn masses(&self) -> &BTreeMap<RootedSchreierClass, Q> {
        &self.masses
    }

    pub fn mass(&self, class: &RootedSchreierClass) -> Q {
        self.masses.get(class).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Entries sorted by class encoding; the stable serialized form.
    pub fn entries(&self) -> Vec<IrsEntry> {
        let mut out: Vec<IrsEntry> = self
            .masses
            .iter()
            .map(|(c, m)| IrsEntry {
                class: c.encode(),
                mass: m.clone(),
            })
            .collect();
        out.sort_by(|a, b| a.class.cmp(&b.class));
        out
    }

    /// One `class mass` line per class.
    pub fn to_text(&self) -> String {
        self.entries().iter().map(|e| format!("{} {}\n", e.class, fmt_q(&e.mass))).collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut masses = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (c, m) = line.split_once(' ').ok_or_else(|| Error::parse(i + 1, "expected `class mass`"))?;
            let class = RootedSchreierClass::decode(c).map_err(|_| Error::parse(i + 1, format!("bad class `{c}`")))?;
            let mass = crate::rational::parse_q(m.trim()).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            if masses.insert(class, mass).is_some() {
                return Err(Error::parse(i + 1, "class listed twice"));
            }
        }
        EmpiricalIRS::from_masses(masses)
    }
}

pub fn empirical_irs(action: &Action) -> EmpiricalIRS {
    let mut masses: BTreeMap<RootedSchreierClass, Q> = BTreeMap::new();
    for (x, c) in rooted_classes(action).into_iter().enumerate() {
        *masses.entry(c).or_insert_with(Q::zero) += action.space().weight(x);
    }
    EmpiricalIRS { masses }
}

pub fn irs_equal(a: &EmpiricalIRS, b: &EmpiricalIRS) -> bool {
    a == b
}

/// First class (in encoding order) whose masses differ, with both masses.
pub fn irs_difference(a: &EmpiricalIRS, b: &EmpiricalIRS) -> Option<(String, Q, Q)> {
    let mut classes: Vec<&RootedSchreierClass> = a.masses.keys().chain(b.masses.keys()).collect();
    classes.sort_by_key(|c| c.encode());
    classes.dedup();
    classes
        .into_iter()
        .find(|c| a.mass(c) != b.mass(c))
        .map(|c| (c.encode(), a.mass(c), b.mass(c)))
}

/// Fails with [`Error::IrsMismatch`] naming a distinguishing class.
pub fn require_equal(a: &EmpiricalIRS, b: &EmpiricalIRS) -> Result<()> {
    match irs_difference(a, b) {
        None => Ok(()),
        Some((class, l, r)) => Err(Error::IrsMismatch {
            class,
            left: fmt_q(&l),
            right: fmt_q(&r),
        }),
    }
}

/// Words required in (`fix`) and excluded from (`supp`) the stabilizer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CylinderQuery {
    pub fix: Vec<Word>,
    pub supp: Vec<Word>,
}

/// Inclusion-exclusion sums over subsets of `supp`; more words than this is
/// a resource error.
pub const MAX_EXCLUDED_WORDS: usize = 20;

impl CylinderQuery {
    pub fn new(fix: Vec<Word>, supp: Vec<Word>) -> Result<Self> {
        if let Some(w) = fix.iter().find(|w| supp.contains(w)) {
            return Err(Error::Precondition(format!(
                "word {:?} is both required and excluded",
                w.letters()
            )));
        }
        Ok(CylinderQuery { fix, supp })
    }
}

fn fix_meet(action: &Action, words: &[Word]) -> Event {
    words
        .iter()
        .fold(action.space().full_event(), |acc, w| acc.intersection(&action.fixed_event(w)))
}

/// `μ(⋂ Fix(w), w ∈ fix ∩ ⋂ Supp(w), w ∈ supp)`, checked against the
/// inclusion-exclusion expansion over `fix`-only cylinders.
pub fn irs_cylinder(action: &Action, q: &CylinderQuery) -> Result<Q> {
    let direct = irs_cylinder_direct(action, q);
    let expanded = cylinder_inclusion_exclusion(action, q)?;
    if direct != expanded {
        return Err(Error::Internal(format!(
            "cylinder {} disagrees with inclusion-exclusion {}",
            fmt_q(&direct),
            fmt_q(&expanded)
        )));
    }
    Ok(direct)
}

pub fn irs_cylinder_direct(action: &Action, q: &CylinderQuery) -> Q {
    let e = q
        .supp
        .iter()
        .fold(fix_meet(action, &q.fix), |acc, w| acc.intersection(&action.support(w)));
    action.space().measure(&e)
}

/// `Σ_{H ⊆ supp} (-1)^{|H|} μ(⋂ Fix(fix ∪ H))`.
pub fn cylinder_inclusion_exclusion(action: &Action, q: &CylinderQuery) -> Result<Q> {
    let k = q.supp.len();
    if k > MAX_EXCLUDED_WORDS {
        return Err(Error::resource("inclusion-exclusion", format!("2^{k} terms"), format!("2^{MAX_EXCLUDED_WORDS}")));
    }
    let base = fix_meet(action, &q.fix);
    let fixes: Vec<Event> = q.supp.iter().map(|w| action.fixed_event(w)).collect();
    let mut total = Q::zero();
    for mask in 0usize..(1 << k) {
        let e = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .fold(base.clone(), |acc, i| acc.intersection(&fixes[i]));
        let m = action.space().measure(&e);
        if mask.count_ones() % 2 == 0 {
            total += m;
        } else {
            total -= m;
        }
    }
    Ok(total)
}

/// `μ(⋂ Supp(w), w ∈ words)`.
pub fn supp_cylinder(action: &Action, words: &[Word]) -> Q {
    let e = words
        .iter()
        .fold(action.space().full_event(), |acc, w| acc.intersection(&action.support(w)));
    action.space().measure(&e)
}

/// The same query read off the IRS via loop membership in class tables.
pub fn cylinder_from_irs(irs: &EmpiricalIRS, q: &CylinderQuery) -> Q {
    irs.masses
        .iter()
        .filter(|(c, _)| q.fix.iter().all(|w| c.contains_loop(w)) && q.supp.iter().all(|w| !c.contains_loop(w)))
        .map(|(_, m)| m)
        .sum()
}

/// Mass of subgroups avoiding every word: the quantity matched against
/// `μ(⋂ Supp(w))` by the axiom checker.
pub fn irs_supp_cylinder(irs: &EmpiricalIRS, words: &[Word]) -> Q {
    cylinder_from_irs(
        irs,
        &CylinderQuery {
            fix: Vec::new(),
            supp: words.to_vec(),
        },
    )
}

/// The conjugation action on occurring classes and the stabilizer map onto it.
#[derive(Clone, Debug)]
pub struct IrsFactor {
    pub action: Action,
    pub factor: FactorMap,
    /// Class of each atom of the class action, sorted by encoding.
    pub classes: Vec<RootedSchreierClass>,
}

pub fn irs_factor(action: &Action) -> Result<IrsFactor> {
    let per_atom = rooted_classes(action);
    let mut classes: Vec<RootedSchreierClass> = per_atom.clone();
    classes.sort_by_key(|c| c.encode());
    classes.dedup();
    let index: BTreeMap<&RootedSchreierClass, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let map: Vec<usize> = per_atom.iter().map(|c| index[c]).collect();
    let mut weights = vec![Q::zero(); classes.len()];
    for (x, &c) in map.iter().enumerate() {
        weights[c] += action.space().weight(x);
    }
    let space = AtomSpace::new(weights)?;
    let mut gens = Vec::new();
    for (g, p) in action.generators().iter().enumerate() {
        let mut images: Vec<Option<usize>> = vec![None; classes.len()];
        for x in 0..action.len() {
            let to = map[p.apply(x)];
            match images[map[x]].replace(to) {
                Some(prev) if prev != to => {
                    return Err(Error::Internal(format!(
                        "generator {g} sends class {} to two classes",
                        classes[map[x]].encode()
                    )))
                }
                _ => {}
            }
        }
        let images = images.into_iter().map(|i| i.expect("every class occurs")).collect();
        gens.push(Perm::from_images(images).map_err(|e| Error::Internal(format!("class transport: {e}")))?);
    }
    let class_action = Action::new(space, action.names().to_vec(), gens)?;
    let factor = FactorMap {
        source: action.clone(),
        target: class_action.clone(),
        map,
    };
    factor.check().into_result().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(IrsFactor {
        action: class_action,
        factor,
        classes,
    })
}
