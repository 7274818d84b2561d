//! Measure-preserving actions of finitely generated free groups.
//!
//! An [`Action`] lists `k` generators; every further free generator acts as
//! the identity, so a stored action is formally an action of the free group
//! on countably many generators.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::canonical::canonical_rooted_schreier;
use crate::error::{Error, Result};
use crate::measure::{AtomSpace, Event, Subalgebra};
use crate::rational::{fmt_q, Q};

/// A freely reduced word. Letter `+(i+1)` is generator `i`, `-(i+1)` its
/// inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(index: usize) -> Self {
        Word {
            letters: vec![index as i32 + 1],
        }
    }

    pub fn generator_inverse(index: usize) -> Self {
        Word {
            letters: vec![-(index as i32 + 1)],
        }
    }

    /// Builds a word from signed letters, reducing it freely.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    /// Largest generator index used, plus one.
    pub fn rank(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Renders the word with generator names; `e` for the identity.
    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "e".into();
        }
        // group runs of the same letter into powers
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let g = l.unsigned_abs() as usize - 1;
            let name = names.get(g).cloned().unwrap_or_else(|| format!("x{g}"));
            let run = (j - i) as i64 * l.signum() as i64;
            parts.push(if run == 1 { name } else { format!("{name}^{run}") });
            i = j;
        }
        parts.join("*")
    }

    /// Parses `a*b^-1*a^2`, also accepting whitespace as separator and `e`
    /// or `1` for the identity. Unknown names are errors.
    pub fn parse(text: &str, names: &[String]) -> std::result::Result<Word, String> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            if tok == "e" || tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| format!("bad exponent in `{tok}`"))?),
                None => (tok, 1),
            };
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| format!("unknown generator `{name}`"))?;
            if exp.unsigned_abs() > 1 << 16 {
                return Err(format!("exponent too large in `{tok}`"));
            }
            let l = (g as i32 + 1) * exp.signum() as i32;
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::new(letters))
    }
}

/// A permutation of atom indices, stored as the image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        if cycles.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", cycles.join(""))
        }
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (x, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::InvalidPermutation(format!("atom {x} maps to {y}, outside 0..{n}")));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::InvalidPermutation(format!("atom {y} is hit twice")));
            }
        }
        Ok(Perm(images))
    }

    /// Builds a permutation from cycles, e.g. `[[0, 1, 2], [3, 4]]`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<Option<usize>> = vec![None; n];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                let y = c[(i + 1) % c.len()];
                if x >= n || y >= n {
                    return Err(Error::InvalidPermutation(format!("cycle entry outside 0..{n}")));
                }
                if images[x].replace(y).is_some() {
                    return Err(Error::InvalidPermutation(format!("atom {x} in two cycles")));
                }
            }
        }
        Perm::from_images(images.into_iter().enumerate().map(|(x, y)| y.unwrap_or(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&y| self.0[y]).collect())
    }

    /// Cycles ordered by smallest element, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    pub fn image_event(&self, e: &Event) -> Event {
        Event::from_atoms(e.universe(), e.atoms().map(|x| self.0[x])).unwrap()
    }

    pub fn preimage_event(&self, e: &Event) -> Event {
        Event::from_atoms(e.universe(), (0..self.len()).filter(|&x| e.contains(self.0[x]))).unwrap()
    }

    pub fn fixed_event(&self) -> Event {
        Event::from_atoms(self.len(), (0..self.len()).filter(|&x| self.0[x] == x)).unwrap()
    }

    pub fn moved_event(&self) -> Event {
        self.fixed_event().complement()
    }

    /// Checks that every atom goes to an atom of the same weight.
    pub fn check_weights(&self, space: &AtomSpace, name: &str) -> Result<()> {
        if self.len() != space.len() {
            return Err(Error::DomainMismatch(format!(
                "permutation `{name}` has {} entries, space has {} atoms",
                self.len(),
                space.len()
            )));
        }
        for (x, &y) in self.0.iter().enumerate() {
            if space.weight(x) != space.weight(y) {
                return Err(Error::WeightMismatch {
                    generator: name.to_string(),
                    from: x,
                    to: y,
                    from_weight: fmt_q(space.weight(x)),
                    to_weight: fmt_q(space.weight(y)),
                });
            }
        }
        Ok(())
    }
}

/// A pmp action: named generators, each a weight-preserving permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    space: AtomSpace,
    names: Vec<String>,
    gens: Vec<Perm>,
    invs: Vec<Perm>,
}

impl Action {
    pub fn new(space: AtomSpace, names: Vec<String>, gens: Vec<Perm>) -> Result<Self> {
        if names.len() != gens.len() {
            return Err(Error::Precondition("one name per generator is required".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::Precondition("generator names must be distinct".into()));
        }
        for (p, name) in gens.iter().zip(&names) {
            p.check_weights(&space, name)?;
        }
        let invs = gens.iter().map(Perm::inverse).collect();
        Ok(Action {
            space,
            names,
            gens,
            invs,
        })
    }

    /// Names generators `g0, g1, ...`, except a single generator is `g`.
    pub fn with_default_names(space: AtomSpace, gens: Vec<Perm>) -> Result<Self> {
        let names = default_names(gens.len());
        Action::new(space, names, gens)
    }

    pub fn trivial(space: AtomSpace) -> Self {
        Action {
            space,
            names: Vec::new(),
            gens: Vec::new(),
            invs: Vec::new(),
        }
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// Generator `i`; unlisted generators act trivially, so `None` means identity.
    pub fn generator(&self, i: usize) -> Option<&Perm> {
        self.gens.get(i)
    }

    /// Applies one signed letter.
    pub fn apply_letter(&self, letter: i32, x: usize) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        match (letter > 0, self.gens.get(g)) {
            (_, None) => x,
            (true, Some(p)) => p.apply(x),
            (false, Some(_)) => self.invs[g].apply(x),
        }
    }

    /// `w = l1 l2 ... lk` sends `x` to `l1(l2(...lk(x)))`.
    pub fn act(&self, w: &Word, x: usize) -> usize {
        w.letters().iter().rev().fold(x, |y, &l| self.apply_letter(l, y))
    }

    pub fn evaluate_word(&self, w: &Word) -> Perm {
        Perm((0..self.len()).map(|x| self.act(w, x)).collect())
    }

    pub fn image_event(&self, w: &Word, e: &Event) -> Event {
        self.evaluate_word(w).image_event(e)
    }

    pub fn fixed_event(&self, w: &Word) -> Event {
        Event::from_atoms(self.len(), (0..self.len()).filter(|&x| self.act(w, x) == x)).unwrap()
    }

    pub fn support(&self, w: &Word) -> Event {
        self.fixed_event(w).complement()
    }

    /// Orbits ordered by smallest atom, each sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut orbit_of = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            orbit_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for (p, q) in self.gens.iter().zip(&self.invs) {
                    for y in [p.apply(x), q.apply(x)] {
                        if orbit_of[y] == usize::MAX {
                            orbit_of[y] = id;
                            members.push(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Same space, generator list extended with identities to `k` entries.
    pub fn padded(&self, k: usize) -> Action {
        let mut a = self.clone();
        while a.gens.len() < k {
            let mut name = format!("g{}", a.gens.len());
            while a.names.contains(&name) {
                name.push('_');
            }
            a.names.push(name);
            a.gens.push(Perm::identity(self.len()));
            a.invs.push(Perm::identity(self.len()));
        }
        a
    }

    /// Relabels atoms: atom `x` of `self` becomes atom `relabel[x]`.
    pub fn relabeled(&self, relabel: &Perm) -> Result<Action> {
        let n = self.len();
        if relabel.len() != n {
            return Err(Error::DomainMismatch("relabeling has the wrong length".into()));
        }
        let inv = relabel.inverse();
        let mut weights = vec![Q::zero(); n];
        for x in 0..n {
            weights[relabel.apply(x)] = self.space.weight(x).clone();
        }
        let gens = self
            .gens
            .iter()
            .map(|p| Perm((0..n).map(|y| relabel.apply(p.apply(inv.apply(y)))).collect()))
            .collect();
        Action::new(AtomSpace::new(weights)?, self.names.clone(), gens)
    }
}

pub fn default_names(k: usize) -> Vec<String> {
    if k == 1 {
        vec!["g".to_string()]
    } else {
        (0..k).map(|i| format!("g{i}")).collect()
    }
}

/// `a0` is a maximal event disjoint from its image; `support` is
/// `φ⁻¹a0 ∪ a0 ∪ φa0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportWitness {
    pub a0: Event,
    pub support: Event,
}

/// Greedy maximal `a0` scanning atoms by index.
pub fn support_witness(perm: &Perm) -> Result<SupportWitness> {
    let order: Vec<usize> = (0..perm.len()).collect();
    support_witness_in_order(perm, &order)
}

/// Greedy maximal `a0` scanning atoms in the given order.
pub fn support_witness_in_order(perm: &Perm, order: &[usize]) -> Result<SupportWitness> {
    let inv = perm.inverse();
    let mut a0 = Event::empty(perm.len());
    for &x in order {
        if perm.apply(x) != x && !a0.contains(perm.apply(x)) && !a0.contains(inv.apply(x)) {
            a0.insert(x);
        }
    }
    let support = support_from_a0(perm, &a0);
    if support != perm.moved_event() {
        return Err(Error::Internal(format!(
            "three-term support {:?} differs from the moved set {:?}",
            support,
            perm.moved_event()
        )));
    }
    Ok(SupportWitness { a0, support })
}

pub fn support_from_a0(perm: &Perm, a0: &Event) -> Event {
    perm.preimage_event(a0).union(a0).union(&perm.image_event(a0))
}

/// True when `a0` is disjoint from its image and no atom can be added.
pub fn is_maximal_a0(perm: &Perm, a0: &Event) -> bool {
    let image = perm.image_event(a0);
    if !a0.is_disjoint(&image) {
        return false;
    }
    (0..perm.len()).filter(|&x| !a0.contains(x)).all(|x| {
        let mut bigger = a0.clone();
        bigger.insert(x);
        !bigger.is_disjoint(&perm.image_event(&bigger))
    })
}

/// `t(a) = φ⁻¹(a∖φa) ∨ (a∖φa) ∨ φ(a∖φa)`.
pub fn t_term(perm: &Perm, a: &Event) -> Event {
    let core = a.difference(&perm.image_event(a));
    perm.preimage_event(&core).union(&core).union(&perm.image_event(&core))
}

/// `sup_a μ(pa △ qa)` in closed form: with `σ = q⁻¹p`, each σ-cycle of
/// length `n` contributes `2·⌊n/2⌋` times its atom weight.
pub fn uniform_distance(space: &AtomSpace, p: &Perm, q: &Perm) -> Result<Q> {
    if p.len() != space.len() || q.len() != space.len() {
        return Err(Error::DomainMismatch("permutations and space differ in size".into()));
    }
    let sigma = q.inverse().compose(p);
    let mut total = Q::zero();
    for c in sigma.cycles() {
        let half = (c.len() / 2) as i64;
        if half > 0 {
            total += space.weight(c[0]) * Q::from_integer((2 * half).into());
        }
    }
    Ok(total)
}

/// Action-level distance: the maximum over all generators listed by either
/// action (missing ones act as the identity).
pub fn action_distance(alpha: &Action, beta: &Action) -> Result<Q> {
    if alpha.space() != beta.space() {
        return Err(Error::DomainMismatch("actions on different spaces".into()));
    }
    let k = alpha.generator_count().max(beta.generator_count());
    let id = Perm::identity(alpha.len());
    let mut best = Q::zero();
    for i in 0..k {
        let p = alpha.generator(i).unwrap_or(&id);
        let q = beta.generator(i).unwrap_or(&id);
        let d = uniform_distance(alpha.space(), p, q)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// `d(a, supp w) = μ(a ∖ supp) + μ(supp ∖ a)`.
pub fn distance_to_support(action: &Action, a: &Event, w: &Word) -> Result<Q> {
    action.space().check(a)?;
    let supp = action.support(w);
    let sp = action.space();
    Ok(sp.measure(&a.difference(&supp)) + sp.measure(&supp.difference(a)))
}

/// An equivariant measure-preserving surjection from `source` onto `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMap {
    pub source: Action,
    pub target: Action,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorCheck {
    Valid,
    BadShape(String),
    /// The fiber over `atom` has the wrong total weight.
    NotMeasurePreserving { atom: usize, fiber: Q, weight: Q },
    /// `map(g·y) ≠ g·map(y)`.
    NotEquivariant { atom: usize, generator: usize },
}

impl FactorCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, FactorCheck::Valid)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            FactorCheck::Valid => Ok(()),
            FactorCheck::BadShape(m) => Err(Error::Precondition(format!("factor map: {m}"))),
            FactorCheck::NotMeasurePreserving { atom, fiber, weight } => Err(Error::Precondition(format!(
                "factor map: fiber over atom {atom} weighs {}, atom weighs {}",
                fmt_q(&fiber),
                fmt_q(&weight)
            ))),
            FactorCheck::NotEquivariant { atom, generator } => Err(Error::Precondition(format!(
                "factor map: not equivariant at atom {atom} for generator {generator}"
            ))),
        }
    }
}

impl FactorMap {
    pub fn new(source: Action, target: Action, map: Vec<usize>) -> Result<Self> {
        let f = FactorMap { source, target, map };
        f.check().into_result()?;
        Ok(f)
    }

    pub fn identity(action: &Action) -> Self {
        FactorMap {
            source: action.clone(),
            target: action.clone(),
            map: (0..action.len()).collect(),
        }
    }

    pub fn apply(&self, y: usize) -> usize {
        self.map[y]
    }

    /// Preimage of a target event.
    pub fn pullback(&self, e: &Event) -> Event {
        Event::from_atoms(self.source.len(), (0..self.source.len()).filter(|&y| e.contains(self.map[y]))).unwrap()
    }

    pub fn check(&self) -> FactorCheck {
        is_factor_map(self)
    }
}

pub fn is_factor_map(f: &FactorMap) -> FactorCheck {
    let (ys, xs) = (f.source.len(), f.target.len());
    if f.map.len() != ys {
        return FactorCheck::BadShape(format!("{} entries for {ys} source atoms", f.map.len()));
    }
    if let Some(y) = f.map.iter().position(|&x| x >= xs) {
        return FactorCheck::BadShape(format!("atom {y} maps outside the target"));
    }
    let mut fiber = vec![Q::zero(); xs];
    for (y, &x) in f.map.iter().enumerate() {
        fiber[x] += f.source.space().weight(y);
    }
    for (x, got) in fiber.into_iter().enumerate() {
        if &got != f.target.space().weight(x) {
            return FactorCheck::NotMeasurePreserving {
                atom: x,
                fiber: got,
                weight: f.target.space().weight(x).clone(),
            };
        }
    }
    let k = f.source.generator_count().max(f.target.generator_count());
    for g in 0..k {
        let w = Word::generator(g);
        for y in 0..ys {
            if f.map[f.source.act(&w, y)] != f.target.act(&w, f.map[y]) {
                return FactorCheck::NotEquivariant { atom: y, generator: g };
            }
        }
    }
    FactorCheck::Valid
}

/// Every element of the finite image group, by breadth-first closure.
pub fn image_group(action: &Action, cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(action.len());
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in action.generators() {
            let next = g.compose(&p);
            if !seen.contains_key(&next) {
                if out.len() >= cap {
                    return Err(Error::resource("image group enumeration", format!("more than {cap}"), cap));
                }
                seen.insert(next.clone(), ());
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// Coarsest refinement of `labels` that every generator maps blocks to blocks.
pub(crate) fn stable_refinement(action: &Action, start: &Subalgebra) -> Subalgebra {
    let mut part = start.clone();
    loop {
        let labels: Vec<Vec<usize>> = (0..action.len())
            .map(|x| {
                let mut sig = vec![part.block_of(x)];
                for (p, q) in action.gens.iter().zip(&action.invs) {
                    sig.push(part.block_of(p.apply(x)));
                    sig.push(part.block_of(q.apply(x)));
                }
                sig
            })
            .collect();
        let next = Subalgebra::from_labels(&labels);
        if next.block_count() == part.block_count() {
            return next;
        }
        part = next;
    }
}

/// Partition of atoms by point stabilizer, via rooted Schreier classes.
pub fn stabilizer_partition(action: &Action) -> Subalgebra {
    let classes: Vec<String> = (0..action.len())
        .map(|x| canonical_rooted_schreier(action, x).encode())
        .collect();
    Subalgebra::from_labels(&classes)
}

/// The subalgebra generated by all translates of the events in `a` together
/// with all supports.
///
/// Supports of all words separate atoms exactly by stabilizer, and equal
/// stabilizers coincide with equal rooted Schreier classes, so no group
/// enumeration is needed. [`definable_closure_by_enumeration`] is the
/// enumeration route.
pub fn definable_closure(action: &Action, a: &[Event]) -> Result<Subalgebra> {
    for e in a {
        action.space().check(e)?;
    }
    let sig: Vec<Vec<bool>> = (0..action.len()).map(|x| a.iter().map(|e| e.contains(x)).collect()).collect();
    let translates = stable_refinement(action, &Subalgebra::from_labels(&sig));
    Ok(translates.join(&stabilizer_partition(action)))
}

/// Same closure computed from the enumerated image group; fails once the
/// group has more than `cap` elements.
pub fn definable_closure_by_enumeration(action: &Action, a: &[Event], cap: usize) -> Result<Subalgebra> {
    for e in a {
        action.space().check(e)?;
    }
    let group = image_group(action, cap)?;
    let labels: Vec<(Vec<bool>, Vec<bool>)> = (0..action.len())
        .map(|x| {
            let translates = group
                .iter()
                .flat_map(|p| a.iter().map(move |e| e.contains(p.apply(x))))
                .collect();
            let stab = group.iter().map(|p| p.apply(x) == x).collect();
            (translates, stab)
        })
        .collect();
    Ok(Subalgebra::from_labels(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn cyc(n: usize) -> Action {
        let p = Perm::from_images((0..n).map(|x| (x + 1) % n).collect()).unwrap();
        Action::with_default_names(AtomSpace::uniform(n), vec![p]).unwrap()
    }

    fn c4_c2() -> Action {
        let p = Perm::from_cycles(6, &[vec![0, 1, 2, 3], vec![4, 5]]).unwrap();
        Action::with_default_names(AtomSpace::uniform(6), vec![p]).unwrap()
    }

    #[test]
    fn words_reduce_and_parse() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(Word::new([1, -1]).is_identity());
        let w = Word::parse("a*b^-1 a^2", &names).unwrap();
        assert_eq!(w.letters(), &[1, -2, 1, 1]);
        assert_eq!(w.display(&names), "a*b^-1*a^2");
        assert_eq!(Word::parse("e", &names).unwrap(), Word::identity());
        assert!(Word::parse("c", &names).is_err());
        assert_eq!(w.concat(&w.inverse()), Word::identity());
    }

    #[test]
    fn evaluate_word_examples() {
        let a = cyc(4);
        let g = Word::generator(0);
        assert!(a.evaluate_word(&Word::identity()).is_identity());
        assert!(a.evaluate_word(&Word::new([1, -1])).is_identity());
        assert_eq!(a.evaluate_word(&g.pow(2)), Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap());
        // unlisted generators act trivially
        assert!(a.evaluate_word(&Word::generator(5)).is_identity());
    }

    #[test]
    fn word_order_is_right_to_left() {
        let sp = AtomSpace::uniform(3);
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let act = Action::with_default_names(sp, vec![a, b]).unwrap();
        // ab sends 2 to a(b(2)) = a(1) = 0
        assert_eq!(act.act(&Word::new([1, 2]), 2), 0);
    }

    #[test]
    fn support_witness_examples() {
        let w = support_witness(&Perm::identity(4)).unwrap();
        assert!(w.a0.is_empty() && w.support.is_empty());
        let w = support_witness(cyc(4).generator(0).unwrap()).unwrap();
        assert_eq!(w.a0.to_vec(), vec![0, 2]);
        assert_eq!(w.support.count(), 4);
        let p = Perm::from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        let w = support_witness(&p).unwrap();
        assert_eq!(w.a0.to_vec(), vec![0]);
        assert_eq!(w.support.to_vec(), vec![0, 1, 2]);
        assert_eq!(AtomSpace::uniform(4).measure(&w.support), q(3, 4));
    }

    #[test]
    fn fixed_event_examples() {
        let g = Word::generator(0);
        assert!(cyc(4).fixed_event(&g.pow(2)).is_empty());
        assert_eq!(cyc(4).fixed_event(&g.pow(4)).count(), 4);
        let a = c4_c2();
        let f = a.fixed_event(&g.pow(2));
        assert_eq!(f.to_vec(), vec![4, 5]);
        assert_eq!(a.space().measure(&f), q(1, 3));
    }

    #[test]
    fn uniform_distance_examples() {
        let sp = AtomSpace::uniform(4);
        let c = cyc(4).generator(0).unwrap().clone();
        assert_eq!(uniform_distance(&sp, &c, &c).unwrap(), q(0, 1));
        assert_eq!(uniform_distance(&sp, &c, &Perm::identity(4)).unwrap(), q(1, 1));
        let d = Perm::from_cycles(4, &[vec![0, 1, 3, 2]]).unwrap();
        assert_eq!(uniform_distance(&sp, &c, &d).unwrap(), q(1, 2));
    }

    #[test]
    fn factor_map_examples() {
        let a = cyc(4);
        assert!(is_factor_map(&FactorMap::identity(&a)).is_valid());

        let two = Action::with_default_names(
            AtomSpace::uniform(4),
            vec![Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap()],
        )
        .unwrap();
        let one = cyc(2);
        let f = FactorMap {
            source: two.clone(),
            target: one,
            map: vec![0, 1, 0, 1],
        };
        assert!(f.check().is_valid());

        // C4 onto C2 measure-wise would need weights 1/2 per image; map C2⊔C2 onto
        // a fixed-point pair instead so weights match but equivariance fails.
        let fixed = Action::with_default_names(AtomSpace::uniform(2), vec![Perm::identity(2)]).unwrap();
        let f = FactorMap {
            source: two,
            target: fixed,
            map: vec![0, 1, 0, 1],
        };
        assert_eq!(f.check(), FactorCheck::NotEquivariant { atom: 0, generator: 0 });
    }

    #[test]
    fn distance_to_support_examples() {
        let g = Word::generator(0);
        let a = cyc(4);
        assert_eq!(distance_to_support(&a, &a.support(&g), &g).unwrap(), q(0, 1));
        assert_eq!(distance_to_support(&a, &a.space().empty_event(), &g).unwrap(), q(1, 1));
        let b = c4_c2();
        assert_eq!(distance_to_support(&b, &b.space().event([0]).unwrap(), &g).unwrap(), q(5, 6));
    }

    #[test]
    fn definable_closure_examples() {
        // free and transitive: trivial partition
        let a = cyc(5);
        assert_eq!(definable_closure(&a, &[]).unwrap().block_count(), 1);
        let b = c4_c2();
        assert_eq!(
            definable_closure(&b, &[]).unwrap().blocks(),
            &[vec![0, 1, 2, 3], vec![4, 5]]
        );
        let c = cyc(4);
        let e = c.space().event([0]).unwrap();
        assert_eq!(definable_closure(&c, &[e.clone()]).unwrap().block_count(), 4);
        for act in [&a, &b, &c] {
            let ev = if act.len() == 4 { vec![e.clone()] } else { vec![] };
            assert_eq!(
                definable_closure(act, &ev).unwrap(),
                definable_closure_by_enumeration(act, &ev, 1000).unwrap()
            );
        }
    }

    #[test]
    fn image_group_cap_is_reported() {
        let sp = AtomSpace::uniform(6);
        let a = Perm::from_cycles(6, &[vec![0, 1, 2, 3, 4, 5]]).unwrap();
        let b = Perm::from_cycles(6, &[vec![0, 1]]).unwrap();
        let act = Action::with_default_names(sp, vec![a, b]).unwrap();
        assert_eq!(image_group(&act, 720).unwrap().len(), 720);
        assert!(matches!(image_group(&act, 100), Err(Error::Resource { .. })));
    }

    #[test]
    fn weight_mismatch_names_atoms() {
        let sp = AtomSpace::new(vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        let p = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        match Action::with_default_names(sp, vec![p]) {
            Err(Error::WeightMismatch { from: 0, to: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
