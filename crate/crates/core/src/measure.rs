//! Finite measure algebras.
//!
//! An [`AtomSpace`] is a finite probability space whose atoms carry exact
//! positive rational weights. Events are sets of atoms, subalgebras are
//! partitions of the atoms, and conditional expectations are block averages.
//! Atoms are identified by their index `0..n`; every deterministic tie-break
//! in the crate goes by that index.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// A finite probability space: positive weights summing to exactly one.
#[derive(Clone, PartialEq, Eq)]
pub struct AtomSpace {
    weights: Arc<[Q]>,
}

impl fmt::Debug for AtomSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(fmt_q).collect();
        write!(f, "AtomSpace[{}]", ws.join(", "))
    }
}

impl AtomSpace {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSpace("a space needs at least one atom".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| **w <= Q::zero()) {
            return Err(Error::InvalidSpace(format!(
                "atom {i} has non-positive weight {}",
                fmt_q(w)
            )));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSpace(format!(
                "weights sum to {}, expected 1/1",
                fmt_q(&total)
            )));
        }
        Ok(AtomSpace {
            weights: weights.into(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform space needs at least one atom");
        let w = Q::new(1.into(), (n as i64).into());
        AtomSpace {
            weights: vec![w; n].into(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, atom: usize) -> &Q {
        &self.weights[atom]
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn event(&self, atoms: impl IntoIterator<Item = usize>) -> Result<Event> {
        Event::from_atoms(self.len(), atoms)
    }

    pub fn empty_event(&self) -> Event {
        Event::empty(self.len())
    }

    pub fn full_event(&self) -> Event {
        Event::full(self.len())
    }

    pub fn check(&self, e: &Event) -> Result<()> {
        if e.universe() != self.len() {
            return Err(Error::DomainMismatch(format!(
                "event over {} atoms used with a space of {} atoms",
                e.universe(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Measure of an event.
    ///
    /// Panics if the event belongs to a space of a different size; fallible
    /// callers go through [`AtomSpace::check`] first.
    pub fn measure(&self, e: &Event) -> Q {
        assert_eq!(e.universe(), self.len(), "event from a different space");
        e.atoms().map(|x| &self.weights[x]).sum()
    }

    /// Every event of the space, in bitmask order. Fails above `cap` events.
    pub fn all_events(&self, cap: usize) -> Result<Vec<Event>> {
        let n = self.len();
        if n >= usize::BITS as usize - 1 || (1usize << n) > cap {
            return Err(Error::resource("event enumeration", format!("2^{n}"), cap));
        }
        Ok((0..(1usize << n))
            .map(|mask| Event::from_atoms(n, (0..n).filter(|i| mask >> i & 1 == 1)).unwrap())
            .collect())
    }
}

/// A set of atoms of a space with `universe` atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Event {
    bits: FixedBitSet,
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms()).finish()
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.universe(), self.atoms().collect::<Vec<_>>())
            .cmp(&(other.universe(), other.atoms().collect::<Vec<_>>()))
    }
}

impl Event {
    pub fn empty(universe: usize) -> Self {
        Event {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Event { bits }
    }

    pub fn from_atoms(universe: usize, atoms: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(universe);
        for a in atoms {
            if a >= universe {
                return Err(Error::DomainMismatch(format!(
                    "atom {a} outside a space of {universe} atoms"
                )));
            }
            bits.insert(a);
        }
        Ok(Event { bits })
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.bits.contains(atom)
    }

    pub fn insert(&mut self, atom: usize) {
        self.bits.insert(atom);
    }

    pub fn remove(&mut self, atom: usize) {
        self.bits.set(atom, false);
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.atoms().collect()
    }

    fn same_universe(&self, other: &Event) {
        assert_eq!(self.universe(), other.universe(), "events from different spaces");
    }

    pub fn union(&self, other: &Event) -> Event {
        self.same_universe(other);
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Event { bits }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        self.same_universe(other);
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Event { bits }
    }

    pub fn difference(&self, other: &Event) -> Event {
        self.same_universe(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Event { bits }
    }

    pub fn sym_diff(&self, other: &Event) -> Event {
        self.same_universe(other);
        let mut bits = self.bits.clone();
        bits.symmetric_difference_with(&other.bits);
        Event { bits }
    }

    pub fn complement(&self) -> Event {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Event { bits }
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.same_universe(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.same_universe(other);
        self.bits.is_disjoint(&other.bits)
    }
}

/// A finite subalgebra, stored as the partition of atoms into its atoms
/// ("blocks"). Blocks are sorted internally and ordered by smallest atom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subalgebra {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl fmt::Debug for Subalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subalgebra{:?}", self.blocks)
    }
}

impl Subalgebra {
    pub fn from_blocks(universe: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; universe];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Precondition("empty block in partition".into()));
            }
            for &x in b {
                if x >= universe {
                    return Err(Error::DomainMismatch(format!(
                        "atom {x} outside a space of {universe} atoms"
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Precondition(format!("atom {x} in two blocks")));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::Precondition(format!("atom {x} not covered by any block")));
        }
        let mut labels = vec![0usize; universe];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                labels[x] = i;
            }
        }
        Ok(Self::from_labels(&labels))
    }

    /// Groups atoms with equal labels into blocks.
    pub fn from_labels<K: Ord + Clone>(labels: &[K]) -> Self {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0; labels.len()];
        // Atoms are visited in index order, so blocks come out ordered by
        // their smallest atom.
        for (x, k) in labels.iter().enumerate() {
            let id = *ids.entry(k.clone()).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(x);
            block_of[x] = id;
        }
        Subalgebra { block_of, blocks }
    }

    pub fn trivial(universe: usize) -> Self {
        Self::from_labels(&vec![0u8; universe])
    }

    pub fn discrete(universe: usize) -> Self {
        Self::from_labels(&(0..universe).collect::<Vec<_>>())
    }

    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn block_event(&self, block: usize) -> Event {
        Event::from_atoms(self.universe(), self.blocks[block].iter().copied()).unwrap()
    }

    /// The subalgebra generated by both, i.e. the common refinement.
    pub fn join(&self, other: &Subalgebra) -> Subalgebra {
        assert_eq!(self.universe(), other.universe(), "subalgebras of different spaces");
        let labels: Vec<(usize, usize)> = (0..self.universe())
            .map(|x| (self.block_of[x], other.block_of[x]))
            .collect();
        Self::from_labels(&labels)
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Subalgebra) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| coarser.block_of[x] == coarser.block_of[b[0]]))
    }

    /// True when `e` is a union of blocks.
    pub fn contains_event(&self, e: &Event) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| e.contains(x) == e.contains(b[0])))
    }

    /// All elements of the subalgebra (unions of blocks), in bitmask order.
    pub fn elements(&self, cap: usize) -> Result<Vec<Event>> {
        let k = self.blocks.len();
        if k >= usize::BITS as usize - 1 || (1usize << k) > cap {
            return Err(Error::resource("subalgebra enumeration", format!("2^{k}"), cap));
        }
        Ok((0..(1usize << k))
            .map(|mask| {
                let atoms = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .flat_map(|i| self.blocks[i].iter().copied());
                Event::from_atoms(self.universe(), atoms).unwrap()
            })
            .collect())
    }
}

/// Coarsest partition in which every input event is a union of blocks.
pub fn generated_subalgebra(space: &AtomSpace, events: &[Event]) -> Result<Subalgebra> {
    for e in events {
        space.check(e)?;
    }
    let signature: Vec<Vec<bool>> = (0..space.len())
        .map(|x| events.iter().map(|e| e.contains(x)).collect())
        .collect();
    Ok(Subalgebra::from_labels(&signature))
}

/// Conditional probability of an event given a subalgebra: one value per
/// block, `μ(a ∩ b) / μ(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalExpectation {
    pub algebra: Subalgebra,
    pub values: Vec<Q>,
}

impl ConditionalExpectation {
    pub fn at_atom(&self, atom: usize) -> &Q {
        &self.values[self.algebra.block_of(atom)]
    }

    /// `Σ_b value(b)·μ(b)`, which equals the measure of the conditioned event.
    pub fn integral(&self, space: &AtomSpace) -> Q {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v * space.measure(&self.algebra.block_event(i)))
            .sum()
    }
}

pub fn conditional_expectation(
    space: &AtomSpace,
    a: &Event,
    algebra: &Subalgebra,
) -> Result<ConditionalExpectation> {
    space.check(a)?;
    check_algebra(space, algebra)?;
    let values = algebra
        .blocks()
        .iter()
        .map(|b| {
            let total: Q = b.iter().map(|&x| space.weight(x)).sum();
            let inside: Q = b.iter().filter(|&&x| a.contains(x)).map(|&x| space.weight(x)).sum();
            inside / total
        })
        .collect();
    Ok(ConditionalExpectation {
        algebra: algebra.clone(),
        values,
    })
}

fn check_algebra(space: &AtomSpace, algebra: &Subalgebra) -> Result<()> {
    if algebra.universe() != space.len() {
        return Err(Error::DomainMismatch(format!(
            "subalgebra over {} atoms used with a space of {} atoms",
            algebra.universe(),
            space.len()
        )));
    }
    Ok(())
}

/// Outcome of an independence test. A failure names two atoms of the
/// generated algebras and a conditioning block where the product rule breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    Dependent {
        a: Event,
        b: Event,
        block: usize,
        product: Q,
        joint: Q,
    },
}

impl Independence {
    pub fn holds(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

/// Conditional independence of the algebras generated by `a_events` and
/// `b_events` over `c`.
///
/// Only atoms of the two generated algebras are tested: conditional
/// probability is additive on disjoint events, so the product rule for all
/// pairs of unions follows from the rule for all pairs of atoms.
pub fn is_independent(
    space: &AtomSpace,
    a_events: &[Event],
    b_events: &[Event],
    c: &Subalgebra,
) -> Result<Independence> {
    let a = generated_subalgebra(space, a_events)?;
    let b = generated_subalgebra(space, b_events)?;
    is_independent_algebras(space, &a, &b, c)
}

pub fn is_independent_algebras(
    space: &AtomSpace,
    a: &Subalgebra,
    b: &Subalgebra,
    c: &Subalgebra,
) -> Result<Independence> {
    check_algebra(space, a)?;
    check_algebra(space, b)?;
    check_algebra(space, c)?;
    let a_cond: Vec<ConditionalExpectation> = (0..a.block_count())
        .map(|i| conditional_expectation(space, &a.block_event(i), c))
        .collect::<Result<_>>()?;
    let b_cond: Vec<ConditionalExpectation> = (0..b.block_count())
        .map(|j| conditional_expectation(space, &b.block_event(j), c))
        .collect::<Result<_>>()?;
    for (i, pa) in a_cond.iter().enumerate() {
        let ea = a.block_event(i);
        for (j, pb) in b_cond.iter().enumerate() {
            let eb = b.block_event(j);
            let joint = conditional_expectation(space, &ea.intersection(&eb), c)?;
            for k in 0..c.block_count() {
                let product = &pa.values[k] * &pb.values[k];
                if product != joint.values[k] {
                    return Ok(Independence::Dependent {
                        a: ea,
                        b: eb,
                        block: k,
                        product,
                        joint: joint.values[k].clone(),
                    });
                }
            }
        }
    }
    Ok(Independence::Independent)
}

/// Equality of types over `c`: for every sign pattern the conditional
/// probabilities of the corresponding meets agree blockwise.
pub fn tp_equal(space: &AtomSpace, a_tuple: &[Event], b_tuple: &[Event], c: &Subalgebra) -> Result<bool> {
    if a_tuple.len() != b_tuple.len() {
        return Err(Error::Precondition(format!(
            "tuples of different lengths {} and {}",
            a_tuple.len(),
            b_tuple.len()
        )));
    }
    for e in a_tuple.iter().chain(b_tuple) {
        space.check(e)?;
    }
    check_algebra(space, c)?;
    let n = a_tuple.len();
    if n >= 24 {
        return Err(Error::resource("sign patterns", format!("2^{n}"), "2^23"));
    }
    let meet = |tuple: &[Event], pattern: usize| {
        tuple.iter().enumerate().fold(space.full_event(), |acc, (i, e)| {
            if pattern >> i & 1 == 1 {
                acc.intersection(e)
            } else {
                acc.difference(e)
            }
        })
    };
    for pattern in 0..(1usize << n) {
        let pa = conditional_expectation(space, &meet(a_tuple, pattern), c)?;
        let pb = conditional_expectation(space, &meet(b_tuple, pattern), c)?;
        if pa.values != pb.values {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A refinement of a space: every source atom is split into one or more
/// refined atoms whose weights sum to its weight. Refined atoms are ordered
/// by (source atom, piece index), so each fiber is a contiguous range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    source: AtomSpace,
    refined: AtomSpace,
    parent: Vec<usize>,
    offsets: Vec<usize>,
}

impl Refinement {
    pub fn identity(space: &AtomSpace) -> Self {
        Refinement {
            source: space.clone(),
            refined: space.clone(),
            parent: (0..space.len()).collect(),
            offsets: (0..=space.len()).collect(),
        }
    }

    pub fn source(&self) -> &AtomSpace {
        &self.source
    }

    pub fn refined(&self) -> &AtomSpace {
        &self.refined
    }

    pub fn parent(&self, refined_atom: usize) -> usize {
        self.parent[refined_atom]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Refined atoms over a source atom.
    pub fn fiber(&self, atom: usize) -> std::ops::Range<usize> {
        self.offsets[atom]..self.offsets[atom + 1]
    }

    /// Refined atom number `piece` over `atom`.
    pub fn piece(&self, atom: usize, piece: usize) -> usize {
        let r = self.fiber(atom);
        assert!(piece < r.len(), "atom {atom} has only {} pieces", r.len());
        r.start + piece
    }

    /// Preimage of a source event.
    pub fn lift(&self, e: &Event) -> Event {
        assert_eq!(e.universe(), self.source.len(), "event from a different space");
        let mut out = Event::empty(self.refined.len());
        for x in e.atoms() {
            for y in self.fiber(x) {
                out.insert(y);
            }
        }
        out
    }

    /// Image of a refined event (the smallest source event covering it).
    pub fn project(&self, e: &Event) -> Event {
        assert_eq!(e.universe(), self.refined.len(), "event from a different space");
        Event::from_atoms(self.source.len(), e.atoms().map(|y| self.parent[y])).unwrap()
    }

    /// Push the refined measure forward to the source atoms.
    pub fn pushforward(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.source.len()];
        for (y, &x) in self.parent.iter().enumerate() {
            out[x] += self.refined.weight(y);
        }
        out
    }

    /// Checks that fibers reconstitute the source weights exactly.
    pub fn validate(&self) -> Result<()> {
        for (x, got) in self.pushforward().iter().enumerate() {
            if got != self.source.weight(x) {
                return Err(Error::SplitMismatch {
                    atom: x,
                    got: fmt_q(got),
                    expected: fmt_q(self.source.weight(x)),
                });
            }
        }
        Ok(())
    }

    /// Rebuilds a refinement from an explicit parent table (e.g. a
    /// deserialized witness). Parents must be non-decreasing.
    pub fn from_parts(source: AtomSpace, refined: AtomSpace, parent: Vec<usize>) -> Result<Self> {
        if parent.len() != refined.len() {
            return Err(Error::DomainMismatch("parent table length differs from refined space".into()));
        }
        if parent.windows(2).any(|w| w[0] > w[1]) || parent.iter().any(|&p| p >= source.len()) {
            return Err(Error::Precondition("parent table must be sorted and in range".into()));
        }
        let mut offsets = vec![0; source.len() + 1];
        for &p in &parent {
            offsets[p + 1] += 1;
        }
        for i in 0..source.len() {
            if offsets[i + 1] == 0 {
                return Err(Error::Precondition(format!("atom {i} has an empty fiber")));
            }
            offsets[i + 1] += offsets[i];
        }
        let r = Refinement {
            source,
            refined,
            parent,
            offsets,
        };
        r.validate()?;
        Ok(r)
    }
}

/// Splits each atom according to `plan[atom]`.
pub fn refine(space: &AtomSpace, plan: &[Vec<Q>]) -> Result<Refinement> {
    if plan.len() != space.len() {
        return Err(Error::DomainMismatch(format!(
            "plan covers {} atoms, space has {}",
            plan.len(),
            space.len()
        )));
    }
    let mut weights = Vec::new();
    let mut parent = Vec::new();
    let mut offsets = vec![0];
    for (x, split) in plan.iter().enumerate() {
        let got: Q = split.iter().sum();
        if split.is_empty() || split.iter().any(|w| *w <= Q::zero()) || &got != space.weight(x) {
            return Err(Error::SplitMismatch {
                atom: x,
                got: fmt_q(&got),
                expected: fmt_q(space.weight(x)),
            });
        }
        weights.extend(split.iter().cloned());
        parent.extend(std::iter::repeat_n(x, split.len()));
        offsets.push(weights.len());
    }
    Ok(Refinement {
        source: space.clone(),
        refined: AtomSpace::new(weights)?,
        parent,
        offsets,
    })
}
