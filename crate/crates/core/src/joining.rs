//! Disintegration over a factor, relative independent joinings and
//! amalgamation over a common subalgebra.
//!
//! All weights are positive, so statements that hold almost everywhere in
//! the measurable setting hold at every atom here.

use std::collections::HashMap;

use num_traits::Zero;

use crate::action::{default_names, Action, FactorMap, Perm, Word};
use crate::canonical::rooted_classes;
use crate::error::{Error, Result};
use crate::irs::{empirical_irs, irs_factor, require_equal};
use crate::measure::{AtomSpace, Event};
use crate::rational::{fmt_q, Q};

/// Conditional distribution of the source on each fiber of a factor map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disintegration {
    /// `fibers[x]` lists `(y, ν(y)/μ(x))` over the atoms `y` mapping to `x`.
    pub fibers: Vec<Vec<(usize, Q)>>,
}

impl Disintegration {
    /// Rebuilds the source weights from the fibers and the target weights.
    pub fn reconstitute(&self, target: &AtomSpace, source_len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); source_len];
        for (x, fiber) in self.fibers.iter().enumerate() {
            for (y, p) in fiber {
                out[*y] = p * target.weight(x);
            }
        }
        out
    }

    pub fn fiber_weight(&self, x: usize, y: usize) -> Option<&Q> {
        self.fibers[x].iter().find(|(z, _)| *z == y).map(|(_, p)| p)
    }
}

/// Needs only measure preservation of `f`, not equivariance.
pub fn disintegrate(f: &FactorMap) -> Result<Disintegration> {
    let check = f.check();
    if let crate::action::FactorCheck::BadShape(_) | crate::action::FactorCheck::NotMeasurePreserving { .. } = check {
        check.into_result()?;
    }
    let mut fibers = vec![Vec::new(); f.target.len()];
    for y in 0..f.source.len() {
        let x = f.map[y];
        fibers[x].push((y, f.source.space().weight(y) / f.target.space().weight(x)));
    }
    Ok(Disintegration { fibers })
}

/// A joining of two actions over a common factor.
#[derive(Clone, Debug)]
pub struct JoinResult {
    pub action: Action,
    /// Joined atom `i` is the pair `pairs[i]`.
    pub pairs: Vec<(usize, usize)>,
    pub p1: FactorMap,
    pub p2: FactorMap,
    pub factor: Action,
    pub pi1: FactorMap,
    pub pi2: FactorMap,
}

fn joined_names(a: &Action, b: &Action) -> Vec<String> {
    let k = a.generator_count().max(b.generator_count());
    if a.generator_count() == k {
        a.names().to_vec()
    } else if b.generator_count() == k {
        b.names().to_vec()
    } else {
        default_names(k)
    }
}

/// Diagonal action on `pairs`; every image must be a listed pair.
fn diagonal_action(a: &Action, b: &Action, pairs: &[(usize, usize)], weights: Vec<Q>) -> Result<Action> {
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let names = joined_names(a, b);
    let mut gens = Vec::new();
    for g in 0..names.len() {
        let w = Word::generator(g);
        let mut images = Vec::with_capacity(pairs.len());
        for &(x, y) in pairs {
            let to = (a.act(&w, x), b.act(&w, y));
            let i = index.get(&to).ok_or_else(|| {
                Error::Internal(format!("diagonal image of ({x},{y}) under generator {g} leaves the product"))
            })?;
            images.push(*i);
        }
        gens.push(Perm::from_images(images)?);
    }
    Action::new(AtomSpace::new(weights)?, names, gens)
}

/// `η(x, y) = μ(x)·ν(y)/λ(w)` on pairs over the same factor atom `w`,
/// computed through the two disintegrations.
pub fn independent_joining(pi1: &FactorMap, pi2: &FactorMap) -> Result<JoinResult> {
    pi1.check().into_result()?;
    pi2.check().into_result()?;
    if pi1.target != pi2.target {
        return Err(Error::DomainMismatch("factor maps have different targets".into()));
    }
    let (alpha, beta, xi) = (&pi1.source, &pi2.source, &pi1.target);
    let d1 = disintegrate(pi1)?;
    let d2 = disintegrate(pi2)?;
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    let mut over2: Vec<Vec<(usize, Q)>> = d2.fibers.clone();
    for fiber in &mut over2 {
        fiber.sort_by_key(|(y, _)| *y);
    }
    for x in 0..alpha.len() {
        let w = pi1.map[x];
        let px = d1.fiber_weight(w, x).expect("x lies in its own fiber");
        for (y, py) in &over2[w] {
            pairs.push((x, *y));
            weights.push(xi.space().weight(w) * px * py);
        }
    }
    let action = diagonal_action(alpha, beta, &pairs, weights)?;
    let p1 = FactorMap {
        source: action.clone(),
        target: alpha.clone(),
        map: pairs.iter().map(|p| p.0).collect(),
    };
    let p2 = FactorMap {
        source: action.clone(),
        target: beta.clone(),
        map: pairs.iter().map(|p| p.1).collect(),
    };
    p1.check().into_result().map_err(|e| Error::Internal(format!("first projection: {e}")))?;
    p2.check().into_result().map_err(|e| Error::Internal(format!("second projection: {e}")))?;
    Ok(JoinResult {
        action,
        pairs,
        p1,
        p2,
        factor: xi.clone(),
        pi1: pi1.clone(),
        pi2: pi2.clone(),
    })
}

/// Joining over the common IRS factor. Every joined atom has the same
/// rooted class as both of its coordinates.
pub fn join_over_irs(alpha: &Action, beta: &Action) -> Result<JoinResult> {
    let theta = empirical_irs(alpha);
    require_equal(&theta, &empirical_irs(beta))?;
    let f = irs_factor(alpha)?;
    let index: HashMap<_, usize> = f.classes.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let beta_classes = rooted_classes(beta);
    let map = beta_classes
        .iter()
        .map(|c| {
            index
                .get(c)
                .copied()
                .ok_or_else(|| Error::Internal(format!("class {} missing from the factor", c.encode())))
        })
        .collect::<Result<Vec<_>>>()?;
    let pi2 = FactorMap {
        source: beta.clone(),
        target: f.action.clone(),
        map,
    };
    let joined = independent_joining(&f.factor, &pi2)?;
    let alpha_classes = rooted_classes(alpha);
    let zeta_classes = rooted_classes(&joined.action);
    for (i, &(x, y)) in joined.pairs.iter().enumerate() {
        if zeta_classes[i] != alpha_classes[x] || zeta_classes[i] != beta_classes[y] {
            return Err(Error::Internal(format!(
                "joined atom ({x},{y}) has class {} but its coordinates have {} and {}",
                zeta_classes[i].encode(),
                alpha_classes[x].encode(),
                beta_classes[y].encode()
            )));
        }
    }
    if empirical_irs(&joined.action) != theta {
        return Err(Error::Internal("joining changed the IRS".into()));
    }
    Ok(joined)
}

/// A subalgebra common to two actions: each atom carries the label of its
/// block, and block `b` on the left corresponds to block `b` on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonAlgebra {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub blocks: usize,
}

impl CommonAlgebra {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let blocks = left.iter().chain(&right).copied().max().map_or(0, |m| m + 1);
        for (side, labels) in [("left", &left), ("right", &right)] {
            let mut hit = vec![false; blocks];
            for &l in labels.iter() {
                hit[l] = true;
            }
            if let Some(b) = hit.iter().position(|h| !h) {
                return Err(Error::Precondition(format!("block {b} is empty on the {side} side")));
            }
        }
        Ok(CommonAlgebra { left, right, blocks })
    }

    /// The trivial algebra on two spaces.
    pub fn trivial(left_len: usize, right_len: usize) -> Self {
        CommonAlgebra {
            left: vec![0; left_len],
            right: vec![0; right_len],
            blocks: 1,
        }
    }

    pub fn block_event(&self, right_side: bool, b: usize) -> Event {
        let labels = if right_side { &self.right } else { &self.left };
        Event::from_atoms(labels.len(), (0..labels.len()).filter(|&x| labels[x] == b)).unwrap()
    }
}

/// The amalgam over a common subalgebra, with both projections. The
/// embeddings of events are preimages under the projections.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub action: Action,
    pub pairs: Vec<(usize, usize)>,
    pub p1: FactorMap,
    pub p2: FactorMap,
}

impl Amalgam {
    pub fn embed_left(&self, e: &Event) -> Event {
        self.p1.pullback(e)
    }

    pub fn embed_right(&self, e: &Event) -> Event {
        self.p2.pullback(e)
    }
}

/// Checks the common algebra against both actions and returns the block
/// action it induces, with the two block maps. This is the factor through
/// which the amalgam is an independent joining.
pub fn block_factor(m1: &Action, m2: &Action, z: &CommonAlgebra) -> Result<(FactorMap, FactorMap)> {
    if z.left.len() != m1.len() || z.right.len() != m2.len() {
        return Err(Error::DomainMismatch("common algebra labels do not match the spaces".into()));
    }
    let mut lambda = Vec::with_capacity(z.blocks);
    for b in 0..z.blocks {
        let l = m1.space().measure(&z.block_event(false, b));
        let r = m2.space().measure(&z.block_event(true, b));
        if l != r {
            return Err(Error::Precondition(format!(
                "block {b} has measure {} on the left and {} on the right",
                fmt_q(&l),
                fmt_q(&r)
            )));
        }
        lambda.push(l);
    }
    let names = joined_names(m1, m2);
    let mut gens = Vec::new();
    for g in 0..names.len() {
        let w = Word::generator(g);
        let mut sigma: Vec<Option<(usize, &str, usize)>> = vec![None; z.blocks];
        for (side, action, labels) in [("left", m1, &z.left), ("right", m2, &z.right)] {
            for x in 0..action.len() {
                let (from, to) = (labels[x], labels[action.act(&w, x)]);
                match sigma[from] {
                    None => sigma[from] = Some((to, side, x)),
                    Some((t, s, y)) if t != to => {
                        return Err(Error::Precondition(format!(
                            "generator {} is not equivariant on block {from}: {s} atom {y} goes to block {t}, {side} atom {x} to block {to}",
                            names[g]
                        )))
                    }
                    _ => {}
                }
            }
        }
        let images: Vec<usize> = sigma.into_iter().map(|s| s.expect("blocks are nonempty").0).collect();
        gens.push(Perm::from_images(images).map_err(|e| {
            Error::Precondition(format!("generator {} does not permute the blocks: {e}", names[g]))
        })?);
    }
    let xi = Action::new(AtomSpace::new(lambda)?, names, gens)?;
    let pi1 = FactorMap::new(m1.clone(), xi.clone(), z.left.clone())?;
    let pi2 = FactorMap::new(m2.clone(), xi, z.right.clone())?;
    Ok((pi1, pi2))
}

/// Same-block pairs weighted `μ1(x1)·μ2(x2)/λ(b)`, with the diagonal action.
/// Each required word must have a support that is a union of common blocks,
/// the same blocks on both sides; it then keeps that support in the amalgam.
pub fn amalgamate(m1: &Action, m2: &Action, z: &CommonAlgebra, required: &[Word]) -> Result<Amalgam> {
    let (pi1, _) = block_factor(m1, m2, z)?;
    let lambda = pi1.target.space().clone();
    for w in required {
        let mut blocks: Vec<Option<bool>> = vec![None; z.blocks];
        for (side, action, labels) in [("left", m1, &z.left), ("right", m2, &z.right)] {
            let supp = action.support(w);
            for x in 0..action.len() {
                let inside = supp.contains(x);
                match blocks[labels[x]] {
                    None => blocks[labels[x]] = Some(inside),
                    Some(prev) if prev != inside => {
                        return Err(Error::Precondition(format!(
                            "support of {} is not a union of common blocks: {side} atom {x} in block {} breaks it",
                            w.display(action.names()),
                            labels[x]
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    let mut by_block: Vec<Vec<usize>> = vec![Vec::new(); z.blocks];
    for (y, &b) in z.right.iter().enumerate() {
        by_block[b].push(y);
    }
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    for x in 0..m1.len() {
        let b = z.left[x];
        for &y in &by_block[b] {
            pairs.push((x, y));
            weights.push(m1.space().weight(x) * m2.space().weight(y) / lambda.weight(b));
        }
    }
    let action = diagonal_action(m1, m2, &pairs, weights)?;
    let p1 = FactorMap::new(action.clone(), m1.clone(), pairs.iter().map(|p| p.0).collect())?;
    let p2 = FactorMap::new(action.clone(), m2.clone(), pairs.iter().map(|p| p.1).collect())?;
    let am = Amalgam { action, pairs, p1, p2 };
    for b in 0..z.blocks {
        if am.embed_left(&z.block_event(false, b)) != am.embed_right(&z.block_event(true, b)) {
            return Err(Error::Internal(format!("embeddings disagree on common block {b}")));
        }
    }
    for w in required {
        let supp = am.action.support(w);
        if supp != am.embed_left(&m1.support(w)) || supp != am.embed_right(&m2.support(w)) {
            return Err(Error::Internal(format!(
                "support of {} changed in the amalgam",
                w.display(m1.names())
            )));
        }
    }
    Ok(am)
}
