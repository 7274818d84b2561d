//! Approximate conjugacy witnesses between actions with the same IRS.
//!
//! The factor step compares an action `α` with an extension `β → α`. Both
//! Schreier graphings are cut along `Z` and its preimage, components are
//! classified by their canonical colored form, and `ρ` sends each component
//! of `α` onto a component of `β` of the same class through the two
//! canonical maps. Vertex colors carry the parameter sets and a marker for
//! every cut edge leaving the vertex, so `ρ` can only disagree with the
//! actions at atoms incident to `Z`.
//!
//! Weights are reconciled by splitting each atom of an `α`-orbit into one
//! piece per `β`-orbit lying over it, with that orbit's atom weight, the
//! same way across the whole orbit; the refined action moves piece `j` of
//! `x` to piece `j` of `g·x`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::action::{Action, FactorMap, Perm, Word};
use crate::canonical::{canonical_colored_component, CanonLimits, ColoredComponentClass, ColoredGraph};
use crate::error::{Error, Result};
use crate::graphing::{
    build_schreier, components, edge_measure, hyperfinite_decomposition, incident_vertices, symmetrize, EdgeSet,
    Graphing, Strategy,
};
use crate::irs::{empirical_irs, require_equal};
use crate::joining::join_over_irs;
use crate::measure::{refine, AtomSpace, Event, Refinement};
use crate::rational::{fmt_q, Q};

/// How the edge set `Z` is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutChoice {
    /// `Z = ∅`; the witness is an exact conjugacy.
    Exact,
    /// A caller-supplied edge set on the graphing of `α`.
    Edges(EdgeSet),
    /// Components of at most this many atoms.
    Bound(usize),
    /// Error budget `epsilon`. With a bound, the decomposition must reach
    /// `μ_E(Z) < epsilon/(2d)`; without one, `Z = ∅` meets any budget.
    Budget { epsilon: Q, bound: Option<usize> },
}

/// A pmp bijection between refinements of two spaces with its error event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyWitness {
    /// Source atom of each refined left atom (non-decreasing).
    pub left_parent: Vec<usize>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub left_weights: Vec<Q>,
    pub right_parent: Vec<usize>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub right_weights: Vec<Q>,
    /// `rho[i]` is the refined right atom matched with refined left atom `i`.
    pub rho: Vec<usize>,
    /// Tested words, closed under inverses, as signed generator letters.
    pub words: Vec<Vec<i32>>,
    pub params: Vec<String>,
    /// Refined left atoms where some tested word fails to commute with `rho`.
    pub error: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub bound: Q,
    /// Edge measure of the cut edges the bound was derived from.
    #[serde(with = "crate::rational::serde_q")]
    pub cut_measure: Q,
}

impl ConjugacyWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn word_list(&self) -> Vec<Word> {
        self.words.iter().map(|w| Word::new(w.iter().copied())).collect()
    }

    /// Measure of the stored error event in the refined left space.
    pub fn error_measure(&self) -> Q {
        self.error.iter().map(|&i| &self.left_weights[i]).sum()
    }
}

/// Lifts an action to a refinement: piece `j` of `x` goes to piece `j` of `g·x`.
pub fn lift_action(action: &Action, r: &Refinement) -> Result<Action> {
    let mut gens = Vec::new();
    for (g, p) in action.generators().iter().enumerate() {
        let mut images = Vec::with_capacity(r.refined().len());
        for y in 0..r.refined().len() {
            let x = r.parent(y);
            let j = y - r.fiber(x).start;
            let to = p.apply(x);
            if r.fiber(to).len() != r.fiber(x).len() {
                return Err(Error::Precondition(format!(
                    "generator {} moves atom {x} ({} pieces) to atom {to} ({} pieces)",
                    action.names()[g],
                    r.fiber(x).len(),
                    r.fiber(to).len()
                )));
            }
            images.push(r.piece(to, j));
        }
        gens.push(Perm::from_images(images)?);
    }
    Action::new(r.refined().clone(), action.names().to_vec(), gens)
}

fn error_event(left: &Action, right: &Action, rho: &[usize], words: &[Word]) -> Event {
    let perms_l: Vec<Perm> = words.iter().map(|w| left.evaluate_word(w)).collect();
    let perms_r: Vec<Perm> = words.iter().map(|w| right.evaluate_word(w)).collect();
    let bad = (0..rho.len()).filter(|&x| {
        perms_l
            .iter()
            .zip(&perms_r)
            .any(|(pl, pr)| rho[pl.apply(x)] != pr.apply(rho[x]))
    });
    Event::from_atoms(rho.len(), bad).unwrap()
}

/// Parameter pair: a name, an event on `α`'s space and one on `β`'s space.
pub type ParamPair = (String, Event, Event);

fn choose_cut(g: &Graphing, choice: &CutChoice) -> Result<EdgeSet> {
    match choice {
        CutChoice::Exact => Ok(EdgeSet::empty(g.len())),
        CutChoice::Edges(z) => {
            g.check_edge_set(z)?;
            Ok(z.clone())
        }
        CutChoice::Bound(m) => Ok(hyperfinite_decomposition(g, *m, Strategy::Auto)?.z),
        CutChoice::Budget { bound: None, .. } => Ok(EdgeSet::empty(g.len())),
        CutChoice::Budget {
            epsilon,
            bound: Some(m),
        } => {
            let cert = hyperfinite_decomposition(g, *m, Strategy::Auto)?;
            if cert.mu_e.is_zero() {
                return Ok(cert.z);
            }
            let d = Q::from_integer((g.degree() as i64).into());
            let required = epsilon / (Q::from_integer(2.into()) * d);
            if cert.mu_e >= required {
                return Err(Error::BudgetExceeded {
                    achieved: fmt_q(&cert.mu_e),
                    required: fmt_q(&required),
                });
            }
            Ok(cert.z)
        }
    }
}

/// Colored graph of one component: parameter bits, then one marker bit per
/// word whose edge from the vertex was cut.
fn component_graph(g: &Graphing, z: &EdgeSet, word_perms: &[Perm], comp: &[usize]) -> ColoredGraph {
    let k = g.params().len();
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let vertex_colors = comp
        .iter()
        .map(|&x| {
            let stubs = word_perms
                .iter()
                .enumerate()
                .filter(|(_, p)| z.contains(x, p.apply(x)))
                .fold(0u64, |acc, (s, _)| acc | 1 << (k + s));
            g.vertex_color(x) | stubs
        })
        .collect();
    let mut edges = Vec::new();
    for &x in comp {
        for &(y, c) in g.neighbors(x) {
            if !z.contains(x, y) {
                edges.push((local[&x], local[&y], c));
            }
        }
    }
    ColoredGraph { vertex_colors, edges }
}

struct Classified {
    comps: Vec<Vec<usize>>,
    classes: Vec<ColoredComponentClass>,
    /// `maps[c][i]`: canonical position of `comps[c][i]`.
    maps: Vec<Vec<usize>>,
}

fn classify(g: &Graphing, z: &EdgeSet) -> Result<Classified> {
    let perms: Vec<Perm> = g.words().iter().map(|w| g.action().evaluate_word(w)).collect();
    let comps = components(g, z)?;
    let mut classes = Vec::with_capacity(comps.len());
    let mut maps = Vec::with_capacity(comps.len());
    let mut cache: HashMap<ColoredGraph, (ColoredComponentClass, Vec<usize>)> = HashMap::new();
    for comp in &comps {
        let cg = component_graph(g, z, &perms, comp);
        let (class, map) = match cache.get(&cg) {
            Some(hit) => hit.clone(),
            None => {
                let r = canonical_colored_component(&cg, None, CanonLimits::default())?;
                cache.insert(cg, r.clone());
                r
            }
        };
        classes.push(class);
        maps.push(map);
    }
    Ok(Classified { comps, classes, maps })
}

/// The factor step: `π: β → α`, parameters with `B_i = π⁻¹(A_i)`.
pub fn conjugacy_witness_factor(
    alpha: &Action,
    beta: &Action,
    pi: &FactorMap,
    params: &[ParamPair],
    words: &[Word],
    cut: &CutChoice,
) -> Result<ConjugacyWitness> {
    if &pi.source != beta || &pi.target != alpha {
        return Err(Error::DomainMismatch("factor map must go from β onto α".into()));
    }
    pi.check().into_result()?;
    for (name, a, b) in params {
        alpha.space().check(a)?;
        beta.space().check(b)?;
        let pulled = pi.pullback(a);
        if &pulled != b {
            let y = pulled.sym_diff(b).atoms().next().unwrap();
            return Err(Error::Precondition(format!(
                "parameter {name}: preimage under π differs from the given set at atom {y}"
            )));
        }
    }
    require_equal(&empirical_irs(alpha), &empirical_irs(beta))?;
    let k = params.len();
    let sym = symmetrize(words);
    if k + sym.len() > 64 {
        return Err(Error::resource(
            "component colors",
            format!("{k} parameters and {} words", sym.len()),
            64,
        ));
    }
    let pa: Vec<(String, Event)> = params.iter().map(|(n, a, _)| (n.clone(), a.clone())).collect();
    let pb: Vec<(String, Event)> = params.iter().map(|(n, _, b)| (n.clone(), b.clone())).collect();
    let ga = build_schreier(alpha, &sym, &pa)?;
    let gb = build_schreier(beta, &sym, &pb)?;
    let z = choose_cut(&ga, cut)?;
    let z_beta = EdgeSet::from_pairs(
        beta.len(),
        gb.edges()
            .map(|(e, _)| e)
            .filter(|&(y, y2)| z.contains(pi.apply(y), pi.apply(y2))),
    );
    gb.check_edge_set(&z_beta)?;
    let cut_measure = edge_measure(&ga, &z)?.mu_e;
    let v_inc = incident_vertices(&ga, &z)?;

    // Pieces over each α-orbit: one per β-orbit over it, by smallest atom.
    let orbits_a = alpha.orbits();
    let mut orbit_of = vec![0; alpha.len()];
    for (i, o) in orbits_a.iter().enumerate() {
        for &x in o {
            orbit_of[x] = i;
        }
    }
    let mut pieces: Vec<Vec<Q>> = vec![Vec::new(); orbits_a.len()];
    for o in beta.orbits() {
        let target = orbit_of[pi.apply(o[0])];
        if o.len() != orbits_a[target].len() {
            return Err(Error::Precondition(format!(
                "β-orbit of atom {} has {} atoms but covers an α-orbit of {}",
                o[0],
                o.len(),
                orbits_a[target].len()
            )));
        }
        pieces[target].push(beta.space().weight(o[0]).clone());
    }
    let plan: Vec<Vec<Q>> = (0..alpha.len()).map(|x| pieces[orbit_of[x]].clone()).collect();
    let left = refine(alpha.space(), &plan)?;
    let right = Refinement::identity(beta.space());

    let ca = classify(&ga, &z)?;
    let cb = classify(&gb, &z_beta)?;

    // Group α-pieces and β-components by (class, atom weight).
    type Key = (ColoredComponentClass, Q);
    let mut groups_a: BTreeMap<Key, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, comp) in ca.comps.iter().enumerate() {
        for (j, w) in pieces[orbit_of[comp[0]]].iter().enumerate() {
            groups_a.entry((ca.classes[c].clone(), w.clone())).or_default().push((c, j));
        }
    }
    let mut groups_b: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for (d, comp) in cb.comps.iter().enumerate() {
        groups_b
            .entry((cb.classes[d].clone(), beta.space().weight(comp[0]).clone()))
            .or_default()
            .push(d);
    }
    for key in groups_a.keys().chain(groups_b.keys()) {
        let na = groups_a.get(key).map_or(0, Vec::len);
        let nb = groups_b.get(key).map_or(0, Vec::len);
        if na != nb {
            return Err(Error::Precondition(format!(
                "component class {} with atom weight {} occurs {na} times over α and {nb} times in β",
                key.0.encoding(),
                fmt_q(&key.1)
            )));
        }
    }

    let mut rho = vec![usize::MAX; left.refined().len()];
    for (key, alist) in &groups_a {
        let blist = &groups_b[key];
        for (&(c, j), &d) in alist.iter().zip(blist) {
            let mut at_position = vec![0; cb.comps[d].len()];
            for (i, &p) in cb.maps[d].iter().enumerate() {
                at_position[p] = cb.comps[d][i];
            }
            for (i, &x) in ca.comps[c].iter().enumerate() {
                rho[left.piece(x, j)] = at_position[ca.maps[c][i]];
            }
        }
    }
    if rho.contains(&usize::MAX) {
        return Err(Error::Internal("matching left a refined atom unassigned".into()));
    }

    let alpha_hat = lift_action(alpha, &left)?;
    let error = error_event(&alpha_hat, beta, &rho, &sym);
    if !error.is_subset(&left.lift(&v_inc)) {
        return Err(Error::Internal("error event escapes the cut-incident atoms".into()));
    }
    let two = Q::from_integer(2.into());
    let mv = alpha.space().measure(&v_inc);
    let bound = std::cmp::min(mv, &two * &cut_measure);
    let witness = ConjugacyWitness {
        left_parent: left.parents().to_vec(),
        left_weights: left.refined().weights().to_vec(),
        right_parent: right.parents().to_vec(),
        right_weights: right.refined().weights().to_vec(),
        rho,
        words: sym.iter().map(|w| w.letters().to_vec()).collect(),
        params: params.iter().map(|p| p.0.clone()).collect(),
        error: error.to_vec(),
        bound,
        cut_measure,
    };
    let report = verify_witness(&witness, alpha, beta, params);
    if !report.passed() {
        return Err(Error::Internal(format!("constructed witness fails verification: {}", report.failures.join("; "))));
    }
    Ok(witness)
}

/// Mode for the full pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Bound(usize),
    Epsilon { epsilon: Q, bound: Option<usize> },
}

/// Witness between `α` and `β` through their joining over the IRS: two
/// factor steps onto the joining, composed as `ρ2⁻¹ ∘ ρ1`.
pub fn approximate_conjugacy(alpha: &Action, beta: &Action, words: &[Word], mode: &Mode) -> Result<ConjugacyWitness> {
    let joined = join_over_irs(alpha, beta)?;
    let cut = match mode {
        Mode::Exact => CutChoice::Exact,
        Mode::Bound(m) => CutChoice::Bound(*m),
        Mode::Epsilon { epsilon, bound } => CutChoice::Budget {
            epsilon: epsilon / Q::from_integer(2.into()),
            bound: *bound,
        },
    };
    let zeta = &joined.action;
    let w1 = conjugacy_witness_factor(alpha, zeta, &joined.p1, &[], words, &cut)?;
    let w2 = conjugacy_witness_factor(beta, zeta, &joined.p2, &[], words, &cut)?;
    let mut inv2 = vec![0; zeta.len()];
    for (u, &z) in w2.rho.iter().enumerate() {
        inv2[z] = u;
    }
    let rho: Vec<usize> = w1.rho.iter().map(|&z| inv2[z]).collect();

    let left = Refinement::from_parts(alpha.space().clone(), AtomSpace::new(w1.left_weights.clone())?, w1.left_parent.clone())?;
    let right = Refinement::from_parts(beta.space().clone(), AtomSpace::new(w2.left_weights.clone())?, w2.left_parent.clone())?;
    let sym = symmetrize(words);
    let error = error_event(&lift_action(alpha, &left)?, &lift_action(beta, &right)?, &rho, &sym);
    let mut allowed = Event::from_atoms(rho.len(), w1.error.iter().copied())?;
    let err2: std::collections::HashSet<usize> = w2.error.iter().map(|&u| w2.rho[u]).collect();
    for (x, z) in w1.rho.iter().enumerate() {
        if err2.contains(z) {
            allowed.insert(x);
        }
    }
    if !error.is_subset(&allowed) {
        return Err(Error::Internal("composite error escapes the union of the step errors".into()));
    }
    let witness = ConjugacyWitness {
        left_parent: w1.left_parent,
        left_weights: w1.left_weights,
        right_parent: w2.left_parent,
        right_weights: w2.left_weights,
        rho,
        words: sym.iter().map(|w| w.letters().to_vec()).collect(),
        params: Vec::new(),
        error: error.to_vec(),
        bound: w1.bound + w2.bound,
        cut_measure: w1.cut_measure + w2.cut_measure,
    };
    let report = verify_witness(&witness, alpha, beta, &[]);
    if !report.passed() {
        return Err(Error::Internal(format!("composite witness fails verification: {}", report.failures.join("; "))));
    }
    Ok(witness)
}

/// Independent recomputation of a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub failures: Vec<String>,
    #[serde(with = "crate::rational::serde_q")]
    pub measured_error: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub claimed_bound: Q,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rechecks the refinements, the bijection, parameter transport, the error
/// event and the bound chain `μ(error) ≤ bound ≤ 2·cut_measure`.
pub fn verify_witness(w: &ConjugacyWitness, alpha: &Action, beta: &Action, params: &[ParamPair]) -> VerifyReport {
    let mut report = VerifyReport {
        failures: Vec::new(),
        measured_error: Q::zero(),
        claimed_bound: w.bound.clone(),
    };
    let mut fail = |m: String| report.failures.push(m);
    let side = |space: &AtomSpace, weights: &[Q], parent: &[usize], action: &Action| -> Result<(Refinement, Action)> {
        let r = Refinement::from_parts(space.clone(), AtomSpace::new(weights.to_vec())?, parent.to_vec())?;
        let lifted = lift_action(action, &r)?;
        Ok((r, lifted))
    };
    let (left, alpha_hat) = match side(alpha.space(), &w.left_weights, &w.left_parent, alpha) {
        Ok(v) => v,
        Err(e) => {
            fail(format!("left refinement: {e}"));
            return report;
        }
    };
    let (right, beta_hat) = match side(beta.space(), &w.right_weights, &w.right_parent, beta) {
        Ok(v) => v,
        Err(e) => {
            fail(format!("right refinement: {e}"));
            return report;
        }
    };
    let n = left.refined().len();
    if w.rho.len() != n || right.refined().len() != n {
        fail(format!(
            "bijection has {} entries between {} and {} refined atoms",
            w.rho.len(),
            n,
            right.refined().len()
        ));
        return report;
    }
    let mut hit = vec![false; n];
    for (x, &y) in w.rho.iter().enumerate() {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            fail(format!("bijection is not one-to-one at refined atom {x}"));
            return report;
        }
        if left.refined().weight(x) != right.refined().weight(y) {
            fail(format!(
                "refined atom {x} (weight {}) is sent to {y} (weight {})",
                fmt_q(left.refined().weight(x)),
                fmt_q(right.refined().weight(y))
            ));
        }
    }
    if params.len() != w.params.len() {
        fail(format!("{} parameters supplied, witness records {}", params.len(), w.params.len()));
    }
    let rho_perm = Perm::from_images(w.rho.clone()).expect("checked above");
    for (i, (name, a, b)) in params.iter().enumerate() {
        if w.params.get(i) != Some(name) {
            fail(format!("parameter {i} is named {name}, witness records {:?}", w.params.get(i)));
        }
        let moved = rho_perm.image_event(&left.lift(a));
        let target = right.lift(b);
        if moved != target {
            let x = moved.sym_diff(&target).atoms().next().unwrap();
            fail(format!("parameter {name} is not transported exactly (refined right atom {x})"));
        }
    }
    let words = w.word_list();
    let error = error_event(&alpha_hat, &beta_hat, &w.rho, &words);
    let stored = match Event::from_atoms(n, w.error.iter().copied()) {
        Ok(e) => e,
        Err(e) => {
            fail(format!("stored error event: {e}"));
            return report;
        }
    };
    if error != stored {
        let x = error.sym_diff(&stored).atoms().next().unwrap();
        fail(format!("error event differs from recomputation at refined atom {x}"));
    }
    let measured = left.refined().measure(&error);
    if measured > w.bound {
        fail(format!(
            "measured error {} exceeds claimed bound {}",
            fmt_q(&measured),
            fmt_q(&w.bound)
        ));
    }
    if w.bound > Q::from_integer(2.into()) * &w.cut_measure {
        fail(format!(
            "claimed bound {} exceeds twice the cut measure {}",
            fmt_q(&w.bound),
            fmt_q(&w.cut_measure)
        ));
    }
    report.measured_error = measured;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn act(n: usize, gens: &[&[Vec<usize>]]) -> Action {
        let gens = gens.iter().map(|c| Perm::from_cycles(n, c).unwrap()).collect();
        Action::with_default_names(AtomSpace::uniform(n), gens).unwrap()
    }

    fn cyc(n: usize) -> Action {
        let p = Perm::from_images((0..n).map(|x| (x + 1) % n).collect()).unwrap();
        Action::with_default_names(AtomSpace::uniform(n), vec![p]).unwrap()
    }

    #[test]
    fn collapse_is_split_exactly() {
        let a = act(2, &[&[vec![0, 1]]]);
        let b = act(4, &[&[vec![0, 1], vec![2, 3]]]);
        let pi = FactorMap::new(b.clone(), a.clone(), vec![0, 1, 0, 1]).unwrap();
        let w = conjugacy_witness_factor(&a, &b, &pi, &[], &[Word::generator(0)], &CutChoice::Exact).unwrap();
        assert_eq!(w.left_weights, vec![q(1, 4); 4]);
        assert_eq!(w.left_parent, vec![0, 0, 1, 1]);
        assert!(w.error.is_empty());
        assert_eq!(w.bound, q(0, 1));
        assert!(verify_witness(&w, &a, &b, &[]).passed());
    }

    #[test]
    fn identity_factor_is_exact() {
        let a = act(6, &[&[vec![0, 1, 2], vec![3, 4, 5]], &[vec![0, 3]]]);
        let w = conjugacy_witness_factor(
            &a,
            &a,
            &FactorMap::identity(&a),
            &[],
            &[Word::generator(0), Word::generator(1)],
            &CutChoice::Exact,
        )
        .unwrap();
        assert!(w.error.is_empty());
    }

    #[test]
    fn hundred_cycle_with_forced_bound() {
        let a = cyc(100);
        let g = [Word::generator(0)];
        let w = conjugacy_witness_factor(&a, &a, &FactorMap::identity(&a), &[], &g, &CutChoice::Bound(20)).unwrap();
        assert_eq!(w.cut_measure, q(1, 10));
        assert!(w.bound <= q(1, 5));
        assert!(w.error_measure() <= w.bound);
    }

    #[test]
    fn pipeline_examples() {
        let g = [Word::generator(0)];
        let a = act(2, &[&[vec![0, 1]]]);
        let b = act(4, &[&[vec![0, 1], vec![2, 3]]]);
        let w = approximate_conjugacy(&a, &b, &g, &Mode::Exact).unwrap();
        assert!(w.error.is_empty());
        assert!(verify_witness(&w, &a, &b, &[]).passed());
        let w = approximate_conjugacy(&a, &a, &g, &Mode::Exact).unwrap();
        assert!(w.error.is_empty());
        let c4 = cyc(4);
        assert!(matches!(approximate_conjugacy(&a, &c4, &g, &Mode::Exact), Err(Error::IrsMismatch { .. })));
    }

    #[test]
    fn parameters_are_transported() {
        let a = act(2, &[&[vec![0, 1]]]);
        let b = act(4, &[&[vec![0, 1], vec![2, 3]]]);
        let pi = FactorMap::new(b.clone(), a.clone(), vec![0, 1, 0, 1]).unwrap();
        let pa = a.space().event([0]).unwrap();
        let pb = b.space().event([0, 2]).unwrap();
        let params = vec![("A".to_string(), pa.clone(), pb)];
        let w = conjugacy_witness_factor(&a, &b, &pi, &params, &[Word::generator(0)], &CutChoice::Exact).unwrap();
        assert!(verify_witness(&w, &a, &b, &params).passed());
        let wrong = vec![("A".to_string(), pa, b.space().event([0]).unwrap())];
        assert!(matches!(
            conjugacy_witness_factor(&a, &b, &pi, &wrong, &[Word::generator(0)], &CutChoice::Exact),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fault_injection_is_caught() {
        let a = cyc(12);
        let g = [Word::generator(0)];
        let w = conjugacy_witness_factor(&a, &a, &FactorMap::identity(&a), &[], &g, &CutChoice::Bound(4)).unwrap();
        assert!(verify_witness(&w, &a, &a, &[]).passed());
        let mut bad = w.clone();
        bad.rho.swap(0, 5);
        let r = verify_witness(&bad, &a, &a, &[]);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.contains("error event differs")));
        let mut low = bad.clone();
        low.error = error_event(&a, &a, &low.rho, &low.word_list()).to_vec();
        low.bound = q(0, 1);
        let r = verify_witness(&low, &a, &a, &[]);
        assert!(r.failures.iter().any(|f| f.contains("exceeds claimed bound")));
        let round = ConjugacyWitness::from_json(&w.to_json()).unwrap();
        assert_eq!(round, w);
    }

    #[test]
    fn budget_is_enforced() {
        let a = cyc(100);
        let g = [Word::generator(0)];
        let id = FactorMap::identity(&a);
        let ok = CutChoice::Budget {
            epsilon: q(1, 1),
            bound: Some(20),
        };
        assert!(conjugacy_witness_factor(&a, &a, &id, &[], &g, &ok).is_ok());
        let tight = CutChoice::Budget {
            epsilon: q(1, 10),
            bound: Some(20),
        };
        assert!(matches!(
            conjugacy_witness_factor(&a, &a, &id, &[], &g, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
