//! Bicolored Schreier graphings and bounded-component decompositions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;

use crate::action::{Action, Word};
use crate::error::{Error, Result};
use crate::measure::{AtomSpace, Event};
use crate::rational::{fmt_q, Q};

/// Schreier graphing of an action relative to a word set `S`, with vertex
/// colors from named parameter events.
///
/// `S` is closed under inverses on construction (a word and its inverse
/// produce swapped ordered pairs, so the edge relation is symmetric either
/// way, but edge colors only match the edge relation both ways when `S` is
/// symmetric). Identity words are dropped. Edge colors are bitmasks over
/// the indices of [`Graphing::words`], so at most 64 words are allowed.
#[derive(Clone, Debug)]
pub struct Graphing {
    action: Action,
    words: Vec<Word>,
    params: Vec<(String, Event)>,
    edges: BTreeMap<(usize, usize), u64>,
    out: Vec<Vec<(usize, u64)>>,
    vertex_colors: Vec<u64>,
    degree: usize,
}

/// Closes a word list under inverses, drops the identity and duplicates,
/// and sorts by length, then letters with `g_i` before `g_i⁻¹` before `g_{i+1}`.
pub fn symmetrize(words: &[Word]) -> Vec<Word> {
    let set: BTreeSet<(usize, Vec<(u32, bool)>, Word)> = words
        .iter()
        .flat_map(|w| [w.clone(), w.inverse()])
        .filter(|w| !w.is_identity())
        .map(|w| (w.len(), w.letters().iter().map(|l| (l.unsigned_abs(), *l < 0)).collect(), w))
        .collect();
    set.into_iter().map(|(_, _, w)| w).collect()
}

pub fn build_schreier(action: &Action, words: &[Word], params: &[(String, Event)]) -> Result<Graphing> {
    let words = symmetrize(words);
    if words.len() > 64 {
        return Err(Error::resource("edge colors", format!("{} words", words.len()), 64));
    }
    if params.len() > 64 {
        return Err(Error::resource("vertex colors", format!("{} parameters", params.len()), 64));
    }
    for (_, e) in params {
        action.space().check(e)?;
    }
    let n = action.len();
    let perms: Vec<_> = words.iter().map(|w| action.evaluate_word(w)).collect();
    let mut edges = BTreeMap::new();
    for (i, p) in perms.iter().enumerate() {
        for x in 0..n {
            let y = p.apply(x);
            if y != x {
                *edges.entry((x, y)).or_insert(0u64) |= 1 << i;
            }
        }
    }
    let mut out = vec![Vec::new(); n];
    for (&(x, y), &c) in &edges {
        out[x].push((y, c));
    }
    let degree = out.iter().map(Vec::len).max().unwrap_or(0);
    let vertex_colors = (0..n)
        .map(|x| {
            params
                .iter()
                .enumerate()
                .filter(|(_, (_, e))| e.contains(x))
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let g = Graphing {
        action: action.clone(),
        words,
        params: params.to_vec(),
        edges,
        out,
        vertex_colors,
        degree,
    };
    g.check_orbit_weights()?;
    Ok(g)
}

impl Graphing {
    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn space(&self) -> &AtomSpace {
        self.action.space()
    }

    pub fn len(&self) -> usize {
        self.action.len()
    }

    pub fn is_empty(&self) -> bool {
        self.action.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn params(&self) -> &[(String, Event)] {
        &self.params
    }

    /// Maximum number of neighbors of a vertex.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edge_color(&self, x: usize, y: usize) -> Option<u64> {
        self.edges.get(&(x, y)).copied()
    }

    /// Ordered edges with their colors, sorted.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.edges.iter().map(|(&e, &c)| (e, c))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, u64)] {
        &self.out[x]
    }

    pub fn vertex_color(&self, x: usize) -> u64 {
        self.vertex_colors[x]
    }

    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet {
            universe: self.len(),
            pairs: self.edges.keys().copied().collect(),
        }
    }

    /// Unordered edges `{x, y}` with `x < y`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        self.edges.keys().filter(|(x, y)| x < y).copied().collect()
    }

    fn check_orbit_weights(&self) -> Result<()> {
        for &(x, y) in self.edges.keys() {
            if self.space().weight(x) != self.space().weight(y) {
                return Err(Error::WeightMismatch {
                    generator: "graphing edge".into(),
                    from: x,
                    to: y,
                    from_weight: fmt_q(self.space().weight(x)),
                    to_weight: fmt_q(self.space().weight(y)),
                });
            }
        }
        Ok(())
    }

    /// Checks `z` is a symmetric subset of the edges.
    pub fn check_edge_set(&self, z: &EdgeSet) -> Result<()> {
        if z.universe != self.len() {
            return Err(Error::DomainMismatch("edge set from a different graphing".into()));
        }
        for &(x, y) in &z.pairs {
            if !self.edges.contains_key(&(x, y)) {
                return Err(Error::InvalidEdgeSet(format!("({x},{y}) is not an edge")));
            }
            if !z.pairs.contains(&(y, x)) {
                return Err(Error::InvalidEdgeSet(format!("({x},{y}) present without ({y},{x})")));
            }
        }
        Ok(())
    }
}

/// A symmetric set of ordered edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    universe: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn empty(universe: usize) -> Self {
        EdgeSet {
            universe,
            pairs: BTreeSet::new(),
        }
    }

    /// Adds each undirected edge in both directions.
    pub fn from_undirected(universe: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut z = EdgeSet::empty(universe);
        for (x, y) in edges {
            z.insert_undirected(x, y);
        }
        z
    }

    /// An arbitrary set of ordered pairs; symmetry is checked by the graphing.
    pub fn from_pairs(universe: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        EdgeSet {
            universe,
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn insert_undirected(&mut self, x: usize, y: usize) {
        self.pairs.insert((x, y));
        self.pairs.insert((y, x));
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMeasure {
    pub mu_e: Q,
    pub mu_l: Q,
    pub mu_r: Q,
}

/// Left and right edge measures; fails if they differ.
pub fn edge_measure(g: &Graphing, z: &EdgeSet) -> Result<EdgeMeasure> {
    g.check_edge_set(z)?;
    let sp = g.space();
    let mu_l: Q = z.pairs().map(|(x, _)| sp.weight(x)).sum();
    let mu_r: Q = z.pairs().map(|(_, y)| sp.weight(y)).sum();
    if mu_l != mu_r {
        return Err(Error::InvarianceViolation {
            left: fmt_q(&mu_l),
            right: fmt_q(&mu_r),
        });
    }
    Ok(EdgeMeasure {
        mu_e: mu_l.clone(),
        mu_l,
        mu_r,
    })
}

/// Vertices incident to `z`. Checks `μ(V)/2 ≤ μ_E(z) ≤ d·μ(V)`.
pub fn incident_vertices(g: &Graphing, z: &EdgeSet) -> Result<Event> {
    let m = edge_measure(g, z)?;
    let v = Event::from_atoms(g.len(), z.pairs().flat_map(|(x, y)| [x, y]))?;
    let mv = g.space().measure(&v);
    let d = Q::from_integer((g.degree() as i64).into());
    if mv.clone() / Q::from_integer(2.into()) > m.mu_e || m.mu_e > d * &mv {
        return Err(Error::Internal(format!(
            "sandwich violated: μ(V) = {}, μ_E = {}",
            fmt_q(&mv),
            fmt_q(&m.mu_e)
        )));
    }
    Ok(v)
}

/// Connected components of the graphing with `z` removed, ordered by
/// smallest atom, each sorted.
pub fn components(g: &Graphing, z: &EdgeSet) -> Result<Vec<Vec<usize>>> {
    g.check_edge_set(z)?;
    Ok(components_unchecked(g, z))
}

fn components_unchecked(g: &Graphing, z: &EdgeSet) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in g.neighbors(x) {
                if comp[y] == usize::MAX && !z.contains(x, y) {
                    comp[y] = id;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Breadth-first balls around peripheral vertices, cutting the lightest
    /// admissible boundary.
    Greedy,
    /// Optimal cut: dynamic programming on path and cycle components,
    /// branch and bound on components of at most [`EXACT_ATOM_CAP`] atoms.
    Exact,
    /// Exact where available, greedy elsewhere.
    Auto,
}

/// Largest general component handled by the exact strategy.
pub const EXACT_ATOM_CAP: usize = 12;

/// `z` splits the graphing into components of at most `bound` atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub z: EdgeSet,
    pub bound: usize,
    pub mu_e: Q,
    pub components: Vec<Vec<usize>>,
}

impl DecompositionCertificate {
    /// Recomputes components and edge measure from `z`.
    pub fn validate(&self, g: &Graphing) -> Result<()> {
        let comps = components(g, &self.z)?;
        if comps != self.components {
            return Err(Error::Internal("stored components differ from recomputation".into()));
        }
        if let Some(c) = comps.iter().find(|c| c.len() > self.bound) {
            return Err(Error::Internal(format!(
                "component of {} atoms exceeds bound {}",
                c.len(),
                self.bound
            )));
        }
        let m = edge_measure(g, &self.z)?;
        if m.mu_e != self.mu_e {
            return Err(Error::Internal("stored edge measure differs from recomputation".into()));
        }
        Ok(())
    }
}

/// Undirected weight of `{x, y}`: both orientations, `μ(x) + μ(y)`.
fn undirected_weight(sp: &AtomSpace, x: usize, y: usize) -> Q {
    sp.weight(x) + sp.weight(y)
}

pub fn hyperfinite_decomposition(g: &Graphing, bound: usize, strategy: Strategy) -> Result<DecompositionCertificate> {
    if bound == 0 {
        return Err(Error::Precondition("component bound must be at least 1".into()));
    }
    let mut z = EdgeSet::empty(g.len());
    for comp in components_unchecked(g, &z) {
        if comp.len() <= bound {
            continue;
        }
        let cut = match strategy {
            Strategy::Greedy => greedy_cut(g, &comp, bound),
            Strategy::Exact => exact_cut(g, &comp, bound)?,
            Strategy::Auto => match exact_cut(g, &comp, bound) {
                Ok(c) => c,
                Err(Error::Resource { .. }) => greedy_cut(g, &comp, bound),
                Err(e) => return Err(e),
            },
        };
        for (x, y) in cut {
            z.insert_undirected(x, y);
        }
    }
    let mu_e = edge_measure(g, &z)?.mu_e;
    let components = components_unchecked(g, &z);
    let cert = DecompositionCertificate {
        z,
        bound,
        mu_e,
        components,
    };
    cert.validate(g)?;
    Ok(cert)
}

/// Undirected simple adjacency restricted to `comp`.
fn local_adjacency(g: &Graphing, comp: &[usize]) -> (BTreeMap<usize, usize>, Vec<Vec<usize>>) {
    let index: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let adj = comp
        .iter()
        .map(|&x| {
            let mut nb: Vec<usize> = g.neighbors(x).iter().filter_map(|(y, _)| index.get(y).copied()).collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    (index, adj)
}

fn greedy_cut(g: &Graphing, comp: &[usize], bound: usize) -> Vec<(usize, usize)> {
    let sp = g.space();
    let (_, adj) = local_adjacency(g, comp);
    let n = comp.len();
    let mut alive = vec![true; n];
    let mut cut = Vec::new();
    let bfs = |start: usize, alive: &[bool]| -> Vec<usize> {
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if alive[u] && dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    };
    loop {
        // largest remaining piece
        let mut seen = vec![false; n];
        let mut piece: Option<Vec<usize>> = None;
        for s in 0..n {
            if !alive[s] || seen[s] {
                continue;
            }
            let d = bfs(s, &alive);
            let members: Vec<usize> = (0..n).filter(|&v| d[v] != usize::MAX).collect();
            for &v in &members {
                seen[v] = true;
            }
            if members.len() > bound && piece.is_none() {
                piece = Some(members);
            }
        }
        let Some(piece) = piece else { break };
        // pseudo-peripheral start: repeat farthest-vertex search twice
        let mut start = piece[0];
        for _ in 0..2 {
            let d = bfs(start, &alive);
            start = piece
                .iter()
                .copied()
                .max_by_key(|&v| (d[v], std::cmp::Reverse(v)))
                .unwrap();
        }
        let d = bfs(start, &alive);
        let radius = piece.iter().map(|&v| d[v]).max().unwrap();
        let mut best: Option<(Q, usize)> = None;
        for k in 0..=radius {
            let size = piece.iter().filter(|&&v| d[v] <= k).count();
            if size > bound {
                break;
            }
            let cost: Q = piece
                .iter()
                .filter(|&&v| d[v] <= k)
                .flat_map(|&v| adj[v].iter().map(move |&u| (v, u)))
                .filter(|&(_, u)| alive[u] && d[u] > k)
                .map(|(v, u)| undirected_weight(sp, comp[v], comp[u]))
                .sum();
            if best.as_ref().is_none_or(|(c, _)| cost <= *c) {
                best = Some((cost, k));
            }
        }
        let (_, k) = best.expect("the single-vertex ball always fits");
        for &v in piece.iter().filter(|&&v| d[v] <= k) {
            for &u in &adj[v] {
                if alive[u] && d[u] > k {
                    cut.push((comp[v].min(comp[u]), comp[v].max(comp[u])));
                }
            }
        }
        for &v in piece.iter().filter(|&&v| d[v] <= k) {
            alive[v] = false;
        }
    }
    cut
}

fn exact_cut(g: &Graphing, comp: &[usize], bound: usize) -> Result<Vec<(usize, usize)>> {
    let (_, adj) = local_adjacency(g, comp);
    if let Some(order) = path_order(&adj) {
        return Ok(path_cut(g, comp, &order, bound));
    }
    if let Some(order) = cycle_order(&adj) {
        return Ok(cycle_cut(g, comp, &order, bound));
    }
    if comp.len() > EXACT_ATOM_CAP {
        return Err(Error::resource(
            "exact decomposition",
            format!("component of {} atoms that is neither a path nor a cycle", comp.len()),
            EXACT_ATOM_CAP,
        ));
    }
    Ok(branch_and_bound_cut(g, comp, &adj, bound))
}

/// Vertex order along a path, starting at the lower-indexed endpoint.
fn path_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    if n == 1 {
        return Some(vec![0]);
    }
    let ends: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();
    if ends.len() != 2 || adj.iter().any(|a| a.len() > 2) || adj.iter().map(Vec::len).sum::<usize>() != 2 * (n - 1) {
        return None;
    }
    walk(adj, ends[0])
}

/// Vertex order around a cycle starting at vertex 0 toward its smaller neighbor.
fn cycle_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    if adj.len() < 3 || adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    walk(adj, 0)
}

fn walk(adj: &[Vec<usize>], start: usize) -> Option<Vec<usize>> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&u| u != prev && u != start) {
        if order.len() >= adj.len() {
            return None;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    (order.len() == adj.len()).then_some(order)
}

/// Optimal cuts of a path `order[0] - order[1] - ...` into segments of at most
/// `bound` vertices. Edge `i` joins `order[i]` and `order[i+1]`.
fn path_dp(weights: &[Q], len: usize, bound: usize) -> (Q, Vec<usize>) {
    // best[i]: cheapest way to cover the first i vertices with the last segment
    // ending at vertex i-1; a cut after vertex i-1 is paid when i < len.
    let mut best: Vec<Option<Q>> = vec![None; len + 1];
    let mut from = vec![0usize; len + 1];
    best[0] = Some(Q::zero());
    for i in 1..=len {
        let cut = if i < len { weights[i - 1].clone() } else { Q::zero() };
        for j in i.saturating_sub(bound)..i {
            if let Some(b) = &best[j] {
                let c = b + &cut;
                if best[i].as_ref().is_none_or(|cur| c < *cur) {
                    best[i] = Some(c);
                    from[i] = j;
                }
            }
        }
    }
    let mut cuts = Vec::new();
    let mut i = len;
    while i > 0 {
        let j = from[i];
        if j > 0 {
            cuts.push(j - 1);
        }
        i = j;
    }
    cuts.reverse();
    (best[len].clone().unwrap(), cuts)
}

fn path_cut(g: &Graphing, comp: &[usize], order: &[usize], bound: usize) -> Vec<(usize, usize)> {
    let sp = g.space();
    let atoms: Vec<usize> = order.iter().map(|&v| comp[v]).collect();
    let weights: Vec<Q> = atoms.windows(2).map(|w| undirected_weight(sp, w[0], w[1])).collect();
    let (_, cuts) = path_dp(&weights, atoms.len(), bound);
    cuts.into_iter().map(|i| (atoms[i].min(atoms[i + 1]), atoms[i].max(atoms[i + 1]))).collect()
}

fn cycle_cut(g: &Graphing, comp: &[usize], order: &[usize], bound: usize) -> Vec<(usize, usize)> {
    let sp = g.space();
    let atoms: Vec<usize> = order.iter().map(|&v| comp[v]).collect();
    let n = atoms.len();
    let edge = |i: usize| (atoms[i % n], atoms[(i + 1) % n]);
    // Some edge among the first `bound` is cut in every admissible solution.
    let mut best: Option<(Q, Vec<(usize, usize)>)> = None;
    for c in 0..bound.min(n) {
        let (a, b) = edge(c);
        let rotated: Vec<usize> = (0..n).map(|i| atoms[(c + 1 + i) % n]).collect();
        let weights: Vec<Q> = rotated.windows(2).map(|w| undirected_weight(sp, w[0], w[1])).collect();
        let (cost, cuts) = path_dp(&weights, n, bound);
        let total = cost + undirected_weight(sp, a, b);
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            let mut all = vec![(a.min(b), a.max(b))];
            all.extend(cuts.into_iter().map(|i| (rotated[i].min(rotated[i + 1]), rotated[i].max(rotated[i + 1]))));
            best = Some((total, all));
        }
    }
    best.unwrap().1
}

/// Minimum-weight partition into parts of at most `bound` vertices, by
/// assigning vertices in breadth-first order to parts.
fn branch_and_bound_cut(g: &Graphing, comp: &[usize], adj: &[Vec<usize>], bound: usize) -> Vec<(usize, usize)> {
    let sp = g.space();
    let n = comp.len();
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    let w = |a: usize, b: usize| undirected_weight(sp, comp[a], comp[b]);
    let greedy = greedy_cut(g, comp, bound);
    let mut best_cost: Q = greedy.iter().map(|&(x, y)| undirected_weight(sp, x, y)).sum();
    let mut best: Option<Vec<usize>> = None;

    struct St<'a> {
        order: &'a [usize],
        adj: &'a [Vec<usize>],
        part: Vec<usize>,
        sizes: Vec<usize>,
        bound: usize,
    }
    fn rec(
        st: &mut St,
        i: usize,
        cost: Q,
        w: &dyn Fn(usize, usize) -> Q,
        best_cost: &mut Q,
        best: &mut Option<Vec<usize>>,
    ) {
        if cost >= *best_cost && best.is_some() || cost > *best_cost {
            return;
        }
        if i == st.order.len() {
            if best.is_none() || cost < *best_cost {
                *best_cost = cost;
                *best = Some(st.part.clone());
            }
            return;
        }
        let v = st.order[i];
        let parts = st.sizes.len();
        for p in 0..=parts {
            if p < parts && st.sizes[p] >= st.bound {
                continue;
            }
            let added: Q = st.adj[v]
                .iter()
                .filter(|&&u| st.part[u] != usize::MAX && st.part[u] != p)
                .map(|&u| w(v, u))
                .sum();
            if p == parts {
                st.sizes.push(0);
            }
            st.sizes[p] += 1;
            st.part[v] = p;
            rec(st, i + 1, &cost + added, w, best_cost, best);
            st.part[v] = usize::MAX;
            st.sizes[p] -= 1;
            if p == parts {
                st.sizes.pop();
            }
        }
    }
    let mut st = St {
        order: &order,
        adj,
        part: vec![usize::MAX; n],
        sizes: Vec::new(),
        bound,
    };
    rec(&mut st, 0, Q::zero(), &w, &mut best_cost, &mut best);
    let Some(part) = best else {
        return greedy;
    };
    let mut cut = Vec::new();
    for v in 0..n {
        for &u in &adj[v] {
            if v < u && part[v] != part[u] {
                cut.push((comp[v].min(comp[u]), comp[v].max(comp[u])));
            }
        }
    }
    cut
}

/// Minimum edge measure over all edge subsets, by enumeration. Test oracle
/// for the exact strategy; fails above `cap` undirected edges.
pub fn exhaustive_min_cut(g: &Graphing, bound: usize, cap: usize) -> Result<Q> {
    let und = g.undirected_edges();
    if und.len() > cap {
        return Err(Error::resource("exhaustive cut search", format!("2^{}", und.len()), format!("2^{cap}")));
    }
    let mut best: Option<Q> = None;
    for mask in 0u64..(1u64 << und.len()) {
        let z = EdgeSet::from_undirected(g.len(), (0..und.len()).filter(|i| mask >> i & 1 == 1).map(|i| und[i]));
        if components_unchecked(g, &z).iter().all(|c| c.len() <= bound) {
            let m = edge_measure(g, &z)?.mu_e;
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        }
    }
    Ok(best.expect("cutting every edge is always admissible"))
}
