//! Canonical forms for rooted Schreier graphs and small colored graphs.
//!
//! Rooted Schreier graphs of an action are complete and deterministic, so a
//! breadth-first numbering from the root is already canonical. Components of
//! a graphing after edge removal are not, and go through color refinement
//! with individualization.
//!
//! Byte format of a rooted class: `n:r0;r1;...` where row `ri` lists the
//! image of canonical vertex `0..n` under generator `i`, comma separated.
//! Trailing rows equal to the identity are dropped, so classes from actions
//! listing different numbers of generators compare correctly.
//!
//! Byte format of a colored component: `n|c0,c1,...|i>j:c;...` with vertex
//! colors by canonical position and edges sorted by (source, target). The
//! class is the least (colors, edges) key over the leaves of the search,
//! compared lexicographically; the leaf set is closed under isomorphism, so
//! the minimum is an invariant.

use std::fmt;

use crate::action::{Action, Word};
use crate::error::{Error, Result};

/// Canonical rooted Schreier graph of an atom's orbit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedSchreierClass {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl fmt::Debug for RootedSchreierClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.encode())
    }
}

/// Breadth-first numbering from `root`, scanning `g0, g0⁻¹, g1, g1⁻¹, ...`.
fn bfs_number(n_hint: usize, k: usize, root: usize, step: impl Fn(usize, bool, usize) -> usize) -> Vec<usize> {
    let mut order = vec![root];
    let mut seen = std::collections::HashMap::with_capacity(n_hint);
    seen.insert(root, 0usize);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for g in 0..k {
            for forward in [true, false] {
                let u = step(g, forward, v);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(u) {
                    e.insert(order.len());
                    order.push(u);
                }
            }
        }
    }
    order
}

fn build_class(k: usize, order: &[usize], index_of: impl Fn(usize) -> usize, step: impl Fn(usize, usize) -> usize) -> RootedSchreierClass {
    let n = order.len();
    let mut rows: Vec<Vec<usize>> = (0..k)
        .map(|g| order.iter().map(|&v| index_of(step(g, v))).collect())
        .collect();
    while rows.last().is_some_and(|r| r.iter().enumerate().all(|(i, &j)| i == j)) {
        rows.pop();
    }
    RootedSchreierClass { n, rows }
}

pub fn canonical_rooted_schreier(action: &Action, root: usize) -> RootedSchreierClass {
    let k = action.generator_count();
    let gens = action.generators();
    let invs: Vec<_> = gens.iter().map(|p| p.inverse()).collect();
    let order = bfs_number(16, k, root, |g, fwd, v| if fwd { gens[g].apply(v) } else { invs[g].apply(v) });
    let mut index = vec![usize::MAX; action.len()];
    for (i, &v) in order.iter().enumerate() {
        index[v] = i;
    }
    build_class(k, &order, |v| index[v], |g, v| gens[g].apply(v))
}

/// Rooted classes of every atom, computed once per orbit position.
pub fn rooted_classes(action: &Action) -> Vec<RootedSchreierClass> {
    (0..action.len()).map(|x| canonical_rooted_schreier(action, x)).collect()
}

impl RootedSchreierClass {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn encode(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("{}:{}", self.n, rows.join(";"))
    }

    /// Parses an encoding and checks that it is a canonical table.
    pub fn decode(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::parse(0, format!("class `{text}`: {m}"));
        let (n, rest) = text.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let n: usize = n.parse().map_err(|_| bad("bad size"))?;
        let mut rows = Vec::new();
        if !rest.is_empty() {
            for r in rest.split(';') {
                let row: Vec<usize> = r
                    .split(',')
                    .map(|x| x.parse().map_err(|_| bad("bad entry")))
                    .collect::<Result<_>>()?;
                if row.len() != n {
                    return Err(bad("row length differs from size"));
                }
                rows.push(row);
            }
        }
        let class = RootedSchreierClass { n, rows };
        for r in &class.rows {
            let mut seen = vec![false; n];
            for &x in r {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(bad("row is not a permutation"));
                }
            }
        }
        if n == 0 || class.reroot(0) != class {
            return Err(bad("table is not canonical"));
        }
        Ok(class)
    }

    fn inverse_rows(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| {
                let mut inv = vec![0; self.n];
                for (i, &j) in r.iter().enumerate() {
                    inv[j] = i;
                }
                inv
            })
            .collect()
    }

    /// Endpoint of reading `w` from vertex `v` (last letter first).
    pub fn trace(&self, w: &Word, v: usize) -> usize {
        let inv = self.inverse_rows();
        w.letters().iter().rev().fold(v, |x, &l| {
            let g = l.unsigned_abs() as usize - 1;
            match self.rows.get(g) {
                None => x,
                Some(row) if l > 0 => row[x],
                Some(_) => inv[g][x],
            }
        })
    }

    /// True when `w` is a loop at the root, i.e. `w` lies in the stabilizer.
    pub fn contains_loop(&self, w: &Word) -> bool {
        self.trace(w, 0) == 0
    }

    /// The class of the same graph rooted at canonical vertex `v`.
    pub fn reroot(&self, v: usize) -> RootedSchreierClass {
        let k = self.rows.len();
        let inv = self.inverse_rows();
        let order = bfs_number(self.n, k, v, |g, fwd, x| if fwd { self.rows[g][x] } else { inv[g][x] });
        let mut index = vec![usize::MAX; self.n];
        for (i, &x) in order.iter().enumerate() {
            index[x] = i;
        }
        build_class(k, &order, |x| index[x], |g, x| self.rows[g][x])
    }
}

/// A finite graph with colored vertices and colored directed edges. Vertex
/// and edge colors are bitmasks; each ordered pair carries at most one edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    pub vertex_colors: Vec<u64>,
    pub edges: Vec<(usize, usize, u64)>,
}

impl ColoredGraph {
    pub fn len(&self) -> usize {
        self.vertex_colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_colors.is_empty()
    }

    /// The graph with vertex `v` renamed to `map[v]`.
    pub fn relabeled(&self, map: &[usize]) -> ColoredGraph {
        let mut vertex_colors = vec![0; self.len()];
        for (v, &c) in self.vertex_colors.iter().enumerate() {
            vertex_colors[map[v]] = c;
        }
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b, c)| (map[a], map[b], c)).collect();
        edges.sort_unstable();
        ColoredGraph { vertex_colors, edges }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonLimits {
    pub max_vertices: usize,
    pub max_leaves: usize,
}

impl Default for CanonLimits {
    fn default() -> Self {
        CanonLimits {
            max_vertices: 1024,
            max_leaves: 100_000,
        }
    }
}

/// Canonical class of a colored graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredComponentClass {
    encoding: String,
}

impl ColoredComponentClass {
    pub fn encoding(&self) -> &str {
        &self.encoding
    }
}

type LeafKey = (Vec<u64>, Vec<(usize, usize, u64)>);

struct Search<'a> {
    g: &'a ColoredGraph,
    out: Vec<Vec<(usize, u64)>>,
    inc: Vec<Vec<(usize, u64)>>,
    limits: CanonLimits,
    leaves: usize,
    best: Option<LeafKey>,
    best_maps: Vec<Vec<usize>>,
}

fn rerank<K: Ord + Clone>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let ranks = keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect();
    (ranks, sorted.len())
}

impl Search<'_> {
    fn refine(&self, mut cells: Vec<usize>) -> Vec<usize> {
        let mut count = cells.iter().copied().max().map_or(0, |m| m + 1);
        loop {
            let sigs: Vec<(usize, Vec<(u8, u64, usize)>)> = (0..self.g.len())
                .map(|v| {
                    let mut nb: Vec<(u8, u64, usize)> = self.out[v]
                        .iter()
                        .map(|&(u, c)| (0, c, cells[u]))
                        .chain(self.inc[v].iter().map(|&(u, c)| (1, c, cells[u])))
                        .collect();
                    nb.sort_unstable();
                    (cells[v], nb)
                })
                .collect();
            let (next, next_count) = rerank(&sigs);
            cells = next;
            if next_count == count {
                return cells;
            }
            count = next_count;
        }
    }

    fn leaf(&mut self, pos: Vec<usize>) -> Result<()> {
        self.leaves += 1;
        if self.leaves > self.limits.max_leaves {
            return Err(Error::resource(
                "component canonicalization",
                format!("more than {} search leaves", self.limits.max_leaves),
                self.limits.max_leaves,
            ));
        }
        let relabeled = self.g.relabeled(&pos);
        let key = (relabeled.vertex_colors, relabeled.edges);
        match &self.best {
            Some(b) if key > *b => {}
            Some(b) if key == *b => {
                if self.best_maps.len() < self.limits.max_leaves {
                    self.best_maps.push(pos);
                }
            }
            _ => {
                self.best = Some(key);
                self.best_maps = vec![pos];
            }
        }
        Ok(())
    }

    /// Every vertex has distinct out-edge colors and distinct in-edge
    /// colors, and the graph is connected. Components of Schreier graphings
    /// always qualify.
    fn is_deterministic(&self) -> bool {
        let distinct = |adj: &[Vec<(usize, u64)>]| {
            adj.iter().all(|nb| {
                let mut cs: Vec<u64> = nb.iter().map(|e| e.1).collect();
                cs.sort_unstable();
                cs.windows(2).all(|w| w[0] != w[1])
            })
        };
        distinct(&self.out) && distinct(&self.inc) && self.bfs_positions(0).is_some()
    }

    /// Numbering by breadth-first search from `root`, scanning out-edges by
    /// color, then in-edges by color. `None` if some vertex is unreachable.
    fn bfs_positions(&self, root: usize) -> Option<Vec<usize>> {
        let n = self.g.len();
        let mut pos = vec![usize::MAX; n];
        let mut order = vec![root];
        pos[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut outs: Vec<(u64, usize)> = self.out[v].iter().map(|&(u, c)| (c, u)).collect();
            let mut ins: Vec<(u64, usize)> = self.inc[v].iter().map(|&(u, c)| (c, u)).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            for (_, u) in outs.into_iter().chain(ins) {
                if pos[u] == usize::MAX {
                    pos[u] = order.len();
                    order.push(u);
                }
            }
        }
        (order.len() == n).then_some(pos)
    }

    /// In a deterministic graph a root fixes the whole numbering, so the
    /// leaves are the numberings from each vertex of the first smallest cell
    /// of the stable coloring.
    fn deterministic_leaves(&mut self, start: Vec<usize>) -> Result<()> {
        let cells = self.refine(start);
        let n = self.g.len();
        let mut sizes = vec![0usize; n];
        for &c in &cells {
            sizes[c] += 1;
        }
        let target = (0..n).filter(|&c| sizes[c] > 0).min_by_key(|&c| (sizes[c], c)).unwrap();
        for v in (0..n).filter(|&v| cells[v] == target) {
            let pos = self.bfs_positions(v).expect("connected");
            self.leaf(pos)?;
        }
        Ok(())
    }

    fn descend(&mut self, cells: Vec<usize>) -> Result<()> {
        let cells = self.refine(cells);
        let n = self.g.len();
        let mut sizes = vec![0usize; n];
        for &c in &cells {
            sizes[c] += 1;
        }
        // smallest non-singleton cell, ties by lowest cell index
        let target = (0..n).filter(|&c| sizes[c] > 1).min_by_key(|&c| (sizes[c], c));
        let Some(target) = target else {
            return self.leaf(cells);
        };
        for v in (0..n).filter(|&v| cells[v] == target) {
            let keys: Vec<(usize, bool)> = (0..n).map(|u| (cells[u], u != v)).collect();
            let (next, _) = rerank(&keys);
            self.descend(next)?;
        }
        Ok(())
    }
}

fn encode_key(key: &LeafKey) -> String {
    let colors: Vec<String> = key.0.iter().map(|c| c.to_string()).collect();
    let edges: Vec<String> = key.1.iter().map(|(a, b, c)| format!("{a}>{b}:{c}")).collect();
    format!("{}|{}|{}", key.0.len(), colors.join(","), edges.join(";"))
}

/// Canonical class and one isomorphism onto it (`map[v]` is the canonical
/// position of vertex `v`). With `pin = Some((v, p))` the isomorphism must
/// send `v` to position `p`.
pub fn canonical_colored_component(
    g: &ColoredGraph,
    pin: Option<(usize, usize)>,
    limits: CanonLimits,
) -> Result<(ColoredComponentClass, Vec<usize>)> {
    let n = g.len();
    if n == 0 {
        return Err(Error::Precondition("empty component".into()));
    }
    if n > limits.max_vertices {
        return Err(Error::resource("component canonicalization", format!("{n} vertices"), limits.max_vertices));
    }
    let mut out = vec![Vec::new(); n];
    let mut inc = vec![Vec::new(); n];
    for &(a, b, c) in &g.edges {
        if a >= n || b >= n {
            return Err(Error::Precondition(format!("edge {a}>{b} outside the component")));
        }
        out[a].push((b, c));
        inc[b].push((a, c));
    }
    let mut search = Search {
        g,
        out,
        inc,
        limits,
        leaves: 0,
        best: None,
        best_maps: Vec::new(),
    };
    let (start, _) = rerank(&g.vertex_colors);
    if search.is_deterministic() {
        search.deterministic_leaves(start)?;
    } else {
        search.descend(start)?;
    }
    let key = search.best.take().expect("search visits at least one leaf");
    let class = ColoredComponentClass {
        encoding: encode_key(&key),
    };
    let map = match pin {
        None => search.best_maps.swap_remove(0),
        Some((v, p)) => search
            .best_maps
            .into_iter()
            .find(|m| m.get(v) == Some(&p))
            .ok_or_else(|| Error::NoIsomorphism(format!("no isomorphism onto the canonical form sends vertex {v} to position {p}")))?,
    };
    Ok((class, map))
}
