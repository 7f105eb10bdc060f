//! Finite simple undirected graphs over integer vertex identifiers, with the
//! metric, connectivity and ball operations the rest of the crate builds on.
//!
//! Graphs are immutable after construction. Vertex identifiers are arbitrary
//! nonnegative integers; internally every vertex also has a dense *index*
//! (its position in ascending identifier order) and every edge a dense index
//! (position in lexicographic endpoint order), so all iteration is
//! deterministic.

use crate::bits::Bits;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex identifier {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("vertex set length {got} does not match host vertex count {want}")]
    HostMismatch { got: usize, want: usize },
}

/// A set of vertices of a fixed host graph, as a bit vector over the host's
/// vertex indices.
pub type VertexSet = Bits;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<VertexId>,                 // ascending
    index_of: BTreeMap<VertexId, usize>,
    edges: Vec<(VertexId, VertexId)>,   // normalized (min,max), lexicographic
    adj: Vec<Vec<usize>>,               // vertex index -> sorted neighbor indices
    inc: Vec<Vec<usize>>,               // vertex index -> edge indices, aligned with adj
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.m())
    }
}

impl Graph {
    /// Builds a graph from explicit vertices and edges. Edges are normalized
    /// and sorted; self-loops, parallel edges and undeclared endpoints are
    /// rejected.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let ids: Vec<VertexId> = {
            let s: BTreeSet<VertexId> = vertices.into_iter().collect();
            s.into_iter().collect()
        };
        let index_of: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut norm: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !index_of.contains_key(&u) {
                return Err(GraphError::UnknownVertex(u));
            }
            if !index_of.contains_key(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::ParallelEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); ids.len()];
        let mut inc = vec![Vec::new(); ids.len()];
        for (e, &(u, v)) in norm.iter().enumerate() {
            let ui = index_of[&u];
            let vi = index_of[&v];
            adj[ui].push(vi);
            inc[ui].push(e);
            adj[vi].push(ui);
            inc[vi].push(e);
        }
        for i in 0..ids.len() {
            let mut pairs: Vec<(usize, usize)> =
                adj[i].iter().copied().zip(inc[i].iter().copied()).collect();
            pairs.sort();
            adj[i] = pairs.iter().map(|p| p.0).collect();
            inc[i] = pairs.iter().map(|p| p.1).collect();
        }
        Ok(Graph {
            ids,
            index_of,
            edges: norm,
            adj,
            inc,
        })
    }

    /// Convenience constructor: vertex set inferred from the edge list.
    pub fn from_edges(edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, GraphError> {
        let edges: Vec<_> = edges.into_iter().collect();
        let vs: BTreeSet<VertexId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        Graph::new(vs, edges)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn id(&self, index: usize) -> VertexId {
        self.ids[index]
    }

    pub fn index(&self, id: VertexId) -> Result<usize, GraphError> {
        self.index_of
            .get(&id)
            .copied()
            .ok_or(GraphError::UnknownVertex(id))
    }

    pub fn has_vertex(&self, id: VertexId) -> bool {
        self.index_of.contains_key(&id)
    }

    /// Neighbor indices of a vertex index, ascending.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    /// Edge indices incident to a vertex index, aligned with `neighbors`.
    pub fn incident_edges(&self, index: usize) -> &[usize] {
        &self.inc[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adj[index].len()
    }

    /// Endpoints of edge `e` as vertex indices (smaller id first).
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        (self.index_of[&u], self.index_of[&v])
    }

    pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn empty_vertex_set(&self) -> VertexSet {
        Bits::new(self.n())
    }

    pub fn full_vertex_set(&self) -> VertexSet {
        Bits::full(self.n())
    }

    pub fn vertex_set_of_ids(
        &self,
        ids: impl IntoIterator<Item = VertexId>,
    ) -> Result<VertexSet, GraphError> {
        let mut s = self.empty_vertex_set();
        for id in ids {
            s.insert(self.index(id)?);
        }
        Ok(s)
    }

    pub fn set_to_ids(&self, s: &VertexSet) -> Vec<VertexId> {
        s.iter().map(|i| self.ids[i]).collect()
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.len() != self.n() {
            return Err(GraphError::HostMismatch {
                got: s.len(),
                want: self.n(),
            });
        }
        Ok(())
    }

    /// BFS distances from `source` (a vertex id); `None` marks unreachable
    /// vertices. The result is indexed by vertex index.
    pub fn distances(&self, source: VertexId) -> Result<Vec<Option<u32>>, GraphError> {
        let s = self.index(source)?;
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.distances(self.ids[0])
            .map(|d| d.iter().all(|x| x.is_some()))
            .unwrap_or(false)
    }

    /// Induced subgraph on the vertices within distance `r` of `center`.
    /// Vertex identifiers are preserved.
    pub fn ball(&self, center: VertexId, r: u32) -> Result<Graph, GraphError> {
        let dist = self.distances(center)?;
        let keep: Vec<bool> = dist.iter().map(|d| matches!(d, Some(x) if *x <= r)).collect();
        let mut set = self.empty_vertex_set();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                set.insert(i);
            }
        }
        Ok(self.induced(&set))
    }

    /// Induced subgraph on a vertex set; identifiers are preserved.
    pub fn induced(&self, s: &VertexSet) -> Graph {
        let vs: Vec<VertexId> = s.iter().map(|i| self.ids[i]).collect();
        let es: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| s.contains(self.index_of[&u]) && s.contains(self.index_of[&v]))
            .copied()
            .collect();
        Graph::new(vs, es).expect("induced subgraph of a valid graph is valid")
    }

    /// Connected components of `g - s`, each paired with its neighborhood
    /// inside `s`. Components are reported in ascending order of their
    /// smallest vertex index.
    pub fn components_outside(
        &self,
        s: &VertexSet,
    ) -> Result<Vec<(VertexSet, VertexSet)>, GraphError> {
        self.check_set(s)?;
        let mut seen = s.clone();
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = self.empty_vertex_set();
            let mut nbhd = self.empty_vertex_set();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            comp.insert(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if s.contains(w) {
                        nbhd.insert(w);
                    } else if !seen.contains(w) {
                        seen.insert(w);
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push((comp, nbhd));
        }
        Ok(out)
    }

    /// Neighborhood of a vertex set: all vertices outside `s` adjacent to it.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut n = self.empty_vertex_set();
        for v in s.iter() {
            for &w in &self.adj[v] {
                if !s.contains(w) {
                    n.insert(w);
                }
            }
        }
        n
    }

    /// All vertices within distance `k` of the set `s` (includes `s`).
    pub fn ball_of_set(&self, s: &VertexSet, k: u32) -> VertexSet {
        let mut cur = s.clone();
        for _ in 0..k {
            let mut next = cur.clone();
            for v in cur.iter() {
                for &w in &self.adj[v] {
                    next.insert(w);
                }
            }
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    /// Size of a minimum vertex cut; `n-1` for complete graphs, 0 for
    /// disconnected input. Exhaustive over cut candidates for small graphs,
    /// max-flow with vertex splitting above; the two agree on the overlap.
    pub fn vertex_connectivity(&self) -> usize {
        if self.n() < 2 || !self.is_connected() {
            return 0;
        }
        if self.n() <= 12 {
            vertex_connectivity_exhaustive(self)
        } else {
            vertex_connectivity_flow(self)
        }
    }
}

/// Brute force: smallest k such that some k-subset of vertices disconnects
/// the graph. Intended for n <= 12.
pub fn vertex_connectivity_exhaustive(g: &Graph) -> usize {
    let n = g.n();
    for k in 0..n - 1 {
        let mut cut = Vec::with_capacity(k);
        if find_cut(g, &mut cut, 0, k) {
            return k;
        }
    }
    n - 1
}

fn find_cut(g: &Graph, cut: &mut Vec<usize>, from: usize, k: usize) -> bool {
    if cut.len() == k {
        let s = Bits::from_iter(g.n(), cut.iter().copied());
        return match g.components_outside(&s) {
            Ok(comps) => comps.len() > 1,
            Err(_) => false,
        };
    }
    for v in from..g.n() {
        cut.push(v);
        if find_cut(g, cut, v + 1, k) {
            cut.pop();
            return true;
        }
        cut.pop();
    }
    false
}

/// Minimum vertex cut via max-flow on the vertex-split digraph.
pub fn vertex_connectivity_flow(g: &Graph) -> usize {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return 0;
    }
    let mut best = n - 1;
    // Fix s as a minimum-degree vertex; pair it with every non-neighbor and
    // with the non-neighbors of its neighbors, which covers some minimum cut.
    let s = (0..n).min_by_key(|&v| g.degree(v)).unwrap();
    best = best.min(g.degree(s));
    let mut targets: BTreeSet<usize> = (0..n)
        .filter(|&v| v != s && !g.neighbors(s).contains(&v))
        .collect();
    for &u in g.neighbors(s) {
        for &v in (0..n).collect::<Vec<_>>().iter() {
            if v != s && v != u && !g.neighbors(u).contains(&v) {
                targets.insert(v);
            }
        }
    }
    for t in targets {
        if t == s {
            continue;
        }
        best = best.min(max_vertex_disjoint_paths(g, s, t));
    }
    best
}

/// Number of internally vertex-disjoint s-t paths (s,t non-adjacent or not;
/// adjacency contributes one direct path).
fn max_vertex_disjoint_paths(g: &Graph, s: usize, t: usize) -> usize {
    // Vertex splitting: node v becomes v_in = 2v, v_out = 2v+1 with capacity-1
    // arc between; edges get capacity-1 arcs both ways between out/in sides.
    let n = g.n();
    let mut cap: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    for v in 0..n {
        cap.insert((2 * v, 2 * v + 1), if v == s || v == t { i32::MAX / 2 } else { 1 });
    }
    for &(u, v) in g.edges() {
        let ui = g.index(u).unwrap();
        let vi = g.index(v).unwrap();
        cap.insert((2 * ui + 1, 2 * vi), 1);
        cap.insert((2 * vi + 1, 2 * ui), 1);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for &(a, b) in cap.keys() {
        adj[a].push(b);
        adj[b].push(a);
    }
    for l in adj.iter_mut() {
        l.sort();
        l.dedup();
    }
    let src = 2 * s + 1;
    let dst = 2 * t;
    let mut flow = 0usize;
    loop {
        // BFS augmenting path on residual capacities
        let mut pred: Vec<Option<usize>> = vec![None; 2 * n];
        pred[src] = Some(src);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            if v == dst {
                break;
            }
            for &w in &adj[v] {
                if pred[w].is_none() && *cap.get(&(v, w)).unwrap_or(&0) > 0 {
                    pred[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        if pred[dst].is_none() {
            break;
        }
        let mut v = dst;
        while v != src {
            let u = pred[v].unwrap();
            *cap.entry((u, v)).or_insert(0) -= 1;
            *cap.entry((v, u)).or_insert(0) += 1;
            v = u;
        }
        flow += 1;
    }
    flow
}
