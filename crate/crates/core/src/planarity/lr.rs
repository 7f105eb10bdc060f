//! Left-right planarity test with embedding extraction.
//!
//! Iterative formulation of the de Fraysseix–de Mendez–Rosenstiehl criterion:
//! a DFS orientation phase computing lowpoints and nesting depths, a testing
//! phase maintaining a stack of conflict pairs of return-edge intervals, and
//! an embedding phase that orders each adjacency list by signed nesting depth
//! and threads the back edges onto the correct side.

use crate::graph::Graph;
use std::collections::HashMap;

/// Outcome: rotation per vertex (cyclic order of incident edge indices), or
/// `None` when the graph is not planar.
pub fn lr_rotation(g: &Graph) -> Option<Vec<Vec<usize>>> {
    run(g, true).map(|r| r.expect("embedding requested"))
}

/// Planarity decision without building the embedding.
pub fn lr_is_planar(g: &Graph) -> bool {
    run(g, false).is_some()
}

fn run(g: &Graph, embed: bool) -> Option<Option<Vec<Vec<usize>>>> {
    let n = g.n();
    let m = g.m();
    if n > 2 && m > 3 * n - 6 {
        return None;
    }
    let mut st = State::new(g);
    for v in 0..n {
        if st.height[v].is_none() {
            st.height[v] = Some(0);
            st.roots.push(v);
            st.dfs_orientation(v);
        }
    }
    // sort adjacency lists by nesting depth
    st.make_ordered();
    for r in st.roots.clone() {
        if !st.dfs_testing(r) {
            return None;
        }
    }
    if !embed {
        return Some(None);
    }
    for e in 0..m {
        if st.oriented[e] {
            let s = st.resolve_sign(e) as i64;
            st.nesting_depth[e] *= s;
        }
    }
    st.make_ordered();
    let mut order = HalfEdgeOrder::new(n);
    for v in 0..n {
        let mut prev = None;
        for &e in &st.ordered[v].clone() {
            let w = st.target(e);
            order.add_cw(v, w, prev);
            prev = Some(w);
        }
    }
    for r in st.roots.clone() {
        st.dfs_embedding(r, &mut order);
    }
    // read off rotations as edge indices
    let mut rotation = vec![Vec::new(); n];
    for v in 0..n {
        for w in order.cycle(v) {
            let e = g
                .edge_index(g.id(v), g.id(w))
                .expect("half edge corresponds to an edge");
            rotation[v].push(e);
        }
    }
    Some(Some(rotation))
}

#[derive(Default, Clone, Copy, Debug, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Default, Clone, Copy, Debug)]
struct ConflictPair {
    l: Interval,
    r: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.l, &mut self.r);
    }
}

struct State<'a> {
    g: &'a Graph,
    roots: Vec<usize>,
    height: Vec<Option<usize>>,
    parent_edge: Vec<Option<usize>>, // vertex -> tree edge to parent
    oriented: Vec<bool>,             // edge -> oriented yet
    from: Vec<usize>,                // edge -> source vertex of its orientation
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<i64>,
    ref_edge: Vec<Option<usize>>,
    side: Vec<i8>,
    lowpt_edge: Vec<Option<usize>>,
    stack_bottom: Vec<usize>, // edge -> stack height when its processing began
    s: Vec<ConflictPair>,
    ordered: Vec<Vec<usize>>, // vertex -> outgoing oriented edges by nesting depth
}

impl<'a> State<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        let m = g.m();
        State {
            g,
            roots: Vec::new(),
            height: vec![None; n],
            parent_edge: vec![None; n],
            oriented: vec![false; m],
            from: vec![usize::MAX; m],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting_depth: vec![0; m],
            ref_edge: vec![None; m],
            side: vec![1; m],
            lowpt_edge: vec![None; m],
            stack_bottom: vec![0; m],
            s: Vec::new(),
            ordered: vec![Vec::new(); n],
        }
    }

    fn target(&self, e: usize) -> usize {
        let (a, b) = self.g.edge_endpoints(e);
        if self.from[e] == a {
            b
        } else {
            a
        }
    }

    fn make_ordered(&mut self) {
        for l in self.ordered.iter_mut() {
            l.clear();
        }
        for e in 0..self.g.m() {
            if self.oriented[e] {
                self.ordered[self.from[e]].push(e);
            }
        }
        for v in 0..self.g.n() {
            self.ordered[v].sort_by_key(|&e| (self.nesting_depth[e], e));
        }
    }

    fn dfs_orientation(&mut self, root: usize) {
        let mut stack = vec![root];
        let mut ind = vec![0usize; self.g.n()];
        let mut skip_init = vec![false; self.g.m()];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut descended = false;
            while ind[v] < self.g.neighbors(v).len() {
                let w = self.g.neighbors(v)[ind[v]];
                let ei = self.g.incident_edges(v)[ind[v]];
                if !skip_init[ei] {
                    if self.oriented[ei] {
                        ind[v] += 1;
                        continue;
                    }
                    self.oriented[ei] = true;
                    self.from[ei] = v;
                    let hv = self.height[v].unwrap();
                    self.lowpt[ei] = hv;
                    self.lowpt2[ei] = hv;
                    if self.height[w].is_none() {
                        // tree edge
                        self.parent_edge[w] = Some(ei);
                        self.height[w] = Some(hv + 1);
                        stack.push(v);
                        stack.push(w);
                        skip_init[ei] = true;
                        descended = true;
                        break;
                    }
                    // back edge
                    self.lowpt[ei] = self.height[w].unwrap();
                }
                // finish ei: nesting depth, then parent lowpoint updates
                let hv = self.height[v].unwrap();
                self.nesting_depth[ei] = 2 * self.lowpt[ei] as i64;
                if self.lowpt2[ei] < hv {
                    self.nesting_depth[ei] += 1; // chordal
                }
                if let Some(pe) = e {
                    if self.lowpt[ei] < self.lowpt[pe] {
                        self.lowpt2[pe] = self.lowpt[pe].min(self.lowpt2[ei]);
                        self.lowpt[pe] = self.lowpt[ei];
                    } else if self.lowpt[ei] > self.lowpt[pe] {
                        self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt[ei]);
                    } else {
                        self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt2[ei]);
                    }
                }
                ind[v] += 1;
            }
            let _ = descended;
        }
    }

    fn interval_conflicting(&self, i: &Interval, b: usize) -> bool {
        match i.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn pair_lowest(&self, p: &ConflictPair) -> usize {
        match (p.l.low, p.r.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => unreachable!("empty conflict pair on stack"),
        }
    }

    fn dfs_testing(&mut self, root: usize) -> bool {
        let mut stack = vec![root];
        let mut ind = vec![0usize; self.g.n()];
        let mut skip_init = vec![false; self.g.m()];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut skip_final = false;
            while ind[v] < self.ordered[v].len() {
                let ei = self.ordered[v][ind[v]];
                let w = self.target(ei);
                if !skip_init[ei] {
                    self.stack_bottom[ei] = self.s.len();
                    if Some(ei) == self.parent_edge[w] {
                        // tree edge
                        stack.push(v);
                        stack.push(w);
                        skip_init[ei] = true;
                        skip_final = true;
                        break;
                    }
                    // back edge
                    self.lowpt_edge[ei] = Some(ei);
                    self.s.push(ConflictPair {
                        l: Interval::default(),
                        r: Interval {
                            low: Some(ei),
                            high: Some(ei),
                        },
                    });
                }
                if self.lowpt[ei] < self.height[v].unwrap() {
                    // ei has a return edge
                    let pe = e.expect("return edge implies non-root parent edge");
                    if ei == self.ordered[v][0] {
                        self.lowpt_edge[pe] = self.lowpt_edge[ei];
                    } else if !self.add_constraints(ei, pe) {
                        return false;
                    }
                }
                ind[v] += 1;
            }
            if !skip_final {
                if let Some(pe) = e {
                    self.remove_back_edges(pe);
                }
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        // merge return edges of ei into p.r
        loop {
            let mut q = self.s.pop().expect("conflict pair for ei present");
            if !q.l.is_empty() {
                q.swap();
            }
            if !q.l.is_empty() {
                return false; // not planar
            }
            let q_low = q.r.low.expect("nonempty right interval");
            if self.lowpt[q_low] > self.lowpt[e] {
                // merge intervals
                if p.r.is_empty() {
                    p.r.high = q.r.high;
                } else {
                    self.ref_edge[p.r.low.unwrap()] = q.r.high;
                }
                p.r.low = q.r.low;
            } else {
                // align
                self.ref_edge[q_low] = self.lowpt_edge[e];
            }
            if self.s.len() == self.stack_bottom[ei] {
                break;
            }
        }
        // merge conflicting return edges of earlier siblings into p.l
        loop {
            let conflicting = match self.s.last() {
                Some(top) => {
                    self.interval_conflicting(&top.l, ei) || self.interval_conflicting(&top.r, ei)
                }
                None => false,
            };
            if !conflicting {
                break;
            }
            let mut q = self.s.pop().unwrap();
            if self.interval_conflicting(&q.r, ei) {
                q.swap();
            }
            if self.interval_conflicting(&q.r, ei) {
                return false; // not planar
            }
            // merge interval below lowpt(ei) into p.r
            if let Some(pr_low) = p.r.low {
                self.ref_edge[pr_low] = q.r.high;
            }
            if let Some(qr_low) = q.r.low {
                p.r.low = Some(qr_low);
            }
            if p.l.is_empty() {
                p.l.high = q.l.high;
            } else {
                self.ref_edge[p.l.low.unwrap()] = q.l.high;
            }
            p.l.low = q.l.low;
        }
        if !(p.l.is_empty() && p.r.is_empty()) {
            self.s.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.from[e];
        let hu = self.height[u].unwrap();
        // drop entire conflict pairs whose lowest return point is u
        while let Some(top) = self.s.last() {
            if self.pair_lowest(top) != hu {
                break;
            }
            let p = self.s.pop().unwrap();
            if let Some(l_low) = p.l.low {
                self.side[l_low] = -1;
            }
        }
        if let Some(mut p) = self.s.pop() {
            // trim left interval
            while let Some(h) = p.l.high {
                if self.target(h) == u {
                    p.l.high = self.ref_edge[h];
                } else {
                    break;
                }
            }
            if p.l.high.is_none() {
                if let Some(l_low) = p.l.low {
                    self.ref_edge[l_low] = p.r.low;
                    self.side[l_low] = -1;
                    p.l.low = None;
                }
            }
            // trim right interval
            while let Some(h) = p.r.high {
                if self.target(h) == u {
                    p.r.high = self.ref_edge[h];
                } else {
                    break;
                }
            }
            if p.r.high.is_none() {
                if let Some(r_low) = p.r.low {
                    self.ref_edge[r_low] = p.l.low;
                    self.side[r_low] = -1;
                    p.r.low = None;
                }
            }
            self.s.push(p);
        }
        // the side of e is the side of a highest return edge
        if self.lowpt[e] < hu {
            let top = self.s.last().expect("return edge leaves a conflict pair");
            let hl = top.l.high;
            let hr = top.r.high;
            self.ref_edge[e] = match (hl, hr) {
                (Some(l), Some(r)) => {
                    if self.lowpt[l] > self.lowpt[r] {
                        Some(l)
                    } else {
                        Some(r)
                    }
                }
                (Some(l), None) => Some(l),
                (_, r) => r,
            };
        }
    }

    /// Resolves the relative side of `e` to an absolute side by following
    /// reference edges.
    fn resolve_sign(&mut self, e: usize) -> i8 {
        let mut stack = vec![e];
        while let Some(cur) = stack.pop() {
            if let Some(r) = self.ref_edge[cur] {
                if self.ref_edge[r].is_some() {
                    stack.push(cur);
                    stack.push(r);
                } else {
                    self.side[cur] *= self.side[r];
                    self.ref_edge[cur] = None;
                }
            }
        }
        self.side[e]
    }

    fn dfs_embedding(&mut self, root: usize, order: &mut HalfEdgeOrder) {
        let n = self.g.n();
        let mut stack = vec![root];
        let mut ind = vec![0usize; n];
        let mut left_ref: Vec<Option<usize>> = vec![None; n];
        let mut right_ref: Vec<Option<usize>> = vec![None; n];
        while let Some(v) = stack.pop() {
            while ind[v] < self.ordered[v].len() {
                let ei = self.ordered[v][ind[v]];
                ind[v] += 1;
                let w = self.target(ei);
                if Some(ei) == self.parent_edge[w] {
                    // tree edge: make v the first half edge at w
                    order.add_first(w, v);
                    left_ref[v] = Some(w);
                    right_ref[v] = Some(w);
                    stack.push(v);
                    stack.push(w);
                    break;
                } else if self.side[ei] == 1 {
                    order.add_cw(w, v, right_ref[w]);
                } else {
                    order.add_ccw(w, v, left_ref[w]);
                    left_ref[w] = Some(v);
                }
            }
        }
    }
}

/// Circular adjacency orders built incrementally, one doubly linked ring of
/// neighbor vertices per vertex.
struct HalfEdgeOrder {
    cw: Vec<HashMap<usize, usize>>,
    ccw: Vec<HashMap<usize, usize>>,
    first: Vec<Option<usize>>,
}

impl HalfEdgeOrder {
    fn new(n: usize) -> Self {
        HalfEdgeOrder {
            cw: vec![HashMap::new(); n],
            ccw: vec![HashMap::new(); n],
            first: vec![None; n],
        }
    }

    fn add_cw(&mut self, v: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.cw[v].insert(end, end);
                self.ccw[v].insert(end, end);
                self.first[v] = Some(end);
            }
            Some(r) => {
                let succ = self.cw[v][&r];
                self.cw[v].insert(r, end);
                self.cw[v].insert(end, succ);
                self.ccw[v].insert(succ, end);
                self.ccw[v].insert(end, r);
            }
        }
    }

    fn add_ccw(&mut self, v: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => self.add_cw(v, end, None),
            Some(r) => {
                let pred = self.ccw[v][&r];
                self.add_cw(v, end, Some(pred));
                if self.first[v] == Some(r) {
                    self.first[v] = Some(end);
                }
            }
        }
    }

    fn add_first(&mut self, v: usize, end: usize) {
        self.add_ccw(v, end, self.first[v]);
    }

    /// The cyclic order at `v` starting from its first neighbor.
    fn cycle(&self, v: usize) -> Vec<usize> {
        let Some(start) = self.first[v] else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut cur = self.cw[v][&start];
        while cur != start {
            out.push(cur);
            cur = self.cw[v][&cur];
        }
        out
    }
}
