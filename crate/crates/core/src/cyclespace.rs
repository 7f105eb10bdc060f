//! GF(2) cycle-space algebra: even sets, Z2-sums, fundamental bases, span
//! queries and bounded-length cycle enumeration.
//!
//! An [`EdgeSet`] is a bit vector over the edge indices of a fixed host
//! graph; cycles are identified with their edge sets throughout.

use crate::bits::Bits;
use crate::graph::{Graph, GraphError};
use std::collections::VecDeque;
use thiserror::Error;

/// A set of edges of a fixed host graph, as a bit vector over edge indices.
pub type EdgeSet = Bits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleSpaceError {
    #[error("edge set length {got} does not match host edge count {want}")]
    HostMismatch { got: usize, want: usize },
    #[error("coefficient list length {coeffs} does not match cycle list length {cycles}")]
    LengthMismatch { coeffs: usize, cycles: usize },
    #[error("cycle enumeration budget of {0} cycles exceeded")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn empty_edge_set(g: &Graph) -> EdgeSet {
    Bits::new(g.m())
}

pub fn edge_set_of_pairs(
    g: &Graph,
    pairs: impl IntoIterator<Item = (u32, u32)>,
) -> Result<EdgeSet, GraphError> {
    let mut s = empty_edge_set(g);
    for (u, v) in pairs {
        match g.edge_index(u, v) {
            Some(e) => s.insert(e),
            None => return Err(GraphError::UnknownVertex(u)),
        }
    }
    Ok(s)
}

fn check_host(g: &Graph, s: &EdgeSet) -> Result<(), CycleSpaceError> {
    if s.len() != g.m() {
        return Err(CycleSpaceError::HostMismatch {
            got: s.len(),
            want: g.m(),
        });
    }
    Ok(())
}

/// Degree of every vertex in the subgraph `(V, s)`.
pub fn degrees_in(g: &Graph, s: &EdgeSet) -> Vec<usize> {
    let mut deg = vec![0; g.n()];
    for e in s.iter() {
        let (u, v) = g.edge_endpoints(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// True iff every vertex has even degree in `(V, s)`.
pub fn is_even(g: &Graph, s: &EdgeSet) -> Result<bool, CycleSpaceError> {
    check_host(g, s)?;
    Ok(degrees_in(g, s).iter().all(|d| d % 2 == 0))
}

/// Componentwise parity of a list of edge sets over a common host.
pub fn z2_sum(g: &Graph, sets: &[EdgeSet]) -> Result<EdgeSet, CycleSpaceError> {
    let mut acc = empty_edge_set(g);
    for s in sets {
        check_host(g, s)?;
        acc.xor_with(s);
    }
    Ok(acc)
}

/// Reduction of an integer combination to GF(2): the Z2-sum of the cycles
/// whose coefficient is odd.
pub fn z_sum_to_z2(
    g: &Graph,
    coeffs: &[i64],
    cycles: &[EdgeSet],
) -> Result<EdgeSet, CycleSpaceError> {
    if coeffs.len() != cycles.len() {
        return Err(CycleSpaceError::LengthMismatch {
            coeffs: coeffs.len(),
            cycles: cycles.len(),
        });
    }
    let odd: Vec<EdgeSet> = coeffs
        .iter()
        .zip(cycles)
        .filter(|(c, _)| (*c).rem_euclid(2) == 1)
        .map(|(_, s)| s.clone())
        .collect();
    z2_sum(g, &odd)
}

/// Fundamental cycles of the BFS spanning forest rooted at the smallest
/// vertex of each component. Count is `|E| - |V| + #components`.
pub fn cycle_basis(g: &Graph) -> Vec<EdgeSet> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.n()]; // (parent vertex, edge)
    let mut seen = vec![false; g.n()];
    let mut tree_edge = vec![false; g.m()];
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    tree_edge[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for e in 0..g.m() {
        if tree_edge[e] {
            continue;
        }
        let (u, v) = g.edge_endpoints(e);
        let mut cyc = empty_edge_set(g);
        cyc.insert(e);
        // xor the tree paths from u and v to the root; shared prefix cancels
        for mut x in [u, v] {
            while let Some((p, pe)) = parent[x] {
                cyc.toggle(pe);
                x = p;
            }
        }
        basis.push(cyc);
    }
    basis
}

/// GF(2) rank of a family of edge sets, by Gaussian elimination with pivots
/// at the lowest set edge index.
pub fn rank(g: &Graph, fam: &[EdgeSet]) -> Result<usize, CycleSpaceError> {
    Ok(eliminate(g, fam)?.len())
}

/// Row-reduced echelon rows (pivot = lowest set bit, ascending), paired with
/// the subset of input indices that sums to each row.
fn eliminate(g: &Graph, fam: &[EdgeSet]) -> Result<Vec<(EdgeSet, Bits)>, CycleSpaceError> {
    let mut rows: Vec<(EdgeSet, Bits)> = Vec::new(); // (vector, combination over fam indices)
    for (i, s) in fam.iter().enumerate() {
        check_host(g, s)?;
        let mut v = s.clone();
        let mut comb = Bits::new(fam.len());
        comb.insert(i);
        loop {
            let Some(p) = v.first() else { break };
            if let Some((row, rcomb)) = rows.iter().find(|(r, _)| r.first() == Some(p)) {
                let (row, rcomb) = (row.clone(), rcomb.clone());
                v.xor_with(&row);
                comb.xor_with(&rcomb);
            } else {
                rows.push((v.clone(), comb.clone()));
                break;
            }
        }
    }
    rows.sort_by_key(|(r, _)| r.first());
    Ok(rows)
}

/// Result of a span query: either the subset of the family that Z2-sums to
/// the target, or the reason it is not in the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanResult {
    Combination(Vec<usize>),
    NotEven,
    NotInSpan,
}

/// Expresses `target` as a Z2-sum of family members, if possible. Non-even
/// targets are rejected immediately: the cycle space contains only even sets.
pub fn spans(g: &Graph, fam: &[EdgeSet], target: &EdgeSet) -> Result<SpanResult, CycleSpaceError> {
    check_host(g, target)?;
    if !is_even(g, target)? {
        return Ok(SpanResult::NotEven);
    }
    let rows = eliminate(g, fam)?;
    let mut v = target.clone();
    let mut comb = Bits::new(fam.len());
    while let Some(p) = v.first() {
        match rows.iter().find(|(r, _)| r.first() == Some(p)) {
            Some((row, rcomb)) => {
                v.xor_with(row);
                comb.xor_with(rcomb);
            }
            None => return Ok(SpanResult::NotInSpan),
        }
    }
    Ok(SpanResult::Combination(comb.iter().collect()))
}

/// Report accompanying a generation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub generates: bool,
    pub rank: usize,
    pub dimension: usize,
}

/// True iff the family's GF(2) rank equals the cycle space dimension
/// `|E| - |V| + #components`.
pub fn generates_cycle_space(
    g: &Graph,
    fam: &[EdgeSet],
) -> Result<GenerationReport, CycleSpaceError> {
    let comps = g.components_outside(&g.empty_vertex_set())?.len();
    let dimension = g.m() + comps - g.n();
    let rank = rank(g, fam)?;
    Ok(GenerationReport {
        generates: rank == dimension,
        rank,
        dimension,
    })
}

/// All simple cycles of length at most `max_len`, each reported once as an
/// edge set, in a deterministic order. Enumeration is by DFS from the
/// smallest vertex of each cycle; the budget caps the number of paths
/// explored.
pub fn short_cycles(
    g: &Graph,
    max_len: usize,
    budget: usize,
) -> Result<Vec<EdgeSet>, CycleSpaceError> {
    assert!(max_len >= 3, "cycles have length at least 3");
    let mut out = Vec::new();
    let mut steps = 0usize;
    let mut path = Vec::new();
    let mut on_path = Bits::new(g.n());
    for start in 0..g.n() {
        path.push(start);
        on_path.insert(start);
        dfs_cycles(g, start, start, max_len, &mut path, &mut on_path, &mut out, &mut steps, budget)?;
        on_path.remove(start);
        path.pop();
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    g: &Graph,
    start: usize,
    v: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut Bits,
    out: &mut Vec<EdgeSet>,
    steps: &mut usize,
    budget: usize,
) -> Result<(), CycleSpaceError> {
    *steps += 1;
    if *steps > budget {
        return Err(CycleSpaceError::BudgetExceeded(budget));
    }
    for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
        if w == start && path.len() >= 3 {
            // close the cycle; emit once by requiring second vertex < last
            if path[1] < path[path.len() - 1] {
                let mut cyc = empty_edge_set(g);
                cyc.insert(e);
                for pair in path.windows(2) {
                    let ei = g
                        .edge_index(g.id(pair[0]), g.id(pair[1]))
                        .expect("path edge exists");
                    cyc.insert(ei);
                }
                out.push(cyc);
            }
        } else if w > start && !on_path.contains(w) && path.len() < max_len {
            path.push(w);
            on_path.insert(w);
            dfs_cycles(g, start, w, max_len, path, on_path, out, steps, budget)?;
            on_path.remove(w);
            path.pop();
        }
    }
    Ok(())
}

/// True iff `s` is the edge set of a simple cycle: nonempty, connected, and
/// every touched vertex has degree exactly 2.
pub fn is_cycle(g: &Graph, s: &EdgeSet) -> bool {
    if s.len() != g.m() || s.is_empty() {
        return false;
    }
    let deg = degrees_in(g, s);
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    // connectivity over the support
    let support: Vec<usize> = (0..g.n()).filter(|&v| deg[v] > 0).collect();
    let mut seen = Bits::new(g.n());
    let mut queue = VecDeque::from([support[0]]);
    seen.insert(support[0]);
    while let Some(v) = queue.pop_front() {
        for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
            if s.contains(e) && !seen.contains(w) {
                seen.insert(w);
                queue.push_back(w);
            }
        }
    }
    support.iter().all(|&v| seen.contains(v))
}

/// Vertex set touched by an edge set.
pub fn support(g: &Graph, s: &EdgeSet) -> Bits {
    let mut out = Bits::new(g.n());
    for e in s.iter() {
        let (u, v) = g.edge_endpoints(e);
        out.insert(u);
        out.insert(v);
    }
    out
}

/// Recovers the cyclic vertex sequence of a cycle edge set, starting at its
/// smallest vertex and continuing toward its smaller neighbor.
pub fn cycle_vertices(g: &Graph, s: &EdgeSet) -> Option<Vec<usize>> {
    if !is_cycle(g, s) {
        return None;
    }
    let sup = support(g, s);
    let start = sup.first().unwrap();
    let mut seq = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let mut nexts: Vec<usize> = g
            .neighbors(cur)
            .iter()
            .zip(g.incident_edges(cur))
            .filter(|(&w, &e)| s.contains(e) && w != prev)
            .map(|(&w, _)| w)
            .collect();
        nexts.sort();
        let next = nexts[0];
        if next == start {
            return Some(seq);
        }
        seq.push(next);
        prev = cur;
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn triangle_in(g: &Graph, a: u32, b: u32, c: u32) -> EdgeSet {
        edge_set_of_pairs(g, [(a, b), (b, c), (c, a)]).unwrap()
    }

    #[test]
    fn evenness() {
        let g = corpus::complete(4);
        assert!(is_even(&g, &empty_edge_set(&g)).unwrap());
        let mut single = empty_edge_set(&g);
        single.insert(0);
        assert!(!is_even(&g, &single).unwrap());
        assert!(is_even(&g, &triangle_in(&g, 1, 2, 3)).unwrap());
    }

    #[test]
    fn z2_sums() {
        let g = corpus::complete(4);
        let t1 = triangle_in(&g, 1, 2, 3);
        assert!(z2_sum(&g, &[t1.clone(), t1.clone()]).unwrap().is_empty());
        // two triangles sharing edge 1-2 sum to the 4-cycle 1-3-2-4
        let t2 = triangle_in(&g, 1, 2, 4);
        let sum = z2_sum(&g, &[t1.clone(), t2]).unwrap();
        let expect = edge_set_of_pairs(&g, [(1, 3), (3, 2), (2, 4), (4, 1)]).unwrap();
        assert_eq!(sum, expect);
        assert!(is_even(&g, &sum).unwrap());
    }

    #[test]
    fn cube_faces_sum_to_zero() {
        let (g, faces) = corpus::cube_faces();
        assert_eq!(faces.len(), 6);
        assert!(z2_sum(&g, &faces).unwrap().is_empty());
    }

    #[test]
    fn z_reduction() {
        let g = corpus::complete(4);
        let c1 = triangle_in(&g, 1, 2, 3);
        let c2 = triangle_in(&g, 1, 2, 4);
        assert_eq!(
            z_sum_to_z2(&g, &[2, 3], &[c1.clone(), c2.clone()]).unwrap(),
            c2
        );
        assert_eq!(
            z_sum_to_z2(&g, &[1, 1], &[c1.clone(), c2.clone()]).unwrap(),
            z2_sum(&g, &[c1.clone(), c2.clone()]).unwrap()
        );
        assert!(z_sum_to_z2(&g, &[2, -4], &[c1.clone(), c2]).unwrap().is_empty());
        assert!(matches!(
            z_sum_to_z2(&g, &[1], &[c1]),
            Err(CycleSpaceError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn basis_sizes() {
        let tree = Graph::from_edges([(1, 2), (2, 3), (2, 4)]).unwrap();
        assert!(cycle_basis(&tree).is_empty());
        let c4 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let b = cycle_basis(&c4);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].count(), 4);
        let cube = corpus::cube();
        assert_eq!(cycle_basis(&cube).len(), 5);
        for c in cycle_basis(&cube) {
            assert!(is_even(&cube, &c).unwrap());
        }
    }

    #[test]
    fn spans_queries() {
        let g = corpus::cube();
        let basis = cycle_basis(&g);
        match spans(&g, &basis, &basis[2]).unwrap() {
            SpanResult::Combination(c) => assert_eq!(c, vec![2]),
            other => panic!("expected combination, got {other:?}"),
        }
        let mut single = empty_edge_set(&g);
        single.insert(3);
        assert_eq!(spans(&g, &basis, &single).unwrap(), SpanResult::NotEven);

        // any 4-cycle of the cube lies in the span of the 6 faces
        let (g, faces) = corpus::cube_faces();
        for c in short_cycles(&g, 4, 100_000).unwrap() {
            match spans(&g, &faces, &c).unwrap() {
                SpanResult::Combination(comb) => {
                    let parts: Vec<EdgeSet> = comb.iter().map(|&i| faces[i].clone()).collect();
                    assert_eq!(z2_sum(&g, &parts).unwrap(), c);
                }
                other => panic!("cube 4-cycle not spanned by faces: {other:?}"),
            }
        }
    }

    #[test]
    fn spans_iff_rank_stable() {
        // spans(fam, t) succeeds iff rank(fam ∪ {t}) == rank(fam)
        let (g, faces) = corpus::cube_faces();
        let fam = &faces[0..4];
        let candidates = short_cycles(&g, 6, 1_000_000).unwrap();
        for c in candidates {
            let r0 = rank(&g, fam).unwrap();
            let mut ext: Vec<EdgeSet> = fam.to_vec();
            ext.push(c.clone());
            let r1 = rank(&g, &ext).unwrap();
            let hit = matches!(spans(&g, fam, &c).unwrap(), SpanResult::Combination(_));
            assert_eq!(hit, r0 == r1);
        }
    }

    #[test]
    fn generation() {
        let g = corpus::cube();
        let basis = cycle_basis(&g);
        assert!(generates_cycle_space(&g, &basis).unwrap().generates);

        let (g, faces) = corpus::cube_faces();
        let five = &faces[0..5];
        let rep = generates_cycle_space(&g, five).unwrap();
        assert!(rep.generates);
        assert_eq!(rep.rank, 5);
        let three = &faces[0..3];
        let rep = generates_cycle_space(&g, three).unwrap();
        assert!(!rep.generates);
        assert_eq!(rep.rank, 3);

        let c4 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(!generates_cycle_space(&c4, &[]).unwrap().generates);
    }

    #[test]
    fn short_cycle_enumeration() {
        let c6 = Graph::from_edges((1..=6).map(|i| (i, i % 6 + 1))).unwrap();
        assert!(short_cycles(&c6, 3, 10_000).unwrap().is_empty());

        let k4 = corpus::complete(4);
        assert_eq!(short_cycles(&k4, 3, 10_000).unwrap().len(), 4);

        let cube = corpus::cube();
        let cycles = short_cycles(&cube, 4, 100_000).unwrap();
        assert_eq!(cycles.len(), 6);
        // oracle: exhaustive scan over all 4-subsets of edges
        let mut count = 0;
        let m = cube.m();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    for d in c + 1..m {
                        let s = Bits::from_iter(m, [a, b, c, d]);
                        if is_cycle(&cube, &s) {
                            count += 1;
                            assert!(cycles.contains(&s));
                        }
                    }
                }
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn short_cycle_budget() {
        let k = corpus::complete(9);
        assert!(matches!(
            short_cycles(&k, 9, 10),
            Err(CycleSpaceError::BudgetExceeded(10))
        ));
    }

    #[test]
    fn cycle_vertex_recovery() {
        let g = corpus::cube();
        let (gf, faces) = corpus::cube_faces();
        assert_eq!(g.edges(), gf.edges());
        for f in &faces {
            let seq = cycle_vertices(&gf, f).unwrap();
            assert_eq!(seq.len(), 4);
        }
    }
}
