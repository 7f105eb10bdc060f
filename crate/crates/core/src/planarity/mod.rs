//! Planarity testing, combinatorial sphere embeddings, face extraction,
//! cycle sides and cycle nestedness.
//!
//! Embeddings are rotation systems: a cyclic order of incident edges per
//! vertex. No outer face is ever chosen; everything downstream treats the
//! embedding as living on the sphere.

mod lr;

use crate::bits::Bits;
use crate::cyclespace::{self, EdgeSet};
use crate::graph::{Graph, GraphError, VertexSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanarityError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge set is not a cycle of the host graph")]
    NotACycle,
    #[error("rotation system invalid: {0}")]
    InvalidRotation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A combinatorial sphere embedding: per vertex, the cyclic order of its
/// incident edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
}

/// One closed facial walk: directed edge sequence plus the vertex walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Vertex indices in walk order; `vertices[i] -> vertices[i+1]` is edge
    /// `edges[i]`, cyclically.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge set of the walk, when the walk is a simple cycle.
    pub fn as_cycle(&self, g: &Graph) -> Option<EdgeSet> {
        let mut set = Bits::new(g.m());
        for &e in &self.edges {
            if set.contains(e) {
                return None; // repeated edge: not a cycle
            }
            set.insert(e);
        }
        let mut vs: Vec<usize> = self.vertices.clone();
        vs.sort();
        vs.dedup();
        if vs.len() != self.vertices.len() || vs.len() < 3 {
            return None;
        }
        Some(set)
    }
}

/// The two open regions a cycle bounds, as vertex sets. The pair is
/// unordered; `side_a` is the side holding the smallest off-cycle vertex
/// (sides may be empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidePair {
    pub side_a: VertexSet,
    pub side_b: VertexSet,
}

/// Result of the planarity test: an embedding, or a witness subgraph that is
/// an edge-minimal non-planar subgraph (a Kuratowski subdivision).
#[derive(Debug, Clone)]
pub enum EmbedResult {
    Planar(RotationSystem),
    NonPlanar { witness: Graph },
}

impl EmbedResult {
    pub fn unwrap_planar(self) -> RotationSystem {
        match self {
            EmbedResult::Planar(r) => r,
            EmbedResult::NonPlanar { .. } => panic!("graph unexpectedly non-planar"),
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, EmbedResult::Planar(_))
    }
}

/// Left-right planarity test with deterministic DFS order. Returns a valid
/// rotation system or an edge-minimal non-planar witness subgraph.
pub fn planar_embed(g: &Graph) -> Result<EmbedResult, PlanarityError> {
    if !g.is_connected() {
        return Err(PlanarityError::Disconnected);
    }
    match lr::lr_rotation(g) {
        Some(rotation) => {
            let rs = RotationSystem {
                graph: g.clone(),
                rotation,
            };
            rs.validate()
                .map_err(|e| PlanarityError::InvalidRotation(e.to_string()))?;
            Ok(EmbedResult::Planar(rs))
        }
        None => Ok(EmbedResult::NonPlanar {
            witness: kuratowski_witness(g),
        }),
    }
}

/// Planarity decision without embedding extraction.
pub fn is_planar(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    // test per connected component
    let comps = g
        .components_outside(&g.empty_vertex_set())
        .expect("empty separator always valid");
    comps
        .iter()
        .all(|(comp, _)| lr::lr_is_planar(&g.induced(comp)))
}

/// Shrinks a non-planar graph to an edge-minimal non-planar subgraph by
/// deleting every edge whose removal keeps it non-planar.
fn kuratowski_witness(g: &Graph) -> Graph {
    let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
    let mut i = 0;
    while i < edges.len() {
        let mut trial = edges.clone();
        trial.remove(i);
        let h = Graph::from_edges(trial.clone()).expect("subgraph valid");
        if !is_planar(&h) {
            edges = trial;
        } else {
            i += 1;
        }
    }
    Graph::from_edges(edges).expect("witness valid")
}

impl RotationSystem {
    /// Builds a rotation system from explicit per-vertex cyclic edge orders
    /// and validates it.
    pub fn new(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self, PlanarityError> {
        let rs = RotationSystem { graph, rotation };
        rs.validate()
            .map_err(|e| PlanarityError::InvalidRotation(e.to_string()))?;
        Ok(rs)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// The mirror embedding: every cyclic order reversed.
    pub fn mirrored(&self) -> RotationSystem {
        let rotation = self
            .rotation
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.reverse();
                r
            })
            .collect();
        RotationSystem {
            graph: self.graph.clone(),
            rotation,
        }
    }

    /// Checks the rotation-system invariants: every incident edge appears
    /// exactly once per endpoint, face traversal closes, and Euler's relation
    /// holds on the sphere (genus zero) for the connected graph.
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.graph;
        if self.rotation.len() != g.n() {
            return Err(format!(
                "rotation has {} lists for {} vertices",
                self.rotation.len(),
                g.n()
            ));
        }
        for v in 0..g.n() {
            let mut incident: Vec<usize> = g.incident_edges(v).to_vec();
            let mut rot: Vec<usize> = self.rotation[v].clone();
            incident.sort();
            rot.sort();
            if incident != rot {
                return Err(format!("rotation at vertex index {v} is not its edge set"));
            }
        }
        if g.n() > 0 && g.is_connected() {
            let f = self.faces().len();
            let lhs = g.n() as i64 - g.m() as i64 + f as i64;
            if lhs != 2 {
                return Err(format!(
                    "Euler check failed: V-E+F = {} - {} + {} = {lhs} != 2",
                    g.n(),
                    g.m(),
                    f
                ));
            }
        }
        Ok(())
    }

    /// Position of edge `e` in the rotation at vertex `v`.
    fn pos(&self, v: usize, e: usize) -> usize {
        self.rotation[v]
            .iter()
            .position(|&x| x == e)
            .expect("edge incident to vertex")
    }

    /// The next directed edge of the face walk after traversing `e` into `v`:
    /// the successor of `e` in the rotation at `v`, taken cyclically.
    fn next_in_face(&self, v: usize, e: usize) -> usize {
        let rot = &self.rotation[v];
        let i = self.pos(v, e);
        rot[(i + 1) % rot.len()]
    }

    /// All closed facial walks. Each directed edge is traversed exactly once
    /// over all faces.
    pub fn faces(&self) -> Vec<Face> {
        let g = &self.graph;
        let m = g.m();
        // directed edge keys: 2e (from smaller endpoint), 2e+1 (from larger)
        let mut used = vec![false; 2 * m];
        let mut faces = Vec::new();
        for start in 0..2 * m {
            if used[start] {
                continue;
            }
            let mut verts = Vec::new();
            let mut edges = Vec::new();
            let mut cur = start;
            loop {
                used[cur] = true;
                let e = cur / 2;
                let (a, b) = g.edge_endpoints(e);
                let (u, v) = if cur % 2 == 0 { (a, b) } else { (b, a) };
                verts.push(u);
                edges.push(e);
                // arrive at v via e; continue along successor of e at v
                let ne = self.next_in_face(v, e);
                let (na, nb) = g.edge_endpoints(ne);
                debug_assert!(na == v || nb == v);
                let dir = if na == v { 2 * ne } else { 2 * ne + 1 };
                cur = dir;
                if cur == start {
                    break;
                }
            }
            faces.push(Face {
                vertices: verts,
                edges,
            });
        }
        faces
    }

    /// Facial cycles: the faces whose walks are simple cycles, as edge sets,
    /// deduplicated (the two faces of a cycle graph have equal edge sets).
    pub fn facial_cycles(&self) -> Vec<EdgeSet> {
        let mut out: Vec<EdgeSet> = self
            .faces()
            .iter()
            .filter_map(|f| f.as_cycle(&self.graph))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Groups the faces into the two regions a cycle bounds: faces sharing an
    /// edge outside the cycle are in the same region. Returns the face list
    /// and, per face, its region index (0 or 1).
    fn face_regions(&self, c: &EdgeSet) -> Result<(Vec<Face>, Vec<usize>), PlanarityError> {
        if !cyclespace::is_cycle(&self.graph, c) {
            return Err(PlanarityError::NotACycle);
        }
        let faces = self.faces();
        let mut uf: Vec<usize> = (0..faces.len()).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut c = x;
            while uf[c] != r {
                let n = uf[c];
                uf[c] = r;
                c = n;
            }
            r
        }
        // faces bordering each edge
        let mut border: Vec<Vec<usize>> = vec![Vec::new(); self.graph.m()];
        for (fi, f) in faces.iter().enumerate() {
            for &e in &f.edges {
                border[e].push(fi);
            }
        }
        for e in 0..self.graph.m() {
            if c.contains(e) {
                continue;
            }
            let b = &border[e];
            for w in b.windows(2) {
                let (x, y) = (find(&mut uf, w[0]), find(&mut uf, w[1]));
                if x != y {
                    uf[x] = y;
                }
            }
        }
        let mut roots: Vec<usize> = (0..faces.len()).map(|i| find(&mut uf, i)).collect();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != 2 {
            return Err(PlanarityError::InvalidRotation(format!(
                "cycle splits faces into {} regions, expected 2",
                distinct.len()
            )));
        }
        for r in roots.iter_mut() {
            *r = if *r == distinct[0] { 0 } else { 1 };
        }
        Ok((faces, roots))
    }

    /// The two open regions of a cycle, as the vertex sets drawn strictly
    /// inside each; on the sphere the pair is unordered.
    pub fn cycle_sides(&self, c: &EdgeSet) -> Result<SidePair, PlanarityError> {
        let g = &self.graph;
        let (faces, region) = self.face_regions(c)?;
        let on_cycle = cyclespace::support(g, c);
        let mut side = [g.empty_vertex_set(), g.empty_vertex_set()];
        for (fi, f) in faces.iter().enumerate() {
            for &v in &f.vertices {
                if !on_cycle.contains(v) {
                    side[region[fi]].insert(v);
                }
            }
        }
        let [a, b] = side;
        // normalize: side_a holds the smallest off-cycle vertex
        let (side_a, side_b) = match (a.first(), b.first()) {
            (Some(x), Some(y)) if y < x => (b, a),
            (None, Some(_)) => (b, a),
            _ => (a, b),
        };
        Ok(SidePair { side_a, side_b })
    }

    /// Cycle nestedness: `c2` is nested with `c1` iff the drawing of `c2`
    /// does not meet both open regions of `c1`. Symmetric on the sphere.
    pub fn cycles_nested(&self, c1: &EdgeSet, c2: &EdgeSet) -> Result<bool, PlanarityError> {
        if !cyclespace::is_cycle(&self.graph, c2) {
            return Err(PlanarityError::NotACycle);
        }
        let (faces, region) = self.face_regions(c1)?;
        // region of each edge off c1: both bordering faces agree
        let mut edge_region: Vec<Option<usize>> = vec![None; self.graph.m()];
        for (fi, f) in faces.iter().enumerate() {
            for &e in &f.edges {
                edge_region[e] = Some(region[fi]);
            }
        }
        let mut seen = [false, false];
        for e in c2.iter() {
            if c1.contains(e) {
                continue;
            }
            seen[edge_region[e].expect("every edge borders a face")] = true;
        }
        Ok(!(seen[0] && seen[1]))
    }

    /// True iff every family member is a facial cycle of this embedding and
    /// the family generates the cycle space of the host.
    pub fn facial_generation_certificate(&self, fam: &[EdgeSet]) -> Result<bool, PlanarityError> {
        let facial = self.facial_cycles();
        for c in fam {
            if !cyclespace::is_cycle(&self.graph, c) {
                return Err(PlanarityError::NotACycle);
            }
            if !facial.contains(c) {
                return Ok(false);
            }
        }
        let rep = cyclespace::generates_cycle_space(&self.graph, fam)
            .map_err(|e| PlanarityError::InvalidRotation(e.to_string()))?;
        Ok(rep.generates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cyclespace::edge_set_of_pairs;

    fn embed(g: &Graph) -> RotationSystem {
        planar_embed(g).unwrap().unwrap_planar()
    }

    #[test]
    fn k4_embeds_with_four_faces() {
        let g = corpus::complete(4);
        let rs = embed(&g);
        assert_eq!(rs.faces().len(), 4);
        for f in rs.faces() {
            assert_eq!(f.len(), 3);
        }
    }

    #[test]
    fn k5_yields_witness() {
        let g = corpus::complete(5);
        match planar_embed(&g).unwrap() {
            EmbedResult::NonPlanar { witness } => {
                assert!(!is_planar(&witness));
                // K5 is edge-minimal non-planar: witness is all of it
                assert_eq!(witness.m(), 10);
            }
            EmbedResult::Planar(_) => panic!("K5 embedded"),
        }
    }

    #[test]
    fn k33_yields_witness() {
        let g = Graph::from_edges(
            [(1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)],
        )
        .unwrap();
        match planar_embed(&g).unwrap() {
            EmbedResult::NonPlanar { witness } => assert_eq!(witness.m(), 9),
            EmbedResult::Planar(_) => panic!("K3,3 embedded"),
        }
    }

    #[test]
    fn k6_witness_is_kuratowski_like() {
        let g = corpus::complete(6);
        match planar_embed(&g).unwrap() {
            EmbedResult::NonPlanar { witness } => {
                assert!(!is_planar(&witness));
                // edge-minimal: removing any edge restores planarity
                for i in 0..witness.m() {
                    let mut es = witness.edges().to_vec();
                    es.remove(i);
                    let h = Graph::from_edges(es).unwrap();
                    assert!(is_planar(&h));
                }
            }
            EmbedResult::Planar(_) => panic!("K6 embedded"),
        }
    }

    #[test]
    fn cube_embeds_with_six_faces() {
        let g = corpus::cube();
        let rs = embed(&g);
        assert_eq!(rs.faces().len(), 6);
        assert_eq!(rs.facial_cycles().len(), 6);
    }

    #[test]
    fn c4_has_two_faces() {
        let g = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let rs = embed(&g);
        assert_eq!(rs.faces().len(), 2);
        // both face walks have the same edge set
        assert_eq!(rs.facial_cycles().len(), 1);
    }

    #[test]
    fn tree_single_face() {
        let g = Graph::from_edges([(1, 2), (2, 3), (2, 4)]).unwrap();
        let rs = embed(&g);
        assert_eq!(rs.faces().len(), 1);
        assert_eq!(rs.faces()[0].len(), 6); // each edge twice
    }

    #[test]
    fn every_directed_edge_on_exactly_one_face() {
        for g in [corpus::cube(), corpus::grid(4, 5), corpus::strip(3).0] {
            let rs = embed(&g);
            let total: usize = rs.faces().iter().map(|f| f.len()).sum();
            assert_eq!(total, 2 * g.m());
        }
    }

    #[test]
    fn random_planar_graphs_satisfy_euler() {
        for seed in 0..20 {
            let g = corpus::random_connected_planar(seed, 25);
            let rs = embed(&g);
            assert_eq!(
                rs.faces().len() as i64,
                2 - g.n() as i64 + g.m() as i64,
                "Euler failed on seed {seed}"
            );
        }
    }

    #[test]
    fn cycle_sides_k4_facial_triangle() {
        let g = corpus::complete(4);
        let rs = embed(&g);
        let tri = edge_set_of_pairs(&g, [(1, 2), (2, 3), (3, 1)]).unwrap();
        let sides = rs.cycle_sides(&tri).unwrap();
        assert_eq!(g.set_to_ids(&sides.side_a), vec![4]);
        assert!(sides.side_b.is_empty());
    }

    #[test]
    fn cycle_sides_grid_ring() {
        let g = corpus::grid(5, 5);
        let rs = embed(&g);
        // ring of the 8 vertices around the center vertex 12
        let ring = edge_set_of_pairs(
            &g,
            [(6, 7), (7, 8), (8, 13), (13, 18), (18, 17), (17, 16), (16, 11), (11, 6)],
        )
        .unwrap();
        let sides = rs.cycle_sides(&ring).unwrap();
        let (a, b) = (sides.side_a, sides.side_b);
        let counts = (a.count().min(b.count()), a.count().max(b.count()));
        assert_eq!(counts, (1, 16));
        let small = if a.count() == 1 { a } else { b };
        assert_eq!(g.set_to_ids(&small), vec![12]);
    }

    #[test]
    fn cycle_sides_strip_red_cycle() {
        let (g, reds) = corpus::strip(3);
        let rs = embed(&g);
        let mid = &reds[2];
        let sides = rs.cycle_sides(mid).unwrap();
        assert!(!sides.side_a.is_empty());
        assert!(!sides.side_b.is_empty());
        // cross-check against components_outside
        let s = crate::cyclespace::support(&g, mid);
        let comps = g.components_outside(&s).unwrap();
        assert_eq!(comps.len(), 2);
        let mut expect: Vec<VertexSet> = comps.into_iter().map(|(c, _)| c).collect();
        let mut got = vec![sides.side_a, sides.side_b];
        expect.sort();
        got.sort();
        assert_eq!(expect, got);
    }

    #[test]
    fn facial_cycles_pairwise_nested() {
        let g = corpus::cube();
        let rs = embed(&g);
        let faces = rs.facial_cycles();
        for a in &faces {
            for b in &faces {
                assert!(rs.cycles_nested(a, b).unwrap());
            }
        }
    }

    #[test]
    fn strip_red_cycles_nested() {
        let (g, reds) = corpus::strip(4);
        let rs = embed(&g);
        for a in &reds {
            for b in &reds {
                assert!(rs.cycles_nested(a, b).unwrap());
            }
        }
    }

    #[test]
    fn grid_band_cycles_not_nested() {
        // 3x3 grid, boundary of the left 2-column band vs the top 2-row band
        let g = corpus::grid(3, 3);
        let left = edge_set_of_pairs(&g, [(0, 1), (1, 4), (4, 7), (7, 6), (6, 3), (3, 0)]).unwrap();
        let top = edge_set_of_pairs(&g, [(0, 1), (1, 2), (2, 5), (5, 4), (4, 3), (3, 0)]).unwrap();
        let rs = embed(&g);
        assert!(!rs.cycles_nested(&left, &top).unwrap());
        assert!(!rs.cycles_nested(&top, &left).unwrap());
        // each meets both sides of the other (derived check)
        let sides = rs.cycle_sides(&left).unwrap();
        let sup_top = crate::cyclespace::support(&g, &top);
        assert!(sides.side_a.intersects(&sup_top) && sides.side_b.intersects(&sup_top));
    }

    #[test]
    fn nestedness_reflexive_and_symmetric() {
        let (g, reds) = corpus::strip(3);
        let rs = embed(&g);
        let mut cycles = rs.facial_cycles();
        cycles.extend(reds.iter().cloned());
        for c in &cycles {
            assert!(rs.cycles_nested(c, c).unwrap());
        }
        for a in &cycles {
            for b in &cycles {
                assert_eq!(
                    rs.cycles_nested(a, b).unwrap(),
                    rs.cycles_nested(b, a).unwrap()
                );
            }
        }
    }

    #[test]
    fn whitney_invariance_under_mirror() {
        // for 3-connected hosts, sides and nestedness agree between an
        // embedding and its mirror
        let (g, reds) = corpus::strip(3);
        let rs = embed(&g);
        let mirror = rs.mirrored();
        mirror.validate().unwrap();
        let mut cycles = rs.facial_cycles();
        cycles.extend(reds.iter().cloned());
        for a in &cycles {
            let s1 = {
                let p = rs.cycle_sides(a).unwrap();
                let mut v = vec![p.side_a, p.side_b];
                v.sort();
                v
            };
            let s2 = {
                let p = mirror.cycle_sides(a).unwrap();
                let mut v = vec![p.side_a, p.side_b];
                v.sort();
                v
            };
            assert_eq!(s1, s2);
            for b in &cycles {
                assert_eq!(
                    rs.cycles_nested(a, b).unwrap(),
                    mirror.cycles_nested(a, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let c4 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let rs = embed(&c4);
        let fam = rs.facial_cycles();
        assert_eq!(fam.len(), 1);
        assert!(rs.facial_generation_certificate(&fam).unwrap());

        let g = corpus::cube();
        let rs = embed(&g);
        let faces = rs.facial_cycles();
        assert!(rs.facial_generation_certificate(&faces).unwrap());
        assert!(!rs.facial_generation_certificate(&faces[0..3]).unwrap());

        // a non-facial cycle fails the facial half of the certificate
        let (g, reds) = corpus::strip(4);
        let rs = embed(&g);
        let mut fam = rs.facial_cycles();
        fam.push(reds[2].clone());
        assert!(!rs.facial_generation_certificate(&fam).unwrap());
    }

    #[test]
    fn sides_give_separations() {
        // for every cycle, the side pair partitions V with V(C)
        let (g, reds) = corpus::strip(3);
        let rs = embed(&g);
        for c in &reds {
            let p = rs.cycle_sides(c).unwrap();
            let sup = crate::cyclespace::support(&g, c);
            let mut all = p.side_a.clone();
            assert!(p.side_a.is_disjoint(&p.side_b));
            all.union_with(&p.side_b);
            assert!(all.is_disjoint(&sup));
            all.union_with(&sup);
            assert_eq!(all, g.full_vertex_set());
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new([1, 2, 3, 4], [(1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            planar_embed(&g),
            Err(PlanarityError::Disconnected)
        ));
    }
}
