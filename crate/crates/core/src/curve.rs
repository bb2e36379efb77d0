//! Stable pointed nodal curves as decorated dual graphs.
//!
//! Edges are stored as pairs of half-edges so loops and parallel edges are
//! ordinary data. Vertex order is declaration order and fixes the row order
//! of the Laplacian.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::lattice::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub label: String,
    pub genus: i64,
    /// Inserted rational component of a semistable model.
    pub exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub ends: [usize; 2],
    /// Label of the node this edge descends from; equals `label` for nodes of
    /// the input curve. Points on components are named by it.
    pub origin: String,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The vertex across the edge from `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leg {
    pub label: String,
    pub vertex: usize,
    pub order: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error("negative genus on vertex `{0}`")]
    NegativeGenus(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableCurve {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    Disconnected,
    Unstable { vertex: String, special_points: usize },
    GenusTooSmall { genus: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub genus: i64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveType {
    CompactType,
    PseudocompactType,
    NonPseudocompact,
}

impl CurveType {
    pub fn is_pseudocompact(self) -> bool {
        !matches!(self, CurveType::NonPseudocompact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveTypeInfo {
    pub kind: CurveType,
    /// Indices of separating edges.
    pub bridges: Vec<usize>,
    /// Indices of self-edges.
    pub loops: Vec<usize>,
}

impl StableCurve {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, legs: Vec<Leg>) -> Result<Self, CurveError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if v.genus < 0 {
                return Err(CurveError::NegativeGenus(v.label.clone()));
            }
            if !seen.insert(v.label.as_str()) {
                return Err(CurveError::DuplicateLabel(v.label.clone()));
            }
        }
        let mut points = BTreeSet::new();
        for e in &edges {
            for &end in &e.ends {
                if end >= vertices.len() {
                    return Err(CurveError::VertexIndex(end));
                }
            }
            if !points.insert(e.label.as_str()) {
                return Err(CurveError::DuplicateLabel(e.label.clone()));
            }
        }
        for l in &legs {
            if l.vertex >= vertices.len() {
                return Err(CurveError::VertexIndex(l.vertex));
            }
            if !points.insert(l.label.as_str()) {
                return Err(CurveError::DuplicateLabel(l.label.clone()));
            }
        }
        Ok(Self { vertices, edges, legs })
    }

    pub fn builder() -> CurveBuilder {
        CurveBuilder::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Sum of Σ g_i and the first Betti number of the graph.
    pub fn arithmetic_genus(&self) -> i64 {
        let gs: i64 = self.vertices.iter().map(|v| v.genus).sum();
        gs + self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Number of half-edges at `v`, loops counted twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| e.ends.iter().filter(|&&x| x == v).count())
            .sum()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.is_loop() && e.ends[0] == v).count()
    }

    /// Genus of the component including its self-nodes.
    pub fn component_arithmetic_genus(&self, v: usize) -> i64 {
        self.vertices[v].genus + self.loop_count(v) as i64
    }

    pub fn legs_at(&self, v: usize) -> impl Iterator<Item = &Leg> {
        self.legs.iter().filter(move |l| l.vertex == v)
    }

    /// Sum of leg orders at `v`.
    pub fn leg_order_sum(&self, v: usize) -> BigInt {
        self.legs_at(v).map(|l| &l.order).sum()
    }

    /// Non-loop edges incident to `v`, in edge order.
    pub fn non_loop_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| !self.edges[i].is_loop() && self.edges[i].ends.contains(&v))
            .collect()
    }

    pub fn loops_at(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].is_loop() && self.edges[i].ends[0] == v)
            .collect()
    }

    pub fn signature(&self) -> Vec<BigInt> {
        self.legs.iter().map(|l| l.order.clone()).collect()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.ends.contains(&v) {
                    let w = e.other(v);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Connectivity, stability and genus checks; never fails. Exceptional
    /// components of a semistable model are exempt from stability.
    pub fn validate(&self) -> ValidationReport {
        let genus = self.arithmetic_genus();
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::NoVertices);
        } else if !self.is_connected() {
            violations.push(Violation::Disconnected);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let special = self.valence(i) + self.legs_at(i).count();
            if v.genus == 0 && special < 3 && !v.exceptional {
                violations.push(Violation::Unstable {
                    vertex: v.label.clone(),
                    special_points: special,
                });
            }
        }
        if genus < 1 {
            violations.push(Violation::GenusTooSmall { genus });
        }
        ValidationReport { genus, violations }
    }

    /// Separating edges via a lowpoint search keyed on edge ids, so parallel
    /// edges are never reported.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = Vec::new();
        let mut time = 0;
        let adj: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|v| {
                self.edges
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_loop() && e.ends.contains(&v))
                    .map(|(i, e)| (e.other(v), i))
                    .collect()
            })
            .collect();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (vertex, parent edge, next neighbour index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (v, pe, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let (w, ei) = adj[v][*next];
                    *next += 1;
                    if ei == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, ei, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            out.push(pe);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn classify_type(&self) -> CurveTypeInfo {
        let bridges = self.bridges();
        let loops: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].is_loop()).collect();
        let kind = if loops.is_empty() && bridges.len() == self.edges.len() {
            CurveType::CompactType
        } else if bridges.len() + loops.len() == self.edges.len() {
            CurveType::PseudocompactType
        } else {
            CurveType::NonPseudocompact
        };
        CurveTypeInfo { kind, bridges, loops }
    }

    /// Off-diagonal entries count edges, diagonal makes rows sum to zero;
    /// loops contribute nothing.
    pub fn laplacian(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut m = IntMatrix::zeros(n, n);
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            let [a, b] = e.ends;
            for (r, c) in [(a, b), (b, a)] {
                let x = m.get(r, c) + 1;
                m.set(r, c, x);
                let d = m.get(r, r) - 1;
                m.set(r, r, d);
            }
        }
        m
    }

    /// Replace `edge` by a path through `length` new exceptional genus-0
    /// vertices, numbered from the first endpoint. Stability is not
    /// re-checked.
    pub fn insert_rational_chain(&self, edge: &str, length: usize) -> Result<StableCurve, CurveError> {
        let idx = self
            .edge_index(edge)
            .ok_or_else(|| CurveError::UnknownEdge(edge.to_string()))?;
        if length == 0 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        let old = out.edges[idx].clone();
        let first = out.vertices.len();
        for k in 1..=length {
            out.vertices.push(Vertex {
                label: format!("{}~e{}", old.label, k),
                genus: 0,
                exceptional: true,
            });
        }
        let path: Vec<usize> = std::iter::once(old.ends[0])
            .chain(first..first + length)
            .chain(std::iter::once(old.ends[1]))
            .collect();
        out.edges[idx] = Edge {
            label: old.label.clone(),
            ends: [path[0], path[1]],
            origin: old.origin.clone(),
        };
        for k in 1..path.len() - 1 {
            out.edges.push(Edge {
                label: format!("{}~{}", old.label, k),
                ends: [path[k], path[k + 1]],
                origin: old.origin.clone(),
            });
        }
        Ok(out)
    }

    /// Remove exceptional vertices of valence two without legs, merging their
    /// two edges back into one node labelled by its origin.
    pub fn contract_exceptional_chains(&self) -> StableCurve {
        let mut cur = self.clone();
        while let Some(v) = (0..cur.vertices.len()).find(|&v| {
            cur.vertices[v].exceptional
                && cur.legs_at(v).next().is_none()
                && cur.valence(v) == 2
                && cur.loop_count(v) == 0
        }) {
            let inc: Vec<usize> = cur.non_loop_edges_at(v);
            let (e1, e2) = (inc[0], inc[1]);
            let keep = e1.min(e2);
            let drop = e1.max(e2);
            let far = cur.edges[drop].other(v);
            let mut ends = cur.edges[keep].ends;
            let slot = if ends[0] == v { 0 } else { 1 };
            ends[slot] = far;
            let origin = cur.edges[keep].origin.clone();
            cur.edges[keep] = Edge {
                label: origin.clone(),
                ends,
                origin,
            };
            cur.edges.remove(drop);
            cur.vertices.remove(v);
            let fix = |x: usize| if x > v { x - 1 } else { x };
            for e in &mut cur.edges {
                e.ends = [fix(e.ends[0]), fix(e.ends[1])];
            }
            for l in &mut cur.legs {
                l.vertex = fix(l.vertex);
            }
        }
        cur
    }

    /// Same curve with vertices reordered: new vertex `i` is old `perm[i]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> StableCurve {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        StableCurve {
            vertices: perm.iter().map(|&o| self.vertices[o].clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    ends: [inv[e.ends[0]], inv[e.ends[1]]],
                    ..e.clone()
                })
                .collect(),
            legs: self
                .legs
                .iter()
                .map(|l| Leg {
                    vertex: inv[l.vertex],
                    ..l.clone()
                })
                .collect(),
        }
    }

    /// Edge multiset between vertex labels, for isomorphism-style comparisons.
    pub fn adjacency_summary(&self) -> BTreeMap<(String, String), usize> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            let mut pair = [
                self.vertices[e.ends[0]].label.clone(),
                self.vertices[e.ends[1]].label.clone(),
            ];
            pair.sort();
            let [a, b] = pair;
            *out.entry((a, b)).or_insert(0) += 1;
        }
        out
    }
}

/// Label-based construction helper.
#[derive(Default, Clone, Debug)]
pub struct CurveBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String, String)>,
    legs: Vec<(String, String, BigInt)>,
}

impl CurveBuilder {
    pub fn vertex(mut self, label: &str, genus: i64) -> Self {
        self.vertices.push(Vertex {
            label: label.to_string(),
            genus,
            exceptional: false,
        });
        self
    }

    pub fn edge(mut self, label: &str, a: &str, b: &str) -> Self {
        self.edges.push((label.to_string(), a.to_string(), b.to_string()));
        self
    }

    pub fn leg(mut self, label: &str, vertex: &str, order: impl Into<BigInt>) -> Self {
        self.legs.push((label.to_string(), vertex.to_string(), order.into()));
        self
    }

    pub fn build(self) -> Result<StableCurve, CurveError> {
        let find = |name: &str| {
            self.vertices
                .iter()
                .position(|v| v.label == name)
                .ok_or_else(|| CurveError::UnknownVertex(name.to_string()))
        };
        let mut edges = Vec::new();
        for (label, a, b) in &self.edges {
            edges.push(Edge {
                label: label.clone(),
                ends: [find(a)?, find(b)?],
                origin: label.clone(),
            });
        }
        let mut legs = Vec::new();
        for (label, v, order) in &self.legs {
            legs.push(Leg {
                label: label.clone(),
                vertex: find(v)?,
                order: order.clone(),
            });
        }
        StableCurve::new(self.vertices.clone(), edges, legs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> StableCurve {
        StableCurve::builder()
            .vertex("X", 2)
            .vertex("R", 0)
            .edge("q1", "R", "X")
            .edge("q2", "X", "R")
            .leg("z", "R", 4)
            .build()
            .unwrap()
    }

    #[test]
    fn validates_one_node_curve() {
        let c = StableCurve::builder()
            .vertex("C1", 1)
            .vertex("C2", 2)
            .edge("q", "C1", "C2")
            .leg("z1", "C1", 2)
            .leg("z2", "C2", 2)
            .build()
            .unwrap();
        let r = c.validate();
        assert!(r.is_ok());
        assert_eq!(r.genus, 3);
    }

    #[test]
    fn banana_of_elliptic_curves() {
        let c = StableCurve::builder()
            .vertex("E1", 1)
            .vertex("E2", 1)
            .edge("q1", "E1", "E2")
            .edge("q2", "E1", "E2")
            .build()
            .unwrap();
        assert_eq!(c.validate().genus, 3);
        assert!(c.validate().is_ok());
        assert_eq!(c.classify_type().kind, CurveType::NonPseudocompact);
        assert!(c.bridges().is_empty());
    }

    #[test]
    fn isolated_rational_vertex() {
        let c = StableCurve::builder().vertex("P", 0).leg("z", "P", 0).build().unwrap();
        let r = c.validate();
        assert_eq!(r.genus, 0);
        assert!(r.violations.contains(&Violation::GenusTooSmall { genus: 0 }));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Unstable { special_points: 1, .. })));
    }

    #[test]
    fn type_classification() {
        let tree = StableCurve::builder()
            .vertex("A", 1)
            .vertex("B", 1)
            .edge("q", "A", "B")
            .build()
            .unwrap();
        assert_eq!(tree.classify_type().kind, CurveType::CompactType);
        let looped = StableCurve::builder()
            .vertex("A", 1)
            .edge("q", "A", "A")
            .build()
            .unwrap();
        let info = looped.classify_type();
        assert_eq!(info.kind, CurveType::PseudocompactType);
        assert_eq!(info.loops, vec![0]);
        assert_eq!(c1().classify_type().kind, CurveType::NonPseudocompact);
    }

    #[test]
    fn laplacian_small_cases() {
        let single = StableCurve::builder().vertex("A", 2).build().unwrap();
        assert_eq!(single.laplacian(), IntMatrix::from_rows(&[vec![0]]));
        let two = StableCurve::builder()
            .vertex("A", 1)
            .vertex("B", 1)
            .edge("q", "A", "B")
            .edge("l", "A", "A")
            .build()
            .unwrap();
        assert_eq!(two.laplacian(), IntMatrix::from_rows(&[vec![-1, 1], vec![1, -1]]));
    }

    #[test]
    fn chain_insertion_reproduces_cycle_laplacian() {
        let c3 = c1().insert_rational_chain("q1", 2).unwrap();
        assert_eq!(
            c3.laplacian(),
            IntMatrix::from_rows(&[
                vec![-2, 1, 0, 1],
                vec![1, -2, 1, 0],
                vec![0, 1, -2, 1],
                vec![1, 0, 1, -2],
            ])
        );
        assert_eq!(c3.arithmetic_genus(), 3);
        assert!(c3.vertices()[2].exceptional && c3.vertices()[3].exceptional);
        assert!(c3.edges().iter().all(|e| e.origin.starts_with('q')));
    }

    #[test]
    fn chain_length_zero_and_contraction() {
        assert_eq!(c1().insert_rational_chain("q1", 0).unwrap(), c1());
        assert_eq!(
            c1().insert_rational_chain("nope", 1).unwrap_err(),
            CurveError::UnknownEdge("nope".into())
        );
        for len in 1..4 {
            let back = c1()
                .insert_rational_chain("q2", len)
                .unwrap()
                .contract_exceptional_chains();
            assert_eq!(back.adjacency_summary(), c1().adjacency_summary());
            assert_eq!(back.laplacian(), c1().laplacian());
        }
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = StableCurve::builder()
            .vertex("A", 1)
            .vertex("A", 2)
            .build()
            .unwrap_err();
        assert_eq!(err, CurveError::DuplicateLabel("A".into()));
    }
}
