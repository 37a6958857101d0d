//! Graphs and the two-step nilpotent Lie algebras they generate.
//!
//! Each vertex contributes a generator, each edge a central element equal to
//! the bracket of its endpoints. Edge orientation only fixes the sign of
//! that bracket; reversing an edge produces an isomorphic algebra, so
//! isomorphism testing works on the underlying undirected edge sets.

use crate::algebra::NilpotentLieAlgebra;
use crate::rational::{rat, Rat};
use crate::spectral::{Derivation, SpectralError};
use num_traits::Signed;
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {}", .0 + 1)]
    Loop(usize),
    #[error("edge ({}, {}) appears twice (possibly with flipped orientation)", .0 + 1, .1 + 1)]
    DuplicateEdge(usize, usize),
    #[error("vertex index {} out of range for {vertices} vertices", .index + 1)]
    VertexOutOfRange { index: usize, vertices: usize },
    #[error("expected {expected} vertex weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("vertex weight {} must be positive", .0 + 1)]
    NonPositiveWeight(usize),
    #[error("isomorphism search is capped at 12 vertices, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Finite simple directed graph on vertices 0..vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            for &w in &[u, v] {
                if w >= vertices {
                    return Err(GraphError::VertexOutOfRange { index: w, vertices });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            // Anti-parallel duplicates would force two central generators
            // onto one unordered pair, which no bracket can satisfy.
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(DirectedGraph { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn undirected_edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect()
    }

    fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// The two-step algebra generated by this graph: one generator per
    /// vertex, one central element per edge, bracket of edge endpoints equal
    /// to the edge's element.
    pub fn build_algebra(&self) -> Arc<NilpotentLieAlgebra> {
        let p = self.vertices;
        let q = self.edges.len();
        let triples: Vec<(usize, usize, usize, Rat)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| (u, v, p + k, rat(1)))
            .collect();
        let labels: Vec<String> = (1..=p)
            .map(|i| format!("X{i}"))
            .chain((1..=q).map(|k| format!("Z{k}")))
            .collect();
        NilpotentLieAlgebra::new(p + q, &triples, Some(labels))
            .expect("graph algebras are always valid two-step algebras")
    }

    /// Diagonal derivation from positive vertex weights: a vertex generator
    /// scales by its weight, an edge element by the sum of its endpoints'.
    pub fn diagonal_derivation(
        &self,
        algebra: &Arc<NilpotentLieAlgebra>,
        weights: &[Rat],
    ) -> Result<Derivation, GraphError> {
        if weights.len() != self.vertices {
            return Err(GraphError::WeightCount { expected: self.vertices, got: weights.len() });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(GraphError::NonPositiveWeight(i));
        }
        let mut diag: Vec<Rat> = weights.to_vec();
        diag.extend(self.edges.iter().map(|&(u, v)| &weights[u] + &weights[v]));
        Ok(Derivation::diagonal(Arc::clone(algebra), &diag)?)
    }

    /// Algebra and weight derivation in one step.
    pub fn weighted_algebra(
        &self,
        weights: &[Rat],
    ) -> Result<(Arc<NilpotentLieAlgebra>, Derivation), GraphError> {
        let algebra = self.build_algebra();
        let derivation = self.diagonal_derivation(&algebra, weights)?;
        Ok((algebra, derivation))
    }
}

/// Searches for a vertex bijection matching undirected edge sets; returns a
/// witness permutation (image of each vertex of `g1`) when one exists.
/// Capped at 12 vertices: beyond that the backtracking cost is out of scope.
pub fn graph_isomorphic(
    g1: &DirectedGraph,
    g2: &DirectedGraph,
) -> Result<Option<Vec<usize>>, GraphError> {
    let p = g1.vertex_count();
    if p > 12 || g2.vertex_count() > 12 {
        return Err(GraphError::TooLarge(p.max(g2.vertex_count())));
    }
    if p != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let e1 = g1.undirected_edge_set();
    let e2 = g2.undirected_edge_set();
    let d1 = g1.degrees();
    let d2 = g2.degrees();
    let mut sorted1 = d1.clone();
    let mut sorted2 = d2.clone();
    sorted1.sort_unstable();
    sorted2.sort_unstable();
    if sorted1 != sorted2 {
        return Ok(None);
    }
    // Assign high-degree vertices first to prune early.
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(d1[v]));

    fn adjacent(edges: &BTreeSet<(usize, usize)>, u: usize, v: usize) -> bool {
        edges.contains(&(u.min(v), u.max(v)))
    }

    fn backtrack(
        pos: usize,
        order: &[usize],
        e1: &BTreeSet<(usize, usize)>,
        e2: &BTreeSet<(usize, usize)>,
        d1: &[usize],
        d2: &[usize],
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for candidate in 0..used.len() {
            if used[candidate] || d1[v] != d2[candidate] {
                continue;
            }
            let consistent = order[..pos].iter().all(|&w| {
                let img_w = image[w].expect("assigned earlier");
                adjacent(e1, v, w) == adjacent(e2, candidate, img_w)
            });
            if !consistent {
                continue;
            }
            image[v] = Some(candidate);
            used[candidate] = true;
            if backtrack(pos + 1, order, e1, e2, d1, d2, image, used) {
                return true;
            }
            image[v] = None;
            used[candidate] = false;
        }
        false
    }

    let mut image: Vec<Option<usize>> = vec![None; p];
    let mut used = vec![false; p];
    if backtrack(0, &order, &e1, &e2, &d1, &d2, &mut image, &mut used) {
        Ok(Some(image.into_iter().map(|x| x.expect("complete assignment")).collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DirectedGraph {
        DirectedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn validation_catches_bad_edges() {
        assert_eq!(DirectedGraph::new(2, vec![(0, 0)]).unwrap_err(), GraphError::Loop(0));
        assert_eq!(
            DirectedGraph::new(2, vec![(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(1, 0)
        );
        assert!(matches!(
            DirectedGraph::new(2, vec![(0, 5)]).unwrap_err(),
            GraphError::VertexOutOfRange { .. }
        ));
    }

    #[test]
    fn single_edge_gives_heisenberg() {
        let g = DirectedGraph::new(2, vec![(0, 1)]).unwrap();
        let a = g.build_algebra();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.nilpotency_class(), 2);
        assert_eq!(a.center().dim(), 1);
    }

    #[test]
    fn triangle_algebra_structure() {
        let a = triangle().build_algebra();
        assert_eq!(a.dim(), 6);
        assert_eq!(a.nilpotency_class(), 2);
        // All three central elements are brackets of generators.
        assert_eq!(a.derived_subalgebra().dim(), 3);
        assert_eq!(a.center().dim(), 3);
        assert_eq!(a.labels()[0], "X1");
        assert_eq!(a.labels()[3], "Z1");
    }

    #[test]
    fn isolated_vertices_are_central() {
        let g = DirectedGraph::new(3, vec![(0, 1)]).unwrap();
        let a = g.build_algebra();
        // X3 never appears in a bracket, so it joins Z1 in the center.
        assert_eq!(a.center().dim(), 2);
    }

    #[test]
    fn weight_derivation_scales_edges_by_sums() {
        let g = triangle();
        let (_, d) = g.weighted_algebra(&[rat(1), rat(2), rat(3)]).unwrap();
        let expected = vec![rat(1), rat(2), rat(3), rat(3), rat(5), rat(4)];
        for (i, w) in expected.iter().enumerate() {
            assert_eq!(d.matrix().get(i, i), w);
        }
    }

    #[test]
    fn weight_validation() {
        let g = triangle();
        let a = g.build_algebra();
        assert_eq!(
            g.diagonal_derivation(&a, &[rat(1), rat(2)]).unwrap_err(),
            GraphError::WeightCount { expected: 3, got: 2 }
        );
        assert_eq!(
            g.diagonal_derivation(&a, &[rat(1), rat(0), rat(2)]).unwrap_err(),
            GraphError::NonPositiveWeight(1)
        );
    }

    #[test]
    fn triangle_isomorphic_to_relabeled_triangle() {
        let g1 = triangle();
        let g2 = DirectedGraph::new(3, vec![(2, 1), (1, 0), (2, 0)]).unwrap();
        let witness = graph_isomorphic(&g1, &g2).unwrap().unwrap();
        // Verify the witness maps edges onto edges.
        let e2 = g2.undirected_edge_set();
        for &(u, v) in g1.edges() {
            let (a, b) = (witness[u], witness[v]);
            assert!(e2.contains(&(a.min(b), a.max(b))));
        }
    }

    #[test]
    fn path_and_triangle_differ() {
        let path = DirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(graph_isomorphic(&path, &triangle()).unwrap().is_none());
    }

    #[test]
    fn orientation_is_ignored() {
        let g1 = DirectedGraph::new(2, vec![(0, 1)]).unwrap();
        let g2 = DirectedGraph::new(2, vec![(1, 0)]).unwrap();
        assert!(graph_isomorphic(&g1, &g2).unwrap().is_some());
    }

    #[test]
    fn size_cap() {
        let big = DirectedGraph::new(13, vec![]).unwrap();
        assert_eq!(graph_isomorphic(&big, &big).unwrap_err(), GraphError::TooLarge(13));
    }
}
