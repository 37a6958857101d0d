//! Built-in example algebras, graphs, and Heintze data.
//!
//! These are the fixtures exercised by the self-check suite and the test
//! corpus: small algebras whose invariants are known by hand.

use crate::algebra::NilpotentLieAlgebra;
use crate::graph::DirectedGraph;
use crate::heintze::HeintzeData;
use crate::linalg::Matrix;
use crate::rational::{rat, ratio, Rat};
use crate::spectral::Derivation;
use rand::Rng;
use std::sync::Arc;

/// Abelian algebra of the given dimension.
pub fn abelian(n: usize) -> Arc<NilpotentLieAlgebra> {
    NilpotentLieAlgebra::new(n, &[], None).expect("abelian data is always valid")
}

/// Heisenberg algebra of dimension 2m + 1: [X_i, Y_i] = Z.
pub fn heisenberg(m: usize) -> Arc<NilpotentLieAlgebra> {
    assert!(m >= 1, "heisenberg(m) needs m >= 1");
    let dim = 2 * m + 1;
    let triples: Vec<(usize, usize, usize, Rat)> =
        (0..m).map(|i| (i, m + i, dim - 1, rat(1))).collect();
    let labels: Vec<String> = (1..=m)
        .map(|i| format!("X{i}"))
        .chain((1..=m).map(|i| format!("Y{i}")))
        .chain(std::iter::once("Z".to_string()))
        .collect();
    NilpotentLieAlgebra::new(dim, &triples, Some(labels))
        .expect("heisenberg data is always valid")
}

/// Filiform algebra of dimension n >= 3: [e1, e_i] = e_{i+1}, class n − 1.
pub fn filiform(n: usize) -> Arc<NilpotentLieAlgebra> {
    assert!(n >= 3, "filiform(n) needs n >= 3");
    let triples: Vec<(usize, usize, usize, Rat)> =
        (1..n - 1).map(|i| (0, i, i + 1, rat(1))).collect();
    NilpotentLieAlgebra::new(n, &triples, None).expect("filiform data is always valid")
}

/// Free two-generator nilpotent algebra of class 3 (dimension 5):
/// e3 = [e1, e2], e4 = [e1, e3], e5 = [e2, e3].
pub fn free_nilpotent_2_3() -> Arc<NilpotentLieAlgebra> {
    NilpotentLieAlgebra::new(
        5,
        &[(0, 1, 2, rat(1)), (0, 2, 3, rat(1)), (1, 2, 4, rat(1))],
        None,
    )
    .expect("free nilpotent data is valid")
}

/// Free two-generator nilpotent algebra of class 4 (dimension 8):
/// extends the class-3 algebra with e6 = [e1, e4], e7 = [e2, e4] = [e1, e5],
/// e8 = [e2, e5].
pub fn free_nilpotent_2_4() -> Arc<NilpotentLieAlgebra> {
    NilpotentLieAlgebra::new(
        8,
        &[
            (0, 1, 2, rat(1)),
            (0, 2, 3, rat(1)),
            (1, 2, 4, rat(1)),
            (0, 3, 5, rat(1)),
            (1, 3, 6, rat(1)),
            (0, 4, 6, rat(1)),
            (1, 4, 7, rat(1)),
        ],
        None,
    )
    .expect("free nilpotent data is valid")
}

/// Triangle graph on three vertices.
pub fn triangle_graph() -> DirectedGraph {
    DirectedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).expect("triangle is valid")
}

/// Two disjoint edges on four vertices.
pub fn two_edges_graph() -> DirectedGraph {
    DirectedGraph::new(4, vec![(0, 1), (2, 3)]).expect("two edges are valid")
}

/// Triangle graph with weights 1, 2, 3.
pub fn triangle_data() -> HeintzeData {
    let g = triangle_graph();
    let (_, d) = g.weighted_algebra(&[rat(1), rat(2), rat(3)]).expect("weights are positive");
    HeintzeData::new(d).expect("diagonal spectrum is positive rational")
}

/// Two-edge graph with weights 1, 2, 3, 3.
pub fn two_edges_data() -> HeintzeData {
    let g = two_edges_graph();
    let (_, d) =
        g.weighted_algebra(&[rat(1), rat(2), rat(3), rat(3)]).expect("weights are positive");
    HeintzeData::new(d).expect("diagonal spectrum is positive rational")
}

/// Heisenberg algebra with the stratifying diagonal derivation
/// diag(1, 1, 2).
pub fn heisenberg_diagonal_data() -> HeintzeData {
    let d = Derivation::diagonal(heisenberg(1), &[rat(1), rat(1), rat(2)])
        .expect("diagonal weights satisfy the product rule");
    HeintzeData::new(d).expect("spectrum is positive rational")
}

/// Heisenberg algebra with a non-diagonalizable derivation: a Jordan block
/// at 1 on the generators and 2 on the center.
pub fn heisenberg_block_data() -> HeintzeData {
    let m = Matrix::from_rows(vec![
        vec![rat(1), rat(1), rat(0)],
        vec![rat(0), rat(1), rat(0)],
        vec![rat(0), rat(0), rat(2)],
    ]);
    let d = Derivation::new(heisenberg(1), m).expect("matrix satisfies the product rule");
    HeintzeData::new(d).expect("spectrum is positive rational")
}

/// Five-dimensional Heisenberg algebra with a non-diagonalizable derivation
/// whose blocks at eigenvalue 1 both have size two: X2 ↦ X1 + X2,
/// Y1 ↦ Y1 − Y2, Z ↦ 2Z.
pub fn five_dim_block_data() -> HeintzeData {
    let m = Matrix::from_rows(vec![
        vec![rat(1), rat(1), rat(0), rat(0), rat(0)],
        vec![rat(0), rat(1), rat(0), rat(0), rat(0)],
        vec![rat(0), rat(0), rat(1), rat(0), rat(0)],
        vec![rat(0), rat(0), rat(-1), rat(1), rat(0)],
        vec![rat(0), rat(0), rat(0), rat(0), rat(2)],
    ]);
    let d = Derivation::new(heisenberg(2), m).expect("matrix satisfies the product rule");
    HeintzeData::new(d).expect("spectrum is positive rational")
}

/// Random simple directed graph on 2–5 vertices: each unordered pair is an
/// edge with probability 1/2, in a random orientation, with at least one
/// edge overall.
pub fn random_graph<R: Rng>(rng: &mut R) -> DirectedGraph {
    let n = rng.random_range(2..=5usize);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < 0.5 {
                if rng.random::<f64>() < 0.5 {
                    edges.push((u, v));
                } else {
                    edges.push((v, u));
                }
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    DirectedGraph::new(n, edges).expect("distinct pairs make a valid graph")
}

/// Random positive rational with a small numerator and denominator.
pub fn random_positive_rat<R: Rng>(rng: &mut R) -> Rat {
    ratio(rng.random_range(1..=9), rng.random_range(1..=4))
}

/// Random graph with random positive vertex weights.
pub fn random_weighted_graph_data<R: Rng>(rng: &mut R) -> HeintzeData {
    let g = random_graph(rng);
    let weights: Vec<Rat> =
        (0..g.vertex_count()).map(|_| random_positive_rat(rng)).collect();
    let (_, d) = g.weighted_algebra(&weights).expect("weights are positive");
    HeintzeData::new(d).expect("graph weights give a positive rational spectrum")
}

/// Random valid Heintze datum drawn from several families: abelian and
/// Heisenberg algebras with compatible diagonal weights, filiform algebras,
/// weighted graph algebras, and a non-diagonalizable Heisenberg variant.
pub fn random_heintze_data<R: Rng>(rng: &mut R) -> HeintzeData {
    let d = match rng.random_range(0..5u8) {
        0 => {
            let n = rng.random_range(1..=5usize);
            let w: Vec<Rat> = (0..n).map(|_| random_positive_rat(rng)).collect();
            Derivation::diagonal(abelian(n), &w).expect("abelian admits any weights")
        }
        1 => {
            let m = rng.random_range(1..=2usize);
            let z = random_positive_rat(rng);
            // [X_i, Y_i] = Z forces x_i + y_i = z; split z at a random point.
            let xs: Vec<Rat> =
                (0..m).map(|_| &z * ratio(rng.random_range(1..=7), 8)).collect();
            let w: Vec<Rat> = xs
                .iter()
                .cloned()
                .chain(xs.iter().map(|x| &z - x))
                .chain(std::iter::once(z.clone()))
                .collect();
            Derivation::diagonal(heisenberg(m), &w).expect("weights are graded")
        }
        2 => {
            let n = rng.random_range(3..=5usize);
            // [e1, e_i] = e_{i+1} forces w_{i+1} = w_1 + w_i.
            let a = random_positive_rat(rng);
            let mut w = vec![a.clone(), random_positive_rat(rng)];
            for i in 2..n {
                let next = &a + &w[i - 1];
                w.push(next);
            }
            Derivation::diagonal(filiform(n), &w).expect("weights are graded")
        }
        3 => {
            // Jordan block at a on the generators, 2a on the center.
            let a = random_positive_rat(rng);
            let t = random_positive_rat(rng);
            let z = rat(0);
            let m = Matrix::from_rows(vec![
                vec![a.clone(), t, z.clone()],
                vec![z.clone(), a.clone(), z.clone()],
                vec![z.clone(), z, &a + &a],
            ]);
            Derivation::new(heisenberg(1), m).expect("matrix satisfies the product rule")
        }
        _ => return random_weighted_graph_data(rng),
    };
    HeintzeData::new(d).expect("each family has a positive rational spectrum")
}
