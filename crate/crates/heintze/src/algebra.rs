//! Nilpotent Lie algebras presented by rational structure constants.
//!
//! A bracket `[e_i, e_j] = sum_k c_ijk e_k` is stored as a dense rational
//! tensor. Construction validates antisymmetry, the Jacobi identity, and
//! nilpotency, so every value of this type is a genuine nilpotent Lie
//! algebra; downstream code relies on that and never re-checks.

use crate::linalg::{add_vecs, axpy, scale_vec, vec_is_zero, zero_vec, Matrix, Subspace};
use crate::rational::Rat;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("antisymmetry fails at basis triple ({}, {}, {})", .i + 1, .j + 1, .k + 1)]
    Antisymmetry { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on basis triple ({}, {}, {})", .i + 1, .j + 1, .k + 1)]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("lower central series stabilizes above zero: the algebra is not nilpotent")]
    NotNilpotent,
    #[error("bracket ({}, {}, {}) specified twice with conflicting values", .i + 1, .j + 1, .k + 1)]
    ConflictingBracket { i: usize, j: usize, k: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the given subspace is not closed under the bracket")]
    NotASubalgebra,
    #[error("the given subspace is not an ideal")]
    NotAnIdeal,
    #[error("subspace ambient dimension {got} does not match the algebra dimension {expected}")]
    AmbientMismatch { expected: usize, got: usize },
}

/// Simply connected nilpotent Lie algebra data: dimension, structure tensor,
/// basis labels, and the nilpotency class established at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct NilpotentLieAlgebra {
    dim: usize,
    /// c[i][j][k] flattened as (i*dim + j)*dim + k.
    structure: Vec<Rat>,
    labels: Vec<String>,
    class: usize,
}

/// Sparse bracket specification: `[e_i, e_j] = c * e_k` (0-based indices).
pub type BracketTriple = (usize, usize, usize, Rat);

impl NilpotentLieAlgebra {
    /// Builds from sparse bracket triples. The mirrored entry of each triple
    /// is filled in automatically; mirrored or repeated triples must agree.
    pub fn new(
        dim: usize,
        brackets: &[BracketTriple],
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let mut structure = vec![Rat::zero(); dim * dim * dim];
        let mut assigned = vec![false; dim * dim * dim];
        let idx = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        for (i, j, k, c) in brackets {
            for &index in [i, j, k].iter() {
                if *index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index: *index, dim });
                }
            }
            if i == j && !c.is_zero() {
                return Err(AlgebraError::Antisymmetry { i: *i, j: *j, k: *k });
            }
            for (a, b, v) in [(*i, *j, c.clone()), (*j, *i, -c.clone())] {
                let slot = idx(a, b, *k);
                if assigned[slot] && structure[slot] != v {
                    return Err(AlgebraError::ConflictingBracket { i: *i, j: *j, k: *k });
                }
                assigned[slot] = true;
                structure[slot] = v;
            }
        }
        Self::from_structure_tensor(dim, structure, labels)
    }

    /// Builds from a full dense tensor; validates everything.
    pub fn from_structure_tensor(
        dim: usize,
        structure: Vec<Rat>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Self>, AlgebraError> {
        if structure.len() != dim * dim * dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim * dim * dim,
                got: structure.len(),
            });
        }
        let labels = labels.unwrap_or_else(|| (1..=dim).map(|i| format!("e{i}")).collect());
        if labels.len() != dim {
            return Err(AlgebraError::DimensionMismatch { expected: dim, got: labels.len() });
        }
        let mut algebra = NilpotentLieAlgebra { dim, structure, labels, class: 0 };
        algebra.check_antisymmetry()?;
        algebra.check_jacobi()?;
        algebra.class = algebra.compute_class()?;
        Ok(Arc::new(algebra))
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Nilpotency class; 1 for abelian.
    pub fn nilpotency_class(&self) -> usize {
        self.class
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.structure[self.idx(i, j, k)]
    }

    /// Nonzero structure constants with i < j (one orientation only).
    pub fn bracket_triples(&self) -> Vec<BracketTriple> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in 0..self.dim {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    fn check_antisymmetry(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in 0..self.dim {
                    let a = &self.structure[self.idx(i, j, k)];
                    let b = &self.structure[self.idx(j, i, k)];
                    if *a != -b.clone() {
                        return Err(AlgebraError::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<(), AlgebraError> {
        // Bilinearity plus antisymmetry make the Jacobiator alternating, so
        // distinct ordered triples i < j < k suffice.
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ei = self.basis_vector(i);
                    let ej = self.basis_vector(j);
                    let ek = self.basis_vector(k);
                    let mut acc = self.bracket(&ei, &self.bracket(&ej, &ek));
                    acc = add_vecs(&acc, &self.bracket(&ej, &self.bracket(&ek, &ei)));
                    acc = add_vecs(&acc, &self.bracket(&ek, &self.bracket(&ei, &ej)));
                    if !vec_is_zero(&acc) {
                        return Err(AlgebraError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_class(&self) -> Result<usize, AlgebraError> {
        let mut class = 0;
        let mut current = Subspace::full(self.dim);
        loop {
            if current.is_zero() {
                return Ok(class);
            }
            let next = self.bracket_span(&Subspace::full(self.dim), &current);
            if next == current {
                return Err(AlgebraError::NotNilpotent);
            }
            class += 1;
            current = next;
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = zero_vec(self.dim);
        v[i] = Rat::from_integer(1.into());
        v
    }

    /// [x, y] in basis coordinates.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let coeff = xi * yj;
                for k in 0..self.dim {
                    let c = &self.structure[self.idx(i, j, k)];
                    if !c.is_zero() {
                        out[k] = &out[k] + &coeff * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of ad(x): column j is [x, e_j].
    pub fn ad_matrix(&self, x: &[Rat]) -> Matrix {
        let mut m = Matrix::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &self.basis_vector(j));
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    /// Span of all brackets [u, w] with u in `left`, w in `right`.
    fn bracket_span(&self, left: &Subspace, right: &Subspace) -> Subspace {
        let mut vectors = Vec::new();
        for u in left.basis_vectors() {
            for w in right.basis_vectors() {
                let b = self.bracket(u, w);
                if !vec_is_zero(&b) {
                    vectors.push(b);
                }
            }
        }
        Subspace::from_vectors(self.dim, vectors)
    }

    /// Smallest subalgebra containing the generators: grows the span by
    /// pairwise brackets until it stabilizes.
    pub fn lie_span(&self, generators: &[Vec<Rat>]) -> Subspace {
        let mut span = Subspace::from_vectors(self.dim, generators.to_vec());
        loop {
            let grown = span.sum(&self.bracket_span(&span, &span));
            if grown.dim() == span.dim() {
                return span;
            }
            span = grown;
        }
    }

    pub fn center(&self) -> Subspace {
        // x is central iff for every j the vector [x, e_j] vanishes; stack
        // the linear conditions and take the kernel.
        let mut rows = Vec::with_capacity(self.dim * self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                let row: Vec<Rat> =
                    (0..self.dim).map(|i| self.structure[self.idx(i, j, k)].clone()).collect();
                rows.push(row);
            }
        }
        Subspace::from_vectors(self.dim, Matrix::from_rows(rows).kernel())
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        self.bracket_span(&Subspace::full(self.dim), &Subspace::full(self.dim))
    }

    /// Strictly decreasing chain g = g_1 > g_2 > ... > 0 with
    /// g_{k+1} = [g, g_k]; the final zero term is included.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().unwrap();
            if last.is_zero() {
                return series;
            }
            let next = self.bracket_span(&Subspace::full(self.dim), last);
            series.push(next);
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.class <= 1
    }

    pub fn is_subalgebra(&self, h: &Subspace) -> Result<bool, AlgebraError> {
        if h.ambient_dim() != self.dim {
            return Err(AlgebraError::AmbientMismatch { expected: self.dim, got: h.ambient_dim() });
        }
        let basis: Vec<&[Rat]> = h.basis_vectors().collect();
        for (a, u) in basis.iter().enumerate() {
            for w in &basis[a + 1..] {
                if !h.contains(&self.bracket(u, w)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_ideal(&self, h: &Subspace) -> Result<bool, AlgebraError> {
        if h.ambient_dim() != self.dim {
            return Err(AlgebraError::AmbientMismatch { expected: self.dim, got: h.ambient_dim() });
        }
        for i in 0..self.dim {
            let ei = self.basis_vector(i);
            for w in h.basis_vectors() {
                if !h.contains(&self.bracket(&ei, w)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Linear map that reduces a vector modulo `h` (zero exactly on `h`).
    fn reduction_matrix(&self, h: &Subspace) -> Matrix {
        let mut m = Matrix::identity(self.dim);
        for (t, &p) in h.pivot_columns().iter().enumerate() {
            // Column p of the identity becomes e_p - basis_row_t.
            for r in 0..self.dim {
                let v = m.get(r, p) - h.basis_matrix().get(t, r);
                m.set(r, p, v);
            }
        }
        m
    }

    /// Normalizer {x : [x, h] in h} of a subalgebra.
    pub fn normalizer(&self, h: &Subspace) -> Result<Subspace, AlgebraError> {
        if !self.is_subalgebra(h)? {
            return Err(AlgebraError::NotASubalgebra);
        }
        let reduce = self.reduction_matrix(h);
        let mut condition_rows = Vec::new();
        for b in h.basis_vectors() {
            // Column i of map_b is [e_i, b]; composing with the reduction
            // gives the linear conditions for [x, b] to fall inside h.
            let map_b = Matrix::from_fn(self.dim, self.dim, |k, i| {
                let ei = self.basis_vector(i);
                self.bracket(&ei, b)[k].clone()
            });
            let reduced = reduce.mul(&map_b);
            condition_rows.extend(reduced.row_vecs());
        }
        if condition_rows.is_empty() {
            return Ok(Subspace::full(self.dim));
        }
        Ok(Subspace::from_vectors(
            self.dim,
            Matrix::from_rows(condition_rows).kernel(),
        ))
    }

    /// Iterated normalizers from `h` up to the whole algebra. In a nilpotent
    /// algebra the normalizer of a proper subalgebra strictly contains it, so
    /// the chain terminates; the returned list starts at `h` and ends at the
    /// full algebra.
    pub fn normalizer_chain(&self, h: &Subspace) -> Result<Vec<Subspace>, AlgebraError> {
        let mut chain = vec![h.clone()];
        loop {
            let current = chain.last().unwrap();
            if current.is_full() {
                return Ok(chain);
            }
            let next = self.normalizer(current)?;
            assert!(
                next.dim() > current.dim(),
                "normalizer failed to grow; nilpotency guarantees strict growth"
            );
            chain.push(next);
        }
    }

    /// Quotient by an ideal, with the projection and a section fixed by the
    /// complement of the ideal's pivot coordinates.
    pub fn quotient(self: &Arc<Self>, k: &Subspace) -> Result<QuotientPresentation, AlgebraError> {
        if !self.is_ideal(k)? {
            return Err(AlgebraError::NotAnIdeal);
        }
        let q_dim = self.dim - k.dim();
        let reduce = self.reduction_matrix(k);
        let survivors = k.non_pivot_columns();
        let projection = Matrix::from_fn(q_dim, self.dim, |t, c| reduce.get(survivors[t], c).clone());
        let section = Matrix::from_fn(self.dim, q_dim, |r, t| {
            if r == survivors[t] {
                Rat::from_integer(1.into())
            } else {
                Rat::zero()
            }
        });
        let mut structure = vec![Rat::zero(); q_dim * q_dim * q_dim];
        for s in 0..q_dim {
            for t in 0..q_dim
            {
                let b = self.bracket(&section.column(s), &section.column(t));
                let image = projection.mul_vec(&b);
                for (u, v) in image.into_iter().enumerate() {
                    structure[(s * q_dim + t) * q_dim + u] = v;
                }
            }
        }
        let labels: Vec<String> =
            survivors.iter().map(|&c| format!("[{}]", self.labels[c])).collect();
        let algebra = NilpotentLieAlgebra::from_structure_tensor(q_dim, structure, Some(labels))?;
        let presentation = QuotientPresentation { algebra, ideal: k.clone(), projection, section };
        // The projection must be a Lie morphism; this is automatic for an
        // ideal but cheap to verify and protects every caller.
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let lhs = presentation
                    .projection
                    .mul_vec(&self.bracket(&self.basis_vector(i), &self.basis_vector(j)));
                let rhs = presentation.algebra.bracket(
                    &presentation.projection.mul_vec(&self.basis_vector(i)),
                    &presentation.projection.mul_vec(&self.basis_vector(j)),
                );
                assert_eq!(lhs, rhs, "quotient projection is not a bracket morphism");
            }
        }
        Ok(presentation)
    }

    /// Pretty renders a vector using basis labels.
    pub fn format_vector(&self, v: &[Rat]) -> String {
        use crate::rational::fmt_rat;
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = fmt_rat(c);
            match cs.as_str() {
                "1" => parts.push(self.labels[i].clone()),
                "-1" => parts.push(format!("-{}", self.labels[i])),
                _ => parts.push(format!("{cs}*{}", self.labels[i])),
            }
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Debug for NilpotentLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NilpotentLieAlgebra(dim {}, class {}, labels [{}])",
            self.dim,
            self.class,
            self.labels.join(", ")
        )
    }
}

/// Quotient algebra together with the linear maps identifying it.
#[derive(Clone)]
pub struct QuotientPresentation {
    pub algebra: Arc<NilpotentLieAlgebra>,
    /// The ideal that was quotiented out.
    pub ideal: Subspace,
    /// (n - r) x n matrix sending ambient coordinates to quotient coordinates.
    pub projection: Matrix,
    /// n x (n - r) matrix choosing coset representatives; projection * section = id.
    pub section: Matrix,
}

/// Convenience: scaled copy `c * v` of a basis vector expressed in an algebra.
pub fn scaled_basis_vector(a: &NilpotentLieAlgebra, i: usize, c: &Rat) -> Vec<Rat> {
    scale_vec(c, &a.basis_vector(i))
}

/// Iterated ad: returns ad(x)^j applied to y without forming matrix powers.
pub fn ad_power(a: &NilpotentLieAlgebra, x: &[Rat], y: &[Rat], j: usize) -> Vec<Rat> {
    let mut out = y.to_vec();
    for _ in 0..j {
        out = a.bracket(x, &out);
    }
    out
}

/// x + c*[x', y] style affine helper re-exported for experiment code.
pub fn affine_bracket(a: &NilpotentLieAlgebra, base: &[Rat], c: &Rat, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    axpy(base, c, &a.bracket(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn heisenberg() -> Arc<NilpotentLieAlgebra> {
        NilpotentLieAlgebra::new(
            3,
            &[(0, 1, 2, rat(1))],
            Some(vec!["X".into(), "Y".into(), "Z".into()]),
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_is_two_step() {
        let h = heisenberg();
        assert_eq!(h.nilpotency_class(), 2);
        assert!(!h.is_abelian());
    }

    #[test]
    fn abelian_is_class_one() {
        let a = NilpotentLieAlgebra::new(4, &[], None).unwrap();
        assert_eq!(a.nilpotency_class(), 1);
        assert!(a.is_abelian());
    }

    #[test]
    fn sl2_style_bracket_is_rejected() {
        // [X, Y] = X is solvable but not nilpotent.
        let err = NilpotentLieAlgebra::new(2, &[(0, 1, 0, rat(1))], None).unwrap_err();
        assert_eq!(err, AlgebraError::NotNilpotent);
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e1 breaks Jacobi on (1,2,3).
        let err = NilpotentLieAlgebra::new(
            4,
            &[(0, 1, 2, rat(1)), (0, 2, 3, rat(1)), (1, 2, 0, rat(1))],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::Jacobi { .. } | AlgebraError::NotNilpotent));
    }

    #[test]
    fn conflicting_brackets_are_rejected() {
        let err = NilpotentLieAlgebra::new(
            3,
            &[(0, 1, 2, rat(1)), (1, 0, 2, rat(1))],
            None,
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::ConflictingBracket { i: 1, j: 0, k: 2 });
    }

    #[test]
    fn center_and_derived_of_heisenberg() {
        let h = heisenberg();
        let z = h.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&h.basis_vector(2)));
        assert_eq!(h.derived_subalgebra(), z);
    }

    #[test]
    fn lower_central_series_shape() {
        let h = heisenberg();
        let series = h.lower_central_series();
        let dims: Vec<usize> = series.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 1, 0]);
    }

    #[test]
    fn normalizer_of_x_line_in_heisenberg() {
        let h = heisenberg();
        let line = Subspace::from_vectors(3, vec![h.basis_vector(0)]);
        let n = h.normalizer(&line).unwrap();
        // [Y, X] = -Z escapes the line, so Y is excluded; Z centralizes.
        let expected = Subspace::from_vectors(3, vec![h.basis_vector(0), h.basis_vector(2)]);
        assert_eq!(n, expected);
    }

    #[test]
    fn normalizer_chain_from_x_line() {
        let h = heisenberg();
        let line = Subspace::from_vectors(3, vec![h.basis_vector(0)]);
        let chain = h.normalizer_chain(&line).unwrap();
        let dims: Vec<usize> = chain.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![1, 2, 3]);
    }

    #[test]
    fn normalizer_chain_of_ideal_has_one_step() {
        let h = heisenberg();
        let chain = h.normalizer_chain(&h.center()).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain[1].is_full());
    }

    #[test]
    fn normalizer_requires_subalgebra_closure() {
        // span{X, Y} is not closed: [X, Y] = Z.
        let h = heisenberg();
        let s = Subspace::from_vectors(3, vec![h.basis_vector(0), h.basis_vector(1)]);
        assert_eq!(h.normalizer(&s).unwrap_err(), AlgebraError::NotASubalgebra);
    }

    #[test]
    fn quotient_by_center_is_abelian_plane() {
        let h = heisenberg();
        let q = h.quotient(&h.center()).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert!(q.algebra.is_abelian());
        // projection o section = identity on the quotient.
        let round_trip = q.projection.mul(&q.section);
        assert_eq!(round_trip, Matrix::identity(2));
    }

    #[test]
    fn quotient_requires_ideal() {
        let h = heisenberg();
        let line = Subspace::from_vectors(3, vec![h.basis_vector(0)]);
        assert!(matches!(h.quotient(&line), Err(AlgebraError::NotAnIdeal)));
    }

    #[test]
    fn lie_span_grows_to_include_brackets() {
        let h = heisenberg();
        let span = h.lie_span(&[h.basis_vector(0), h.basis_vector(1)]);
        assert!(span.is_full());
        let line = h.lie_span(&[h.basis_vector(0)]);
        assert_eq!(line.dim(), 1);
    }

    #[test]
    fn ad_matrix_matches_bracket() {
        let h = heisenberg();
        let x = vec![rat(2), rat(3), rat(0)];
        let m = h.ad_matrix(&x);
        for j in 0..3 {
            assert_eq!(m.column(j), h.bracket(&x, &h.basis_vector(j)));
        }
    }

    #[test]
    fn vector_formatting() {
        let h = heisenberg();
        let v = vec![rat(1), rat(-2), rat(0)];
        assert_eq!(h.format_vector(&v), "X - 2*Y");
    }
}
