//! Dense exact linear algebra over the rationals.
//!
//! Subspaces are kept in reduced row echelon form, so two subspaces are equal
//! exactly when their basis matrices are identical. That convention makes
//! every downstream equality test (eigenspace lattices, normalizer chains,
//! quotient bookkeeping) a plain comparison.

use crate::rational::{fmt_rat, Rat};
use num_traits::{One, Zero};
use std::fmt;

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let mut m = Matrix::zero(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).fold(Rat::zero(), |a, b| a + b)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    /// Reduced row echelon form together with pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead_row = 0;
        for col in 0..m.cols {
            if lead_row == m.rows {
                break;
            }
            let Some(pivot_row) = (lead_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pivot_row != lead_row {
                for c in 0..m.cols {
                    let a = m.get(lead_row, c).clone();
                    let b = m.get(pivot_row, c).clone();
                    m.set(lead_row, c, b);
                    m.set(pivot_row, c, a);
                }
            }
            let inv = {
                let p = m.get(lead_row, col).clone();
                Rat::one() / p
            };
            for c in col..m.cols {
                let v = m.get(lead_row, c) * &inv;
                m.set(lead_row, c, v);
            }
            for r in 0..m.rows {
                if r != lead_row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in col..m.cols {
                        let v = m.get(r, c) - &f * m.get(lead_row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, returned as row vectors.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rat::zero(); self.cols];
                v[fc] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, fc).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Linear subspace of a fixed ambient coordinate space, stored as an RREF
/// basis. Equality of subspaces is equality of basis matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zero(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rat>>,
    {
        let rows: Vec<Vec<Rat>> = vectors.into_iter().collect();
        for v in &rows {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
        }
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        let (r, pivots) = Matrix::from_rows(rows).rref();
        let basis = Matrix::from_rows((0..pivots.len()).map(|i| r.row(i).to_vec()).collect());
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.basis.rows()).map(|i| self.basis.row(i))
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Ambient coordinates not used as pivots; standard vectors at these
    /// positions represent a complement (used for quotient sections).
    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Coordinates of `v` in this basis, or `None` when `v` lies outside.
    ///
    /// Because the basis is in RREF the candidate coordinates can be read off
    /// the pivot positions and verified by a single subtraction pass.
    pub fn coordinates_of(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<Rat> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residue = v.to_vec();
        for (row, coeff) in coords.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for c in 0..self.ambient {
                let upd = &residue[c] - coeff * self.basis.get(row, c);
                residue[c] = upd;
            }
        }
        residue.iter().all(Rat::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates_of(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis_vectors().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_vectors(
            self.ambient,
            self.basis_vectors().chain(other.basis_vectors()).map(<[Rat]>::to_vec),
        )
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // Solve a*U = b*W: kernel of the stacked transposed bases.
        let ra = self.dim();
        let rb = other.dim();
        if ra == 0 || rb == 0 {
            return Subspace::zero(self.ambient);
        }
        let stacked = Matrix::from_fn(self.ambient, ra + rb, |i, j| {
            if j < ra {
                self.basis.get(j, i).clone()
            } else {
                -other.basis.get(j - ra, i).clone()
            }
        });
        let vectors = stacked.kernel().into_iter().map(|k| {
            let mut v = vec![Rat::zero(); self.ambient];
            for (row, coeff) in k[..ra].iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for c in 0..self.ambient {
                    let upd = &v[c] + coeff * self.basis.get(row, c);
                    v[c] = upd;
                }
            }
            v
        });
        Subspace::from_vectors(self.ambient, vectors)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

/// Growing row-reduced spanning set with O(dim) membership-extension steps.
/// Used where vectors arrive one at a time and only independence matters.
#[derive(Clone, Default)]
pub struct IncrementalSpan {
    /// (pivot column, normalized reduced row), kept mutually reduced.
    rows: Vec<(usize, Vec<Rat>)>,
}

impl IncrementalSpan {
    pub fn new() -> Self {
        IncrementalSpan { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` if independent of the current span; returns whether the
    /// span grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let c = v[*pivot].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a = &*a - &c * b;
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rat::one() / v[pivot].clone();
        for a in v.iter_mut() {
            *a = &*a * &inv;
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut probe = self.clone();
        !probe.insert(v)
    }
}

/// Sum of `v + c*w` for equal-length slices; tiny helper used all over.
pub fn axpy(v: &[Rat], c: &Rat, w: &[Rat]) -> Vec<Rat> {
    v.iter().zip(w).map(|(a, b)| a + c * b).collect()
}

pub fn vec_is_zero(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn scale_vec(c: &Rat, v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|a| c * a).collect()
}

pub fn add_vecs(v: &[Rat], w: &[Rat]) -> Vec<Rat> {
    v.iter().zip(w).map(|(a, b)| a + b).collect()
}

pub fn sub_vecs(v: &[Rat], w: &[Rat]) -> Vec<Rat> {
    v.iter().zip(w).map(|(a, b)| a - b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn rref_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.get(0, 0), &rat(1));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn kernel_annihilates() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let ker = a.kernel();
        assert_eq!(ker.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&ker[0])));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(a.solve(&[rat(3), rat(6)]).is_some());
        assert!(a.solve(&[rat(3), rat(5)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn matrix_power() {
        let a = m(&[&[0, 1], &[0, 0]]);
        assert!(a.pow(2).is_zero_matrix());
        assert_eq!(a.pow(0), Matrix::identity(2));
    }

    #[test]
    fn subspace_canonical_equality() {
        let s1 = Subspace::from_vectors(3, vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(2), rat(0)]]);
        let s2 = Subspace::from_vectors(3, vec![vec![rat(3), rat(5), rat(0)], vec![rat(1), rat(0), rat(0)]]);
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
    }

    #[test]
    fn subspace_membership_and_coordinates() {
        let s = Subspace::from_vectors(3, vec![vec![rat(1), rat(0), rat(2)], vec![rat(0), rat(1), rat(3)]]);
        let v = vec![rat(2), ratio(1, 2), ratio(11, 2)];
        let coords = s.coordinates_of(&v).unwrap();
        assert_eq!(coords, vec![rat(2), ratio(1, 2)]);
        assert!(!s.contains(&[rat(0), rat(0), rat(1)]));
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::from_vectors(3, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), rat(0)]]);
        let b = Subspace::from_vectors(3, vec![vec![rat(0), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]]);
        assert!(a.sum(&b).is_full());
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[rat(0), rat(5), rat(0)]));
    }

    #[test]
    fn intersection_of_generic_planes_is_line() {
        // x + y + z = 0 meets x - y = 0 in a line.
        let p1 = Subspace::from_vectors(
            3,
            vec![vec![rat(1), rat(-1), rat(0)], vec![rat(1), rat(0), rat(-1)]],
        );
        let p2 = Subspace::from_vectors(
            3,
            vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]],
        );
        let line = p1.intersect(&p2);
        assert_eq!(line.dim(), 1);
        assert!(p1.contains(line.basis_matrix().row(0)));
        assert!(p2.contains(line.basis_matrix().row(0)));
    }
}
