//! Derivations and their exact spectral data.
//!
//! Everything here stays over the rationals. Spectra are extracted by
//! rational root search on the characteristic polynomial; inputs whose
//! spectrum is irrational or complex are reported as such rather than
//! approximated. Jordan data is produced by explicit chain construction and
//! cross-checked against the block sizes forced by the rank sequence, so the
//! two independent routes must agree before a result is returned.

use crate::algebra::{AlgebraError, NilpotentLieAlgebra, QuotientPresentation};
use crate::arith::divisors;
use crate::linalg::{sub_vecs, vec_is_zero, IncrementalSpan, Matrix, Subspace};
use crate::poly::Polynomial;
use crate::rational::{fmt_rat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("matrix is {rows}x{cols}, expected square of dimension {expected}")]
    ShapeMismatch { rows: usize, cols: usize, expected: usize },
    #[error("Leibniz rule fails on basis pair ({}, {})", .i + 1, .j + 1)]
    LeibnizViolation { i: usize, j: usize },
    #[error("the spectrum is not rational (irrational or complex eigenvalues)")]
    IrrationalOrComplexSpectrum,
    #[error("subspace is not invariant under the map")]
    NotInvariant,
    #[error("algebra is not two-step with derived dimension one (not in the audited class)")]
    NotClassC,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A derivation of a nilpotent Lie algebra, stored as the matrix whose j-th
/// column is the image of the j-th basis vector. Construction verifies the
/// Leibniz rule on all basis pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    algebra: Arc<NilpotentLieAlgebra>,
    matrix: Matrix,
}

impl Derivation {
    pub fn new(algebra: Arc<NilpotentLieAlgebra>, matrix: Matrix) -> Result<Self, SpectralError> {
        let n = algebra.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(SpectralError::ShapeMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected: n,
            });
        }
        let d = Derivation { algebra, matrix };
        for i in 0..n {
            for j in (i + 1)..n {
                let ei = d.algebra.basis_vector(i);
                let ej = d.algebra.basis_vector(j);
                let lhs = d.apply(&d.algebra.bracket(&ei, &ej));
                let rhs_l = d.algebra.bracket(&d.apply(&ei), &ej);
                let rhs_r = d.algebra.bracket(&ei, &d.apply(&ej));
                let rhs: Vec<Rat> = rhs_l.iter().zip(&rhs_r).map(|(a, b)| a + b).collect();
                if lhs != rhs {
                    return Err(SpectralError::LeibnizViolation { i, j });
                }
            }
        }
        Ok(d)
    }

    /// Diagonal derivation with the given basis weights.
    pub fn diagonal(algebra: Arc<NilpotentLieAlgebra>, weights: &[Rat]) -> Result<Self, SpectralError> {
        let m = Matrix::diagonal(weights);
        Derivation::new(algebra, m)
    }

    pub fn algebra(&self) -> &Arc<NilpotentLieAlgebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(v)
    }

    pub fn trace(&self) -> Rat {
        self.matrix.trace()
    }

    /// Scaled derivation `s * d`; scaling preserves the Leibniz rule.
    pub fn scale(&self, s: &Rat) -> Derivation {
        Derivation { algebra: Arc::clone(&self.algebra), matrix: self.matrix.scale(s) }
    }

    pub fn char_poly(&self) -> Polynomial {
        char_poly(&self.matrix)
    }

    pub fn rational_eigenvalues(&self) -> Result<Vec<(Rat, usize)>, SpectralError> {
        rational_eigenvalues(&self.matrix)
    }

    pub fn eigen_decomposition(&self) -> Result<EigenDecomposition, SpectralError> {
        eigen_decomposition(&self.matrix)
    }

    pub fn jordan_data(&self) -> Result<JordanData, SpectralError> {
        jordan_data(&self.matrix)
    }

    /// Splits into commuting semisimple and nilpotent derivations.
    pub fn semisimple_nilpotent_split(&self) -> Result<DerivationSplit, SpectralError> {
        let jordan = self.jordan_data()?;
        let basis = &jordan.chain_basis;
        let inv = basis.inverse().expect("Jordan chain basis is invertible");
        let diag = Matrix::diagonal(&jordan.column_eigenvalues());
        let semisimple_matrix = basis.mul(&diag).mul(&inv);
        let nilpotent_matrix = self.matrix.sub(&semisimple_matrix);
        assert_eq!(
            semisimple_matrix.mul(&nilpotent_matrix),
            nilpotent_matrix.mul(&semisimple_matrix),
            "split parts must commute"
        );
        assert!(
            nilpotent_matrix.pow(self.algebra.dim().max(1)).is_zero_matrix(),
            "nilpotent part must vanish under iteration"
        );
        // Both parts are derivations again; Derivation::new re-verifies the
        // Leibniz rule, turning the theorem into a runtime check.
        let semisimple = Derivation::new(Arc::clone(&self.algebra), semisimple_matrix)
            .expect("semisimple part satisfies Leibniz");
        let nilpotent = Derivation::new(Arc::clone(&self.algebra), nilpotent_matrix)
            .expect("nilpotent part satisfies Leibniz");
        Ok(DerivationSplit { semisimple, nilpotent })
    }

    /// Matrix of the map restricted to an invariant subspace, in the
    /// subspace's own RREF basis.
    pub fn restrict_to(&self, s: &Subspace) -> Result<Matrix, SpectralError> {
        restrict_matrix(&self.matrix, s)
    }

    /// Matrix induced on a quotient by an invariant ideal.
    pub fn induced_on_quotient(
        &self,
        q: &QuotientPresentation,
    ) -> Result<Matrix, SpectralError> {
        for b in q.ideal.basis_vectors() {
            if !q.ideal.contains(&self.apply(b)) {
                return Err(SpectralError::NotInvariant);
            }
        }
        Ok(q.projection.mul(&self.matrix).mul(&q.section))
    }

    /// Checks the eigenspace grading: brackets of generalized eigenspaces
    /// land in the eigenspace of the summed eigenvalue, or vanish when that
    /// sum is not an eigenvalue.
    pub fn grading_check(&self) -> Result<GradingReport, SpectralError> {
        let eigen = self.eigen_decomposition()?;
        let mut violations = Vec::new();
        let k = eigen.eigenvalues.len();
        for i in 0..k {
            for j in 0..k {
                let target_sum = &eigen.eigenvalues[i] + &eigen.eigenvalues[j];
                let target = eigen.eigenvalues.iter().position(|l| *l == target_sum);
                for u in eigen.generalized_spaces[i].basis_vectors() {
                    for w in eigen.generalized_spaces[j].basis_vectors() {
                        let b = self.algebra.bracket(u, w);
                        let ok = match target {
                            Some(t) => eigen.generalized_spaces[t].contains(&b),
                            None => vec_is_zero(&b),
                        };
                        if !ok {
                            violations.push(GradingViolation {
                                left_eigenvalue: eigen.eigenvalues[i].clone(),
                                right_eigenvalue: eigen.eigenvalues[j].clone(),
                                witness: self.algebra.format_vector(&b),
                            });
                        }
                    }
                }
            }
        }
        Ok(GradingReport { violations })
    }
}

impl std::fmt::Debug for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Derivation on {:?} with matrix {:?}", self.algebra, self.matrix)
    }
}

/// Commuting semisimple + nilpotent decomposition of a derivation.
#[derive(Clone, Debug)]
pub struct DerivationSplit {
    pub semisimple: Derivation,
    pub nilpotent: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingViolation {
    pub left_eigenvalue: Rat,
    pub right_eigenvalue: Rat,
    /// Offending bracket value rendered with basis labels.
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingReport {
    pub violations: Vec<GradingViolation>,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Characteristic polynomial via the Faddeev-LeVerrier recurrence; exact.
pub fn char_poly(m: &Matrix) -> Polynomial {
    assert!(m.is_square(), "characteristic polynomial needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return Polynomial::one();
    }
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -mk.trace() / Rat::from_integer(BigInt::from(k));
        coeffs[n - k] = ck.clone();
        if k < n {
            let shifted = mk.add(&Matrix::identity(n).scale(&ck));
            mk = m.mul(&shifted);
        }
    }
    Polynomial::new(coeffs)
}

/// Rational roots of the characteristic polynomial with multiplicities,
/// sorted ascending. Errors when the spectrum does not split over Q.
pub fn rational_eigenvalues(m: &Matrix) -> Result<Vec<(Rat, usize)>, SpectralError> {
    let p = char_poly(m);
    let mut remaining = p.clone();
    let mut roots: Vec<(Rat, usize)> = Vec::new();
    // Zero roots first: they are visible as missing constant terms.
    let mut zero_mult = 0usize;
    while !remaining.is_zero() && remaining.degree() > 0 && remaining.coeffs()[0].is_zero() {
        remaining = remaining.deflate(&Rat::zero()).expect("zero constant term deflates");
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    if remaining.degree() > 0 {
        // Scale to integer coefficients; rational roots are then divisor
        // ratios of the constant and leading coefficients.
        let lcm_den = remaining
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let int_coeffs: Vec<BigInt> = remaining
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&lcm_den / c.denom()))
            .collect();
        let constant = int_coeffs.first().expect("nonzero constant").clone();
        let leading = int_coeffs.last().expect("nonzero leading").clone();
        // Magnitude prune: every root obeys the Cauchy bound.
        let lead_abs = Rat::from_integer(leading.abs());
        let cauchy = Rat::one()
            + int_coeffs
                .iter()
                .map(|c| Rat::from_integer(c.abs()) / lead_abs.clone())
                .max()
                .unwrap();
        let mut candidates: BTreeSet<Rat> = BTreeSet::new();
        for a in divisors(&constant) {
            for b in divisors(&leading) {
                let q = Rat::new(a.clone(), b.clone());
                if q <= cauchy {
                    candidates.insert(-q.clone());
                    candidates.insert(q);
                }
            }
        }
        for cand in candidates {
            let mut mult = 0usize;
            while remaining.degree() > 0 {
                match remaining.deflate(&cand) {
                    Some(q) => {
                        remaining = q;
                        mult += 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
            if remaining.degree() == 0 {
                break;
            }
        }
        if remaining.degree() > 0 {
            return Err(SpectralError::IrrationalOrComplexSpectrum);
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    debug_assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), p.degree());
    Ok(roots)
}

/// Distinct eigenvalues ascending with their generalized eigenspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Rat>,
    pub multiplicities: Vec<usize>,
    pub generalized_spaces: Vec<Subspace>,
}

impl EigenDecomposition {
    /// Index of the eigenvalue equal to `v`, if present.
    pub fn index_of(&self, v: &Rat) -> Option<usize> {
        self.eigenvalues.iter().position(|l| l == v)
    }

    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

pub fn eigen_decomposition(m: &Matrix) -> Result<EigenDecomposition, SpectralError> {
    let spectrum = rational_eigenvalues(m)?;
    let n = m.rows();
    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut generalized_spaces = Vec::new();
    for (lambda, mult) in spectrum {
        let shifted = m.sub(&Matrix::identity(n).scale(&lambda));
        let space = Subspace::from_vectors(n, shifted.pow(mult).kernel());
        assert_eq!(space.dim(), mult, "generalized eigenspace dimension equals multiplicity");
        eigenvalues.push(lambda);
        multiplicities.push(mult);
        generalized_spaces.push(space);
    }
    let total: usize = multiplicities.iter().sum();
    assert_eq!(total, n, "generalized eigenspaces fill the space");
    Ok(EigenDecomposition { eigenvalues, multiplicities, generalized_spaces })
}

/// One Jordan chain: `vectors[0]` is the eigenvector and
/// `M v_k = lambda v_k + v_{k-1}` walks up the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanChain {
    pub eigenvalue: Rat,
    pub vectors: Vec<Vec<Rat>>,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn eigenvector(&self) -> &[Rat] {
        &self.vectors[0]
    }

    pub fn top(&self) -> &[Rat] {
        self.vectors.last().expect("chains are nonempty")
    }
}

/// Jordan normal form data: block structure plus an explicit chain basis.
///
/// Canonical ordering: eigenvalues ascending; within an eigenvalue, chains by
/// descending length; within a chain, eigenvector first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanData {
    pub eigenvalues: Vec<Rat>,
    /// Block size multiset per eigenvalue, sorted descending.
    pub block_sizes: Vec<Vec<usize>>,
    pub chains: Vec<JordanChain>,
    /// Columns are the chain vectors in canonical order.
    pub chain_basis: Matrix,
}

impl JordanData {
    /// (eigenvalue, descending block sizes) pairs: the conjugation invariant.
    pub fn signature(&self) -> Vec<(Rat, Vec<usize>)> {
        self.eigenvalues.iter().cloned().zip(self.block_sizes.iter().cloned()).collect()
    }

    /// Eigenvalue attached to each basis column, in column order.
    pub fn column_eigenvalues(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for chain in &self.chains {
            out.extend(std::iter::repeat_n(chain.eigenvalue.clone(), chain.len()));
        }
        out
    }

    /// Largest block size for the given eigenvalue index.
    pub fn max_block(&self, eigen_index: usize) -> usize {
        self.block_sizes[eigen_index].first().copied().unwrap_or(0)
    }

    /// The Jordan matrix itself (eigenvalues on the diagonal, ones on the
    /// superdiagonal inside each block).
    pub fn jordan_matrix(&self) -> Matrix {
        let n: usize = self.chains.iter().map(JordanChain::len).sum();
        let mut j = Matrix::zero(n, n);
        let mut offset = 0;
        for chain in &self.chains {
            for t in 0..chain.len() {
                j.set(offset + t, offset + t, chain.eigenvalue.clone());
                if t > 0 {
                    j.set(offset + t - 1, offset + t, Rat::one());
                }
            }
            offset += chain.len();
        }
        j
    }
}

/// Builds Jordan data by explicit chain construction, then cross-checks the
/// resulting block sizes against the rank-sequence oracle and verifies the
/// conjugation identity `M P = P J` before returning.
pub fn jordan_data(m: &Matrix) -> Result<JordanData, SpectralError> {
    let spectrum = rational_eigenvalues(m)?;
    let n = m.rows();
    let mut eigenvalues = Vec::new();
    let mut block_sizes = Vec::new();
    let mut chains: Vec<JordanChain> = Vec::new();
    for (lambda, mult) in spectrum {
        let shifted = m.sub(&Matrix::identity(n).scale(&lambda));
        // Kernel filtration K_1 <= K_2 <= ... up to the full multiplicity.
        let mut kernels = vec![Subspace::zero(n)];
        let mut power = Matrix::identity(n);
        loop {
            power = power.mul(&shifted);
            let k = Subspace::from_vectors(n, power.kernel());
            let done = k.dim() == mult;
            kernels.push(k);
            if done {
                break;
            }
        }
        let s = kernels.len() - 1;
        // Rank-sequence oracle: #blocks of size >= k is dim K_k - dim K_{k-1}.
        let at_least: Vec<usize> =
            (1..=s).map(|k| kernels[k].dim() - kernels[k - 1].dim()).collect();
        let mut oracle_sizes = Vec::new();
        for k in 1..=s {
            let ge_k = at_least[k - 1];
            let ge_k1 = if k < s { at_least[k] } else { 0 };
            for _ in 0..(ge_k - ge_k1) {
                oracle_sizes.push(k);
            }
        }
        oracle_sizes.sort_unstable_by(|a, b| b.cmp(a));

        // Chain construction from the top of the filtration down.
        let mut lambda_chains: Vec<JordanChain> = Vec::new();
        let mut pushed: Vec<Vec<Vec<Rat>>> = vec![Vec::new(); s + 2];
        for k in (1..=s).rev() {
            let mut span = IncrementalSpan::new();
            for b in kernels[k - 1].basis_vectors() {
                span.insert(b);
            }
            for v in &pushed[k] {
                let grew = span.insert(v);
                assert!(grew, "descended chain vectors stay independent");
            }
            let candidates: Vec<Vec<Rat>> =
                kernels[k].basis_vectors().map(<[Rat]>::to_vec).collect();
            for top in candidates {
                if span.dim() == kernels[k].dim() {
                    break;
                }
                if !span.insert(&top) {
                    continue;
                }
                let mut vectors = vec![top];
                for _ in 1..k {
                    let next = shifted.mul_vec(vectors.last().unwrap());
                    vectors.push(next);
                }
                vectors.reverse();
                for (height, v) in vectors.iter().enumerate() {
                    let h = height + 1;
                    if h < k {
                        pushed[h].push(v.clone());
                    }
                }
                lambda_chains.push(JordanChain { eigenvalue: lambda.clone(), vectors });
            }
            assert_eq!(span.dim(), kernels[k].dim(), "chain tops exhaust each kernel layer");
        }
        lambda_chains.sort_by(|a, b| b.len().cmp(&a.len()));
        let sizes: Vec<usize> = lambda_chains.iter().map(JordanChain::len).collect();
        assert_eq!(sizes, oracle_sizes, "chain lengths must match the rank-sequence oracle");
        eigenvalues.push(lambda);
        block_sizes.push(sizes);
        chains.extend(lambda_chains);
    }

    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for chain in &chains {
        columns.extend(chain.vectors.iter().cloned());
    }
    let chain_basis = Matrix::from_fn(n, n, |r, c| columns[c][r].clone());
    let data = JordanData { eigenvalues, block_sizes, chains, chain_basis };
    let lhs = m.mul(&data.chain_basis);
    let rhs = data.chain_basis.mul(&data.jordan_matrix());
    assert_eq!(lhs, rhs, "conjugation identity M P = P J must hold exactly");
    assert_eq!(data.chain_basis.rank(), n, "chain basis must be invertible");
    Ok(data)
}

/// Matrix of a map restricted to an invariant subspace (RREF basis coords).
pub fn restrict_matrix(m: &Matrix, s: &Subspace) -> Result<Matrix, SpectralError> {
    let r = s.dim();
    let mut out = Matrix::zero(r, r);
    for (t, b) in s.basis_vectors().enumerate() {
        let image = m.mul_vec(b);
        let coords = s.coordinates_of(&image).ok_or(SpectralError::NotInvariant)?;
        for (row, v) in coords.into_iter().enumerate() {
            out.set(row, t, v);
        }
    }
    Ok(out)
}

/// Membership test for the audited class: two-step nilpotent with a
/// one-dimensional derived subalgebra (possibly padded by an abelian factor).
pub fn is_audited_class(a: &NilpotentLieAlgebra) -> bool {
    a.nilpotency_class() == 2 && a.derived_subalgebra().dim() == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketAuditViolation {
    /// Chain indices into the audited Jordan data.
    pub eigenvector_chain: usize,
    pub partner_chain: usize,
    /// 1-based level inside the partner chain.
    pub partner_level: usize,
    pub rule: AuditRule,
    pub witness: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditRule {
    /// An eigenvector bracketed a non-top chain vector without vanishing.
    NonTopBracket,
    /// A nonzero eigenvector-to-top bracket paired chains of unequal length
    /// where the eigenvector's chain was at least as long.
    UnequalLengths,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketAuditReport {
    pub violations: Vec<BracketAuditViolation>,
}

impl BracketAuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits the bracket interplay of a Jordan chain basis on a two-step
/// algebra with one-dimensional derived subalgebra:
///
/// * an eigenvector bracketed with a chain vector is nonzero only at the
///   chain's top level;
/// * a nonzero eigenvector-to-top bracket from a chain at least as long
///   forces both chains to have equal length.
///
/// The Jordan data is taken as given (not re-derived), so a corrupted basis
/// surfaces as reported violations.
pub fn jordan_basis_bracket_audit(
    d: &Derivation,
    jordan: &JordanData,
) -> Result<BracketAuditReport, SpectralError> {
    if !is_audited_class(d.algebra()) {
        return Err(SpectralError::NotClassC);
    }
    let a = d.algebra();
    let mut violations = Vec::new();
    for (r, cr) in jordan.chains.iter().enumerate() {
        for (s, cs) in jordan.chains.iter().enumerate() {
            let m_s = cs.len();
            for level in 1..=m_s {
                let b = a.bracket(cr.eigenvector(), &cs.vectors[level - 1]);
                if vec_is_zero(&b) {
                    continue;
                }
                if level != m_s {
                    violations.push(BracketAuditViolation {
                        eigenvector_chain: r,
                        partner_chain: s,
                        partner_level: level,
                        rule: AuditRule::NonTopBracket,
                        witness: a.format_vector(&b),
                    });
                } else if cr.len() >= m_s && cr.len() != m_s {
                    violations.push(BracketAuditViolation {
                        eigenvector_chain: r,
                        partner_chain: s,
                        partner_level: level,
                        rule: AuditRule::UnequalLengths,
                        witness: a.format_vector(&b),
                    });
                }
            }
        }
    }
    Ok(BracketAuditReport { violations })
}

/// Human-oriented spectrum rendering: "1, 2, 3 (x2), 5".
pub fn format_spectrum(spectrum: &[(Rat, usize)]) -> String {
    spectrum
        .iter()
        .map(|(l, m)| if *m == 1 { fmt_rat(l) } else { format!("{} (x{m})", fmt_rat(l)) })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Flattens (value, multiplicity) pairs into a sorted list with repeats.
pub fn flatten_spectrum(spectrum: &[(Rat, usize)]) -> Vec<Rat> {
    let mut out = Vec::new();
    for (l, m) in spectrum {
        out.extend(std::iter::repeat_n(l.clone(), *m));
    }
    out
}

/// Difference of derivation images; helper for experiment code.
pub fn derivation_defect(d: &Derivation, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let lhs = d.apply(&d.algebra().bracket(x, y));
    let rhs = d.algebra().bracket(&d.apply(x), y);
    let rhs2 = d.algebra().bracket(x, &d.apply(y));
    sub_vecs(&sub_vecs(&lhs, &rhs), &rhs2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use std::sync::Arc;

    fn heisenberg() -> Arc<NilpotentLieAlgebra> {
        NilpotentLieAlgebra::new(
            3,
            &[(0, 1, 2, rat(1))],
            Some(vec!["X".into(), "Y".into(), "Z".into()]),
        )
        .unwrap()
    }

    fn diag_derivation(weights: &[i64]) -> Derivation {
        let h = heisenberg();
        Derivation::diagonal(h, &weights.iter().map(|&w| rat(w)).collect::<Vec<_>>()).unwrap()
    }

    /// Jordan-block derivation on the Heisenberg algebra: X -> X, Y -> X + Y,
    /// Z -> 2Z.
    fn block_derivation() -> Derivation {
        let h = heisenberg();
        let m = Matrix::from_rows(vec![
            vec![rat(1), rat(1), rat(0)],
            vec![rat(0), rat(1), rat(0)],
            vec![rat(0), rat(0), rat(2)],
        ]);
        Derivation::new(h, m).unwrap()
    }

    #[test]
    fn leibniz_violation_detected() {
        let h = heisenberg();
        // diag(1, 1, 3) breaks Leibniz: [X,Y]=Z needs weight 2.
        let err = Derivation::diagonal(h, &[rat(1), rat(1), rat(3)]).unwrap_err();
        assert_eq!(err, SpectralError::LeibnizViolation { i: 0, j: 1 });
    }

    #[test]
    fn char_poly_of_zero_and_companion() {
        assert_eq!(char_poly(&Matrix::zero(3, 3)).coeffs(), &[rat(0), rat(0), rat(0), rat(1)]);
        // Companion matrix of x^2 - x - 1.
        let c = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(1)]]);
        assert_eq!(char_poly(&c).coeffs(), &[rat(-1), rat(-1), rat(1)]);
    }

    /// Independent oracle: Laplace-expansion determinant of xI - M over
    /// polynomial entries, for small sizes.
    fn char_poly_by_cofactors(m: &Matrix) -> Polynomial {
        fn det(entries: &Vec<Vec<Polynomial>>) -> Polynomial {
            let n = entries.len();
            if n == 1 {
                return entries[0][0].clone();
            }
            let mut acc = Polynomial::zero();
            for j in 0..n {
                if entries[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = (1..n)
                    .map(|r| {
                        (0..n).filter(|&c| c != j).map(|c| entries[r][c].clone()).collect()
                    })
                    .collect();
                let term = entries[0][j].mul(&det(&minor));
                let signed = if j % 2 == 0 {
                    term
                } else {
                    Polynomial::new(term.coeffs().iter().map(|c| -c.clone()).collect())
                };
                acc = Polynomial::new(
                    acc.coeffs()
                        .iter()
                        .cloned()
                        .chain(std::iter::repeat(Rat::zero()))
                        .zip(signed.coeffs().iter().cloned().chain(std::iter::repeat(Rat::zero())))
                        .take(acc.coeffs().len().max(signed.coeffs().len()))
                        .map(|(a, b)| a + b)
                        .collect(),
                );
            }
            acc
        }
        let n = m.rows();
        let entries: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diag = if i == j { Rat::one() } else { Rat::zero() };
                        Polynomial::new(vec![-m.get(i, j).clone(), diag])
                    })
                    .collect()
            })
            .collect();
        det(&entries)
    }

    #[test]
    fn faddeev_leverrier_matches_cofactor_oracle() {
        let m = Matrix::from_rows(vec![
            vec![rat(2), rat(-1), rat(0), rat(3)],
            vec![rat(1), ratio(1, 2), rat(4), rat(0)],
            vec![rat(0), rat(1), rat(-2), rat(1)],
            vec![rat(5), rat(0), rat(1), rat(1)],
        ]);
        assert_eq!(char_poly(&m), char_poly_by_cofactors(&m));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let p_roots = [rat(1), rat(2), rat(3), rat(3), rat(3), rat(6)];
        let m = Matrix::diagonal(&p_roots);
        let spec = rational_eigenvalues(&m).unwrap();
        assert_eq!(spec, vec![(rat(1), 1), (rat(2), 1), (rat(3), 3), (rat(6), 1)]);
    }

    #[test]
    fn fractional_and_negative_roots() {
        let m = Matrix::diagonal(&[ratio(1, 2), ratio(-3, 4), ratio(1, 2)]);
        let spec = rational_eigenvalues(&m).unwrap();
        assert_eq!(spec, vec![(ratio(-3, 4), 1), (ratio(1, 2), 2)]);
    }

    #[test]
    fn irrational_spectrum_is_rejected() {
        // x^2 - 2 has irrational roots.
        let m = Matrix::from_rows(vec![vec![rat(0), rat(2)], vec![rat(1), rat(0)]]);
        assert_eq!(rational_eigenvalues(&m).unwrap_err(), SpectralError::IrrationalOrComplexSpectrum);
        // Rotation has complex spectrum.
        let r = Matrix::from_rows(vec![vec![rat(0), rat(-1)], vec![rat(1), rat(0)]]);
        assert_eq!(rational_eigenvalues(&r).unwrap_err(), SpectralError::IrrationalOrComplexSpectrum);
    }

    #[test]
    fn zero_eigenvalues_are_found() {
        let m = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        assert_eq!(rational_eigenvalues(&m).unwrap(), vec![(rat(0), 2)]);
    }

    #[test]
    fn eigen_decomposition_of_block_derivation() {
        let d = block_derivation();
        let e = d.eigen_decomposition().unwrap();
        assert_eq!(e.eigenvalues, vec![rat(1), rat(2)]);
        assert_eq!(e.multiplicities, vec![2, 1]);
        // V_1 is the generalized space spanned by X and Y.
        assert!(e.generalized_spaces[0].contains(&[rat(0), rat(1), rat(0)]));
        assert_eq!(e.generalized_spaces[0].dim(), 2);
    }

    #[test]
    fn jordan_of_diagonal_is_trivial_blocks() {
        let d = diag_derivation(&[1, 1, 2]);
        let j = d.jordan_data().unwrap();
        assert_eq!(j.signature(), vec![(rat(1), vec![1, 1]), (rat(2), vec![1])]);
    }

    #[test]
    fn jordan_of_block_derivation() {
        let d = block_derivation();
        let j = d.jordan_data().unwrap();
        assert_eq!(j.signature(), vec![(rat(1), vec![2]), (rat(2), vec![1])]);
        // The chain realizes M v2 = v2 + v1 with v1 an eigenvector.
        let chain = &j.chains[0];
        let v1 = chain.vectors[0].clone();
        let v2 = chain.vectors[1].clone();
        let image = d.matrix().mul_vec(&v2);
        let expected: Vec<Rat> = v2.iter().zip(&v1).map(|(a, b)| a + b).collect();
        assert_eq!(image, expected);
    }

    #[test]
    fn jordan_respects_similarity() {
        // Conjugating must not change the signature.
        let d = block_derivation();
        let p = Matrix::from_rows(vec![
            vec![rat(1), rat(2), rat(0)],
            vec![rat(0), rat(1), rat(1)],
            vec![rat(1), rat(0), rat(1)],
        ]);
        let conj = p.mul(d.matrix()).mul(&p.inverse().unwrap());
        let j = jordan_data(&conj).unwrap();
        assert_eq!(j.signature(), vec![(rat(1), vec![2]), (rat(2), vec![1])]);
    }

    #[test]
    fn nilpotent_jordan_chain_structure() {
        // One size-3 block and one size-1 block at eigenvalue 0.
        let mut m = Matrix::zero(4, 4);
        m.set(0, 1, rat(1));
        m.set(1, 2, rat(1));
        let j = jordan_data(&m).unwrap();
        assert_eq!(j.signature(), vec![(rat(0), vec![3, 1])]);
    }

    #[test]
    fn split_of_block_derivation() {
        let d = block_derivation();
        let split = d.semisimple_nilpotent_split().unwrap();
        assert_eq!(split.semisimple.matrix(), &Matrix::diagonal(&[rat(1), rat(1), rat(2)]));
        let nu = split.nilpotent.matrix();
        assert_eq!(nu.get(0, 1), &rat(1));
        assert!(nu.pow(2).is_zero_matrix());
    }

    #[test]
    fn split_of_diagonalizable_has_zero_nilpotent_part() {
        let d = diag_derivation(&[1, 2, 3]);
        let split = d.semisimple_nilpotent_split().unwrap();
        assert!(split.nilpotent.matrix().is_zero_matrix());
    }

    #[test]
    fn grading_holds_for_valid_derivations() {
        assert!(diag_derivation(&[1, 1, 2]).grading_check().unwrap().passed());
        assert!(block_derivation().grading_check().unwrap().passed());
    }

    #[test]
    fn restriction_and_quotient_multiply_char_polys() {
        let d = diag_derivation(&[1, 2, 3]);
        let a = d.algebra().clone();
        let center = a.center();
        let restricted = d.restrict_to(&center).unwrap();
        let q = a.quotient(&center).unwrap();
        let induced = d.induced_on_quotient(&q).unwrap();
        let product = char_poly(&restricted).mul(&char_poly(&induced));
        assert_eq!(product, d.char_poly());
    }

    #[test]
    fn restriction_rejects_non_invariant_subspace() {
        let d = block_derivation();
        // span{Y} is not invariant: Y -> X + Y.
        let s = Subspace::from_vectors(3, vec![vec![rat(0), rat(1), rat(0)]]);
        assert_eq!(restrict_matrix(d.matrix(), &s).unwrap_err(), SpectralError::NotInvariant);
    }

    #[test]
    fn audit_accepts_block_derivation_basis() {
        let d = block_derivation();
        let j = d.jordan_data().unwrap();
        let report = jordan_basis_bracket_audit(&d, &j).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn audit_flags_corrupted_basis() {
        let d = block_derivation();
        let mut j = d.jordan_data().unwrap();
        // Swap a vector of the lambda=1 chain with the lambda=2 chain's
        // vector: the eigenvector-to-top bracket then pairs chains of
        // unequal length, which the audit must flag. (An intra-chain swap on
        // this 3-dimensional example happens to satisfy the bracket rules;
        // larger fixtures catch those too.)
        let long = j.chains.iter().position(|c| c.len() == 2).unwrap();
        let short = j.chains.iter().position(|c| c.len() == 1).unwrap();
        let moved = j.chains[long].vectors[1].clone();
        j.chains[long].vectors[1] = j.chains[short].vectors[0].clone();
        j.chains[short].vectors[0] = moved;
        let report = jordan_basis_bracket_audit(&d, &j).unwrap();
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == AuditRule::UnequalLengths));
    }

    #[test]
    fn audit_requires_the_right_class() {
        // A 3-step filiform algebra is outside the audited class.
        let f = NilpotentLieAlgebra::new(
            4,
            &[(0, 1, 2, rat(1)), (0, 2, 3, rat(1))],
            None,
        )
        .unwrap();
        let d = Derivation::diagonal(f, &[rat(1), rat(2), rat(3), rat(4)]).unwrap();
        let j = d.jordan_data().unwrap();
        assert_eq!(
            jordan_basis_bracket_audit(&d, &j).unwrap_err(),
            SpectralError::NotClassC
        );
    }
}
