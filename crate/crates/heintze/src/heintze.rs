//! Quasi-isometry invariants of purely real Heintze data.
//!
//! A Heintze datum is a nilpotent Lie algebra together with a derivation
//! whose eigenvalues are positive rationals. This module computes the
//! invariants that separate such data up to scaling — characteristic
//! polynomial, Jordan form within rigid families, stratifiability, and the
//! spectrum profile — and combines them into a comparison pipeline.

use crate::algebra::NilpotentLieAlgebra;
use crate::linalg::{Matrix, Subspace};
use crate::poly::Polynomial;
use crate::rational::{fmt_rat, rat, Rat};
use crate::spectral::{Derivation, EigenDecomposition, JordanData, SpectralError};
use num_traits::Signed;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HeintzeError {
    #[error("eigenvalue {} is not positive; expansion must be strict in every direction", fmt_rat(.0))]
    NonPositiveEigenvalue(Rat),
    #[error("the profile jumps at p = {}; values at jump points are not assigned", fmt_rat(.0))]
    JumpPoint(Rat),
    #[error("profile arguments must satisfy p >= 1, got {}", fmt_rat(.0))]
    OutOfDomain(Rat),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// A nilpotent algebra with an expanding derivation of rational spectrum,
/// validated and pre-decomposed on construction.
#[derive(Clone, Debug)]
pub struct HeintzeData {
    derivation: Derivation,
    eigen: EigenDecomposition,
    jordan: JordanData,
    char_poly: Polynomial,
    trace: Rat,
}

impl HeintzeData {
    /// Validates that the derivation has rational, strictly positive
    /// eigenvalues and precomputes its spectral data.
    pub fn new(derivation: Derivation) -> Result<Self, HeintzeError> {
        let eigen = derivation.eigen_decomposition()?;
        if let Some(bad) = eigen.eigenvalues.iter().find(|l| !l.is_positive()) {
            return Err(HeintzeError::NonPositiveEigenvalue(bad.clone()));
        }
        let jordan = derivation.jordan_data()?;
        let char_poly = derivation.char_poly();
        let trace = derivation.trace();
        Ok(HeintzeData { derivation, eigen, jordan, char_poly, trace })
    }

    pub fn algebra(&self) -> &Arc<NilpotentLieAlgebra> {
        self.derivation.algebra()
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn jordan(&self) -> &JordanData {
        &self.jordan
    }

    pub fn char_poly(&self) -> &Polynomial {
        &self.char_poly
    }

    pub fn trace(&self) -> &Rat {
        &self.trace
    }

    pub fn dim(&self) -> usize {
        self.algebra().dim()
    }

    pub fn min_eigenvalue(&self) -> &Rat {
        self.eigen.eigenvalues.first().expect("spectrum is nonempty")
    }

    pub fn max_eigenvalue(&self) -> &Rat {
        self.eigen.eigenvalues.last().expect("spectrum is nonempty")
    }

    /// True when the kernel of (derivation − λ₁) generates the whole algebra,
    /// i.e. the lowest true eigenspace carries a stratification.
    pub fn is_carnot_type(&self) -> bool {
        let lambda1 = self.min_eigenvalue().clone();
        let n = self.dim();
        let shifted = self.derivation.matrix().sub(&Matrix::identity(n).scale(&lambda1));
        let eigenspace = shifted.kernel();
        self.algebra().lie_span(&eigenspace).is_full()
    }

    /// Subalgebra generated by the generalized eigenspace of the smallest
    /// eigenvalue.
    pub fn u_alpha(&self) -> Subspace {
        let vecs: Vec<Vec<Rat>> =
            self.eigen.generalized_spaces[0].basis_vectors().map(|v| v.to_vec()).collect();
        self.algebra().lie_span(&vecs)
    }

    /// Subalgebra generated by the eigenvectors sitting at the bottom of the
    /// longest Jordan chains of the smallest eigenvalue.
    pub fn h_alpha(&self) -> Subspace {
        let lambda1 = self.min_eigenvalue();
        let max_len = self
            .jordan
            .chains
            .iter()
            .filter(|c| &c.eigenvalue == lambda1)
            .map(|c| c.len())
            .max()
            .expect("the smallest eigenvalue has at least one chain");
        let vecs: Vec<Vec<Rat>> = self
            .jordan
            .chains
            .iter()
            .filter(|c| &c.eigenvalue == lambda1 && c.len() == max_len)
            .map(|c| c.eigenvector().to_vec())
            .collect();
        self.algebra().lie_span(&vecs)
    }

    /// Rescales `other` so its smallest eigenvalue matches this datum's;
    /// returns the rescaled datum and the scale factor applied.
    pub fn normalize_scale(&self, other: &HeintzeData) -> (HeintzeData, Rat) {
        let s = self.min_eigenvalue() / other.min_eigenvalue();
        let scaled = HeintzeData::new(other.derivation.scale(&s))
            .expect("scaling by a positive rational preserves validity");
        (scaled, s)
    }

    /// Candidate discontinuities of the profile: trace divided by each
    /// distinct eigenvalue, ascending.
    pub fn jump_set(&self) -> Vec<Rat> {
        let mut js: Vec<Rat> =
            self.eigen.eigenvalues.iter().map(|l| &self.trace / l).collect();
        js.sort();
        js
    }

    /// Codimension of the subalgebra generated by all generalized eigenspaces
    /// with eigenvalue strictly below trace / p.
    fn collapsed_codim(&self, p: &Rat) -> usize {
        let threshold = &self.trace / p;
        let mut vecs: Vec<Vec<Rat>> = Vec::new();
        for (l, space) in self.eigen.eigenvalues.iter().zip(&self.eigen.generalized_spaces) {
            if l < &threshold {
                vecs.extend(space.basis_vectors().map(|v| v.to_vec()));
            }
        }
        self.dim() - self.algebra().lie_span(&vecs).dim()
    }

    /// Step-function profile on [1, ∞): jump locations with the value on
    /// each open interval between them (first entry: value on (1, first
    /// jump); last entry: eventual value). Candidate jumps where the value
    /// does not actually change are merged away.
    pub fn spectrum_profile(&self) -> SpectrumProfile {
        let one = rat(1);
        let candidates: Vec<Rat> =
            self.jump_set().into_iter().filter(|c| c > &one).collect();
        let mut samples: Vec<Rat> = Vec::with_capacity(candidates.len() + 1);
        if candidates.is_empty() {
            samples.push(rat(2));
        } else {
            samples.push((&one + &candidates[0]) / rat(2));
            for w in candidates.windows(2) {
                samples.push((&w[0] + &w[1]) / rat(2));
            }
            samples.push(candidates.last().expect("nonempty") + &one);
        }
        let values: Vec<usize> = samples.iter().map(|p| self.collapsed_codim(p)).collect();
        let mut jumps = Vec::new();
        let mut dims = vec![values[0]];
        for (candidate, value) in candidates.into_iter().zip(values.into_iter().skip(1)) {
            if value != *dims.last().expect("nonempty") {
                jumps.push(candidate);
                dims.push(value);
            }
        }
        SpectrumProfile { jumps, dims }
    }

    /// Profile value at a single point p ≥ 1 that is not a jump.
    pub fn profile_value(&self, p: &Rat) -> Result<usize, HeintzeError> {
        if p < &rat(1) {
            return Err(HeintzeError::OutOfDomain(p.clone()));
        }
        if self.spectrum_profile().jumps.contains(p) {
            return Err(HeintzeError::JumpPoint(p.clone()));
        }
        Ok(self.collapsed_codim(p))
    }
}

/// The profile as a step function: `dims[i]` is the value on the open
/// interval between `jumps[i-1]` and `jumps[i]` (with 1 and ∞ at the ends).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumProfile {
    pub jumps: Vec<Rat>,
    pub dims: Vec<usize>,
}

/// True for the (2m+1)-dimensional algebras with one-dimensional center
/// equal to the derived subalgebra and nondegenerate induced skew form.
pub fn is_heisenberg(a: &NilpotentLieAlgebra) -> bool {
    let n = a.dim();
    if n < 3 || n % 2 == 0 {
        return false;
    }
    let center = a.center();
    let derived = a.derived_subalgebra();
    if center.dim() != 1 || derived != center {
        return false;
    }
    // The full bracket-coefficient form has the center in its kernel, so
    // nondegeneracy on the quotient is rank n − 1.
    let form = Matrix::from_fn(n, n, |i, j| {
        let b = a.bracket(&a.basis_vector(i), &a.basis_vector(j));
        center
            .coordinates_of(&b)
            .expect("brackets land in the derived subalgebra")[0]
            .clone()
    });
    form.rank() == n - 1
}

/// Which invariant separated two data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    CharacteristicPolynomial,
    JordanForm,
    CarnotType,
    SpectrumProfile,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Invariant::CharacteristicPolynomial => "characteristic polynomial",
            Invariant::JordanForm => "Jordan form",
            Invariant::CarnotType => "Carnot type",
            Invariant::SpectrumProfile => "spectrum profile",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    DistinguishedBy(Invariant),
    NotDistinguished,
}

/// Rigid families inside which the Jordan form is a complete invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Abelian,
    Heisenberg,
}

/// Everything `compare` looked at, so callers can report the evidence and
/// not just the verdict. The second component of each pair refers to the
/// rescaled right-hand datum.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub verdict: Verdict,
    pub scale: Rat,
    pub char_polys: (Polynomial, Polynomial),
    pub carnot: (bool, bool),
    pub family: Option<Family>,
    pub jordan_signatures: Option<(Vec<(Rat, Vec<usize>)>, Vec<(Rat, Vec<usize>)>)>,
    pub profiles: (SpectrumProfile, SpectrumProfile),
    pub note: Option<String>,
}

/// Compares two data up to scaling. Pipeline: rescale the right datum so the
/// smallest eigenvalues agree, then try the characteristic polynomial, the
/// Jordan form (only inside a rigid family where it is conclusive), the
/// Carnot-type flag, and the spectrum profile, in that order.
pub fn compare(a: &HeintzeData, b: &HeintzeData) -> ComparisonReport {
    let (bn, scale) = a.normalize_scale(b);
    let char_polys = (a.char_poly.clone(), bn.char_poly.clone());
    let carnot = (a.is_carnot_type(), bn.is_carnot_type());
    let profiles = (a.spectrum_profile(), bn.spectrum_profile());
    let same_dim = a.dim() == bn.dim();
    let family = if same_dim && a.algebra().is_abelian() && bn.algebra().is_abelian() {
        Some(Family::Abelian)
    } else if same_dim && is_heisenberg(a.algebra()) && is_heisenberg(bn.algebra()) {
        Some(Family::Heisenberg)
    } else {
        None
    };
    let jordan_signatures =
        family.map(|_| (a.jordan.signature(), bn.jordan.signature()));

    let verdict = if char_polys.0 != char_polys.1 {
        Verdict::DistinguishedBy(Invariant::CharacteristicPolynomial)
    } else if jordan_signatures.as_ref().is_some_and(|(s1, s2)| s1 != s2) {
        Verdict::DistinguishedBy(Invariant::JordanForm)
    } else if carnot.0 != carnot.1 {
        Verdict::DistinguishedBy(Invariant::CarnotType)
    } else if profiles.0 != profiles.1 {
        Verdict::DistinguishedBy(Invariant::SpectrumProfile)
    } else {
        Verdict::NotDistinguished
    };

    let note = if verdict == Verdict::NotDistinguished && carnot.0 && carnot.1 {
        Some(
            "both data are Carnot type with matching invariants; deciding equivalence \
             would need an isomorphism test of the graded algebras, which is out of scope"
                .to_string(),
        )
    } else {
        None
    };

    ComparisonReport { verdict, scale, char_polys, carnot, family, jordan_signatures, profiles, note }
}
