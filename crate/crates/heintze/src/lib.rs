//! Exact quasi-isometry invariants for purely real Heintze groups.
//!
//! A Heintze group is a semidirect product `N x_a R` of a simply connected
//! nilpotent group `N` with the real line, acting by a derivation `a` whose
//! eigenvalues have positive real part; purely real means the eigenvalues
//! are real. Up to rescaling the derivation these groups carry negatively
//! curved left-invariant metrics, and their large-scale geometry is governed
//! by spectral and bracket data of `(n, a)`.
//!
//! This crate computes that data exactly over the rationals:
//!
//! * nilpotent Lie algebras from structure constants or from graphs, with
//!   centers, derived series, normalizer chains, and quotients
//!   ([`algebra`], [`graph`]);
//! * characteristic polynomials, rational spectra, generalized eigenspaces,
//!   Jordan chain bases, and semisimple/nilpotent splittings ([`spectral`]);
//! * the quasi-isometry comparison pipeline: Carnot type, scale-normalized
//!   characteristic polynomials, Jordan data on the Heisenberg and abelian
//!   families, and the horospherical spectrum profile ([`heintze`]);
//! * exact group arithmetic (truncated Baker-Campbell-Hausdorff products)
//!   and seeded floating-point experiments probing the model quasi-metric
//!   ([`group`], [`metric`], [`experiments`]).
//!
//! The `heintze` binary exposes the same functionality on files; see the
//! book under `book/` for a guided tour.
//!
//! ```
//! use heintze::algebra::NilpotentLieAlgebra;
//! use heintze::rational::rat;
//!
//! // The 3-dimensional Heisenberg algebra: [X, Y] = Z.
//! let h = NilpotentLieAlgebra::new(3, &[(0, 1, 2, rat(1))], None).unwrap();
//! assert_eq!(h.nilpotency_class(), 2);
//! assert_eq!(h.center().dim(), 1);
//! ```

pub mod algebra;
pub mod arith;
#[cfg(doctest)]
pub mod book;
pub mod catalog;
pub mod check;
pub mod experiments;
pub mod graph;
pub mod group;
pub mod heintze;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod poly;
pub mod rational;
pub mod report;
pub mod spectral;
