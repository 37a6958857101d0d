//! Exact group law on a simply connected nilpotent group in logarithmic
//! coordinates.
//!
//! Points are algebra vectors; the product is the Baker–Campbell–Hausdorff
//! series, which terminates because the algebra is nilpotent. The series
//! terms come from Dynkin's commutator expansion, enumerated per degree and
//! accumulated per bracket word, so exact and floating-point evaluators can
//! share one table.

use crate::algebra::NilpotentLieAlgebra;
use crate::rational::{rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Series degree cap. Products on algebras of higher class are refused
/// rather than silently truncated.
pub const MAX_BCH_CLASS: usize = 6;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("nilpotency class {0} exceeds the supported group-law cap of {MAX_BCH_CLASS}")]
    ClassTooHigh(usize),
    #[error("expected a coordinate vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Letter of a bracket word: left or right series argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

/// One series term: a right-nested bracket word with its total rational
/// coefficient. A word l₁l₂…lₙ denotes [l₁, [l₂, […, [lₙ₋₁, lₙ]…]]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BchTerm {
    pub word: Vec<Letter>,
    pub coefficient: Rat,
}

fn factorial(n: usize) -> Rat {
    (1..=n).fold(rat(1), |acc, k| acc * rat(k as i64))
}

/// Enumerates block sequences (p₁,q₁),…,(p_k,q_k) with pᵢ + qᵢ ≥ 1 summing
/// to `degree`, accumulating each sequence's coefficient
/// (−1)^{k−1} / (k · degree · ∏ pᵢ!qᵢ!) onto its word.
fn accumulate_degree(degree: usize, table: &mut BTreeMap<Vec<Letter>, Rat>) {
    fn recurse(
        remaining: usize,
        blocks: usize,
        word: &mut Vec<Letter>,
        factorial_product: &Rat,
        degree: usize,
        table: &mut BTreeMap<Vec<Letter>, Rat>,
    ) {
        if remaining == 0 {
            let k = blocks as i64;
            let sign = if blocks % 2 == 1 { rat(1) } else { rat(-1) };
            let coeff = sign / (rat(k) * rat(degree as i64) * factorial_product);
            let entry = table.entry(word.clone()).or_insert_with(Rat::zero);
            *entry += coeff;
            return;
        }
        for size in 1..=remaining {
            for p in 0..=size {
                let q = size - p;
                let start = word.len();
                word.extend(std::iter::repeat(Letter::X).take(p));
                word.extend(std::iter::repeat(Letter::Y).take(q));
                let fp = factorial_product * factorial(p) * factorial(q);
                recurse(remaining - size, blocks + 1, word, &fp, degree, table);
                word.truncate(start);
            }
        }
    }
    let mut word = Vec::with_capacity(degree);
    recurse(degree, 0, &mut word, &rat(1), degree, table);
}

/// Series terms of degree 1..=max_degree with nonzero accumulated
/// coefficients, in word order.
pub fn bch_terms(max_degree: usize) -> Vec<BchTerm> {
    let mut table: BTreeMap<Vec<Letter>, Rat> = BTreeMap::new();
    for degree in 1..=max_degree {
        accumulate_degree(degree, &mut table);
    }
    table
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(word, coefficient)| BchTerm { word, coefficient })
        .collect()
}

fn check_vector(a: &NilpotentLieAlgebra, v: &[Rat]) -> Result<(), GroupError> {
    if v.len() != a.dim() {
        return Err(GroupError::DimensionMismatch { expected: a.dim(), got: v.len() });
    }
    Ok(())
}

fn evaluate_word(a: &NilpotentLieAlgebra, word: &[Letter], x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let pick = |l: &Letter| -> &[Rat] {
        match l {
            Letter::X => x,
            Letter::Y => y,
        }
    };
    let mut rev = word.iter().rev();
    let mut acc: Vec<Rat> = pick(rev.next().expect("words are nonempty")).to_vec();
    for l in rev {
        acc = a.bracket(pick(l), &acc);
    }
    acc
}

/// Exact group product in logarithmic coordinates.
pub fn bch_product(
    a: &NilpotentLieAlgebra,
    x: &[Rat],
    y: &[Rat],
) -> Result<Vec<Rat>, GroupError> {
    let class = a.nilpotency_class();
    if class > MAX_BCH_CLASS {
        return Err(GroupError::ClassTooHigh(class));
    }
    check_vector(a, x)?;
    check_vector(a, y)?;
    let mut out = vec![Rat::zero(); a.dim()];
    for term in bch_terms(class.max(1)) {
        let value = evaluate_word(a, &term.word, x, y);
        for (o, v) in out.iter_mut().zip(value) {
            *o += &term.coefficient * v;
        }
    }
    Ok(out)
}

/// Group inverse: exp(x)⁻¹ = exp(−x).
pub fn group_inverse(x: &[Rat]) -> Vec<Rat> {
    x.iter().map(|c| -c).collect()
}

/// Conjugation in logarithmic coordinates: log(exp(x) exp(y) exp(x)⁻¹)
/// equals the adjoint series Σ_{j≥0} ad_x^j(y) / j!, which terminates by
/// nilpotency, so this works at any class (no series table involved).
pub fn conjugate(
    a: &NilpotentLieAlgebra,
    x: &[Rat],
    y: &[Rat],
) -> Result<Vec<Rat>, GroupError> {
    check_vector(a, x)?;
    check_vector(a, y)?;
    let mut acc = y.to_vec();
    let mut term = y.to_vec();
    let mut j = rat(0);
    loop {
        j += rat(1);
        term = a.bracket(x, &term);
        for c in term.iter_mut() {
            *c /= &j;
        }
        if term.iter().all(Rat::is_zero) {
            return Ok(acc);
        }
        for (o, t) in acc.iter_mut().zip(&term) {
            *o += t;
        }
    }
}

/// Commutator g h g⁻¹ h⁻¹ in logarithmic coordinates.
pub fn group_commutator(
    a: &NilpotentLieAlgebra,
    g: &[Rat],
    h: &[Rat],
) -> Result<Vec<Rat>, GroupError> {
    let c = conjugate(a, g, h)?;
    bch_product(a, &c, &group_inverse(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::ratio;

    fn vec_rat(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&c| rat(c)).collect()
    }

    #[test]
    fn degree_two_term_is_half_the_bracket() {
        let terms = bch_terms(2);
        // Degree 1: the two single letters with coefficient 1.
        assert!(terms
            .iter()
            .any(|t| t.word == vec![Letter::X] && t.coefficient == rat(1)));
        assert!(terms
            .iter()
            .any(|t| t.word == vec![Letter::Y] && t.coefficient == rat(1)));
        // Degree 2: XY and YX at ±1/4 (their evaluations add to ½[x, y]);
        // the constant words XX and YY cancel to zero and are dropped.
        assert!(terms
            .iter()
            .any(|t| t.word == vec![Letter::X, Letter::Y] && t.coefficient == ratio(1, 4)));
        assert!(terms
            .iter()
            .any(|t| t.word == vec![Letter::Y, Letter::X] && t.coefficient == ratio(-1, 4)));
        assert!(!terms.iter().any(|t| t.word == vec![Letter::X, Letter::X]));
    }

    #[test]
    fn heisenberg_closed_form() {
        let a = catalog::heisenberg(1);
        let x = vec![rat(2), rat(-1), ratio(1, 3)];
        let y = vec![ratio(1, 2), rat(4), rat(0)];
        let got = bch_product(&a, &x, &y).unwrap();
        // x + y + ½[x, y]; here [x, y] = (x₁y₂ − x₂y₁)Z.
        let z = &x[0] * &y[1] - &x[1] * &y[0];
        let expected = vec![
            &x[0] + &y[0],
            &x[1] + &y[1],
            &x[2] + &y[2] + z / rat(2),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn free_class_three_series_values() {
        let a = catalog::free_nilpotent_2_3();
        let e1 = vec_rat(&[1, 0, 0, 0, 0]);
        let e2 = vec_rat(&[0, 1, 0, 0, 0]);
        let got = bch_product(&a, &e1, &e2).unwrap();
        let expected =
            vec![rat(1), rat(1), ratio(1, 2), ratio(1, 12), ratio(-1, 12)];
        assert_eq!(got, expected);
    }

    #[test]
    fn free_class_four_series_values() {
        let a = catalog::free_nilpotent_2_4();
        let e1 = vec_rat(&[1, 0, 0, 0, 0, 0, 0, 0]);
        let e2 = vec_rat(&[0, 1, 0, 0, 0, 0, 0, 0]);
        let got = bch_product(&a, &e1, &e2).unwrap();
        let expected = vec![
            rat(1),
            rat(1),
            ratio(1, 2),
            ratio(1, 12),
            ratio(-1, 12),
            rat(0),
            ratio(-1, 24),
            rat(0),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn product_is_associative_on_class_four() {
        let a = catalog::filiform(5);
        let x = vec![rat(1), rat(-2), rat(0), ratio(1, 2), rat(3)];
        let y = vec![ratio(-1, 3), rat(1), rat(2), rat(0), rat(1)];
        let z = vec![rat(2), rat(0), rat(-1), rat(1), ratio(2, 5)];
        let xy_z = bch_product(&a, &bch_product(&a, &x, &y).unwrap(), &z).unwrap();
        let x_yz = bch_product(&a, &x, &bch_product(&a, &y, &z).unwrap()).unwrap();
        assert_eq!(xy_z, x_yz);
    }

    #[test]
    fn product_is_associative_on_free_class_four() {
        let a = catalog::free_nilpotent_2_4();
        let x = vec_rat(&[1, 2, 0, 0, 1, 0, 0, 0]);
        let y = vec_rat(&[0, -1, 1, 0, 0, 2, 0, 1]);
        let z = vec_rat(&[3, 1, 0, -1, 0, 0, 1, 0]);
        let xy_z = bch_product(&a, &bch_product(&a, &x, &y).unwrap(), &z).unwrap();
        let x_yz = bch_product(&a, &x, &bch_product(&a, &y, &z).unwrap()).unwrap();
        assert_eq!(xy_z, x_yz);
    }

    #[test]
    fn inverse_and_identity() {
        let a = catalog::filiform(5);
        let x = vec![rat(1), rat(2), rat(-1), ratio(3, 7), rat(0)];
        let zero = vec![Rat::zero(); 5];
        assert_eq!(bch_product(&a, &x, &group_inverse(&x)).unwrap(), zero);
        assert_eq!(bch_product(&a, &zero, &x).unwrap(), x);
        assert_eq!(bch_product(&a, &x, &zero).unwrap(), x);
    }

    #[test]
    fn conjugation_and_commutator() {
        let a = catalog::heisenberg(1);
        let g = vec![rat(1), rat(0), rat(0)];
        let h = vec![rat(0), rat(1), rat(0)];
        // Second-order terms vanish, so the conjugate is y + [x, y].
        assert_eq!(conjugate(&a, &g, &h).unwrap(), vec![rat(0), rat(1), rat(1)]);
        // In the Heisenberg group, ghg⁻¹h⁻¹ = exp([g, h]).
        assert_eq!(group_commutator(&a, &g, &h).unwrap(), vec![rat(0), rat(0), rat(1)]);
        // Conjugating by a central element does nothing.
        let z = vec![rat(0), rat(0), rat(5)];
        assert_eq!(conjugate(&a, &z, &h).unwrap(), h);
        assert_eq!(conjugate(&a, &g, &g).unwrap(), g);
    }

    #[test]
    fn conjugation_agrees_with_the_product_route() {
        // The adjoint series and the composed product must produce the same
        // element; computing both guards each implementation.
        for a in [catalog::filiform(5), catalog::free_nilpotent_2_4()] {
            let n = a.dim();
            let x: Vec<Rat> = (0..n).map(|i| ratio(i as i64 + 1, 3)).collect();
            let y: Vec<Rat> = (0..n).map(|i| rat(2) - rat(i as i64)).collect();
            let via_series = conjugate(&a, &x, &y).unwrap();
            let via_products =
                bch_product(&a, &x, &bch_product(&a, &y, &group_inverse(&x)).unwrap()).unwrap();
            assert_eq!(via_series, via_products);
        }
    }

    #[test]
    fn conjugation_has_no_class_cap() {
        // Unlike the product, the adjoint series terminates at any class.
        let a = catalog::filiform(8);
        let x: Vec<Rat> = (0..8).map(|i| rat(i as i64)).collect();
        let y: Vec<Rat> = (0..8).map(|i| rat(1) - rat(i as i64)).collect();
        assert!(conjugate(&a, &x, &y).is_ok());
    }

    #[test]
    fn class_cap_is_enforced() {
        let a = catalog::filiform(8);
        assert_eq!(a.nilpotency_class(), 7);
        let x = vec![Rat::zero(); 8];
        assert_eq!(
            bch_product(&a, &x, &x).unwrap_err(),
            GroupError::ClassTooHigh(7)
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = catalog::heisenberg(1);
        let short = vec![rat(1)];
        let ok = vec![rat(0), rat(0), rat(0)];
        assert_eq!(
            bch_product(&a, &short, &ok).unwrap_err(),
            GroupError::DimensionMismatch { expected: 3, got: 1 }
        );
    }
}
