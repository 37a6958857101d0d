//! Univariate polynomials over the rationals, ascending coefficient order.

use crate::rational::{fmt_rat, Rat};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    /// coeffs[i] multiplies x^i; trailing zeros trimmed, zero poly is empty.
    coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![Rat::one()] }
    }

    /// x - r
    pub fn linear(r: &Rat) -> Self {
        Polynomial::new(vec![-r.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Rat::is_one)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Product of (x - r) over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rat>) -> Polynomial {
        roots
            .into_iter()
            .fold(Polynomial::one(), |acc, r| acc.mul(&Polynomial::linear(r)))
    }

    /// Exact division by (x - r); `None` if r is not a root.
    pub fn deflate(&self, r: &Rat) -> Option<Polynomial> {
        if self.is_zero() {
            return None;
        }
        // Synthetic division from the top coefficient down.
        let n = self.coeffs.len();
        let mut quotient = vec![Rat::zero(); n - 1];
        let mut carry = Rat::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry;
            if i == 0 {
                return v.is_zero().then(|| Polynomial::new(quotient));
            }
            carry = &v * r;
            quotient[i - 1] = v;
        }
        unreachable!()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = fmt_rat(c);
            if first {
                first = false;
            } else if cs.starts_with('-') {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = cs.trim_start_matches('-');
            let lead_neg = first && cs.starts_with('-');
            let shown = if f.alternate() || !lead_neg { mag } else { mag };
            match i {
                0 => write!(f, "{}{shown}", if lead_neg { "-" } else { "" })?,
                _ => {
                    let var = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                    if mag == "1" {
                        write!(f, "{}{var}", if lead_neg { "-" } else { "" })?;
                    } else {
                        write!(f, "{}{shown}*{var}", if lead_neg { "-" } else { "" })?;
                    }
                }
            }
        }
        Ok(())
    }
}
