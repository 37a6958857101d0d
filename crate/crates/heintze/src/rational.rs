//! Exact scalar arithmetic. Everything structural in this crate is computed
//! over arbitrary-precision rationals; floating point only appears in the
//! numeric experiment layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// Scalar used by all exact computations.
pub type Rat = BigRational;

/// Integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduced fraction `n/d`. Panics on `d == 0`; callers pass literals.
pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`. Decimal points are rejected: exact inputs must
/// stay exact, so `"1.5"` is an error while `"3/2"` is fine.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(format!("`{s}` is not an exact rational; write it as p/q"));
    }
    Rat::from_str(s).map_err(|e| format!("`{s}` is not a rational: {e}"))
}

/// Lossy conversion for the numeric layer.
pub fn to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Out-of-range ratios only arise from astronomically large exact
        // intermediates; saturate with the correct sign.
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_zero() || q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
