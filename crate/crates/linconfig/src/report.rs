//! Report primitives: exact rationals on the wire, decimal rendering at
//! the boundary only.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::hypergraph::Rat;

/// Exact rational as strings, plus a decimal rendering (6 significant
/// digits by default). The fraction is authoritative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&Rat> for RationalJson {
    fn from(r: &Rat) -> RationalJson {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: decimal_string(r, 6),
        }
    }
}

/// Exact decimal rendering with `sig` significant digits, by long division
/// (no floating point).
pub fn decimal_string(r: &Rat, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let mut num = r.numer().abs();
    let mut den = r.denom().abs();
    // scale into [1, 10), tracking the decimal exponent
    let ten = BigInt::from(10);
    let mut exp: i64 = 0;
    while num >= &den * &ten {
        den *= &ten;
        exp += 1;
    }
    while num < den {
        num *= &ten;
        exp -= 1;
    }
    // sig digits, rounded half away from zero
    let mut scaled = num;
    for _ in 1..sig {
        scaled *= &ten;
    }
    let mut digits = (&scaled * 2 + &den) / (&den * 2);
    let cap = ten.pow(sig as u32);
    if digits >= cap {
        digits = ten.pow(sig as u32 - 1);
        exp += 1;
    }
    let ds = digits.to_string();
    debug_assert_eq!(ds.len(), sig);
    let sign = if neg { "-" } else { "" };
    if exp >= 0 && (exp as usize) < sig.max(7) && (exp as usize) < 12 {
        let point = exp as usize + 1;
        if point >= sig {
            let zeros = "0".repeat(point - sig);
            format!("{sign}{ds}{zeros}")
        } else {
            format!("{sign}{}.{}", &ds[..point], &ds[point..])
        }
    } else if exp < 0 && exp >= -4 {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{ds}")
    } else {
        format!("{sign}{}.{}e{}", &ds[..1], &ds[1..], exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> Rat {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&r(1, 25), 6), "0.0400000");
        assert_eq!(decimal_string(&r(1, 4), 6), "0.250000");
        assert_eq!(decimal_string(&r(2, 1), 6), "2.00000");
        assert_eq!(decimal_string(&r(-1, 3), 6), "-0.333333");
        assert_eq!(decimal_string(&r(0, 1), 6), "0");
        assert_eq!(decimal_string(&r(1, 1_000_000_000), 3), "1.00e-9");
        assert_eq!(decimal_string(&r(999_999_9, 1_000_000), 6), "10.0000");
    }
}
