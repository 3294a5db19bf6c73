//! Exact rationals, residues and the two local contribution terms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `k - floor(k/r) r`, always in `[0, r)`.
pub fn residue(k: i64, r: i64) -> Result<i64> {
    if r <= 0 {
        return Err(Error::Domain(format!("modulus must be positive, got {r}")));
    }
    Ok(k.rem_euclid(r))
}

pub(crate) fn b_raw(r: i64, k: i64) -> Rational {
    let x = k.rem_euclid(r);
    let y = (r - k).rem_euclid(r);
    rat(x * y, 2 * r)
}

pub(crate) fn a_raw(r: i64, b: i64, k: i64) -> Rational {
    let k = k.rem_euclid(r);
    let mut sum = Rational::zero();
    for l in 1..k {
        sum += b_raw(r, l * b);
    }
    sum - rat(k * (r * r - 1), 12 * r)
}

/// `B_r(k) = res(k) res(r-k) / 2r`.
pub fn b_term(r: i64, k: i64) -> Result<Rational> {
    if r <= 0 {
        return Err(Error::Domain(format!("index must be positive, got {r}")));
    }
    Ok(b_raw(r, k))
}

/// The contribution `A_Q(k)` of a point of type `1/r(1,-1,b)`, taken at `res(k, r)`.
pub fn a_term(r: i64, b: i64, k: i64) -> Result<Rational> {
    if r <= 0 {
        return Err(Error::Domain(format!("index must be positive, got {r}")));
    }
    if b.gcd(&r) != 1 {
        return Err(Error::Domain(format!("b = {b} is not coprime to r = {r}")));
    }
    Ok(a_raw(r, b, k))
}

pub fn mod_inverse(a: i64, r: i64) -> Result<i64> {
    if r < 2 {
        return Err(Error::Domain(format!("modulus must be at least 2, got {r}")));
    }
    let ext = a.rem_euclid(r).extended_gcd(&r);
    if ext.gcd != 1 {
        return Err(Error::NotInvertible { a, r });
    }
    Ok(ext.x.rem_euclid(r))
}

pub fn lcm_all<I: IntoIterator<Item = i64>>(values: I) -> i64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(&v))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Integer value of `q`, if it is one and fits in `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !is_integer(q) {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

/// Renders `p/q`, or plain `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Domain(format!("cannot read {text:?} as a rational"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Largest integer not above `q`.
pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues() {
        assert_eq!(residue(0, 7).unwrap(), 0);
        assert_eq!(residue(-3, 7).unwrap(), 4);
        assert_eq!(residue(13, 5).unwrap(), 3);
        assert!(residue(1, 0).is_err());
    }

    #[test]
    fn b_values() {
        assert_eq!(b_term(5, 0).unwrap(), int(0));
        assert_eq!(b_term(2, 1).unwrap(), rat(1, 4));
        assert_eq!(b_term(7, 3).unwrap(), rat(6, 7));
        assert!(b_term(-1, 3).is_err());
    }

    #[test]
    fn a_values() {
        assert_eq!(a_term(7, 3, 0).unwrap(), int(0));
        assert_eq!(a_term(7, 3, 1).unwrap(), rat(-4, 7));
        assert_eq!(a_term(7, 3, 2).unwrap(), rat(-2, 7));
        assert_eq!(a_term(7, 3, 9).unwrap(), rat(-2, 7));
        assert!(a_term(6, 3, 1).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(1, 5).unwrap(), 1);
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(-4, 7).unwrap(), 5);
        assert!(matches!(mod_inverse(2, 4), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(-4, 2)), "-2");
        assert_eq!(parse_rational(" 7/2 ").unwrap(), rat(7, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
