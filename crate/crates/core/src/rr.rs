//! Baskets of fictitious singularities and the singular Riemann-Roch
//! evaluator `d(i, j)`.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{a_raw, b_raw, format_rational, int, parse_rational, rat, Rational};
use crate::error::{Error, Result};

/// A point of type `1/r(1,-1,b)` with `E ~ e K_Y` locally and `v = res(e b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasketEntry {
    pub r: i64,
    pub b: i64,
    pub v: i64,
    pub e: i64,
}

impl BasketEntry {
    /// Checked constructor; `b` must already be normalized so that `res(e b) = v <= r/2`.
    pub fn new(r: i64, b: i64, v: i64, e: i64) -> Result<Self> {
        if r < 2 {
            return Err(Error::Domain(format!("local index must be at least 2, got {r}")));
        }
        if b < 1 || b >= r || b.gcd(&r) != 1 {
            return Err(Error::Domain(format!("b = {b} must lie in [1, {r}) and be coprime to {r}")));
        }
        if e < 1 || e > r {
            return Err(Error::Domain(format!("e = {e} must lie in [1, {r}]")));
        }
        let res = (e * b).rem_euclid(r);
        if res != v || 2 * v > r {
            return Err(Error::Domain(format!(
                "entry (r={r}, b={b}, v={v}, e={e}) is not normalized: res(e b) = {res}"
            )));
        }
        Ok(BasketEntry { r, b, v, e })
    }

    /// Builds the entry from `(r, b, e)`, replacing `b` by `r - b` when needed.
    pub fn normalized(r: i64, b: i64, e: i64) -> Result<Self> {
        if r < 2 || b.gcd(&r) != 1 {
            return Err(Error::Domain(format!("b = {b} is not coprime to r = {r}")));
        }
        let e = if e.rem_euclid(r) == 0 { r } else { e.rem_euclid(r) };
        let mut b = b.rem_euclid(r);
        let mut v = (e * b).rem_euclid(r);
        if 2 * v > r {
            b = r - b;
            v = (e * b).rem_euclid(r);
        }
        BasketEntry::new(r, b, v, e)
    }

    pub fn rv(&self) -> (i64, i64) {
        (self.r, self.v)
    }

    pub fn a_at(&self, k: i64) -> Rational {
        a_raw(self.r, self.b, k)
    }

    pub fn b_at(&self, k: i64) -> Rational {
        b_raw(self.r, k)
    }
}

pub fn normalize_entry(entry: &BasketEntry) -> Result<BasketEntry> {
    BasketEntry::normalized(entry.r, entry.b, entry.e)
}

/// Smallest `e` in `[1, r]` with `n ≡ a e (mod r)`.
pub fn derive_e(r: i64, b: i64, a: i64, n: i64) -> Result<i64> {
    if r < 1 || b.gcd(&r) != 1 {
        return Err(Error::Domain(format!("b = {b} is not coprime to r = {r}")));
    }
    (1..=r)
        .find(|e| (n - a * e).rem_euclid(r) == 0)
        .ok_or_else(|| {
            Error::InconsistentLocalData(format!("no e with {n} ≡ {a}·e (mod {r})"))
        })
}

/// Basket data of a divisorial contraction with discrepancy `a/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionProfile {
    pub a: i64,
    pub n: i64,
    pub basket: Vec<BasketEntry>,
    pub e_cubed: Rational,
    pub e_c2: Rational,
}

impl ContractionProfile {
    /// Validates the local data and fixes the `E.c2` term by `d(0,0) = 1`.
    pub fn new(a: i64, n: i64, basket: Vec<BasketEntry>, e_cubed: Rational) -> Result<Self> {
        if a < 1 || n < 1 {
            return Err(Error::Domain(format!("a = {a} and n = {n} must be positive")));
        }
        if e_cubed <= Rational::zero() {
            return Err(Error::Domain("E^3 must be positive".into()));
        }
        for entry in &basket {
            BasketEntry::new(entry.r, entry.b, entry.v, entry.e)?;
            if (n - a * entry.e).rem_euclid(entry.r) != 0 {
                return Err(Error::InconsistentLocalData(format!(
                    "entry (r={}, b={}, v={}, e={}) violates n ≡ a e (mod r) for a={a}, n={n}",
                    entry.r, entry.b, entry.v, entry.e
                )));
            }
        }
        let mut profile = ContractionProfile { a, n, basket, e_cubed, e_c2: Rational::zero() };
        profile.e_c2 = Rational::one() - profile.d(0, 0);
        Ok(profile)
    }

    pub fn ratio(&self) -> Rational {
        rat(self.a, self.n)
    }

    /// `(a/n) E^3`.
    pub fn scaled_e3(&self) -> Rational {
        self.ratio() * &self.e_cubed
    }

    pub fn contribution_a(&self, i: i64, j: i64) -> Rational {
        self.basket.iter().map(|q| q.a_at(i + j * q.e)).sum()
    }

    pub fn contribution_b(&self, i: i64, j: i64) -> Rational {
        self.basket.iter().map(|q| q.b_at(i * q.b + j * q.v)).sum()
    }

    pub fn d(&self, i: i64, j: i64) -> Rational {
        let q = self.ratio();
        let x = &q * int(i) + int(j);
        let one = Rational::one();
        let poly = int(6) * &x * &x - int(6) * (&q + &one) * &x + (&q + &one) * (&q + int(2));
        poly * &self.e_cubed / int(12) + &self.e_c2 + self.contribution_a(i, j)
            - self.contribution_a(i, j - 1)
    }

    /// Right-hand side of the difference formula for `d(i+1, j) - d(i, j)`.
    pub fn d_difference(&self, i: i64, j: i64) -> Rational {
        let q = self.ratio();
        let x = &q * int(i) + int(j) - rat(1, 2);
        x * self.scaled_e3() + self.contribution_b(i, j) - self.contribution_b(i, j - 1)
    }

    pub fn to_input(&self) -> ProfileInput {
        ProfileInput {
            a: self.a,
            n: self.n,
            e3: format_rational(&self.e_cubed),
            basket: self.basket.clone(),
        }
    }
}

/// Serialized form of a profile; `E.c2` is derived, never read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileInput {
    pub a: i64,
    pub n: i64,
    #[serde(rename = "E3")]
    pub e3: String,
    pub basket: Vec<BasketEntry>,
}

impl ProfileInput {
    pub fn into_profile(self) -> Result<ContractionProfile> {
        let e3 = parse_rational(&self.e3)?;
        ContractionProfile::new(self.a, self.n, self.basket, e3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(r: i64, b: i64, v: i64, e: i64) -> BasketEntry {
        BasketEntry::new(r, b, v, e).unwrap()
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive_e(5, 2, 1, 1).unwrap(), 1);
        assert_eq!(derive_e(7, 5, 3, 2).unwrap(), 3);
        assert_eq!(derive_e(6, 5, 3, 3).unwrap(), 1);
        assert!(matches!(derive_e(6, 5, 2, 3), Err(Error::InconsistentLocalData(_))));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(BasketEntry::normalized(4, 3, 2).unwrap(), entry(4, 3, 2, 2));
        assert_eq!(BasketEntry::normalized(7, 5, 1).unwrap(), entry(7, 2, 2, 1));
        assert_eq!(BasketEntry::normalized(2, 1, 1).unwrap(), entry(2, 1, 1, 1));
        assert!(BasketEntry::new(7, 5, 5, 1).is_err());
    }

    #[test]
    fn contributions() {
        let p = ContractionProfile::new(1, 2, vec![entry(4, 1, 2, 2)], rat(1, 4)).unwrap();
        assert_eq!(p.contribution_a(0, 0), int(0));
        assert_eq!(p.contribution_a(1, 0), rat(-5, 16));
        let p = ContractionProfile::new(2, 4, vec![entry(4, 1, 2, 2), entry(2, 1, 1, 1)], rat(1, 4))
            .unwrap();
        assert_eq!(p.contribution_a(1, 0), rat(-7, 16));
        let p = ContractionProfile::new(3, 3, vec![entry(6, 5, 3, 3)], rat(1, 2)).unwrap();
        assert_eq!(p.contribution_b(0, -1), rat(3, 4));
        assert_eq!(p.d_difference(0, 0), int(-1));
        let p = ContractionProfile::new(1, 1, vec![entry(2, 1, 1, 1)], int(3)).unwrap();
        assert_eq!(p.contribution_b(1, 1), int(0));
    }

    #[test]
    fn normalization_and_vanishing() {
        let p = ContractionProfile::new(1, 1, vec![], int(2)).unwrap();
        assert_eq!(p.d(0, 0), int(1));
        assert_eq!(p.d(1, 0), int(0));
        let r = 5;
        let p = ContractionProfile::new(1, 1, vec![entry(r, 1, 1, 1)], rat(r + 1, r)).unwrap();
        assert_eq!(p.d(1, 0), int(0));
        assert_eq!(p.d_difference(0, 0), int(-1));
    }

    #[test]
    fn no8_profile() {
        let p = ContractionProfile::new(2, 2, vec![entry(6, 5, 2, 4), entry(2, 1, 1, 1)], rat(1, 6))
            .unwrap();
        assert_eq!(p.d(0, -1), int(0));
        assert_eq!(p.d(0, -2), int(1));
        assert_eq!(p.d(2, -2), p.d(0, 0));
    }

    #[test]
    fn rejects_inconsistent_entry() {
        let err = ContractionProfile::new(2, 3, vec![entry(4, 1, 2, 2)], int(1)).unwrap_err();
        assert!(matches!(err, Error::InconsistentLocalData(_)));
    }

    #[test]
    fn json_roundtrip() {
        let p = ContractionProfile::new(2, 2, vec![entry(6, 5, 2, 4), entry(2, 1, 1, 1)], rat(1, 6))
            .unwrap();
        let text = serde_json::to_string(&p.to_input()).unwrap();
        let back: ProfileInput = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_profile().unwrap(), p);
    }
}
