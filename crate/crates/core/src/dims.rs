//! Dimension counting for graded pieces of a discrepancy `a/2` contraction
//! with `J = {(r1,1),(r2,1)}`: lattice-point counts, the floor-sum
//! recursion and the Riemann-Roch value, compared on a grid.
//!
//! Half-integers `i` enter as rationals with denominator 1 or 2 and are
//! handled internally as `2i`.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rational, int, rat, to_i64, Rational};
use crate::error::{Error, Result};
use crate::rr::{BasketEntry, ContractionProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimParams {
    pub a: i64,
    pub r1: i64,
    pub r2: i64,
    pub b1: i64,
    pub b2: i64,
}

/// Why `(a, r1, r2)` falls outside the two admissible families.
pub fn admissibility_issue(a: i64, r1: i64, r2: i64) -> Option<String> {
    if a < 2 || !(a < r1 && r1 < r2) {
        return Some(format!("need 2 <= a < r1 < r2, got ({a}, {r1}, {r2})"));
    }
    if (a + r1) % 2 != 0 {
        return Some("a and r1 must have the same parity".into());
    }
    match r2 - r1 {
        2 if a % 2 == 1 && (2 * r1 + 2) % a == 0 => {}
        2 => return Some(format!("r2 = r1 + 2 needs a odd dividing 2 r1 + 2 = {}", 2 * r1 + 2)),
        4 if (r1 + 2) % a == 0 => {}
        4 => return Some(format!("r2 = r1 + 4 needs a dividing r1 + 2 = {}", r1 + 2)),
        _ => return Some("r2 - r1 must be 2 or 4".into()),
    }
    for r in [r1, r2] {
        let b = ((a + r) / 2).rem_euclid(r);
        if b.gcd(&r) != 1 {
            return Some(format!("b = {b} is not a unit modulo {r}"));
        }
    }
    None
}

impl DimParams {
    pub fn new(a: i64, r1: i64, r2: i64) -> Result<Self> {
        if let Some(issue) = admissibility_issue(a, r1, r2) {
            return Err(Error::Precondition(issue));
        }
        Ok(Self::unchecked(a, r1, r2))
    }

    /// Skips the admissibility conditions; `b_k = (a + r_k)/2 mod r_k` when `a + r_k` is even.
    pub fn unchecked(a: i64, r1: i64, r2: i64) -> Self {
        let b = |r: i64| Integer::div_floor(&(a + r), &2).rem_euclid(r.max(1));
        DimParams { a, r1, r2, b1: b(r1), b2: b(r2) }
    }

    pub fn with_b(self, b1: i64, b2: i64) -> Self {
        DimParams { b1, b2, ..self }
    }

    pub fn k(&self) -> i64 {
        self.r2 - self.r1
    }

    pub fn is_admissible(&self) -> bool {
        admissibility_issue(self.a, self.r1, self.r2).is_none()
            && self.b1 == ((self.a + self.r1) / 2).rem_euclid(self.r1)
            && self.b2 == ((self.a + self.r2) / 2).rem_euclid(self.r2)
    }

    /// Basket `{(r1,b1,v1,e1),(r2,b2,v2,e2)}` with `E^3 = (2/a)(1/r1 + 1/r2)`.
    pub fn profile(&self) -> Result<ContractionProfile> {
        let entry = |r: i64, b: i64| -> Result<BasketEntry> {
            let e = local_e(r, b, self.a, 2)?;
            BasketEntry::normalized(r, b, e)
        };
        let basket = vec![entry(self.r1, self.b1)?, entry(self.r2, self.b2)?];
        let e3 = rat(2, self.a) * (rat(1, self.r1) + rat(1, self.r2));
        ContractionProfile::new(self.a, 2, basket, e3)
    }
}

/// Solution `e` of `n = a e (mod r)` with `e b = 1 (mod r)` when there is one, otherwise the smallest.
pub fn local_e(r: i64, b: i64, a: i64, n: i64) -> Result<i64> {
    let solutions: Vec<i64> = (1..=r).filter(|e| (n - a * e).rem_euclid(r) == 0).collect();
    solutions
        .iter()
        .copied()
        .find(|e| (e * b).rem_euclid(r) == 1)
        .or_else(|| solutions.first().copied())
        .ok_or_else(|| Error::InconsistentLocalData(format!("no e with {n} = {a} e (mod {r})")))
}

/// `2i` for a half-integer `i`.
pub fn doubled(i: &Rational) -> Result<i64> {
    to_i64(&(i * int(2))).ok_or_else(|| Error::Domain(format!("{} is not a half-integer", format_rational(i))))
}

fn count_doubled(weights: [i64; 3], i2: i64, j: Option<i64>, exclusive: bool) -> u64 {
    if i2 < 0 {
        return 0;
    }
    let [w1, w2, w3] = weights;
    let mut count = 0;
    for l1 in 0..=i2 / w1 {
        let rem1 = i2 - w1 * l1;
        let l2_max = if exclusive && l1 > 0 { 0 } else { rem1 / w2 };
        for l2 in 0..=l2_max {
            let rem2 = rem1 - w2 * l2;
            for l3 in 0..=rem2 / w3 {
                let rest = rem2 - w3 * l3;
                if rest % 2 == 0 && j.is_none_or(|j| (l1 + l2 + l3) % 2 == j) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `#N_k^{[j]}(i)`: `l` in `Z_{>=0}^4` with `(r1+k)/2 l1 + r1/2 l2 + a/2 l3 + l4 = i`, `l1 l2 = 0` and `l1+l2+l3 = j mod 2`.
pub fn count_n(params: &DimParams, k: i64, i: &Rational, j: i64) -> Result<u64> {
    Ok(count_n_doubled(params, k, doubled(i)?, j))
}

pub fn count_n_doubled(params: &DimParams, k: i64, i2: i64, j: i64) -> u64 {
    count_doubled([params.r1 + k, params.r1, params.a], i2, Some(j), true)
}

/// `#N_k(i)` summed over both parities.
pub fn count_n_total_doubled(params: &DimParams, k: i64, i2: i64) -> u64 {
    count_doubled([params.r1 + k, params.r1, params.a], i2, None, true)
}

/// `#{l : (r1/2+1) l1 + r1/2 l2 + a/2 l3 + l4 = i}` with no support or parity condition.
pub fn count_n_tilde2_doubled(params: &DimParams, i2: i64) -> u64 {
    count_doubled([params.r1 + 2, params.r1, params.a], i2, None, false)
}

/// Descending recursion `dim^{[j]}(i) = dim^{[1-j]}(i - a/2) + 1 - j + sum_k floor(i/r_k + j/2)`.
pub fn dim_recursion(params: &DimParams, i: &Rational, j: i64) -> Result<u64> {
    Ok(dim_recursion_doubled(params, doubled(i)?, j))
}

pub fn dim_recursion_doubled(params: &DimParams, mut i2: i64, mut j: i64) -> u64 {
    let mut total: i64 = 0;
    loop {
        if i2 < 0 || (i2 + j * params.a) % 2 != 0 {
            break;
        }
        total += step(params, i2, j);
        i2 -= params.a;
        j = 1 - j;
    }
    total as u64
}

/// `1 - j + sum_k floor(i/r_k + j/2)`.
pub fn step(params: &DimParams, i2: i64, j: i64) -> i64 {
    1 - j + [params.r1, params.r2].iter().map(|&r| Integer::div_floor(&(i2 + j * r), &(2 * r))).sum::<i64>()
}

/// `d(j, -i - j a/2)` of the profile.
pub fn dim_rr(params: &DimParams, i: &Rational, j: i64) -> Result<Rational> {
    dim_rr_with(&params.profile()?, params.a, doubled(i)?, j)
}

fn dim_rr_with(profile: &ContractionProfile, a: i64, i2: i64, j: i64) -> Result<Rational> {
    let shifted = i2 + j * a;
    if shifted % 2 != 0 {
        return Err(Error::Domain(format!("i + j a/2 is not an integer for 2i = {i2}, j = {j}")));
    }
    Ok(profile.d(j, -shifted / 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimMismatch {
    pub i: String,
    pub j: i64,
    pub count: u64,
    pub recursion: u64,
    pub riemann_roch: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaDimReport {
    pub params: DimParams,
    pub admissible: bool,
    pub points: usize,
    pub holds: bool,
    pub counterexample: Option<DimMismatch>,
}

/// Compares the three sides for every `i` in `[-a/2, i_max]` with `i + j a/2` integral.
pub fn check_lemma_dim(params: &DimParams, i_max: &Rational) -> Result<LemmaDimReport> {
    let top = to_i64(&(i_max * int(2)).floor()).ok_or_else(|| Error::Domain("i_max out of range".into()))?;
    let mut report = LemmaDimReport {
        params: *params,
        admissible: params.is_admissible(),
        points: 0,
        holds: true,
        counterexample: None,
    };
    let profile = params.profile().ok();
    let k = params.k();
    for i2 in -params.a..=top {
        for j in 0..2 {
            if (i2 + j * params.a) % 2 != 0 {
                continue;
            }
            report.points += 1;
            let count = count_n_doubled(params, k, i2, j);
            let recursion = dim_recursion_doubled(params, i2, j);
            let rr = match &profile {
                Some(p) => Some(dim_rr_with(p, params.a, i2, j)?),
                None => None,
            };
            if rr.as_ref() != Some(&int(count as i64)) || count != recursion {
                report.holds = false;
                report.counterexample = Some(DimMismatch {
                    i: format_rational(&rat(i2, 2)),
                    j,
                    count,
                    recursion,
                    riemann_roch: rr.map_or_else(|| "undefined".to_string(), |v| format_rational(&v)),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Every admissible `(a, r1, r2)` with `r2 <= r2_max`.
pub fn admissible_params(r2_max: i64) -> Vec<DimParams> {
    let mut out = Vec::new();
    for r1 in 3..r2_max {
        for r2 in [r1 + 2, r1 + 4] {
            if r2 > r2_max {
                continue;
            }
            for a in 2..r1 {
                if let Ok(p) = DimParams::new(a, r1, r2) {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn check_all(r2_max: i64, i_max: &Rational) -> Result<Vec<LemmaDimReport>> {
    admissible_params(r2_max).par_iter().map(|p| check_lemma_dim(p, i_max)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(i2: i64) -> Rational {
        rat(i2, 2)
    }

    #[test]
    fn counts() {
        let p = DimParams::new(3, 5, 7).unwrap();
        assert_eq!(count_n(&p, 2, &int(1), 0).unwrap(), 1);
        assert_eq!(count_n(&p, 2, &int(0), 0).unwrap(), 1);
        assert_eq!(count_n(&p, 2, &int(-1), 0).unwrap(), 0);
        assert_eq!(count_n(&p, 2, &half(3), 1).unwrap(), 1);
        assert!(count_n(&p, 2, &rat(1, 3), 0).is_err());
    }

    #[test]
    fn recursion_values() {
        let p = DimParams::new(3, 5, 7).unwrap();
        assert_eq!(dim_recursion(&p, &int(1), 0).unwrap(), 1);
        assert_eq!(dim_recursion(&p, &half(3), 1).unwrap(), 1);
        assert_eq!(dim_recursion(&p, &half(1), 1).unwrap(), 0);
        assert_eq!(dim_rr(&p, &int(0), 0).unwrap(), int(1));
        assert_eq!(dim_rr(&p, &int(1), 0).unwrap(), int(1));
    }

    #[test]
    fn admissibility() {
        assert!(DimParams::new(3, 5, 7).is_ok());
        assert!(DimParams::new(3, 7, 11).is_ok());
        assert!(DimParams::new(3, 5, 9).is_err());
        assert!(DimParams::new(2, 5, 7).is_err());
        assert!(admissible_params(41).iter().all(DimParams::is_admissible));
    }

    #[test]
    fn lemma_small_cases() {
        for (a, r1, r2) in [(3, 5, 7), (3, 7, 11)] {
            let p = DimParams::new(a, r1, r2).unwrap();
            let report = check_lemma_dim(&p, &int(40)).unwrap();
            assert!(report.holds, "{report:?}");
        }
    }

    #[test]
    fn wrong_b2_fails() {
        let p = DimParams::new(3, 5, 7).unwrap();
        let bad = p.with_b(p.b1, p.b2 + 1);
        let report = check_lemma_dim(&bad, &int(40)).unwrap();
        assert!(!report.holds);
        assert!(report.counterexample.is_some());
    }
}

#[cfg(test)]
mod identities {
    use super::*;

    #[test]
    fn step_identity() {
        for p in admissible_params(41) {
            for i2 in 0..=120 {
                for j in 0..2 {
                    if (i2 + j * p.a) % 2 != 0 {
                        continue;
                    }
                    let lhs = count_n_doubled(&p, p.k(), i2, j) as i64 - count_n_doubled(&p, p.k(), i2 - p.a, 1 - j) as i64;
                    assert_eq!(lhs, step(&p, i2, j), "{p:?} 2i={i2} j={j}");
                }
            }
        }
    }

    #[test]
    fn tilde_identity() {
        for p in admissible_params(41).into_iter().filter(|p| p.k() == 4) {
            for i2 in 0..p.r1 + p.r2 {
                let lhs = count_n_total_doubled(&p, 4, i2) as i64;
                let rhs = count_n_tilde2_doubled(&p, i2) as i64 + count_n_tilde2_doubled(&p, i2 - p.r2) as i64
                    - count_n_tilde2_doubled(&p, i2 + 2 - p.r2) as i64;
                assert_eq!(lhs, rhs, "{p:?} 2i={i2}");
            }
        }
    }
}
