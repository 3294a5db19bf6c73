//! Cyclic covers of baskets when `gcd(a, n) > 1`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{a_raw, b_raw, int, is_integer, lcm_all, Rational};
use crate::classification::{classify, integrality_filter, table3, BasketPattern, BasketShape};
use crate::error::{Error, Result};
use crate::rr::{BasketEntry, ContractionProfile};

/// `d = res(n/p - e a/p, r)`.
pub fn d_cover(entry: &BasketEntry, a: i64, n: i64, p: i64) -> Result<i64> {
    if p < 1 || a % p != 0 || n % p != 0 {
        return Err(Error::Domain(format!("{p} does not divide gcd({a}, {n})")));
    }
    Ok((n / p - entry.e * (a / p)).rem_euclid(entry.r))
}

/// Whether `p d ≡ 0 (mod r)`.
pub fn cover_consistent(entry: &BasketEntry, a: i64, n: i64, p: i64) -> Result<bool> {
    let d = d_cover(entry, a, n, p)?;
    Ok((p * d) % entry.r == 0)
}

/// `(r, v)` with `v` replaced by `min(res(v), r - res(v))`; `None` when the point disappears.
pub fn reduce_rv(r: i64, v: i64) -> Option<(i64, i64)> {
    if r < 2 {
        return None;
    }
    let res = v.rem_euclid(r);
    let v = res.min(r - res);
    (v != 0).then_some((r, v))
}

/// Points above one basket point under a degree-`p` cover.
pub fn variation(r: i64, v: i64, p: i64, ramified: bool) -> Result<Vec<(i64, i64)>> {
    if !ramified {
        return Ok(vec![(r, v); p as usize]);
    }
    if r % p != 0 {
        return Err(Error::Domain(format!("ramified cover of degree {p} needs {p} | {r}")));
    }
    Ok(reduce_rv(r / p, v).into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCandidate {
    pub source_no: u8,
    pub source_params: Vec<i64>,
    pub source: BasketShape,
    pub p: i64,
    pub ramified: Vec<(i64, i64)>,
    pub target: BasketShape,
    pub required_value: Rational,
    pub target_row: Option<(u8, Vec<i64>)>,
}

impl CoverCandidate {
    pub fn accepted(&self) -> bool {
        self.target_row.is_some() && self.target.value() == self.required_value
    }
}

/// Accepted transformation of a table basket by a prime cover.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverStep {
    pub source_no: u8,
    pub source_params: Vec<i64>,
    pub source: BasketShape,
    pub p: i64,
    pub ramified: Vec<(i64, i64)>,
    pub target: BasketShape,
    pub target_no: u8,
    pub target_params: Vec<i64>,
}

/// Every ramification assignment of `source` under a degree-`p` cover.
pub fn cover_candidates(source_no: u8, params: &[i64], source: &BasketShape, p: i64) -> Vec<CoverCandidate> {
    let entries = source.entries();
    let mut out = Vec::new();
    for mask in 0u32..(1 << entries.len()) {
        let mut target = Vec::new();
        let mut ramified = Vec::new();
        let mut ok = true;
        for (k, &(r, v)) in entries.iter().enumerate() {
            let ram = mask & (1 << k) != 0;
            match variation(r, v, p, ram) {
                Ok(pts) => target.extend(pts),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
            if ram {
                ramified.push((r, v));
            }
        }
        if !ok {
            continue;
        }
        let target = BasketShape::new(target);
        let required_value = int(p) * source.value();
        let target_row = classify(&target).ok();
        out.push(CoverCandidate {
            source_no,
            source_params: params.to_vec(),
            source: source.clone(),
            p,
            ramified,
            target,
            required_value,
            target_row,
        });
    }
    out
}

pub fn primes_up_to(limit: i64) -> Vec<i64> {
    (2..=limit).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// All concrete instances of table rows with indices at most `r_max`.
pub fn row_instances(row: &BasketPattern, r_max: i64) -> Vec<Vec<i64>> {
    match row.param_names.len() {
        0 => vec![vec![]],
        1 => (row.min_param..=r_max).map(|r| vec![r]).collect(),
        _ => (row.min_param..=r_max)
            .flat_map(|r1| (r1..=r_max).map(move |r2| vec![r1, r2]))
            .collect(),
    }
}

/// Accepted prime covers of every table instance, one step per distinct target.
pub fn enumerate_prime_covers(r_max: i64) -> Vec<CoverStep> {
    let primes = primes_up_to(r_max.max(2));
    let jobs: Vec<(BasketPattern, Vec<i64>)> = table3()
        .into_iter()
        .flat_map(|row| {
            row_instances(&row, r_max).into_iter().map(move |params| (row.clone(), params))
        })
        .collect();
    let mut steps: Vec<CoverStep> = jobs
        .par_iter()
        .flat_map_iter(|(row, params)| {
            let source = row.instantiate(params).expect("instances are admissible");
            let mut local: Vec<CoverStep> = Vec::new();
            for &p in &primes {
                for cand in cover_candidates(row.type_no, params, &source, p) {
                    if !cand.accepted() {
                        continue;
                    }
                    if local.iter().any(|s| s.p == p && s.target == cand.target) {
                        continue;
                    }
                    let (target_no, target_params) = cand.target_row.clone().unwrap();
                    local.push(CoverStep {
                        source_no: row.type_no,
                        source_params: params.clone(),
                        source: source.clone(),
                        p,
                        ramified: cand.ramified,
                        target: cand.target,
                        target_no,
                        target_params,
                    });
                }
            }
            local.into_iter()
        })
        .collect();
    steps.sort();
    steps
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexExpr {
    Fixed(i64),
    R,
    RHalf,
    RDivP,
    R1DivP,
    R2DivP,
}

/// One transcribed row of the prime-cover table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table4Row {
    pub source_no: u8,
    /// `None` stands for an arbitrary prime.
    pub p: Option<i64>,
    pub target: Vec<(IndexExpr, i64)>,
}

pub fn table4() -> Vec<Table4Row> {
    use IndexExpr::*;
    let row = |source_no, p, target: Vec<(IndexExpr, i64)>| Table4Row { source_no, p, target };
    vec![
        row(1, Some(3), vec![(Fixed(2), 1)]),
        row(2, Some(7), vec![]),
        row(4, Some(2), vec![(R, 1), (R, 1)]),
        row(8, Some(2), vec![(Fixed(3), 1), (Fixed(2), 1), (Fixed(2), 1)]),
        row(8, Some(3), vec![(Fixed(2), 1), (Fixed(2), 1), (Fixed(2), 1)]),
        row(10, Some(2), vec![(Fixed(2), 1), (Fixed(2), 1), (RHalf, 1)]),
        row(10, Some(2), vec![(R, 1), (R, 1)]),
        row(11, Some(3), vec![(Fixed(2), 1), (Fixed(2), 1), (Fixed(2), 1)]),
        row(12, Some(2), vec![(Fixed(3), 1), (Fixed(3), 1), (Fixed(2), 1)]),
        row(14, None, vec![(RDivP, 2)]),
        row(15, None, vec![(R1DivP, 1), (R2DivP, 1)]),
    ]
}

impl Table4Row {
    /// Target basket for concrete parameters, or `None` if the row does not apply.
    pub fn apply(&self, params: &[i64], p: i64) -> Option<BasketShape> {
        if self.p.is_some_and(|q| q != p) {
            return None;
        }
        let exact = |num: i64, den: i64| (num % den == 0).then(|| num / den);
        let mut out = Vec::new();
        for &(expr, v) in &self.target {
            let r = match expr {
                IndexExpr::Fixed(r) => r,
                IndexExpr::R => params[0],
                IndexExpr::RHalf => exact(params[0], 2)?,
                IndexExpr::RDivP => {
                    let r = exact(params[0], p)?;
                    if r < 2 {
                        return None;
                    }
                    r
                }
                IndexExpr::R1DivP => exact(params[0], p)?,
                IndexExpr::R2DivP => exact(params[1], p)?,
            };
            out.extend(reduce_rv(r, v));
        }
        Some(BasketShape::new(out))
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .target
            .iter()
            .map(|&(expr, v)| {
                let r = match expr {
                    IndexExpr::Fixed(r) => r.to_string(),
                    IndexExpr::R => "r".into(),
                    IndexExpr::RHalf => "r/2".into(),
                    IndexExpr::RDivP => "r/p".into(),
                    IndexExpr::R1DivP => "r1/p".into(),
                    IndexExpr::R2DivP => "r2/p".into(),
                };
                format!("({r},{v})")
            })
            .collect();
        let mut text = if parts.is_empty() { "{}".to_string() } else { parts.join(", ") };
        if self.source_no == 14 {
            text.push_str(", r/p >= 2");
        }
        text
    }
}

/// `(source_no, params, p, target)` predicted by the transcribed table.
pub fn table4_instances(r_max: i64) -> BTreeSet<(u8, Vec<i64>, i64, BasketShape)> {
    let rows = table4();
    let primes = primes_up_to(r_max.max(2));
    let mut out = BTreeSet::new();
    for pattern in table3() {
        for params in row_instances(&pattern, r_max) {
            for row in rows.iter().filter(|row| row.source_no == pattern.type_no) {
                for &p in &primes {
                    if let Some(target) = row.apply(&params, p) {
                        out.insert((pattern.type_no, params.clone(), p, target));
                    }
                }
            }
        }
    }
    out
}

pub fn render_table4() -> String {
    let mut out = String::from("No | J | p | J'\n");
    for row in table4() {
        let source = table3()
            .into_iter()
            .find(|r| r.type_no == row.source_no)
            .expect("row exists");
        let p = row.p.map_or("p".to_string(), |p| p.to_string());
        out.push_str(&format!("{} | {} | {} | {}\n", row.source_no, source.label(), p, row.label()));
    }
    out
}

/// Pulls a profile back along the cyclic cover of degree `g`.
pub fn cover_profile(profile: &ContractionProfile, g: i64) -> Result<ContractionProfile> {
    let (a, n) = (profile.a, profile.n);
    if g < 2 || a % g != 0 || n % g != 0 {
        return Err(Error::Precondition(format!("{g} must be at least 2 and divide gcd({a}, {n})")));
    }
    let mut basket = Vec::new();
    for q in &profile.basket {
        let d = d_cover(q, a, n, g)?;
        let order = q.r / q.r.gcd(&d);
        if g % order != 0 {
            return Err(Error::InconsistentLocalData(format!(
                "{g}·{d} is not divisible by {} for entry of index {}",
                q.r, q.r
            )));
        }
        let r = q.r / order;
        if r < 2 {
            continue;
        }
        let entry = BasketEntry::normalized(r, q.b, q.e)?;
        for _ in 0..g / order {
            basket.push(entry.clone());
        }
    }
    ContractionProfile::new(a / g, n / g, basket, &profile.e_cubed * int(g))
}

/// `-A(-e) - A(d) + A(d - e)` with `d = d_cover(entry, a, n, p)`.
pub fn c_term(entry: &BasketEntry, a: i64, n: i64, p: i64) -> Result<Rational> {
    Ok(c_term_at(entry, d_cover(entry, a, n, p)?))
}

/// The same term for a prescribed `d`.
pub fn c_term_at(entry: &BasketEntry, d: i64) -> Rational {
    let (r, b, e) = (entry.r, entry.b, entry.e);
    -a_raw(r, b, -e) - a_raw(r, b, d) + a_raw(r, b, d - e)
}

/// `sum B(d b) - B(d b - v) + B(-v)` over the basket, with `d` taken for degree `g`.
pub fn eq16_lhs(profile: &ContractionProfile, g: i64) -> Result<Rational> {
    if g < 2 || profile.a % g != 0 || profile.n % g != 0 {
        return Err(Error::Precondition(format!(
            "{g} must be at least 2 and divide gcd({}, {})",
            profile.a, profile.n
        )));
    }
    let mut sum = Rational::zero();
    for q in &profile.basket {
        let d = d_cover(q, profile.a, profile.n, g)?;
        sum += b_raw(q.r, d * q.b) - b_raw(q.r, d * q.b - q.v) + b_raw(q.r, -q.v);
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSets {
    pub pre: Vec<(i64, i64)>,
    pub post: Vec<(i64, i64)>,
}

const CANDIDATE_BOUND: i64 = 32;
const SAMPLE_R_MAX: i64 = 40;

/// Non-coprime `(a, n)` with `gcd = 2` allowed for the one-point rows 14 and 15.
pub fn coprime_candidates(type_no: u8) -> Result<CandidateSets> {
    let copies = match type_no {
        14 => 1,
        15 => 2,
        _ => return Err(Error::Domain(format!("row {type_no} has no candidate analysis"))),
    };
    let v = if type_no == 14 { 2 } else { 1 };
    let first_r = if type_no == 14 { 4 } else { 2 };
    let sample_rs: Vec<i64> = (first_r..=SAMPLE_R_MAX).step_by(2).collect();
    let shape_for = |r: i64| BasketShape::new(vec![(r, v); copies]);

    let mut pre = Vec::new();
    for ap in 1..=CANDIDATE_BOUND {
        for np in 1..=CANDIDATE_BOUND {
            if ap.gcd(&np) != 1 {
                continue;
            }
            let (a, n) = (2 * ap, 2 * np);
            let mut passes = true;
            for &r in &sample_rs {
                if !integrality_filter(&shape_for(r), a, n)? {
                    passes = false;
                    break;
                }
            }
            if passes {
                pre.push((a, n));
            }
        }
    }
    pre.sort();

    let post = pre
        .iter()
        .copied()
        .filter(|&(a, n)| sample_rs.iter().any(|&r| half_order_instance(r, v, copies, a, n)))
        .collect();
    Ok(CandidateSets { pre, post })
}

/// Whether some consistent profile with `d = r/2` at every point has `d(2,0) - d(1,0) ∈ Z`.
fn half_order_instance(r: i64, v: i64, copies: usize, a: i64, n: i64) -> bool {
    let locals: Vec<BasketEntry> = (1..=r)
        .filter(|e| (n - a * e).rem_euclid(r) == 0)
        .flat_map(|e| {
            (1..r)
                .filter(move |b| b.gcd(&r) == 1 && (e * b).rem_euclid(r) == v)
                .map(move |b| BasketEntry { r, b, v, e })
        })
        .filter(|q| (n / 2 - q.e * (a / 2)).rem_euclid(r) == r / 2)
        .collect();
    let value = BasketShape::new(vec![(r, v); copies]).value();
    let e3 = Rational::new(n.into(), a.into()) * value;
    let check = |basket: Vec<BasketEntry>| {
        ContractionProfile::new(a, n, basket, e3.clone())
            .map(|p| is_integer(&p.d_difference(1, 0)))
            .unwrap_or(false)
    };
    match copies {
        1 => locals.iter().any(|q| check(vec![q.clone()])),
        _ => locals
            .iter()
            .any(|q1| locals.iter().any(|q2| check(vec![q1.clone(), q2.clone()]))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DExpr {
    Const(i64),
    RHalf,
}

/// One transcribed row of the table of `d` values for degree-two covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table5Row {
    pub type_no: u8,
    pub p: i64,
    pub tuples: Vec<Vec<DExpr>>,
}

pub fn table5() -> Vec<Table5Row> {
    use DExpr::*;
    vec![
        Table5Row { type_no: 4, p: 2, tuples: vec![vec![Const(2), Const(0)]] },
        Table5Row { type_no: 8, p: 2, tuples: vec![vec![Const(3), Const(0)]] },
        Table5Row {
            type_no: 10,
            p: 2,
            tuples: vec![vec![Const(0), Const(1), RHalf], vec![Const(1), Const(1), Const(0)]],
        },
        Table5Row { type_no: 12, p: 2, tuples: vec![vec![Const(1), Const(0), Const(2)]] },
    ]
}

impl Table5Row {
    /// Source points in the row order of the table.
    pub fn points(&self, params: &[i64]) -> Vec<(i64, i64)> {
        let pattern = table3().into_iter().find(|r| r.type_no == self.type_no).expect("row exists");
        pattern
            .entries
            .iter()
            .map(|&(idx, v)| match idx {
                crate::classification::Index::Fixed(r) => (r, v),
                crate::classification::Index::Param(k) => (params[k], v),
            })
            .collect()
    }

    /// Printed tuples for concrete parameters; `r/2` entries apply only to even `r`.
    pub fn printed(&self, params: &[i64]) -> BTreeSet<Vec<i64>> {
        let points = self.points(params);
        self.tuples
            .iter()
            .filter(|t| !t.contains(&DExpr::RHalf) || params[0] % 2 == 0)
            .map(|t| {
                let d = t
                    .iter()
                    .map(|x| match x {
                        DExpr::Const(c) => *c,
                        DExpr::RHalf => params[0] / 2,
                    })
                    .collect();
                canonical_d(&points, d)
            })
            .collect()
    }
}

/// Sorts `d` values among points with equal `(r, v)`.
pub fn canonical_d(points: &[(i64, i64)], mut d: Vec<i64>) -> Vec<i64> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] && d[j] < d[i] {
                d.swap(i, j);
            }
        }
    }
    d
}

/// A consistent assignment of local data together with its cover invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverAssignment {
    pub a: i64,
    pub n: i64,
    pub entries: Vec<BasketEntry>,
    pub d: Vec<i64>,
}

/// All `(a, n, b, e)` choices over one period realizing `points` with `p | gcd(a, n)`,
/// kept when the ramification pattern `d_i != 0` gives an accepted cover.
pub fn cover_assignments(points: &[(i64, i64)], p: i64) -> Vec<CoverAssignment> {
    let period = lcm_all(points.iter().map(|&(r, _)| r));
    let source = BasketShape::new(points.to_vec());
    let mut out = Vec::new();
    for ap in 1..=period {
        for np in 1..=period {
            let (a, n) = (p * ap, p * np);
            let choices: Vec<Vec<BasketEntry>> = points
                .iter()
                .map(|&(r, v)| {
                    (1..=r)
                        .filter(|e| (n - a * e).rem_euclid(r) == 0)
                        .flat_map(|e| {
                            (1..r)
                                .filter(move |b| b.gcd(&r) == 1 && (e * b).rem_euclid(r) == v)
                                .map(move |b| BasketEntry { r, b, v, e })
                        })
                        .collect()
                })
                .collect();
            for entries in cartesian(&choices) {
                let d: Vec<i64> = entries.iter().map(|q| (np - q.e * ap).rem_euclid(q.r)).collect();
                if !pattern_accepted(&source, points, &d, p) {
                    continue;
                }
                out.push(CoverAssignment { a, n, entries, d });
            }
        }
    }
    out
}

/// Whether ramifying exactly the points with `d_i != 0` gives an accepted cover with `p d_i ≡ 0`.
pub fn pattern_accepted(source: &BasketShape, points: &[(i64, i64)], d: &[i64], p: i64) -> bool {
    let mut target = Vec::new();
    for (&(r, v), &di) in points.iter().zip(d) {
        if (p * di) % r != 0 {
            return false;
        }
        match variation(r, v, p, di != 0) {
            Ok(pts) => target.extend(pts),
            Err(_) => return false,
        }
    }
    let target = BasketShape::new(target);
    classify(&target).is_ok() && target.value() == int(p) * source.value()
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![vec![]], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x.clone());
                    next
                })
            })
            .collect()
    })
}

/// Distinct `d` tuples over all consistent assignments.
pub fn realizable_d_tuples(points: &[(i64, i64)], p: i64) -> BTreeSet<Vec<i64>> {
    cover_assignments(points, p)
        .into_iter()
        .map(|asg| canonical_d(points, asg.d))
        .collect()
}

/// `d` tuples allowed by the ramification pattern alone: `p d_i ≡ 0 (mod r_i)` and an accepted cover.
pub fn pattern_d_tuples(points: &[(i64, i64)], p: i64) -> BTreeSet<Vec<i64>> {
    let source = BasketShape::new(points.to_vec());
    let choices: Vec<Vec<i64>> = points
        .iter()
        .map(|&(r, _)| if r % p == 0 { (0..p).map(|k| k * r / p).collect() } else { vec![0] })
        .collect();
    cartesian(&choices)
        .into_iter()
        .filter(|d| pattern_accepted(&source, points, d, p))
        .map(|d| canonical_d(points, d))
        .collect()
}

pub fn render_table5() -> String {
    let mut out = String::from("No | p | points | d\n");
    for row in table5() {
        let pattern = table3().into_iter().find(|r| r.type_no == row.type_no).expect("row exists");
        let tuples: Vec<String> = row
            .tuples
            .iter()
            .map(|t| {
                let parts: Vec<String> = t
                    .iter()
                    .map(|x| match x {
                        DExpr::Const(c) => c.to_string(),
                        DExpr::RHalf => "r/2".into(),
                    })
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        out.push_str(&format!("{} | {} | {} | {}\n", row.type_no, row.p, pattern.label(), tuples.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn entry(r: i64, b: i64, v: i64, e: i64) -> BasketEntry {
        BasketEntry::new(r, b, v, e).unwrap()
    }

    #[test]
    fn variations() {
        assert_eq!(variation(6, 3, 3, true).unwrap(), vec![(2, 1)]);
        assert_eq!(variation(2, 1, 2, false).unwrap(), vec![(2, 1), (2, 1)]);
        assert_eq!(variation(15, 2, 3, true).unwrap(), vec![(5, 2)]);
        assert_eq!(variation(6, 2, 2, true).unwrap(), vec![(3, 1)]);
        assert_eq!(variation(4, 2, 2, true).unwrap(), vec![]);
        assert!(variation(7, 2, 2, true).is_err());
    }

    #[test]
    fn d_values() {
        let q1 = entry(4, 1, 2, 2);
        assert_eq!(d_cover(&q1, 2, 8, 2).unwrap(), 2);
        assert!(d_cover(&q1, 3, 8, 2).is_err());
        assert!(cover_consistent(&q1, 2, 8, 2).unwrap());
    }

    #[test]
    fn no1_with_p2_is_rejected() {
        let source = BasketShape::new(vec![(6, 3)]);
        let cands = cover_candidates(1, &[], &source, 2);
        assert!(!cands.is_empty());
        assert!(cands.iter().all(|c| !c.accepted()));
        let ram = cands.iter().find(|c| !c.ramified.is_empty()).unwrap();
        assert_eq!(ram.required_value, int(1));
        assert!(ram.target.is_empty());
    }

    #[test]
    fn small_enumeration_matches_transcription() {
        let steps = enumerate_prime_covers(12);
        let found: BTreeSet<_> = steps
            .iter()
            .map(|s| (s.source_no, s.source_params.clone(), s.p, s.target.clone()))
            .collect();
        assert_eq!(found, table4_instances(12));
    }

    #[test]
    fn c_terms() {
        assert_eq!(c_term(&entry(4, 1, 2, 2), 2, 8, 2).unwrap(), rat(1, 2));
        let q = entry(2, 1, 1, 1);
        assert_eq!(c_term(&q, 2, 2, 2).unwrap(), int(0));
        assert_eq!(c_term(&q, 2, 4, 2).unwrap(), rat(1, 4));
    }

    #[test]
    fn eq16_precondition() {
        let p = ContractionProfile::new(1, 2, vec![entry(4, 1, 2, 2)], rat(1, 2)).unwrap();
        assert!(matches!(eq16_lhs(&p, 2), Err(Error::Precondition(_))));
    }
}
