//! Baskets `J` solving the classification identity, the canonical
//! seventeen-row table, and the integrality filters on `(a, n)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{format_rational, int, is_integer, lcm_all, rat, Rational};
use crate::error::{Error, Result};
use crate::rr::{BasketEntry, ContractionProfile};

/// Multiset of `(r, v)` pairs, kept sorted by decreasing `v` then increasing `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasketShape(Vec<(i64, i64)>);

impl BasketShape {
    pub fn new(mut entries: Vec<(i64, i64)>) -> Self {
        entries.sort_by_key(|&(r, v)| (-v, r));
        BasketShape(entries)
    }

    pub fn empty() -> Self {
        BasketShape(Vec::new())
    }

    pub fn entries(&self) -> &[(i64, i64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum v(r - v) / 2r`.
    pub fn weight(&self) -> Rational {
        self.0.iter().map(|&(r, v)| rat(v * (r - v), 2 * r)).sum()
    }

    /// `(a/n) E^3 = 2(1 - weight)`.
    pub fn value(&self) -> Rational {
        int(2) * (Rational::one() - self.weight())
    }

    /// Multiset inclusion.
    pub fn contains(&self, other: &BasketShape) -> bool {
        let mut rest = self.0.clone();
        for item in &other.0 {
            match rest.iter().position(|x| x == item) {
                Some(pos) => {
                    rest.remove(pos);
                }
                None => return false,
            }
        }
        true
    }
}

impl From<&[BasketEntry]> for BasketShape {
    fn from(entries: &[BasketEntry]) -> Self {
        BasketShape::new(entries.iter().filter(|q| q.v != 0).map(BasketEntry::rv).collect())
    }
}

impl fmt::Display for BasketShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (r, v)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({r},{v})")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Fixed(i64),
    Param(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowValue {
    Const(i64, i64),
    InvR,
    FourOverR,
    SumInv,
    OnePlusInvR,
}

impl RowValue {
    pub fn eval(&self, params: &[i64]) -> Rational {
        match *self {
            RowValue::Const(p, q) => rat(p, q),
            RowValue::InvR => rat(1, params[0]),
            RowValue::FourOverR => rat(4, params[0]),
            RowValue::SumInv => rat(1, params[0]) + rat(1, params[1]),
            RowValue::OnePlusInvR => int(1) + rat(1, params[0]),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            RowValue::Const(p, q) => format_rational(&rat(p, q)),
            RowValue::InvR => "1/r".into(),
            RowValue::FourOverR => "4/r".into(),
            RowValue::SumInv => "1/r1+1/r2".into(),
            RowValue::OnePlusInvR => "1+1/r".into(),
        }
    }
}

/// One row of the classification table, possibly depending on `r` or `r1 <= r2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasketPattern {
    pub type_no: u8,
    pub entries: Vec<(Index, i64)>,
    pub param_names: Vec<&'static str>,
    pub min_param: i64,
    pub value: RowValue,
}

impl BasketPattern {
    pub fn is_parametric(&self) -> bool {
        !self.param_names.is_empty()
    }

    pub fn instantiate(&self, params: &[i64]) -> Result<BasketShape> {
        if params.len() != self.param_names.len() {
            return Err(Error::Domain(format!(
                "row {} takes {} parameters",
                self.type_no,
                self.param_names.len()
            )));
        }
        if !self.params_admissible(params) {
            return Err(Error::Domain(format!("parameters {params:?} not admissible for row {}", self.type_no)));
        }
        Ok(BasketShape::new(
            self.entries
                .iter()
                .map(|&(idx, v)| match idx {
                    Index::Fixed(r) => (r, v),
                    Index::Param(k) => (params[k], v),
                })
                .collect(),
        ))
    }

    fn params_admissible(&self, params: &[i64]) -> bool {
        params.iter().all(|&p| p >= self.min_param) && params.windows(2).all(|w| w[0] <= w[1])
    }

    /// Parameters under which `shape` instantiates this row.
    pub fn matches(&self, shape: &BasketShape) -> Option<Vec<i64>> {
        if shape.len() != self.entries.len() {
            return None;
        }
        let mut order: Vec<usize> = (0..shape.len()).collect();
        let mut found = None;
        permute(&mut order, 0, &mut |perm| {
            if found.is_some() {
                return;
            }
            let mut params = vec![None; self.param_names.len()];
            for (slot, &k) in perm.iter().enumerate() {
                let (r, v) = shape.0[k];
                let (idx, pv) = self.entries[slot];
                if v != pv {
                    return;
                }
                match idx {
                    Index::Fixed(fr) if fr != r => return,
                    Index::Fixed(_) => {}
                    Index::Param(p) => match params[p] {
                        Some(old) if old != r => return,
                        _ => params[p] = Some(r),
                    },
                }
            }
            let params: Vec<i64> = params.into_iter().map(|p| p.unwrap()).collect();
            if self.params_admissible(&params) {
                found = Some(params);
            }
        });
        found
    }

    pub fn label(&self) -> String {
        if self.entries.is_empty() {
            return "{}".into();
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|&(idx, v)| match idx {
                Index::Fixed(r) => format!("({r},{v})"),
                Index::Param(k) => format!("({},{v})", self.param_names[k]),
            })
            .collect();
        let mut text = parts.join(", ");
        if self.param_names.len() == 2 {
            text.push_str(", r1 <= r2");
        }
        text
    }
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

pub fn table3() -> Vec<BasketPattern> {
    use Index::{Fixed as F, Param as P};
    let row = |type_no, entries: Vec<(Index, i64)>, value| {
        let params = entries
            .iter()
            .filter_map(|&(idx, _)| match idx {
                P(k) => Some(k),
                F(_) => None,
            })
            .max()
            .map_or(0, |k| k + 1);
        let param_names = match params {
            0 => vec![],
            1 => vec!["r"],
            _ => vec!["r1", "r2"],
        };
        let min_param = if type_no == 14 { 4 } else { 2 };
        BasketPattern { type_no, entries, param_names, min_param, value }
    };
    vec![
        row(1, vec![(F(6), 3)], RowValue::Const(1, 2)),
        row(2, vec![(F(7), 3)], RowValue::Const(2, 7)),
        row(3, vec![(F(8), 3)], RowValue::Const(1, 8)),
        row(4, vec![(F(4), 2), (P(0), 1)], RowValue::InvR),
        row(5, vec![(F(5), 2), (F(2), 1)], RowValue::Const(3, 10)),
        row(6, vec![(F(5), 2), (F(3), 1)], RowValue::Const(2, 15)),
        row(7, vec![(F(5), 2), (F(4), 1)], RowValue::Const(1, 20)),
        row(8, vec![(F(6), 2), (F(2), 1)], RowValue::Const(1, 6)),
        row(9, vec![(F(7), 2), (F(2), 1)], RowValue::Const(1, 14)),
        row(10, vec![(F(2), 1), (F(2), 1), (P(0), 1)], RowValue::InvR),
        row(11, vec![(F(2), 1), (F(3), 1), (F(3), 1)], RowValue::Const(1, 6)),
        row(12, vec![(F(2), 1), (F(3), 1), (F(4), 1)], RowValue::Const(1, 12)),
        row(13, vec![(F(2), 1), (F(3), 1), (F(5), 1)], RowValue::Const(1, 30)),
        row(14, vec![(P(0), 2)], RowValue::FourOverR),
        row(15, vec![(P(0), 1), (P(1), 1)], RowValue::SumInv),
        row(16, vec![(P(0), 1)], RowValue::OnePlusInvR),
        row(17, vec![], RowValue::Const(2, 1)),
    ]
}

pub fn table3_row(type_no: u8) -> Result<BasketPattern> {
    table3()
        .into_iter()
        .find(|row| row.type_no == type_no)
        .ok_or_else(|| Error::Domain(format!("no row {type_no} in the classification table")))
}

/// Row number and parameters of the unique row instantiated by `shape`.
pub fn classify(shape: &BasketShape) -> Result<(u8, Vec<i64>)> {
    let mut hits = table3()
        .into_iter()
        .filter_map(|row| row.matches(shape).map(|params| (row.type_no, params)));
    match (hits.next(), hits.next()) {
        (Some(hit), None) => Ok(hit),
        (None, _) => Err(Error::NotClassified(shape.to_string())),
        (Some(_), Some(_)) => Err(Error::NotClassified(format!("{shape} matches several rows"))),
    }
}

pub fn match_type(shape: &BasketShape) -> Result<u8> {
    classify(shape).map(|(no, _)| no)
}

/// All `J` with indices in `[2, r_max]` and `weight(J) < 1`, paired with `(a/n) E^3`.
pub fn enumerate_baskets(r_max: i64) -> Vec<(BasketShape, Rational)> {
    let one = Rational::one();
    let pairs: Vec<((i64, i64), Rational)> = (2..=r_max)
        .flat_map(|r| (1..=r / 2).map(move |v| (r, v)))
        .map(|(r, v)| ((r, v), rat(v * (r - v), 2 * r)))
        .filter(|(_, w)| *w < one)
        .collect();
    let mut found: Vec<(BasketShape, Rational)> = (0..pairs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local = Vec::new();
            let (p, wp) = &pairs[i];
            local.push(vec![*p]);
            for j in i..pairs.len() {
                let (q, wq) = &pairs[j];
                let w2 = wp + wq;
                if w2 >= one {
                    continue;
                }
                local.push(vec![*p, *q]);
                for (s, ws) in &pairs[j..] {
                    if &w2 + ws < one {
                        local.push(vec![*p, *q, *s]);
                    }
                }
            }
            local.into_iter()
        })
        .map(|entries| {
            let shape = BasketShape::new(entries);
            let value = shape.value();
            (shape, value)
        })
        .collect();
    found.push((BasketShape::empty(), int(2)));
    found.sort();
    found.dedup();
    found
}

/// The conditions `R* E^3 ∈ Z` and `(a/n)^2 R E^3 ∈ Z`.
pub fn integrality_filter(shape: &BasketShape, a: i64, n: i64) -> Result<bool> {
    if a < 1 || n < 1 {
        return Err(Error::Domain("a and n must be positive".into()));
    }
    classify(shape)?;
    let e3 = rat(n, a) * shape.value();
    let big_r = lcm_all(shape.entries().iter().map(|&(r, _)| r));
    let big_r_star = lcm_all(shape.entries().iter().map(|&(r, v)| r / r.gcd(&v)));
    let ratio = rat(a, n);
    Ok(is_integer(&(int(big_r_star) * &e3)) && is_integer(&(&ratio * &ratio * int(big_r) * &e3)))
}

/// Whether `a n_m + n n_a = r` and `n_m + e n_a ≡ 0 (mod r)` have a positive solution.
pub fn min_discrepancy_feasible(a: i64, n: i64, r: i64, e: i64) -> bool {
    if a < 1 || n < 1 || r < 1 {
        return false;
    }
    (1..=r / a).any(|n_m| {
        let rest = r - a * n_m;
        rest > 0 && rest % n == 0 && (n_m + e * (rest / n)).rem_euclid(r) == 0
    })
}

/// A consistent profile realizing `shape`, found by search over small `(a, n)`.
pub fn instantiate_profile(shape: &BasketShape) -> Option<ContractionProfile> {
    let big_r = lcm_all(shape.entries().iter().map(|&(r, _)| r));
    for a in 1..=12 {
        for n in 1..=big_r.max(2) {
            let entries: Option<Vec<BasketEntry>> =
                shape.entries().iter().map(|&(r, v)| local_entry(r, v, a, n)).collect();
            if let Some(basket) = entries {
                let e3 = rat(n, a) * shape.value();
                if e3 <= Rational::zero() {
                    return None;
                }
                return ContractionProfile::new(a, n, basket, e3).ok();
            }
        }
    }
    None
}

/// Some normalized entry of index `r` with `v = res(e b)` and `n ≡ a e (mod r)`.
pub fn local_entry(r: i64, v: i64, a: i64, n: i64) -> Option<BasketEntry> {
    (1..=r)
        .filter(|e| (n - a * e).rem_euclid(r) == 0)
        .find_map(|e| {
            (1..r)
                .filter(|b| b.gcd(&r) == 1)
                .find(|b| (e * b).rem_euclid(r) == v)
                .map(|b| BasketEntry { r, b, v, e })
        })
}

pub fn render_table3() -> String {
    let mut out = String::from("No | J | (a/n)E^3\n");
    for row in table3() {
        out.push_str(&format!("{} | {} | {}\n", row.type_no, row.label(), row.value.label()));
    }
    out
}
