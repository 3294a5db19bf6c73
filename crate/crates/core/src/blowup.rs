//! Weighted blow-ups of cyclic-quotient germs: weighted orders, toric
//! charts, discrepancy and `E^3`.

use std::fmt;
use std::ops::Deref;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{format_rational, int, mod_inverse, to_i64, Rational};
use crate::error::{Error, Result};
use crate::germ::{parse_weights, QuotientGerm};
use crate::lattice::{column_basis, smith_normal_form, solve_lower};
use crate::poly::Polynomial;

/// Rational weights `wt(x_1, ..., x_dim)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupWeights(pub Vec<Rational>);

impl BlowupWeights {
    pub fn new(weights: Vec<Rational>) -> Self {
        BlowupWeights(weights)
    }

    pub fn from_ints(weights: &[i64]) -> Self {
        BlowupWeights(weights.iter().map(|&w| int(w)).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_weights(text).map(BlowupWeights)
    }

    pub fn weight_of(&self, exponents: &[u32]) -> Rational {
        exponents.iter().zip(&self.0).map(|(&k, w)| int(k as i64) * w).sum()
    }
}

impl Deref for BlowupWeights {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for BlowupWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn weighted_order(poly: &Polynomial, weights: &BlowupWeights) -> Result<Rational> {
    poly.terms()
        .map(|(e, _)| weights.weight_of(e))
        .min()
        .ok_or(Error::ZeroPolynomial)
}

pub fn leading_form(poly: &Polynomial, weights: &BlowupWeights) -> Result<Polynomial> {
    let d = weighted_order(poly, weights)?;
    Ok(poly.filter(|e| weights.weight_of(e) == d))
}

/// `n w` as integers, provided `w` lies in `Z^dim + Z action/n`.
fn scaled(weights: &BlowupWeights, germ: &QuotientGerm) -> Result<Vec<i64>> {
    if weights.len() != germ.dim() {
        return Err(Error::Domain(format!(
            "{} weights for {} coordinates",
            weights.len(),
            germ.dim()
        )));
    }
    let n = germ.n;
    let m: Option<Vec<i64>> = weights.iter().map(|w| to_i64(&(w * int(n)))).collect();
    let m = m.ok_or_else(|| Error::NotInLattice(format!("n·({weights}) is not integral")))?;
    if !lattice_member(&m, germ) {
        return Err(Error::NotInLattice(format!("({weights}) is not in Z^{} + Z·action/{n}", germ.dim())));
    }
    Ok(m)
}

fn lattice_member(m: &[i64], germ: &QuotientGerm) -> bool {
    let n = germ.n;
    (0..n).any(|k| m.iter().zip(&germ.action).all(|(&mi, &ai)| (mi - k * ai).rem_euclid(n) == 0))
}

/// Whether `w` is a primitive vector of `N = Z^dim + Z action/n`.
pub fn is_primitive(weights: &BlowupWeights, germ: &QuotientGerm) -> Result<bool> {
    let m = scaled(weights, germ)?;
    if m.iter().any(|&x| x <= 0) {
        return Err(Error::Domain(format!("weights ({weights}) must be positive")));
    }
    let g = m.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    Ok((2..=g).filter(|k| g % k == 0).all(|k| {
        let reduced: Vec<i64> = m.iter().map(|x| x / k).collect();
        !lattice_member(&reduced, germ)
    }))
}

pub fn discrepancy(germ: &QuotientGerm, weights: &BlowupWeights) -> Result<Rational> {
    let mut c: Rational = weights.iter().sum::<Rational>() - Rational::one();
    for eq in &germ.equations {
        c -= weighted_order(eq, weights)?;
    }
    Ok(c)
}

/// `E^3 = (prod of weighted orders) / (prod of weights) / n`.
pub fn e_cubed(germ: &QuotientGerm, weights: &BlowupWeights) -> Result<Rational> {
    let mut num = Rational::one();
    for eq in &germ.equations {
        num *= weighted_order(eq, weights)?;
    }
    let den: Rational = weights.iter().fold(Rational::one(), |acc, w| acc * w);
    Ok(num / den / int(germ.n))
}

/// A 3-fold cyclic quotient `1/r(c1,c2,c3)` is terminal iff all weights are units and two cancel.
pub fn terminal_quotient_check(r: i64, action: [i64; 3]) -> bool {
    if r == 1 {
        return true;
    }
    if r < 1 || action.iter().any(|c| c.gcd(&r) != 1) {
        return false;
    }
    (0..3).any(|i| (i + 1..3).any(|j| (action[i] + action[j]).rem_euclid(r) == 0))
}

/// Lexicographically smallest `u c mod r` over units `u`.
pub fn canonical_type(r: i64, weights: &[i64]) -> Vec<i64> {
    if r <= 1 {
        return vec![0; weights.len()];
    }
    (1..r)
        .filter(|u| u.gcd(&r) == 1)
        .map(|u| weights.iter().map(|c| (u * c).rem_euclid(r)).collect::<Vec<i64>>())
        .min()
        .expect("1 is a unit")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartQuotient {
    Cyclic { order: i64, weights: Vec<i64> },
    NonCyclic { invariants: Vec<i64> },
}

impl ChartQuotient {
    pub fn order(&self) -> i64 {
        match self {
            ChartQuotient::Cyclic { order, .. } => *order,
            ChartQuotient::NonCyclic { invariants } => invariants.iter().product(),
        }
    }
}

impl fmt::Display for ChartQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartQuotient::Cyclic { order, weights } => {
                let w: Vec<String> = weights.iter().map(|x| x.to_string()).collect();
                write!(f, "1/{order}({})", w.join(","))
            }
            ChartQuotient::NonCyclic { invariants } => write!(f, "non-cyclic {invariants:?}"),
        }
    }
}

/// What the strict transform looks like at the origin of a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OriginPoint {
    /// The strict transform misses the origin.
    Absent,
    /// Smooth point of the cover: a cyclic quotient singularity `1/order(weights)`.
    Quotient {
        order: i64,
        weights: [i64; 3],
        eliminated: Vec<usize>,
        terminal: bool,
        /// `v = min(res(u ε), r - res(u ε))` for a terminal point of type `1/r(1,-1,b)` after scaling by `u`.
        v: Option<i64>,
    },
    /// Singular point of the cover with embedding dimension four.
    Hyperquotient {
        order: i64,
        weights: Vec<i64>,
        equation_weight: i64,
        multiplicity: u32,
        eliminated: Vec<usize>,
        /// Necessary conditions for terminality: multiplicity two and a terminal weight pattern.
        screen: bool,
    },
    /// Embedding dimension at least five, or a non-cyclic group.
    Undetermined { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartReport {
    pub chart_index: usize,
    pub quotient: ChartQuotient,
    pub exceptional_weight: Option<i64>,
    pub strict_transform: Vec<Polynomial>,
    pub origin_on_strict_transform: bool,
    pub origin: OriginPoint,
}

impl ChartReport {
    /// `Some(true/false)` for quotient points, `None` otherwise.
    pub fn terminal_quotient(&self) -> Option<bool> {
        match &self.origin {
            OriginPoint::Quotient { terminal, .. } => Some(*terminal),
            _ => None,
        }
    }

    /// Whether nothing found at the origin contradicts terminality.
    pub fn origin_acceptable(&self) -> bool {
        match &self.origin {
            OriginPoint::Absent => true,
            OriginPoint::Quotient { terminal, .. } => *terminal,
            OriginPoint::Hyperquotient { screen, .. } => *screen,
            OriginPoint::Undetermined { .. } => false,
        }
    }
}

/// The `i`-th chart (0-based) of the weighted blow-up.
pub fn chart(germ: &QuotientGerm, weights: &BlowupWeights, i: usize) -> Result<ChartReport> {
    let dim = germ.dim();
    if i >= dim {
        return Err(Error::Domain(format!("chart index {} out of range 1..={dim}", i + 1)));
    }
    if !is_primitive(weights, germ)? {
        return Err(Error::Domain(format!("weights ({weights}) are not primitive")));
    }
    let quotient = chart_group(germ, weights, i)?;
    let strict = strict_transforms(germ, weights, i)?;
    let on = strict.iter().all(|p| p.coefficient(&vec![0; dim]).is_none());
    let exceptional_weight = match &quotient {
        ChartQuotient::Cyclic { weights, .. } => Some(weights[i]),
        ChartQuotient::NonCyclic { .. } => None,
    };
    let origin = if on { analyse_origin(&quotient, &strict, i) } else { OriginPoint::Absent };
    Ok(ChartReport {
        chart_index: i + 1,
        quotient,
        exceptional_weight,
        strict_transform: strict,
        origin_on_strict_transform: on,
        origin,
    })
}

pub fn charts(germ: &QuotientGerm, weights: &BlowupWeights) -> Result<Vec<ChartReport>> {
    (0..germ.dim()).map(|i| chart(germ, weights, i)).collect()
}

/// `N / N'` where `N'` has basis `w` (slot `i`) and `e_j` (`j != i`).
fn chart_group(germ: &QuotientGerm, weights: &BlowupWeights, i: usize) -> Result<ChartQuotient> {
    let dim = germ.dim();
    let n = germ.n;
    let m = scaled(weights, germ)?;
    let mut gens = vec![vec![0i64; dim + 1]; dim];
    for k in 0..dim {
        gens[k][k] = n;
        gens[k][dim] = germ.action[k];
    }
    let basis = column_basis(&gens).ok_or_else(|| Error::Domain("degenerate lattice".into()))?;
    let mut sub = vec![vec![0i64; dim]; dim];
    for s in 0..dim {
        for k in 0..dim {
            sub[k][s] = if s == i { m[k] } else { n * i64::from(k == s) };
        }
    }
    let t = solve_lower(&basis, &sub)
        .ok_or_else(|| Error::NotInLattice(format!("({weights}) does not generate a sublattice")))?;
    let snf = smith_normal_form(&t);
    let nontrivial: Vec<usize> = (0..dim).filter(|&k| snf.d[k] > 1).collect();
    match nontrivial.as_slice() {
        [] => Ok(ChartQuotient::Cyclic { order: 1, weights: vec![0; dim] }),
        [k] => {
            let order = snf.d[*k];
            Ok(ChartQuotient::Cyclic {
                order,
                weights: (0..dim).map(|s| snf.v[s][*k].rem_euclid(order)).collect(),
            })
        }
        _ => Ok(ChartQuotient::NonCyclic { invariants: nontrivial.iter().map(|&k| snf.d[k]).collect() }),
    }
}

/// Strict transforms of the equations in the coordinates of chart `i`.
pub fn strict_transforms(germ: &QuotientGerm, weights: &BlowupWeights, i: usize) -> Result<Vec<Polynomial>> {
    let dim = germ.dim();
    germ.equations
        .iter()
        .map(|eq| {
            let d = weighted_order(eq, weights)?;
            let mut out = Polynomial::zero(dim);
            for (e, c) in eq.terms() {
                let shift = to_i64(&(weights.weight_of(e) - &d))
                    .filter(|&s| s >= 0)
                    .ok_or_else(|| Error::NotInLattice(format!("({weights}) gives a fractional chart exponent")))?;
                let mut exps = e.clone();
                exps[i] = shift as u32;
                out.add_term(exps, c.clone());
            }
            Ok(out)
        })
        .collect()
}

fn character(weights: &[i64], order: i64, exps: &[u32]) -> i64 {
    exps.iter().zip(weights).map(|(&k, &w)| k as i64 * w).sum::<i64>().rem_euclid(order.max(1))
}

fn analyse_origin(quotient: &ChartQuotient, strict: &[Polynomial], slot: usize) -> OriginPoint {
    let (order, cw) = match quotient {
        ChartQuotient::Cyclic { order, weights } => (*order, weights.clone()),
        ChartQuotient::NonCyclic { invariants } => {
            return OriginPoint::Undetermined { reason: format!("non-cyclic chart group {invariants:?}") }
        }
    };
    let dim = cw.len();
    let lin: Vec<Vec<Rational>> = strict
        .iter()
        .map(|p| {
            (0..dim)
                .map(|k| {
                    let mut e = vec![0u32; dim];
                    e[k] = 1;
                    p.coefficient(&e).cloned().unwrap_or_else(Rational::zero)
                })
                .collect()
        })
        .collect();
    let (pivots, reduced, combos) = row_reduce(lin);
    let free: Vec<usize> = (0..dim).filter(|k| !pivots.contains(k)).collect();
    let free_weights: Vec<i64> = free.iter().map(|&k| cw[k]).collect();
    let singular_rows: Vec<usize> = (0..strict.len()).filter(|&r| reduced[r].iter().all(Zero::is_zero)).collect();

    if singular_rows.is_empty() {
        let weights = [free_weights[0], free_weights[1], free_weights[2]];
        let terminal = terminal_quotient_check(order, weights);
        let v = terminal.then(|| basket_v(order, weights, cw[slot])).flatten();
        return OriginPoint::Quotient { order, weights, eliminated: pivots, terminal, v };
    }
    if singular_rows.len() > 1 {
        return OriginPoint::Undetermined { reason: "embedding dimension exceeds four".into() };
    }
    let mut psi = Polynomial::zero(dim);
    for (k, lambda) in combos[singular_rows[0]].iter().enumerate() {
        if !lambda.is_zero() {
            psi = &psi + &(&strict[k] * &Polynomial::constant(dim, lambda.clone()));
        }
    }
    let mut quad = psi.homogeneous_part(2);
    for (row, &p) in pivots.iter().enumerate() {
        let pivot_row = &reduced[row_of(&reduced, p, row)];
        let mut sub = Polynomial::zero(dim);
        for &k in &free {
            if !pivot_row[k].is_zero() {
                sub = &sub + &(&Polynomial::var(dim, k) * &Polynomial::constant(dim, -pivot_row[k].clone() / &pivot_row[p]));
            }
        }
        quad = quad.substitute(p, &sub);
    }
    let multiplicity = if !quad.is_zero() {
        2
    } else {
        psi.order().unwrap_or(0).max(3)
    };
    let equation_weight = psi.terms().next().map_or(0, |(e, _)| character(&cw, order, e));
    let screen = multiplicity == 2 && terminal_hyper_pattern(order, &free_weights, equation_weight);
    OriginPoint::Hyperquotient {
        order,
        weights: free_weights,
        equation_weight,
        multiplicity,
        eliminated: pivots,
        screen,
    }
}

fn row_of(reduced: &[Vec<Rational>], pivot: usize, hint: usize) -> usize {
    if !reduced[hint][pivot].is_zero() {
        return hint;
    }
    (0..reduced.len()).find(|&r| !reduced[r][pivot].is_zero()).expect("pivot row")
}

/// Gauss-Jordan elimination; returns pivot columns, reduced rows and the row combinations used.
fn row_reduce(mut rows: Vec<Vec<Rational>>) -> (Vec<usize>, Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let m = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let mut combos: Vec<Vec<Rational>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        combos.swap(r, p);
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / &rows[r][c];
                for k in 0..cols {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
                for k in 0..m {
                    let t = &f * &combos[r][k];
                    combos[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, rows, combos)
}

/// Weight patterns `(1,-1,b,0;0)` and `(1,3,1,2;2) mod 4` of terminal hyperquotients, up to units and order.
pub fn terminal_hyper_pattern(order: i64, weights: &[i64], equation_weight: i64) -> bool {
    if order == 1 {
        return true;
    }
    if weights.len() != 4 {
        return false;
    }
    (1..order).filter(|u| u.gcd(&order) == 1).any(|u| {
        let mut c: Vec<i64> = weights.iter().map(|w| (u * w).rem_euclid(order)).collect();
        let eps = (u * equation_weight).rem_euclid(order);
        c.sort();
        if eps == 0 {
            if let Some(z) = c.iter().position(|&x| x == 0) {
                let mut rest = c.clone();
                rest.remove(z);
                for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                    if rest[i] == 1 && rest[j] == order - 1 && rest[k].gcd(&order) == 1 {
                        return true;
                    }
                    if rest[j] == 1 && rest[i] == order - 1 && rest[k].gcd(&order) == 1 {
                        return true;
                    }
                }
            }
        }
        order == 4 && eps == 2 && c == vec![1, 1, 2, 3]
    })
}

/// `v` of a terminal point `1/r(c)` with exceptional character `eps`.
fn basket_v(r: i64, c: [i64; 3], eps: i64) -> Option<i64> {
    if r == 1 {
        return Some(0);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if (c[i] + c[j]).rem_euclid(r) == 0 {
            let u = mod_inverse(c[i], r).ok()?;
            let res = (u * eps).rem_euclid(r);
            return Some(res.min(r - res));
        }
    }
    None
}

/// Closed-form chart types of the cA/n blow-up with weights `(r1/n, r2/n, a/n, 1)`.
pub fn can_chart_formulas(n: i64, b: i64, a: i64, r1: i64, r2: i64) -> Result<Vec<(i64, Vec<i64>)>> {
    let bp = if n == 1 { 0 } else { mod_inverse(b, n)? };
    let exact = |num: i64| {
        if num % n == 0 {
            Ok(num / n)
        } else {
            Err(Error::Domain(format!("{num} is not divisible by {n}")))
        }
    };
    Ok(vec![
        (r1, vec![-1, exact(r1 + r2)?, exact(-b * r1 + a)?, 1]),
        (r2, vec![exact(r1 + r2)?, -1, exact(b * r2 + a)?, 1]),
        (a, vec![exact(-bp * a + r1)?, exact(bp * a + r2)?, -1, 1]),
        (n, vec![1, -1, b, 0]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::germ::parse_germ;

    const EX54: &str = "quotient 1/2(1,1,1,0); eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;";

    #[test]
    fn orders_and_forms() {
        let g = parse_germ(EX54).unwrap();
        let w = BlowupWeights::from_ints(&[4, 2, 1, 3]);
        assert_eq!(weighted_order(&g.equations[0], &w).unwrap(), int(8));
        let lead = leading_form(&g.equations[0], &w).unwrap();
        assert_eq!(lead.len(), 4);
        assert!(!lead.contains(&[0, 0, 0, 3]));
        assert!(matches!(weighted_order(&Polynomial::zero(4), &w), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn primitivity() {
        let g = parse_germ(EX54).unwrap();
        assert!(is_primitive(&BlowupWeights::from_ints(&[4, 2, 1, 3]), &g).unwrap());
        let smooth = parse_germ("quotient 1/1(0,0,0,0); eq x1*x2 + x3^2 + x4^2;").unwrap();
        assert!(!is_primitive(&BlowupWeights::from_ints(&[2, 2, 2, 2]), &smooth).unwrap());
        let bad = BlowupWeights::from_ints(&[4, 2, 1, 2]);
        assert!(is_primitive(&bad, &g).unwrap());
        let off = BlowupWeights::parse("1/2,1,1,1").unwrap();
        assert!(matches!(is_primitive(&off, &g), Err(Error::NotInLattice(_))));
    }

    #[test]
    fn example_numbers() {
        let g = parse_germ(EX54).unwrap();
        let w = BlowupWeights::from_ints(&[4, 2, 1, 3]);
        assert_eq!(discrepancy(&g, &w).unwrap(), int(1));
        assert_eq!(e_cubed(&g, &w).unwrap(), rat(1, 6));
    }

    #[test]
    fn charts_of_ce2() {
        let g = parse_germ(EX54).unwrap();
        let w = BlowupWeights::from_ints(&[4, 2, 1, 3]);
        let reports = charts(&g, &w).unwrap();
        assert!(reports[..3].iter().all(|c| !c.origin_on_strict_transform));
        match &reports[3].origin {
            OriginPoint::Quotient { order, terminal, v, .. } => {
                assert_eq!(*order, 6);
                assert!(terminal);
                assert_eq!(*v, Some(2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn smooth_charts_are_trivial() {
        let g = parse_germ("quotient 1/1(0,0,0,0); eq x1*x2 + x3^2 + x4^3;").unwrap();
        let w = BlowupWeights::from_ints(&[1, 1, 1, 1]);
        for c in charts(&g, &w).unwrap() {
            assert_eq!(c.quotient, ChartQuotient::Cyclic { order: 1, weights: vec![0; 4] });
        }
    }

    #[test]
    fn terminal_quotients() {
        assert!(terminal_quotient_check(5, [1, 4, 2]));
        assert!(!terminal_quotient_check(4, [1, 1, 2]));
        assert!(terminal_quotient_check(1, [0, 0, 0]));
        assert!(!terminal_quotient_check(7, [1, 2, 3]));
    }

    #[test]
    fn hyper_patterns() {
        assert!(terminal_hyper_pattern(4, &[0, 1, 1, 3], 0));
        assert!(terminal_hyper_pattern(2, &[1, 1, 1, 0], 0));
        assert!(terminal_hyper_pattern(4, &[1, 3, 1, 2], 2));
        assert!(!terminal_hyper_pattern(6, &[1, 5, 1, 2], 2));
        assert!(!terminal_hyper_pattern(4, &[0, 2, 1, 3], 0));
    }

    #[test]
    fn can_chart_four() {
        let (n, b, a, r1, r2) = (3, 1, 4, 1, 11);
        let g = parse_germ("quotient 1/3(1,2,1,0); eq x1*x2 + x3^3 + x4^4;").unwrap();
        let w = BlowupWeights::new(vec![rat(r1, n), rat(r2, n), rat(a, n), int(1)]);
        assert_eq!(weighted_order(&g.equations[0], &w).unwrap(), rat(r1 + r2, n));
        let forms = can_chart_formulas(n, b, a, r1, r2).unwrap();
        for (i, (order, ws)) in forms.iter().enumerate() {
            let c = chart(&g, &w, i).unwrap();
            match c.quotient {
                ChartQuotient::Cyclic { order: o, weights } => {
                    assert_eq!(o, *order);
                    assert_eq!(canonical_type(o, &weights), canonical_type(*order, ws), "chart {}", i + 1);
                }
                other => panic!("{other}"),
            }
        }
    }
}

