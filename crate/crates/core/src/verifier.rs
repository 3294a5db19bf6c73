//! Condition checkers for cA/n blow-ups and a corpus of worked examples
//! verified end to end.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rational, int, mod_inverse, rat, to_i64, Rational};
use crate::blowup::{self, BlowupWeights, ChartReport, OriginPoint};
use crate::classification::{classify, table3_row, BasketShape};
use crate::rr::{BasketEntry, ContractionProfile};
use crate::error::{Error, Result};
use crate::germ::{parse_germ, QuotientGerm};
use crate::poly::{format_monomial, Polynomial};
use crate::singularity::{point_kind, PointKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

fn verdict_of(checks: &[Check]) -> Verdict {
    if checks.iter().all(|c| c.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Parameters `(n, b, a, r1, r2)` of a cA/n weighted blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CanParams {
    pub n: i64,
    pub b: i64,
    pub a: i64,
    pub r1: i64,
    pub r2: i64,
}

impl CanParams {
    pub fn weights(&self) -> BlowupWeights {
        BlowupWeights::new(vec![rat(self.r1, self.n), rat(self.r2, self.n), rat(self.a, self.n), int(1)])
    }

    /// `x1 x2 + x3^((r1+r2)/a) + x4^((r1+r2)/n)` in `C^4 / 1/n(1,-1,b,0)`.
    pub fn standard_germ(&self) -> Result<QuotientGerm> {
        let s = self.r1 + self.r2;
        if s % self.a != 0 || s % self.n != 0 {
            return Err(Error::Precondition(format!("{s} is not divisible by a={} and n={}", self.a, self.n)));
        }
        parse_germ(&format!(
            "quotient 1/{n}(1,{m},{b},0); eq x1*x2 + x3^{} + x4^{};",
            s / self.a,
            s / self.n,
            n = self.n,
            m = -1,
            b = self.b
        ))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<Check>,
    pub pass: bool,
}

/// Conditions (a)-(d) on a cA/n weighted blow-up with `g = g(x3^n, x4)` given on four variables.
pub fn check_can(p: CanParams, g: &Polynomial) -> Result<ConditionReport> {
    let CanParams { n, b, a, r1, r2 } = p;
    if n < 1 || a < 1 || r1 < 1 || r2 < 1 {
        return Err(Error::Precondition("n, a, r1, r2 must be positive".into()));
    }
    if b.gcd(&n) != 1 {
        return Err(Error::Precondition(format!("b={b} is not a unit modulo n={n}")));
    }
    if g.nvars() != 4 || g.is_zero() {
        return Err(Error::InvalidGerm("g must be a nonzero polynomial in x1..x4".into()));
    }
    if let Some((e, _)) = g.terms().find(|(e, _)| e[0] != 0 || e[1] != 0 || e[2] as i64 % n != 0) {
        return Err(Error::InvalidGerm(format!("{} is not a monomial in x3^{n} and x4", format_monomial(e))));
    }
    let mut conditions = Vec::new();
    let cong = (a - b * r1).rem_euclid(n) == 0;
    let sum_ok = (r1 + r2) % (a * n) == 0;
    conditions.push(Check::new(
        "a",
        cong && sum_ok,
        format!("a - b r1 = {} (mod {n}); r1 + r2 = {} (mod {})", (a - b * r1).rem_euclid(n), (r1 + r2) % (a * n), a * n),
    ));
    let (b_ok, b_detail) = if cong {
        let q = (a - b * r1) / n;
        (q.gcd(&r1) == 1, format!("gcd({q}, {r1}) = {}", q.gcd(&r1)))
    } else {
        (false, "(a - b r1)/n is not an integer".to_string())
    };
    conditions.push(Check::new("b", b_ok, b_detail));
    let w = BlowupWeights::new(vec![int(0), int(0), rat(a, n), int(1)]);
    let order = blowup::weighted_order(g, &w)?;
    let target = rat(r1 + r2, n);
    conditions.push(Check::new(
        "c",
        order == target,
        format!("weighted order {} vs {}", format_rational(&order), format_rational(&target)),
    ));
    let d_ok = (r1 + r2) % a == 0 && g.contains(&[0, 0, ((r1 + r2) / a) as u32, 0]);
    conditions.push(Check::new(
        "d",
        d_ok,
        if (r1 + r2) % a == 0 {
            format!("x3^{} {}", (r1 + r2) / a, if d_ok { "present" } else { "absent" })
        } else {
            format!("a={a} does not divide r1 + r2")
        },
    ));
    let pass = conditions.iter().all(|c| c.pass);
    Ok(ConditionReport { conditions, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Lemma67Status {
    HypothesesNotMet { reason: String },
    Holds,
    Counterexample { conclusion: String },
}

/// Co-primality consequences of conditions (a)-(b) together with `b b' = 1 mod n`.
pub fn lemma67(n: i64, b: i64, bprime: i64, a: i64, r1: i64, r2: i64) -> Lemma67Status {
    let unmet = |reason: &str| Lemma67Status::HypothesesNotMet { reason: reason.to_string() };
    if n < 1 || a < 1 || r1 < 1 || r2 < 1 {
        return unmet("parameters must be positive");
    }
    if (b * bprime - 1).rem_euclid(n) != 0 {
        return unmet("b b' is not 1 modulo n");
    }
    if (a - b * r1).rem_euclid(n) != 0 || (r1 + r2) % (a * n) != 0 {
        return unmet("condition (a) fails");
    }
    if ((a - b * r1) / n).gcd(&r1) != 1 {
        return unmet("condition (b) fails");
    }
    let conclusions = [
        ("(a + b r2)/n coprime to r2", a + b * r2, r2),
        ("(r1 - b' a)/n coprime to a", r1 - bprime * a, a),
        ("(r2 + b' a)/n coprime to a", r2 + bprime * a, a),
    ];
    for (label, num, modulus) in conclusions {
        if num.rem_euclid(n) != 0 || (num / n).gcd(&modulus) != 1 {
            return Lemma67Status::Counterexample { conclusion: label.to_string() };
        }
    }
    Lemma67Status::Holds
}

/// Random parameters satisfying conditions (a) and (b) with `r1, r2 <= r_max`.
pub fn random_can_params(rng: &mut impl Rng, count: usize, r_max: i64) -> Vec<CanParams> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=7);
        let b = if n == 1 { 0 } else { rng.gen_range(1..n) };
        if n > 1 && b.gcd(&n) != 1 {
            continue;
        }
        let r1 = rng.gen_range(1..=r_max);
        let a = rng.gen_range(1..=12);
        if (a - b * r1).rem_euclid(n) != 0 || ((a - b * r1) / n).gcd(&r1) != 1 {
            continue;
        }
        let k = rng.gen_range(1..=4);
        let r2 = k * a * n - r1;
        if (1..=r_max).contains(&r2) {
            out.push(CanParams { n, b, a, r1, r2 });
        }
    }
    out
}

/// Claimed row of the classification table with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimedType {
    pub type_no: u8,
    pub params: Vec<i64>,
}

/// One instantiation of a worked example.
#[derive(Clone, Debug)]
pub struct ExampleInstance {
    pub label: String,
    pub germ: QuotientGerm,
    pub weights: BlowupWeights,
    pub claimed_discrepancy: Rational,
    pub claimed_type: ClaimedType,
    pub claimed_j: BasketShape,
    pub can: Option<CanParams>,
    pub claimed_point: PointKind,
    /// Monomials of each equation's leading form as written in the example.
    pub leading_monomials: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug)]
pub struct ExampleRecord {
    pub id: &'static str,
    pub summary: &'static str,
    pub instances: Vec<ExampleInstance>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

#[allow(clippy::too_many_arguments)]
fn instance(
    label: String,
    point: PointKind,
    germ: &str,
    weights: &str,
    discrepancy: Rational,
    type_no: u8,
    params: Vec<i64>,
    j: Vec<(i64, i64)>,
) -> ExampleInstance {
    let germ = parse_germ(germ).expect("corpus germ");
    let weights = BlowupWeights::parse(weights).expect("corpus weights");
    let leading_monomials = germ
        .equations
        .iter()
        .map(|p| {
            let lead = blowup::leading_form(p, &weights).expect("nonzero equation");
            lead.terms().map(|(e, _)| e.clone()).collect()
        })
        .collect();
    ExampleInstance {
        label,
        germ,
        weights,
        claimed_discrepancy: discrepancy,
        claimed_type: ClaimedType { type_no, params },
        claimed_j: BasketShape::new(j),
        can: None,
        claimed_point: point,
        leading_monomials,
    }
}

/// The built-in corpus; parametric examples are instantiated three times.
pub fn corpus() -> Vec<ExampleRecord> {
    vec![
        ExampleRecord {
            id: "ce2-no8",
            summary: "cE/2 point, discrepancy 1, J = {(6,2),(2,1)}",
            instances: vec![instance(
                "base".into(),
                PointKind::CE,
                "quotient 1/2(1,1,1,0); eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;",
                "4,2,1,3",
                int(1),
                8,
                vec![],
                vec![(6, 2), (2, 1)],
            )],
        },
        ExampleRecord {
            id: "cd2-no14-disc1",
            summary: "cD/2 complete intersection, discrepancy 1, J = {(2r',2)}, r' odd",
            instances: [3, 5, 7]
                .into_iter()
                .map(|s: i64| {
                    instance(
                        format!("r'={s}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/2(1,1,1,0,0); eq x1^2 + x4*x5 + x3^{}; eq x2^2 + x3^{} + x4^{} + x5;",
                            s + 1,
                            s - 1,
                            s - 1
                        ),
                        &format!("{},{},1,1,{s}", (s + 1) / 2, (s - 1) / 2),
                        int(1),
                        14,
                        vec![2 * s],
                        vec![(2 * s, 2)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd2-no15a-r4",
            summary: "cD/2 hypersurface, discrepancy 1, J = {(4,1),(4,1)}",
            instances: vec![instance(
                "base".into(),
                PointKind::CD,
                "quotient 1/2(1,1,1,0); eq x1^2 + x2*x3*x4 + x2^4 + x3^4 + x4^4;",
                "2,2,1,1",
                int(1),
                15,
                vec![4, 4],
                vec![(4, 1), (4, 1)],
            )],
        },
        ExampleRecord {
            id: "cd2-no15a-even",
            summary: "cD/2 hypersurface, discrepancy 1, J = {(2r',1),(2r',1)}, r' even",
            instances: [2, 4, 6]
                .into_iter()
                .map(|s: i64| {
                    instance(
                        format!("r'={s}"),
                        PointKind::CD,
                        &format!("quotient 1/2(1,1,1,0); eq x1^2 + x2^2*x4 + x3^{} + x4^{};", 2 * s, 2 * s),
                        &format!("{s},{s},1,1"),
                        int(1),
                        15,
                        vec![2 * s, 2 * s],
                        vec![(2 * s, 1), (2 * s, 1)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd2-no14-disc2-a",
            summary: "cD/2 complete intersection, discrepancy 2, J = {(2r',2)}, r' = 1 mod 8",
            instances: [9, 17, 25]
                .into_iter()
                .map(|s: i64| {
                    instance(
                        format!("r'={s}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/2(1,1,1,0,0); eq x1^2 + x4*x5 + x2*x3^{}; eq x2^2 + x3^{} + x4^{} + x5;",
                            (s + 3) / 4,
                            (s - 1) / 2,
                            s - 1
                        ),
                        &format!("{},{},2,1,{s}", (s + 1) / 2, (s - 1) / 2),
                        int(2),
                        14,
                        vec![2 * s],
                        vec![(2 * s, 2)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd2-no14-disc2-b",
            summary: "cD/2 complete intersection, discrepancy 2, J = {(2r',2)}, r' = 7 mod 8",
            instances: [7, 15, 23]
                .into_iter()
                .map(|s: i64| {
                    instance(
                        format!("r'={s}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/2(1,1,1,0,0); eq x1^2 + x4*x5 + x3^{}; eq x2^2 + x1*x3^{} + x4^{} + x5;",
                            (s + 1) / 2,
                            (s - 3) / 4,
                            s - 1
                        ),
                        &format!("{},{},2,1,{s}", (s + 1) / 2, (s - 1) / 2),
                        int(2),
                        14,
                        vec![2 * s],
                        vec![(2 * s, 2)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd2-general-hyper",
            summary: "cD/2 hypersurface, discrepancy a/2, J = {(r,1),(r+2,1)}",
            instances: [(3, 5), (3, 11), (5, 9)]
                .into_iter()
                .map(|(a, r): (i64, i64)| {
                    instance(
                        format!("a={a},r={r}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/2(1,1,1,0); eq x1^2 + x2^2*x4 + x3^{} + x4^{};",
                            2 * (r + 1) / a,
                            r + 1
                        ),
                        &format!("{}/2,{r}/2,{a}/2,1", r + 2),
                        rat(a, 2),
                        15,
                        vec![r, r + 2],
                        vec![(r, 1), (r + 2, 1)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd2-general-ci",
            summary: "cD/2 complete intersection, discrepancy a/2, J = {(r,1),(r+4,1)}",
            instances: [(3, 7), (2, 4), (5, 13)]
                .into_iter()
                .map(|(a, r): (i64, i64)| {
                    instance(
                        format!("a={a},r={r}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/2(1,1,1,0,1); eq x1^2 + x2*x5 + x4^{}; eq x2*x4 + x3^{} + x5;",
                            r + 2,
                            (r + 2) / a
                        ),
                        &format!("{}/2,{r}/2,{a}/2,1,{}/2", r + 2, r + 4),
                        rat(a, 2),
                        15,
                        vec![r, r + 4],
                        vec![(r, 1), (r + 4, 1)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd-gorenstein-hyper",
            summary: "Gorenstein cD hypersurface, discrepancy a, J = {(r,1),(r+1,1)}",
            instances: [(3, 4), (3, 7), (5, 7)]
                .into_iter()
                .map(|(a, r): (i64, i64)| {
                    instance(
                        format!("a={a},r={r}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/1(0,0,0,0); eq x1^2 + x2^2*x4 + x3^{} + x4^{};",
                            (2 * r + 1) / a,
                            2 * r + 1
                        ),
                        &format!("{},{r},{a},1", r + 1),
                        int(a),
                        15,
                        vec![r, r + 1],
                        vec![(r, 1), (r + 1, 1)],
                    )
                })
                .collect(),
        },
        ExampleRecord {
            id: "cd-gorenstein-ci",
            summary: "Gorenstein cD complete intersection, discrepancy a, J = {(r,1),(r+2,1)}",
            instances: [(2, 3), (3, 5), (2, 7)]
                .into_iter()
                .map(|(a, r): (i64, i64)| {
                    instance(
                        format!("a={a},r={r}"),
                        PointKind::CD,
                        &format!(
                            "quotient 1/1(0,0,0,0,0); eq x1^2 + x2*x5 + x4^{}; eq x2*x4 + x3^{} + x5;",
                            2 * r + 2,
                            (r + 1) / a
                        ),
                        &format!("{},{r},{a},1,{}", r + 1, r + 2),
                        int(a),
                        15,
                        vec![r, r + 2],
                        vec![(r, 1), (r + 2, 1)],
                    )
                })
                .collect(),
        },
    ]
}

pub fn example_ids() -> Vec<&'static str> {
    corpus().iter().map(|r| r.id).collect()
}

pub fn find_example(id: &str) -> Result<ExampleRecord> {
    corpus()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownExample(id.to_string()))
}

/// Quotient-point basket entries `(r, v)` with `v > 0` at chart origins.
pub fn chart_basket(reports: &[ChartReport]) -> BasketShape {
    BasketShape::new(
        reports
            .iter()
            .filter_map(|c| match &c.origin {
                OriginPoint::Quotient { order, v: Some(v), .. } if *order > 1 && *v > 0 => Some((*order, *v)),
                _ => None,
            })
            .collect(),
    )
}

/// Runs the seven checks on one instance.
/// Riemann-Roch profile of an instance: `a/n` from the claimed discrepancy, `J` from the claim,
/// `E^3` from the blow-up.
///
/// `J` does not fix the local data `(b, e)`. Among the consistent choices the first is taken
/// for which `k (n', -a')` with `0 < k < gcd(a, n)` gives `d = 0`, so that `k n' K_X` fails to be
/// Cartier exactly when `gcd(a, n)` does not divide `k`.
pub fn instance_profile(inst: &ExampleInstance) -> Result<ContractionProfile> {
    let n = inst.germ.n;
    let a = to_i64(&(&inst.claimed_discrepancy * int(n)))
        .ok_or_else(|| Error::Domain(format!("discrepancy {} is not in (1/{n})Z", inst.claimed_discrepancy)))?;
    let e3 = blowup::e_cubed(&inst.germ, &inst.weights)?;
    let g = a.gcd(&n);
    let choices: Vec<Vec<BasketEntry>> = inst
        .claimed_j
        .entries()
        .iter()
        .map(|&(r, v)| {
            let local: Vec<BasketEntry> = (1..=r)
                .filter(|e| (n - a * e).rem_euclid(r) == 0)
                .flat_map(|e| {
                    (1..r)
                        .filter(move |b| b.gcd(&r) == 1 && (e * b).rem_euclid(r) == v)
                        .map(move |b| BasketEntry { r, b, v, e })
                })
                .collect();
            if local.is_empty() {
                Err(Error::InconsistentLocalData(format!("no local data for ({r},{v}) with a={a}, n={n}")))
            } else {
                Ok(local)
            }
        })
        .collect::<Result<_>>()?;
    let mut basket = vec![0usize; choices.len()];
    loop {
        let entries: Vec<BasketEntry> = basket.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect();
        let profile = ContractionProfile::new(a, n, entries, e3.clone())?;
        if (1..g).all(|k| profile.d(k * n / g, -k * a / g).is_zero()) {
            return Ok(profile);
        }
        let mut slot = 0;
        loop {
            if slot == basket.len() {
                return Err(Error::InconsistentLocalData(format!(
                    "no local data for J = {} compatible with a={a}, n={n}",
                    inst.claimed_j
                )));
            }
            basket[slot] += 1;
            if basket[slot] < choices[slot].len() {
                break;
            }
            basket[slot] = 0;
            slot += 1;
        }
    }
}

pub fn verify_instance(inst: &ExampleInstance) -> Vec<Check> {
    let tag = |name: &str| format!("{name} [{}]", inst.label);
    let mut checks = Vec::new();
    match blowup::is_primitive(&inst.weights, &inst.germ) {
        Ok(p) => checks.push(Check::new(tag("primitive"), p, format!("weights ({})", inst.weights))),
        Err(e) => {
            checks.push(Check::new(tag("primitive"), false, e.to_string()));
            return checks;
        }
    }
    let kind = point_kind(&inst.germ);
    checks.push(Check::new(
        tag("point_type"),
        kind == inst.claimed_point,
        format!("computed {kind} claimed {}", inst.claimed_point),
    ));
    let missing: Vec<String> = inst
        .germ
        .equations
        .iter()
        .zip(&inst.leading_monomials)
        .enumerate()
        .flat_map(|(k, (p, required))| {
            let lead = blowup::leading_form(p, &inst.weights).unwrap_or_else(|_| Polynomial::zero(p.nvars()));
            required
                .iter()
                .filter(move |e| !lead.contains(e))
                .map(move |e| format!("eq {}: {}", k + 1, format_monomial(e)))
        })
        .collect();
    checks.push(Check::new(
        tag("leading_monomials"),
        missing.is_empty(),
        if missing.is_empty() { "all present".to_string() } else { format!("missing {}", missing.join(", ")) },
    ));
    let disc = blowup::discrepancy(&inst.germ, &inst.weights);
    let e3 = blowup::e_cubed(&inst.germ, &inst.weights);
    match &disc {
        Ok(c) => checks.push(Check::new(
            tag("discrepancy"),
            *c == inst.claimed_discrepancy,
            format!("computed {} claimed {}", format_rational(c), format_rational(&inst.claimed_discrepancy)),
        )),
        Err(e) => checks.push(Check::new(tag("discrepancy"), false, e.to_string())),
    }
    let value = inst.claimed_j.value();
    match &e3 {
        Ok(e3) => {
            let scaled = &inst.claimed_discrepancy * e3;
            checks.push(Check::new(
                tag("e_cubed"),
                scaled == value,
                format!(
                    "E^3 = {}, (a/n)E^3 = {}, value of J = {}",
                    format_rational(e3),
                    format_rational(&scaled),
                    format_rational(&value)
                ),
            ))
        }
        Err(e) => checks.push(Check::new(tag("e_cubed"), false, e.to_string())),
    }
    let type_ok = match (classify(&inst.claimed_j), table3_row(inst.claimed_type.type_no)) {
        (Ok((no, params)), Ok(row)) => {
            let expected = row.instantiate(&inst.claimed_type.params).ok();
            no == inst.claimed_type.type_no && (params == inst.claimed_type.params || expected.as_ref() == Some(&inst.claimed_j))
        }
        _ => false,
    };
    checks.push(Check::new(
        tag("claimed_type"),
        type_ok,
        format!("J = {} claimed No {} {:?}", inst.claimed_j, inst.claimed_type.type_no, inst.claimed_type.params),
    ));
    if let Some(p) = inst.can {
        let report = inst
            .germ
            .equations
            .first()
            .map(|phi| phi.filter(|e| e[0] == 0 && e[1] == 0))
            .map(|g| check_can(p, &g));
        let (pass, detail) = match report {
            Some(Ok(r)) => (r.pass, format!("{:?}", r.conditions.iter().map(|c| (&c.name, c.pass)).collect::<Vec<_>>())),
            Some(Err(e)) => (false, e.to_string()),
            None => (false, "no equation".into()),
        };
        checks.push(Check::new(tag("can_conditions"), pass, detail));
    }
    match blowup::charts(&inst.germ, &inst.weights) {
        Ok(reports) => {
            let bad: Vec<String> = reports
                .iter()
                .filter(|c| !c.origin_acceptable())
                .map(|c| format!("chart {}: {:?}", c.chart_index, c.origin))
                .collect();
            let summary: Vec<String> = reports.iter().map(origin_summary).collect();
            checks.push(Check::new(
                tag("chart_origins"),
                bad.is_empty(),
                if bad.is_empty() { summary.join("; ") } else { bad.join("; ") },
            ));
            let seen = chart_basket(&reports);
            checks.push(Check::new(
                tag("chart_basket"),
                inst.claimed_j.contains(&seen),
                format!("quotient points {seen} within J = {}", inst.claimed_j),
            ));
        }
        Err(e) => checks.push(Check::new(tag("chart_origins"), false, e.to_string())),
    }
    checks
}

fn origin_summary(c: &ChartReport) -> String {
    let origin = match &c.origin {
        OriginPoint::Absent => "origin off".to_string(),
        OriginPoint::Quotient { order, weights, .. } => {
            format!("1/{order}({},{},{})", weights[0], weights[1], weights[2])
        }
        OriginPoint::Hyperquotient { order, multiplicity, .. } => format!("hyperquotient index {order} mult {multiplicity}"),
        OriginPoint::Undetermined { reason } => reason.clone(),
    };
    format!("U{} {}: {origin}", c.chart_index, c.quotient)
}

pub fn verify_example(record: &ExampleRecord) -> VerificationReport {
    let checks: Vec<Check> = record.instances.iter().flat_map(verify_instance).collect();
    let verdict = verdict_of(&checks);
    VerificationReport { id: record.id.to_string(), checks, verdict }
}

pub fn verify_corpus() -> Vec<VerificationReport> {
    corpus().par_iter().map(verify_example).collect()
}

/// A single `±1` change to a weight or to one exponent of one monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    Weight { slot: usize, delta: i64 },
    Exponent { equation: usize, term: usize, variable: usize, delta: i64 },
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::Weight { slot, delta } => write!(f, "weight x{} {delta:+}", slot + 1),
            Mutation::Exponent { equation, term, variable, delta } => {
                write!(f, "eq {} term {} x{} {delta:+}", equation + 1, term + 1, variable + 1)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationOutcome {
    Caught,
    /// Passes every check and has the same action, weights and leading forms as the original.
    WeightEquivalent,
    Missed,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationResult {
    pub example: String,
    pub instance: String,
    pub mutation: String,
    pub outcome: MutationOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationSummary {
    pub seed: u64,
    pub total: usize,
    pub caught: usize,
    pub weight_equivalent: usize,
    pub missed: usize,
    pub results: Vec<MutationResult>,
}

impl MutationSummary {
    pub fn caught_ratio(&self) -> Rational {
        if self.total == 0 {
            int(1)
        } else {
            rat(self.caught as i64, self.total as i64)
        }
    }
}

/// Applies a mutation; `Err` means the mutant is not even a valid germ.
pub fn apply_mutation(inst: &ExampleInstance, m: &Mutation) -> Result<ExampleInstance> {
    let mut out = inst.clone();
    match *m {
        Mutation::Weight { slot, delta } => {
            out.weights.0[slot] += int(delta);
        }
        Mutation::Exponent { equation, term, variable, delta } => {
            let eq = &inst.germ.equations[equation];
            let mut poly = Polynomial::zero(eq.nvars());
            for (k, (e, c)) in eq.terms().enumerate() {
                let mut e = e.clone();
                if k == term {
                    let x = e[variable] as i64 + delta;
                    if x < 0 {
                        return Err(Error::InvalidGerm("negative exponent".into()));
                    }
                    e[variable] = x as u32;
                }
                poly.add_term(e, c.clone());
            }
            let mut eqs = inst.germ.equations.clone();
            eqs[equation] = poly;
            out.germ = QuotientGerm::new(inst.germ.n, inst.germ.action.clone(), eqs)?;
        }
    }
    Ok(out)
}

pub fn random_mutation(inst: &ExampleInstance, rng: &mut impl Rng) -> Mutation {
    let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
    let dim = inst.germ.dim();
    if rng.gen_bool(0.5) {
        return Mutation::Weight { slot: rng.gen_range(0..dim), delta };
    }
    let equation = rng.gen_range(0..inst.germ.equations.len());
    let eq = &inst.germ.equations[equation];
    let term = rng.gen_range(0..eq.len());
    let (e, _) = eq.terms().nth(term).expect("term index");
    let support: Vec<usize> = (0..dim).filter(|&k| e[k] > 0).collect();
    let variable = if delta < 0 && !support.is_empty() {
        support[rng.gen_range(0..support.len())]
    } else {
        rng.gen_range(0..dim)
    };
    Mutation::Exponent { equation, term, variable, delta }
}

/// Same group, weights and leading forms: the blow-up data (discrepancy, `E^3`, exceptional
/// divisor) of the two germs coincide.
pub fn weight_equivalent(original: &ExampleInstance, mutant: &ExampleInstance) -> bool {
    if original.weights != mutant.weights || original.germ.n != mutant.germ.n || original.germ.action != mutant.germ.action {
        return false;
    }
    let leads = |inst: &ExampleInstance| -> Option<Vec<Polynomial>> {
        inst.germ.equations.iter().map(|p| blowup::leading_form(p, &inst.weights).ok()).collect()
    };
    leads(original).is_some() && leads(original) == leads(mutant)
}

pub fn classify_mutant(inst: &ExampleInstance, m: &Mutation) -> MutationOutcome {
    let Ok(mutant) = apply_mutation(inst, m) else {
        return MutationOutcome::Caught;
    };
    if verify_instance(&mutant).iter().any(|c| !c.pass) {
        MutationOutcome::Caught
    } else if weight_equivalent(inst, &mutant) {
        MutationOutcome::WeightEquivalent
    } else {
        MutationOutcome::Missed
    }
}

/// Samples `count` mutations uniformly over corpus instances.
pub fn run_mutations(count: usize, seed: u64) -> MutationSummary {
    let corpus = corpus();
    let pool: Vec<(&ExampleRecord, &ExampleInstance)> =
        corpus.iter().flat_map(|r| r.instances.iter().map(move |i| (r, i))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<(usize, Mutation)> = (0..count)
        .map(|_| {
            let k = rng.gen_range(0..pool.len());
            (k, random_mutation(pool[k].1, &mut rng))
        })
        .collect();
    let results: Vec<MutationResult> = picks
        .par_iter()
        .map(|(k, m)| {
            let (record, inst) = pool[*k];
            MutationResult {
                example: record.id.to_string(),
                instance: inst.label.clone(),
                mutation: m.to_string(),
                outcome: classify_mutant(inst, m),
            }
        })
        .collect();
    let tally = |o: MutationOutcome| results.iter().filter(|r| r.outcome == o).count();
    MutationSummary {
        seed,
        total: results.len(),
        caught: tally(MutationOutcome::Caught),
        weight_equivalent: tally(MutationOutcome::WeightEquivalent),
        missed: tally(MutationOutcome::Missed),
        results,
    }
}

pub fn bprime_of(b: i64, n: i64) -> Result<i64> {
    if n == 1 {
        Ok(0)
    } else {
        mod_inverse(b, n)
    }
}
