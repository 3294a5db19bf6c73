//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if a criterion outside `EXPECTED_RED` fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divcon::arith::{a_term, b_term, int, rat, Rational};
use divcon::blowup::{canonical_type, chart, can_chart_formulas, ChartQuotient};
use divcon::classification::{classify, enumerate_baskets, table3, BasketShape};
use divcon::covering::{
    c_term, c_term_at, coprime_candidates, cover_assignments, cover_candidates, d_cover, enumerate_prime_covers,
    pattern_d_tuples, canonical_d, table4_instances, table5,
};
use divcon::dims::check_all;
use divcon::rr::BasketEntry;
use divcon::verifier::{corpus, instance_profile, random_can_params, run_mutations, verify_example, Verdict};

/// Criteria that cannot hold as stated; they still run and print their real outcome.
const EXPECTED_RED: &[u32] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if took > limit {
        out.pass = false;
    }
    out.detail = format!("{}; {:.2?} (limit {:?})", out.detail, took, limit);
    out
}

fn show(t: &[i64]) -> String {
    format!("({})", t.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn table3_reproduction() -> Outcome {
    timed(Duration::from_secs(5), || {
        let found = enumerate_baskets(64);
        let rows = table3();
        let mut seen = BTreeSet::new();
        let mut problems = Vec::new();
        for (shape, value) in &found {
            match classify(shape) {
                Ok((no, params)) => {
                    seen.insert(no);
                    let row = &rows[no as usize - 1];
                    if row.value.eval(&params) != *value {
                        problems.push(format!("{shape}: {value} vs printed {}", row.value.label()));
                    }
                }
                Err(_) => problems.push(format!("{shape} matches no row")),
            }
        }
        let spot = [
            (BasketShape::new(vec![(6, 3)]), rat(1, 2)),
            (BasketShape::new(vec![(5, 2), (2, 1)]), rat(3, 10)),
        ];
        for (shape, want) in spot {
            if !found.iter().any(|(s, v)| *s == shape && *v == want) {
                problems.push(format!("{shape} -> {want} missing"));
            }
        }
        for r in 2..=64 {
            let shape = BasketShape::new(vec![(r, 1)]);
            if !found.iter().any(|(s, v)| *s == shape && *v == int(1) + rat(1, r)) {
                problems.push(format!("{shape} -> 1+1/{r} missing"));
            }
        }
        let missing_rows: Vec<u8> = rows.iter().map(|r| r.type_no).filter(|no| !seen.contains(no)).collect();
        outcome(
            problems.is_empty() && missing_rows.is_empty() && rows.len() == 17,
            format!(
                "{} baskets, {} of 17 rows realized, {} discrepancies{}",
                found.len(),
                seen.len(),
                problems.len(),
                problems.first().map(|p| format!(" (first: {p})")).unwrap_or_default()
            ),
        )
    })
}

fn table4_reproduction() -> Outcome {
    timed(Duration::from_secs(10), || {
        let steps = enumerate_prime_covers(64);
        let found: BTreeSet<_> =
            steps.iter().map(|s| (s.source_no, s.source_params.clone(), s.p, s.target.clone())).collect();
        let expected = table4_instances(64);
        let extra = found.difference(&expected).count();
        let missing = expected.difference(&found).count();
        let no1 = BasketShape::new(vec![(6, 3)]);
        let candidates = cover_candidates(1, &[], &no1, 2);
        let no1_rejected = !candidates.is_empty()
            && candidates.iter().all(|c| !c.accepted())
            && !steps.iter().any(|s| s.source_no == 1 && s.p == 2);
        outcome(
            extra == 0 && missing == 0 && no1_rejected,
            format!(
                "{} covers, {} unexpected, {} missing; No 1 with p = 2 {} ({} candidates)",
                found.len(),
                extra,
                missing,
                if no1_rejected { "rejected" } else { "NOT rejected" },
                candidates.len()
            ),
        )
    })
}

fn table5_reproduction() -> Outcome {
    let mut problems = Vec::new();
    let mut realized: BTreeMap<u8, BTreeSet<String>> = BTreeMap::new();
    let mut assignments = 0usize;
    for row in table5() {
        let pattern = &table3()[row.type_no as usize - 1];
        let samples: Vec<Vec<i64>> =
            if pattern.is_parametric() { (2..=64).map(|r| vec![r]).collect() } else { vec![vec![]] };
        for params in samples {
            let points = row.points(&params);
            let printed = row.printed(&params);
            let patterns = pattern_d_tuples(&points, row.p);
            if patterns != printed {
                problems.push(format!("No {} {params:?}: patterns {patterns:?} vs printed {printed:?}", row.type_no));
            }
            for asg in cover_assignments(&points, row.p) {
                assignments += 1;
                let d: Vec<i64> =
                    asg.entries.iter().map(|q| d_cover(q, asg.a, asg.n, row.p).expect("p divides a and n")).collect();
                let d = canonical_d(&points, d);
                if !printed.contains(&d) {
                    problems.push(format!("No {} {params:?}: consistent data gives unprinted {}", row.type_no, show(&d)));
                }
                realized.entry(row.type_no).or_default().insert(show(&d));
            }
        }
    }
    let summary: Vec<String> = table5()
        .iter()
        .map(|row| {
            let got = realized.get(&row.type_no).map(|s| s.iter().cloned().collect::<Vec<_>>().join(" "));
            format!("No {}: {}", row.type_no, got.unwrap_or_else(|| "none".into()))
        })
        .collect();
    outcome(
        problems.is_empty(),
        format!(
            "r <= 64, {} consistent assignments, {} mismatches; tuples realized by consistent data: {}{}",
            assignments,
            problems.len(),
            summary.join(", "),
            problems.first().map(|p| format!(" (first: {p})")).unwrap_or_default()
        ),
    )
}

/// All `(b, e)` with `e b ≡ v (mod r)`, `b` a unit.
fn local_choices(r: i64, v: i64) -> Vec<BasketEntry> {
    (1..=r)
        .flat_map(|e| {
            (1..r).filter(move |b| b.gcd(&r) == 1 && (e * b).rem_euclid(r) == v).map(move |b| BasketEntry { r, b, v, e })
        })
        .collect()
}

fn c_constants() -> Outcome {
    let mut problems = Vec::new();
    let rows = [
        (4u8, vec![8], vec![2, 0]),
        (10, vec![9], vec![1, 1, 0]),
        (12, vec![], vec![1, 0, 2]),
    ];
    let mut observed = Vec::new();
    for (no, params, d) in rows {
        let row = table5().into_iter().find(|r| r.type_no == no).unwrap();
        let points = row.points(&params);
        let values: Vec<BTreeSet<Rational>> = points
            .iter()
            .zip(&d)
            .map(|(&(r, v), &di)| local_choices(r, v).iter().map(|q| c_term_at(q, di)).collect())
            .collect();
        observed.push(format!(
            "No {no}: {}",
            values
                .iter()
                .map(|s| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        let single = |set: &BTreeSet<Rational>, want: Rational| set.len() == 1 && set.contains(&want);
        let ok = match no {
            4 => single(&values[0], rat(1, 2)) && single(&values[1], int(0)),
            10 => single(&values[0], rat(1, 4)) && single(&values[1], rat(1, 4)) && single(&values[2], int(0)),
            _ => {
                single(&values[0], rat(1, 4))
                    && single(&values[1], int(0))
                    && values[2] == [int(0), rat(1, 2)].into_iter().collect()
                    && local_choices(4, 1).iter().all(|q| {
                        c_term_at(q, 2) == if q.b == 1 { int(0) } else { rat(1, 2) }
                    })
            }
        };
        if !ok {
            problems.push(format!("No {no}"));
        }
        for asg in cover_assignments(&points, row.p) {
            let via_d_cover: Vec<Rational> =
                asg.entries.iter().map(|q| c_term(q, asg.a, asg.n, row.p).unwrap()).collect();
            let direct: Vec<Rational> = asg.entries.iter().zip(&asg.d).map(|(q, &di)| c_term_at(q, di)).collect();
            if via_d_cover != direct {
                problems.push(format!("No {no}: c_term disagrees with prescribed d at a={}, n={}", asg.a, asg.n));
            }
        }
    }
    outcome(problems.is_empty(), format!("{}; {} problems", observed.join("; "), problems.len()))
}

fn candidate_sets() -> Outcome {
    let set = |v: &[(i64, i64)]| v.iter().copied().collect::<BTreeSet<_>>();
    let c14 = coprime_candidates(14).unwrap();
    let c15 = coprime_candidates(15).unwrap();
    let pass = set(&c14.pre) == set(&[(2, 2), (2, 4), (2, 8), (4, 2)])
        && set(&c14.post) == set(&[(2, 2), (4, 2)])
        && set(&c15.pre) == set(&[(2, 2), (2, 4), (4, 2)])
        && set(&c15.post) == set(&[(2, 2), (4, 2)]);
    outcome(
        pass,
        format!("No 14 {:?} -> {:?}; No 15'a {:?} -> {:?}", c14.pre, c14.post, c15.pre, c15.post),
    )
}

fn corpus_verification() -> Outcome {
    timed(Duration::from_secs(10), || {
        let records = corpus();
        // Discrepancy as a multiple of 1/n: fixed value, a/2 or a.
        let expected: [(Option<i64>, i64); 10] =
            [(Some(1), 1), (Some(1), 1), (Some(1), 1), (Some(1), 1), (Some(2), 1), (Some(2), 1), (None, 2), (None, 2), (None, 1), (None, 1)];
        let mut problems = Vec::new();
        let mut instances = 0;
        if records.len() != 10 {
            problems.push(format!("{} records", records.len()));
        }
        for (record, (fixed, n)) in records.iter().zip(expected) {
            let parametric = record.instances.len() > 1;
            if parametric && record.instances.len() != 3 {
                problems.push(format!("{}: {} instances", record.id, record.instances.len()));
            }
            let report = verify_example(record);
            if report.verdict != Verdict::Pass {
                let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
                problems.push(format!("{} fails {}", record.id, failed.join(", ")));
            }
            for inst in &record.instances {
                instances += 1;
                let disc = divcon::blowup::discrepancy(&inst.germ, &inst.weights).unwrap();
                let e3 = divcon::blowup::e_cubed(&inst.germ, &inst.weights).unwrap();
                let shape_ok = match fixed {
                    Some(v) => disc == int(v),
                    None => inst.germ.n == n && (&disc * int(n)).is_integer(),
                };
                if !shape_ok {
                    problems.push(format!("{} [{}]: discrepancy {disc}", record.id, inst.label));
                }
                if &disc * &e3 != inst.claimed_j.value() {
                    problems.push(format!("{} [{}]: (a/n)E^3 = {}", record.id, inst.label, &disc * &e3));
                }
            }
        }
        outcome(
            problems.is_empty(),
            format!(
                "{} records, {} instances, {} problems{}",
                records.len(),
                instances,
                problems.len(),
                problems.first().map(|p| format!(" (first: {p})")).unwrap_or_default()
            ),
        )
    })
}

fn chart_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let params = random_can_params(&mut rng, 50, 60);
    let mut mismatches = [0usize; 4];
    let mut first = None;
    for p in &params {
        let germ = p.standard_germ().unwrap();
        let weights = p.weights();
        let mut printed = can_chart_formulas(p.n, p.b, p.a, p.r1, p.r2).unwrap();
        printed[3] = (p.n, vec![1, -1, p.a, 0]);
        for (k, (order, ws)) in printed.iter().enumerate() {
            let c = chart(&germ, &weights, k).unwrap();
            let same = match &c.quotient {
                ChartQuotient::Cyclic { order: o, weights } => {
                    o == order && canonical_type(*o, weights) == canonical_type(*order, ws)
                }
                ChartQuotient::NonCyclic { .. } => false,
            };
            if !same {
                mismatches[k] += 1;
                first.get_or_insert_with(|| {
                    format!("(n,b,a,r1,r2)=({},{},{},{},{}) U{}: computed {} vs printed 1/{order}{}", p.n, p.b, p.a, p.r1, p.r2, k + 1, c.quotient, show(ws))
                });
            }
        }
    }
    outcome(
        mismatches.iter().all(|&m| m == 0),
        format!(
            "{} tuples; mismatches U1..U4 = {:?}{}",
            params.len(),
            mismatches,
            first.map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn dimension_lemma() -> Outcome {
    timed(Duration::from_secs(30), || {
        let reports = check_all(41, &int(60)).unwrap();
        let points: usize = reports.iter().map(|r| r.points).sum();
        let failing: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
        outcome(
            !reports.is_empty() && failing.is_empty(),
            format!(
                "{} admissible tuples, {} grid points, {} failing{}",
                reports.len(),
                points,
                failing.len(),
                failing.first().map(|r| format!(" (first: {:?})", r.params)).unwrap_or_default()
            ),
        )
    })
}

fn identity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut problems = Vec::new();
    let mut samples = 0;
    while samples < 1000 {
        let r = rng.gen_range(2..=64i64);
        let b = rng.gen_range(1..r);
        if b.gcd(&r) != 1 {
            continue;
        }
        samples += 1;
        let k = rng.gen_range(0..=r - 2);
        let step = a_term(r, b, k + 1).unwrap() - a_term(r, b, k).unwrap();
        if step != -rat(r * r - 1, 12 * r) + b_term(r, k * b).unwrap() {
            problems.push(format!("step at (r,b,k)=({r},{b},{k})"));
        }
        let k = rng.gen_range(-500..=500i64);
        if a_term(r, b, k).unwrap() + a_term(r, b, -k).unwrap() != -b_term(r, k * b).unwrap() {
            problems.push(format!("symmetry at (r,b,k)=({r},{b},{k})"));
        }
    }
    let mut profiles = 0;
    let mut cells = 0;
    for record in corpus() {
        for inst in &record.instances {
            let p = match instance_profile(inst) {
                Ok(p) => p,
                Err(e) => {
                    problems.push(format!("{} [{}]: {e}", record.id, inst.label));
                    continue;
                }
            };
            profiles += 1;
            let ratio = p.ratio();
            for i in -10..=10 {
                for j in -10..=10 {
                    cells += 1;
                    let d = p.d(i, j);
                    if p.d(i + p.n, j - p.a) != d {
                        problems.push(format!("{} [{}]: period at ({i},{j})", record.id, inst.label));
                    }
                    if p.d(i + 1, j) - &d != p.d_difference(i, j) {
                        problems.push(format!("{} [{}]: difference at ({i},{j})", record.id, inst.label));
                    }
                    let t = &ratio * int(i) + int(j);
                    let on_line = i % p.n == 0 && j == -(i / p.n) * p.a;
                    if on_line && d != int(1) {
                        problems.push(format!("{} [{}]: d({i},{j}) = {d} on Z(n,-a)", record.id, inst.label));
                    }
                    if !on_line && t >= int(0) && t <= ratio && d != int(0) {
                        problems.push(format!("{} [{}]: d({i},{j}) = {d} in the band", record.id, inst.label));
                    }
                }
            }
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "{samples} random (r,b,k), {profiles} corpus profiles, {cells} grid cells, {} failures{}",
            problems.len(),
            problems.first().map(|p| format!(" (first: {p})")).unwrap_or_default()
        ),
    )
}

fn negative_controls() -> Outcome {
    let summary = run_mutations(200, 7);
    let pass = summary.total == 200 && summary.missed == 0 && summary.caught_ratio() >= rat(95, 100);
    outcome(
        pass,
        format!(
            "seed {}: {} of {} caught, {} weight-equivalent, {} missed",
            summary.seed, summary.caught, summary.total, summary.weight_equivalent, summary.missed
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "classification table", table3_reproduction),
        (2, "prime covers", table4_reproduction),
        (3, "cover d values", table5_reproduction),
        (4, "c constants", c_constants),
        (5, "candidate (a,n) sets", candidate_sets),
        (6, "worked-example corpus", corpus_verification),
        (7, "cA/n chart types", chart_oracle),
        (8, "dimension lemma", dimension_lemma),
        (9, "identity suite", identity_suite),
        (10, "negative controls", negative_controls),
    ];
    let mut unexpected = Vec::new();
    for (no, name, run) in criteria {
        let out = run();
        println!("criterion {no:>2} {}: {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        if out.pass == EXPECTED_RED.contains(&no) {
            unexpected.push(no);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
