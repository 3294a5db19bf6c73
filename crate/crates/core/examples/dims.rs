use std::time::Instant;

use divcon::arith::int;
use divcon::dims::{check_all, check_lemma_dim, DimParams};

fn main() {
    let start = Instant::now();
    let reports = check_all(41, &int(60)).expect("grid check");
    let points: usize = reports.iter().map(|r| r.points).sum();
    let failures: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
    println!(
        "{} admissible (a, r1, r2) with r2 <= 41, {points} grid points, {} failures, {:?}",
        reports.len(),
        failures.len(),
        start.elapsed()
    );
    for r in failures.iter().take(5) {
        println!("  {r:?}");
    }

    // A wrong b2 breaks the equality almost at once.
    let off = DimParams::unchecked(3, 5, 7).with_b(4, 3);
    let report = check_lemma_dim(&off, &int(20)).expect("grid check");
    println!("b = (4, 3): holds = {}, {:?}", report.holds, report.counterexample);
}
