//! Prime-degree covers, the degree-two `d` tuples and the exceptional `(a, n)` candidates.

use divcon::classification::table3;
use divcon::covering::{coprime_candidates, enumerate_prime_covers, pattern_d_tuples, realizable_d_tuples, table5};

fn main() {
    let steps = enumerate_prime_covers(24);
    println!("{} prime covers with r <= 24", steps.len());
    for s in steps.iter().filter(|s| s.source_params.iter().all(|&r| r <= 8)) {
        println!("  No {:>2} {} --{}--> No {:>2} {}", s.source_no, s.source, s.p, s.target_no, s.target);
    }

    for row in table5() {
        let params = if table3()[row.type_no as usize - 1].is_parametric() { vec![8] } else { vec![] };
        let points = row.points(&params);
        println!(
            "No {} {:?}: printed {:?}, from ramification {:?}, from consistent data {:?}",
            row.type_no,
            points,
            row.printed(&params),
            pattern_d_tuples(&points, row.p),
            realizable_d_tuples(&points, row.p)
        );
    }

    for no in [14, 15] {
        let c = coprime_candidates(no).expect("rows 14 and 15");
        println!("No {no}: gcd 2 candidates {:?}, after the d(2,0) - d(1,0) test {:?}", c.pre, c.post);
    }
}
