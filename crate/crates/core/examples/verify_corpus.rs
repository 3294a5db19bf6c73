use divcon::verifier::{run_mutations, verify_corpus};

fn main() {
    for report in verify_corpus() {
        println!("{} {}", report.id, report.verdict);
        for check in &report.checks {
            println!("  {} {} {}", if check.pass { "ok " } else { "BAD" }, check.name, check.detail);
        }
    }
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let summary = run_mutations(200, seed);
    println!(
        "mutations: {} sampled, {} caught, {} weight-equivalent, {} missed",
        summary.total, summary.caught, summary.weight_equivalent, summary.missed
    );
    for r in summary.results.iter().filter(|r| r.outcome != divcon::verifier::MutationOutcome::Caught) {
        println!("  {} [{}] {} {:?}", r.example, r.instance, r.mutation, r.outcome);
    }
}
