//! Conditions on cA/n weighted blow-ups and the chart types they produce.

use divcon::arith::int;
use divcon::blowup::{can_chart_formulas, chart};
use divcon::poly::Polynomial;
use divcon::verifier::{bprime_of, check_can, lemma67, CanParams};

fn main() {
    let p = CanParams { n: 3, b: 1, a: 4, r1: 1, r2: 11 };
    let g = Polynomial::from_terms(4, vec![(vec![0, 0, 3, 0], int(1)), (vec![0, 0, 0, 4], int(1))]);
    let report = check_can(p, &g).unwrap();
    for c in &report.conditions {
        println!("({}) {} {}", c.name, if c.pass { "holds" } else { "fails" }, c.detail);
    }
    println!("coprimality: {:?}", lemma67(p.n, p.b, bprime_of(p.b, p.n).unwrap(), p.a, p.r1, p.r2));
    let germ = p.standard_germ().unwrap();
    let forms = can_chart_formulas(p.n, p.b, p.a, p.r1, p.r2).unwrap();
    for (k, (order, ws)) in forms.iter().enumerate() {
        let c = chart(&germ, &p.weights(), k).unwrap();
        println!("U{}: computed {}, closed form 1/{order}{ws:?}", k + 1, c.quotient);
    }
}
