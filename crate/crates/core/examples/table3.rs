//! Enumerates baskets with indices up to a bound and groups them by row.

use divcon::arith::format_rational;
use divcon::classification::{classify, enumerate_baskets, table3};

fn main() {
    let r_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let found = enumerate_baskets(r_max);
    println!("{} baskets with r <= {r_max}", found.len());
    for row in table3() {
        let members: Vec<String> = found
            .iter()
            .filter(|(shape, _)| classify(shape).is_ok_and(|(no, _)| no == row.type_no))
            .map(|(shape, value)| format!("{shape}={}", format_rational(value)))
            .collect();
        let preview: Vec<&str> = members.iter().take(3).map(String::as_str).collect();
        println!(
            "No {:>2} {:<26} {:<10} {:>5}  {}{}",
            row.type_no,
            row.label(),
            row.value.label(),
            members.len(),
            preview.join(" "),
            if members.len() > 3 { " ..." } else { "" }
        );
    }
}
