//! Riemann-Roch values for a basket read from JSON, or a built-in one.

use divcon::arith::{format_rational, rat};
use divcon::rr::{BasketEntry, ContractionProfile, ProfileInput};

fn main() {
    let profile = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable profile");
            let input: ProfileInput = serde_json::from_str(&text).expect("profile JSON");
            input.into_profile().expect("consistent profile")
        }
        None => ContractionProfile::new(
            2,
            2,
            vec![BasketEntry::new(6, 5, 2, 4).unwrap(), BasketEntry::new(2, 1, 1, 1).unwrap()],
            rat(1, 6),
        )
        .unwrap(),
    };
    println!("a/n = {}/{}, E.c2 = {}", profile.a, profile.n, format_rational(&profile.e_c2));
    print!("{:>5}", "i\\j");
    for j in -4..=2 {
        print!("{j:>7}");
    }
    println!();
    for i in -2..=4 {
        print!("{i:>5}");
        for j in -4..=2 {
            print!("{:>7}", format_rational(&profile.d(i, j)));
        }
        println!();
    }
    let i = 1;
    let j = -1;
    println!(
        "d({}, {j}) - d({i}, {j}) = {}",
        i + 1,
        format_rational(&profile.d_difference(i, j))
    );
}
