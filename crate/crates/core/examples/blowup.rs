//! Weighted blow-up of a quotient germ: discrepancy, E^3 and the affine charts.

use divcon::blowup::{charts, discrepancy, e_cubed, BlowupWeights};
use divcon::germ::parse_germ;
use divcon::singularity::point_kind;

const DEFAULT_GERM: &str = "quotient 1/2(1,1,1,0); eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;";

fn main() {
    let mut args = std::env::args().skip(1);
    let germ_text = args.next().unwrap_or_else(|| DEFAULT_GERM.to_string());
    let weights_text = args.next().unwrap_or_else(|| "4,2,1,3".to_string());
    let germ = parse_germ(&germ_text).expect("germ");
    let weights = BlowupWeights::parse(&weights_text).expect("weights");
    println!("{germ}point {}", point_kind(&germ));
    println!("weights ({weights}): discrepancy {}, E^3 {}", discrepancy(&germ, &weights).unwrap(), e_cubed(&germ, &weights).unwrap());
    for c in charts(&germ, &weights).expect("primitive weights") {
        println!("U{} {} origin {:?}", c.chart_index, c.quotient, c.origin);
        for eq in &c.strict_transform {
            println!("   {eq}");
        }
    }
}
