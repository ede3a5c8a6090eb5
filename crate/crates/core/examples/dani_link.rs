//! From a good rational approximation to a short vector on the flow.

use ffdioph::cfrac_witness::witness_for;
use ffdioph::flows::{link_params, verify_link};
use ffdioph::parse::{parse_field, parse_poly_vec, parse_vec};
use num_rational::Rational64;

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = parse_field("3")?;
    let x = parse_vec(&f3, "liouville:3", 200)?;
    let eps = Rational64::new(1, 1);
    for q in ["X", "X^3", "X^9"] {
        let q = parse_poly_vec(&f3, q)?;
        let p = link_params(&q, eps)?;
        let w = witness_for(&x, &q)?;
        let r = verify_link(&x, &w, eps)?;
        println!(
            "q = {:<4} err {:>4}  t = {:<5} r = {:>3}  delta = {:>3}  holds {}",
            q[0].to_string(),
            w.err.to_string(),
            p.t.to_string(),
            p.r.to_string(),
            r.delta.to_string(),
            r.holds
        );
    }
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
