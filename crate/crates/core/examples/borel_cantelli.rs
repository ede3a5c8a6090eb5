//! Shell sums of the sets where the flowed lattice is very short.

use ffdioph::goodfn::BallSpec;
use ffdioph::nondiv::bc_partial_sums;
use ffdioph::parse::{parse_field, parse_map};
use num_rational::Rational64;

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = parse_field("3")?;
    let f = parse_map(&f3, "x;x^2", None)?;
    let ball = BallSpec::unit(&f3, 1);
    for r in bc_partial_sums(&f, &ball, Rational64::new(1, 1), 5, 14)? {
        println!(
            "q = {} delta <= k^{:<3} shell {:<12} partial sum {:.6}",
            r.q,
            r.delta_exp,
            r.shell.to_string(),
            r.partial.to_pow_product().map_or(0.0, |p| p.approx())
        );
    }
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
