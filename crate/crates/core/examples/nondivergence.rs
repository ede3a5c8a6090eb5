//! Measure of points whose flowed lattice has a short vector.

use ffdioph::flows::flow_vectors;
use ffdioph::goodfn::{good_constants, BallSpec};
use ffdioph::laurent::NormExp;
use ffdioph::nondiv::verify_impmain;
use ffdioph::parse::{parse_field, parse_map};

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = parse_field("3")?;
    let f = parse_map(&f3, "x;x^2", None)?;
    let ball = BallSpec::unit(&f3, 1);
    let (c, alpha) = good_constants(1, 2);
    let eps = [NormExp::Finite(-1), NormExp::Finite(-2)];
    let rep = verify_impmain(&f, &ball, &flow_vectors(2, 3), &eps, &c, alpha, NormExp::ONE, 12)?;
    for r in &rep.rows {
        println!(
            "t = {:<6} eps = {:<3} measure {:<10} <= {}: {}",
            r.t.to_string(),
            r.eps.to_string(),
            r.measure.to_string(),
            r.bound,
            r.pass
        );
    }
    println!("all rows within bound: {}", rep.overall);
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
