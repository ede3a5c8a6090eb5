//! Exact sublevel measures and the (C, alpha)-good property.

use ffdioph::exact::PowProduct;
use ffdioph::goodfn::{check_good, good_constants, sup_on_ball, BallSpec, DEFAULT_CAP};
use ffdioph::laurent::NormExp;
use ffdioph::parse::{parse_field, parse_mpoly};
use num_rational::Rational64;

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = parse_field("3")?;
    let ball = BallSpec::unit(&f3, 1);
    let eps: Vec<NormExp> = (1..=4).map(|j| NormExp::Finite(-j)).collect();

    for s in ["x^2", "x^3 - x", "x^3 + X^-2"] {
        let f = parse_mpoly(&f3, s, None)?;
        let sup = sup_on_ball(&f, &ball, DEFAULT_CAP)?;
        let r = check_good(&f, &ball, &PowProduct::one(), Rational64::new(1, 3), &eps, DEFAULT_CAP)?;
        let levels: Vec<String> = r.entries.iter().map(|e| e.sublevel.to_string()).collect();
        println!("{s:<11} sup {sup:<5} sublevels {}  good(1, 1/3): {}", levels.join(" "), r.overall);
    }

    let (c, alpha) = good_constants(1, 3);
    println!("constants for d = 1, l = 3: C = {c}, alpha = {alpha}");
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
