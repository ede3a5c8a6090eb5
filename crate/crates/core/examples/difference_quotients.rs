//! Divided differences and the nondegeneracy order.

use ffdioph::calculus::{factorial_identity_check, nondeg_order, phi_n};
use ffdioph::laurent::LaurentBall;
use ffdioph::parse::{parse_field, parse_map, parse_mpoly};

pub fn run_example() -> ffdioph::Result<()> {
    let f5 = parse_field("5")?;
    let f = parse_mpoly(&f5, "x^4 + 2*x", None)?;
    let pts: Vec<LaurentBall> = [0, 1, 2, 3].iter().map(|&c| LaurentBall::constant(&f5, f5.from_int(c))).collect();
    for n in 1..=3 {
        println!("phi_{n}(x^4+2x; 0..{n}) = {}", phi_n(&f, &pts[..=n])?);
    }
    // j! phi_j on the diagonal agrees with the j-th derivative.
    let a = LaurentBall::x_pow(&f5, -1);
    println!("identity holds for j = 1..3: {}", (1..=3).all(|j| factorial_identity_check(&f, j, &a).unwrap_or(false)));

    let zero = vec![LaurentBall::zero(&f5)];
    for s in ["x;x^2", "x;x^2;x^3", "x^2;x^4"] {
        let map = parse_map(&f5, s, None)?;
        println!("l({s}) at 0 = {:?}", nondeg_order(&map, &zero, 6, false)?);
    }
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
