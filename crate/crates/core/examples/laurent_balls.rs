//! Laurent series in 1/X with explicit precision.

use ffdioph::field_arith::make_field;
use ffdioph::laurent::LaurentBall;

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = make_field(3, 1, None)?;
    let one = LaurentBall::one(&f3);
    let x_inv = LaurentBall::x_pow(&f3, -1);

    // 1 / (1 - X^-1) = 1 + X^-1 + X^-2 + ... up to O(X^-9)
    let geom = one.sub(&x_inv).inv(8)?;
    println!("1/(1 - X^-1) = {geom}");
    println!("norm exponent {}, radius exponent {:?}", geom.norm()?, geom.radius_exp());

    // Products lose nothing below the weaker precision.
    let sq = geom.mul(&geom);
    println!("square = {sq}");
    println!("polynomial part of X^2 * square: {}", sq.shift(2).polynomial_part()?);

    // Cancellation inside the radius leaves an undetermined norm.
    let d = geom.sub(&geom.truncate(3));
    println!("tail = {d}, norm known: {}", d.try_norm().is_some());
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
