//! Continued fractions and approximation witnesses in F_3((1/X)).

use ffdioph::cfrac_witness::{best_witness, cf_expand, convergents, make_liouville, make_periodic};
use ffdioph::field_arith::{make_field, Poly};
use ffdioph::laurent::VecK;

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = make_field(3, 1, None)?;
    let x = Poly::x(&f3);

    let y = make_periodic(&[x.clone(), x.add(&Poly::one(&f3))], 40)?;
    println!("[0; X, X+1, ...] = {}", y.truncate(8));
    let cf = cf_expand(&y, 6)?;
    for (a, (p, q)) in cf.quotients.iter().zip(convergents(&cf)) {
        println!("  a = {a:<8} p/q = ({p}) / ({q})");
    }

    // Liouville-type series are extremely well approximable.
    let z = make_liouville(&f3, 3, 90)?;
    for bound in 1..=3 {
        let w = best_witness(&VecK(vec![z.clone()]), bound)?;
        println!("deg q <= {bound}: q = {}, |p + q z| = {}", w.q[0], w.err);
    }
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
