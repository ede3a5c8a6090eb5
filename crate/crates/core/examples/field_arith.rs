//! Arithmetic in F_4 = F_2[g]/(g^2+g+1) and in F_4[X].

use ffdioph::field_arith::{make_field, Poly};

pub fn run_example() -> ffdioph::Result<()> {
    let f4 = make_field(2, 2, Some(&[1, 1, 1]))?;
    println!("field {f4}, k = {}", f4.k());

    let g = f4.generator();
    for e in 0..4 {
        println!("g^{e} = {}", f4.fmt_elem(f4.pow(g, e)));
    }
    let ginv = f4.inv(g).expect("g is a unit");
    println!("g^-1 = {}", f4.fmt_elem(ginv));

    // (X^3 + g) = (X + 1)(X^2 + X + 1) + remainder
    let a = Poly::new(&f4, vec![g, f4.zero(), f4.zero(), f4.one()]);
    let b = Poly::from_ints(&f4, &[1, 1, 1]);
    let (q, r) = a.divmod(&b)?;
    println!("({a}) = ({b})({q}) + ({r})");
    println!("gcd = {}", a.gcd(&b)?);
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
