//! Successive minima of polynomial lattices.

use ffdioph::field_arith::make_field;
use ffdioph::laurent::{LaurentBall, NormExp};
use ffdioph::polylattice::{det_norm, random_unimodular, reduce_basis, LatticeBasis};
use rand::SeedableRng;

fn show(minima: &[NormExp]) -> String {
    minima.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = make_field(3, 1, None)?;
    let diag = LatticeBasis::diagonal(&[LaurentBall::x_pow(&f3, 2), LaurentBall::x_pow(&f3, -2)])?;
    let r = reduce_basis(&diag)?;
    println!("diag(X^2, X^-2): minima {}", show(&r.minima));

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let b = random_unimodular(&f3, 3, 3, &mut rng);
        let r = reduce_basis(&b)?;
        let sum: i64 = r.minima.iter().filter_map(|m| m.exp()).sum();
        println!("det {}, minima {}, product k^{sum}", det_norm(&b)?, show(&r.minima));
    }
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
