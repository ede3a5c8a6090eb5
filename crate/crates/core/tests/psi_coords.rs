//! Plücker coordinates of `h(x) Delta` against the direct wedge product.

use ffdioph::flows::FlowVector;
use ffdioph::laurent::LaurentBall;
use ffdioph::nondiv::{psi_delta, psi_delta_coords, HSpec};
use ffdioph::parse::{parse_field, parse_map};
use ffdioph::polylattice::enumerate_primitive;
use rand::{Rng, SeedableRng};

#[test]
fn coordinates_match_wedge() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for (p, map) in [("3", "x;x^2"), ("2", "x;x^3"), ("3", "x1+x2;x1*x2"), ("5", "x^2;x+X*x^3")] {
        let field = parse_field(p).unwrap();
        let f = parse_map(&field, map, None).unwrap();
        let subs = enumerate_primitive(&field, f.n() + 1, f.n() + 1, 1);
        for _ in 0..300 {
            let t = FlowVector::new((0..f.n()).map(|_| rng.gen_range(0..4)).collect());
            let h = HSpec::new(f.clone(), t).unwrap();
            let x: Vec<LaurentBall> = (0..f.d)
                .map(|_| {
                    let terms: Vec<_> =
                        (-1..4).map(|i| (i, field.from_int(rng.gen_range(0..field.k()) as i64))).collect();
                    LaurentBall::from_terms(&field, &terms)
                })
                .collect();
            let sub = &subs[rng.gen_range(0..subs.len())];
            assert_eq!(psi_delta(&h, &x, sub).unwrap(), psi_delta_coords(&h, &x, sub).unwrap(), "{sub} at {x:?}");
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}
