//! Measures of short-vector sets against counting on a fine grid.

use ffdioph::exact::MeasureValue;
use ffdioph::flows::{traj_delta, FlowVector};
use ffdioph::goodfn::{grid, BallSpec};
use ffdioph::laurent::{NormExp, VecK};
use ffdioph::nondiv::measure_e;
use ffdioph::parse::{parse_field, parse_map};

fn grid_measure(p: &str, map: &str, t: &[u64], eps: i64, n: i64) -> (MeasureValue, MeasureValue) {
    let field = parse_field(p).unwrap();
    let f = parse_map(&field, map, None).unwrap();
    let b = BallSpec::unit(&field, f.d);
    let t = FlowVector::new(t.to_vec());
    let eps = NormExp::Finite(eps);
    let engine = measure_e(&f, &b, &t, eps, 16).unwrap();
    let hits = grid(&b, n).filter(|x| traj_delta(&VecK(f.eval(x).unwrap()), &t).unwrap() < eps).count() as u64;
    let oracle = MeasureValue::from_cells(field.k(), [(hits, (n + 1) * f.d as i64)]);
    (engine, oracle)
}

#[test]
fn parabola_over_f3() {
    for (t, eps) in [(vec![1, 1], -1), (vec![2, 0], -1), (vec![0, 3], -1), (vec![1, 2], -2)] {
        let (e, o) = grid_measure("3", "x;x^2", &t, eps, 6);
        assert_eq!(e, o, "t = {t:?}");
    }
}

#[test]
fn cubic_curve_over_f2() {
    for (t, eps) in [(vec![1, 1], -1), (vec![2, 1], -1), (vec![0, 2], -2)] {
        let (e, o) = grid_measure("2", "x;x^3", &t, eps, 9);
        assert_eq!(e, o, "t = {t:?}");
    }
}
