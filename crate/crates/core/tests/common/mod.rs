#![allow(dead_code)]

use ffdioph::field_arith::Poly;
use ffdioph::polylattice::{scaled_poly_rows, LatticeBasis};

/// Runs the command line in-process: exit code, stdout, stderr.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["ffdioph".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ffdioph::cli::run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// JSON lines of a successful run.
pub fn cli_json(args: &[&str]) -> Vec<serde_json::Value> {
    let (code, out, err) = cli(args);
    assert_eq!(code, 0, "ffdioph {args:?}: {err}");
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

/// Incremental row echelon form over `F_q(X)` by cross multiplication.
struct Echelon {
    rows: Vec<(usize, Vec<Poly>)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<Poly>) -> bool {
        for (p, b) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let (bp, vp) = (b[*p].clone(), v[*p].clone());
            v = v.iter().zip(b).map(|(x, y)| &(&bp * x) - &(&vp * y)).collect();
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

/// Successive minima exponents by exhaustive search over integer
/// combinations with coefficient degree `<= coef_deg`. `None` if those
/// combinations do not span.
pub fn brute_minima(b: &LatticeBasis, coef_deg: usize) -> Option<Vec<i64>> {
    let field = b.field().clone();
    let m = b.dim();
    let (rows, s) = scaled_poly_rows(b.rows());
    let coeffs: Vec<Poly> = Poly::all_up_to_degree(&field, coef_deg).collect();
    let table: Vec<Vec<Vec<Poly>>> =
        rows.iter().map(|r| coeffs.iter().map(|c| r.iter().map(|e| c * e).collect()).collect()).collect();
    let n = coeffs.len();
    let total = n.pow(m as u32);
    let combo = |mut idx: usize| -> Vec<Poly> {
        let mut v = vec![Poly::zero(&field); m];
        for t in &table {
            let part = &t[idx % n];
            idx /= n;
            for (vj, pj) in v.iter_mut().zip(part) {
                *vj = &*vj + pj;
            }
        }
        v
    };
    let mut by_deg: Vec<(usize, usize)> =
        (1..total).filter_map(|i| combo(i).iter().filter_map(Poly::degree).max().map(|d| (d, i))).collect();
    by_deg.sort_unstable();
    let mut ech = Echelon { rows: Vec::new() };
    let mut minima = Vec::with_capacity(m);
    for (d, i) in by_deg {
        if ech.insert(combo(i)) {
            minima.push(d as i64 - s);
            if minima.len() == m {
                return Some(minima);
            }
        }
    }
    None
}
