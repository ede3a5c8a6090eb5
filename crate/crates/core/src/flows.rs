//! Diagonal flows on lattices `u_x Z^(n+1)` and the trajectory observable
//! `delta(g_t u_x Z^(n+1))`.
//!
//! `u_x` has first row `(1, x_1, ..., x_n)` over the identity, so the lattice
//! is spanned by `e_0` and `x_i e_0 + e_i`, and `u_x (p, q) = (p + q.x, q)`.
//! `g_t = diag(X^(t_1+...+t_n), X^-t_1, ..., X^-t_n)`.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::cfrac_witness::{pi_plus, Witness};
use crate::error::{Error, Result};
use crate::field_arith::Poly;
use crate::laurent::{LaurentBall, NormExp, VecK};
use crate::polylattice::{delta, LatticeBasis};

/// Flow parameters `t = (t_1, ..., t_n)`, all non-negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlowVector {
    t: Vec<u64>,
}

impl FlowVector {
    pub fn new(t: Vec<u64>) -> Self {
        FlowVector { t }
    }

    pub fn zero(n: usize) -> Self {
        FlowVector { t: vec![0; n] }
    }

    /// `g_t = diag(X^(nt), X^-t, ..., X^-t)`.
    pub fn one_param(n: usize, t: u64) -> Self {
        FlowVector { t: vec![t; n] }
    }

    pub fn t(&self) -> &[u64] {
        &self.t
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn t_sum(&self) -> u64 {
        self.t.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(|&t| t == 0)
    }
}

impl fmt::Display for FlowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.t.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `t` in `Z_+^n` with `t_sum <= total`, ordered by `t_sum` then
/// lexicographically.
pub fn flow_vectors(n: usize, total: u64) -> Vec<FlowVector> {
    fn fill(n: usize, rest: u64, cur: &mut Vec<u64>, out: &mut Vec<FlowVector>) {
        if cur.len() + 1 == n {
            cur.push(rest);
            out.push(FlowVector::new(cur.clone()));
            cur.pop();
            return;
        }
        for a in 0..=rest {
            cur.push(a);
            fill(n, rest - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for s in 0..=total {
        fill(n, s, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Basis of `Lambda_x = u_x Z^(n+1)`; entries must be exact.
pub fn unipotent(fx: &VecK) -> Result<LatticeBasis> {
    let field = fx.field().ok_or(Error::InvalidArgument("empty vector".into()))?.clone();
    if fx.0.iter().any(|a| *a.field() != field) {
        return Err(Error::FieldMismatch);
    }
    if fx.0.iter().any(|a| !a.is_exact()) {
        return Err(Error::precision("unipotent basis needs exact entries"));
    }
    let m = fx.len() + 1;
    let zero = LaurentBall::zero(&field);
    let one = LaurentBall::one(&field);
    let rows = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match (i, j) {
                    (0, 0) => one.clone(),
                    (i, 0) => fx.0[i - 1].clone(),
                    (i, j) if i == j => one.clone(),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    LatticeBasis::new(rows)
}

/// `g_t` applied to every basis vector.
pub fn flow_apply(t: &FlowVector, b: &LatticeBasis) -> Result<LatticeBasis> {
    if b.dim() != t.n() + 1 {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: t.n() + 1 });
    }
    let sum = t.t_sum() as i64;
    let rows = b
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, a)| if j == 0 { a.shift(sum) } else { a.shift(-(t.t[j - 1] as i64)) })
                .collect()
        })
        .collect();
    LatticeBasis::new(rows)
}

/// Slack exponent `s` for a perturbation `x -> x + y` with `|y_i| <= k^rad_i`:
/// `g_t u_(x+y) = (g_t u_y g_t^-1) g_t u_x` and the conjugate is
/// `I + E` with `|E| <= k^s`, `s = max_i (t_sum + t_i + rad_i)`. When `s <= 0`
/// it lies in `GL_(n+1)(O)` and `delta` is unchanged; otherwise `delta` moves
/// by at most a factor `k^s`. `None` when every `y_i` vanishes.
pub fn perturbation_slack(t: &FlowVector, rad: &[NormExp]) -> Option<i64> {
    let sum = t.t_sum() as i64;
    rad.iter().zip(&t.t).filter_map(|(r, &ti)| r.exp().map(|e| sum + ti as i64 + e)).max()
}

/// `delta(g_t Lambda_x)`. For ball-valued `x` the value is computed at the
/// centers and certified by [`perturbation_slack`].
pub fn traj_delta(fx: &VecK, t: &FlowVector) -> Result<NormExp> {
    if fx.len() != t.n() {
        return Err(Error::DimensionMismatch { expected: fx.len(), got: t.n() });
    }
    let center = VecK(fx.0.iter().map(LaurentBall::center).collect());
    let rad: Vec<NormExp> = fx.0.iter().map(|a| a.radius_exp().map_or(NormExp::Zero, NormExp::Finite)).collect();
    if let Some(s) = perturbation_slack(t, &rad) {
        if s > 0 {
            return Err(Error::precision(format!("input precision too low for flow {t}")));
        }
    }
    delta(&flow_apply(t, &unipotent(&center)?)?)
}

/// The flow attached to a witness at exponent `eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkParams {
    /// `Pi_+(q) = k^m`.
    pub m: i64,
    /// `r = k^-floor(m eps / (n+1))`.
    pub r: NormExp,
    pub t: FlowVector,
    pub eps: Rational64,
    /// Measured `log_k(1/r) / t_sum`; `None` when `t_sum = 0`.
    pub gamma: Option<Rational64>,
}

pub fn link_params(q: &[Poly], eps: Rational64) -> Result<LinkParams> {
    if q.is_empty() || q.iter().all(Poly::is_zero) {
        return Err(Error::InvalidArgument("q must be nonzero".into()));
    }
    if eps <= Rational64::from_integer(0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let n = q.len() as i64;
    let m = pi_plus(q).exp().expect("Pi_+ is at least 1");
    let fl = (Rational64::from_integer(m) * eps / Rational64::from_integer(n + 1)).floor().to_integer();
    let t: Vec<u64> = q.iter().map(|p| (p.degree().unwrap_or(0) as i64 + fl) as u64).collect();
    let t = FlowVector::new(t);
    let gamma = match t.t_sum() {
        0 => None,
        s => Some(Rational64::new(fl, s as i64)),
    };
    Ok(LinkParams { m, r: NormExp::Finite(-fl), t, eps, gamma })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkReport {
    pub holds: bool,
    pub delta: NormExp,
    pub r: NormExp,
    /// Norm of `g_t u_x (p, q)`.
    pub witness_vector_norm: NormExp,
    pub params: LinkParams,
}

/// `|p + q.x| <= Pi_+(q)^(-1-eps)`, exactly.
pub fn satisfies_vwma(w: &Witness, eps: Rational64) -> bool {
    match (w.err, w.pi_plus_q) {
        (NormExp::Zero, _) => true,
        (NormExp::Finite(e), NormExp::Finite(m)) => {
            Rational64::from_integer(e) <= -Rational64::from_integer(m) * (Rational64::from_integer(1) + eps)
        }
        (NormExp::Finite(_), NormExp::Zero) => false,
    }
}

/// Computes both sides of `delta(g_t Lambda_x) <= r` for the flow built from
/// the witness.
pub fn verify_link(x: &VecK, w: &Witness, eps: Rational64) -> Result<LinkReport> {
    if w.q.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: w.q.len() });
    }
    if !satisfies_vwma(w, eps) {
        return Err(Error::WitnessTooWeak);
    }
    let params = link_params(&w.q, eps)?;
    let d = traj_delta(x, &params.t)?;
    let sum = params.t.t_sum() as i64;
    let mut wv = w.err.scale(sum);
    for (qi, &ti) in w.q.iter().zip(params.t.t()) {
        if let Some(dg) = qi.degree() {
            wv = wv.max(NormExp::Finite(dg as i64 - ti as i64));
        }
    }
    Ok(LinkReport { holds: d <= params.r, delta: d, r: params.r, witness_vector_norm: wv, params })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ScanVariant {
    /// Every `t` with `t_sum <= T`.
    Multi,
    /// `t = (s, ..., s)` for `s <= T`.
    OneParam,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub min_delta: NormExp,
    pub argmin_t: FlowVector,
    /// `min_delta^(n+1)`.
    pub floor_c: NormExp,
    pub rows: Vec<(FlowVector, NormExp)>,
}

/// `delta` along a list of flows.
pub fn trajectory(x: &VecK, ts: &[FlowVector]) -> Result<Vec<(FlowVector, NormExp)>> {
    ts.iter().map(|t| Ok((t.clone(), traj_delta(x, t)?))).collect()
}

pub fn scan_flows(n: usize, total: u64, variant: ScanVariant) -> Vec<FlowVector> {
    match variant {
        ScanVariant::Multi => flow_vectors(n, total),
        ScanVariant::OneParam => (0..=total).map(|s| FlowVector::one_param(n, s)).collect(),
    }
}

/// Minimum of `delta(g_t Lambda_x)` over the scanned flows; ties go to the
/// first flow in scan order.
pub fn bounded_scan(x: &VecK, total: u64, variant: ScanVariant) -> Result<ScanReport> {
    let rows = trajectory(x, &scan_flows(x.len(), total, variant))?;
    scan_report(x.len(), rows)
}

/// Folds precomputed trajectory rows into a [`ScanReport`].
pub fn scan_report(n: usize, rows: Vec<(FlowVector, NormExp)>) -> Result<ScanReport> {
    let (t, d) = rows
        .iter()
        .fold(None::<&(FlowVector, NormExp)>, |best, row| match best {
            Some(b) if b.1 <= row.1 => Some(b),
            _ => Some(row),
        })
        .cloned()
        .ok_or(Error::InvalidArgument("empty scan".into()))?;
    Ok(ScanReport { min_delta: d, argmin_t: t, floor_c: d.scale(n as i64 + 1), rows })
}

/// Integer ceiling of `gamma * t_sum`.
pub fn gamma_exponent(gamma: Rational64, t_sum: u64) -> i64 {
    let v = gamma * Rational64::from_integer(t_sum as i64);
    v.numer().div_ceil(v.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac_witness::{make_liouville, make_periodic, witness_for};
    use crate::field_arith::{Field, Fq};
    use crate::polylattice::det_norm;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn one(x: LaurentBall) -> VecK {
        VecK(vec![x])
    }

    #[test]
    fn unipotent_examples() {
        let f = f3();
        let b = unipotent(&VecK(vec![LaurentBall::zero(&f); 2])).unwrap();
        assert_eq!(b, LatticeBasis::identity(&f, 3));
        let b = unipotent(&one(LaurentBall::x_pow(&f, -1))).unwrap();
        assert_eq!(b.to_string(), "1,0;X^-1,1");
        assert_eq!(det_norm(&b).unwrap(), NormExp::ONE);
    }

    #[test]
    fn flow_examples() {
        let f = f3();
        let z3 = LatticeBasis::identity(&f, 3);
        assert_eq!(flow_apply(&FlowVector::zero(2), &z3).unwrap(), z3);
        let b = flow_apply(&FlowVector::new(vec![1, 1]), &z3).unwrap();
        assert_eq!(delta(&b).unwrap(), NormExp::Finite(-1));
        assert_eq!(det_norm(&b).unwrap(), NormExp::ONE);
        assert!(flow_apply(&FlowVector::new(vec![1]), &z3).is_err());
    }

    #[test]
    fn traj_examples() {
        let f = f3();
        let t4 = FlowVector::new(vec![4]);
        assert_eq!(traj_delta(&one(LaurentBall::zero(&f)), &t4).unwrap(), NormExp::Finite(-4));
        assert_eq!(traj_delta(&one(LaurentBall::x_pow(&f, -1)), &t4).unwrap(), NormExp::Finite(-3));
        // every convergent error is exactly 1/|q_(n+1)|, so no flowed vector beats 1
        let per = make_periodic(&[Poly::x(&f)], 40).unwrap();
        assert_eq!(traj_delta(&one(per.clone()), &t4).unwrap(), NormExp::ONE);
        let low = per.truncate(6);
        assert!(matches!(traj_delta(&one(low), &t4), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn link_examples() {
        let f = f3();
        let x3 = Poly::monomial(&f, Fq::ONE, 3);
        let p = link_params(&[x3], Rational64::from_integer(1)).unwrap();
        assert_eq!((p.m, p.r, p.t.t().to_vec()), (3, NormExp::Finite(-1), vec![4]));
        let p = link_params(&[Poly::one(&f)], Rational64::new(7, 3)).unwrap();
        assert_eq!((p.m, p.r, p.t.t().to_vec()), (0, NormExp::ONE, vec![0]));
        let xx = vec![Poly::x(&f), Poly::x(&f)];
        let p = link_params(&xx, Rational64::from_integer(2)).unwrap();
        assert_eq!((p.m, p.r, p.t.t().to_vec()), (2, NormExp::Finite(-1), vec![2, 2]));
    }

    #[test]
    fn liouville_link() {
        let f = f3();
        let x = one(make_liouville(&f, 3, 200).unwrap());
        for j in 1..=3u32 {
            let q = vec![Poly::monomial(&f, Fq::ONE, 3usize.pow(j))];
            let w = witness_for(&x, &q).unwrap();
            let r = verify_link(&x, &w, Rational64::from_integer(1)).unwrap();
            assert!(r.holds, "j = {j}");
            if j == 1 {
                assert_eq!(w.err, NormExp::Finite(-6));
                assert_eq!(r.r, NormExp::Finite(-1));
                assert_eq!(r.params.t.t(), &[4]);
                assert_eq!(r.witness_vector_norm, NormExp::Finite(-1));
            }
        }
        let weak = witness_for(&x, &[Poly::x(&f)]).unwrap();
        assert!(matches!(verify_link(&x, &weak, Rational64::from_integer(5)), Err(Error::WitnessTooWeak)));
        let z = one(LaurentBall::zero(&f));
        let w = witness_for(&z, &[Poly::one(&f)]).unwrap();
        let r = verify_link(&z, &w, Rational64::from_integer(1)).unwrap();
        assert!(r.holds && r.delta == NormExp::ONE);
    }

    #[test]
    fn scans() {
        let f = f3();
        let per = one(make_periodic(&[Poly::x(&f)], 50).unwrap());
        let r = bounded_scan(&per, 20, ScanVariant::OneParam).unwrap();
        assert_eq!(r.min_delta, NormExp::ONE);
        assert!(r.rows.iter().all(|(_, d)| *d == NormExp::ONE));
        let inv = one(LaurentBall::x_pow(&f, -1));
        let r = bounded_scan(&inv, 20, ScanVariant::OneParam).unwrap();
        assert_eq!(r.min_delta, NormExp::Finite(-19));
        for (t, d) in &r.rows[1..] {
            assert_eq!(*d, NormExp::Finite(1 - t.t()[0] as i64));
        }
        let r = bounded_scan(&one(LaurentBall::zero(&f)), 7, ScanVariant::Multi).unwrap();
        assert_eq!(r.min_delta, NormExp::Finite(-7));
        assert_eq!(flow_vectors(2, 2).len(), 6);
    }

    #[test]
    fn gamma_ceiling() {
        assert_eq!(gamma_exponent(Rational64::new(1, 2), 3), 2);
        assert_eq!(gamma_exponent(Rational64::from_integer(1), 3), 3);
    }
}
