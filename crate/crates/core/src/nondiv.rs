//! Quantitative nondivergence for `h(x) = g_t u_f(x)`: the submodule
//! functions `psi_Delta(x) = |h(x) Delta|`, the hypotheses of the
//! nondivergence theorem on a ball, and exact measures of
//! `E = {x in B : delta(g_t Lambda_f(x)) < eps}`.

use std::collections::HashMap;

use num_rational::Rational64;

use crate::calculus::{MPoly, PolyMap};
use crate::error::{Error, Result};
use crate::exact::{MeasureValue, PowProduct};
use crate::flows::{flow_apply, flow_vectors, gamma_exponent, perturbation_slack, unipotent, FlowVector};
use crate::goodfn::{check_good_max, BallSpec, Bounds, CellEngine, CellView, GoodReport, MaxNorm, Observable};
use crate::laurent::{LaurentBall, NormExp, VecK};
use crate::polylattice::{delta, enumerate_primitive, maximal_minors, subsets, wedge_norm, Submodule};

/// `h(x) = g_t u_f(x)` acting on `K^(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSpec {
    pub f: PolyMap,
    pub t: FlowVector,
}

impl HSpec {
    pub fn new(f: PolyMap, t: FlowVector) -> Result<Self> {
        if f.n() != t.n() {
            return Err(Error::DimensionMismatch { expected: f.n(), got: t.n() });
        }
        Ok(HSpec { f, t })
    }

    pub fn m(&self) -> usize {
        self.f.n() + 1
    }

    /// Exponent of the `g_t` weight on coordinate `j`.
    fn weight(&self, j: usize) -> i64 {
        if j == 0 {
            self.t.t_sum() as i64
        } else {
            -(self.t.t()[j - 1] as i64)
        }
    }

    /// `h(x) v` for an integral vector `v`.
    pub fn apply(&self, fx: &[LaurentBall], v: &[crate::Poly]) -> Vec<LaurentBall> {
        let mut out: Vec<LaurentBall> = v.iter().map(LaurentBall::from_poly).collect();
        for (i, fi) in fx.iter().enumerate() {
            out[0] = out[0].add(&fi.mul(&out[i + 1]));
        }
        out.into_iter().enumerate().map(|(j, a)| a.shift(self.weight(j))).collect()
    }
}

/// `psi_Delta(x)` as the wedge norm of the images of a basis of `Delta`.
pub fn psi_delta(h: &HSpec, x: &[LaurentBall], sub: &Submodule) -> Result<NormExp> {
    if sub.ambient_dim() != h.m() {
        return Err(Error::DimensionMismatch { expected: h.m(), got: sub.ambient_dim() });
    }
    let fx = h.f.eval(x)?;
    let rows: Vec<Vec<LaurentBall>> = sub.basis.iter().map(|v| h.apply(&fx, v)).collect();
    Ok(wedge_norm(&rows))
}

/// The Plücker coordinates of `h(x) Delta` as polynomials in `x`, indexed like
/// [`subsets`]`(m, rank)`.
///
/// With `w_J` the coordinates of `Delta`, `u_f` fixes `e_J` when `0 in J`
/// and sends `e_I` (`0 notin I`) to `e_I + sum_(i in I) (-1)^pos(i) f_i e_(I - i + 0)`,
/// so the `J`-coordinate is `w_J` plus, when `0 in J`, the terms
/// `(-1)^pos(i) f_i w_(J - 0 + i)` over `i notin J`. Then `g_t` scales
/// `e_J` by `X^(sum_(j in J) a_j)`.
pub fn psi_components(h: &HSpec, sub: &Submodule) -> Result<Vec<MPoly>> {
    let m = h.m();
    if sub.ambient_dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: sub.ambient_dim() });
    }
    let field = h.f.field().clone();
    let r = sub.rank;
    let sets = subsets(m, r);
    let index: HashMap<Vec<usize>, usize> = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let w: Vec<LaurentBall> = maximal_minors(&sub.basis, &field).iter().map(LaurentBall::from_poly).collect();
    let mut out = Vec::with_capacity(sets.len());
    for (ji, j) in sets.iter().enumerate() {
        let mut comp = MPoly::constant(&field, h.f.d, w[ji].clone());
        if j[0] == 0 {
            for i in (1..m).filter(|i| !j.contains(i)) {
                let mut set: Vec<usize> = j[1..].to_vec();
                set.push(i);
                set.sort_unstable();
                let pos = set.iter().position(|&a| a == i).expect("inserted");
                let wi = &w[index[&set]];
                if wi.is_exact_zero() {
                    continue;
                }
                let c = if pos % 2 == 0 { wi.clone() } else { wi.neg() };
                comp = comp.add(&h.f.components[i - 1].scale(&c));
            }
        }
        let shift: i64 = j.iter().map(|&a| h.weight(a)).sum();
        out.push(comp.scale(&LaurentBall::x_pow(&field, shift)));
    }
    Ok(out)
}

/// `psi_Delta(x)` through [`psi_components`].
pub fn psi_delta_coords(h: &HSpec, x: &[LaurentBall], sub: &Submodule) -> Result<NormExp> {
    let mut best = NormExp::Zero;
    for c in psi_components(h, sub)? {
        best = best.max(c.eval(x)?.norm()?);
    }
    Ok(best)
}

/// One scanned submodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleCheck {
    pub sub: Submodule,
    pub good: GoodReport,
    /// `sup_B psi_Delta >= rho`.
    pub sup_ok: bool,
    /// `inf_B psi_Delta < rho`.
    pub below_rho: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionsReport {
    pub rows: Vec<SubmoduleCheck>,
    /// Every `psi_Delta` is `(C, alpha)`-good on the ball.
    pub good_ok: bool,
    /// Every `psi_Delta` reaches `rho` on the ball.
    pub sup_ok: bool,
    /// Number of scanned `Delta` with `psi_Delta < rho` somewhere on the ball.
    pub below_rho_count: usize,
    /// Some `Delta` of top degree has `sup psi_Delta <= k^2 rho`, so larger
    /// degrees may matter.
    pub truncated: bool,
}

impl ConditionsReport {
    pub fn passes(&self) -> bool {
        self.good_ok && self.sup_ok
    }
}

/// The three hypotheses on `b` for every primitive `Delta` of `Z^(n+1)` with
/// basis degrees `<= degree_bound`, including `Z^(n+1)` itself.
#[allow(clippy::too_many_arguments)]
pub fn conditions_check(
    b: &BallSpec,
    h: &HSpec,
    rho: NormExp,
    c: &PowProduct,
    alpha: Rational64,
    eps: &[NormExp],
    degree_bound: usize,
    cap: i64,
) -> Result<ConditionsReport> {
    let subs = enumerate_primitive(h.f.field(), h.m(), h.m(), degree_bound);
    let rows =
        subs.into_iter().map(|sub| check_submodule(b, h, sub, rho, c, alpha, eps, cap)).collect::<Result<Vec<_>>>()?;
    Ok(conditions_report(rows, rho, degree_bound))
}

/// Checks a single submodule; the pieces of [`conditions_check`].
#[allow(clippy::too_many_arguments)]
pub fn check_submodule(
    b: &BallSpec,
    h: &HSpec,
    sub: Submodule,
    rho: NormExp,
    c: &PowProduct,
    alpha: Rational64,
    eps: &[NormExp],
    cap: i64,
) -> Result<SubmoduleCheck> {
    let comps = psi_components(h, &sub)?;
    let good = check_good_max(&comps, b, c, alpha, eps, cap)?;
    let (below, _) = CellEngine::new(&comps, &MaxNorm, cap)?.histogram(b, &[rho])?;
    Ok(SubmoduleCheck { sup_ok: good.sup_norm >= rho, below_rho: !below[0].is_zero(), good, sub })
}

pub fn conditions_report(rows: Vec<SubmoduleCheck>, rho: NormExp, degree_bound: usize) -> ConditionsReport {
    let truncated = rows.iter().any(|r| {
        let top = r.sub.basis.iter().flatten().filter_map(|p| p.degree()).max() == Some(degree_bound);
        top && r.good.sup_norm <= rho.scale(2)
    });
    ConditionsReport {
        good_ok: rows.iter().all(|r| r.good.overall),
        sup_ok: rows.iter().all(|r| r.sup_ok),
        below_rho_count: rows.iter().filter(|r| r.below_rho).count(),
        truncated,
        rows,
    }
}

/// `x -> delta(g_t Lambda_f(x))` on cells. On a cell where `f` moves by at most
/// the Taylor radii, `delta` is within `k^(+-s)` of its center value, and equal
/// to it when `s <= 0` (see [`perturbation_slack`]).
pub struct DeltaObservable {
    pub t: FlowVector,
}

impl Observable for DeltaObservable {
    fn bounds(&self, cell: &CellView<'_>) -> Result<Bounds> {
        let fx = VecK(cell.values.iter().map(|v| (*v).clone()).collect());
        let d0 = delta(&flow_apply(&self.t, &unipotent(&fx)?)?)?;
        Ok(match perturbation_slack(&self.t, &cell.radii) {
            Some(s) if s > 0 => Bounds { center: d0, lo: d0.scale(-s), hi: d0.scale(s).min(NormExp::ONE) },
            _ => Bounds { center: d0, lo: d0, hi: d0 },
        })
    }
}

/// `lambda{x in B : delta(g_t Lambda_f(x)) < eps}` for each `eps`.
pub fn measure_e_multi(
    f: &PolyMap,
    b: &BallSpec,
    t: &FlowVector,
    eps: &[NormExp],
    cap: i64,
) -> Result<Vec<MeasureValue>> {
    if f.n() != t.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: t.n() });
    }
    let obs = DeltaObservable { t: t.clone() };
    Ok(CellEngine::new(&f.components, &obs, cap)?.histogram(b, eps)?.0)
}

pub fn measure_e(f: &PolyMap, b: &BallSpec, t: &FlowVector, eps: NormExp, cap: i64) -> Result<MeasureValue> {
    Ok(measure_e_multi(f, b, t, &[eps], cap)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondivRow {
    pub t: FlowVector,
    pub eps: NormExp,
    pub measure: MeasureValue,
    /// `(n+1) C (eps/rho)^alpha lambda(B)`.
    pub bound: PowProduct,
    pub pass: bool,
    /// `eps <= rho`, the range where the bound is asserted.
    pub in_range: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondivReport {
    pub rows: Vec<NondivRow>,
    pub c: PowProduct,
    pub alpha: Rational64,
    pub rho: NormExp,
    pub overall: bool,
}

pub fn nondiv_bound(
    n: usize,
    c: &PowProduct,
    alpha: Rational64,
    eps: NormExp,
    rho: NormExp,
    b: &BallSpec,
) -> Result<PowProduct> {
    let (Some(e), Some(r)) = (eps.exp(), rho.exp()) else {
        return Err(Error::InvalidArgument("eps and rho must be nonzero".into()));
    };
    let k = b.field().k() as i64;
    let lam: i64 = b.radius_exp.iter().sum();
    Ok(PowProduct::integer(n as i64 + 1)
        .mul(c)
        .mul(&PowProduct::pow(k, alpha * Rational64::from_integer(e - r)))
        .mul(&PowProduct::pow(k, Rational64::from_integer(-lam))))
}

/// Rows for one flow; the pieces of [`verify_impmain`].
#[allow(clippy::too_many_arguments)]
pub fn impmain_rows(
    f: &PolyMap,
    b: &BallSpec,
    t: &FlowVector,
    eps: &[NormExp],
    c: &PowProduct,
    alpha: Rational64,
    rho: NormExp,
    cap: i64,
) -> Result<Vec<NondivRow>> {
    let measures = measure_e_multi(f, b, t, eps, cap)?;
    eps.iter()
        .zip(measures)
        .map(|(&e, measure)| {
            let bound = nondiv_bound(f.n(), c, alpha, e, rho, b)?;
            Ok(NondivRow { t: t.clone(), eps: e, pass: measure.le(&bound), measure, bound, in_range: e <= rho })
        })
        .collect()
}

/// Exact comparison of `lambda(E)` with `(n+1) C (eps/rho)^alpha lambda(B)`
/// for every `(t, eps)`; rows with `eps > rho` are reported but not counted.
#[allow(clippy::too_many_arguments)]
pub fn verify_impmain(
    f: &PolyMap,
    b: &BallSpec,
    ts: &[FlowVector],
    eps: &[NormExp],
    c: &PowProduct,
    alpha: Rational64,
    rho: NormExp,
    cap: i64,
) -> Result<NondivReport> {
    let mut rows = Vec::new();
    for t in ts {
        rows.extend(impmain_rows(f, b, t, eps, c, alpha, rho, cap)?);
    }
    Ok(impmain_report(rows, c.clone(), alpha, rho))
}

pub fn impmain_report(rows: Vec<NondivRow>, c: PowProduct, alpha: Rational64, rho: NormExp) -> NondivReport {
    let overall = rows.iter().filter(|r| r.in_range).all(|r| r.pass);
    NondivReport { rows, c, alpha, rho, overall }
}

/// One shell `t_sum = q` of the Borel-Cantelli series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcRow {
    pub q: u64,
    /// `E_t = {delta <= k^delta_exp}` with `delta_exp = -ceil(gamma q)`.
    pub delta_exp: i64,
    pub shell: MeasureValue,
    pub partial: MeasureValue,
}

/// `sum_(t_sum = q) lambda(E_t)` for one shell.
pub fn bc_shell(f: &PolyMap, b: &BallSpec, gamma: Rational64, q: u64, cap: i64) -> Result<MeasureValue> {
    let e = -gamma_exponent(gamma, q);
    let mut acc = MeasureValue::zero(b.field().k());
    for t in flow_vectors(f.n(), q).into_iter().filter(|t| t.t_sum() == q) {
        acc = acc.add(&measure_e(f, b, &t, NormExp::Finite(e + 1), cap)?);
    }
    Ok(acc)
}

/// Shell sums and partial sums for `q = 1..=T`.
pub fn bc_partial_sums(f: &PolyMap, b: &BallSpec, gamma: Rational64, total: u64, cap: i64) -> Result<Vec<BcRow>> {
    let shells = (1..=total).map(|q| bc_shell(f, b, gamma, q, cap)).collect::<Result<Vec<_>>>()?;
    Ok(bc_rows(b.field().k(), gamma, shells))
}

pub fn bc_rows(k: u32, gamma: Rational64, shells: Vec<MeasureValue>) -> Vec<BcRow> {
    let mut partial = MeasureValue::zero(k);
    shells
        .into_iter()
        .enumerate()
        .map(|(i, shell)| {
            let q = i as u64 + 1;
            partial = partial.add(&shell);
            BcRow { q, delta_exp: -gamma_exponent(gamma, q), shell, partial: partial.clone() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::{Field, Poly};
    use crate::goodfn::{good_constants, grid, DEFAULT_CAP};

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn map(f: &Field, degs: &[u32]) -> PolyMap {
        PolyMap::new(degs.iter().map(|&a| MPoly::monomial(f, vec![a], LaurentBall::one(f))).collect()).unwrap()
    }

    fn line(f: &Field, v: &[i64]) -> Submodule {
        Submodule::new(vec![v.iter().map(|&c| Poly::from_ints(f, &[c])).collect()]).unwrap()
    }

    #[test]
    fn psi_examples() {
        let f = f3();
        let h = HSpec::new(map(&f, &[1]), FlowVector::new(vec![1])).unwrap();
        let zero = [LaurentBall::zero(&f)];
        let full =
            Submodule::new(vec![vec![Poly::one(&f), Poly::zero(&f)], vec![Poly::zero(&f), Poly::one(&f)]]).unwrap();
        assert_eq!(psi_delta(&h, &zero, &full).unwrap(), NormExp::ONE);
        assert_eq!(psi_delta(&h, &zero, &line(&f, &[0, 1])).unwrap(), NormExp::Finite(-1));
        assert_eq!(psi_delta(&h, &zero, &line(&f, &[1, 0])).unwrap(), NormExp::Finite(1));
    }

    #[test]
    fn coords_match_wedge() {
        let f = f3();
        let h = HSpec::new(map(&f, &[1, 2]), FlowVector::new(vec![2, 1])).unwrap();
        let b = BallSpec::unit(&f, 1);
        let subs = enumerate_primitive(&f, 3, 3, 1);
        for x in grid(&b, 1) {
            for s in subs.iter().step_by(7) {
                assert_eq!(psi_delta(&h, &x, s).unwrap(), psi_delta_coords(&h, &x, s).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn conditions_examples() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let h = HSpec::new(map(&f, &[1, 2]), FlowVector::zero(2)).unwrap();
        let (c, a) = good_constants(1, 2);
        let eps: Vec<NormExp> = (0..=2).map(|j| NormExp::Finite(-j)).collect();
        let r = conditions_check(&b, &h, NormExp::ONE, &c, a, &eps, 0, DEFAULT_CAP).unwrap();
        assert!(r.passes());
        let r = conditions_check(&b, &h, NormExp::Finite(1), &c, a, &eps, 0, DEFAULT_CAP).unwrap();
        assert!(!r.sup_ok);
        let full = r.rows.iter().find(|row| row.sub.rank == 3).unwrap();
        assert!(!full.sup_ok);

        let h1 = HSpec::new(map(&f, &[1]), FlowVector::new(vec![2])).unwrap();
        let one = PowProduct::integer(1);
        let r =
            conditions_check(&b, &h1, NormExp::ONE, &one, Rational64::from_integer(1), &eps, 0, DEFAULT_CAP).unwrap();
        assert_eq!(r.rows.iter().filter(|row| row.sub.rank == 1).count(), 4);
        assert!(r.good_ok);
    }

    #[test]
    fn measure_examples() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let fx = map(&f, &[1]);
        assert!(measure_e(&fx, &b, &FlowVector::zero(1), NormExp::ONE, 24).unwrap().is_zero());
        let t2 = FlowVector::new(vec![2]);
        let m1 = measure_e(&fx, &b, &t2, NormExp::Finite(-1), 24).unwrap();
        let m2 = measure_e(&fx, &b, &t2, NormExp::Finite(-2), 24).unwrap();
        assert!(m2 <= m1);
        // grid oracle at N = 8: cells of radius k^-9 are far below the slack
        let n = 8;
        let hits = grid(&b, n)
            .filter(|x| {
                let fx = VecK(x.clone());
                delta(&flow_apply(&t2, &unipotent(&fx).unwrap()).unwrap()).unwrap() < NormExp::Finite(-1)
            })
            .count() as u64;
        assert_eq!(m1, MeasureValue::from_cells(3, [(hits, n + 1)]));
    }

    #[test]
    fn impmain_and_bc() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let fx = map(&f, &[1, 2]);
        let (c, a) = good_constants(1, 2);
        let ts = flow_vectors(2, 2);
        let eps = [NormExp::Finite(-1), NormExp::Finite(1)];
        let r = verify_impmain(&fx, &b, &ts, &eps, &c, a, NormExp::ONE, 24).unwrap();
        assert!(r.overall);
        assert!(r.rows.iter().any(|row| !row.in_range));
        assert!(r.rows.iter().filter(|row| row.t.is_zero()).all(|row| row.eps > NormExp::ONE || row.measure.is_zero()));
        assert!(bc_partial_sums(&fx, &b, Rational64::from_integer(1), 0, 24).unwrap().is_empty());
        let rows = bc_partial_sums(&map(&f, &[1]), &b, Rational64::from_integer(1), 3, 24).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.windows(2).all(|w| w[0].partial <= w[1].partial));
    }
}
