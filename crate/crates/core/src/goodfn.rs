//! Exact Haar-measure counting on balls of `K^d` and the `(C, alpha)`-good
//! test.
//!
//! Measures are computed by adaptive refinement into cells
//! `x0 + O(X^-(N+1))`. On a cell a polynomial is expanded around the cell
//! center, `g(x0 + y) = sum_beta b_beta y^beta`; with `Rad = max_(beta != 0)
//! |b_beta| R^beta` the value `|g|` equals `|b_0|` on the whole cell when
//! `|b_0| > Rad` and is at most `Rad` otherwise. Children are obtained by a
//! Taylor shift by a monomial, which is cheap. Every decision compares powers
//! of `k` exactly.

use std::collections::BinaryHeap;

use num_rational::Rational64;

use crate::calculus::MPoly;
use crate::error::{Error, Result};
use crate::exact::{MeasureValue, PowProduct};
use crate::field_arith::{Field, Fq};
use crate::laurent::{LaurentBall, NormExp};

/// Default refinement cap: the deepest coefficient index a cell may fix.
pub const DEFAULT_CAP: i64 = 24;

/// The ball `{x : |x_c - center_c| <= k^(-radius_exp_c)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub center: Vec<LaurentBall>,
    pub radius_exp: Vec<i64>,
}

impl BallSpec {
    pub fn new(center: Vec<LaurentBall>, radius_exp: Vec<i64>) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidArgument("ball of dimension 0".into()));
        }
        if center.len() != radius_exp.len() {
            return Err(Error::DimensionMismatch { expected: center.len(), got: radius_exp.len() });
        }
        if center.iter().any(|c| !c.is_exact()) {
            return Err(Error::InvalidArgument("ball center must be exact".into()));
        }
        Ok(BallSpec { center, radius_exp })
    }

    /// The unit ball `B_1` around 0 in `K^d`.
    pub fn unit(field: &Field, d: usize) -> Self {
        BallSpec { center: vec![LaurentBall::zero(field); d], radius_exp: vec![0; d] }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn field(&self) -> &Field {
        self.center[0].field()
    }

    /// `lambda(B) = k^(-sum j_c)`.
    pub fn measure(&self) -> MeasureValue {
        MeasureValue::pow_k(self.field().k(), self.radius_exp.iter().sum())
    }
}

/// Exact points `center + sum_(i=j..N) a_i X^-i` per coordinate, one per
/// cell of radius `k^-(N+1)`.
pub fn grid(b: &BallSpec, n: i64) -> impl Iterator<Item = Vec<LaurentBall>> + '_ {
    let field = b.field().clone();
    let k = field.k() as u64;
    let digits: Vec<usize> = b.radius_exp.iter().map(|&j| (n - j + 1).max(0) as usize).collect();
    let total: u64 = digits.iter().map(|&dg| k.pow(dg as u32)).product();
    (0..total).map(move |mut idx| {
        b.center
            .iter()
            .zip(&b.radius_exp)
            .zip(&digits)
            .map(|((c, &j), &dg)| {
                let mut terms = Vec::with_capacity(dg);
                for i in 0..dg {
                    let a = (idx % k) as u32;
                    idx /= k;
                    if a != 0 {
                        terms.push((-(j + i as i64), Fq(a)));
                    }
                }
                c.add(&LaurentBall::from_terms(&field, &terms))
            })
            .collect()
    })
}

/// Taylor coefficients of one polynomial around a cell center, stored densely
/// over the box `beta <= degs`.
#[derive(Clone, Debug)]
struct Taylor {
    degs: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<LaurentBall>,
}

impl Taylor {
    fn at(p: &MPoly, center: &[LaurentBall]) -> Result<Taylor> {
        let d = p.nvars();
        let degs: Vec<usize> = (0..d).map(|v| p.degree_in(v) as usize).collect();
        let mut strides = vec![1usize; d];
        for v in 1..d {
            strides[v] = strides[v - 1] * (degs[v - 1] + 1);
        }
        let size = strides[d - 1] * (degs[d - 1] + 1);
        let mut data = Vec::with_capacity(size);
        for idx in 0..size {
            let beta: Vec<u32> = (0..d).map(|v| ((idx / strides[v]) % (degs[v] + 1)) as u32).collect();
            data.push(p.hasse(&beta).eval(center)?);
        }
        Ok(Taylor { degs, strides, data })
    }

    fn value(&self) -> &LaurentBall {
        &self.data[0]
    }

    /// Shift variable `v` by `a X^-i`.
    fn shift(&self, field: &Field, binom: &[Vec<Fq>], v: usize, a: Fq, i: i64) -> Taylor {
        if a.is_zero() || self.degs[v] == 0 {
            return self.clone();
        }
        let dv = self.degs[v];
        let sv = self.strides[v];
        let hpow: Vec<(Fq, i64)> = (0..=dv).map(|e| (field.pow(a, e as u64), -i * e as i64)).collect();
        let mut data = self.data.clone();
        for (idx, slot) in data.iter_mut().enumerate() {
            let bv = (idx / sv) % (dv + 1);
            let base = idx - bv * sv;
            let mut acc = LaurentBall::zero(field);
            for g in bv..=dv {
                let old = &self.data[base + g * sv];
                if old.is_exact_zero() {
                    continue;
                }
                let c = field.mul(binom[g][bv], hpow[g - bv].0);
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&old.scale(c).shift(hpow[g - bv].1));
            }
            *slot = acc;
        }
        Taylor { degs: self.degs.clone(), strides: self.strides.clone(), data }
    }

    /// `max_(beta != 0) |b_beta| prod R_c^beta_c` for radii `k^r_c`.
    fn radius(&self, r: &[i64]) -> NormExp {
        let mut best = NormExp::Zero;
        for (idx, b) in self.data.iter().enumerate().skip(1) {
            if b.is_exact_zero() {
                continue;
            }
            let mut e = -b.start();
            for ((&st, &dg), &rv) in self.strides.iter().zip(&self.degs).zip(r) {
                e += ((idx / st) % (dg + 1)) as i64 * rv;
            }
            best = best.max(NormExp::Finite(e));
        }
        best
    }
}

/// Center value and Taylor radius of each component on a cell.
pub struct CellView<'a> {
    pub values: Vec<&'a LaurentBall>,
    pub radii: Vec<NormExp>,
}

/// Bounds of an observable on a cell: `lo <= value <= hi`, and the value at
/// the cell center.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bounds {
    pub center: NormExp,
    pub lo: NormExp,
    pub hi: NormExp,
}

/// A norm-valued function of the components, bounded cell by cell.
pub trait Observable {
    fn bounds(&self, cell: &CellView<'_>) -> Result<Bounds>;
}

/// `x -> max_i |g_i(x)|`.
pub struct MaxNorm;

impl Observable for MaxNorm {
    fn bounds(&self, cell: &CellView<'_>) -> Result<Bounds> {
        let mut b = Bounds { center: NormExp::Zero, lo: NormExp::Zero, hi: NormExp::Zero };
        for (v, &r) in cell.values.iter().zip(&cell.radii) {
            let n = v.norm()?;
            b.center = b.center.max(n);
            if n > r {
                b.lo = b.lo.max(n);
            }
            b.hi = b.hi.max(n.max(r));
        }
        Ok(b)
    }
}

/// Work counters of a refinement pass.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub cells: u64,
    /// Deepest coefficient index fixed by any cell.
    pub max_digit: i64,
}

struct Cell {
    center: Vec<LaurentBall>,
    /// last fixed coefficient index per coordinate
    fixed: Vec<i64>,
    taylor: Vec<Taylor>,
}

/// Adaptive cell refinement for a list of polynomial components.
pub struct CellEngine<'a, O: Observable> {
    field: Field,
    comps: &'a [MPoly],
    obs: &'a O,
    cap: i64,
    binom: Vec<Vec<Fq>>,
}

impl<'a, O: Observable> CellEngine<'a, O> {
    pub fn new(comps: &'a [MPoly], obs: &'a O, cap: i64) -> Result<Self> {
        let field = comps.first().ok_or(Error::InvalidArgument("no components".into()))?.field().clone();
        let maxdeg = comps.iter().flat_map(|c| (0..c.nvars()).map(move |v| c.degree_in(v))).max().unwrap_or(0) as usize;
        let binom = (0..=maxdeg).map(|g| (0..=maxdeg).map(|b| field.binomial(g as u64, b as u64)).collect()).collect();
        Ok(CellEngine { field, comps, obs, cap, binom })
    }

    fn root(&self, ball: &BallSpec) -> Result<Cell> {
        if let Some(c) = self.comps.iter().find(|c| c.nvars() != ball.dim()) {
            return Err(Error::DimensionMismatch { expected: ball.dim(), got: c.nvars() });
        }
        let taylor = self.comps.iter().map(|p| Taylor::at(p, &ball.center)).collect::<Result<_>>()?;
        Ok(Cell { center: ball.center.clone(), fixed: ball.radius_exp.iter().map(|j| j - 1).collect(), taylor })
    }

    fn bounds(&self, cell: &Cell) -> Result<Bounds> {
        let r: Vec<i64> = cell.fixed.iter().map(|n| -(n + 1)).collect();
        let view = CellView {
            values: cell.taylor.iter().map(Taylor::value).collect(),
            radii: cell.taylor.iter().map(|t| t.radius(&r)).collect(),
        };
        self.obs.bounds(&view)
    }

    fn children(&self, cell: &Cell, stats: &mut EngineStats) -> Result<Vec<Cell>> {
        if cell.fixed.iter().any(|&n| n >= self.cap) {
            return Err(Error::precision(format!("cell refinement exceeded resolution cap {}", self.cap)));
        }
        let mut out =
            vec![Cell { center: cell.center.clone(), fixed: cell.fixed.clone(), taylor: cell.taylor.clone() }];
        for v in 0..cell.center.len() {
            let i = cell.fixed[v] + 1;
            stats.max_digit = stats.max_digit.max(i);
            let mut next = Vec::with_capacity(out.len() * self.field.k() as usize);
            for c in &out {
                for a in self.field.elements() {
                    let mut center = c.center.clone();
                    if !a.is_zero() {
                        center[v] = center[v].add(&LaurentBall::exact(&self.field, i, vec![a]));
                    }
                    let mut fixed = c.fixed.clone();
                    fixed[v] = i;
                    let taylor = c.taylor.iter().map(|t| t.shift(&self.field, &self.binom, v, a, i)).collect();
                    next.push(Cell { center, fixed, taylor });
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// `sup_B` of the observable.
    pub fn sup(&self, ball: &BallSpec) -> Result<(NormExp, EngineStats)> {
        let mut stats = EngineStats::default();
        let mut best = NormExp::Zero;
        let mut heap = BinaryHeap::new();
        let mut cells = Vec::new();
        let root = self.root(ball)?;
        let b = self.bounds(&root)?;
        cells.push(Some(root));
        heap.push((b.hi, 0usize, b));
        while let Some((hi, id, b)) = heap.pop() {
            stats.cells += 1;
            let cell = cells[id].take().expect("cell visited once");
            best = best.max(b.center);
            if b.center >= hi || hi <= best {
                continue;
            }
            for child in self.children(&cell, &mut stats)? {
                let cb = self.bounds(&child)?;
                best = best.max(cb.center);
                if cb.hi > best {
                    cells.push(Some(child));
                    heap.push((cb.hi, cells.len() - 1, cb));
                }
            }
        }
        Ok((best, stats))
    }

    /// For each threshold `tau`, the measure of `{x in B : value(x) < tau}`.
    pub fn histogram(&self, ball: &BallSpec, thresholds: &[NormExp]) -> Result<(Vec<MeasureValue>, EngineStats)> {
        let k = self.field.k();
        let mut stats = EngineStats::default();
        let mut counts: Vec<Vec<(u64, i64)>> = vec![Vec::new(); thresholds.len()];
        let mut stack = vec![(self.root(ball)?, (0..thresholds.len()).collect::<Vec<usize>>())];
        while let Some((cell, active)) = stack.pop() {
            stats.cells += 1;
            let b = self.bounds(&cell)?;
            let exp: i64 = cell.fixed.iter().map(|n| n + 1).sum();
            let mut open = Vec::new();
            for &t in &active {
                if b.hi < thresholds[t] {
                    bump(&mut counts[t], exp);
                } else if b.lo < thresholds[t] {
                    open.push(t);
                }
            }
            if !open.is_empty() {
                for child in self.children(&cell, &mut stats)? {
                    stack.push((child, open.clone()));
                }
            }
        }
        let out = counts.into_iter().map(|c| MeasureValue::from_cells(k, c)).collect();
        Ok((out, stats))
    }
}

fn bump(c: &mut Vec<(u64, i64)>, exp: i64) {
    match c.iter_mut().find(|(_, e)| *e == exp) {
        Some(slot) => slot.0 += 1,
        None => c.push((1, exp)),
    }
}

/// `|f|_B = sup_(x in B) |f(x)|`.
pub fn sup_on_ball(f: &MPoly, b: &BallSpec, cap: i64) -> Result<NormExp> {
    let comps = std::slice::from_ref(f);
    Ok(CellEngine::new(comps, &MaxNorm, cap)?.sup(b)?.0)
}

/// `lambda{x in B : |f(x)| < eps |f|_B}`.
pub fn sublevel_measure(f: &MPoly, b: &BallSpec, eps: NormExp, cap: i64) -> Result<MeasureValue> {
    let r = sublevel_report(std::slice::from_ref(f), b, &[eps], cap)?;
    Ok(r.measures.into_iter().next().expect("one threshold"))
}

/// Sup and sublevel measures of `max_i |g_i|` for several relative thresholds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublevelReport {
    pub sup: NormExp,
    pub measures: Vec<MeasureValue>,
    pub stats: EngineStats,
}

pub fn sublevel_report(comps: &[MPoly], b: &BallSpec, eps: &[NormExp], cap: i64) -> Result<SublevelReport> {
    let engine = CellEngine::new(comps, &MaxNorm, cap)?;
    let (sup, mut stats) = engine.sup(b)?;
    let k = b.field().k();
    if sup == NormExp::Zero {
        return Ok(SublevelReport { sup, measures: vec![MeasureValue::zero(k); eps.len()], stats });
    }
    let thresholds: Vec<NormExp> = eps.iter().map(|e| e.mul(sup)).collect();
    let (measures, s2) = engine.histogram(b, &thresholds)?;
    stats.cells += s2.cells;
    stats.max_digit = stats.max_digit.max(s2.max_digit);
    Ok(SublevelReport { sup, measures, stats })
}

/// One row of a [`GoodReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodEntry {
    pub eps: NormExp,
    pub sublevel: MeasureValue,
    pub bound: PowProduct,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodReport {
    pub sup_norm: NormExp,
    pub entries: Vec<GoodEntry>,
    pub overall: bool,
    /// Smallest `C` for which every entry passes; `None` if all sublevel sets
    /// are null.
    pub c_emp: Option<PowProduct>,
    pub stats: EngineStats,
}

/// Constants `(d l^(3 - 1/l), 1/(d l))` for an `l`-nondegenerate map on a
/// `d`-dimensional domain.
pub fn good_constants(d: usize, l: u32) -> (PowProduct, Rational64) {
    let (d, l) = (d as i64, l as i64);
    let c = PowProduct::integer(d).mul(&PowProduct::pow(l, Rational64::new(3 * l - 1, l)));
    (c, Rational64::new(1, d * l))
}

/// `C eps^alpha lambda(B)`.
pub fn good_bound(c: &PowProduct, alpha: Rational64, eps: NormExp, ball: &BallSpec) -> PowProduct {
    let k = ball.field().k() as i64;
    let e = eps.exp().expect("thresholds are nonzero powers of k");
    let lam: i64 = ball.radius_exp.iter().sum();
    c.mul(&PowProduct::pow(k, alpha * Rational64::from_integer(e)))
        .mul(&PowProduct::pow(k, Rational64::from_integer(-lam)))
}

/// `(C, alpha)`-good test of `max_i |g_i|` on `b` at the thresholds `eps`
/// (powers of `k`).
pub fn check_good_max(
    comps: &[MPoly],
    b: &BallSpec,
    c: &PowProduct,
    alpha: Rational64,
    eps: &[NormExp],
    cap: i64,
) -> Result<GoodReport> {
    let r = sublevel_report(comps, b, eps, cap)?;
    let one = PowProduct::one();
    let mut entries = Vec::with_capacity(eps.len());
    let mut c_emp: Option<PowProduct> = None;
    for (&e, m) in eps.iter().zip(r.measures) {
        let bound = good_bound(c, alpha, e, b);
        let pass = m.le(&bound);
        if let Some(mp) = m.to_pow_product() {
            let need = mp.div(&good_bound(&one, alpha, e, b));
            if c_emp.as_ref().is_none_or(|cur| need > *cur) {
                c_emp = Some(need);
            }
        }
        entries.push(GoodEntry { eps: e, sublevel: m, bound, pass });
    }
    let overall = entries.iter().all(|e| e.pass);
    Ok(GoodReport { sup_norm: r.sup, entries, overall, c_emp, stats: r.stats })
}

pub fn check_good(
    f: &MPoly,
    b: &BallSpec,
    c: &PowProduct,
    alpha: Rational64,
    eps: &[NormExp],
    cap: i64,
) -> Result<GoodReport> {
    check_good_max(std::slice::from_ref(f), b, c, alpha, eps, cap)
}

/// Size of the family of univariate `sum_(a <= deg_x) c_a x^a` with `c_a` in
/// `F_q[X]` of degree `<= deg_coef`.
pub fn family_size(field: &Field, deg_x: usize, deg_coef: usize) -> u64 {
    (field.k() as u64).pow(((deg_coef + 1) * (deg_x + 1)) as u32)
}

/// Member `idx` of the family: the base-`k` digits of `idx` are the
/// coefficients of `c_0`, then `c_1`, and so on, constant term first.
pub fn family_member(field: &Field, deg_x: usize, deg_coef: usize, mut idx: u64) -> MPoly {
    let k = field.k() as u64;
    let cs: Vec<LaurentBall> = (0..=deg_x)
        .map(|_| {
            let coeffs: Vec<Fq> = (0..=deg_coef)
                .map(|_| {
                    let a = Fq((idx % k) as u32);
                    idx /= k;
                    a
                })
                .collect();
            LaurentBall::from_poly(&crate::field_arith::Poly::new(field, coeffs))
        })
        .collect();
    MPoly::univariate(field, &cs)
}

pub fn poly_family(field: &Field, deg_x: usize, deg_coef: usize) -> impl Iterator<Item = MPoly> + '_ {
    (0..family_size(field, deg_x, deg_coef)).map(move |i| family_member(field, deg_x, deg_coef, i))
}

/// Sweeps members `range` of the family with [`check_good`] at `(1, alpha)`;
/// the family constant is read off the reports.
pub fn family_sweep(
    field: &Field,
    deg_x: usize,
    deg_coef: usize,
    range: std::ops::Range<u64>,
    alpha: Rational64,
    eps: &[NormExp],
    cap: i64,
) -> Result<FamilyReport> {
    let b = BallSpec::unit(field, 1);
    let one = PowProduct::one();
    let mut rep = FamilyReport::empty();
    for i in range {
        let f = family_member(field, deg_x, deg_coef, i);
        rep.absorb(&f, &check_good(&f, &b, &one, alpha, eps, cap)?);
    }
    Ok(rep)
}

/// Outcome of a good-function sweep over a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub members: u64,
    /// Family-wide smallest passing `C`.
    pub c_emp: Option<PowProduct>,
    pub worst: Option<String>,
    pub max_digit: i64,
}

impl FamilyReport {
    pub fn empty() -> Self {
        FamilyReport { members: 0, c_emp: None, worst: None, max_digit: -1 }
    }

    /// Folds one member's report in.
    pub fn absorb(&mut self, f: &MPoly, r: &GoodReport) {
        self.members += 1;
        self.max_digit = self.max_digit.max(r.stats.max_digit);
        if let Some(c) = &r.c_emp {
            if self.c_emp.as_ref().is_none_or(|cur| c > cur) {
                self.c_emp = Some(c.clone());
                self.worst = Some(f.to_string());
            }
        }
    }

    pub fn merge(&mut self, other: FamilyReport) {
        self.members += other.members;
        self.max_digit = self.max_digit.max(other.max_digit);
        if let Some(c) = other.c_emp {
            if self.c_emp.as_ref().is_none_or(|cur| c > *cur) {
                self.c_emp = Some(c);
                self.worst = other.worst;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn x_pow(f: &Field, a: u32) -> MPoly {
        MPoly::monomial(f, vec![a], LaurentBall::one(f))
    }

    #[test]
    fn grid_counts() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        assert_eq!(grid(&b, 1).count(), 9);
        let small = BallSpec::new(vec![LaurentBall::zero(&f)], vec![2]).unwrap();
        assert_eq!(grid(&small, 2).count(), 3);
        let cells = MeasureValue::from_cells(3, [(grid(&b, 2).count() as u64, 3)]);
        assert_eq!(cells, b.measure());
    }

    #[test]
    fn sup_examples() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        assert_eq!(sup_on_ball(&x_pow(&f, 1), &b, DEFAULT_CAP).unwrap(), NormExp::ONE);
        assert_eq!(sup_on_ball(&x_pow(&f, 2), &b, DEFAULT_CAP).unwrap(), NormExp::ONE);
        let xx = MPoly::monomial(&f, vec![1], LaurentBall::x_pow(&f, 1));
        assert_eq!(sup_on_ball(&xx, &b, DEFAULT_CAP).unwrap(), NormExp::Finite(1));
        // x^3 - x = y^3 - y for x = a + y with a in F_3
        let g = x_pow(&f, 3).sub(&x_pow(&f, 1));
        assert_eq!(sup_on_ball(&g, &b, DEFAULT_CAP).unwrap(), NormExp::Finite(-1));
    }

    #[test]
    fn sublevel_examples() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let e2 = NormExp::Finite(-2);
        assert_eq!(sublevel_measure(&x_pow(&f, 1), &b, e2, 24).unwrap(), MeasureValue::pow_k(3, 3));
        assert_eq!(sublevel_measure(&x_pow(&f, 2), &b, e2, 24).unwrap(), MeasureValue::pow_k(3, 2));
        let one = MPoly::constant(&f, 1, LaurentBall::one(&f));
        assert!(sublevel_measure(&one, &b, NormExp::Finite(-1), 24).unwrap().is_zero());
    }

    #[test]
    fn good_examples() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let eps: Vec<NormExp> = (1..=3).map(|j| NormExp::Finite(-j)).collect();
        let r = check_good(&x_pow(&f, 1), &b, &PowProduct::integer(1), Rational64::from_integer(1), &eps, 24).unwrap();
        assert!(r.overall);
        let r = check_good(&x_pow(&f, 2), &b, &PowProduct::integer(1), Rational64::new(1, 2), &eps, 24).unwrap();
        assert!(r.overall);
        let ninth = PowProduct::pow(9, Rational64::from_integer(-1));
        let r = check_good(&x_pow(&f, 1), &b, &ninth, Rational64::from_integer(1), &eps[..1], 24).unwrap();
        assert!(!r.overall);
        assert_eq!(r.entries[0].sublevel, MeasureValue::pow_k(3, 2));
    }

    #[test]
    fn family_indexing() {
        let f = f3();
        assert_eq!(family_size(&f, 3, 2), 531441);
        assert_eq!(poly_family(&f, 1, 0).count(), 9);
        let m = family_member(&f, 1, 1, 3 + 9 * 2);
        assert_eq!(m.to_string(), "2*x+X");
        let eps: Vec<NormExp> = (0..=2).map(|j| NormExp::Finite(-j)).collect();
        let whole = family_sweep(&f, 1, 1, 0..81, Rational64::from_integer(1), &eps, 24).unwrap();
        let mut parts = family_sweep(&f, 1, 1, 0..40, Rational64::from_integer(1), &eps, 24).unwrap();
        parts.merge(family_sweep(&f, 1, 1, 40..81, Rational64::from_integer(1), &eps, 24).unwrap());
        assert_eq!(whole, parts);
        assert_eq!(whole.members, 81);
    }

    #[test]
    fn constants() {
        let (c, a) = good_constants(1, 2);
        assert_eq!(c, PowProduct::pow(2, Rational64::new(5, 2)));
        assert_eq!(a, Rational64::new(1, 2));
    }

    #[test]
    fn cap_is_enforced() {
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let err = sublevel_measure(&x_pow(&f, 1), &b, NormExp::Finite(-8), 4).unwrap_err();
        assert!(matches!(err, Error::InsufficientPrecision(_)));
    }

    #[test]
    fn engine_matches_grid_counting() {
        // f = X x^2 + x + 2 on B_1; cells at N = 6 are fine enough here
        let f = f3();
        let b = BallSpec::unit(&f, 1);
        let g =
            MPoly::univariate(&f, &[LaurentBall::constant(&f, Fq(2)), LaurentBall::one(&f), LaurentBall::x_pow(&f, 1)]);
        let rep =
            sublevel_report(std::slice::from_ref(&g), &b, &[NormExp::Finite(-1), NormExp::Finite(-2)], 24).unwrap();
        let n = 6;
        let mut sup = NormExp::Zero;
        let vals: Vec<NormExp> = grid(&b, n).map(|x| g.eval(&x).unwrap().norm().unwrap()).collect();
        for &v in &vals {
            sup = sup.max(v);
        }
        assert_eq!(sup, rep.sup);
        for (j, m) in [1i64, 2].iter().zip(&rep.measures) {
            let thr = NormExp::Finite(-j).mul(sup);
            let c = vals.iter().filter(|&&v| v < thr).count() as u64;
            assert_eq!(*m, MeasureValue::from_cells(3, [(c, n + 1)]));
        }
    }
}
