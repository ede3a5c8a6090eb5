//! Continued fractions over K and Diophantine test points.
//!
//! Besides expansion and convergents this module builds the elements used as
//! approximation test cases: Liouville-type series `sum X^(-c^i)` (very well
//! approximable) and purely periodic continued fractions (badly
//! approximable), plus an exhaustive best-witness scan for `|p + q.x|`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field_arith::{Field, Fq, Poly};
use crate::laurent::{vec_norm, LaurentBall, NormExp, NormKind, VecK};

/// An approximation witness `(p, q)` for `x` with `err = |p + q.x|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p: Poly,
    pub q: Vec<Poly>,
    pub err: NormExp,
    pub pi_plus_q: NormExp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub quotients: Vec<Poly>,
    /// The expansion reached an exact zero remainder.
    pub exact_terminated: bool,
}

/// An exact rational function `num / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RationalFn { num: p, den }
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    /// Laurent expansion known to at least index `prec`.
    pub fn to_ball(&self, prec: i64) -> Result<LaurentBall> {
        let extra = self.num.degree().unwrap_or(0) as i64;
        let d = LaurentBall::from_poly(&self.den).inv(prec + extra)?;
        Ok(LaurentBall::from_poly(&self.num).mul(&d))
    }

    /// Norm `k^(deg num - deg den)`.
    pub fn norm(&self) -> NormExp {
        match (self.num.degree(), self.den.degree()) {
            (Some(a), Some(b)) => NormExp::Finite(a as i64 - b as i64),
            _ => NormExp::Zero,
        }
    }
}

/// Continued fraction of a rational function via the Euclidean algorithm.
pub fn cf_expand_rational(x: &RationalFn, max_terms: usize) -> Result<CFExpansion> {
    let mut quotients = Vec::new();
    let (mut a, mut b) = (x.num.clone(), x.den.clone());
    while quotients.len() < max_terms {
        let (q, r) = a.divmod(&b)?;
        quotients.push(q);
        if r.is_zero() {
            return Ok(CFExpansion { quotients, exact_terminated: true });
        }
        a = b;
        b = r;
    }
    Ok(CFExpansion { quotients, exact_terminated: false })
}

/// Continued fraction expansion `[a_0; a_1, ...]` with at most `max_terms`
/// partial quotients. Exact inputs are expanded exactly; for balls every
/// quotient must be certified or the call fails.
pub fn cf_expand(x: &LaurentBall, max_terms: usize) -> Result<CFExpansion> {
    let cf = cf_expand_partial(x, max_terms)?;
    if cf.exact_terminated || cf.quotients.len() >= max_terms {
        Ok(cf)
    } else {
        Err(Error::precision(format!("only {} partial quotients are certified", cf.quotients.len())))
    }
}

/// Like [`cf_expand`] but stops quietly at the last certified quotient.
pub fn cf_expand_partial(x: &LaurentBall, max_terms: usize) -> Result<CFExpansion> {
    if x.is_exact() {
        let f = x.field();
        let s = x.last_index().max(0);
        let num = x.to_scaled_poly(s);
        let den = Poly::monomial(f, Fq::ONE, s as usize);
        return cf_expand_rational(&RationalFn::new(num, den)?, max_terms);
    }
    let mut quotients = Vec::new();
    let mut cur = x.clone();
    while quotients.len() < max_terms {
        let a = match cur.polynomial_part() {
            Ok(a) => a,
            Err(_) => break,
        };
        let frac = cur.sub(&LaurentBall::from_poly(&a));
        quotients.push(a);
        if frac.is_exact_zero() {
            return Ok(CFExpansion { quotients, exact_terminated: true });
        }
        cur = match frac.inv(frac.prec().saturating_mul(2).max(0) + 1) {
            Ok(c) => c,
            Err(Error::InsufficientPrecision(_)) => break,
            Err(e) => return Err(e),
        };
    }
    Ok(CFExpansion { quotients, exact_terminated: false })
}

/// Convergents `(p_i, q_i)` from `p_i = a_i p_(i-1) + p_(i-2)` and the same
/// recurrence for `q_i`.
pub fn convergents(cf: &CFExpansion) -> Vec<(Poly, Poly)> {
    let Some(first) = cf.quotients.first() else {
        return Vec::new();
    };
    let f = first.field();
    let (mut p2, mut q2) = (Poly::zero(f), Poly::one(f));
    let (mut p1, mut q1) = (Poly::one(f), Poly::zero(f));
    let mut out = Vec::with_capacity(cf.quotients.len());
    for a in &cf.quotients {
        let p = &(a * &p1) + &p2;
        let q = &(a * &q1) + &q2;
        out.push((p.clone(), q.clone()));
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// `Pi_+(q)` for a polynomial vector.
pub fn pi_plus(q: &[Poly]) -> NormExp {
    NormExp::Finite(q.iter().map(|p| p.degree().unwrap_or(0) as i64).sum())
}

/// Total order used to pick among equally good witnesses.
fn witness_order(a: &Witness, b: &Witness) -> Ordering {
    a.err.cmp(&b.err).then(a.pi_plus_q.cmp(&b.pi_plus_q)).then_with(|| {
        a.q.iter().zip(&b.q).map(|(x, y)| x.cmp_coeffs(y)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
    })
}

/// All nonzero `q` in `F_q[X]^n` with `deg q_i <= bound`.
fn q_candidates(field: &Field, n: usize, bound: usize) -> impl Iterator<Item = Vec<Poly>> + '_ {
    let polys: Vec<Poly> = Poly::all_up_to_degree(field, bound).collect();
    let per = polys.len() as u64;
    let total = per.pow(n as u32);
    (1..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let p = polys[(idx % per) as usize].clone();
                idx /= per;
                p
            })
            .collect()
    })
}

/// `|p + q.x|` with `p = -[q.x]`, evaluated on a ball.
pub fn witness_for(x: &VecK, q: &[Poly]) -> Result<Witness> {
    if q.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: q.len() });
    }
    let field = x.field().ok_or(Error::InvalidArgument("empty vector".into()))?;
    let mut s = LaurentBall::zero(field);
    for (qi, xi) in q.iter().zip(&x.0) {
        s = s.add(&LaurentBall::from_poly(qi).mul(xi));
    }
    let p = s.polynomial_part()?.neg();
    let err = s.add(&LaurentBall::from_poly(&p)).norm()?;
    Ok(Witness { p, q: q.to_vec(), err, pi_plus_q: pi_plus(q) })
}

/// Exhaustive minimization of `|p + q.x|` over nonzero `q` with
/// `deg q_i <= degree_bound`; ties go to the smaller `Pi_+(q)`, then to the
/// lexicographically smaller coefficient tuple.
pub fn best_witness(x: &VecK, degree_bound: usize) -> Result<Witness> {
    let field = x.field().ok_or(Error::InvalidArgument("empty vector".into()))?.clone();
    vec_norm(NormKind::Max, x)?;
    let mut best: Option<Witness> = None;
    for q in q_candidates(&field, x.len(), degree_bound) {
        let w = witness_for(x, &q).map_err(|e| match e {
            Error::InsufficientPrecision(_) => {
                Error::precision(format!("|p + q.x| undetermined for q of degree <= {degree_bound}"))
            }
            other => other,
        })?;
        if best.as_ref().is_none_or(|b| witness_order(&w, b) == Ordering::Less) {
            best = Some(w);
        }
    }
    best.ok_or(Error::InvalidArgument("no candidates".into()))
}

/// Exact witness for rational targets.
pub fn witness_for_rational(x: &[RationalFn], q: &[Poly]) -> Result<Witness> {
    if q.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: q.len() });
    }
    let f = x.first().ok_or(Error::InvalidArgument("empty vector".into()))?.field();
    let mut den = Poly::one(f);
    for xi in x {
        den = &den * &xi.den;
    }
    let mut num = Poly::zero(f);
    for (qi, xi) in q.iter().zip(x) {
        let cof = den.divmod(&xi.den)?.0;
        num = &num + &(&(qi * &xi.num) * &cof);
    }
    let (quot, rem) = num.divmod(&den)?;
    let err = RationalFn { num: rem, den }.norm();
    Ok(Witness { p: quot.neg(), q: q.to_vec(), err, pi_plus_q: pi_plus(q) })
}

/// [`best_witness`] for a vector of exact rational functions.
pub fn best_witness_rational(x: &[RationalFn], degree_bound: usize) -> Result<Witness> {
    let f = x.first().ok_or(Error::InvalidArgument("empty vector".into()))?.field().clone();
    let mut best: Option<Witness> = None;
    for q in q_candidates(&f, x.len(), degree_bound) {
        let w = witness_for_rational(x, &q)?;
        if best.as_ref().is_none_or(|b| witness_order(&w, b) == Ordering::Less) {
            best = Some(w);
        }
    }
    best.ok_or(Error::InvalidArgument("no candidates".into()))
}

/// `sum_(i >= 0) X^(-c^i)` known up to index `prec`.
pub fn make_liouville(field: &Field, c: u64, prec: i64) -> Result<LaurentBall> {
    if c < 2 {
        return Err(Error::InvalidArgument(format!("liouville base must be >= 2, got {c}")));
    }
    let mut terms = Vec::new();
    let mut idx: i64 = 1;
    while idx <= prec {
        terms.push((-idx, Fq::ONE));
        idx = match idx.checked_mul(c as i64) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(LaurentBall::from_terms(field, &terms).truncate(prec))
}

/// The purely periodic continued fraction `[0; a_1, ..., a_L, a_1, ...]` to
/// precision `prec`, as the fixed point of `x -> 1/(a_1 + 1/(... (a_L + x)))`
/// iterated on balls starting from `O(X^-1)`.
pub fn make_periodic(quotients: &[Poly], prec: i64) -> Result<LaurentBall> {
    let first = quotients.first().ok_or(Error::InvalidArgument("empty period".into()))?;
    let field = first.field().clone();
    if quotients.iter().any(|a| a.degree().unwrap_or(0) == 0) {
        return Err(Error::NonConvergent);
    }
    let mut x = LaurentBall::with_prec(&field, 1, Vec::new(), 0);
    while x.prec() < prec {
        let before = x.prec();
        for a in quotients.iter().rev() {
            x = LaurentBall::from_poly(a).add(&x).inv(prec)?;
        }
        if x.prec() <= before {
            return Err(Error::NonConvergent);
        }
    }
    Ok(x.truncate(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(f, c)
    }

    #[test]
    fn expand_examples() {
        let f = f3();
        let x = LaurentBall::x_pow(&f, -1);
        let cf = cf_expand(&x, 10).unwrap();
        assert_eq!(cf.quotients, vec![p(&f, &[]), p(&f, &[0, 1])]);
        assert!(cf.exact_terminated);
        // (X^2+1)/X = X + 1/X
        let r = RationalFn::new(p(&f, &[1, 0, 1]), p(&f, &[0, 1])).unwrap();
        let cf = cf_expand_rational(&r, 10).unwrap();
        assert_eq!(cf.quotients, vec![p(&f, &[0, 1]), p(&f, &[0, 1])]);
    }

    #[test]
    fn periodic_fixed_point() {
        let f = f3();
        let x = make_periodic(&[p(&f, &[0, 1])], 30).unwrap();
        assert_eq!(x.valuation().unwrap(), Some(1));
        // x (X + x) = 1 to the certified precision
        let lhs = x.mul(&LaurentBall::x_pow(&f, 1).add(&x));
        assert!(lhs.contains(&LaurentBall::one(&f)));
        assert!(lhs.prec() >= 29);
        let cf = cf_expand(&x, 8).unwrap();
        assert_eq!(cf.quotients[0], Poly::zero(&f));
        assert!(cf.quotients[1..].iter().all(|a| *a == p(&f, &[0, 1])));
        let x2 = make_periodic(&[p(&f, &[0, 0, 1])], 20).unwrap();
        assert_eq!(x2.valuation().unwrap(), Some(2));
        assert_eq!(make_periodic(&[p(&f, &[2])], 5).err(), Some(Error::NonConvergent));
    }

    #[test]
    fn convergent_examples() {
        let f = f3();
        let xx = p(&f, &[0, 1]);
        let cf = CFExpansion { quotients: vec![Poly::zero(&f), xx.clone()], exact_terminated: true };
        assert_eq!(convergents(&cf), vec![(p(&f, &[]), p(&f, &[1])), (p(&f, &[1]), xx.clone())]);
        let cf = CFExpansion { quotients: vec![Poly::zero(&f), xx.clone(), xx.clone()], exact_terminated: false };
        assert_eq!(convergents(&cf)[2], (xx.clone(), p(&f, &[1, 0, 1])));
        let cf = CFExpansion { quotients: vec![xx.clone(), xx.clone()], exact_terminated: true };
        assert_eq!(convergents(&cf), vec![(xx.clone(), p(&f, &[1])), (p(&f, &[1, 0, 1]), xx)]);
    }

    #[test]
    fn liouville_coefficients() {
        let f = f3();
        let x = make_liouville(&f, 3, 10).unwrap();
        let ones: Vec<i64> = (0..=10).filter(|&i| x.coeff(i) == Some(Fq::ONE)).collect();
        assert_eq!(ones, vec![1, 3, 9]);
        let y = make_liouville(&f, 2, 5).unwrap();
        let ones: Vec<i64> = (0..=5).filter(|&i| y.coeff(i) == Some(Fq::ONE)).collect();
        assert_eq!(ones, vec![1, 2, 4]);
    }

    #[test]
    fn best_witness_liouville() {
        let f = f3();
        let x = VecK(vec![make_liouville(&f, 3, 40).unwrap()]);
        let w = best_witness(&x, 3).unwrap();
        assert_eq!(w.q, vec![p(&f, &[0, 0, 0, 1])]);
        assert_eq!(w.err, NormExp::Finite(-6));
        // the truncated series X^-1 + X^-3 + X^-9 gives the same witness
        let t = LaurentBall::from_terms(&f, &[(-1, Fq::ONE), (-3, Fq::ONE), (-9, Fq::ONE)]);
        let w = best_witness(&VecK(vec![t]), 3).unwrap();
        assert_eq!(w.err, NormExp::Finite(-6));
        assert_eq!(w.q, vec![p(&f, &[0, 0, 0, 1])]);
    }

    #[test]
    fn best_witness_rational_targets() {
        let f = f3();
        let x = RationalFn::new(p(&f, &[1]), p(&f, &[1, 1])).unwrap();
        let w = best_witness_rational(&[x], 1).unwrap();
        assert_eq!(w.err, NormExp::Zero);
        assert_eq!(w.q, vec![p(&f, &[1, 1])]);
        assert_eq!(w.p, p(&f, &[2]));
        let x = VecK(vec![LaurentBall::x_pow(&f, -1), LaurentBall::x_pow(&f, -2)]);
        let w = best_witness(&x, 2).unwrap();
        assert_eq!(w.err, NormExp::Zero);
    }

    #[test]
    fn convergents_are_best_approximations() {
        // exhaustive scan over q of degree below deg q_i
        let f = f3();
        let x = make_periodic(&[p(&f, &[1, 1]), p(&f, &[0, 0, 1])], 40).unwrap();
        let cf = cf_expand(&x, 5).unwrap();
        let conv = convergents(&cf);
        let xv = VecK(vec![x.clone()]);
        for (i, (pi, qi)) in conv.iter().enumerate().skip(1) {
            let di = qi.degree().unwrap();
            let e = LaurentBall::from_poly(qi).mul(&x).sub(&LaurentBall::from_poly(pi)).norm().unwrap();
            if let Some((_, qn)) = conv.get(i + 1) {
                assert_eq!(e, NormExp::Finite(-(qn.degree().unwrap() as i64)));
            }
            if di == 0 {
                continue;
            }
            let best_lower = best_witness(&xv, di - 1).unwrap();
            assert!(e < best_lower.err);
        }
    }
}
