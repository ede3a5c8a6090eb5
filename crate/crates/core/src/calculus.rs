//! Difference quotients of polynomial maps over K.
//!
//! For a polynomial the divided differences are again polynomials, so every
//! quotient has a closed form: `Phi_n(x^a)` is the complete homogeneous
//! symmetric polynomial `h_(a-n)` in the `n+1` arguments, and on the diagonal
//! `Phi_beta` reduces to the Hasse derivative `sum c_alpha C(alpha, beta)
//! x^(alpha - beta)`. The numeric path follows the inductive definition with
//! exact division in `F_q[X, 1/X]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field_arith::{Field, Fq};
use crate::laurent::LaurentBall;
use crate::polylattice::rank_over_k;

/// A polynomial in `nvars` variables with exact coefficients in K.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, LaurentBall>,
}

/// A polynomial map `K^d -> K^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    pub d: usize,
    pub components: Vec<MPoly>,
}

pub type MultiIndex = Vec<u32>;

impl MPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: LaurentBall) -> Self {
        MPoly::monomial(field, vec![0; nvars], c)
    }

    /// `c * x^exps`.
    pub fn monomial(field: &Field, exps: Vec<u32>, c: LaurentBall) -> Self {
        let nvars = exps.len();
        let mut p = MPoly::zero(field, nvars);
        p.add_term(exps, c);
        p
    }

    /// The variable `x_i`.
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(field, e, LaurentBall::one(field))
    }

    /// `sum coeffs[a] x^a` in one variable.
    pub fn univariate(field: &Field, coeffs: &[LaurentBall]) -> Self {
        let mut p = MPoly::zero(field, 1);
        for (a, c) in coeffs.iter().enumerate() {
            p.add_term(vec![a as u32], c.clone());
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: LaurentBall) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_exact_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(|| LaurentBall::zero(&self.field));
        *entry = entry.add(&c);
        if entry.is_exact_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &LaurentBall)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&LaurentBall::constant(&self.field, self.field.neg(Fq::ONE)))
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentBall) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(&self.field, self.nvars, LaurentBall::one(&self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluation; exact at exact points, a ball otherwise.
    pub fn eval(&self, x: &[LaurentBall]) -> Result<LaurentBall> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let pows = powers(x, |v| self.degree_in(v));
        let mut acc = LaurentBall::zero(&self.field);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &ev) in e.iter().enumerate() {
                t = t.mul(&pows[v][ev as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Hasse derivative `sum c_alpha C(alpha, beta) x^(alpha - beta)`.
    pub fn hasse(&self, beta: &[u32]) -> MPoly {
        let f = &self.field;
        let mut out = MPoly::zero(f, self.nvars);
        for (e, c) in &self.terms {
            if e.iter().zip(beta).any(|(a, b)| a < b) {
                continue;
            }
            let coef = e.iter().zip(beta).fold(Fq::ONE, |acc, (&a, &b)| f.mul(acc, f.binomial(a as u64, b as u64)));
            if coef.is_zero() {
                continue;
            }
            let ne = e.iter().zip(beta).map(|(a, b)| a - b).collect();
            out.add_term(ne, c.scale(coef));
        }
        out
    }

    /// Formal partial derivative `d^beta f`.
    pub fn derivative(&self, beta: &[u32]) -> MPoly {
        let f = &self.field;
        let mut out = MPoly::zero(f, self.nvars);
        for (e, c) in &self.terms {
            if e.iter().zip(beta).any(|(a, b)| a < b) {
                continue;
            }
            // falling factorial alpha (alpha-1) ... (alpha-beta+1)
            let mut coef = Fq::ONE;
            for (&a, &b) in e.iter().zip(beta) {
                for i in 0..b {
                    coef = f.mul(coef, f.from_int((a - i) as i64));
                }
            }
            if coef.is_zero() {
                continue;
            }
            let ne = e.iter().zip(beta).map(|(a, b)| a - b).collect();
            out.add_term(ne, c.scale(coef));
        }
        out
    }

    fn var_name(&self, i: usize) -> String {
        if self.nvars == 1 {
            "x".into()
        } else {
            format!("x{}", i + 1)
        }
    }
}

fn powers(x: &[LaurentBall], deg: impl Fn(usize) -> u32) -> Vec<Vec<LaurentBall>> {
    x.iter()
        .enumerate()
        .map(|(v, xv)| {
            let mut p = vec![LaurentBall::one(xv.field())];
            for _ in 0..deg(v) {
                let next = p.last().unwrap().mul(xv);
                p.push(next);
            }
            p
        })
        .collect()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { self.var_name(i) } else { format!("{}^{}", self.var_name(i), a) })
                .collect();
            let cs = c.to_string();
            let one = *c == LaurentBall::one(&self.field);
            let s = match (mono.is_empty(), one) {
                (true, _) => cs,
                (false, true) => mono.join("*"),
                (false, false) if cs.contains('+') => format!("({cs})*{}", mono.join("*")),
                (false, false) => format!("{cs}*{}", mono.join("*")),
            };
            parts.push(s);
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl PolyMap {
    pub fn new(components: Vec<MPoly>) -> Result<Self> {
        let d = components.first().ok_or(Error::InvalidArgument("empty map".into()))?.nvars();
        if let Some(c) = components.iter().find(|c| c.nvars() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: c.nvars() });
        }
        Ok(PolyMap { d, components })
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn field(&self) -> &Field {
        self.components[0].field()
    }

    pub fn eval(&self, x: &[LaurentBall]) -> Result<Vec<LaurentBall>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

/// `h_m(y_0, ..., y_n)` for `m = 0..=max_m`, by `h_m(y_0..y_j) = h_m(y_0..y_(j-1)) + y_j h_(m-1)(y_0..y_j)`.
fn complete_homogeneous(points: &[LaurentBall], max_m: usize) -> Vec<LaurentBall> {
    let f = points[0].field();
    let mut h = vec![LaurentBall::zero(f); max_m + 1];
    h[0] = LaurentBall::one(f);
    // with no variables yet, h_m = 0 for m > 0; add variables one at a time
    for y in points {
        for m in 1..=max_m {
            h[m] = h[m].add(&y.mul(&h[m - 1]));
        }
    }
    h
}

fn univariate_coeffs(f: &MPoly) -> Result<Vec<LaurentBall>> {
    if f.nvars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.nvars() });
    }
    let deg = f.degree_in(0) as usize;
    let mut c = vec![LaurentBall::zero(f.field()); deg + 1];
    for (e, a) in f.terms() {
        c[e[0] as usize] = a.clone();
    }
    Ok(c)
}

/// `Phi_n f` as a polynomial in `n + 1` variables.
pub fn phi_n_symbolic(f: &MPoly, n: usize) -> Result<MPoly> {
    let coeffs = univariate_coeffs(f)?;
    let field = f.field();
    let vars: Vec<MPoly> = (0..=n).map(|i| MPoly::var(field, n + 1, i)).collect();
    let one = MPoly::constant(field, n + 1, LaurentBall::one(field));
    let max_m = coeffs.len().saturating_sub(n + 1);
    // h[m] over the first j variables
    let mut h = vec![MPoly::zero(field, n + 1); max_m + 1];
    h[0] = one;
    for v in &vars {
        for m in 1..=max_m {
            h[m] = h[m].add(&v.mul(&h[m - 1]));
        }
    }
    let mut out = MPoly::zero(field, n + 1);
    for (a, c) in coeffs.iter().enumerate().skip(n) {
        out = out.add(&h[a - n].scale(c));
    }
    Ok(out)
}

/// Extended quotient `Phi_bar_n f` at arbitrary (possibly repeated) points.
pub fn phi_bar(f: &MPoly, points: &[LaurentBall]) -> Result<LaurentBall> {
    let coeffs = univariate_coeffs(f)?;
    let n = points.len().checked_sub(1).ok_or(Error::InvalidArgument("no points".into()))?;
    if coeffs.len() <= n {
        return Ok(LaurentBall::zero(f.field()));
    }
    let h = complete_homogeneous(points, coeffs.len() - 1 - n);
    let mut acc = LaurentBall::zero(f.field());
    for (a, c) in coeffs.iter().enumerate().skip(n) {
        acc = acc.add(&c.mul(&h[a - n]));
    }
    Ok(acc)
}

fn exact_quotient(a: &LaurentBall, b: &LaurentBall) -> Result<LaurentBall> {
    a.exact_div(b)?.ok_or(Error::InvalidArgument("difference quotient is not a Laurent polynomial".into()))
}

/// Inductive difference quotient of a one-variable function given as a
/// callback, on pairwise distinct exact points.
fn divided_difference(g: &dyn Fn(&LaurentBall) -> Result<LaurentBall>, points: &[LaurentBall]) -> Result<LaurentBall> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::RepeatedPoint);
            }
        }
    }
    fn rec(g: &dyn Fn(&LaurentBall) -> Result<LaurentBall>, pts: &[LaurentBall]) -> Result<LaurentBall> {
        if pts.len() == 1 {
            return g(&pts[0]);
        }
        // (Phi(x_1, x_3, ...) - Phi(x_2, x_3, ...)) / (x_1 - x_2)
        let mut a = vec![pts[0].clone()];
        a.extend_from_slice(&pts[2..]);
        let b = &pts[1..];
        let num = rec(g, &a)?.sub(&rec(g, b)?);
        exact_quotient(&num, &pts[0].sub(&pts[1]))
    }
    rec(g, points)
}

/// `Phi_n f(x_1, ..., x_(n+1))` by the inductive definition; points must be
/// pairwise distinct and exact.
pub fn phi_n(f: &MPoly, points: &[LaurentBall]) -> Result<LaurentBall> {
    univariate_coeffs(f)?;
    if points.iter().any(|p| !p.is_exact()) {
        return Err(Error::InvalidArgument("points must be exact".into()));
    }
    divided_difference(&|y| f.eval(std::slice::from_ref(y)), points)
}

fn check_beta_points(f: &MPoly, beta: &[u32], points: &[Vec<LaurentBall>]) -> Result<()> {
    if beta.len() != f.nvars() || points.len() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), got: beta.len().min(points.len()) });
    }
    for (b, p) in beta.iter().zip(points) {
        if p.len() != *b as usize + 1 {
            return Err(Error::DimensionMismatch { expected: *b as usize + 1, got: p.len() });
        }
    }
    Ok(())
}

/// `Phi_bar_beta f` with `beta_j + 1` points for variable `j`, from the closed
/// form `sum c_alpha prod_j h_(alpha_j - beta_j)(points_j)`.
pub fn phi_beta(f: &MPoly, beta: &[u32], points: &[Vec<LaurentBall>]) -> Result<LaurentBall> {
    check_beta_points(f, beta, points)?;
    let field = f.field();
    let hs: Vec<Vec<LaurentBall>> = points
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let top = f.degree_in(j).saturating_sub(beta[j]) as usize;
            complete_homogeneous(p, top)
        })
        .collect();
    let mut acc = LaurentBall::zero(field);
    for (e, c) in f.terms() {
        if e.iter().zip(beta).any(|(a, b)| a < b) {
            continue;
        }
        let mut t = c.clone();
        for j in 0..e.len() {
            t = t.mul(&hs[j][(e[j] - beta[j]) as usize]);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// `Phi_beta f` as the composition of one-variable inductive quotients.
pub fn phi_beta_numeric(f: &MPoly, beta: &[u32], points: &[Vec<LaurentBall>]) -> Result<LaurentBall> {
    check_beta_points(f, beta, points)?;
    fn rec(f: &MPoly, points: &[Vec<LaurentBall>], fixed: &[LaurentBall]) -> Result<LaurentBall> {
        let c = fixed.len();
        if c == points.len() {
            return f.eval(fixed);
        }
        let g = |y: &LaurentBall| {
            let mut fx = fixed.to_vec();
            fx.push(y.clone());
            rec(f, points, &fx)
        };
        divided_difference(&g, &points[c])
    }
    rec(f, points, &[])
}

/// `D_j f(a) = Phi_bar_j f(a, ..., a)`.
pub fn d_j(f: &MPoly, j: usize, a: &LaurentBall) -> Result<LaurentBall> {
    phi_bar(f, &vec![a.clone(); j + 1])
}

/// Both sides of `j! D_j f(a) = f^(j)(a)`.
pub fn factorial_identity_sides(f: &MPoly, j: usize, a: &LaurentBall) -> Result<(LaurentBall, LaurentBall)> {
    let field = f.field();
    let lhs = d_j(f, j, a)?.scale(field.factorial(j as u64));
    let rhs = f.derivative(&[j as u32]).eval(std::slice::from_ref(a))?;
    Ok((lhs, rhs))
}

pub fn factorial_identity_check(f: &MPoly, j: usize, a: &LaurentBall) -> Result<bool> {
    let (l, r) = factorial_identity_sides(f, j, a)?;
    Ok(l == r)
}

/// Multi-indices of size in `lo..=hi` for `d` variables, ordered by size and
/// then lexicographically.
pub fn multi_indices(d: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    fn go(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() + 1 == d {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for i in (0..=left).rev() {
            cur.push(i);
            go(d, left - i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in lo..=hi {
        go(d, s, &mut Vec::new(), &mut out);
    }
    out
}

/// `Phi_bar_beta f` of every component at the diagonal point `x0`.
pub fn diagonal_quotients(f: &PolyMap, x0: &[LaurentBall], beta: &[u32]) -> Result<Vec<LaurentBall>> {
    f.components.iter().map(|c| c.hasse(beta).eval(x0)).collect()
}

/// Least `l <= l_max` such that the diagonal quotients with `1 <= |beta| <= l`
/// (or `0 <= |beta|` when `include_zero`) span `K^n`.
pub fn nondeg_order(f: &PolyMap, x0: &[LaurentBall], l_max: u32, include_zero: bool) -> Result<Option<u32>> {
    if x0.len() != f.d {
        return Err(Error::DimensionMismatch { expected: f.d, got: x0.len() });
    }
    let mut vectors: Vec<Vec<LaurentBall>> = Vec::new();
    if include_zero {
        vectors.push(f.eval(x0)?);
    }
    for l in 1..=l_max {
        for beta in multi_indices(f.d, l, l) {
            vectors.push(diagonal_quotients(f, x0, &beta)?);
        }
        let nonzero: Vec<Vec<LaurentBall>> =
            vectors.iter().filter(|v| v.iter().any(|a| !a.is_exact_zero())).cloned().collect();
        if rank_over_k(&nonzero) == f.n() {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn xpow(f: &Field, a: u32) -> MPoly {
        MPoly::monomial(f, vec![a], LaurentBall::one(f))
    }

    fn el(f: &Field, terms: &[(i64, u32)]) -> LaurentBall {
        let t: Vec<(i64, Fq)> = terms.iter().map(|&(e, c)| (e, Fq(c))).collect();
        LaurentBall::from_terms(f, &t)
    }

    #[test]
    fn phi_examples() {
        let f = f3();
        let a = el(&f, &[(1, 1), (0, 2)]);
        let b = el(&f, &[(-1, 1)]);
        assert_eq!(phi_n(&xpow(&f, 2), &[a.clone(), b.clone()]).unwrap(), a.add(&b));
        let cube = phi_n(&xpow(&f, 3), &[a.clone(), b.clone()]).unwrap();
        assert_eq!(cube, a.mul(&a).add(&a.mul(&b)).add(&b.mul(&b)));
        assert_eq!(phi_bar(&xpow(&f, 3), &vec![a.clone(); 4]).unwrap(), LaurentBall::one(&f));
        assert_eq!(phi_n(&xpow(&f, 2), &[a.clone(), a.clone()]).err(), Some(Error::RepeatedPoint));
        let sym = phi_n_symbolic(&xpow(&f, 3), 1).unwrap();
        assert_eq!(sym.to_string(), "x1^2+x1*x2+x2^2");
    }

    #[test]
    fn phi_beta_examples() {
        let f = f3();
        let one = LaurentBall::one(&f);
        let xy = MPoly::monomial(&f, vec![1, 1], one.clone());
        let a = el(&f, &[(1, 1)]);
        let b = el(&f, &[(0, 2)]);
        let c = el(&f, &[(-2, 1)]);
        let d = el(&f, &[(2, 1)]);
        let pts = vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]];
        assert_eq!(phi_beta(&xy, &[1, 1], &pts).unwrap(), one);
        assert_eq!(phi_beta_numeric(&xy, &[1, 1], &pts).unwrap(), one);
        let x3 = MPoly::monomial(&f, vec![3, 0], one.clone());
        let diag = vec![vec![a.clone(), a.clone()], vec![c.clone()]];
        assert!(phi_beta(&x3, &[1, 0], &diag).unwrap().is_exact_zero());
        let x2y = MPoly::monomial(&f, vec![2, 1], one.clone());
        let pts = vec![vec![a.clone(), b.clone(), d.clone()], vec![c.clone(), b.clone()]];
        assert_eq!(phi_beta(&x2y, &[2, 1], &pts).unwrap(), one);
        assert_eq!(phi_beta_numeric(&x2y, &[2, 1], &pts).unwrap(), one);
    }

    #[test]
    fn d_j_and_factorial_examples() {
        let f = f3();
        let a = el(&f, &[(2, 1), (-1, 2)]);
        assert_eq!(d_j(&xpow(&f, 2), 1, &a).unwrap(), a.scale(Fq(2)));
        assert_eq!(d_j(&xpow(&f, 3), 3, &a).unwrap(), LaurentBall::one(&f));
        assert!(d_j(&xpow(&f, 3), 1, &a).unwrap().is_exact_zero());
        assert!(factorial_identity_check(&xpow(&f, 2), 1, &a).unwrap());
        let (l, r) = factorial_identity_sides(&xpow(&f, 3), 3, &a).unwrap();
        assert!(l.is_exact_zero() && r.is_exact_zero());
        let (l, r) = factorial_identity_sides(&xpow(&f, 4), 2, &a).unwrap();
        assert!(l.is_exact_zero() && r.is_exact_zero());
    }

    #[test]
    fn nondeg_examples() {
        let f = f3();
        let zero = vec![LaurentBall::zero(&f)];
        let m = PolyMap::new(vec![xpow(&f, 1), xpow(&f, 2)]).unwrap();
        assert_eq!(nondeg_order(&m, &zero, 4, false).unwrap(), Some(2));
        let m = PolyMap::new(vec![xpow(&f, 1), xpow(&f, 3)]).unwrap();
        assert_eq!(nondeg_order(&m, &zero, 4, false).unwrap(), Some(3));
        let shifted = xpow(&f, 1).add(&MPoly::constant(&f, 1, LaurentBall::one(&f)));
        let m = PolyMap::new(vec![xpow(&f, 1), shifted]).unwrap();
        assert_eq!(nondeg_order(&m, &zero, 5, false).unwrap(), None);
    }

    #[test]
    fn multi_index_order() {
        assert_eq!(multi_indices(2, 1, 2), vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_indices(1, 0, 2), vec![vec![0], vec![1], vec![2]]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_el() -> impl Strategy<Value = Vec<(i64, u32)>> {
            proptest::collection::vec((-3i64..3, 0u32..3), 0..4)
        }

        proptest! {
            #[test]
            fn quotient_is_symmetric_and_matches_closed_form(
                coeffs in proptest::collection::vec(arb_el(), 1..6),
                pts in proptest::collection::vec(arb_el(), 3),
                perm in 0usize..6,
            ) {
                let f = f3();
                let poly = MPoly::univariate(&f, &coeffs.iter().map(|c| el(&f, c)).collect::<Vec<_>>());
                let pts: Vec<LaurentBall> = pts.iter().map(|c| el(&f, c)).collect();
                let distinct = pts[0] != pts[1] && pts[0] != pts[2] && pts[1] != pts[2];
                prop_assume!(distinct);
                let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
                let permuted: Vec<LaurentBall> = orders[perm].iter().map(|&i| pts[i].clone()).collect();
                let a = phi_n(&poly, &pts).unwrap();
                prop_assert_eq!(&a, &phi_n(&poly, &permuted).unwrap());
                prop_assert_eq!(&a, &phi_bar(&poly, &pts).unwrap());
                let sym = phi_n_symbolic(&poly, 2).unwrap();
                prop_assert_eq!(&a, &sym.eval(&pts).unwrap());
            }

            #[test]
            fn hasse_times_factorial_is_derivative(
                terms in proptest::collection::vec(((0u32..5, 0u32..5), arb_el()), 1..6),
                x in arb_el(), y in arb_el(), b0 in 0u32..4, b1 in 0u32..4,
            ) {
                let f = f3();
                let mut poly = MPoly::zero(&f, 2);
                for ((i, j), c) in &terms {
                    poly = poly.add(&MPoly::monomial(&f, vec![*i, *j], el(&f, c)));
                }
                let pt = vec![el(&f, &x), el(&f, &y)];
                let fact = f.mul(f.factorial(b0 as u64), f.factorial(b1 as u64));
                let lhs = poly.derivative(&[b0, b1]).eval(&pt).unwrap();
                let diag = vec![vec![pt[0].clone(); b0 as usize + 1], vec![pt[1].clone(); b1 as usize + 1]];
                let rhs = phi_beta(&poly, &[b0, b1], &diag).unwrap().scale(fact);
                prop_assert_eq!(&lhs, &rhs);
                prop_assert_eq!(poly.hasse(&[b0, b1]).eval(&pt).unwrap(), phi_beta(&poly, &[b0, b1], &diag).unwrap());
            }
        }
    }
}
