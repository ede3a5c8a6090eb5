//! Precision-tracked arithmetic in K = F_q((1/X)).
//!
//! A [`LaurentBall`] stores the coefficients `a_s, ..., a_N` of
//! `sum a_i X^(-i)` together with a tail `O(X^(-(N+1)))`, i.e. a closed ball of
//! radius `k^(-(N+1))`. Exact values (Laurent polynomials) carry no tail.
//! Norms are powers of `k` and are kept as integer exponents ([`NormExp`]).

use std::cmp::{max, min, Ordering};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_arith::{fmt_term, Field, Fq, Poly};

/// A norm value `k^e`, or zero. Ordering puts `Zero` below every finite value.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NormExp {
    Zero,
    Finite(i64),
}

impl NormExp {
    pub const ONE: NormExp = NormExp::Finite(0);

    pub fn exp(self) -> Option<i64> {
        match self {
            NormExp::Zero => None,
            NormExp::Finite(e) => Some(e),
        }
    }

    pub fn is_zero(self) -> bool {
        self == NormExp::Zero
    }

    /// `|x|_+ = max(|x|, 1)`.
    pub fn plus(self) -> NormExp {
        max(self, NormExp::ONE)
    }

    /// Product of norms.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: NormExp) -> NormExp {
        match (self, other) {
            (NormExp::Finite(a), NormExp::Finite(b)) => NormExp::Finite(a + b),
            _ => NormExp::Zero,
        }
    }

    /// Multiplication by `k^e`.
    pub fn scale(self, e: i64) -> NormExp {
        match self {
            NormExp::Zero => NormExp::Zero,
            NormExp::Finite(a) => NormExp::Finite(a + e),
        }
    }

    /// Strict comparison `self < k^e`, which for norms in `k^Z` is `self <= k^(e-1)`.
    pub fn lt_pow(self, e: i64) -> bool {
        self < NormExp::Finite(e)
    }
}

impl fmt::Display for NormExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExp::Zero => write!(f, "0"),
            NormExp::Finite(e) => write!(f, "k^{e}"),
        }
    }
}

/// An element of K known up to a ball.
#[derive(Clone)]
pub struct LaurentBall {
    field: Field,
    start: i64,
    coeffs: Vec<Fq>,
    prec: i64,
    exact: bool,
}

impl PartialEq for LaurentBall {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start
            && self.prec == other.prec
            && self.exact == other.exact
            && self.coeffs == other.coeffs
            && self.field == other.field
    }
}

impl Eq for LaurentBall {}

impl fmt::Debug for LaurentBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentBall({self})")
    }
}

/// Serialized form: `{start, coeffs, prec, exact}`; coefficients are element
/// indices (`sum c_i p^i` over the power basis).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentRecord {
    pub start: i64,
    pub coeffs: Vec<u32>,
    pub prec: i64,
    pub exact: bool,
}

/// Which operation [`arith`] performs.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    /// Inverse, carried to the given precision.
    Inv(i64),
}

/// Checked entry point for ball arithmetic.
pub fn arith(kind: ArithKind, a: &LaurentBall, b: Option<&LaurentBall>) -> Result<LaurentBall> {
    let need_b = || b.ok_or_else(|| Error::InvalidArgument("missing second operand".into()));
    if let Some(b) = b {
        if a.field != b.field {
            return Err(Error::FieldMismatch);
        }
    }
    match kind {
        ArithKind::Add => Ok(a.add(need_b()?)),
        ArithKind::Sub => Ok(a.sub(need_b()?)),
        ArithKind::Mul => Ok(a.mul(need_b()?)),
        ArithKind::Inv(prec) => a.inv(prec),
    }
}

impl LaurentBall {
    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                if self.exact {
                    self.start = 0;
                    self.prec = -1;
                } else {
                    self.start = self.prec + 1;
                }
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.start += i as i64;
                }
                if self.exact {
                    while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                        self.coeffs.pop();
                    }
                    self.prec = self.start + self.coeffs.len() as i64 - 1;
                }
            }
        }
        self
    }

    /// The exact Laurent polynomial `sum coeffs[j] X^(-(start + j))`.
    pub fn exact(field: &Field, start: i64, coeffs: Vec<Fq>) -> Self {
        let prec = start + coeffs.len() as i64 - 1;
        LaurentBall { field: field.clone(), start, coeffs, prec, exact: true }.normalized()
    }

    /// The ball `sum coeffs[j] X^(-(start + j)) + O(X^(-(prec + 1)))`; coefficients
    /// beyond `prec` are dropped.
    pub fn with_prec(field: &Field, start: i64, mut coeffs: Vec<Fq>, prec: i64) -> Self {
        let want = (prec - start + 1).max(0) as usize;
        coeffs.resize(want, Fq::ZERO);
        let start = if want == 0 { prec + 1 } else { start };
        LaurentBall { field: field.clone(), start, coeffs, prec, exact: false }.normalized()
    }

    /// Exact value from `(power of X, coefficient)` terms.
    pub fn from_terms(field: &Field, terms: &[(i64, Fq)]) -> Self {
        if terms.is_empty() {
            return LaurentBall::zero(field);
        }
        let lo = terms.iter().map(|t| -t.0).min().unwrap();
        let hi = terms.iter().map(|t| -t.0).max().unwrap();
        let mut v = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for &(pw, c) in terms {
            let slot = &mut v[(-pw - lo) as usize];
            *slot = field.add(*slot, c);
        }
        LaurentBall::exact(field, lo, v)
    }

    pub fn zero(field: &Field) -> Self {
        LaurentBall::exact(field, 0, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        LaurentBall::exact(field, 0, vec![Fq::ONE])
    }

    pub fn constant(field: &Field, c: Fq) -> Self {
        LaurentBall::exact(field, 0, vec![c])
    }

    /// `X^e`.
    pub fn x_pow(field: &Field, e: i64) -> Self {
        LaurentBall::exact(field, -e, vec![Fq::ONE])
    }

    pub fn from_poly(p: &Poly) -> Self {
        let n = p.coeffs().len() as i64;
        let coeffs: Vec<Fq> = p.coeffs().iter().rev().copied().collect();
        LaurentBall::exact(p.field(), -(n - 1), coeffs)
    }

    /// `X^(-s) * p`.
    pub fn from_scaled_poly(p: &Poly, s: i64) -> Self {
        LaurentBall::from_poly(p).shift(-s)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn stored_coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// Coefficient of `X^(-i)`; `None` when it lies below the known precision.
    pub fn coeff(&self, i: i64) -> Option<Fq> {
        if !self.exact && i > self.prec {
            return None;
        }
        if i < self.start || i >= self.start + self.coeffs.len() as i64 {
            return Some(Fq::ZERO);
        }
        Some(self.coeffs[(i - self.start) as usize])
    }

    /// Exponent of the radius, `None` for exact values.
    pub fn radius_exp(&self) -> Option<i64> {
        if self.exact {
            None
        } else {
            Some(-(self.prec + 1))
        }
    }

    /// Largest possible norm of a point in the ball (`None` = exact zero).
    pub fn upper_exp(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.radius_exp()
        } else {
            Some(-self.start)
        }
    }

    /// Index of the last stored term (meaningful for exact nonzero values).
    pub fn last_index(&self) -> i64 {
        self.start + self.coeffs.len() as i64 - 1
    }

    /// The valuation `v(a)`; `Ok(None)` stands for `+infinity`.
    pub fn valuation(&self) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() {
            Ok(Some(self.start))
        } else if self.exact {
            Ok(None)
        } else {
            Err(Error::precision(format!("valuation undetermined: all coefficients up to X^-{} vanish", self.prec)))
        }
    }

    pub fn norm(&self) -> Result<NormExp> {
        Ok(match self.valuation()? {
            None => NormExp::Zero,
            Some(v) => NormExp::Finite(-v),
        })
    }

    /// Norm if it is determined at the current precision.
    pub fn try_norm(&self) -> Option<NormExp> {
        self.norm().ok()
    }

    /// The known part as an exact Laurent polynomial.
    pub fn center(&self) -> LaurentBall {
        LaurentBall::exact(&self.field, self.start, self.coeffs.clone())
    }

    /// Forgets everything below index `prec`.
    pub fn truncate(&self, prec: i64) -> LaurentBall {
        let prec = if self.exact { prec } else { min(prec, self.prec) };
        LaurentBall::with_prec(&self.field, self.start, self.coeffs.clone(), prec)
    }

    /// Whether the exact value `x` lies in this ball.
    pub fn contains(&self, x: &LaurentBall) -> bool {
        let hi = if self.exact { max(self.last_index(), x.last_index()) } else { self.prec };
        let lo = min(self.start, x.start);
        (lo..=hi).all(|i| self.coeff(i) == x.coeff(i))
    }

    /// Multiplication by `X^e`.
    pub fn shift(&self, e: i64) -> LaurentBall {
        let mut out = self.clone();
        out.start -= e;
        out.prec -= e;
        out
    }

    pub fn neg(&self) -> LaurentBall {
        let f = &self.field;
        LaurentBall {
            field: f.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
            exact: self.exact,
        }
    }

    pub fn scale(&self, c: Fq) -> LaurentBall {
        let f = &self.field;
        LaurentBall {
            field: f.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            prec: self.prec,
            exact: self.exact,
        }
        .normalized()
    }

    fn combine(&self, other: &LaurentBall, negate: bool) -> LaurentBall {
        let f = &self.field;
        let exact = self.exact && other.exact;
        let prec = match (self.exact, other.exact) {
            (true, true) => max(self.last_index(), other.last_index()),
            (true, false) => other.prec,
            (false, true) => self.prec,
            (false, false) => min(self.prec, other.prec),
        };
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, true) => prec + 1,
            (true, false) => other.start,
            (false, true) => self.start,
            (false, false) => min(self.start, other.start),
        };
        let lo = min(lo, prec + 1);
        let coeffs = (lo..=prec)
            .map(|i| {
                let a = self.coeff(i).unwrap_or(Fq::ZERO);
                let b = other.coeff(i).unwrap_or(Fq::ZERO);
                if negate {
                    f.sub(a, b)
                } else {
                    f.add(a, b)
                }
            })
            .collect();
        LaurentBall { field: f.clone(), start: lo, coeffs, prec, exact }.normalized()
    }

    pub fn add(&self, other: &LaurentBall) -> LaurentBall {
        debug_assert!(self.field == other.field);
        self.combine(other, false)
    }

    pub fn sub(&self, other: &LaurentBall) -> LaurentBall {
        debug_assert!(self.field == other.field);
        self.combine(other, true)
    }

    /// Product; the radius is `max(|a| r_b, |b| r_a, r_a r_b)`.
    pub fn mul(&self, other: &LaurentBall) -> LaurentBall {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        if self.is_exact_zero() || other.is_exact_zero() {
            return LaurentBall::zero(f);
        }
        let exact = self.exact && other.exact;
        let prec = if exact {
            self.last_index() + other.last_index()
        } else {
            let (ua, ra) = (self.upper_exp(), self.radius_exp());
            let (ub, rb) = (other.upper_exp(), other.radius_exp());
            let rad = [sum_opt(ua, rb), sum_opt(ub, ra), sum_opt(ra, rb)]
                .into_iter()
                .flatten()
                .max()
                .expect("an inexact operand has a radius");
            -rad - 1
        };
        let lo = self.start + other.start;
        if self.coeffs.is_empty() || other.coeffs.is_empty() || prec < lo {
            return LaurentBall::with_prec(f, prec + 1, Vec::new(), prec);
        }
        let len = (prec - lo + 1) as usize;
        let mut out = vec![Fq::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        LaurentBall { field: f.clone(), start: lo, coeffs: out, prec, exact }.normalized()
    }

    /// Inverse carried to precision at most `prec`. The inverse of a monomial is
    /// exact; otherwise a ball of radius `r k^(-2e)` (with `|a| = k^e`) or the
    /// requested precision, whichever is coarser.
    pub fn inv(&self, prec: i64) -> Result<LaurentBall> {
        let f = &self.field;
        if self.is_exact_zero() {
            return Err(Error::DivideByZero);
        }
        let v = self.valuation()?.expect("nonzero value has finite valuation");
        let u0inv = f.inv(self.coeffs[0]).expect("leading coefficient nonzero");
        if self.exact && self.coeffs.len() == 1 {
            return Ok(LaurentBall::exact(f, -v, vec![u0inv]));
        }
        let res_prec = if self.exact { prec } else { min(prec, self.prec - 2 * v) };
        let res_start = -v;
        if res_prec < res_start {
            return Ok(LaurentBall::with_prec(f, res_prec + 1, Vec::new(), res_prec));
        }
        let n = (res_prec - res_start + 1) as usize;
        let mut w = Vec::with_capacity(n);
        w.push(u0inv);
        for j in 1..n {
            let mut acc = Fq::ZERO;
            for i in 1..=j.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[i], w[j - i]));
            }
            w.push(f.neg(f.mul(acc, u0inv)));
        }
        Ok(LaurentBall::with_prec(f, res_start, w, res_prec))
    }

    /// Quotient of exact values, exact when the divisor divides the dividend in
    /// F_q[X, 1/X]; `None` otherwise.
    pub fn exact_div(&self, other: &LaurentBall) -> Result<Option<LaurentBall>> {
        if !(self.exact && other.exact) {
            return Err(Error::InvalidArgument("exact_div needs exact operands".into()));
        }
        if other.is_exact_zero() {
            return Err(Error::DivideByZero);
        }
        if self.is_exact_zero() {
            return Ok(Some(self.clone()));
        }
        let sa = self.last_index();
        let sb = other.last_index();
        let pa = self.to_scaled_poly(sa);
        let pb = other.to_scaled_poly(sb);
        let (q, r) = pa.divmod(&pb)?;
        if !r.is_zero() {
            return Ok(None);
        }
        Ok(Some(LaurentBall::from_scaled_poly(&q, sa - sb)))
    }

    /// `X^s * a` as a polynomial; requires an exact value with no terms below
    /// `X^(-s)`.
    pub fn to_scaled_poly(&self, s: i64) -> Poly {
        debug_assert!(self.exact);
        if self.coeffs.is_empty() {
            return Poly::zero(&self.field);
        }
        assert!(self.last_index() <= s, "scale too small for exact value");
        // term index i becomes X^(s - i)
        let top = (s - self.start) as usize;
        let mut v = vec![Fq::ZERO; top + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            let i = self.start + j as i64;
            v[(s - i) as usize] = c;
        }
        Poly::new(&self.field, v)
    }

    /// The polynomial part `[a]`: the terms with non-negative powers of X.
    pub fn polynomial_part(&self) -> Result<Poly> {
        if !self.exact && self.prec < 0 {
            return Err(Error::precision("polynomial part needs the constant coefficient"));
        }
        if self.start > 0 {
            return Ok(Poly::zero(&self.field));
        }
        let top = (-self.start) as usize;
        let v = (0..=top).map(|d| self.coeff(-(d as i64)).unwrap_or(Fq::ZERO)).collect();
        Ok(Poly::new(&self.field, v))
    }

    /// `a - [a]`.
    pub fn fractional_part(&self) -> Result<LaurentBall> {
        let p = self.polynomial_part()?;
        Ok(self.sub(&LaurentBall::from_poly(&p)))
    }

    pub fn to_record(&self) -> LaurentRecord {
        LaurentRecord {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c.0).collect(),
            prec: self.prec,
            exact: self.exact,
        }
    }

    pub fn from_record(field: &Field, rec: &LaurentRecord) -> Result<Self> {
        if let Some(&bad) = rec.coeffs.iter().find(|&&c| c >= field.k()) {
            return Err(Error::InvalidArgument(format!("coefficient index {bad} out of range")));
        }
        let coeffs = rec.coeffs.iter().map(|&c| Fq(c)).collect();
        Ok(if rec.exact {
            LaurentBall::exact(field, rec.start, coeffs)
        } else {
            LaurentBall::with_prec(field, rec.start, coeffs, rec.prec)
        })
    }
}

fn sum_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

impl fmt::Display for LaurentBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pw = -(self.start + j as i64);
            let mono = match pw {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{pw}"),
            };
            terms.push(fmt_term(&self.field, c, &mono));
        }
        if !self.exact {
            terms.push(format!("O(X^{})", -(self.prec + 1)));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// A vector in K^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecK(pub Vec<LaurentBall>);

/// Which vector norm [`vec_norm`] computes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NormKind {
    /// `max |x_i|`
    Max,
    /// `max |x_i|_+`
    Plus,
    /// `prod |x_i|_+`
    PiPlus,
}

pub fn vec_norm(kind: NormKind, x: &VecK) -> Result<NormExp> {
    let norms = x.0.iter().map(LaurentBall::norm).collect::<Result<Vec<_>>>()?;
    Ok(match kind {
        NormKind::Max => norms.into_iter().max().unwrap_or(NormExp::Zero),
        NormKind::Plus => norms.into_iter().map(NormExp::plus).max().unwrap_or(NormExp::ONE),
        NormKind::PiPlus => NormExp::Finite(norms.into_iter().map(|n| n.plus().exp().expect("|x|_+ is finite")).sum()),
    })
}

impl VecK {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn field(&self) -> Option<&Field> {
        self.0.first().map(LaurentBall::field)
    }

    pub fn norm(&self) -> Result<NormExp> {
        vec_norm(NormKind::Max, self)
    }
}

/// Compares two norms; helper for sorting by norm then something else.
pub fn cmp_norm(a: NormExp, b: NormExp) -> Ordering {
    a.cmp(&b)
}
