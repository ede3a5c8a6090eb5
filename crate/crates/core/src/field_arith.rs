//! The finite field F_q (q = p^nu) and the polynomial ring F_q[X].
//!
//! Elements of F_q are stored as a single index `sum c_i p^i` where `c_i` are
//! the power-basis coordinates with respect to the generator `g`, a root of
//! the field modulus. Prime fields reduce to plain residues.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;
const TABLE_LIMIT: u32 = 1024;

/// An element of F_q, encoded by its power-basis index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A validated description of F_q.
pub struct FieldSpec {
    p: u32,
    nu: u32,
    k: u32,
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    inv_table: Vec<u32>,
}

/// Shared handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.nu == other.nu && self.modulus == other.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.k)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nu == 1 {
            write!(f, "{}", self.p)
        } else {
            let m = fp_poly_string(&self.modulus, "g");
            write!(f, "{}^{}:{}", self.p, self.nu, m)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds F_q with q = p^nu. `modulus` lists the coefficients of the defining
/// polynomial in ascending order and is required exactly when `nu > 1`.
pub fn make_field(p: u64, nu: u32, modulus: Option<&[u32]>) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if nu == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let k = (p as u128).checked_pow(nu).unwrap_or(u128::MAX);
    if k > MAX_FIELD_SIZE as u128 {
        return Err(Error::FieldTooLarge(k.min(u64::MAX as u128) as u64));
    }
    let p32 = p as u32;
    let modulus = match (nu, modulus) {
        (1, None) => vec![0, 1],
        (1, Some(m)) => {
            let m = fp_normalize(m, p32);
            if m.len() != 2 {
                return Err(Error::DegreeMismatch { expected: 1, got: m.len().checked_sub(1) });
            }
            vec![0, 1]
        }
        (_, None) => return Err(Error::InvalidArgument(format!("extension degree {nu} requires a modulus"))),
        (_, Some(m)) => {
            let m = fp_normalize(m, p32);
            if m.len() != nu as usize + 1 {
                return Err(Error::DegreeMismatch { expected: nu, got: m.len().checked_sub(1) });
            }
            let m = fp_monic(&m, p32);
            if !fp_irreducible(&m, p32) {
                return Err(Error::ReducibleModulus(p32));
            }
            m
        }
    };
    let mut spec =
        FieldSpec { p: p32, nu, k: k as u32, modulus, add_table: None, mul_table: None, inv_table: Vec::new() };
    spec.build_tables();
    Ok(Field(Arc::new(spec)))
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        make_field(p, 1, None)
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl FieldSpec {
    fn build_tables(&mut self) {
        let k = self.k;
        if self.nu > 1 && k <= TABLE_LIMIT {
            let mut add = vec![0u32; (k * k) as usize];
            let mut mul = vec![0u32; (k * k) as usize];
            for a in 0..k {
                for b in 0..k {
                    add[(a * k + b) as usize] = self.add_direct(a, b);
                    mul[(a * k + b) as usize] = self.mul_direct(a, b);
                }
            }
            self.add_table = Some(add);
            self.mul_table = Some(mul);
        }
        let mut inv = vec![0u32; k as usize];
        for a in 1..k {
            if inv[a as usize] != 0 {
                continue;
            }
            // a^(k-2) is the inverse in a field of k elements
            let b = self.pow_direct(a, k as u64 - 2);
            inv[a as usize] = b;
            inv[b as usize] = a;
        }
        self.inv_table = inv;
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// Number of elements, `k = p^nu`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Monic defining polynomial over F_p, ascending coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// The generator `g` of the power basis (equals 0 in a prime field, where
    /// it is not meaningful).
    pub fn generator(&self) -> Fq {
        if self.nu == 1 {
            Fq::ZERO
        } else {
            Fq(self.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.k).map(Fq)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.k).map(Fq)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, a: Fq) -> Vec<u32> {
        let mut v = a.0;
        (0..self.nu)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Fq> {
        if digits.len() > self.nu as usize {
            return Err(Error::DimensionMismatch { expected: self.nu as usize, got: digits.len() });
        }
        let mut v = 0u32;
        for &d in digits.iter().rev() {
            if d >= self.p {
                return Err(Error::InvalidArgument(format!("digit {d} out of range")));
            }
            v = v * self.p + d;
        }
        Ok(Fq(v))
    }

    fn add_direct(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.nu {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_direct(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.nu {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        if self.nu == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let da = self.digits(Fq(a));
        let db = self.digits(Fq(b));
        let prod = fp_mul(&da, &db, self.p);
        let r = fp_rem(&prod, &self.modulus, self.p);
        let mut out = 0;
        for &d in r.iter().rev() {
            out = out * self.p + d;
        }
        out
    }

    fn pow_direct(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, base);
            }
            base = self.mul_direct(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.nu == 1 {
            let s = a.0 + b.0;
            Fq(if s >= self.p { s - self.p } else { s })
        } else if let Some(t) = &self.add_table {
            Fq(t[(a.0 * self.k + b.0) as usize])
        } else {
            Fq(self.add_direct(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.nu == 1 {
            Fq(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else {
            Fq(self.neg_direct(a.0))
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        if self.nu == 1 {
            Fq(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.nu == 1 {
            Fq(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
        } else if let Some(t) = &self.mul_table {
            Fq(t[(a.0 * self.k + b.0) as usize])
        } else {
            Fq(self.mul_direct(a.0, b.0))
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            None
        } else {
            Some(Fq(self.inv_table[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        let bi = self.inv(b).ok_or(Error::DivideByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        Fq(self.pow_direct(a.0, e))
    }

    /// Binomial coefficient C(n, r) reduced into the prime subfield.
    pub fn binomial(&self, n: u64, r: u64) -> Fq {
        // Lucas' theorem
        let p = self.p as u64;
        let (mut n, mut r) = (n, r);
        let mut acc = 1u64;
        while n > 0 || r > 0 {
            let (nd, rd) = (n % p, r % p);
            if rd > nd {
                return Fq::ZERO;
            }
            acc = acc * small_binomial(nd, rd, p) % p;
            n /= p;
            r /= p;
        }
        Fq(acc as u32)
    }

    /// n! reduced into the prime subfield.
    pub fn factorial(&self, n: u64) -> Fq {
        let p = self.p as u64;
        if n >= p {
            return Fq::ZERO;
        }
        Fq(((1..=n).fold(1u64, |acc, i| acc * i % p)) as u32)
    }

    /// Textual form: a decimal residue for prime fields, a polynomial in `g`
    /// otherwise.
    pub fn fmt_elem(&self, a: Fq) -> String {
        if self.nu == 1 {
            a.0.to_string()
        } else {
            fp_poly_string(&self.digits(a), "g")
        }
    }
}

fn small_binomial(n: u64, r: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..r {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // p is prime and den is nonzero mod p since r < p
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    num * inv % p
}

// ----- polynomials over F_p used for the modulus -----

fn fp_normalize(a: &[u32], p: u32) -> Vec<u32> {
    let mut v: Vec<u32> = a.iter().map(|&c| c % p).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = a as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn fp_monic(a: &[u32], p: u32) -> Vec<u32> {
    let lc = *a.last().expect("nonzero polynomial");
    let inv = fp_inv(lc, p) as u64;
    a.iter().map(|&c| (c as u64 * inv % p as u64) as u32).collect()
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    fp_normalize(&out.into_iter().map(|c| c as u32).collect::<Vec<_>>(), p)
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_normalize(a, p);
    let dm = m.len() - 1;
    let inv = fp_inv(m[dm], p) as u64;
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = *r.last().unwrap() as u64 * inv % p as u64;
        for (i, &mc) in m.iter().enumerate() {
            let sub = c * mc as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = fp_normalize(&r, p);
    }
    r
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let v: Vec<u32> = (0..n)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            (x + p - y) % p
        })
        .collect();
    fp_normalize(&v, p)
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = fp_normalize(a, p);
    let mut b = fp_normalize(b, p);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    // x^(p^i) mod f for i = 1..n/2; f is irreducible iff gcd(x^(p^i) - x, f) = 1
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        let mut acc = vec![1u32];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_rem(&fp_mul(&acc, &base, p), f, p);
            }
            base = fp_rem(&fp_mul(&base, &base, p), f, p);
            e >>= 1;
        }
        xp = acc;
        let g = fp_gcd(f, &fp_sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn fp_poly_string(c: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &d) in c.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (d, mono.is_empty()) {
            (_, true) => d.to_string(),
            (1, false) => mono,
            (_, false) => format!("{d}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Renders `c * mono` using the textual element syntax.
pub(crate) fn fmt_term(field: &FieldSpec, c: Fq, mono: &str) -> String {
    let cs = field.fmt_elem(c);
    if mono.is_empty() {
        cs
    } else if c == Fq::ONE {
        mono.to_string()
    } else if cs.contains('+') {
        format!("({cs})*{mono}")
    } else {
        format!("{cs}*{mono}")
    }
}

// ----- F_q[X] -----

/// A polynomial over F_q with ascending coefficients; the zero polynomial has
/// no coefficients and degree `None` (i.e. minus infinity).
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fq>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            terms.push(fmt_term(&self.field, c, &mono));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Poly::constant(field, Fq::ONE)
    }

    pub fn constant(field: &Field, c: Fq) -> Self {
        Poly::new(field, vec![c])
    }

    /// `c * X^deg`.
    pub fn monomial(field: &Field, c: Fq, deg: usize) -> Self {
        let mut v = vec![Fq::ZERO; deg + 1];
        v[deg] = c;
        Poly::new(field, v)
    }

    pub fn x(field: &Field) -> Self {
        Poly::monomial(field, Fq::ONE, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fq> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, v)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, c: Fq) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `X^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fq::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs: v }
    }

    /// Euclidean division: `(q, r)` with `self = q*b + r` and `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.check(b)?;
        let db = b.degree().ok_or(Error::DivideByZero)?;
        let f = &self.field;
        let inv = f.inv(b.coeffs[db]).expect("leading coefficient is nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![Fq::ZERO; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            q[i - db] = c;
            for (j, &bc) in b.coeffs.iter().enumerate() {
                let idx = i - db + j;
                r[idx] = f.sub(r[idx], f.mul(c, bc));
            }
        }
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("nonzero")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(a.monic())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.from_int(i as i64))).collect();
        Poly::new(f, v)
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Compares coefficient tuples lexicographically from the constant term up,
    /// after padding both to the same length.
    pub fn cmp_coeffs(&self, other: &Poly) -> Ordering {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|i| self.coeff(i).cmp(&other.coeff(i))).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
    }

    /// All polynomials of degree at most `bound` (including zero), in
    /// increasing coefficient-index order.
    pub fn all_up_to_degree(field: &Field, bound: usize) -> impl Iterator<Item = Poly> + '_ {
        let k = field.k() as u64;
        let total = k.pow(bound as u32 + 1);
        (0..total).map(move |mut idx| {
            let v = (0..=bound)
                .map(|_| {
                    let c = Fq((idx % k) as u32);
                    idx /= k;
                    c
                })
                .collect();
            Poly::new(field, v)
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        Poly::add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        Poly::sub(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        Poly::mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Which ring operation [`poly_op`] performs.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PolyOpKind {
    Add,
    Mul,
    DivMod,
    Gcd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyOpResult {
    Single(Poly),
    Pair(Poly, Poly),
}

pub fn poly_op(kind: PolyOpKind, a: &Poly, b: &Poly) -> Result<PolyOpResult> {
    a.check(b)?;
    Ok(match kind {
        PolyOpKind::Add => PolyOpResult::Single(a.add(b)),
        PolyOpKind::Mul => PolyOpResult::Single(a.mul(b)),
        PolyOpKind::DivMod => {
            let (q, r) = a.divmod(b)?;
            PolyOpResult::Pair(q, r)
        }
        PolyOpKind::Gcd => PolyOpResult::Single(a.gcd(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(make_field(3, 1, None).unwrap().k(), 3);
        let f4 = make_field(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.k(), 4);
        assert_eq!(make_field(4, 1, None).err(), Some(Error::NotPrime(4)));
        // g^2 + 1 = (g + 1)^2 over F_2
        assert_eq!(make_field(2, 2, Some(&[1, 0, 1])).err(), Some(Error::ReducibleModulus(2)));
        assert!(matches!(make_field(2, 2, Some(&[1, 1, 0, 1])), Err(Error::DegreeMismatch { expected: 2, .. })));
        assert!(make_field(3, 2, None).is_err());
    }

    #[test]
    fn poly_examples_over_f3() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 1]);
        let b = Poly::from_ints(&f, &[2, 1]);
        let prod = &a * &b;
        assert_eq!(prod, Poly::from_ints(&f, &[2, 0, 1]));
        let (q, r) = prod.divmod(&a).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
        assert_eq!(prod.gcd(&a).unwrap(), a);
        assert_eq!(prod.to_string(), "X^2+2");
    }

    #[test]
    fn divide_by_zero() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 1]);
        assert_eq!(a.divmod(&Poly::zero(&f)).err(), Some(Error::DivideByZero));
        assert!(matches!(poly_op(PolyOpKind::Gcd, &Poly::zero(&f), &Poly::zero(&f)), Err(Error::DivideByZero)));
    }

    #[test]
    fn field_mismatch() {
        let a = Poly::one(&f3());
        let b = Poly::one(&Field::prime(5).unwrap());
        assert_eq!(poly_op(PolyOpKind::Add, &a, &b).err(), Some(Error::FieldMismatch));
    }

    fn exhaustive_axioms(field: &Field) {
        let els: Vec<Fq> = field.elements().collect();
        for &a in &els {
            assert_eq!(field.add(a, field.neg(a)), Fq::ZERO);
            if !a.is_zero() {
                assert_eq!(field.mul(a, field.inv(a).unwrap()), Fq::ONE);
            }
            for &b in &els {
                assert_eq!(field.add(a, b), field.add(b, a));
                assert_eq!(field.mul(a, b), field.mul(b, a));
                for &c in &els {
                    assert_eq!(field.add(field.add(a, b), c), field.add(a, field.add(b, c)));
                    assert_eq!(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
                    assert_eq!(field.mul(a, field.add(b, c)), field.add(field.mul(a, b), field.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_up_to_nine() {
        for (p, nu, m) in [
            (2u64, 1u32, None),
            (3, 1, None),
            (5, 1, None),
            (7, 1, None),
            (2, 2, Some(vec![1u32, 1, 1])),
            (2, 3, Some(vec![1, 1, 0, 1])),
            (3, 2, Some(vec![1, 0, 1])),
        ] {
            let f = make_field(p, nu, m.as_deref()).unwrap();
            exhaustive_axioms(&f);
        }
    }

    #[test]
    fn binomials_and_factorials() {
        let f = f3();
        assert_eq!(f.binomial(3, 1), Fq(0));
        assert_eq!(f.binomial(4, 2), Fq(0));
        assert_eq!(f.binomial(4, 1), Fq(1));
        assert_eq!(f.factorial(2), Fq(2));
        assert_eq!(f.factorial(3), Fq(0));
    }

    #[test]
    fn extension_display() {
        let f4 = make_field(2, 2, Some(&[1, 1, 1])).unwrap();
        let g = f4.generator();
        assert_eq!(f4.fmt_elem(g), "g");
        assert_eq!(f4.fmt_elem(f4.mul(g, g)), "g+1");
        let p = Poly::new(&f4, vec![g, f4.add(g, Fq::ONE)]);
        assert_eq!(p.to_string(), "(g+1)*X+g");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::vec(0i64..3, 0..max_len)
        }

        proptest! {
            #[test]
            fn degree_is_additive(a in arb_poly(8), b in arb_poly(8)) {
                let f = f3();
                let (a, b) = (Poly::from_ints(&f, &a), Poly::from_ints(&f, &b));
                let expect = match (a.degree(), b.degree()) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                };
                prop_assert_eq!((&a * &b).degree(), expect);
            }

            #[test]
            fn divmod_reconstructs(a in arb_poly(10), b in arb_poly(6)) {
                let f = f3();
                let (a, b) = (Poly::from_ints(&f, &a), Poly::from_ints(&f, &b));
                prop_assume!(!b.is_zero());
                let (q, r) = a.divmod(&b).unwrap();
                prop_assert_eq!(&(&q * &b) + &r, a);
                prop_assert!(r.degree() < b.degree());
            }
        }
    }
}
