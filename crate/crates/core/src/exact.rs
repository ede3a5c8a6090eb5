//! Exact positive reals of the form `prod b_i^(e_i)` with rational bases and
//! rational exponents, and exact Haar measures `count * k^(-E)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A product of rational powers of positive rationals.
#[derive(Clone, Debug)]
pub struct PowProduct {
    factors: Vec<(BigRational, Rational64)>,
}

/// Serialized bound: the value is `(num / (den * k^den_exp))^(1/root)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRecord {
    pub num: BigInt,
    pub den: BigInt,
    pub den_exp: i64,
    pub root: i64,
}

impl PowProduct {
    pub fn one() -> Self {
        PowProduct { factors: Vec::new() }
    }

    /// A positive rational.
    pub fn rational(r: BigRational) -> Self {
        assert!(r.is_positive(), "PowProduct needs positive bases");
        PowProduct::one().mul(&PowProduct { factors: vec![(r, Rational64::one())] })
    }

    pub fn integer(n: i64) -> Self {
        PowProduct::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `base^exp` for a positive integer base.
    pub fn pow(base: i64, exp: Rational64) -> Self {
        assert!(base > 0, "PowProduct needs positive bases");
        PowProduct::one().mul(&PowProduct { factors: vec![(BigRational::from_integer(BigInt::from(base)), exp)] })
    }

    pub fn mul(&self, other: &PowProduct) -> PowProduct {
        let mut factors = self.factors.clone();
        for (b, e) in &other.factors {
            match factors.iter_mut().find(|(fb, _)| fb == b) {
                Some(slot) => slot.1 += e,
                None => factors.push((b.clone(), *e)),
            }
        }
        factors.retain(|(b, e)| !e.is_zero() && !b.is_one());
        PowProduct { factors }
    }

    pub fn inv(&self) -> PowProduct {
        PowProduct { factors: self.factors.iter().map(|(b, e)| (b.clone(), -e)).collect() }
    }

    pub fn div(&self, other: &PowProduct) -> PowProduct {
        self.mul(&other.inv())
    }

    fn root_denominator(&self) -> i64 {
        self.factors.iter().fold(1i64, |acc, (_, e)| acc.lcm(e.denom()))
    }

    /// `self^root` as an exact rational.
    fn raised(&self, root: i64) -> BigRational {
        let mut acc = BigRational::one();
        for (b, e) in &self.factors {
            let ie = (e * Rational64::from_integer(root)).to_integer();
            let p = pow_big(b, ie.unsigned_abs());
            acc = if ie >= 0 { acc * p } else { acc / p };
        }
        acc
    }

    /// The value raised to the lcm of exponent denominators, with that power.
    pub fn as_root(&self) -> (BigRational, i64) {
        let r = self.root_denominator();
        (self.raised(r), r)
    }

    /// Exact `(num / (den k^den_exp))^(1/root)` with `num`, `den` free of full
    /// powers of `k`.
    pub fn to_record(&self, k: u32) -> BoundRecord {
        let (v, root) = self.as_root();
        let kb = BigInt::from(k);
        let (mut num, mut den) = (v.numer().clone(), v.denom().clone());
        let mut den_exp = 0i64;
        while !num.is_zero() && (&num % &kb).is_zero() {
            num /= &kb;
            den_exp -= 1;
        }
        while (&den % &kb).is_zero() {
            den /= &kb;
            den_exp += 1;
        }
        BoundRecord { num, den, den_exp, root }
    }

    /// Floating approximation for display only.
    pub fn approx(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| b.to_f64().unwrap_or(f64::NAN).powf(*e.numer() as f64 / *e.denom() as f64))
            .product()
    }
}

fn pow_big(b: &BigRational, e: u64) -> BigRational {
    num_traits::pow::pow(b.clone(), e as usize)
}

impl PartialEq for PowProduct {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PowProduct {}

impl PartialOrd for PowProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PowProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        let r = self.root_denominator().lcm(&other.root_denominator());
        self.raised(r).cmp(&other.raised(r))
    }
}

impl fmt::Display for PowProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(b, e)| if e.is_one() { format!("{b}") } else { format!("{b}^({e})") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exact Haar measure `count * k^(-res_exp)`; canonical form has `count` not
/// divisible by `k` (and `res_exp = 0` for zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasureValue {
    pub count: BigUint,
    pub res_exp: i64,
    k: u32,
}

impl MeasureValue {
    pub fn new(k: u32, count: BigUint, res_exp: i64) -> Self {
        MeasureValue { count, res_exp, k }.canonical()
    }

    pub fn zero(k: u32) -> Self {
        MeasureValue { count: BigUint::zero(), res_exp: 0, k }
    }

    /// `k^(-e)`, the measure of a ball of radius `k^(-e)` in K.
    pub fn pow_k(k: u32, e: i64) -> Self {
        MeasureValue::new(k, BigUint::one(), e)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.count.is_zero()
    }

    fn canonical(mut self) -> Self {
        if self.count.is_zero() {
            self.res_exp = 0;
            return self;
        }
        let kb = BigUint::from(self.k);
        while (&self.count % &kb).is_zero() {
            self.count /= &kb;
            self.res_exp -= 1;
        }
        self
    }

    fn scaled_to(&self, e: i64) -> BigUint {
        debug_assert!(e >= self.res_exp);
        &self.count * BigUint::from(self.k).pow((e - self.res_exp) as u32)
    }

    pub fn add(&self, other: &MeasureValue) -> MeasureValue {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.res_exp.max(other.res_exp);
        MeasureValue::new(self.k, self.scaled_to(e) + other.scaled_to(e), e)
    }

    /// Sum of `counts[i]` cells of measure `k^(-exps[i])`.
    pub fn from_cells(k: u32, cells: impl IntoIterator<Item = (u64, i64)>) -> MeasureValue {
        cells.into_iter().fold(MeasureValue::zero(k), |acc, (c, e)| acc.add(&MeasureValue::new(k, BigUint::from(c), e)))
    }

    pub fn to_rational(&self) -> BigRational {
        let kb = BigInt::from(self.k);
        let c = BigInt::from(self.count.clone());
        if self.res_exp >= 0 {
            BigRational::new(c, num_traits::pow::pow(kb, self.res_exp as usize))
        } else {
            BigRational::from_integer(c * num_traits::pow::pow(kb, (-self.res_exp) as usize))
        }
    }

    /// `None` for the zero measure, which no positive bound is below.
    pub fn to_pow_product(&self) -> Option<PowProduct> {
        if self.is_zero() {
            None
        } else {
            Some(PowProduct::rational(self.to_rational()))
        }
    }

    /// Exact `self <= bound`.
    pub fn le(&self, bound: &PowProduct) -> bool {
        match self.to_pow_product() {
            None => true,
            Some(p) => p <= *bound,
        }
    }
}

impl PartialOrd for MeasureValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeasureValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}^-{}", self.count, self.k, self.res_exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_irrational_powers() {
        // 2^(5/2) vs 5.6 and 5.7
        let c = PowProduct::pow(2, Rational64::new(5, 2));
        let lo = PowProduct::rational(BigRational::new(56.into(), 10.into()));
        let hi = PowProduct::rational(BigRational::new(57.into(), 10.into()));
        assert!(lo < c && c < hi);
        // 3^(-1/3) * 3 = 3^(2/3)
        let a = PowProduct::pow(3, Rational64::new(-1, 3)).mul(&PowProduct::integer(3));
        assert_eq!(a.cmp(&PowProduct::pow(9, Rational64::new(1, 3))), Ordering::Equal);
    }

    #[test]
    fn record_form() {
        let c = PowProduct::pow(2, Rational64::new(5, 2)).mul(&PowProduct::pow(3, Rational64::from_integer(-2)));
        let rec = c.to_record(3);
        assert_eq!(rec.root, 2);
        assert_eq!(rec.num, BigInt::from(32));
        assert_eq!(rec.den, BigInt::from(1));
        assert_eq!(rec.den_exp, 4);
    }

    #[test]
    fn measure_canonical_and_sum() {
        let a = MeasureValue::new(3, BigUint::from(9u32), 5);
        assert_eq!(a.count, BigUint::from(1u32));
        assert_eq!(a.res_exp, 3);
        let s = MeasureValue::from_cells(3, [(2, 1), (1, 1)]);
        assert_eq!(s, MeasureValue::pow_k(3, 0));
        let half = MeasureValue::from_cells(3, [(1, 1), (2, 2)]);
        assert_eq!(half.count, BigUint::from(5u32));
        assert_eq!(half.res_exp, 2);
        assert!(MeasureValue::zero(3) < half);
        assert!(half.le(&PowProduct::integer(1)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn measure() -> impl Strategy<Value = MeasureValue> {
            (0u64..500, 0i64..8).prop_map(|(c, e)| MeasureValue::new(3, BigUint::from(c), e))
        }

        fn pow_product() -> impl Strategy<Value = PowProduct> {
            prop::collection::vec((2i64..8, -6i64..7, 1i64..4), 0..3).prop_map(|fs| {
                fs.into_iter()
                    .fold(PowProduct::one(), |acc, (b, n, d)| acc.mul(&PowProduct::pow(b, Rational64::new(n, d))))
            })
        }

        proptest! {
            #[test]
            fn measure_add_is_exact(a in measure(), b in measure()) {
                let s = a.add(&b);
                prop_assert_eq!(s.to_rational(), a.to_rational() + b.to_rational());
                prop_assert_eq!(s, b.add(&a));
            }

            #[test]
            fn pow_product_order_is_multiplicative(a in pow_product(), b in pow_product(), c in pow_product()) {
                prop_assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
                prop_assert_eq!(a.div(&a), PowProduct::one());
                if (a.approx() - b.approx()).abs() > 1e-9 * a.approx().max(b.approx()) {
                    prop_assert_eq!(a < b, a.approx() < b.approx());
                }
            }

            #[test]
            fn measure_le_matches_rational(a in measure(), n in 1i64..200, d in 1i64..200) {
                let bound = PowProduct::integer(n).div(&PowProduct::integer(d));
                let r = BigRational::new(n.into(), d.into());
                prop_assert_eq!(a.le(&bound), a.to_rational() <= r);
            }
        }
    }
}
