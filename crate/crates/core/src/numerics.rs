//! Exact arithmetic substrate: half-integer spins, big rationals and
//! normalized sums of quadratic surds.
//!
//! A [`SurdSum`] is a finite sum `Σ cᵢ·√rᵢ` with rational `cᵢ ≠ 0` and
//! distinct square-free `rᵢ ≥ 1`. Since square roots of distinct square-free
//! integers are linearly independent over ℚ, this representation is unique
//! and structural equality coincides with numerical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// A spin `j` stored as the non-negative integer `2j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwiceSpin(pub u32);

impl TwiceSpin {
    pub const ZERO: TwiceSpin = TwiceSpin(0);
    pub const HALF: TwiceSpin = TwiceSpin(1);

    #[inline]
    pub const fn new(twice: u32) -> Self {
        TwiceSpin(twice)
    }

    #[inline]
    pub const fn twice(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Multiplicity `2j + 1`.
    #[inline]
    pub const fn dim(self) -> u32 {
        self.0 + 1
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl From<u32> for TwiceSpin {
    fn from(twice: u32) -> Self {
        TwiceSpin(twice)
    }
}

// Factorial memo shared by every thread. Filling is idempotent: whoever takes
// the write lock extends the table up to the requested index.
static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `n!` over arbitrary-precision integers, memoized process-wide.
pub fn factorial(n: usize) -> BigUint {
    {
        let table = FACTORIALS.read().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigUint::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// Primes up to and including `limit`.
pub(crate) fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; limit as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= limit as usize {
        if sieve[i] {
            let mut k = i * i;
            while k <= limit as usize {
                sieve[k] = false;
                k += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(p, &is_p)| is_p.then_some(p as u64))
        .collect()
}

/// Signed prime-exponent vector: a positive rational written as `Π p^e`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct PrimePowers(BTreeMap<u64, i64>);

impl PrimePowers {
    /// Exponents of `n!` by Legendre's formula.
    pub(crate) fn factorial(n: u64) -> Self {
        let mut map = BTreeMap::new();
        for p in primes_up_to(n) {
            let mut e = 0i64;
            let mut q = p;
            while q <= n {
                e += (n / q) as i64;
                match q.checked_mul(p) {
                    Some(next) => q = next,
                    None => break,
                }
            }
            map.insert(p, e);
        }
        PrimePowers(map)
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &PrimePowers, scale: i64) {
        for (&p, &e) in &other.0 {
            *self.0.entry(p).or_insert(0) += scale * e;
        }
        self.0.retain(|_, e| *e != 0);
    }

    /// `√(Π p^e)` as a single-term surd.
    pub(crate) fn sqrt(&self) -> SurdSum {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        let mut radicand = BigUint::one();
        for (&p, &e) in &self.0 {
            let half = e.div_euclid(2);
            if e.rem_euclid(2) == 1 {
                radicand *= p;
            }
            let pow = BigUint::from(p).pow(half.unsigned_abs() as u32);
            if half >= 0 {
                num *= pow;
            } else {
                den *= pow;
            }
        }
        let coeff = Rational::new(BigInt::from(num), BigInt::from(den));
        SurdSum::single(coeff, radicand)
    }
}

/// Splits `n` into `(s, r)` with `n = s²·r` and `r` square-free, by trial
/// division.
fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut radicand = BigUint::one();
    let mut d = BigUint::from(2u32);
    while &d * &d <= rest {
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            square *= d.pow(e / 2);
            if e % 2 == 1 {
                radicand *= &d;
            }
        }
        d += if d == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    radicand *= rest;
    (square, radicand)
}

/// Exact real number `Σ coeff·√radicand` with square-free radicands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SurdSum {
    terms: BTreeMap<BigUint, Rational>,
}

/// `coefficient·√radicand`, with the largest square divisor pulled out of the
/// radicand.
pub fn surd_normalize(coefficient: Rational, radicand: &BigInt) -> Result<SurdSum> {
    if radicand.sign() != Sign::Plus {
        return Err(Error::InvalidSurd);
    }
    let (square, free) = square_free_split(radicand.magnitude());
    let coeff = coefficient * Rational::from_integer(BigInt::from(square));
    Ok(SurdSum::single(coeff, free))
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn one() -> Self {
        SurdSum::from_rational(Rational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        SurdSum::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: Rational) -> Self {
        SurdSum::single(q, BigUint::one())
    }

    /// Builds `coeff·√radicand`; the caller guarantees `radicand` is square-free.
    pub(crate) fn single(coeff: Rational, radicand: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(radicand, coeff);
        }
        SurdSum { terms }
    }

    /// `√n` for a positive machine integer.
    pub fn sqrt_u64(n: u64) -> Self {
        surd_normalize(Rational::one(), &BigInt::from(n)).expect("positive radicand")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    /// The rational part if the number has no irrational terms.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn scale(&self, k: &Rational) -> SurdSum {
        if k.is_zero() {
            return SurdSum::zero();
        }
        SurdSum {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (r.clone(), c * k))
                .collect(),
        }
    }

    /// Multiplies by `±1`.
    pub fn signed(self, negative: bool) -> SurdSum {
        if negative {
            -self
        } else {
            self
        }
    }

    fn add_term(&mut self, radicand: BigUint, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(radicand) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Square of the number, exact.
    pub fn square(&self) -> SurdSum {
        self * self
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Certified dyadic approximation with `precision_bits` fractional bits
    /// per square root.
    pub fn to_float(&self, precision_bits: u32) -> SurdApprox {
        let bits = precision_bits.max(16);
        let scale = BigUint::one() << bits;
        let scale_sq = &scale * &scale;
        let denom = Rational::from_integer(BigInt::from(scale.clone()));
        let mut value = Rational::zero();
        let mut error = Rational::zero();
        for (r, c) in &self.terms {
            if r.is_one() {
                value += c;
                continue;
            }
            let root = (r * &scale_sq).sqrt();
            value += c * Rational::from_integer(BigInt::from(root)) / &denom;
            error += c.abs() / &denom;
        }
        SurdApprox { value, error }
    }

    /// Nearest `f64` (via a 128-bit certified approximation).
    pub fn to_f64(&self) -> f64 {
        self.to_float(128).to_f64()
    }
}

/// Result of [`SurdSum::to_float`]: an exact dyadic-rational value and a
/// guaranteed absolute error bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdApprox {
    pub value: Rational,
    pub error: Rational,
}

impl SurdApprox {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// Error bound rounded outward to `f64`.
    pub fn error_f64(&self) -> f64 {
        let e = self.error.to_f64().unwrap_or(f64::INFINITY);
        if e == 0.0 {
            0.0
        } else {
            e * (1.0 + 1e-12) + f64::MIN_POSITIVE
        }
    }

    /// True when the two certified intervals overlap.
    pub fn overlaps(&self, other: &SurdApprox) -> bool {
        (&self.value - &other.value).abs() <= &self.error + &other.error
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "√{r}")?;
            } else if (-c).is_one() {
                write!(f, "-√{r}")?;
            } else {
                write!(f, "({c})√{r}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SurdSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            radicand: serde_json::Value,
            num: String,
            den: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(r, c)| Term {
                radicand: match r.to_u64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(r.to_string()),
                },
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        let mut s = serializer.serialize_struct("SurdSum", 2)?;
        s.serialize_field("terms", &terms)?;
        s.serialize_field("float", &self.to_f64())?;
        s.end()
    }
}

impl Neg for SurdSum {
    type Output = SurdSum;
    fn neg(mut self) -> SurdSum {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &SurdSum {
    type Output = SurdSum;
    fn neg(self) -> SurdSum {
        -self.clone()
    }
}

impl AddAssign<&SurdSum> for SurdSum {
    fn add_assign(&mut self, rhs: &SurdSum) {
        for (r, c) in &rhs.terms {
            self.add_term(r.clone(), c.clone());
        }
    }
}

impl AddAssign for SurdSum {
    fn add_assign(&mut self, rhs: SurdSum) {
        for (r, c) in rhs.terms {
            self.add_term(r, c);
        }
    }
}

impl Add for &SurdSum {
    type Output = SurdSum;
    fn add(self, rhs: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SurdSum {
    type Output = SurdSum;
    fn add(mut self, rhs: SurdSum) -> SurdSum {
        self += rhs;
        self
    }
}

impl Sub for &SurdSum {
    type Output = SurdSum;
    fn sub(self, rhs: &SurdSum) -> SurdSum {
        self + &(-rhs)
    }
}

impl Sub for SurdSum {
    type Output = SurdSum;
    fn sub(self, rhs: SurdSum) -> SurdSum {
        self + (-rhs)
    }
}

impl Mul for &SurdSum {
    type Output = SurdSum;
    fn mul(self, rhs: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for (r, c) in &self.terms {
            for (s, d) in &rhs.terms {
                // r, s square-free: √r·√s = g·√((r/g)(s/g)) with g = gcd(r, s).
                let g = r.gcd(s);
                let radicand = (r / &g) * (s / &g);
                let coeff = c * d * Rational::from_integer(BigInt::from(g));
                out.add_term(radicand, coeff);
            }
        }
        out
    }
}

impl Mul for SurdSum {
    type Output = SurdSum;
    fn mul(self, rhs: SurdSum) -> SurdSum {
        &self * &rhs
    }
}

impl Zero for SurdSum {
    fn zero() -> Self {
        SurdSum::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SurdSum {
    fn one() -> Self {
        SurdSum::from_integer(1)
    }
}

impl std::iter::Sum for SurdSum {
    fn sum<I: Iterator<Item = SurdSum>>(iter: I) -> Self {
        iter.fold(SurdSum::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn surd(c: Rational, r: u64) -> SurdSum {
        surd_normalize(c, &BigInt::from(r)).unwrap()
    }

    #[test]
    fn normalize_extracts_squares() {
        assert_eq!(surd(q(3, 1), 8), SurdSum::single(q(6, 1), BigUint::from(2u32)));
        assert_eq!(surd(q(1, 1), 1), SurdSum::one());
        assert_eq!(surd(q(1, 2), 12), SurdSum::sqrt_u64(3));
        assert_eq!(surd(q(5, 7), 72), SurdSum::single(q(30, 7), BigUint::from(2u32)));
    }

    #[test]
    fn normalize_rejects_nonpositive() {
        assert_eq!(surd_normalize(q(1, 1), &BigInt::from(0)), Err(Error::InvalidSurd));
        assert_eq!(surd_normalize(q(1, 1), &BigInt::from(-4)), Err(Error::InvalidSurd));
    }

    #[test]
    fn normalize_is_idempotent() {
        let s = surd(q(3, 5), 360);
        let (r, c) = s.terms().next().unwrap();
        let again = surd_normalize(c.clone(), &BigInt::from(r.clone())).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn addition() {
        let a = surd(q(2, 1), 2) + surd(q(3, 1), 2);
        assert_eq!(a, surd(q(5, 1), 2));
        let b = SurdSum::sqrt_u64(2) + SurdSum::sqrt_u64(3);
        assert_eq!(b.len(), 2);
        let c = SurdSum::sqrt_u64(3) + surd(q(-1, 1), 3);
        assert!(c.is_zero());
    }

    #[test]
    fn multiplication() {
        assert_eq!(SurdSum::sqrt_u64(2) * SurdSum::sqrt_u64(3), SurdSum::sqrt_u64(6));
        assert_eq!(SurdSum::sqrt_u64(2) * SurdSum::sqrt_u64(2), SurdSum::from_integer(2));
        assert_eq!(surd(q(2, 1), 3) * surd(q(1, 2), 3), SurdSum::from_integer(3));
        assert_eq!(SurdSum::sqrt_u64(6) * SurdSum::sqrt_u64(10), surd(q(2, 1), 15));
    }

    #[test]
    fn float_conversion() {
        let a = SurdSum::sqrt_u64(2).to_float(53);
        assert!((a.to_f64() - std::f64::consts::SQRT_2).abs() <= a.error_f64() + 2.0 * f64::EPSILON);
        let z = SurdSum::zero().to_float(53);
        assert_eq!(z.to_f64(), 0.0);
        assert_eq!(z.error_f64(), 0.0);
        let h = surd(q(1, 2), 3).to_float(53);
        assert!((h.to_f64() - 0.8660254037844386).abs() <= h.error_f64() + f64::EPSILON);
        assert!(h.error <= Rational::new(BigInt::from(1), BigInt::from(1u64 << 51)));
    }

    #[test]
    fn float_bound_shrinks_with_precision() {
        let s = surd(q(7, 3), 5) + surd(q(-2, 9), 11);
        let lo = s.to_float(32);
        let hi = s.to_float(96);
        assert!(hi.error < lo.error);
        assert!(lo.overlaps(&hi));
    }

    #[test]
    fn factorial_memo() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(20).to_u64(), Some(2432902008176640000));
    }

    #[test]
    fn prime_powers_sqrt() {
        // √(4!/2!) = √12 = 2√3
        let mut p = PrimePowers::factorial(4);
        p.add_assign_scaled(&PrimePowers::factorial(2), -1);
        assert_eq!(p.sqrt(), surd(q(2, 1), 3));
    }

    #[test]
    fn display_spin() {
        assert_eq!(TwiceSpin(1).to_string(), "1/2");
        assert_eq!(TwiceSpin(4).to_string(), "2");
    }
}
