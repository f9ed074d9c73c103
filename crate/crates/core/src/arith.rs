//! Exact scalars (rationals and prime-field elements) and the binomial calculus
//! used throughout: generalized binomials with negative tops, p-adic digits,
//! Lucas reduction and Kummer carry counting.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A validated prime modulus. Moduli are desk-sized, so trial division is enough.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e`, failing if it does not fit a `u64`.
    pub fn pow(self, e: u32) -> Result<u64> {
        self.0
            .checked_pow(e)
            .ok_or_else(|| Error::InvalidParams(format!("{}^{} overflows", self.0, e)))
    }

    /// `floor(log_p(x))` for `x >= 1`.
    pub fn floor_log(self, x: u64) -> u32 {
        let mut t = 0;
        let mut acc = self.0;
        while acc <= x {
            t += 1;
            acc = match acc.checked_mul(self.0) {
                Some(v) => v,
                None => break,
            };
        }
        t
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The ground field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(Prime),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(Field::Prime)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p.get(),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p.get() as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Mod {
                value: mod_bigint(v, p.get()),
                modulus: p,
            },
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// `v mod p` in `[0, p)` for an arbitrary signed big integer.
pub fn mod_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below modulus")
}

/// An exact scalar. Rationals are kept reduced with positive denominator
/// (guaranteed by `BigRational`); prime-field values lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, modulus: Prime },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Ok(Scalar::Mod { value: (a + b) % p.get(), modulus: *p })
            }
            _ => Err(Error::FieldMismatch(self.field(), rhs.field())),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Ok(Scalar::Mod { value: (a * b) % p.get(), modulus: *p })
            }
            _ => Err(Error::FieldMismatch(self.field(), rhs.field())),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Mod { value, modulus } => {
                let p = modulus.get();
                Scalar::Mod { value: pow_mod(*value, p - 2, p), modulus: *modulus }
            }
        })
    }

    /// Integer representative of a prime-field value, or the rational itself
    /// when it is integral.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(q) if q.is_integer() => Some(q.to_integer()),
            Scalar::Rational(_) => None,
            Scalar::Mod { value, .. } => Some(BigInt::from(*value)),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// Operator impls panic on mismatched fields: mixing fields is a programming
// error inside this crate. Fallible callers use `checked_*`.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar fields must match")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Mod { value, modulus } => {
                let p = modulus.get();
                Scalar::Mod { value: (p - value) % p, modulus: *modulus }
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar fields must match")
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

/// Generalized binomial coefficient `binom(a, b)` for any integer `a`, using
/// `binom(a, b) = (-1)^b binom(-a+b-1, b)` when `a < 0`.
pub fn binomial(a: &BigInt, b: u64) -> BigInt {
    if b == 0 {
        return BigInt::one();
    }
    if a.is_negative() {
        let top = -a + BigInt::from(b) - 1;
        let v = binomial(&top, b);
        return if b % 2 == 0 { v } else { -v };
    }
    let bb = BigInt::from(b);
    if &bb > a {
        return BigInt::zero();
    }
    // symmetric reduction keeps the product short
    let k = {
        let other = a - &bb;
        if other < bb {
            other.to_u64().expect("bounded by b")
        } else {
            b
        }
    };
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= a - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// [`binomial`] for machine-sized tops.
pub fn binom(a: i64, b: u64) -> BigInt {
    binomial(&BigInt::from(a), b)
}

/// Base-p digits of a nonnegative integer, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicDigits {
    pub prime: Prime,
    pub digits: Vec<u64>,
}

impl PAdicDigits {
    pub fn value(&self) -> BigUint {
        let p = BigUint::from(self.prime.get());
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, d| acc * &p + BigUint::from(*d))
    }
}

pub fn p_adic_digits(a: impl Into<BigUint>, p: Prime) -> PAdicDigits {
    let mut a: BigUint = a.into();
    let mut digits = Vec::new();
    if let Some(mut small) = a.to_u64() {
        while small > 0 {
            digits.push(small % p.get());
            small /= p.get();
        }
        a = BigUint::zero();
    }
    let pb = BigUint::from(p.get());
    while !a.is_zero() {
        let (q, r) = a.div_rem(&pb);
        digits.push(r.to_u64().expect("digit below p"));
        a = q;
    }
    if digits.is_empty() {
        digits.push(0);
    }
    PAdicDigits { prime: p, digits }
}

/// `binom(a, b) mod p` for digits `a, b < p`.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    if b == 0 || b == a {
        return 1;
    }
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

/// `binom(a, b) mod p` computed digitwise (Lucas).
pub fn binomial_mod_p_lucas(a: impl Into<BigUint>, b: impl Into<BigUint>, p: Prime) -> Scalar {
    let da = p_adic_digits(a, p).digits;
    let db = p_adic_digits(b, p).digits;
    let pv = p.get();
    let len = da.len().max(db.len());
    let mut acc = 1u64;
    for i in 0..len {
        let x = da.get(i).copied().unwrap_or(0);
        let y = db.get(i).copied().unwrap_or(0);
        acc = acc * small_binom_mod(x, y, pv) % pv;
        if acc == 0 {
            break;
        }
    }
    Scalar::Mod { value: acc, modulus: p }
}

/// Fast `binom(a, b) mod p` for machine integers, including negative `a`
/// through the reflection rule. Used by the grid scans.
pub fn binom_mod_p_i64(a: i64, b: u64, p: u64) -> u64 {
    if b == 0 {
        return 1 % p;
    }
    if a < 0 {
        let top = (-(a as i128) + b as i128 - 1) as u128;
        let v = binom_mod_p_u128(top, b as u128, p);
        return if b % 2 == 0 { v } else { (p - v) % p };
    }
    binom_mod_p_u128(a as u128, b as u128, p)
}

fn binom_mod_p_u128(a: u128, b: u128, p: u64) -> u64 {
    if p == 2 {
        return u64::from(a & b == b);
    }
    match (u64::try_from(a), u64::try_from(b)) {
        (Ok(a), Ok(b)) => binom_mod_p_u64(a, b, p),
        _ => binom_mod_p_wide(a, b, p),
    }
}

fn binom_mod_p_u64(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while b > 0 {
        acc = acc * small_binom_mod(a % p, b % p, p) % p;
        if acc == 0 {
            return 0;
        }
        a /= p;
        b /= p;
    }
    acc
}

fn binom_mod_p_wide(mut a: u128, mut b: u128, p: u64) -> u64 {
    let pp = p as u128;
    let mut acc = 1u64;
    while b > 0 {
        let (x, y) = ((a % pp) as u64, (b % pp) as u64);
        acc = acc * small_binom_mod(x, y, p) % p;
        if acc == 0 {
            return 0;
        }
        a /= pp;
        b /= pp;
    }
    acc
}

/// Number of carries when adding `a - b` to `b` in base `p`.
pub fn kummer_carry_count(a: impl Into<BigUint>, b: impl Into<BigUint>, p: Prime) -> Result<u64> {
    let a: BigUint = a.into();
    let b: BigUint = b.into();
    if b > a {
        return Err(Error::InvalidParams(format!("kummer_carry_count needs a >= b, got a={a}, b={b}")));
    }
    let x = p_adic_digits(&a - &b, p).digits;
    let y = p_adic_digits(b, p).digits;
    let pv = p.get();
    let mut carry = 0u64;
    let mut count = 0u64;
    for i in 0..x.len().max(y.len()) {
        let s = x.get(i).copied().unwrap_or(0) + y.get(i).copied().unwrap_or(0) + carry;
        carry = u64::from(s >= pv);
        count += carry;
    }
    Ok(count)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(v: &BigInt, p: Prime) -> Option<u64> {
    if v.is_zero() {
        return None;
    }
    let pb = BigInt::from(p.get());
    let mut v = v.abs();
    let mut k = 0;
    loop {
        let (q, r) = v.div_rem(&pb);
        if !r.is_zero() {
            return Some(k);
        }
        v = q;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    /// Falling-factorial oracle, independent of the reflection rule.
    fn falling(a: i64, b: u64) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..b as i64 {
            num *= BigInt::from(a - i);
            den *= BigInt::from(i + 1);
        }
        num / den
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        for a in -7..7 {
            assert_eq!(binom(a, 0), BigInt::one());
        }
        assert_eq!(binom(-1, 2), BigInt::from(1));
        assert_eq!(binom(3, 5), BigInt::zero());
    }

    #[test]
    fn reflection_matches_falling_factorial() {
        for a in -40..40 {
            for b in 0..15 {
                assert_eq!(binom(a, b), falling(a, b), "binom({a},{b})");
            }
        }
    }

    #[test]
    fn pascal_identity() {
        for a in -50i64..=50 {
            for b in 1..=50u64 {
                assert_eq!(binom(a, b), binom(a - 1, b) + binom(a - 1, b - 1));
            }
        }
    }

    #[test]
    fn digits_examples() {
        assert_eq!(p_adic_digits(7u32, p(2)).digits, vec![1, 1, 1]);
        assert_eq!(p_adic_digits(0u32, p(3)).digits, vec![0]);
        assert_eq!(p_adic_digits(35u32, p(5)).digits, vec![0, 2, 1]);
        assert_eq!(p_adic_digits(35u32, p(5)).value(), BigUint::from(35u32));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(binomial_mod_p_lucas(7u32, 3u32, p(2)), Field::prime(2).unwrap().from_i64(1));
        assert_eq!(binomial_mod_p_lucas(6u32, 3u32, p(2)), Field::prime(2).unwrap().from_i64(0));
        for q in [2u64, 3, 5, 7, 11, 13] {
            assert!(binomial_mod_p_lucas(q, 1u32, p(q)).is_zero());
        }
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_carry_count(6u32, 3u32, p(2)).unwrap(), 2);
        assert_eq!(kummer_carry_count(7u32, 3u32, p(2)).unwrap(), 0);
        assert_eq!(kummer_carry_count(9u32, 0u32, p(3)).unwrap(), 0);
        assert!(kummer_carry_count(2u32, 3u32, p(3)).is_err());
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Field::prime(4).is_err());
        assert_eq!(Prime::new(7).unwrap().get(), 7);
        assert_eq!(p(2).floor_log(3), 1);
        assert_eq!(p(3).floor_log(3), 1);
        assert_eq!(p(3).floor_log(2), 0);
        assert_eq!(p(2).floor_log(1), 0);
    }

    #[test]
    fn fast_signed_binomial_agrees_with_exact() {
        for q in [2u64, 3, 5] {
            for a in -30i64..60 {
                for b in 0..20u64 {
                    assert_eq!(binom_mod_p_i64(a, b, q), mod_bigint(&binom(a, b), q), "{a} {b} {q}");
                }
            }
        }
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        let a = Field::prime(2).unwrap().one();
        let b = Field::prime(3).unwrap().one();
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_mul(&Field::Rational.one()).is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }
}
