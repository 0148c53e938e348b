//! Rationals, p-adic valuations and the ordered field Q(sqrt 2).
//!
//! Radius exponents live in Q(sqrt 2) so that both type II (rational
//! exponent) and type III (exponent with a nonzero sqrt 2 part) points can be
//! written down exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n/d` as a [`Rat`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Floor and ceiling of a rational as i64 (exponents stay small in practice).
pub fn floor_i64(x: &Rat) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("exponent out of i64 range")
}

pub fn ceil_i64(x: &Rat) -> i64 {
    x.ceil()
        .to_integer()
        .to_i64()
        .expect("exponent out of i64 range")
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The residue characteristic. Logarithms everywhere are base `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeConfig {
    p: u64,
    big: BigInt,
}

impl PrimeConfig {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeConfig {
            p,
            big: BigInt::from(p),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.big
    }

    pub fn p_rat(&self) -> Rat {
        Rat::from_integer(self.big.clone())
    }

    /// p^e for any integer e.
    pub fn pow(&self, e: i64) -> Rat {
        let m = num_traits::pow(self.big.clone(), e.unsigned_abs() as usize);
        if e >= 0 {
            Rat::from_integer(m)
        } else {
            Rat::new(BigInt::one(), m)
        }
    }

    /// Multiplicity of p in a nonzero integer.
    pub fn ord_int(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let mut n = n.clone();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&self.big);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    }

    /// Splits a nonzero rational as p^v * u with u a p-adic unit.
    pub fn split(&self, x: &Rat) -> (i64, Rat) {
        let v = self.ord(x).expect("split of zero");
        (v, x * self.pow(-v))
    }

    /// ord_p as an Option, None for zero.
    pub fn ord(&self, x: &Rat) -> Option<i64> {
        if x.is_zero() {
            None
        } else {
            Some(self.ord_int(x.numer()) - self.ord_int(x.denom()))
        }
    }
}

/// ord_p(x). For rational x the finite value is always an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

pub fn ord_p(x: &Rat, cfg: &PrimeConfig) -> Valuation {
    match cfg.ord(x) {
        Some(v) => Valuation::Finite(v),
        None => Valuation::Infinity,
    }
}

/// a + b*sqrt(2) with a, b rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ValExp {
    pub rat: Rat,
    pub sqrt2: Rat,
}

impl ValExp {
    pub fn new(rat: Rat, sqrt2: Rat) -> Self {
        ValExp { rat, sqrt2 }
    }

    pub fn from_rat(r: Rat) -> Self {
        ValExp {
            rat: r,
            sqrt2: Rat::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rat(int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.rat)
    }

    /// Exact sign of a + b*sqrt 2: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.sqrt2);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with 2 b^2 (never equal, sqrt 2 is irrational)
        let a2 = &self.rat * &self.rat;
        let b2 = &self.sqrt2 * &self.sqrt2 * int(2);
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> ValExp {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn min(self, other: ValExp) -> ValExp {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: ValExp) -> ValExp {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn scale(&self, r: &Rat) -> ValExp {
        ValExp::new(&self.rat * r, &self.sqrt2 * r)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> ValExp {
        let n = &self.rat * &self.rat - &self.sqrt2 * &self.sqrt2 * int(2);
        assert!(!n.is_zero(), "division by zero in Q(sqrt 2)");
        ValExp::new(&self.rat / &n, -&self.sqrt2 / &n)
    }

    pub fn floor(&self) -> i64 {
        // floor via exact comparison, starting from the float guess
        let mut k = self.to_f64().floor() as i64;
        while ValExp::int(k) > *self {
            k -= 1;
        }
        while ValExp::int(k + 1) <= *self {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> i64 {
        -(-self).floor()
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64().unwrap_or(f64::NAN)
            + self.sqrt2.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Approximate decimal rendering, display only.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits, self.to_f64())
    }
}

fn sign_of(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact total order on Q(sqrt 2).
pub fn valexp_cmp(a: &ValExp, b: &ValExp) -> Ordering {
    match (a - b).signum() {
        -1 => Ordering::Less,
        0 => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

impl PartialOrd for ValExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValExp {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.sqrt2 == other.sqrt2 {
            return self.rat.cmp(&other.rat);
        }
        valexp_cmp(self, other)
    }
}

impl From<Rat> for ValExp {
    fn from(r: Rat) -> Self {
        ValExp::from_rat(r)
    }
}

impl From<i64> for ValExp {
    fn from(n: i64) -> Self {
        ValExp::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b ValExp> for &'a ValExp {
            type Output = ValExp;
            fn $m(self, o: &'b ValExp) -> ValExp {
                let f: fn(&ValExp, &ValExp) -> ValExp = $body;
                f(self, o)
            }
        }
        impl $tr<ValExp> for ValExp {
            type Output = ValExp;
            fn $m(self, o: ValExp) -> ValExp {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a ValExp> for ValExp {
            type Output = ValExp;
            fn $m(self, o: &'a ValExp) -> ValExp {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<ValExp> for &'a ValExp {
            type Output = ValExp;
            fn $m(self, o: ValExp) -> ValExp {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| ValExp::new(
    &a.rat + &b.rat,
    &a.sqrt2 + &b.sqrt2
));
binop!(Sub, sub, |a, b| ValExp::new(
    &a.rat - &b.rat,
    &a.sqrt2 - &b.sqrt2
));
binop!(Mul, mul, |a, b| ValExp::new(
    &a.rat * &b.rat + &a.sqrt2 * &b.sqrt2 * int(2),
    &a.rat * &b.sqrt2 + &a.sqrt2 * &b.rat
));
binop!(Div, div, |a, b| a * &b.recip());

impl Neg for ValExp {
    type Output = ValExp;
    fn neg(self) -> ValExp {
        ValExp::new(-self.rat, -self.sqrt2)
    }
}

impl Neg for &ValExp {
    type Output = ValExp;
    fn neg(self) -> ValExp {
        ValExp::new(-&self.rat, -&self.sqrt2)
    }
}

impl AddAssign<&ValExp> for ValExp {
    fn add_assign(&mut self, o: &ValExp) {
        self.rat += &o.rat;
        self.sqrt2 += &o.sqrt2;
    }
}

impl SubAssign<&ValExp> for ValExp {
    fn sub_assign(&mut self, o: &ValExp) {
        self.rat -= &o.rat;
        self.sqrt2 -= &o.sqrt2;
    }
}

impl std::iter::Sum for ValExp {
    fn sum<I: Iterator<Item = ValExp>>(iter: I) -> ValExp {
        let mut s = ValExp::zero();
        for x in iter {
            s += &x;
        }
        s
    }
}

impl fmt::Display for ValExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt2.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}*sqrt2", self.sqrt2)
        } else {
            write!(f, "{} + {}*sqrt2", self.rat, self.sqrt2)
        }
    }
}

/// An exponent-space value that may be +-infinity (-log of 0 or of infinity).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelValue {
    MinusInf,
    Finite(ValExp),
    PlusInf,
}

impl KernelValue {
    pub fn finite(&self) -> Option<&ValExp> {
        match self {
            KernelValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn expect_finite(&self, what: &str) -> ValExp {
        match self {
            KernelValue::Finite(v) => v.clone(),
            other => panic!("{what}: expected a finite value, got {other:?}"),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, KernelValue::Finite(_))
    }

    pub fn neg(&self) -> KernelValue {
        match self {
            KernelValue::MinusInf => KernelValue::PlusInf,
            KernelValue::PlusInf => KernelValue::MinusInf,
            KernelValue::Finite(v) => KernelValue::Finite(-v),
        }
    }

    /// Sum, with inf + -inf treated as undefined (None).
    pub fn add(&self, o: &KernelValue) -> Option<KernelValue> {
        use KernelValue::*;
        match (self, o) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PlusInf, MinusInf) | (MinusInf, PlusInf) => None,
            (PlusInf, _) | (_, PlusInf) => Some(PlusInf),
            (MinusInf, _) | (_, MinusInf) => Some(MinusInf),
        }
    }

    pub fn sub(&self, o: &KernelValue) -> Option<KernelValue> {
        self.add(&o.neg())
    }
}

impl From<ValExp> for KernelValue {
    fn from(v: ValExp) -> Self {
        KernelValue::Finite(v)
    }
}

impl fmt::Display for KernelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelValue::MinusInf => write!(f, "-inf"),
            KernelValue::PlusInf => write!(f, "+inf"),
            KernelValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// serde adapter: a [`Rat`] as the string "num/den".
pub mod rat_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter for `Vec<Rat>`.
pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|r| r.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.into_iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_rat(&s).map_err(serde::de::Error::custom),
                serde_json::Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
                other => Err(serde::de::Error::custom(format!("bad coefficient {other}"))),
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ValExpRepr {
    #[serde(with = "rat_str")]
    rat: Rat,
    #[serde(with = "rat_str", default = "Rat::zero")]
    sqrt2: Rat,
}

impl Serialize for ValExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ValExpRepr {
            rat: self.rat.clone(),
            sqrt2: self.sqrt2.clone(),
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ValExpInput {
    Full(ValExpRepr),
    Str(String),
    Int(i64),
}

/// Accepts the full object form, a rational string "a/b" or an integer.
impl<'de> Deserialize<'de> for ValExp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ValExpInput::deserialize(d)? {
            ValExpInput::Full(r) => Ok(ValExp::new(r.rat, r.sqrt2)),
            ValExpInput::Str(s) => parse_rat(&s)
                .map(ValExp::from_rat)
                .map_err(serde::de::Error::custom),
            ValExpInput::Int(n) => Ok(ValExp::int(n)),
        }
    }
}

impl Serialize for KernelValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KernelValue::MinusInf => s.serialize_str("-inf"),
            KernelValue::PlusInf => s.serialize_str("+inf"),
            KernelValue::Finite(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for KernelValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "-inf" => Ok(KernelValue::MinusInf),
            serde_json::Value::String(s) if s == "+inf" || s == "inf" => Ok(KernelValue::PlusInf),
            other => serde_json::from_value::<ValExp>(other)
                .map(KernelValue::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(p: u64) -> PrimeConfig {
        PrimeConfig::new(p).unwrap()
    }

    #[test]
    fn ord_examples() {
        assert_eq!(ord_p(&int(18), &cfg(3)), Valuation::Finite(2));
        assert_eq!(ord_p(&int(0), &cfg(7)), Valuation::Infinity);
        assert_eq!(ord_p(&rat(7, 50), &cfg(5)), Valuation::Finite(-2));
    }

    #[test]
    fn rejects_composites() {
        assert!(PrimeConfig::new(1).is_err());
        assert!(PrimeConfig::new(9).is_err());
        assert!(PrimeConfig::new(13).is_ok());
    }

    #[test]
    fn cmp_examples() {
        let sqrt2 = ValExp::new(int(0), int(1));
        assert_eq!(valexp_cmp(&ValExp::int(1), &sqrt2), Ordering::Less);
        let two_sqrt2 = ValExp::new(int(0), int(2));
        assert_eq!(valexp_cmp(&ValExp::int(3), &two_sqrt2), Ordering::Greater);
        let x = ValExp::new(rat(3, 7), rat(-5, 2));
        assert_eq!(valexp_cmp(&x, &x), Ordering::Equal);
    }

    fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
        let n: i64 = rng.gen_range(-500..=500);
        let d: i64 = rng.gen_range(1..=300);
        rat(n, d)
    }

    #[test]
    fn ord_is_multiplicative_and_ultrametric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &p in &[2u64, 3, 5, 7] {
            let c = cfg(p);
            for _ in 0..1000 {
                let x = rand_rat(&mut rng);
                let y = rand_rat(&mut rng);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let (ox, oy) = (c.ord(&x).unwrap(), c.ord(&y).unwrap());
                assert_eq!(c.ord(&(&x * &y)), Some(ox + oy));
                match c.ord(&(&x + &y)) {
                    None => assert_eq!(ox, oy),
                    Some(s) => {
                        assert!(s >= ox.min(oy));
                        if ox != oy {
                            assert_eq!(s, ox.min(oy));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_agrees_with_floats() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        for _ in 0..5000 {
            let a = ValExp::new(rand_rat(&mut rng), rand_rat(&mut rng));
            let b = ValExp::new(rand_rat(&mut rng), rand_rat(&mut rng));
            let fa = a.to_f64();
            let fb = b.to_f64();
            if (fa - fb).abs() > 2f64.powi(-20) {
                checked += 1;
                assert_eq!(a.cmp(&b), fa.partial_cmp(&fb).unwrap(), "{a} vs {b}");
            }
        }
        assert!(checked > 4000);
    }

    #[test]
    fn field_division_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let a = ValExp::new(rand_rat(&mut rng), rand_rat(&mut rng));
            let b = ValExp::new(rand_rat(&mut rng), rand_rat(&mut rng));
            if b.is_zero() {
                continue;
            }
            assert_eq!(&(&a * &b) / &b, a);
        }
    }

    #[test]
    fn floor_ceil() {
        let x = ValExp::new(int(0), int(1));
        assert_eq!(x.floor(), 1);
        assert_eq!(x.ceil(), 2);
        assert_eq!((-x).floor(), -2);
        assert_eq!(ValExp::int(3).ceil(), 3);
    }

    #[test]
    fn json_shapes() {
        let v = ValExp::new(rat(1, 2), rat(-3, 4));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"rat":"1/2","sqrt2":"-3/4"}"#);
        assert_eq!(serde_json::from_str::<ValExp>(&s).unwrap(), v);
        let k: KernelValue = serde_json::from_str("\"+inf\"").unwrap();
        assert_eq!(k, KernelValue::PlusInf);
    }
}
