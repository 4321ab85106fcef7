//! Exact rational coordinates.
//!
//! Values that fit a pair of `i64`s are kept inline and combined with `i128`
//! intermediates; anything larger spills into a heap `BigRational`. The two
//! representations are canonical: a value is stored inline whenever it fits,
//! so structural equality and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone)]
enum Repr {
    /// `num / den` with `den > 0` and `gcd(|num|, den) == 1`.
    Small { num: i64, den: i64 },
    Big(Box<BigRational>),
}

/// An exact rational number. Always normalized.
#[derive(Clone)]
pub struct Coord(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Coord {
    pub fn zero() -> Self {
        Coord(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Coord(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_int(v: i64) -> Self {
        Coord(Repr::Small { num: v, den: 1 })
    }

    /// `num / den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        if num == 0 {
            return Self::zero();
        }
        let g = gcd_u128(num.unsigned_abs(), den as u128);
        if g > 1 {
            num /= g as i128;
            den /= g as i128;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Coord(Repr::Small { num, den }),
            _ => Coord(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            )))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced already.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Coord(Repr::Small { num, den }),
            _ => Coord(Repr::Big(Box::new(r))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Coord {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// Approximate bit size of numerator plus denominator; used to watch growth.
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small { num, den } => {
                (64 - num.unsigned_abs().leading_zeros() as u64) + (64 - den.leading_zeros() as u64)
            }
            Repr::Big(b) => b.numer().bits() + b.denom().bits(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn min(self, other: Coord) -> Coord {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Coord) -> Coord {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `(self + other) / 2`
    pub fn midpoint(&self, other: &Coord) -> Coord {
        &(self + other) / &Coord::from_int(2)
    }

    /// Parses `"-12"`, `"5/2"`, `"2.5"`, `"1e-3"` or `"1.25E2"` exactly.
    pub fn parse(s: &str) -> Result<Coord, Error> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Coord::from_big(BigRational::new(n, d)));
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i64;
        if exp.unsigned_abs() > 10_000 {
            return Err(bad());
        }
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Coord::from_big(value))
    }

    fn big_binop(&self, rhs: &Coord, f: impl FnOnce(BigRational, BigRational) -> BigRational) -> Coord {
        Coord::from_big(f(self.to_big(), rhs.to_big()))
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Self {
        Coord::from_int(v)
    }
}

impl From<i32> for Coord {
    fn from(v: i32) -> Self {
        Coord::from_int(v as i64)
    }
}

impl From<BigRational> for Coord {
    fn from(v: BigRational) -> Self {
        Coord::from_big(v)
    }
}

impl<'a> Add<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn add(self, rhs: &Coord) -> Coord {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if b == d {
                return Coord::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(ad), Some(cb), Some(bd)) = (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                if let Some(n) = ad.checked_add(cb) {
                    return Coord::from_i128(n, bd);
                }
            }
        }
        self.big_binop(rhs, |x, y| x + y)
    }
}

impl<'a> Sub<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn sub(self, rhs: &Coord) -> Coord {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            if b == d {
                return Coord::from_i128(*a as i128 - *c as i128, *b as i128);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(ad), Some(cb), Some(bd)) = (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                if let Some(n) = ad.checked_sub(cb) {
                    return Coord::from_i128(n, bd);
                }
            }
        }
        self.big_binop(rhs, |x, y| x - y)
    }
}

impl<'a> Mul<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn mul(self, rhs: &Coord) -> Coord {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            // i64 * i64 always fits in i128.
            return Coord::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        self.big_binop(rhs, |x, y| x * y)
    }
}

impl<'a> Div<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn div(self, rhs: &Coord) -> Coord {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &rhs.0) {
            return Coord::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128);
        }
        self.big_binop(rhs, |x, y| x / y)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Coord> for Coord {
            type Output = Coord;
            fn $m(self, rhs: Coord) -> Coord {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Coord> for Coord {
            type Output = Coord;
            fn $m(self, rhs: &Coord) -> Coord {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Coord> for &'a Coord {
            type Output = Coord;
            fn $m(self, rhs: Coord) -> Coord {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        match &self.0 {
            Repr::Small { num, den } if *num != i64::MIN => Coord(Repr::Small { num: -num, den: *den }),
            _ => Coord::from_big(-self.to_big()),
        }
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        -&self
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Coord {}

impl Hash for Coord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Coord::parse(s)
    }
}

impl Default for Coord {
    fn default() -> Self {
        Coord::zero()
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => Coord::parse(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Coord::from_int(i)),
        }
    }
}

/// Greatest common divisor helper re-exported for tests of normalization.
pub fn is_normalized(c: &Coord) -> bool {
    let (n, d) = (c.numer(), c.denom());
    d.is_positive() && n.gcd(&d).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(s: &str) -> Coord {
        Coord::parse(s).unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(c("2.5"), Coord::ratio(5, 2));
        assert_eq!(c("-0.125"), Coord::ratio(-1, 8));
        assert_eq!(c("10/4"), Coord::ratio(5, 2));
        assert_eq!(c("1e3"), Coord::from_int(1000));
        assert_eq!(c("1.5E-1"), Coord::ratio(3, 20));
        assert_eq!(c(".5"), Coord::ratio(1, 2));
        assert!(Coord::parse("1/0").is_err());
        assert!(Coord::parse("abc").is_err());
        assert!(Coord::parse("").is_err());
        assert!(Coord::parse("1.2.3").is_err());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(Coord::ratio(6, -4).to_string(), "-3/2");
        assert_eq!(Coord::from_int(8).to_string(), "8");
    }

    #[test]
    fn spills_to_big_and_back() {
        let big = Coord::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(sq.bits() > 64);
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(is_normalized(&back));
        assert_eq!(Coord::from_int(i64::MIN).abs().to_string(), "9223372036854775808");
    }

    fn arb_coord() -> impl Strategy<Value = Coord> {
        prop_oneof![
            (any::<i32>(), 1i64..1000).prop_map(|(n, d)| Coord::ratio(n as i64, d)),
            (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Coord::ratio(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn field_laws_match_bigrational(a in arb_coord(), b in arb_coord()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
            prop_assert!(is_normalized(&(&a * &b)));
        }

        #[test]
        fn display_parse_round_trip(a in arb_coord()) {
            prop_assert_eq!(Coord::parse(&a.to_string()).unwrap(), a);
        }
    }
}
