//! Exact scalar fields: arbitrary-precision rationals and prime fields.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn from_i64(n: i64) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Parses `"n"` or `"p/q"`.
    fn parse(s: &str) -> Result<Self>;
    /// Field name as written in fixture files, e.g. `"Q"` or `"GF(7)"`.
    fn name() -> String;
    fn characteristic() -> u64;

    fn div(&self, rhs: &Self) -> Result<Self> {
        match rhs.inv() {
            Some(r) => Ok(self.clone() * r),
            None => Err(Error::DivisionByZero),
        }
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    // den > 0, gcd(num, den) = 1
    Small(i64, i64),
    // never representable as Small
    Big(BigRational),
}

/// Rational number with an `i64` fast path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_i128(num as i128, den as i128))
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    Rational::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Rational::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, d)),
                None => Rational::from_big(-BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
            },
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = std::mem::replace(self, Rational(Repr::Small(0, 1))) + rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = std::mem::replace(self, Rational(Repr::Small(0, 1))) - rhs;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        *self = std::mem::replace(self, Rational(Repr::Small(0, 1))) * rhs;
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }
    fn from_i64(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }
    fn inv(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Rational::from_i128(*d as i128, *n as i128)),
            Repr::Big(r) => Some(Rational::from_big(r.recip())),
        }
    }
    fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid rational scalar {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
    fn name() -> String {
        "Q".to_string()
    }
    fn characteristic() -> u64 {
        0
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

/// Residues modulo the prime `P`. `P` must be an odd prime below 2^32.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(Field::pow(self, P - 2))
        }
    }
    fn parse(s: &str) -> Result<Self> {
        let r = Rational::parse(s)?;
        let reduce = |b: BigInt| -> Self {
            let m = b.mod_floor(&BigInt::from(P));
            Fp(m.to_u64().unwrap_or(0))
        };
        let n = reduce(r.numer());
        let d = reduce(r.denom());
        n.div(&d)
    }
    fn name() -> String {
        format!("GF({P})")
    }
    fn characteristic() -> u64 {
        P
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Primes accepted for `GF(p)` in fixture files.
pub const SUPPORTED_PRIMES: [u64; 6] = [3, 5, 7, 11, 101, 65521];

pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type F11 = Fp<11>;
pub type F101 = Fp<101>;
pub type F65521 = Fp<65521>;

/// Field selector parsed from a fixture file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldKind::Rational);
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::UnknownField(s.to_string()))?;
            if SUPPORTED_PRIMES.contains(&p) {
                return Ok(FieldKind::Prime(p));
            }
        }
        Err(Error::UnknownField(s.to_string()))
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Runs `$body` with the type alias `$F` bound to the field selected by `$kind`.
#[macro_export]
macro_rules! with_field {
    ($kind:expr, $F:ident => $body:expr) => {
        match $kind {
            $crate::scalar::FieldKind::Rational => {
                type $F = $crate::scalar::Rational;
                $body
            }
            $crate::scalar::FieldKind::Prime(3) => {
                type $F = $crate::scalar::F3;
                $body
            }
            $crate::scalar::FieldKind::Prime(5) => {
                type $F = $crate::scalar::F5;
                $body
            }
            $crate::scalar::FieldKind::Prime(7) => {
                type $F = $crate::scalar::F7;
                $body
            }
            $crate::scalar::FieldKind::Prime(11) => {
                type $F = $crate::scalar::F11;
                $body
            }
            $crate::scalar::FieldKind::Prime(101) => {
                type $F = $crate::scalar::F101;
                $body
            }
            $crate::scalar::FieldKind::Prime(65521) => {
                type $F = $crate::scalar::F65521;
                $body
            }
            $crate::scalar::FieldKind::Prime(p) => {
                Err($crate::error::Error::UnknownField(format!("GF({p})")).into())
            }
        }
    };
}

/// `n!` as a field element.
pub fn factorial<F: Field>(n: u64) -> F {
    (1..=n).fold(F::one(), |acc, k| acc * F::from_i64(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    #[test]
    fn rational_normalizes() {
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("-3/-6").to_string(), "1/2");
        assert_eq!(q("6/-3").to_string(), "-2");
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("x").is_err());
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let big = Rational::from_i64(i64::MAX);
        let sq = big.clone() * big.clone();
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        let back = sq.div(&big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Rational::from_i64(i64::MIN);
        assert_eq!((-m).to_string(), "9223372036854775808");
    }

    #[test]
    fn rational_inverse() {
        assert_eq!(q("-2/3").inv().unwrap(), q("-3/2"));
        assert!(Rational::zero().inv().is_none());
        assert!(matches!(
            q("1/3").div(&Rational::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn prime_field_arithmetic() {
        let a = F7::parse("3").unwrap();
        assert_eq!(a * a.inv().unwrap(), F7::one());
        assert_eq!(F7::parse("1/2").unwrap(), F7::new(4));
        assert_eq!(F7::parse("-1").unwrap(), F7::new(6));
        assert!(F7::parse("1/7").is_err());
        assert_eq!(F7::name(), "GF(7)");
    }

    #[test]
    fn field_kind_parsing() {
        assert_eq!(FieldKind::parse("Q").unwrap(), FieldKind::Rational);
        assert_eq!(FieldKind::parse("GF(7)").unwrap(), FieldKind::Prime(7));
        assert!(FieldKind::parse("GF(9)").is_err());
        assert!(FieldKind::parse("R").is_err());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial::<Rational>(5), Rational::from_i64(120));
        assert_eq!(factorial::<Rational>(0), Rational::one());
    }
}
