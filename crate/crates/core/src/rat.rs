//! Exact rational numbers.
//!
//! [`Rat`] is a thin newtype over [`BigRational`] that fixes the textual
//! conventions used throughout the crate: `Display` always renders
//! `numerator/denominator` (so cache files and reports have one shape), and
//! [`Rat::to_decimal`] produces correctly rounded fixed-point decimals without
//! ever passing through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    BadInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_integer<T: Into<BigInt>>(v: T) -> Self {
        Rat(BigRational::from_integer(v.into()))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn new<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Self {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Rat::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Rat) -> Rat {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Fixed-point decimal with `sig` significant digits, rounded half away
    /// from zero. Trailing zeros are kept so the digit count is visible.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let v = self.0.abs();
        let ten = BigInt::from(10u32);

        // e = floor(log10(v)), found by scaling into [1, 10).
        let mut e: i64 = 0;
        let mut scaled = v.clone();
        let one = BigRational::one();
        let ten_r = BigRational::from_integer(ten.clone());
        while scaled >= ten_r {
            scaled /= &ten_r;
            e += 1;
        }
        while scaled < one {
            scaled *= &ten_r;
            e -= 1;
        }

        // digits = round(v * 10^(sig-1-e))
        let shift = sig as i64 - 1 - e;
        let factor = BigRational::from_integer(num_traits::pow(ten.clone(), shift.unsigned_abs() as usize));
        let target = if shift >= 0 { &v * &factor } else { &v / &factor };
        let (q, r) = target.numer().div_rem(target.denom());
        let mut digits = q;
        if r * 2u32 >= *target.denom() {
            digits += 1u32;
        }
        let mut digit_str = digits.to_string();
        if digit_str.len() > sig {
            // rounding carried into a new leading digit
            digit_str.truncate(sig);
            e += 1;
        }

        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if e < 0 {
            out.push_str("0.");
            for _ in 0..(-e - 1) {
                out.push('0');
            }
            out.push_str(&digit_str);
        } else {
            let int_len = e as usize + 1;
            if int_len >= digit_str.len() {
                out.push_str(&digit_str);
                for _ in digit_str.len()..int_len {
                    out.push('0');
                }
            } else {
                out.push_str(&digit_str[..int_len]);
                out.push('.');
                out.push_str(&digit_str[int_len..]);
            }
        }
        out
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| ParseRatError::BadInteger(t.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(ParseRatError::ZeroDenominator);
                }
                Ok(Rat(BigRational::new(parse(n)?, d)))
            }
            None => Ok(Rat::from_integer(parse(s)?)),
        }
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::from_integer(v)
    }
}

impl From<u64> for Rat {
    fn from(v: u64) -> Self {
        Rat::from_integer(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Self {
        Rat(BigRational::from_integer(v))
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// `C(k, 2)` as an exact integer.
pub fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_always_a_fraction() {
        assert_eq!(Rat::from_integer(8).to_string(), "8/1");
        assert_eq!(Rat::new(6, 4).to_string(), "3/2");
        assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["8/1", "3/2", "-1/2", "1625/1176"] {
            assert_eq!(s.parse::<Rat>().unwrap().to_string(), s);
        }
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::from_integer(7));
        assert_eq!("1/0".parse::<Rat>(), Err(ParseRatError::ZeroDenominator));
        assert!("x/2".parse::<Rat>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rat::new(29, 21).to_decimal(6), "1.38095");
        assert_eq!(Rat::new(1, 25000).to_decimal(3), "0.0000400");
        assert_eq!(Rat::new(11, 6).to_decimal(5), "1.8333");
        assert_eq!(Rat::new(2, 3).to_decimal(4), "0.6667");
        assert_eq!(Rat::from_integer(1625).to_decimal(2), "1600");
        assert_eq!(Rat::new(9999, 1000).to_decimal(3), "10.0");
        assert_eq!(Rat::new(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(Rat::zero().to_decimal(5), "0");
    }

    #[test]
    fn binomials() {
        assert_eq!(choose2(50000), 1_249_975_000);
        assert_eq!(binomial(82, 3), BigUint::from(88560u32));
        assert_eq!(binomial(4, 5), BigUint::zero());
    }
}
