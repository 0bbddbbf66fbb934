//! Exact binary rationals `m * 2^e`.
//!
//! Interval endpoints, midpoints and Newton iterates all live here, so
//! subdivision never rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::number::Rational;

/// A dyadic rational `mantissa * 2^exponent` in canonical form: the mantissa
/// is odd, or zero with exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    pub fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).half()
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
        }
    }

    /// Exact conversion from a rational whose denominator is a power of two.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize).is_one() {
            Some(Self::new(r.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    /// Largest multiple of `2^exp` that is `<= r`.
    pub fn floor_rational(r: &Rational, exp: i64) -> Self {
        let scaled = scale_pow2(r, -exp);
        Self::new(scaled.floor().to_integer(), exp)
    }

    /// Smallest multiple of `2^exp` that is `>= r`.
    pub fn ceil_rational(r: &Rational, exp: i64) -> Self {
        let scaled = scale_pow2(r, -exp);
        Self::new(scaled.ceil().to_integer(), exp)
    }

    /// Round toward negative infinity to a multiple of `2^exp`.
    pub fn floor_to(&self, exp: i64) -> Self {
        if self.exponent >= exp {
            return self.clone();
        }
        let shift = (exp - self.exponent) as usize;
        Self::new(self.mantissa.div_floor(&(BigInt::one() << shift)), exp)
    }

    /// Round toward positive infinity to a multiple of `2^exp`.
    pub fn ceil_to(&self, exp: i64) -> Self {
        if self.exponent >= exp {
            return self.clone();
        }
        let shift = (exp - self.exponent) as usize;
        let d = BigInt::one() << shift;
        let (q, r) = self.mantissa.div_mod_floor(&d);
        let q = if r.is_zero() { q } else { q + 1 };
        Self::new(q, exp)
    }

    /// Round to nearest multiple of `2^exp` (ties away from zero are fine here).
    pub fn round_to(&self, exp: i64) -> Self {
        if self.exponent >= exp {
            return self.clone();
        }
        (self + &Dyadic::pow2(exp - 1)).floor_to(exp)
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mantissa.bits() as i64 - 1 + self.exponent)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        // keep 64 significant bits and fold the rest into the exponent
        let drop = (bits - 64).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(f64::NAN);
        let mut e = (self.exponent + drop).clamp(-2200, 2200);
        let mut v = top;
        // apply the exponent in steps so subnormal results survive
        while e != 0 {
            let step = e.clamp(-1000, 1000);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        v
    }

    /// Exact conversion from a finite `f64`.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Some(Self::new(BigInt::from(m) * sign, e))
    }

    /// Floor of `self / 3` at `bits` bits below the leading bit of the result.
    pub fn div3_floor(&self, bits: u32) -> Self {
        let Some(lg) = self.floor_log2() else {
            return Self::zero();
        };
        let exp = lg - 2 - bits as i64;
        Self::floor_rational(&(self.to_rational() / Rational::from_integer(3.into())), exp)
    }
}

fn scale_pow2(r: &Rational, k: i64) -> Rational {
    if k >= 0 {
        r * Rational::from_integer(BigInt::one() << k as usize)
    } else {
        r / Rational::from_integer(BigInt::one() << (-k) as usize)
    }
}

/// Bring both mantissas to the smaller exponent.
fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exponent.min(b.exponent);
    let ma = &a.mantissa << (a.exponent - e) as usize;
    let mb = &b.mantissa << (b.exponent - e) as usize;
    (ma, mb, e)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes via leading bit first
        let la = self.floor_log2().unwrap();
        let lb = other.floor_log2().unwrap();
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (ma, mb, _) = align(self, other);
        ma.cmp(&mb)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (ma, mb, e) = align(self, rhs);
        Dyadic::new(ma + mb, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_i64(v)
    }
}

/// Serialized as a plain integer when the exponent is nonnegative, otherwise
/// as `m*2^e`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", &self.mantissa << self.exponent as usize)
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `123`, `m*2^e`, and `p/q` with `q` a power of two.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a dyadic number: {s:?}"));
        if let Some((m, e)) = s.split_once("*2^") {
            let m: BigInt = m.trim().parse().map_err(|_| bad())?;
            let e: i64 = e.trim().trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad())?;
            return Ok(Dyadic::new(m, e));
        }
        if s.contains('/') {
            let r = crate::number::parse_rational(s)?;
            return Dyadic::from_rational(&r).ok_or_else(bad);
        }
        let m: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Dyadic::from_bigint(m))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        let z = Dyadic::new(BigInt::zero(), 17);
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn arithmetic_and_midpoint() {
        let a = d("1/4");
        let b = d("3");
        assert_eq!(&a + &b, d("13/4"));
        assert_eq!(&a - &b, d("-11/4"));
        assert_eq!(&a * &b, d("3/4"));
        let m = Dyadic::midpoint(&a, &b);
        assert_eq!(m, d("13/8"));
        assert!(a < m && m < b);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(d("5*2^-3").to_string(), "5*2^-3");
        assert_eq!(d("3*2^4").to_string(), "48");
        assert_eq!(d("-7").to_string(), "-7");
        assert!("1/3".parse::<Dyadic>().is_err());
    }

    #[test]
    fn rounding() {
        let x = d("13/8");
        assert_eq!(x.floor_to(-1), d("3/2"));
        assert_eq!(x.ceil_to(-1), d("2"));
        assert_eq!((-&x).floor_to(0), d("-2"));
        let r = Rational::new(1.into(), 3.into());
        let lo = Dyadic::floor_rational(&r, -10);
        let hi = Dyadic::ceil_rational(&r, -10);
        assert!(lo.to_rational() < r && r < hi.to_rational());
        assert_eq!(&hi - &lo, Dyadic::pow2(-10));
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.1, -3.5, 1e-300, 12345.678] {
            assert_eq!(Dyadic::from_f64(v).unwrap().to_f64(), v);
        }
    }

    #[test]
    fn ordering_mixed_scales() {
        let mut v = vec![d("1*2^-100"), d("-1"), d("0"), d("1*2^100"), d("-1*2^-3")];
        v.sort();
        assert_eq!(v[0], d("-1"));
        assert_eq!(v[1], d("-1/8"));
        assert_eq!(v[4], d("1*2^100"));
    }
}
