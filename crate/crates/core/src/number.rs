//! Rational helpers shared by the polynomial and diagram code.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parse `123`, `-p/q`, or `m*2^e` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((m, e)) = s.split_once("*2^") {
        let m: BigInt = m.trim().parse().map_err(|_| bad())?;
        let e: i64 = e
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .parse()
            .map_err(|_| bad())?;
        return Ok(mul_pow2(&Rational::from_integer(m), e));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// `r * 2^k` exactly.
pub fn mul_pow2(r: &Rational, k: i64) -> Rational {
    if k >= 0 {
        r * Rational::from_integer(BigInt::one() << k as usize)
    } else {
        r / Rational::from_integer(BigInt::one() << (-k) as usize)
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Approximate `log2 |x|` for a nonzero big integer, accurate to ~1e-15.
pub fn log2_bigint(x: &BigInt) -> f64 {
    let bits = x.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (x.abs() >> drop as usize).to_f64().unwrap_or(f64::NAN);
    top.log2() + drop as f64
}

/// Approximate `log2 |r|` for a nonzero rational.
pub fn log2_rational(r: &Rational) -> f64 {
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let l = log2_rational(r);
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    if l.abs() < 1000.0 {
        // direct division loses nothing when both parts fit
        if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
            if n.is_finite() && d.is_finite() && d != 0.0 {
                return n / d;
            }
        }
    }
    sign * l.exp2()
}

/// Render a rational as `p/q` (or `p`) followed by a 6-significant-digit
/// decimal approximation.
pub fn pretty(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{} (~{:.6e})", r.numer(), r.denom(), to_f64(r))
    }
}
