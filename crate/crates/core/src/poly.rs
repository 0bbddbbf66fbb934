//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::number::{parse_rational, Rational};

/// Polynomial with exact rational coefficients, constant term first.
///
/// Trailing zeros are never stored, so the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(c: Vec<BigInt>) -> Self {
        Self::new(c.into_iter().map(Rational::from_integer).collect())
    }

    /// Parse a comma-separated coefficient list, constant term first.
    pub fn parse_list(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - r`.
    pub fn linear_factor(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Rational {
        self.eval(&x.to_rational())
    }

    /// The `j`-th derivative `f^(j)`.
    pub fn derivative(&self, j: usize) -> Self {
        if j == 0 {
            return self.clone();
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(j)
            .map(|(i, a)| a * Rational::from_integer(falling(i, j)))
            .collect();
        Self::new(c)
    }

    /// `f^(j) / j!`, whose value at `z` is the `j`-th Taylor coefficient of `f` at `z`.
    pub fn normalized_derivative(&self, j: usize) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(j)
            .map(|(i, a)| a * Rational::from_integer(binomial(i, j)))
            .collect();
        Self::new(c)
    }

    /// `f(x + z)`; coefficient `j` of the result is `f^(j)(z) / j!`.
    pub fn taylor_shift(&self, z: &Dyadic) -> Self {
        if self.coeffs.len() <= 1 || z.is_zero() {
            return self.clone();
        }
        let (p, scale) = self.integer_form();
        let n = p.degree().unwrap();
        let e = z.exponent();
        if e >= 0 {
            let q = p.shift(&(z.mantissa() << e as usize));
            return Self::new(q.c.into_iter().map(|x| Rational::from_integer(x) * &scale).collect());
        }
        // f_j(z) = Q_j * 2^(-s (n - j)) * scale, with Q the shift of the scaled-down polynomial
        let s = (-e) as u64;
        let q = p.scale_down_pow2(s).shift(z.mantissa());
        let coeffs = q
            .c
            .into_iter()
            .enumerate()
            .map(|(j, x)| {
                Rational::new(x * scale.numer(), scale.denom() << (s as usize * (n - j)))
            })
            .collect();
        Self::new(coeffs)
    }

    /// Taylor shift by an arbitrary rational (slow path, used by oracles).
    pub fn taylor_shift_rational(&self, z: &Rational) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * z;
                a[j] += t;
            }
        }
        Self::new(a)
    }

    /// `(P, s)` with `P` a primitive integer polynomial and `f = s * P`
    /// for a positive rational `s`, so `P` has the sign pattern of `f`.
    pub(crate) fn integer_form(&self) -> (IntPoly, Rational) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let p = IntPoly::new(ints);
        let g = p.content();
        if g.is_zero() {
            return (p, Rational::one());
        }
        (p.primitive(), Rational::new(g, lcm))
    }

    pub(crate) fn to_int_poly(&self) -> IntPoly {
        self.integer_form().0
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut q = vec![Rational::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let t = &r[k + dd] / &lc;
            if !t.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    r[i + k] -= &t * c;
                }
            }
            q[k] = t;
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let g = self.to_int_poly().gcd(&other.to_int_poly());
        Self::from_bigints(g.c).monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// True when `gcd(f, f')` is a constant.
    pub fn is_square_free(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let p = self.to_int_poly();
                let dp = p.derivative();
                p.coprime_modular(&dp) || p.gcd(&dp).degree() == Some(0)
            }
        }
    }

    /// `f / gcd(f, f')`, scaled to be primitive with integer coefficients and
    /// the same leading sign as `f`.
    pub fn square_free_part(&self) -> Self {
        let Some(n) = self.degree() else {
            return self.clone();
        };
        if n == 0 {
            return self.clone();
        }
        let p = self.to_int_poly();
        let g = p.gcd(&p.derivative());
        if g.degree() == Some(0) {
            return Self::from_bigints(p.c);
        }
        let mut q = p.div_exact_primitive(&g);
        if q.leading().is_negative() != p.leading().is_negative() {
            q = q.negate();
        }
        Self::from_bigints(q.c)
    }

    /// Root of a degree-one polynomial.
    pub fn linear_root(&self) -> Option<Rational> {
        (self.degree() == Some(1)).then(|| -&self.coeffs[0] / &self.coeffs[1])
    }

    /// `2^k >= 1 + max |a_i / a_n|`, a Cauchy bound on the modulus of every root.
    pub fn cauchy_bound(&self) -> Dyadic {
        let Some(lead) = self.leading() else {
            return Dyadic::one();
        };
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let b = m + Rational::one();
        Dyadic::ceil_rational(&b, 0).next_pow2()
    }

    /// Fujiwara's bound `2 max |a_{n-i}/a_n|^{1/i}`, rounded up to a power of two.
    pub fn fujiwara_bound(&self) -> Dyadic {
        let Some(n) = self.degree() else {
            return Dyadic::one();
        };
        let lead = self.leading().unwrap();
        let mut best = f64::NEG_INFINITY;
        for i in 1..=n {
            let c = &self.coeffs[n - i];
            if c.is_zero() {
                continue;
            }
            let mut l = crate::number::log2_rational(&(c / lead)) / i as f64;
            if i == n {
                l -= 1.0; // the constant term enters as |a_0 / (2 a_n)|
            }
            best = best.max(l);
        }
        if best == f64::NEG_INFINITY {
            return Dyadic::one();
        }
        // +1 for the factor 2, +1 for rounding slack in the log estimate
        Dyadic::pow2(best.ceil() as i64 + 2)
    }
}

impl Dyadic {
    /// Smallest power of two `>= |self|` (at least 1).
    pub fn next_pow2(&self) -> Dyadic {
        let a = self.abs();
        let Some(l) = a.floor_log2() else {
            return Dyadic::one();
        };
        let p = Dyadic::pow2(l);
        if p == a {
            p.max(Dyadic::one())
        } else {
            Dyadic::pow2(l + 1).max(Dyadic::one())
        }
    }
}

/// `i (i-1) ... (i-j+1)`.
pub(crate) fn falling(i: usize, j: usize) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, t| acc * BigInt::from(i - t))
}

pub(crate) fn binomial(i: usize, j: usize) -> BigInt {
    if j > i {
        return BigInt::zero();
    }
    let j = j.min(i - j);
    let mut acc = BigInt::one();
    for t in 0..j {
        acc = acc * BigInt::from(i - t) / BigInt::from(t + 1);
    }
    acc
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Wire form: `{"coeffs": ["-6", "11", "-6", "1"]}`, constant term first.
#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    coeffs: Vec<String>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Polynomial::new(coeffs))
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_list(s)
    }
}
