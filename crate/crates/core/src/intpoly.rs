//! Integer-coefficient polynomial kernels.
//!
//! Every exact transform on the hot path (Taylor shifts, the Descartes
//! transform, Sturm remainders, sign evaluation) runs over `BigInt` so no
//! rational normalization happens inside inner loops.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::Dyadic;

/// Dense integer polynomial, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub(crate) c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> &BigInt {
        self.c.last().expect("nonzero polynomial")
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divide out the (positive) content; signs are preserved.
    pub fn primitive(mut self) -> Self {
        let g = self.content();
        if !g.is_zero() && !g.is_one() {
            for x in &mut self.c {
                *x /= &g;
            }
        }
        self
    }

    pub fn negate(mut self) -> Self {
        for x in &mut self.c {
            *x = -&*x;
        }
        self
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(x + s)` for an integer `s`, by repeated synthetic division.
    pub fn shift(&self, s: &BigInt) -> Self {
        let mut a = self.c.clone();
        let n = a.len();
        if n <= 1 || s.is_zero() {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * s;
                a[j] += t;
            }
        }
        IntPoly::new(a)
    }

    /// `p(x + 1)`.
    pub fn shift_one(&self) -> Self {
        let mut a = self.c.clone();
        let n = a.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = a[j + 1].clone();
                a[j] += t;
            }
        }
        IntPoly::new(a)
    }

    /// Coefficients of `2^(s*n) * p(x / 2^s)`, i.e. `c_i * 2^(s*(n-i))`.
    pub fn scale_down_pow2(&self, s: u64) -> Self {
        let Some(n) = self.degree() else {
            return self.clone();
        };
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .map(|(i, x)| x << (s as usize * (n - i)))
                .collect(),
        )
    }

    /// `p(w x)`.
    pub fn scale_var(&self, w: &BigInt) -> Self {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.c.len());
        for x in &self.c {
            out.push(x * &pw);
            pw *= w;
        }
        IntPoly::new(out)
    }

    /// `x^n p(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        IntPoly::new(c)
    }

    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for x in &self.c {
            let s = match x.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => continue,
                num_bigint::Sign::Plus => 1,
            };
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Sign of `p(x)` at a dyadic point, computed exactly.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        let Some(n) = self.degree() else {
            return 0;
        };
        let e = x.exponent();
        let m = x.mantissa();
        let acc = if e >= 0 {
            let xv = m << e as usize;
            let mut acc = BigInt::zero();
            for c in self.c.iter().rev() {
                acc = acc * &xv + c;
            }
            acc
        } else {
            // homogenized Horner: sum c_i m^i 2^(s (n-i)), a positive multiple of p(x)
            let s = (-e) as usize;
            let mut acc = self.c[n].clone();
            for (k, c) in self.c[..n].iter().rev().enumerate() {
                acc = acc * m + (c << (s * (k + 1)));
            }
            acc
        };
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// A positive multiple of `self mod b`.
    pub fn signed_prem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.leading();
        let lb_abs = lb.abs();
        let sb = if lb.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let mut r = self.c.clone();
        loop {
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
            if r.is_empty() || r.len() - 1 < db {
                break;
            }
            let k = r.len() - 1 - db;
            let lr = r.last().unwrap().clone() * &sb;
            for x in r.iter_mut() {
                *x *= &lb_abs;
            }
            for (i, bc) in b.c.iter().enumerate() {
                r[i + k] -= &lr * bc;
            }
        }
        IntPoly::new(r).primitive()
    }

    /// Primitive greatest common divisor (up to sign) via a primitive remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.c.len() >= other.c.len() {
            (self.clone().primitive(), other.clone().primitive())
        } else {
            (other.clone().primitive(), self.clone().primitive())
        };
        while !b.is_zero() {
            let r = a.signed_prem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Reduction modulo a prime `p < 2^32`, trailing zeros trimmed.
    fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        let mut v: Vec<u64> = self
            .c
            .iter()
            .map(|x| x.mod_floor(&m).to_u64().expect("reduced below p"))
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Sufficient test for `gcd(self, other) = 1` over the rationals: the
    /// images modulo some prime not dividing either leading coefficient are
    /// coprime.
    pub fn coprime_modular(&self, other: &IntPoly) -> bool {
        const PRIMES: [u64; 4] = [4_294_967_291, 4_294_967_279, 4_294_967_231, 4_294_967_197];
        for p in PRIMES {
            let a = self.reduce_mod(p);
            let b = other.reduce_mod(p);
            if a.len() != self.c.len() || b.len() != other.c.len() {
                continue;
            }
            if gcd_degree_mod(a, b, p) == 0 {
                return true;
            }
        }
        false
    }

    /// Exact division; caller guarantees `b` divides a multiple of `self`.
    /// Returns a primitive polynomial proportional to `self / b`.
    pub fn div_exact_primitive(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("nonzero divisor");
        let n = self.degree().expect("nonzero dividend");
        if n < db {
            return IntPoly::new(vec![]);
        }
        // scale so every quotient step is integral
        let scale = num_traits::pow(b.leading().abs(), n - db + 1);
        let mut r: Vec<BigInt> = self.c.iter().map(|x| x * &scale).collect();
        let mut q = vec![BigInt::zero(); n - db + 1];
        for k in (0..=n - db).rev() {
            let lr = r[k + db].clone();
            let (qq, rem) = lr.div_rem(b.leading());
            debug_assert!(rem.is_zero());
            for (i, bc) in b.c.iter().enumerate() {
                r[i + k] -= &qq * bc;
            }
            q[k] = qq;
        }
        IntPoly::new(q).primitive()
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Degree of `gcd(a, b)` over `Z/p`, with `a`, `b` nonzero and trimmed.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let t = a.last().unwrap() * inv % p;
            let k = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[i + k] = (a[i + k] + p - t * bc % p) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn shift_matches_expansion() {
        // x^2 - 1 at x+3 -> x^2 + 6x + 8
        assert_eq!(p(&[-1, 0, 1]).shift(&3.into()), p(&[8, 6, 1]));
        assert_eq!(p(&[-1, 0, 1]).shift_one(), p(&[0, 2, 1]));
    }

    #[test]
    fn descartes_transform_example() {
        // x^2 - 2 on (1, 2): shift by 1, scale by 1, reverse, shift by 1 -> -x^2 + 2
        let t = p(&[-2, 0, 1]).shift(&1.into()).scale_var(&1.into()).reverse().shift_one();
        assert_eq!(t, p(&[2, 0, -1]));
        assert_eq!(t.sign_variations(), 1);
    }

    #[test]
    fn signs_at_dyadics() {
        let f = p(&[-2, 0, 1]);
        assert_eq!(f.sign_at(&"3/2".parse().unwrap()), 1);
        assert_eq!(f.sign_at(&"11/8".parse().unwrap()), -1);
        assert_eq!(p(&[-6, 11, -6, 1]).sign_at(&2.into()), 0);
    }

    #[test]
    fn gcd_and_division() {
        // (x-1)^2 (x+2) and its derivative share (x-1)
        let f = p(&[2, -3, 0, 1]);
        let g = f.gcd(&f.derivative());
        assert_eq!(g.degree(), Some(1));
        let q = f.div_exact_primitive(&g);
        assert_eq!(q.degree(), Some(2));
        assert_eq!(q.sign_at(&1.into()), 0);
        assert_eq!(q.sign_at(&(-2).into()), 0);
    }

    #[test]
    fn modular_coprimality() {
        let f = p(&[-2, 0, 1]);
        assert!(f.coprime_modular(&f.derivative()));
        // (x - 1)^2 (x + 2)
        let g = p(&[2, -3, 0, 1]);
        assert!(!g.coprime_modular(&g.derivative()));
        assert_eq!(gcd_degree_mod(vec![2, 4294967288, 0, 1], vec![4294967288, 0, 3], 4_294_967_291), 1);
    }
}
