//! Exclusion (`C0`) and inclusion (`C1`) predicates on open intervals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::intpoly::IntPoly;
use crate::number::Rational;
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateOutcome {
    pub c0: bool,
    pub c1: bool,
    /// Sign variations (Descartes) or exact root count (Sturm).
    pub count: Option<usize>,
}

impl PredicateOutcome {
    fn from_count(v: usize) -> Self {
        PredicateOutcome {
            c0: v == 0,
            c1: v == 1,
            count: Some(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateKind {
    Descartes,
    Sturm,
    Eval,
}

impl PredicateKind {
    pub fn name(self) -> &'static str {
        match self {
            PredicateKind::Descartes => "descartes",
            PredicateKind::Sturm => "sturm",
            PredicateKind::Eval => "eval",
        }
    }
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredicateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "descartes" => Ok(PredicateKind::Descartes),
            "sturm" => Ok(PredicateKind::Sturm),
            "eval" => Ok(PredicateKind::Eval),
            _ => Err(Error::Parse(format!("unknown predicate {s:?}"))),
        }
    }
}

/// A predicate pair evaluated on the open interval `(lo, hi)`.
pub trait Predicate: Send + Sync {
    fn kind(&self) -> PredicateKind;
    fn test(&self, interval: &Interval) -> PredicateOutcome;
}

pub fn make_predicate(kind: PredicateKind, f: &Polynomial) -> Box<dyn Predicate> {
    match kind {
        PredicateKind::Descartes => Box::new(Descartes::new(f)),
        PredicateKind::Sturm => Box::new(Sturm::new(f)),
        PredicateKind::Eval => Box::new(Eval::new(f)),
    }
}

pub struct Descartes {
    p: IntPoly,
}

impl Descartes {
    pub fn new(f: &Polynomial) -> Self {
        Descartes {
            p: f.to_int_poly(),
        }
    }

    pub fn count(&self, i: &Interval) -> usize {
        descartes_variations(&self.p, i)
    }
}

impl Predicate for Descartes {
    fn kind(&self) -> PredicateKind {
        PredicateKind::Descartes
    }

    fn test(&self, i: &Interval) -> PredicateOutcome {
        PredicateOutcome::from_count(self.count(i))
    }
}

/// Sign variations of the Descartes transform of `p` on `(lo, hi)`.
fn descartes_variations(p: &IntPoly, i: &Interval) -> usize {
    let (lo, hi) = (i.lo(), i.hi());
    assert!(lo < hi, "Descartes test needs a nondegenerate interval");
    let e = lo.exponent().min(hi.exponent());
    let a = lo.mantissa() << (lo.exponent() - e) as usize;
    let b = hi.mantissa() << (hi.exponent() - e) as usize;
    let w = &b - &a;
    // substitute x = (a + w t) 2^e, t in (0, 1)
    let q = if e >= 0 {
        let s = BigInt::one() << e as usize;
        p.shift(&(&a * &s)).scale_var(&(&w * &s))
    } else {
        p.scale_down_pow2((-e) as u64).shift(&a).scale_var(&w)
    };
    q.reverse().shift_one().sign_variations()
}

pub fn descartes_count(f: &Polynomial, i: &Interval) -> usize {
    descartes_variations(&f.to_int_poly(), i)
}

/// Sturm chain `f, f', -rem(f, f'), ...` over primitive integer polynomials.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(f: &Polynomial) -> Self {
        let p = f.to_int_poly();
        let dp = p.derivative().primitive();
        let mut chain = vec![p, dp];
        loop {
            let n = chain.len();
            if chain[n - 1].degree().is_none_or(|d| d == 0) {
                break;
            }
            let r = chain[n - 2].signed_prem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.primitive().negate());
        }
        SturmSequence { chain }
    }

    pub fn chain(&self) -> &[IntPoly] {
        &self.chain
    }

    /// Sign variations of the chain at `x`.
    pub fn variations_at(&self, x: &Dyadic) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_half_open(&self, a: &Dyadic, b: &Dyadic) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct real roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &Dyadic, b: &Dyadic) -> usize {
        let c = self.count_half_open(a, b);
        if self.chain[0].sign_at(b) == 0 {
            c - 1
        } else {
            c
        }
    }

    /// Distinct real roots in the closed interval `[a, b]`.
    pub fn count_closed(&self, a: &Dyadic, b: &Dyadic) -> usize {
        let c = self.count_half_open(a, b);
        if self.chain[0].sign_at(a) == 0 {
            c + 1
        } else {
            c
        }
    }
}

pub struct Sturm {
    seq: SturmSequence,
}

impl Sturm {
    pub fn new(f: &Polynomial) -> Self {
        Sturm {
            seq: SturmSequence::new(f),
        }
    }

    pub fn sequence(&self) -> &SturmSequence {
        &self.seq
    }
}

impl Predicate for Sturm {
    fn kind(&self) -> PredicateKind {
        PredicateKind::Sturm
    }

    fn test(&self, i: &Interval) -> PredicateOutcome {
        PredicateOutcome::from_count(self.seq.count_open(i.lo(), i.hi()))
    }
}

/// Exact number of distinct real roots of a square-free `f` in `(a, b]`.
pub fn sturm_count(f: &Polynomial, i: &Interval) -> usize {
    SturmSequence::new(f).count_half_open(i.lo(), i.hi())
}

pub struct Eval {
    f: Polynomial,
}

impl Eval {
    pub fn new(f: &Polynomial) -> Self {
        Eval { f: f.clone() }
    }
}

impl Predicate for Eval {
    fn kind(&self) -> PredicateKind {
        PredicateKind::Eval
    }

    fn test(&self, i: &Interval) -> PredicateOutcome {
        eval_test(&self.f, i)
    }
}

/// Centered-form tests: `C0` if `|f(m)| > sum_{j>=1} |f_j(m)| r^j`, `C1` if
/// `|f'(m)| > sum_{j>=1} |f^(j+1)(m)/j!| r^j` and `f` changes sign on the
/// interval, with `r = w/2`.
pub fn eval_test(f: &Polynomial, i: &Interval) -> PredicateOutcome {
    let m = i.midpoint();
    let r = i.width().half().to_rational();
    let t = f.taylor_shift(&m);
    let c = t.coeffs();
    let mut pw = Rational::one();
    let mut rem0 = Rational::zero();
    let mut rem1 = Rational::zero();
    for j in 1..c.len() {
        pw *= &r;
        rem0 += c[j].abs() * &pw;
        if j + 1 < c.len() {
            let d = &c[j + 1] * Rational::from_integer(BigInt::from(j + 1));
            rem1 += d.abs() * &pw;
        }
    }
    let c0 = c.first().map_or(false, |v| v.abs() > rem0);
    let c1 = !c0
        && c.get(1).map_or(false, |v| v.abs() > rem1)
        && {
            let p = f.to_int_poly();
            p.sign_at(i.lo()) * p.sign_at(i.hi()) < 0
        };
    PredicateOutcome { c0, c1, count: None }
}

/// Whether `p` is an exact root of `f`.
pub fn endpoint_root_check(f: &Polynomial, p: &Dyadic) -> bool {
    f.to_int_poly().sign_at(p) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: &str, b: &str) -> Interval {
        Interval::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    #[test]
    fn descartes_examples() {
        let f = Polynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(descartes_count(&f, &iv("1", "2")), 1);
        assert_eq!(descartes_count(&f, &iv("0", "1")), 0);
        let g = Polynomial::from_i64(&[1, 0, 1]);
        assert_eq!(descartes_count(&g, &iv("-1", "1")), 0);
        assert_eq!(descartes_count(&g, &iv("0", "1")), 0);
        assert_eq!(descartes_count(&f, &iv("5/4", "3/2")), 1);
        assert_eq!(descartes_count(&f, &iv("-2", "2")), 2);
    }

    #[test]
    fn sturm_examples() {
        let f = Polynomial::from_i64(&[-6, 11, -6, 1]);
        assert_eq!(sturm_count(&f, &iv("0", "4")), 3);
        assert_eq!(sturm_count(&f, &iv("3/2", "5/2")), 1);
        assert_eq!(sturm_count(&Polynomial::from_i64(&[1, 0, 1]), &iv("-10", "10")), 0);
        let s = SturmSequence::new(&f);
        assert_eq!(s.count_open(&1.into(), &3.into()), 1);
        assert_eq!(s.count_closed(&1.into(), &3.into()), 3);
        assert_eq!(s.chain().last().unwrap().degree(), Some(0));
    }

    #[test]
    fn eval_examples() {
        let f = Polynomial::from_i64(&[-2, 0, 1]);
        let o = eval_test(&f, &iv("10", "11"));
        assert!(o.c0 && !o.c1);
        // (1.4, 1.45) approximated by dyadics on either side of sqrt 2
        let o = eval_test(&f, &iv("45/32", "93/64"));
        assert!(!o.c0 && o.c1);
        let o = eval_test(&f, &iv("0", "4"));
        assert!(!o.c0 && !o.c1);
    }

    #[test]
    fn endpoint_roots() {
        let f = Polynomial::from_i64(&[-6, 11, -6, 1]);
        assert!(endpoint_root_check(&f, &2.into()));
        let g = Polynomial::from_i64(&[-2, 0, 1]);
        assert!(!endpoint_root_check(&g, &1.into()));
        assert!(!endpoint_root_check(&g, &0.into()));
    }
}
