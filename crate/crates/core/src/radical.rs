//! Exact positive real radicals `r^(1/q)` with rational radicand.
//!
//! Newton-diagram scale factors are of this form. Comparisons are decided
//! exactly by raising both sides to a common power; dyadic enclosures at a
//! requested relative precision are produced with integer `q`-th roots.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::number::Rational;

/// Default relative precision (bits) of dyadic enclosures.
pub const DEFAULT_ENCLOSURE_BITS: u32 = 24;

/// Upper limit on enclosure refinement before falling back to an exact
/// comparison. Overridable through `ROOTISO_MAX_PRECISION_BITS`.
pub fn max_precision_bits() -> u32 {
    static LIMIT: OnceLock<u32> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("ROOTISO_MAX_PRECISION_BITS")
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&b| b >= 8)
            .unwrap_or(192)
    })
}

/// `radicand^(1/index)` with `radicand > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    radicand: Rational,
    index: u32,
}

impl Radical {
    pub fn new(radicand: Rational, index: u32) -> Self {
        assert!(radicand.is_positive(), "radicand must be positive");
        assert!(index >= 1);
        Radical { radicand, index }
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Dyadic `(lo, hi)` with `lo <= value <= hi` and `hi - lo <= 2^-bits * value`.
    pub fn enclose(&self, bits: u32) -> (Dyadic, Dyadic) {
        let q = self.index as i64;
        let num = self.radicand.numer();
        let den = self.radicand.denom();
        // t <= log2(value), so value >= 2^t
        let lg = num.bits() as i64 - 1 - den.bits() as i64;
        let t = lg.div_euclid(q);
        let p = bits as i64 + 2 - t;
        let shift = q * p;
        let x = if shift >= 0 {
            (num << shift as usize) / den
        } else {
            num / (den << (-shift) as usize)
        };
        let root = x.nth_root(self.index);
        let exact = shift >= 0 && {
            let scaled = Rational::new(num << shift as usize, den.clone());
            scaled.is_integer() && Pow::pow(&root, self.index) == scaled.to_integer()
        };
        let lo = Dyadic::new(root.clone(), -p);
        let hi = if exact {
            lo.clone()
        } else {
            Dyadic::new(root + BigInt::one(), -p)
        };
        (lo, hi)
    }

    /// Exact comparison with a nonnegative rational.
    pub fn cmp_rational(&self, c: &Rational) -> Ordering {
        if !c.is_positive() {
            return Ordering::Greater;
        }
        self.radicand.cmp(&Pow::pow(c, self.index))
    }

    /// Exact comparison of two radicals.
    pub fn cmp_radical(&self, other: &Radical) -> Ordering {
        let a = Pow::pow(&self.radicand, other.index);
        let b = Pow::pow(&other.radicand, self.index);
        a.cmp(&b)
    }

    /// Exact comparison of `self / other` against a positive rational `c`.
    pub fn ratio_cmp(&self, other: &Radical, c: &Rational) -> Ordering {
        // (r1^(1/a)) / (r2^(1/b)) vs c  <=>  r1^b vs c^(ab) r2^a
        let (a, b) = (self.index, other.index);
        let lhs = Pow::pow(&self.radicand, b);
        let rhs = Pow::pow(c, a * b) * Pow::pow(&other.radicand, a);
        lhs.cmp(&rhs)
    }

    /// `1 / self`.
    pub fn recip(&self) -> Radical {
        Radical {
            radicand: self.radicand.recip(),
            index: self.index,
        }
    }

    pub fn to_f64(&self) -> f64 {
        (crate::number::log2_rational(&self.radicand) / self.index as f64).exp2()
    }
}

/// A Newton-diagram scale factor: exactly zero, a positive radical, or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rho {
    Zero,
    Finite(Radical),
    Infinite,
}

impl Rho {
    pub fn is_finite_positive(&self) -> bool {
        matches!(self, Rho::Finite(_))
    }

    /// Exact ordering.
    pub fn cmp_rho(&self, other: &Rho) -> Ordering {
        match (self, other) {
            (Rho::Zero, Rho::Zero) | (Rho::Infinite, Rho::Infinite) => Ordering::Equal,
            (Rho::Zero, _) | (_, Rho::Infinite) => Ordering::Less,
            (_, Rho::Zero) | (Rho::Infinite, _) => Ordering::Greater,
            (Rho::Finite(a), Rho::Finite(b)) => a.cmp_radical(b),
        }
    }

    pub fn cmp_rational(&self, c: &Rational) -> Ordering {
        match self {
            Rho::Zero => Rational::zero().cmp(c),
            Rho::Infinite => Ordering::Greater,
            Rho::Finite(r) => r.cmp_rational(c),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rho::Zero => 0.0,
            Rho::Infinite => f64::INFINITY,
            Rho::Finite(r) => r.to_f64(),
        }
    }
}

/// Certified enclosure of a [`Rho`]: `lo <= rho <= hi`, with `hi = None`
/// meaning `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoBound {
    pub exact: Rho,
    pub lo: Dyadic,
    pub hi: Option<Dyadic>,
}

impl RhoBound {
    pub fn new(exact: Rho, bits: u32) -> Self {
        match &exact {
            Rho::Zero => RhoBound {
                exact,
                lo: Dyadic::zero(),
                hi: Some(Dyadic::zero()),
            },
            Rho::Infinite => RhoBound {
                exact,
                lo: Dyadic::zero(),
                hi: None,
            },
            Rho::Finite(r) => {
                let (lo, hi) = r.enclose(bits);
                RhoBound {
                    exact,
                    lo,
                    hi: Some(hi),
                }
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.hi.is_none()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.exact, Rho::Zero)
    }

    pub fn hi_or_panic(&self) -> &Dyadic {
        self.hi.as_ref().expect("finite rho")
    }
}
