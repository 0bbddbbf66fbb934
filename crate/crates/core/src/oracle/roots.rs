//! Explicit conjugate-closed root sets with rational coordinates.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{to_f64, Rational};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub re: Rational,
    pub im: Rational,
}

impl Point {
    pub fn real(re: Rational) -> Self {
        Point { re, im: Rational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Point {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn dist2(&self, other: &Point) -> Rational {
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        &dr * &dr + &di * &di
    }

    /// Squared distance to the real number `x`.
    pub fn dist2_real(&self, x: &Rational) -> Rational {
        let dr = &self.re - x;
        &dr * &dr + &self.im * &self.im
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

/// Distinct points closed under complex conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    points: Vec<Point>,
}

impl RootSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument("repeated root".into()));
            }
            if !points.contains(&p.conj()) {
                return Err(Error::InvalidArgument("root set is not closed under conjugation".into()));
            }
        }
        Ok(RootSet { points })
    }

    pub fn from_reals(xs: &[Rational]) -> Result<Self> {
        RootSet::new(xs.iter().cloned().map(Point::real).collect())
    }

    /// Real roots `reals` plus the pairs `re +- i im` for each `(re, im)`.
    pub fn from_parts(reals: &[Rational], pairs: &[(Rational, Rational)]) -> Result<Self> {
        let mut pts: Vec<Point> = reals.iter().cloned().map(Point::real).collect();
        for (re, im) in pairs {
            if im.is_zero() {
                return Err(Error::InvalidArgument("pair with zero imaginary part".into()));
            }
            let p = Point {
                re: re.clone(),
                im: im.abs(),
            };
            pts.push(p.conj());
            pts.push(p);
        }
        RootSet::new(pts)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn reals(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.points.iter().filter(|p| p.is_real()).map(|p| p.re.clone()).collect();
        v.sort();
        v
    }

    /// Monic polynomial with exactly these roots.
    pub fn polynomial(&self) -> Polynomial {
        let mut f = Polynomial::one();
        for p in &self.points {
            if p.is_real() {
                f = f.mul(&Polynomial::linear_factor(&p.re));
            } else if p.im.is_positive() {
                let q = Polynomial::new(vec![
                    &p.re * &p.re + &p.im * &p.im,
                    -(&p.re * Rational::from_integer(2.into())),
                    Rational::from_integer(1.into()),
                ]);
                f = f.mul(&q);
            }
        }
        f
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(Point::to_f64).collect()
    }
}
