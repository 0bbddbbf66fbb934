//! The stopping function `G` of a root set and its integral over real regions.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::roots::{Point, RootSet};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::number::{to_f64, Rational};
use crate::radical::Radical;

const BREAKPOINT_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
}

impl Quadrature {
    pub fn upper(&self) -> f64 {
        self.value + self.error
    }
}

/// Distances from real `x` to each point, as `(index, distance)` sorted
/// ascending with ties broken towards the smaller coordinate.
fn ranked(points: &[Point], x: &Rational) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, to_f64(&p.dist2_real(x)).sqrt()))
        .collect();
    v.sort_by(|a, b| {
        let (pa, pb) = (&points[a.0], &points[b.0]);
        match pa.dist2_real(x).cmp(&pb.dist2_real(x)) {
            Ordering::Equal => (&pa.re, &pa.im).cmp(&(&pb.re, &pb.im)),
            o => o,
        }
    });
    v
}

/// Distance from each real root to its nearest neighbour in the set.
fn d2_at_roots(points: &[Point]) -> Vec<Option<Rational>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if !p.is_real() {
                return None;
            }
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| p.dist2(q))
                .min()
        })
        .collect()
}

/// `G(x)`. Returns `+inf` only at the root of a one-point set.
pub fn stopping_function(roots: &RootSet, x: &Rational) -> f64 {
    let pts = roots.points();
    assert!(!pts.is_empty(), "empty root set");
    let r = ranked(pts, x);
    let (owner, d1) = r[0];
    let d2 = r.get(1).map(|&(_, d)| d);
    let p = &pts[owner];
    if !p.is_real() {
        return 1.0 / d1;
    }
    match &d2_at_roots(pts)[owner] {
        Some(s2) if in_j(&p.re, s2, x) => 2.0 / d2.unwrap(),
        _ => 1.0 / d1,
    }
}

/// `|x - alpha| < d2(alpha) / 2`, exactly.
fn in_j(alpha: &Rational, d2sq: &Rational, x: &Rational) -> bool {
    let dx = x - alpha;
    Rational::from_integer(4.into()) * &dx * &dx < *d2sq
}

#[derive(Clone, Copy)]
enum Shape {
    /// `2 / d_2(x, V)`.
    Second,
    /// `1 / |x - p|` for a fixed point.
    Owner(usize),
}

/// Integral of `G` over a union of intervals.
pub fn charge_integral(roots: &RootSet, region: &[Interval]) -> Result<Quadrature> {
    let pts = roots.points();
    if pts.is_empty() {
        return Err(Error::InvalidArgument("empty root set".into()));
    }
    let d2 = d2_at_roots(pts);
    if pts.len() == 1 && pts[0].is_real() {
        let a = &pts[0].re;
        if region.iter().any(|i| i.lo().to_rational() <= *a && *a <= i.hi().to_rational()) {
            return Err(Error::Unbounded);
        }
    }
    let mut cuts = bisectors(pts);
    for (i, s) in d2.iter().enumerate() {
        if let Some(s2) = s {
            let (h, _) = Radical::new(s2 / Rational::from_integer(4.into()), 2).enclose(BREAKPOINT_BITS);
            let h = h.to_rational();
            cuts.push(&pts[i].re - &h);
            cuts.push(&pts[i].re + &h);
        }
    }
    integrate_region(pts, region, cuts, |mid| {
        let r = ranked(pts, mid);
        let owner = r[0].0;
        match &d2[owner] {
            Some(s2) if in_j(&pts[owner].re, s2, mid) => Shape::Second,
            _ => Shape::Owner(owner),
        }
    })
}

/// Integral of `1 / d(x, P)` over `(2 D_P \cap R) \ U_p J_p`, with
/// `J_p = [p +- sigma_p / 2]` for real `p` and `sigma_p` its nearest-neighbour
/// distance.
pub fn dense_charge(points: &RootSet) -> Result<Quadrature> {
    let pts = points.points();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let k = Rational::from_integer(pts.len().into());
    let m = pts.iter().fold(Rational::zero(), |a, p| a + &p.re) / k;
    let c = Point::real(m.clone());
    let r2 = pts.iter().map(|p| p.dist2(&c)).max().unwrap();
    let (_, r) = Radical::new(r2 * Rational::from_integer(4.into()), 2).enclose(BREAKPOINT_BITS);
    let e = r.exponent() - BREAKPOINT_BITS as i64;
    let lo = &Dyadic::floor_rational(&m, e) - &r;
    let hi = &Dyadic::ceil_rational(&m, e) + &r;
    let mut holes = Vec::new();
    for (i, s) in d2_at_roots(pts).iter().enumerate() {
        if let Some(s2) = s {
            let (_, h) = Radical::new(s2 / Rational::from_integer(4.into()), 2).enclose(BREAKPOINT_BITS);
            let e = h.exponent() - BREAKPOINT_BITS as i64;
            let a = &Dyadic::floor_rational(&pts[i].re, e) - &h;
            let b = &Dyadic::ceil_rational(&pts[i].re, e) + &h;
            holes.push(Interval::new(a, b)?);
        }
    }
    let region = interval_difference(&[Interval::new(lo, hi)?], &holes);
    integrate_region(pts, &region, bisectors(pts), |mid| Shape::Owner(ranked(pts, mid)[0].0))
}

/// Real points equidistant from two of the points.
fn bisectors(pts: &[Point]) -> Vec<Rational> {
    let mut v = Vec::new();
    for (i, u) in pts.iter().enumerate() {
        for w in &pts[i + 1..] {
            let dr = &w.re - &u.re;
            if dr.is_zero() {
                continue;
            }
            let nu = &u.re * &u.re + &u.im * &u.im;
            let nw = &w.re * &w.re + &w.im * &w.im;
            v.push((nw - nu) / (dr * Rational::from_integer(2.into())));
        }
    }
    v
}

fn integrate_region(
    pts: &[Point],
    region: &[Interval],
    mut cuts: Vec<Rational>,
    classify: impl Fn(&Rational) -> Shape,
) -> Result<Quadrature> {
    cuts.extend(pts.iter().map(|p| p.re.clone()));
    cuts.sort();
    cuts.dedup();
    let mut total = Quadrature::default();
    for i in region {
        let (a, b) = (i.lo().to_rational(), i.hi().to_rational());
        if a >= b {
            continue;
        }
        let mut knots = vec![a.clone()];
        knots.extend(cuts.iter().filter(|c| **c > a && **c < b).cloned());
        knots.push(b);
        for w in knots.windows(2) {
            let q = integrate_piece(pts, &w[0], &w[1], &classify)?;
            total.value += q.value;
            total.error += q.error;
        }
    }
    Ok(total)
}

fn integrate_piece(pts: &[Point], a: &Rational, b: &Rational, classify: &impl Fn(&Rational) -> Shape) -> Result<Quadrature> {
    let mid = (a + b) / Rational::from_integer(2.into());
    let shape = classify(&mid);
    let offs: Vec<(f64, f64)> = pts.iter().map(|p| (to_f64(&(&p.re - a)), to_f64(&p.im.abs()))).collect();
    let width = to_f64(&(b - a));
    let g = |t: f64| -> f64 {
        match shape {
            Shape::Owner(i) => 1.0 / (offs[i].0 - t).hypot(offs[i].1),
            Shape::Second => {
                let (mut d1, mut d2) = (f64::INFINITY, f64::INFINITY);
                for &(re, im) in &offs {
                    let d = (re - t).hypot(im);
                    if d < d1 {
                        d2 = d1;
                        d1 = d;
                    } else if d < d2 {
                        d2 = d;
                    }
                }
                2.0 / d2
            }
        }
    };
    let mut knots = vec![0.0, width];
    for &(re, im) in offs.iter().filter(|o| o.1 > 0.0) {
        let mut d = im;
        while d < width {
            knots.extend([re - d, re + d]);
            d *= 4.0;
        }
    }
    knots.retain(|t| (0.0..=width).contains(t));
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let rough = (hi - lo) * (g(lo) + 4.0 * g((lo + hi) / 2.0) + g(hi)) / 6.0;
        if !rough.is_finite() {
            return Err(Error::Unbounded);
        }
        let out = quadrature::integrate(g, lo, hi, (rough.abs() * 1e-10).max(f64::MIN_POSITIVE));
        if !out.integral.is_finite() {
            return Err(Error::Unbounded);
        }
        total.value += out.integral;
        total.error += out.error_estimate;
    }
    Ok(total)
}

/// `region \ holes` as a sorted list of nondegenerate intervals.
pub fn interval_difference(region: &[Interval], holes: &[Interval]) -> Vec<Interval> {
    let mut cur: Vec<Interval> = region.to_vec();
    for h in holes {
        let mut next = Vec::new();
        for i in cur {
            if h.hi() <= i.lo() || h.lo() >= i.hi() {
                next.push(i);
                continue;
            }
            if i.lo() < h.lo() {
                next.push(Interval::new(i.lo().clone(), h.lo().clone()).expect("ordered"));
            }
            if h.hi() < i.hi() {
                next.push(Interval::new(h.hi().clone(), i.hi().clone()).expect("ordered"));
            }
        }
        cur = next;
    }
    cur.sort_by(|a, b| a.lo().cmp(b.lo()));
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    fn iv(a: &str, b: &str) -> Interval {
        Interval::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    fn zero_and_i() -> RootSet {
        RootSet::from_parts(&[int(0)], &[(int(0), int(1))]).unwrap()
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(stopping_function(&zero_and_i(), &int(0)), 2.0);
        let single = RootSet::from_reals(&[int(0)]).unwrap();
        assert_eq!(stopping_function(&single, &int(5)), 0.2);
        assert_eq!(stopping_function(&single, &int(0)), f64::INFINITY);
        let pm = RootSet::from_reals(&[int(-1), int(1)]).unwrap();
        assert_eq!(stopping_function(&pm, &int(0)), 1.0);
        // inside J_1 = [1/2, 3/2]: 2 / d_2(x) = 2 / |x + 1|
        assert_eq!(stopping_function(&pm, &rat(1, 1)), 1.0);
    }

    #[test]
    fn integrals_against_closed_forms() {
        let q = charge_integral(&zero_and_i(), &[iv("-1/2", "1/2")]).unwrap();
        let want = 4.0 * 0.5f64.asinh();
        assert!((q.value - want).abs() < 1e-9, "{q:?} vs {want}");
        let single = RootSet::from_reals(&[int(0)]).unwrap();
        let q = charge_integral(&single, &[iv("1", "2")]).unwrap();
        assert!((q.value - 2f64.ln()).abs() < 1e-9);
        assert_eq!(charge_integral(&single, &[]).unwrap().value, 0.0);
        assert!(matches!(charge_integral(&single, &[iv("-1", "1")]), Err(Error::Unbounded)));
    }

    #[test]
    fn integral_across_breakpoints() {
        // V = {-1, 1} on [-2, 2]: J_{+-1} = [+-1 +- 1], so G = 2/d_2 everywhere
        let pm = RootSet::from_reals(&[int(-1), int(1)]).unwrap();
        let q = charge_integral(&pm, &[iv("-2", "2")]).unwrap();
        // 2 * int_0^2 2/(x+1) dx = 4 ln 3
        assert!((q.value - 4.0 * 3f64.ln()).abs() < 1e-8, "{q:?}");
    }

    #[test]
    fn differences() {
        let d = interval_difference(&[iv("0", "10")], &[iv("2", "3"), iv("-1", "1"), iv("9", "12")]);
        assert_eq!(d, vec![iv("1", "2"), iv("3", "9")]);
    }

    #[test]
    fn dense_charge_closed_form() {
        // 2 D_P = [-2, 2], J_0 = [-1/2, 1/2], d(x, P) = |x| outside J_0
        let q = dense_charge(&zero_and_i()).unwrap();
        assert!((q.value - 2.0 * 4f64.ln()).abs() < 1e-9, "{q:?}");
        let pair = RootSet::from_reals(&[int(0), int(1)]).unwrap();
        assert!(dense_charge(&pair).unwrap().value.abs() < 1e-9);
    }
}
