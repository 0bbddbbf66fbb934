//! Cluster detection from three vantage points followed by Newton iteration
//! on `f^(k-1)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::diagram::{AdmissibleValue, NewtonDiagram, C0_THRESHOLD, CLUSTER_THRESHOLD};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::number::Rational;
use crate::poly::Polynomial;

/// Hard cap on Newton steps per call.
pub const MAX_NEWTON_STEPS: usize = 64;

/// Bits kept below the leading bit of `rho_k` when rounding an iterate.
const ITERATE_GUARD_BITS: i64 = 10;

const CACHE_LIMIT: usize = 1 << 14;

/// Diagrams of one polynomial, keyed by shift point.
pub struct DiagramCache {
    f: Polynomial,
    map: Mutex<HashMap<Dyadic, Arc<NewtonDiagram>>>,
}

impl DiagramCache {
    pub fn new(f: &Polynomial) -> Self {
        DiagramCache {
            f: f.clone(),
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn get(&self, z: &Dyadic) -> Result<Arc<NewtonDiagram>> {
        if let Some(d) = self.map.lock().unwrap().get(z) {
            return Ok(d.clone());
        }
        let d = Arc::new(NewtonDiagram::from_shifted(self.f.taylor_shift(z), z.clone())?);
        let mut map = self.map.lock().unwrap();
        if map.len() >= CACHE_LIMIT {
            map.clear();
        }
        map.insert(z.clone(), d.clone());
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonSuccess {
    pub j: Interval,
    pub k: usize,
    pub iterations: usize,
    pub final_point: Dyadic,
    /// Lower bound on `rho_{k+1}(final_point) / 3`.
    pub exclusion_radius: Dyadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonFailure {
    NoAdmissibleValue,
    SizeMismatch,
    DiscsNotNested,
    ZeroDerivative,
    IterationCap,
    NotCertified,
    EscapesCluster,
    TooWide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NewtonOutcome {
    Success(NewtonSuccess),
    Failure { reason: NewtonFailure, iterations: usize },
}

impl NewtonOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, NewtonOutcome::Success(_))
    }

    pub fn iterations(&self) -> usize {
        match self {
            NewtonOutcome::Success(s) => s.iterations,
            NewtonOutcome::Failure { iterations, .. } => *iterations,
        }
    }
}

/// Smallest admissible `k` at `p` whose exclusion disc contains `interval`.
pub fn smallest_admissible(f: &Polynomial, p: &Dyadic, interval: &Interval) -> Option<AdmissibleValue> {
    let d = NewtonDiagram::from_shifted(f.taylor_shift(p), p.clone()).ok()?;
    smallest_admissible_in(&d, interval)
}

pub fn smallest_admissible_in(d: &NewtonDiagram, interval: &Interval) -> Option<AdmissibleValue> {
    let n = d.degree();
    let reach = interval.max_distance_from(d.point());
    let c0 = Rational::from_integer(C0_THRESHOLD.into());
    for k in 2..n {
        if !d.is_hull_vertex(k) {
            continue;
        }
        // cheap containment test first; it only needs the exclusion radius
        let excl = d.exclusion_radius(k);
        if reach > excl {
            continue;
        }
        if d.delta_at_least(k, &c0) {
            return Some(d.admissible_entry(k));
        }
    }
    None
}

/// `Newton-Incl-Exc`: on success every root of `f` in `interval` lies in the
/// returned `J`, and `w(J) < w(interval) / 2`.
pub fn newton_incl_exc(f: &Polynomial, interval: &Interval) -> NewtonOutcome {
    newton_incl_exc_cached(&DiagramCache::new(f), interval)
}

pub fn newton_incl_exc_cached(cache: &DiagramCache, interval: &Interval) -> NewtonOutcome {
    let fail = |reason, iterations| NewtonOutcome::Failure { reason, iterations };
    let m = interval.midpoint();
    let mut found: Vec<(Dyadic, AdmissibleValue)> = Vec::with_capacity(3);
    for p in [&m, interval.lo(), interval.hi()] {
        let Ok(d) = cache.get(p) else {
            return fail(NewtonFailure::NoAdmissibleValue, 0);
        };
        let Some(a) = smallest_admissible_in(&d, interval) else {
            return fail(NewtonFailure::NoAdmissibleValue, 0);
        };
        if let Some((_, first)) = found.first() {
            if first.k != a.k {
                return fail(NewtonFailure::SizeMismatch, 0);
            }
        }
        found.push((p.clone(), a));
    }
    let k = found[0].1.k;
    let excl_m = &found[0].1.exclusion_radius_lo;
    for (p, a) in &found {
        if &(p - &m).abs() + &a.inclusion_radius_hi > *excl_m {
            return fail(NewtonFailure::DiscsNotNested, 0);
        }
    }

    let d0 = cache.get(&m).expect("diagram at midpoint");
    let rho0_hi = d0.rho(k).hi_or_panic().clone();
    let mut prev = d0;
    let mut i = 0usize;
    loop {
        let c = prev.shifted_coeffs();
        if c[k].is_zero() {
            return fail(NewtonFailure::ZeroDerivative, i);
        }
        let rho_lo = &prev.rho(k).lo;
        let Some(lg) = rho_lo.floor_log2() else {
            return fail(NewtonFailure::ZeroDerivative, i);
        };
        let step = &c[k - 1] / (&c[k] * Rational::from_integer(BigInt::from(k)));
        let exact = prev.point().to_rational() - step;
        let e = lg - ITERATE_GUARD_BITS;
        let next = Dyadic::floor_rational(&(exact + Dyadic::pow2(e - 1).to_rational()), e);
        i += 1;
        let Ok(d) = cache.get(&next) else {
            break;
        };
        // continue while rho_k(z_i) <= 2^(5 - 2^i) rho_k(z_0)
        let shrink = if i >= 40 { -(1i64 << 40) } else { 5 - (1i64 << i) };
        if d.rho(k).lo > rho0_hi.mul_pow2(shrink) {
            break;
        }
        prev = d;
        if i >= MAX_NEWTON_STEPS {
            return fail(NewtonFailure::IterationCap, i);
        }
    }

    if !prev.delta_at_least(k, &Rational::from_integer(CLUSTER_THRESHOLD.into())) {
        return fail(NewtonFailure::NotCertified, i);
    }
    let z = prev.point().clone();
    let radius = prev.inclusion_radius(k);
    if &(&z - &m).abs() + &radius > *excl_m {
        return fail(NewtonFailure::EscapesCluster, i);
    }
    let j = Interval::around(&z, &radius);
    if j.width() >= interval.width().half() {
        return fail(NewtonFailure::TooWide, i);
    }
    NewtonOutcome::Success(NewtonSuccess {
        j,
        k,
        iterations: i,
        exclusion_radius: prev.exclusion_radius(k),
        final_point: z,
    })
}

/// Runs exact Newton steps on `f^(k-1)` from `z` and checks that every iterate
/// stays in `D(z, 3 rho_k(z) / (2k))` with step lengths decaying at least
/// like `2^(1 - 2^i)` times the first one.
pub fn approximate_zero_check(f: &Polynomial, z: &Dyadic, k: usize) -> Result<bool> {
    let d = NewtonDiagram::from_shifted(f.taylor_shift(z), z.clone())?;
    if k < 1 || k >= d.degree() || !d.delta_at_least(k, &Rational::from_integer(C0_THRESHOLD.into())) {
        return Err(Error::NotCertified(k));
    }
    let g = f.derivative(k - 1);
    let dg = g.derivative(1);
    let radius = d.inclusion_radius(k).to_rational() / Rational::from_integer(BigInt::from(2 * k));
    let z0 = z.to_rational();
    let mut x = z0.clone();
    let mut first_step: Option<Rational> = None;
    for i in 0..5u32 {
        let dv = dg.eval(&x);
        if dv.is_zero() {
            return Ok(false);
        }
        let step = g.eval(&x) / dv;
        x -= &step;
        if (&x - &z0).abs() > radius {
            return Ok(false);
        }
        let s = step.abs();
        let done = s.is_zero();
        match &first_step {
            None => first_step = Some(s),
            Some(s0) => {
                let bound = s0 * crate::number::mul_pow2(&Rational::from_integer(1.into()), 1 - (1i64 << i));
                if s > bound {
                    return Ok(false);
                }
            }
        }
        if done {
            break;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, mul_pow2};

    fn m_eps_cubic() -> Polynomial {
        let m = mul_pow2(&int(1), 20);
        let e2 = mul_pow2(&int(1), -40);
        Polynomial::new(vec![&m * &e2, -e2.clone(), -m, int(1)])
    }

    fn quarter() -> Interval {
        Interval::new("-1/4".parse().unwrap(), "1/4".parse().unwrap()).unwrap()
    }

    #[test]
    fn smallest_admissible_examples() {
        let a = smallest_admissible(&m_eps_cubic(), &Dyadic::zero(), &quarter()).unwrap();
        assert_eq!(a.k, 2);
        let g = Polynomial::from_i64(&[-1, 0, 1]);
        assert!(smallest_admissible(&g, &Dyadic::zero(), &Interval::from_ints(-2, 2)).is_none());
    }

    #[test]
    fn newton_finds_tiny_cluster() {
        let out = newton_incl_exc(&m_eps_cubic(), &quarter());
        let NewtonOutcome::Success(s) = out else {
            panic!("expected success, got {out:?}");
        };
        assert_eq!(s.k, 2);
        let e = Dyadic::pow2(-20);
        assert!(s.j.contains(&e) && s.j.contains(&-&e));
        assert!(s.j.width() <= Dyadic::new(72.into(), -20));
        assert!(s.j.width() < quarter().width().half());
    }

    #[test]
    fn newton_fails_without_cluster() {
        let f = Polynomial::from_i64(&[-6, 11, -6, 1]);
        assert!(!newton_incl_exc(&f, &Interval::from_ints(0, 4)).is_success());
        let g = Polynomial::from_i64(&[-1, 0, 1]);
        assert!(!newton_incl_exc(&g, &Interval::from_ints(-2, 2)).is_success());
    }

    #[test]
    fn approximate_zero_examples() {
        let f = m_eps_cubic();
        assert!(approximate_zero_check(&f, &Dyadic::zero(), 2).unwrap());
        let g = Polynomial::from_i64(&[-6, 11, -6, 1]);
        assert!(approximate_zero_check(&g, &Dyadic::zero(), 2).is_err());
    }
}
