//! Newton diagrams of `f(x + z)` and the cluster quantities derived from them.
//!
//! The diagram is the lower hull of the points `(i, -log|f_i(z)|)`. Every
//! decision made on it (hull membership, deviation thresholds) is exact:
//! floating-point logarithms only short-circuit comparisons whose outcome is
//! clear by a wide margin, and ties fall through to integer arithmetic.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::number::{log2_rational, Rational};
use crate::poly::{binomial, Polynomial};
use crate::radical::{max_precision_bits, Radical, Rho, RhoBound, DEFAULT_ENCLOSURE_BITS};

/// Admissibility threshold, an upper bound on `27 * 6 * e^6 = 65355.47...`.
pub const C0_THRESHOLD: i64 = 65356;

/// Deviation needed for the inclusion/exclusion disc pair to certify a cluster.
pub const CLUSTER_THRESHOLD: i64 = 27;

#[derive(Clone, Debug)]
pub struct NewtonDiagram {
    point: Dyadic,
    coeffs: Vec<Rational>,
    hull: Vec<usize>,
    /// `rho[k - 1]` holds `rho_k` for `k = 1..=n+1`.
    rho: Vec<RhoBound>,
}

/// Certified enclosure of a deviation `rho_{k+1} / rho_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deviation {
    Finite { lo: Rational, hi: Rational },
    Infinite,
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleValue {
    pub k: usize,
    pub delta_lower_bound: Dyadic,
    /// Upper bound on `3 rho_k`.
    pub inclusion_radius_hi: Dyadic,
    /// Lower bound on `rho_{k+1} / 3`.
    pub exclusion_radius_lo: Dyadic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterCertificate {
    pub k: usize,
    pub count: usize,
    pub inner_radius: Dyadic,
    pub outer_radius: Dyadic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaQuantities {
    pub k: usize,
    /// `|f^(k-1)(z) / f^(k)(z)|`.
    pub beta: Rational,
    /// Exact `gamma_k`; `None` when every higher coefficient vanishes.
    pub gamma: Option<Radical>,
    pub gamma_hi: Dyadic,
    pub alpha_hi: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoDump {
    pub k: usize,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramDump {
    pub point: Dyadic,
    pub degree: usize,
    pub hull_indices: Vec<usize>,
    pub rho: Vec<RhoDump>,
    pub admissible: Vec<AdmissibleValue>,
}

/// Newton diagram of `f(x + z)`.
pub fn build_diagram(f: &Polynomial, z: &Dyadic) -> Result<NewtonDiagram> {
    NewtonDiagram::from_shifted(f.taylor_shift(z), z.clone())
}

/// Deviation `Delta_k` of a diagram.
pub fn deviation(d: &NewtonDiagram, k: usize) -> Deviation {
    d.deviation(k)
}

/// All admissible values of `f` at `z`, ascending.
pub fn admissible_values(f: &Polynomial, z: &Dyadic) -> Result<Vec<AdmissibleValue>> {
    Ok(build_diagram(f, z)?.admissible_values())
}

pub fn cluster_certificate(f: &Polynomial, z: &Dyadic, k: usize) -> Result<ClusterCertificate> {
    build_diagram(f, z)?.cluster_certificate(k)
}

pub fn alpha_theory_quantities(f: &Polynomial, z: &Dyadic, k: usize) -> Result<AlphaQuantities> {
    build_diagram(f, z)?.alpha_quantities(k)
}

impl NewtonDiagram {
    /// Build from the Taylor coefficients `f_i(z)` of `f` at `z`.
    pub fn from_shifted(shifted: Polynomial, point: Dyadic) -> Result<Self> {
        let coeffs = shifted.coeffs().to_vec();
        let support: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
        if support.len() < 2 {
            return Err(Error::DegenerateDiagram);
        }
        let n = coeffs.len() - 1;
        let logs: Vec<f64> = coeffs
            .iter()
            .map(|c| if c.is_zero() { f64::NAN } else { log2_rational(c) })
            .collect();

        let mut hull: Vec<usize> = Vec::with_capacity(support.len());
        for &l in &support {
            while hull.len() >= 2 {
                let i = hull[hull.len() - 2];
                let j = hull[hull.len() - 1];
                if above_or_on(&coeffs, &logs, i, j, l) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(l);
        }

        let mut rho = Vec::with_capacity(n + 1);
        for _ in 1..=hull[0] {
            rho.push(RhoBound::new(Rho::Zero, DEFAULT_ENCLOSURE_BITS));
        }
        for w in hull.windows(2) {
            let (i, j) = (w[0], w[1]);
            let r = Radical::new((&coeffs[i] / &coeffs[j]).abs(), (j - i) as u32);
            let b = RhoBound::new(Rho::Finite(r), DEFAULT_ENCLOSURE_BITS);
            for _ in i + 1..=j {
                rho.push(b.clone());
            }
        }
        rho.push(RhoBound::new(Rho::Infinite, DEFAULT_ENCLOSURE_BITS));
        debug_assert_eq!(rho.len(), n + 1);
        Ok(NewtonDiagram {
            point,
            coeffs,
            hull,
            rho,
        })
    }

    pub fn point(&self) -> &Dyadic {
        &self.point
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Taylor coefficients `f_i(z)`.
    pub fn shifted_coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn hull_indices(&self) -> &[usize] {
        &self.hull
    }

    pub fn is_hull_vertex(&self, k: usize) -> bool {
        self.hull.binary_search(&k).is_ok()
    }

    /// `rho_k` for `1 <= k <= n + 1`.
    pub fn rho(&self, k: usize) -> &RhoBound {
        assert!(k >= 1 && k <= self.degree() + 1, "rho index out of range");
        &self.rho[k - 1]
    }

    /// `max_{j<k} |f_j / f_k|^{1/(k-j)}`; `None` when `f_k(z) = 0`.
    pub fn rho_max_formula(&self, k: usize) -> Option<Rho> {
        if self.coeffs[k].is_zero() {
            return None;
        }
        let mut best = Rho::Zero;
        for j in 0..k {
            if self.coeffs[j].is_zero() {
                continue;
            }
            let r = Rho::Finite(Radical::new(
                (&self.coeffs[j] / &self.coeffs[k]).abs(),
                (k - j) as u32,
            ));
            if r.cmp_rho(&best) == Ordering::Greater {
                best = r;
            }
        }
        Some(best)
    }

    /// `min_{j>k} |f_k / f_j|^{1/(j-k)}`; `None` when `f_k(z) = 0`.
    pub fn rho_min_formula(&self, k: usize) -> Option<Rho> {
        if self.coeffs[k].is_zero() {
            return None;
        }
        let mut best = Rho::Infinite;
        for j in k + 1..self.coeffs.len() {
            if self.coeffs[j].is_zero() {
                continue;
            }
            let r = Rho::Finite(Radical::new(
                (&self.coeffs[k] / &self.coeffs[j]).abs(),
                (j - k) as u32,
            ));
            if r.cmp_rho(&best) == Ordering::Less {
                best = r;
            }
        }
        Some(best)
    }

    pub fn deviation(&self, k: usize) -> Deviation {
        assert!(k >= 1 && k <= self.degree(), "deviation index out of range");
        let a = self.rho(k);
        let b = self.rho(k + 1);
        match (&a.exact, &b.exact) {
            (Rho::Zero, Rho::Zero) => Deviation::Undefined,
            (Rho::Zero, _) | (_, Rho::Infinite) => Deviation::Infinite,
            _ => Deviation::Finite {
                lo: b.lo.to_rational() / a.hi_or_panic().to_rational(),
                hi: b.hi_or_panic().to_rational() / a.lo.to_rational(),
            },
        }
    }

    /// Exact test `Delta_k >= c`.
    pub fn delta_at_least(&self, k: usize, c: &Rational) -> bool {
        let a = &self.rho(k).exact;
        let b = &self.rho(k + 1).exact;
        let (ra, rb) = match (a, b) {
            (Rho::Zero, Rho::Zero) => return false,
            (Rho::Zero, _) | (_, Rho::Infinite) => return true,
            (Rho::Finite(ra), Rho::Finite(rb)) => (ra, rb),
            _ => unreachable!("rho is nondecreasing"),
        };
        if ra == rb {
            return Rational::one() >= *c;
        }
        let mut bits = DEFAULT_ENCLOSURE_BITS;
        let (mut alo, mut ahi) = (self.rho(k).lo.clone(), self.rho(k).hi_or_panic().clone());
        let (mut blo, mut bhi) = (self.rho(k + 1).lo.clone(), self.rho(k + 1).hi_or_panic().clone());
        loop {
            if blo.to_rational() >= c * ahi.to_rational() {
                return true;
            }
            if bhi.to_rational() < c * alo.to_rational() {
                return false;
            }
            bits *= 2;
            if bits > max_precision_bits() {
                break;
            }
            (alo, ahi) = ra.enclose(bits);
            (blo, bhi) = rb.enclose(bits);
        }
        rb.ratio_cmp(ra, c) != Ordering::Less
    }

    /// Upper bound on `3 rho_k`.
    pub fn inclusion_radius(&self, k: usize) -> Dyadic {
        let h = self.rho(k).hi_or_panic();
        h + &h.mul_pow2(1)
    }

    /// Lower bound on `rho_{k+1} / 3`; zero when `rho_{k+1}` is infinite.
    pub fn exclusion_radius(&self, k: usize) -> Dyadic {
        let r = self.rho(k + 1);
        if r.is_infinite() {
            return Dyadic::zero();
        }
        r.lo.div3_floor(DEFAULT_ENCLOSURE_BITS)
    }

    /// Admissible values: `2 <= k < n` with `Delta_k >= C0_THRESHOLD`.
    pub fn admissible_values(&self) -> Vec<AdmissibleValue> {
        let n = self.degree();
        let c0 = Rational::from_integer(C0_THRESHOLD.into());
        (2..n)
            .filter(|&k| self.is_hull_vertex(k) && self.delta_at_least(k, &c0))
            .map(|k| self.admissible_entry(k))
            .collect()
    }

    pub(crate) fn admissible_entry(&self, k: usize) -> AdmissibleValue {
        let threshold = Dyadic::from_i64(C0_THRESHOLD);
        let lower = match self.deviation(k) {
            Deviation::Finite { lo, .. } => Dyadic::floor_rational(&lo, 0).max(threshold),
            _ => threshold,
        };
        AdmissibleValue {
            k,
            delta_lower_bound: lower,
            inclusion_radius_hi: self.inclusion_radius(k),
            exclusion_radius_lo: self.exclusion_radius(k),
        }
    }

    /// Disc pair certified to hold exactly `k` roots each.
    pub fn cluster_certificate(&self, k: usize) -> Result<ClusterCertificate> {
        if k == 0 || k >= self.degree() {
            return Err(Error::NotCertified(k));
        }
        if !self.delta_at_least(k, &Rational::from_integer(CLUSTER_THRESHOLD.into())) {
            return Err(Error::NotCertified(k));
        }
        Ok(ClusterCertificate {
            k,
            count: k,
            inner_radius: self.inclusion_radius(k),
            outer_radius: self.exclusion_radius(k),
        })
    }

    pub fn alpha_quantities(&self, k: usize) -> Result<AlphaQuantities> {
        let n = self.degree();
        if k == 0 || k > n || self.coeffs[k].is_zero() {
            return Err(Error::Undefined("f^(k)(z) vanishes"));
        }
        let fk = &self.coeffs[k];
        let beta = (&self.coeffs[k - 1] / (fk * Rational::from_integer(BigInt::from(k)))).abs();
        let mut gamma: Option<Radical> = None;
        for j in 1..=n - k {
            let c = &self.coeffs[k + j];
            if c.is_zero() {
                continue;
            }
            // (k+j)! / (k! (j+1)!) = binom(k+j, j) / (j+1)
            let w = Rational::new(binomial(k + j, j), BigInt::from(j + 1));
            let r = Radical::new(w * (c / fk).abs(), j as u32);
            if gamma.as_ref().is_none_or(|g| r.cmp_radical(g) == Ordering::Greater) {
                gamma = Some(r);
            }
        }
        let gamma_hi = match &gamma {
            Some(g) => g.enclose(DEFAULT_ENCLOSURE_BITS).1,
            None => Dyadic::zero(),
        };
        let alpha_hi = &beta * gamma_hi.to_rational();
        Ok(AlphaQuantities {
            k,
            beta,
            gamma,
            gamma_hi,
            alpha_hi,
        })
    }

    pub fn dump(&self) -> DiagramDump {
        let rho = (1..=self.degree() + 1)
            .map(|k| {
                let r = self.rho(k);
                RhoDump {
                    k,
                    lo: r.lo.to_string(),
                    hi: r.hi.as_ref().map_or_else(|| "inf".to_string(), |h| h.to_string()),
                }
            })
            .collect();
        DiagramDump {
            point: self.point.clone(),
            degree: self.degree(),
            hull_indices: self.hull.clone(),
            rho,
            admissible: self.admissible_values(),
        }
    }
}

/// Whether point `j` lies on or above the segment from `i` to `l` (`i < j < l`),
/// i.e. `|a_i/a_j|^(l-i) >= |a_i/a_l|^(j-i)`.
fn above_or_on(a: &[Rational], lg: &[f64], i: usize, j: usize, l: usize) -> bool {
    let lhs = (lg[i] - lg[j]) * (l - i) as f64;
    let rhs = (lg[i] - lg[l]) * (j - i) as f64;
    let margin = 1e-9 * (1.0 + lhs.abs() + rhs.abs());
    if lhs - rhs > margin {
        return true;
    }
    if rhs - lhs > margin {
        return false;
    }
    let x: Rational = Pow::pow((&a[i] / &a[j]).abs(), (l - i) as u32);
    let y: Rational = Pow::pow((&a[i] / &a[l]).abs(), (j - i) as u32);
    x >= y
}

/// Pellet's test on `D(0, r)` for coefficients `a`: `|a_k| r^k > sum_{i != k} |a_i| r^i`.
pub fn pellet_test(a: &[Rational], k: usize, r: &Rational) -> bool {
    let mut pw = Rational::one();
    let mut others = Rational::zero();
    let mut mine = Rational::zero();
    for (i, c) in a.iter().enumerate() {
        let t = c.abs() * &pw;
        if i == k {
            mine = t;
        } else {
            others += t;
        }
        pw *= r;
    }
    mine > others
}
