//! Cluster trees of explicit root sets, by exhaustive subset enumeration.

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};
use serde::Serialize;

use super::roots::{Point, RootSet};
use crate::diagram::C0_THRESHOLD;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::number::{to_f64, Rational};
use crate::radical::Radical;

/// Largest root set accepted by [`cluster_tree`].
pub const ORACLE_MAX_ROOTS: usize = 20;

/// Constant `c` in `I_C = [m_C +- c k r_C]` for strongly separated clusters.
pub const INNER_FACTOR: i64 = 20;

#[derive(Clone, Debug)]
pub struct ClusterNode {
    /// Indices into the root set, ascending.
    pub members: Vec<usize>,
    pub center: Point,
    /// `r_C^2`.
    pub radius2: Rational,
    /// `R_C^2`, `None` for the full root set.
    pub outer2: Option<Rational>,
    pub ssc: bool,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl ClusterNode {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.members.len() == 1
    }

    pub fn radius(&self) -> f64 {
        to_f64(&self.radius2).sqrt()
    }

    pub fn outer(&self) -> f64 {
        self.outer2.as_ref().map_or(f64::INFINITY, |r| to_f64(r).sqrt())
    }

    /// Half-width of `I_C`, squared.
    pub fn inner_half_width2(&self) -> Rational {
        if self.ssc {
            let c = Rational::from_integer(BigInt::from(INNER_FACTOR * self.size() as i64));
            &c * &c * &self.radius2
        } else {
            self.radius2.clone()
        }
    }

    /// Half-width of `\mathcal{I}_C`, squared; `None` when unbounded.
    pub fn outer_half_width2(&self, n: usize) -> Option<Rational> {
        if self.ssc {
            let d = Rational::from_integer(BigInt::from(8 * C0_THRESHOLD * (n * n) as i64));
            self.outer2.as_ref().map(|r2| r2 / (&d * &d))
        } else {
            Some(&self.radius2 * Rational::from_integer(4.into()))
        }
    }

    /// Real trace of the annulus `\mathcal{I}_C \ I_C`, shrunk to dyadic
    /// endpoints so that every returned piece lies inside the true annulus.
    pub fn annulus_pieces(&self, n: usize, bits: u32) -> Vec<Interval> {
        let Some(out2) = self.outer_half_width2(n) else {
            return Vec::new();
        };
        let in2 = self.inner_half_width2();
        if out2 <= in2 || out2.is_zero() {
            return Vec::new();
        }
        let (out_lo, _) = Radical::new(out2, 2).enclose(bits);
        let inner_hi = if in2.is_zero() {
            Dyadic::zero()
        } else {
            Radical::new(in2, 2).enclose(bits).1
        };
        if out_lo <= inner_hi {
            return Vec::new();
        }
        let e = out_lo.exponent().min(inner_hi.exponent()) - bits as i64;
        let m_lo = Dyadic::floor_rational(&self.center.re, e);
        let m_hi = Dyadic::ceil_rational(&self.center.re, e);
        let mut v = Vec::new();
        for (a, b) in [(&m_hi - &out_lo, &m_lo - &inner_hi), (&m_hi + &inner_hi, &m_lo + &out_lo)] {
            if a < b {
                v.push(Interval::new(a, b).expect("ordered"));
            }
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct ClusterTree {
    pub nodes: Vec<ClusterNode>,
    pub root: usize,
    pub degree: usize,
}

#[derive(Serialize)]
pub struct ClusterSummary {
    pub members: Vec<usize>,
    pub center: f64,
    pub radius: f64,
    pub outer: Option<f64>,
    pub ssc: bool,
    pub children: Vec<usize>,
}

impl ClusterTree {
    pub fn clusters(&self) -> impl Iterator<Item = &ClusterNode> {
        self.nodes.iter().filter(|c| c.size() >= 2)
    }

    pub fn ssc_nodes(&self) -> impl Iterator<Item = &ClusterNode> {
        self.clusters().filter(|c| c.ssc)
    }

    /// Annuli of strongly separated clusters of size below `n`.
    pub fn ssc_annuli(&self, bits: u32) -> Vec<Interval> {
        self.ssc_nodes()
            .filter(|c| c.size() < self.degree)
            .flat_map(|c| c.annulus_pieces(self.degree, bits))
            .collect()
    }

    pub fn summary(&self) -> Vec<ClusterSummary> {
        self.nodes
            .iter()
            .map(|c| ClusterSummary {
                members: c.members.clone(),
                center: to_f64(&c.center.re),
                radius: c.radius(),
                outer: c.outer2.as_ref().map(|_| c.outer()),
                ssc: c.ssc,
                children: c.children.clone(),
            })
            .collect()
    }
}

/// `R/r > 16 c0 72 n^3`, decided on squares.
pub fn is_ssc(radius2: &Rational, outer2: Option<&Rational>, n: usize) -> bool {
    let Some(o2) = outer2 else { return true };
    let t = Rational::from_integer(BigInt::from(16 * 72 * C0_THRESHOLD) * BigInt::from(n).pow(3u32));
    *o2 > &t * &t * radius2
}

fn centroid(points: &[Point], members: &[usize]) -> Point {
    let k = Rational::from_integer(BigInt::from(members.len()));
    let mut re = Rational::zero();
    let mut im = Rational::zero();
    for &i in members {
        re += &points[i].re;
        im += &points[i].im;
    }
    Point { re: re / &k, im: im / k }
}

fn node_for(points: &[Point], members: Vec<usize>, n: usize) -> Option<ClusterNode> {
    let center = centroid(points, &members);
    let radius2 = members.iter().map(|&i| points[i].dist2(&center)).max().unwrap();
    let nine_r2 = &radius2 * Rational::from_integer(9.into());
    let mut outer2: Option<Rational> = None;
    for (q, p) in points.iter().enumerate() {
        if members.binary_search(&q).is_ok() {
            continue;
        }
        let d2 = p.dist2(&center);
        if members.len() >= 2 && d2 <= nine_r2 {
            return None;
        }
        if outer2.as_ref().is_none_or(|o| d2 < *o) {
            outer2 = Some(d2);
        }
    }
    let ssc = members.len() >= 2 && is_ssc(&radius2, outer2.as_ref(), n);
    Some(ClusterNode {
        members,
        center,
        radius2,
        outer2,
        ssc,
        parent: None,
        children: Vec::new(),
    })
}

/// All clusters of a conjugate-closed root set, arranged by inclusion.
pub fn cluster_tree(roots: &RootSet) -> Result<ClusterTree> {
    let pts = roots.points();
    let n = pts.len();
    if n > ORACLE_MAX_ROOTS {
        return Err(Error::OracleScale(n, ORACLE_MAX_ROOTS));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty root set".into()));
    }
    // conjugation classes: a real root, or a pair
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if p.is_real() {
            classes.push(vec![i]);
        } else if p.im.is_positive() {
            let j = pts.iter().position(|q| *q == p.conj()).expect("closed set");
            classes.push(vec![i.min(j), i.max(j)]);
        }
    }
    let mut nodes: Vec<ClusterNode> = Vec::new();
    for mask in 1u32..(1u32 << classes.len()) {
        let mut members: Vec<usize> = (0..classes.len())
            .filter(|c| mask >> c & 1 == 1)
            .flat_map(|c| classes[c].iter().copied())
            .collect();
        if members.len() < 2 {
            continue;
        }
        members.sort_unstable();
        if let Some(node) = node_for(pts, members, n) {
            nodes.push(node);
        }
    }
    for i in 0..n {
        nodes.push(node_for(pts, vec![i], n).expect("singleton"));
    }
    // laminarity
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let (x, y) = (&nodes[a].members, &nodes[b].members);
            let meet = x.iter().filter(|i| y.binary_search(i).is_ok()).count();
            if meet != 0 && meet != x.len() && meet != y.len() {
                return Err(Error::InvalidArgument("clusters are not laminar".into()));
            }
        }
    }
    nodes.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.members.cmp(&b.members)));
    if n >= 2 && nodes[0].size() != n {
        return Err(Error::InvalidArgument("full root set is not a cluster".into()));
    }
    for c in 1..nodes.len() {
        let parent = (0..c)
            .rev()
            .find(|&p| {
                nodes[p].size() > nodes[c].size()
                    && nodes[c].members.iter().all(|i| nodes[p].members.binary_search(i).is_ok())
            })
            .expect("contained in the full set");
        nodes[c].parent = Some(parent);
        nodes[parent].children.push(c);
    }
    Ok(ClusterTree {
        nodes,
        root: 0,
        degree: n,
    })
}
