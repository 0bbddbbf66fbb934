//! Bottom-up separation tree of a dense point set.

use serde::Serialize;

use super::roots::RootSet;
use crate::error::{Error, Result};

/// Largest point set accepted by the density test.
pub const DENSE_MAX_POINTS: usize = 20;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct SeparationNode {
    /// Indices of the points in `G_u`.
    pub members: Vec<usize>,
    /// Merge threshold; for a leaf, distance to its nearest neighbour.
    pub sigma: f64,
    pub center: (f64, f64),
    pub radius: f64,
    /// Node ids of the children; empty for leaves.
    pub children: Vec<usize>,
}

impl SeparationNode {
    pub fn nu(&self) -> usize {
        self.children.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Leaves are nodes `0..n`, in point order; the root is the last node.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationTree {
    pub points: Vec<(f64, f64)>,
    pub nodes: Vec<SeparationNode>,
    /// Number of components merged at each round.
    pub merges_per_level: Vec<usize>,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn disc(points: &[(f64, f64)], members: &[usize]) -> ((f64, f64), f64) {
    let k = members.len() as f64;
    let c = members
        .iter()
        .fold((0.0, 0.0), |a, &i| (a.0 + points[i].0 / k, a.1 + points[i].1 / k));
    let r = members.iter().map(|&i| dist(points[i], c)).fold(0.0, f64::max);
    (c, r)
}

/// Every subset `S` with `2 <= |S| < |P|` has a point of `P \ S` in `3 D_S`.
pub fn is_dense(points: &RootSet) -> bool {
    dense_violation(&points.to_f64()).is_none()
}

fn dense_violation(p: &[(f64, f64)]) -> Option<Vec<usize>> {
    let n = p.len();
    assert!(n <= DENSE_MAX_POINTS, "density test is exponential");
    for mask in 1u32..(1u32 << n) - 1 {
        if mask.count_ones() < 2 {
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let (c, r) = disc(p, &s);
        let hit = (0..n).any(|q| mask >> q & 1 == 0 && dist(p[q], c) <= 3.0 * r * (1.0 + TOL));
        if !hit {
            return Some(s);
        }
    }
    None
}

pub fn build_separation_tree(points: &RootSet) -> Result<SeparationTree> {
    let p = points.to_f64();
    let n = p.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if n > DENSE_MAX_POINTS {
        return Err(Error::OracleScale(n, DENSE_MAX_POINTS));
    }
    if dense_violation(&p).is_some() {
        return Err(Error::NotDense);
    }
    let mut nodes: Vec<SeparationNode> = (0..n)
        .map(|i| SeparationNode {
            members: vec![i],
            sigma: (0..n).filter(|&j| j != i).map(|j| dist(p[i], p[j])).fold(f64::INFINITY, f64::min),
            center: p[i],
            radius: 0.0,
            children: Vec::new(),
        })
        .collect();
    // current components as node ids
    let mut comps: Vec<usize> = (0..n).collect();
    let mut merges_per_level = Vec::new();
    while comps.len() > 1 {
        let mut owner = vec![0usize; n];
        for (c, &id) in comps.iter().enumerate() {
            for &i in &nodes[id].members {
                owner[i] = c;
            }
        }
        let mut sigma = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                if owner[i] != owner[j] {
                    sigma = sigma.min(dist(p[i], p[j]));
                }
            }
        }
        // union components whose sigma/2 discs touch
        let mut uf: Vec<usize> = (0..comps.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if owner[i] != owner[j] && dist(p[i], p[j]) <= sigma * (1.0 + TOL) {
                    let (a, b) = (find(&mut uf, owner[i]), find(&mut uf, owner[j]));
                    uf[a] = b;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        for c in 0..comps.len() {
            let r = find(&mut uf, c);
            groups[r].push(comps[c]);
        }
        let mut next = Vec::new();
        let mut merged = 0;
        for g in groups.into_iter().filter(|g| !g.is_empty()) {
            if g.len() == 1 {
                next.push(g[0]);
                continue;
            }
            merged += g.len();
            let mut members: Vec<usize> = g.iter().flat_map(|&id| nodes[id].members.clone()).collect();
            members.sort_unstable();
            let (center, radius) = disc(&p, &members);
            nodes.push(SeparationNode {
                members,
                sigma,
                center,
                radius,
                children: g,
            });
            next.push(nodes.len() - 1);
        }
        merges_per_level.push(merged);
        comps = next;
    }
    Ok(SeparationTree {
        points: p,
        nodes,
        merges_per_level,
    })
}

impl SeparationTree {
    pub fn root(&self) -> &SeparationNode {
        self.nodes.last().expect("nonempty")
    }

    pub fn separation(&self, members: &[usize]) -> f64 {
        let n = self.points.len();
        let mut best = f64::INFINITY;
        for &i in members {
            for q in (0..n).filter(|q| !members.contains(q)) {
                best = best.min(dist(self.points[i], self.points[q]));
            }
        }
        best
    }

    /// Distance from the center of `node` to the nearest point outside it.
    pub fn center_gap(&self, node: usize) -> f64 {
        let v = &self.nodes[node];
        (0..self.points.len())
            .filter(|q| !v.members.contains(q))
            .map(|q| dist(v.center, self.points[q]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Failed properties P1 to P5, described.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.points.len();
        for (id, u) in self.nodes.iter().enumerate().filter(|(_, u)| !u.is_leaf()) {
            for &v in &u.children {
                let child = &self.nodes[v];
                let sep = self.separation(&child.members);
                if u.sigma > sep * (1.0 + TOL) {
                    out.push(format!("P1 lower at node {id}, child {v}"));
                }
                if !child.is_leaf() && sep > 3.0 * child.radius * (1.0 + TOL) {
                    out.push(format!("P1 upper at node {id}, child {v}"));
                }
                if child.is_leaf() && (u.sigma - child.sigma).abs() > TOL * u.sigma {
                    out.push(format!("P3 at node {id}, leaf {v}"));
                }
            }
            if u.radius > u.members.len() as f64 * u.sigma * (1.0 + TOL) {
                out.push(format!("P2 at node {id}"));
            }
        }
        if self.merges_per_level.iter().any(|&m| m < 2) {
            out.push("P4: a level without merges".into());
        }
        if self.root().members.len() != n {
            out.push("P5: root is not the whole set".into());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn reals(xs: &[i64]) -> RootSet {
        RootSet::from_reals(&xs.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn four_points() {
        let t = build_separation_tree(&reals(&[0, 1, 2, 4])).unwrap();
        assert_eq!(t.nodes.len(), 6);
        let inner = &t.nodes[4];
        assert_eq!(inner.members, vec![0, 1, 2]);
        assert_eq!(inner.sigma, 1.0);
        let root = t.root();
        assert_eq!(root.sigma, 2.0);
        assert_eq!(root.children, vec![4, 3]);
        assert!(t.violations().is_empty());
    }

    #[test]
    fn two_points() {
        let t = build_separation_tree(&reals(&[0, 1])).unwrap();
        assert_eq!(t.root().children, vec![0, 1]);
        assert_eq!(t.root().sigma, 1.0);
    }

    #[test]
    fn sparse_input_rejected() {
        assert!(matches!(build_separation_tree(&reals(&[0, 1, 2, 10])), Err(Error::NotDense)));
    }

    #[test]
    fn pair_with_distant_third_point() {
        let s = RootSet::from_parts(&[int(3)], &[(int(0), int(1))]).unwrap();
        let t = build_separation_tree(&s).unwrap();
        let pair = t.root().children.iter().copied().find(|&v| !t.nodes[v].is_leaf()).unwrap();
        assert_eq!(t.nodes[pair].radius, 1.0);
        assert_eq!(t.center_gap(pair), 3.0);
        assert!((t.separation(&t.nodes[pair].members) - 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(t.violations(), vec![format!("P1 upper at node {}, child {pair}", t.nodes.len() - 1)]);
    }
}
