//! Subdivision drivers: plain bisection and the Newton-accelerated variant.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::intpoly::IntPoly;
use crate::newton::{newton_incl_exc_cached, DiagramCache, NewtonOutcome};
use crate::poly::Polynomial;
use crate::predicates::{make_predicate, Predicate, PredicateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Excluded,
    /// Exactly one root in the open interior.
    Isolating,
    /// A dyadic point that is itself a root.
    ExactRoot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionEntry {
    pub interval: Interval,
    pub tag: Tag,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub j: Interval,
    pub k: usize,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalKind {
    /// Part of a queued interval inside an exclusion disc but outside its `J`.
    Annulus,
    /// Interval whose cluster interval misses the current region.
    OutsideRegion,
    /// Interval whose cluster was already collected.
    Duplicate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub interval: Interval,
    pub kind: RemovalKind,
}

/// Output of a driver. Entries are sorted and pairwise interior-disjoint; the
/// part of `i0` they leave uncovered contains no real root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootPartition {
    pub i0: Interval,
    pub entries: Vec<PartitionEntry>,
    pub phi: Vec<PhiEntry>,
    pub removed: Vec<Removal>,
}

impl RootPartition {
    /// Isolating intervals and exact roots, in ascending order.
    pub fn isolating(&self) -> impl Iterator<Item = &PartitionEntry> {
        self.entries.iter().filter(|e| e.tag != Tag::Excluded)
    }

    pub fn root_count(&self) -> usize {
        self.isolating().count()
    }

    /// Whether no two entries share interior points.
    pub fn is_interior_disjoint(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[0].interval.hi() <= w[1].interval.lo() || w[0].interval.is_point() || w[1].interval.is_point())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationStats {
    pub tree_nodes: u64,
    pub tree_leaves: u64,
    pub subdivisions: u64,
    pub predicate_calls: BTreeMap<String, u64>,
    pub newton_calls: u64,
    pub newton_successes: u64,
    pub newton_iterations_total: u64,
    pub phi_accepted: u64,
    pub phi_duplicates: u64,
    pub phi_outside: u64,
    pub dedup_fallbacks: u64,
    pub trim_splits: u64,
    pub recursion_depth: u64,
    pub max_queue: u64,
    pub exact_roots: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Plain,
    Newton,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Plain => "plain",
            Method::Newton => "newton",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Method::Plain),
            "newton" => Ok(Method::Newton),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueueOrder {
    #[default]
    Fifo,
    Dfs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsolateOptions {
    pub predicate: PredicateKind,
    pub order: QueueOrder,
    pub auto_squarefree: bool,
}

impl Default for IsolateOptions {
    fn default() -> Self {
        IsolateOptions {
            predicate: PredicateKind::Descartes,
            order: QueueOrder::Fifo,
            auto_squarefree: false,
        }
    }
}

impl IsolateOptions {
    pub fn with_predicate(predicate: PredicateKind) -> Self {
        IsolateOptions {
            predicate,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isolation {
    pub polynomial: Polynomial,
    pub method: Method,
    pub predicate: PredicateKind,
    pub partition: RootPartition,
    pub stats: IsolationStats,
}

pub fn isolate(f: &Polynomial, i0: &Interval, method: Method, opts: &IsolateOptions) -> Result<Isolation> {
    match method {
        Method::Plain => isolate_plain(f, i0, opts),
        Method::Newton => isolate_newton(f, i0, opts),
    }
}

/// Bisection with the chosen predicate until every piece is excluded or isolating.
pub fn isolate_plain(f: &Polynomial, i0: &Interval, opts: &IsolateOptions) -> Result<Isolation> {
    let f = prepare(f, opts)?;
    let mut run = Run::new(&f, i0, opts);
    let mut queue = VecDeque::new();
    run.push_root(&mut queue, i0.clone());
    while let Some(i) = run.pop(&mut queue) {
        if run.apply_predicate(&i, 0) {
            continue;
        }
        run.subdivide(&mut queue, &i);
    }
    Ok(run.finish(Method::Plain))
}

/// Bisection interleaved with cluster detection; detected clusters are
/// carved out of the queue and isolated recursively.
pub fn isolate_newton(f: &Polynomial, i0: &Interval, opts: &IsolateOptions) -> Result<Isolation> {
    let f = prepare(f, opts)?;
    let mut run = Run::new(&f, i0, opts);
    run.newton_level(i0.clone(), 0, false);
    Ok(run.finish(Method::Newton))
}

/// The isolating intervals (and exact roots) of a partition.
pub fn partition_to_isolating(f: &Polynomial, partition: &RootPartition) -> Vec<Interval> {
    let p = f.to_int_poly();
    partition
        .isolating()
        .filter(|e| match e.tag {
            Tag::ExactRoot => p.sign_at(e.interval.lo()) == 0,
            _ => true,
        })
        .map(|e| e.interval.clone())
        .collect()
}

/// `interval` minus the open interval `(center - radius, center + radius)`;
/// degenerate leftovers are dropped.
pub fn subtract_disc_trace(interval: &Interval, center: &Dyadic, radius: &Dyadic) -> Vec<Interval> {
    let cut_lo = center - radius;
    let cut_hi = center + radius;
    if interval.hi() <= &cut_lo || interval.lo() >= &cut_hi {
        return vec![interval.clone()];
    }
    let mut out = Vec::with_capacity(2);
    if interval.lo() < &cut_lo {
        out.push(Interval::new(interval.lo().clone(), cut_lo).unwrap());
    }
    if interval.hi() > &cut_hi {
        out.push(Interval::new(cut_hi, interval.hi().clone()).unwrap());
    }
    out
}

fn prepare(f: &Polynomial, opts: &IsolateOptions) -> Result<Polynomial> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    if f.is_square_free() {
        Ok(f.clone())
    } else if opts.auto_squarefree {
        Ok(f.square_free_part())
    } else {
        Err(Error::NonSquareFree)
    }
}

struct Run<'a> {
    f: &'a Polynomial,
    p: IntPoly,
    i0: Interval,
    order: QueueOrder,
    predicate: Box<dyn Predicate>,
    cache: Option<DiagramCache>,
    entries: Vec<PartitionEntry>,
    phi: Vec<PhiEntry>,
    removed: Vec<Removal>,
    roots: BTreeSet<Dyadic>,
    touched: HashSet<Dyadic>,
    stats: IsolationStats,
}

struct LocalCluster {
    j: Interval,
    k: usize,
    exclusion: Interval,
}

impl<'a> Run<'a> {
    fn new(f: &'a Polynomial, i0: &Interval, opts: &IsolateOptions) -> Self {
        Run {
            f,
            p: f.to_int_poly(),
            i0: i0.clone(),
            order: opts.order,
            predicate: make_predicate(opts.predicate, f),
            cache: None,
            entries: Vec::new(),
            phi: Vec::new(),
            removed: Vec::new(),
            roots: BTreeSet::new(),
            touched: HashSet::new(),
            stats: IsolationStats::default(),
        }
    }

    fn touch(&mut self, x: &Dyadic) {
        if self.touched.insert(x.clone()) && self.p.sign_at(x) == 0 {
            self.roots.insert(x.clone());
        }
    }

    fn enqueue(&mut self, queue: &mut VecDeque<Interval>, i: Interval) {
        self.touch(i.lo());
        self.touch(i.hi());
        if !i.is_point() {
            queue.push_back(i);
        }
        self.stats.max_queue = self.stats.max_queue.max(queue.len() as u64);
    }

    fn push_root(&mut self, queue: &mut VecDeque<Interval>, i: Interval) {
        self.stats.tree_nodes += 1;
        if i.is_point() {
            self.stats.tree_leaves += 1;
        }
        self.enqueue(queue, i);
    }

    fn pop(&self, queue: &mut VecDeque<Interval>) -> Option<Interval> {
        match self.order {
            QueueOrder::Fifo => queue.pop_front(),
            QueueOrder::Dfs => queue.pop_back(),
        }
    }

    fn subdivide(&mut self, queue: &mut VecDeque<Interval>, i: &Interval) {
        let (l, r) = i.bisect();
        self.stats.subdivisions += 1;
        self.stats.tree_nodes += 2;
        match self.order {
            QueueOrder::Fifo => {
                self.enqueue(queue, l);
                self.enqueue(queue, r);
            }
            QueueOrder::Dfs => {
                self.enqueue(queue, r);
                self.enqueue(queue, l);
            }
        }
    }

    /// Runs the predicate; records and returns true when it settles `i`.
    fn apply_predicate(&mut self, i: &Interval, depth: usize) -> bool {
        let out = self.predicate.test(i);
        *self
            .stats
            .predicate_calls
            .entry(self.predicate.kind().name().to_string())
            .or_default() += 1;
        let tag = if out.c0 {
            Tag::Excluded
        } else if out.c1 {
            Tag::Isolating
        } else {
            return false;
        };
        self.stats.tree_leaves += 1;
        self.entries.push(PartitionEntry {
            interval: i.clone(),
            tag,
            depth,
        });
        true
    }

    fn newton_level(&mut self, region: Interval, depth: usize, forced: bool) {
        self.stats.recursion_depth = self.stats.recursion_depth.max(depth as u64);
        if self.cache.is_none() {
            self.cache = Some(DiagramCache::new(self.f));
        }
        let mut queue = VecDeque::new();
        self.push_root(&mut queue, region.clone());
        if forced && !region.is_point() {
            queue.clear();
            self.subdivide(&mut queue, &region);
        }
        let level_start = self.entries.len();
        let mut clusters: Vec<LocalCluster> = Vec::new();

        while let Some(i) = self.pop(&mut queue) {
            if self.apply_predicate(&i, depth) {
                continue;
            }
            self.stats.newton_calls += 1;
            let out = newton_incl_exc_cached(self.cache.as_ref().unwrap(), &i);
            self.stats.newton_iterations_total += out.iterations() as u64;
            let NewtonOutcome::Success(s) = out else {
                self.subdivide(&mut queue, &i);
                continue;
            };
            self.stats.newton_successes += 1;

            let Some(clipped) = s.j.intersect(&region) else {
                self.stats.phi_outside += 1;
                self.stats.tree_leaves += 1;
                self.removed.push(Removal {
                    interval: i,
                    kind: RemovalKind::OutsideRegion,
                });
                continue;
            };
            let exclusion = Interval::around(&s.final_point, &s.exclusion_radius);
            let mut clash = false;
            let mut duplicate = false;
            for c in clusters.iter().filter(|c| c.j.intersects(&s.j)) {
                clash = true;
                if c.k == s.k && (c.exclusion.contains_interval(&s.j) || exclusion.contains_interval(&c.j)) {
                    duplicate = true;
                }
            }
            if duplicate {
                self.stats.phi_duplicates += 1;
                self.stats.tree_leaves += 1;
                self.removed.push(Removal {
                    interval: i,
                    kind: RemovalKind::Duplicate,
                });
                continue;
            }
            if clash {
                self.stats.dedup_fallbacks += 1;
                self.subdivide(&mut queue, &i);
                continue;
            }

            self.stats.tree_leaves += 1;
            let old: Vec<Interval> = queue.drain(..).collect();
            for q in old {
                let pieces = subtract_disc_trace(&q, &s.final_point, &s.exclusion_radius);
                if pieces.len() == 1 && pieces[0] == q {
                    queue.push_back(q);
                    continue;
                }
                self.record_annulus(&q, &exclusion, &s.j);
                match pieces.len() {
                    0 => self.stats.tree_leaves += 1,
                    2 => {
                        self.stats.trim_splits += 1;
                        self.stats.tree_nodes += 1;
                    }
                    _ => {}
                }
                for piece in pieces {
                    self.enqueue(&mut queue, piece);
                }
            }
            self.stats.phi_accepted += 1;
            self.phi.push(PhiEntry {
                j: clipped.clone(),
                k: s.k,
                depth,
            });
            clusters.push(LocalCluster {
                j: s.j.clone(),
                k: s.k,
                exclusion,
            });
        }

        let settled: Vec<Interval> = self.entries[level_start..]
            .iter()
            .map(|e| e.interval.clone())
            .collect();
        for c in clusters {
            let Some(clipped) = c.j.intersect(&region) else {
                continue;
            };
            let mut pieces = vec![clipped];
            for s in &settled {
                pieces = pieces
                    .into_iter()
                    .flat_map(|p| subtract_closed_interior(&p, s))
                    .collect();
            }
            for piece in pieces {
                self.touch(piece.lo());
                self.touch(piece.hi());
                if !piece.is_point() {
                    self.newton_level(piece, depth + 1, true);
                }
            }
        }
    }

    fn record_annulus(&mut self, q: &Interval, exclusion: &Interval, j: &Interval) {
        let Some(cut) = q.intersect(exclusion) else {
            return;
        };
        for piece in subtract_closed_interior(&cut, j) {
            if !piece.is_point() {
                self.removed.push(Removal {
                    interval: piece,
                    kind: RemovalKind::Annulus,
                });
            }
        }
    }

    fn finish(mut self, method: Method) -> Isolation {
        for r in &self.roots {
            self.entries.push(PartitionEntry {
                interval: Interval::point(r.clone()),
                tag: Tag::ExactRoot,
                depth: 0,
            });
        }
        self.stats.exact_roots = self.roots.len() as u64;
        self.entries
            .sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()).then(a.interval.hi().cmp(b.interval.hi())));
        self.phi.sort_by(|a, b| a.j.lo().cmp(b.j.lo()));
        Isolation {
            polynomial: self.f.clone(),
            method,
            predicate: self.predicate.kind(),
            partition: RootPartition {
                i0: self.i0,
                entries: self.entries,
                phi: self.phi,
                removed: self.removed,
            },
            stats: self.stats,
        }
    }
}

/// `a` minus the interior of `b`, as closed pieces of positive width or the
/// unchanged `a` when the interiors do not meet.
fn subtract_closed_interior(a: &Interval, b: &Interval) -> Vec<Interval> {
    if !a.overlaps_open(b) {
        return vec![a.clone()];
    }
    let mut out = Vec::with_capacity(2);
    if a.lo() < b.lo() {
        out.push(Interval::new(a.lo().clone(), b.lo().clone()).unwrap());
    }
    if a.hi() > b.hi() {
        out.push(Interval::new(b.hi().clone(), a.hi().clone()).unwrap());
    }
    out
}
