use std::fmt::Write as _;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use rootiso::error::Error;
use rootiso::oracle::cluster_tree::cluster_tree;
use rootiso::oracle::generators::{chebyshev_like, mignotte, nested_clusters, random_int, random_roots};
use rootiso::oracle::stopping::{charge_integral, interval_difference};
use rootiso::oracle::RootSet;
use rootiso::{isolate, IsolateOptions, Method, Polynomial};

use crate::input::{auto_interval, parse_interval, IntervalSpec};
use crate::output::{json, Format};
use crate::{PredicateArg, ANNULUS_BITS};

#[derive(Args)]
pub struct BenchArgs {
    /// mignotte, nested, chebyshev, random, or roots.
    family: String,

    /// Degrees, comma-separated.
    #[arg(long, default_value = "16")]
    n: String,

    /// Bit sizes, comma-separated: coefficient size for mignotte and random,
    /// log2 of the scale ratio for nested.
    #[arg(long = "L", default_value = "16")]
    l: String,

    /// Nesting depths for the nested family, comma-separated.
    #[arg(long, default_value = "3")]
    depth: String,

    #[arg(long, default_value = "plain,newton")]
    methods: String,

    /// Instances per parameter setting for the random and roots families.
    #[arg(long, default_value_t = 1)]
    seeds: u64,

    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value = "descartes")]
    predicate: PredicateArg,

    /// Search interval `lo,hi`, or `auto` for a Cauchy bound per instance.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    interval: String,

    #[arg(long, value_enum, default_value = "csv")]
    output: Format,

    /// Add wall-clock time per run; output is then no longer reproducible.
    #[arg(long)]
    timings: bool,
}

struct Instance {
    n: usize,
    l: Option<u32>,
    depth: Option<usize>,
    seed: Option<u64>,
    f: Polynomial,
    roots: Option<RootSet>,
}

#[derive(Serialize)]
pub struct Row {
    family: String,
    n: usize,
    #[serde(rename = "L")]
    l: Option<u32>,
    depth: Option<usize>,
    seed: Option<u64>,
    method: Method,
    leaves: u64,
    nodes: u64,
    newton_calls: u64,
    newton_successes: u64,
    newton_iters: u64,
    /// `4n + 2 * charge integral`, when the roots are known.
    integral_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_ms: Option<f64>,
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad {what} list {s:?}"))))
        .collect()
}

fn instances(a: &BenchArgs) -> Result<Vec<Instance>, Error> {
    let ns: Vec<usize> = list(&a.n, "n")?;
    let ls: Vec<u32> = list(&a.l, "L")?;
    let seeds = a.seed..a.seed + a.seeds;
    let plain = |n, l, f| Instance {
        n,
        l,
        depth: None,
        seed: None,
        f,
        roots: None,
    };
    let mut out = Vec::new();
    match a.family.as_str() {
        "mignotte" => {
            for &n in &ns {
                for &l in &ls {
                    out.push(plain(n, Some(l), mignotte(n, l)?));
                }
            }
        }
        "chebyshev" => {
            for &n in &ns {
                out.push(plain(n, None, chebyshev_like(n)?));
            }
        }
        "random" => {
            for &n in &ns {
                for &l in &ls {
                    for s in seeds.clone() {
                        out.push(Instance {
                            seed: Some(s),
                            ..plain(n, Some(l), random_int(n, l, s)?)
                        });
                    }
                }
            }
        }
        "nested" => {
            for &d in &list::<usize>(&a.depth, "depth")? {
                for &l in &ls {
                    let (f, roots) = nested_clusters(d, l)?;
                    out.push(Instance {
                        depth: Some(d),
                        roots: Some(roots),
                        ..plain(1 << d, Some(l), f)
                    });
                }
            }
        }
        "roots" => {
            for &n in &ns {
                if n < 2 {
                    return Err(Error::InvalidArgument("roots needs n >= 2".into()));
                }
                for s in seeds.clone() {
                    let roots = random_roots(n, s);
                    out.push(Instance {
                        seed: Some(s),
                        f: roots.polynomial(),
                        roots: Some(roots),
                        ..plain(n, None, Polynomial::zero())
                    });
                }
            }
        }
        other => return Err(Error::Parse(format!("unknown family {other:?}"))),
    }
    Ok(out)
}

fn integral_bound(roots: &RootSet, i0: &rootiso::Interval) -> Option<f64> {
    let tree = cluster_tree(roots).ok()?;
    let region = interval_difference(std::slice::from_ref(i0), &tree.ssc_annuli(ANNULUS_BITS));
    let q = charge_integral(roots, &region).ok()?;
    Some(4.0 * roots.len() as f64 + 2.0 * q.upper())
}

fn run_instance(a: &BenchArgs, inst: &Instance, methods: &[Method]) -> Result<Vec<Row>, Error> {
    let i0 = match parse_interval(&a.interval)? {
        IntervalSpec::Auto => auto_interval(&inst.f),
        IntervalSpec::Given(i) => i,
    };
    let bound = inst.roots.as_ref().and_then(|r| integral_bound(r, &i0));
    let opts = IsolateOptions::with_predicate(a.predicate.into());
    methods
        .iter()
        .map(|&m| {
            let start = Instant::now();
            let run = isolate(&inst.f, &i0, m, &opts)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let st = &run.stats;
            Ok(Row {
                family: a.family.clone(),
                n: inst.n,
                l: inst.l,
                depth: inst.depth,
                seed: inst.seed,
                method: m,
                leaves: st.tree_leaves,
                nodes: st.tree_nodes,
                newton_calls: st.newton_calls,
                newton_successes: st.newton_successes,
                newton_iters: st.newton_iterations_total,
                integral_bound: bound,
                time_ms: a.timings.then_some(elapsed),
            })
        })
        .collect()
}

pub fn rows(a: &BenchArgs) -> Result<Vec<Row>, Error> {
    let methods: Vec<Method> = list(&a.methods, "method")?;
    let insts = instances(a)?;
    let per: Vec<Result<Vec<Row>, Error>> = insts.par_iter().map(|i| run_instance(a, i, &methods)).collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, |x| x.to_string())
}

pub fn cmd_bench(a: &BenchArgs) -> Result<String, Error> {
    let rows = rows(a)?;
    if a.output == Format::Json {
        return Ok(json(&rows));
    }
    let mut s = String::from("family,n,L,depth,seed,method,leaves,nodes,newton_calls,newton_successes,newton_iters,integral_bound");
    if a.timings {
        s.push_str(",time_ms");
    }
    s.push('\n');
    for r in &rows {
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.n,
            opt(&r.l),
            opt(&r.depth),
            opt(&r.seed),
            r.method,
            r.leaves,
            r.nodes,
            r.newton_calls,
            r.newton_successes,
            r.newton_iters,
            r.integral_bound.map_or_else(String::new, |b| format!("{b:.3}")),
        )
        .unwrap();
        if let Some(t) = r.time_ms {
            write!(s, ",{t:.3}").unwrap();
        }
        s.push('\n');
    }
    Ok(s)
}
