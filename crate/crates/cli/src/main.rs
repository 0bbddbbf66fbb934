//! `rootiso`: isolate real roots, run benchmark sweeps, and inspect Newton
//! diagrams and cluster trees.

mod bench;
mod input;
mod output;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rootiso::error::Error;
use rootiso::isolator::QueueOrder;
use rootiso::number::{parse_rational, pretty, Rational};
use rootiso::oracle::cluster_tree::cluster_tree;
use rootiso::oracle::stopping::{charge_integral, interval_difference};
use rootiso::oracle::RootSet;
use rootiso::{build_diagram, isolate, IsolateOptions, Method, PredicateKind};

use crate::input::{parse_dyadic, parse_interval, InputArgs, IntervalSpec};
use crate::output::Format;

const ANNULUS_BITS: u32 = 40;

#[derive(Parser)]
#[command(name = "rootiso", version, about = "Exact real root isolation for square-free polynomials")]
struct Cli {
    /// Upper limit on enclosure precision before exact comparison.
    #[arg(long, global = true, env = "ROOTISO_MAX_PRECISION_BITS")]
    max_precision_bits: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate the real roots of one polynomial.
    Isolate(IsolateArgs),
    /// Run a sweep over a generated family and print one row per instance and method.
    Bench(bench::BenchArgs),
    /// Dump the Newton diagram of a polynomial at a point.
    Diagram(DiagramArgs),
    /// Build the cluster tree of an explicit root set.
    ClusterTree(ClusterTreeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Plain,
    Newton,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Plain => Method::Plain,
            MethodArg::Newton => Method::Newton,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PredicateArg {
    Descartes,
    Sturm,
    Eval,
}

impl From<PredicateArg> for PredicateKind {
    fn from(p: PredicateArg) -> Self {
        match p {
            PredicateArg::Descartes => PredicateKind::Descartes,
            PredicateArg::Sturm => PredicateKind::Sturm,
            PredicateArg::Eval => PredicateKind::Eval,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Fifo,
    Dfs,
}

impl From<OrderArg> for QueueOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Fifo => QueueOrder::Fifo,
            OrderArg::Dfs => QueueOrder::Dfs,
        }
    }
}

#[derive(Args)]
struct IsolateArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Seed for the `random` and `roots` generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Search interval `lo,hi`, or `auto` for a Cauchy bound.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    interval: String,

    #[arg(long, value_enum, default_value = "newton")]
    method: MethodArg,

    #[arg(long, value_enum, default_value = "descartes")]
    predicate: PredicateArg,

    #[arg(long, value_enum, default_value = "fifo")]
    order: OrderArg,

    #[arg(long, value_enum, default_value = "json")]
    output: Format,

    /// Replace the input by its square-free part instead of failing.
    #[arg(long)]
    auto_squarefree: bool,

    /// Include the Newton diagram at the midpoint of the interval.
    #[arg(long)]
    dump_diagram: bool,
}

#[derive(Args)]
struct DiagramArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Seed for the `random` and `roots` generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Shift point (integer, `p/2^k`, or `m*2^e`).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    at: String,

    #[arg(long, value_enum, default_value = "json")]
    output: Format,
}

#[derive(Args)]
struct ClusterTreeArgs {
    /// Real roots, comma-separated exact numbers.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    reals: String,

    /// Conjugate pairs `re:im` (im > 0), comma-separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pairs: String,

    /// Also report the charge integral over this interval minus the ssc annuli.
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,

    #[arg(long, value_enum, default_value = "json")]
    output: Format,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::BadInterval { .. } => 2,
        Error::NonSquareFree => 3,
        Error::DegreeTooSmall(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(bits) = cli.max_precision_bits {
        std::env::set_var("ROOTISO_MAX_PRECISION_BITS", bits.to_string());
    }
    let result = match cli.command {
        Command::Isolate(a) => cmd_isolate(&a),
        Command::Bench(a) => bench::cmd_bench(&a),
        Command::Diagram(a) => cmd_diagram(&a),
        Command::ClusterTree(a) => cmd_cluster_tree(&a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e == Error::NonSquareFree {
                eprintln!("hint: pass --auto-squarefree to isolate the roots of the square-free part");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cmd_isolate(a: &IsolateArgs) -> Result<String, Error> {
    let f = a.input.polynomial(a.seed)?;
    let i0 = match parse_interval(&a.interval)? {
        IntervalSpec::Auto => input::auto_interval(&f),
        IntervalSpec::Given(i) => i,
    };
    let opts = IsolateOptions {
        predicate: a.predicate.into(),
        order: a.order.into(),
        auto_squarefree: a.auto_squarefree,
    };
    let run = isolate(&f, &i0, a.method.into(), &opts)?;
    let diagram = if a.dump_diagram {
        Some(build_diagram(&run.polynomial, &i0.midpoint())?.dump())
    } else {
        None
    };
    Ok(output::isolation(&run, &i0, diagram.as_ref(), a.output))
}

fn cmd_diagram(a: &DiagramArgs) -> Result<String, Error> {
    let f = a.input.polynomial(a.seed)?;
    let z = parse_dyadic(&a.at)?;
    let d = build_diagram(&f, &z)?;
    Ok(output::diagram(&d.dump(), a.output))
}

fn parse_roots(reals: &str, pairs: &str) -> Result<RootSet, Error> {
    let list = |s: &str| s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::to_owned).collect::<Vec<_>>();
    let xs = list(reals).iter().map(|t| parse_rational(t)).collect::<Result<Vec<Rational>, _>>()?;
    let ps = list(pairs)
        .iter()
        .map(|t| {
            let (re, im) = t
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected re:im, got {t:?}")))?;
            Ok((parse_rational(re)?, parse_rational(im)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    RootSet::from_parts(&xs, &ps)
}

#[derive(Serialize)]
struct ChargeReport {
    interval: rootiso::Interval,
    region: Vec<rootiso::Interval>,
    integral: f64,
    error: f64,
    leaf_bound: f64,
}

#[derive(Serialize)]
struct ClusterTreeReport {
    degree: usize,
    polynomial: rootiso::Polynomial,
    nodes: Vec<rootiso::oracle::cluster_tree::ClusterSummary>,
    ssc_annuli: Vec<rootiso::Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    charge: Option<ChargeReport>,
}

fn cmd_cluster_tree(a: &ClusterTreeArgs) -> Result<String, Error> {
    let roots = parse_roots(&a.reals, &a.pairs)?;
    if roots.len() < 2 {
        return Err(Error::DegreeTooSmall(roots.len()));
    }
    let tree = cluster_tree(&roots)?;
    let annuli = tree.ssc_annuli(ANNULUS_BITS);
    let charge = match &a.interval {
        None => None,
        Some(s) => {
            let i0 = match parse_interval(s)? {
                IntervalSpec::Auto => input::auto_interval(&roots.polynomial()),
                IntervalSpec::Given(i) => i,
            };
            let region = interval_difference(std::slice::from_ref(&i0), &annuli);
            let q = charge_integral(&roots, &region)?;
            Some(ChargeReport {
                leaf_bound: 4.0 * roots.len() as f64 + 2.0 * q.upper(),
                interval: i0,
                region,
                integral: q.value,
                error: q.error,
            })
        }
    };
    let report = ClusterTreeReport {
        degree: roots.len(),
        polynomial: roots.polynomial(),
        nodes: tree.summary(),
        ssc_annuli: annuli,
        charge,
    };
    Ok(match a.output {
        Format::Json => output::json(&report),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            writeln!(s, "degree: {}", report.degree).unwrap();
            for (i, c) in report.nodes.iter().enumerate().filter(|(_, c)| c.members.len() >= 2) {
                let outer = c.outer.map_or("-".to_string(), |o| format!("{o:.6e}"));
                writeln!(
                    s,
                    "cluster {i}: members {:?} center {:.6e} radius {:.6e} outer {outer}{}",
                    c.members,
                    c.center,
                    c.radius,
                    if c.ssc { " ssc" } else { "" }
                )
                .unwrap();
            }
            for i in &report.ssc_annuli {
                writeln!(s, "annulus: {} to {}", pretty(&i.lo().to_rational()), pretty(&i.hi().to_rational())).unwrap();
            }
            if let Some(c) = &report.charge {
                writeln!(s, "charge integral: {:.6} (error {:.1e}), leaf bound {:.3}", c.integral, c.error, c.leaf_bound).unwrap();
            }
            s
        }
    })
}
