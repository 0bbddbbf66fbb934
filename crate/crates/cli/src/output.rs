use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use rootiso::diagram::DiagramDump;
use rootiso::isolator::{IsolationStats, PartitionEntry, RootPartition, Tag};
use rootiso::number::pretty;
use rootiso::{Dyadic, Interval, Isolation, Method, Polynomial, PredicateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

pub fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dy(d: &Dyadic) -> String {
    pretty(&d.to_rational())
}

#[derive(Serialize)]
struct IsolationReport<'a> {
    polynomial: &'a Polynomial,
    interval: &'a Interval,
    method: Method,
    predicate: PredicateKind,
    root_count: usize,
    roots: Vec<&'a PartitionEntry>,
    partition: &'a RootPartition,
    stats: &'a IsolationStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagram: Option<&'a DiagramDump>,
}

pub fn isolation(run: &Isolation, i0: &Interval, diagram: Option<&DiagramDump>, format: Format) -> String {
    let roots: Vec<&PartitionEntry> = run.partition.isolating().collect();
    match format {
        Format::Json => json(&IsolationReport {
            polynomial: &run.polynomial,
            interval: i0,
            method: run.method,
            predicate: run.predicate,
            root_count: run.partition.root_count(),
            roots,
            partition: &run.partition,
            stats: &run.stats,
            diagram,
        }),
        Format::Csv => {
            let mut s = String::from("lo,hi,tag,depth\n");
            for e in &run.partition.entries {
                let tag = match e.tag {
                    Tag::Excluded => "excluded",
                    Tag::Isolating => "isolating",
                    Tag::ExactRoot => "exact_root",
                };
                writeln!(s, "{},{},{tag},{}", e.interval.lo(), e.interval.hi(), e.depth).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "polynomial: {}", run.polynomial).unwrap();
            writeln!(s, "interval: [{}, {}]", dy(i0.lo()), dy(i0.hi())).unwrap();
            writeln!(s, "method: {}, predicate: {}", run.method, run.predicate).unwrap();
            writeln!(s, "roots: {}", run.partition.root_count()).unwrap();
            for e in &roots {
                match e.tag {
                    Tag::ExactRoot => writeln!(s, "  x = {}", dy(e.interval.lo())).unwrap(),
                    _ => writeln!(s, "  ({}, {})", dy(e.interval.lo()), dy(e.interval.hi())).unwrap(),
                }
            }
            let st = &run.stats;
            writeln!(
                s,
                "tree: {} nodes, {} leaves, {} subdivisions",
                st.tree_nodes, st.tree_leaves, st.subdivisions
            )
            .unwrap();
            writeln!(
                s,
                "newton: {} calls, {} successes, {} iterations",
                st.newton_calls, st.newton_successes, st.newton_iterations_total
            )
            .unwrap();
            let calls: Vec<String> = st.predicate_calls.iter().map(|(k, v)| format!("{k} {v}")).collect();
            writeln!(s, "predicate calls: {}", calls.join(", ")).unwrap();
            if let Some(d) = diagram {
                s.push_str(&diagram_text(d));
            }
            s
        }
    }
}

fn diagram_text(d: &DiagramDump) -> String {
    let mut s = String::new();
    writeln!(s, "diagram at {} (degree {})", dy(&d.point), d.degree).unwrap();
    writeln!(s, "hull: {:?}", d.hull_indices).unwrap();
    for r in &d.rho {
        writeln!(s, "  rho_{}: [{}, {}]", r.k, r.lo, r.hi).unwrap();
    }
    for a in &d.admissible {
        writeln!(
            s,
            "  admissible k = {}: inclusion <= {}, exclusion >= {}",
            a.k,
            dy(&a.inclusion_radius_hi),
            dy(&a.exclusion_radius_lo)
        )
        .unwrap();
    }
    s
}

pub fn diagram(d: &DiagramDump, format: Format) -> String {
    match format {
        Format::Json => json(d),
        Format::Text => diagram_text(d),
        Format::Csv => {
            let mut s = String::from("k,hull,rho_lo,rho_hi\n");
            for r in &d.rho {
                writeln!(s, "{},{},{},{}", r.k, d.hull_indices.contains(&r.k), r.lo, r.hi).unwrap();
            }
            s
        }
    }
}
