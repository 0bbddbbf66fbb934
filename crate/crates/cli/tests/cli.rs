use std::process::{Command, Output};

use rootiso::isolator::{PartitionEntry, Tag};
use rootiso::{isolate_newton, Interval, IsolateOptions, Polynomial};
use serde_json::Value;

fn rootiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootiso"))
        .args(args)
        .env_remove("ROOTISO_MAX_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = rootiso(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn isolates_cubic_with_known_roots() {
    let v = json(&["isolate", "--coeffs", "-6,11,-6,1", "--interval", "0,4", "--method", "newton"]);
    assert_eq!(v["root_count"], 3);
    let roots: Vec<PartitionEntry> = serde_json::from_value(v["roots"].clone()).unwrap();
    let f = Polynomial::from_i64(&[-6, 11, -6, 1]);
    for x in [1, 2, 3] {
        let x = x.into();
        let hits = roots
            .iter()
            .filter(|e| match e.tag {
                Tag::ExactRoot => e.interval.lo() == &x,
                _ => e.interval.lo() < &x && &x < e.interval.hi(),
            })
            .count();
        assert_eq!(hits, 1);
    }
    assert!(v["stats"]["tree_leaves"].as_u64().unwrap() >= 2);
    let lib = isolate_newton(&f, &Interval::from_ints(0, 4), &IsolateOptions::default()).unwrap();
    let want: Vec<&PartitionEntry> = lib.partition.isolating().collect();
    assert_eq!(roots.iter().collect::<Vec<_>>(), want);
}

#[test]
fn no_real_roots_is_success() {
    let v = json(&["isolate", "--coeffs", "1,0,1"]);
    assert_eq!(v["root_count"], 0);
    assert_eq!(v["roots"].as_array().unwrap().len(), 0);
}

#[test]
fn exit_codes() {
    let o = rootiso(&["isolate", "--coeffs", "1,-2,1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--auto-squarefree"));
    assert_eq!(rootiso(&["isolate", "--coeffs", "1,1"]).status.code(), Some(4));
    assert_eq!(rootiso(&["isolate", "--coeffs", "1,0.5,1"]).status.code(), Some(2));
    assert_eq!(rootiso(&["isolate", "--coeffs", "1,0,1", "--interval", "3"]).status.code(), Some(2));
    assert_eq!(rootiso(&["bench", "hermite"]).status.code(), Some(2));
    assert_eq!(rootiso(&["isolate"]).status.code(), Some(2));
}

#[test]
fn auto_squarefree_drops_repeated_factor() {
    let v = json(&["isolate", "--coeffs", "1,-2,1", "--auto-squarefree"]);
    assert_eq!(v["root_count"], 1);
}

#[test]
fn exact_input_forms() {
    // 4 (x - 1/2)(x + 3/4) written with fractions and scaled integers
    let v = json(&["isolate", "--coeffs", "-3/2,1*2^0,4", "--interval", "-1,1", "--output", "json"]);
    assert_eq!(v["root_count"], 2);
    let path = std::env::temp_dir().join(format!("rootiso-cli-{}.txt", std::process::id()));
    std::fs::write(&path, "-6 11\n-6 1\n").unwrap();
    let w = json(&["isolate", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(w["root_count"], 3);
}

#[test]
fn text_and_csv_outputs() {
    let o = rootiso(&["isolate", "--coeffs", "-2,0,1", "--interval", "1,3/2", "--method", "plain", "--output", "text"]);
    let s = stdout(&o);
    assert!(s.contains("roots: 1"));
    assert!(s.contains("3/2 (~1.500000e0)"));
    let o = rootiso(&["isolate", "--coeffs", "-2,0,1", "--output", "csv", "--predicate", "sturm"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.iter().filter(|r| r[2] == "isolating").count(), 2);
}

#[test]
fn dump_diagram_flag() {
    let v = json(&["isolate", "--coeffs", "-6,11,-6,1", "--dump-diagram"]);
    assert_eq!(v["diagram"]["degree"], 3);
    let d = json(&["diagram", "--coeffs", "1*2^-20,-1*2^-40,-1048576,1", "--at", "0"]);
    assert_eq!(d["hull_indices"], serde_json::json!([0, 2, 3]));
    assert_eq!(d["admissible"][0]["k"], 2);
}

#[test]
fn bench_row_counts() {
    let o = rootiso(&["bench", "mignotte", "--n", "4", "--L", "8"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][5].as_str(), rows[1][5].as_str()), ("plain", "newton"));
    let o = rootiso(&["bench", "mignotte", "--n", "16", "--L", "16,32,64,128", "--methods", "plain,newton"]);
    assert_eq!(csv_rows(&o).len(), 8);
    let o = rootiso(&["bench", "nested", "--depth", "3"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[0] == "nested" && r[1] == "8" && !r[11].is_empty()));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["bench", "roots", "--n", "5,7", "--seeds", "3", "--seed", "11", "--output", "json"];
    let a = rootiso(&args);
    let b = rootiso(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["isolate", "--generate", "random:12:20", "--seed", "5", "--dump-diagram"];
    assert_eq!(rootiso(&args).stdout, rootiso(&args).stdout);
}

#[test]
fn cluster_tree_report() {
    let v = json(&["cluster-tree", "--reals", "-1*2^-20,1*2^-20,1048576", "--interval", "-2097152,2097152"]);
    assert_eq!(v["degree"], 3);
    let pair = v["nodes"].as_array().unwrap().iter().find(|c| c["members"].as_array().unwrap().len() == 2).unwrap();
    assert_eq!(pair["ssc"], true);
    assert_eq!(v["ssc_annuli"].as_array().unwrap().len(), 2);
    assert!(v["charge"]["leaf_bound"].as_f64().unwrap() > 12.0);
    let c = json(&["cluster-tree", "--pairs", "0:1"]);
    assert_eq!(c["nodes"].as_array().unwrap().len(), 3);
}
