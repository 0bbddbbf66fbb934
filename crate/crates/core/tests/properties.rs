use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use rootiso::diagram::build_diagram;
use rootiso::number::{int, mul_pow2, rat, Rational};
use rootiso::oracle::cluster_tree::cluster_tree;
use rootiso::oracle::generators::{random_dense_points, random_roots, separated_cluster};
use rootiso::oracle::stopping::charge_integral;
use rootiso::oracle::{build_separation_tree, Point, RootSet};
use rootiso::predicates::{descartes_count, eval_test, SturmSequence};
use rootiso::radical::{Radical, Rho};
use rootiso::{isolate_newton, isolate_plain, Dyadic, Interval, IsolateOptions, Polynomial};

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-40i64..=40, 3..9)
        .prop_filter("nonzero leading", |c| *c.last().unwrap() != 0)
        .prop_map(|c| Polynomial::from_i64(&c))
}

fn dyadic(range: i64, bits: i64) -> impl Strategy<Value = Dyadic> {
    (-range * (1 << bits)..=range * (1 << bits)).prop_map(move |m| Dyadic::new(BigInt::from(m), -bits))
}

fn interval() -> impl Strategy<Value = Interval> {
    (dyadic(6, 6), 1i64..512).prop_map(|(a, w)| {
        let b = &a + &Dyadic::new(BigInt::from(w), -6);
        Interval::new(a, b).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn taylor_shift_inverts(f in small_poly(), z in dyadic(8, 10)) {
        let back = f.taylor_shift(&z).taylor_shift(&-&z);
        prop_assert_eq!(back, f.clone());
        let x = rat(3, 7);
        prop_assert_eq!(f.taylor_shift(&z).eval(&x), f.eval(&(&x + z.to_rational())));
    }

    #[test]
    fn predicates_agree_with_sturm(f in small_poly(), i in interval()) {
        let f = f.square_free_part();
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let exact = SturmSequence::new(&f).count_open(i.lo(), i.hi());
        let v = descartes_count(&f, &i);
        prop_assert!(v >= exact && (v - exact) % 2 == 0);
        let e = eval_test(&f, &i);
        if e.c0 {
            prop_assert_eq!(exact, 0);
        }
        if e.c1 {
            prop_assert_eq!(exact, 1);
        }
    }

    #[test]
    fn both_drivers_find_every_root(f in small_poly()) {
        let f = f.square_free_part();
        prop_assume!(f.degree().unwrap_or(0) >= 2);
        let b = f.cauchy_bound();
        let i0 = Interval::new(-&b, b.clone()).unwrap();
        let want = SturmSequence::new(&f).count_open(i0.lo(), i0.hi());
        for run in [
            isolate_plain(&f, &i0, &IsolateOptions::default()).unwrap(),
            isolate_newton(&f, &i0, &IsolateOptions::default()).unwrap(),
        ] {
            prop_assert_eq!(run.partition.root_count(), want);
            prop_assert!(run.partition.is_interior_disjoint());
            prop_assert_eq!(run.stats.tree_leaves + run.stats.subdivisions, run.stats.tree_nodes);
        }
    }

    #[test]
    fn rho_is_nondecreasing(seed in 0u64..10_000, n in 2usize..9, z in dyadic(4, 8)) {
        let f = random_roots(n, seed).polynomial();
        let d = build_diagram(&f, &z).unwrap();
        for k in 1..=n {
            prop_assert_ne!(d.rho(k).exact.cmp_rho(&d.rho(k + 1).exact), Ordering::Greater);
        }
    }

    #[test]
    fn rho_brackets_root_distances(seed in 0u64..10_000, n in 2usize..9, z in dyadic(4, 8)) {
        let roots = random_roots(n, seed);
        let d = build_diagram(&roots.polynomial(), &z).unwrap();
        let mut d2: Vec<Rational> = roots.points().iter().map(|p| p.dist2_real(&z.to_rational())).collect();
        d2.sort();
        prop_assume!(d2[0] > int(0));
        for k in 1..=n {
            let Rho::Finite(r) = &d.rho(k).exact else { panic!("finite rho") };
            let up = int(4 * (k * k) as i64) * &d2[k - 1];
            let m = int(2 * (n - k + 1) as i64);
            let down = &d2[k - 1] / (&m * &m);
            prop_assert_eq!(r.cmp_radical(&Radical::new(up, 2)), Ordering::Less);
            prop_assert_eq!(r.cmp_radical(&Radical::new(down, 2)), Ordering::Greater);
        }
    }

    #[test]
    fn alpha_bounds_at_hull_vertices(seed in 0u64..10_000, n in 3usize..9, z in dyadic(4, 8)) {
        let f = random_roots(n, seed).polynomial();
        let d = build_diagram(&f, &z).unwrap();
        for &k in d.hull_indices().iter().filter(|&&k| k >= 1 && k < n) {
            let a = d.alpha_quantities(k).unwrap();
            let kb = &a.beta * int(k as i64);
            prop_assert_ne!(d.rho(k).exact.cmp_rational(&kb), Ordering::Less);
            if let (Some(g), Rho::Finite(r)) = (&a.gamma, &d.rho(k + 1).exact) {
                prop_assert_ne!(g.ratio_cmp(&r.recip(), &int(k as i64 + 1)), Ordering::Greater);
            }
        }
    }

    #[test]
    fn cluster_tree_ignores_root_order(seed in 0u64..10_000, n in 2usize..9, rot in 0usize..9) {
        let roots = random_roots(n, seed);
        let mut pts = roots.points().to_vec();
        pts.rotate_left(rot % n);
        let other = RootSet::new(pts).unwrap();
        let key = |s: &RootSet| {
            let t = cluster_tree(s).unwrap();
            let mut v: Vec<Vec<(Rational, Rational)>> = t
                .clusters()
                .map(|c| {
                    let mut m: Vec<_> = c.members.iter().map(|&i| (s.points()[i].re.clone(), s.points()[i].im.clone())).collect();
                    m.sort();
                    m
                })
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(key(&roots), key(&other));
    }

    #[test]
    fn ssc_geometry(seed in 0u64..1000, n in 3usize..12) {
        let (roots, _) = separated_cluster(n, 2, 50, seed);
        let t = cluster_tree(&roots).unwrap();
        for c in t.ssc_nodes().filter(|c| c.size() < n) {
            let outer = c.outer_half_width2(n).unwrap();
            prop_assert!(c.inner_half_width2() < outer);
            let w = int(72 * c.size() as i64);
            prop_assert!(&w * &w * &c.radius2 < outer);
            prop_assert_eq!(c.annulus_pieces(n, 40).len(), 2);
        }
    }

    #[test]
    fn separation_tree_properties(size in 2usize..10, seed in 0u64..1000) {
        let p = random_dense_points(size, seed);
        let t = build_separation_tree(&p).unwrap();
        let tol = 1.0 + 1e-9;
        prop_assert!(t.violations().iter().all(|v| v.starts_with("P1 upper")));
        for (id, v) in t.nodes.iter().enumerate().filter(|(_, v)| !v.is_leaf() && v.members.len() < p.len()) {
            prop_assert!(t.center_gap(id) <= 3.0 * v.radius * tol);
            prop_assert!(t.separation(&v.members) <= 4.0 * v.radius * tol);
        }
        prop_assert_eq!(t.root().members.len(), p.len());
    }

    #[test]
    fn integral_near_a_complex_root(re in -8i64..=8, im_exp in 0i64..20, a in -16i64..16, w in 1i64..64) {
        // int_J dx / |gamma - x| <= 2 ln(max distance / Im gamma) + 2 ln 3
        let im = mul_pow2(&int(1), -im_exp);
        let roots = RootSet::from_parts(&[], &[(int(re), im.clone())]).unwrap();
        let j = Interval::new(Dyadic::from_i64(a), Dyadic::from_i64(a + w)).unwrap();
        let q = charge_integral(&roots, &[j]).unwrap();
        let g = Point { re: int(re), im };
        let far = [a, a + w].iter().map(|&x| g.dist2_real(&int(x))).max().unwrap();
        let ratio2 = rootiso::number::to_f64(&(far / (&g.im * &g.im)));
        let bound = ratio2.ln() + 2.0 * 3f64.ln();
        prop_assert!(q.value <= bound, "{} > {}", q.value, bound);
        let b = rootiso::number::to_f64(&g.im);
        let exact = (((a + w - re) as f64) / b).asinh() - (((a - re) as f64) / b).asinh();
        prop_assert!((q.value - exact).abs() <= 1e-6 * exact, "{} vs {}", q.value, exact);
    }
}

#[test]
fn isolation_json_round_trip() {
    let f = Polynomial::from_i64(&[-2, 0, 1]).mul(&Polynomial::from_i64(&[-3, 0, 1]));
    let run = isolate_newton(&f, &Interval::from_ints(-4, 4), &IsolateOptions::default()).unwrap();
    let text = serde_json::to_string(&run).unwrap();
    let back: rootiso::Isolation = serde_json::from_str(&text).unwrap();
    assert_eq!(back, run);
}

#[test]
fn radical_helpers_cover_roots_of_two() {
    let r = Radical::new(int(2), 2);
    let (lo, hi) = r.enclose(40);
    assert!(lo < hi);
    assert_eq!(r.cmp_rational(&rat(1_414_213, 1_000_000)), Ordering::Greater);
}
