//! Benchmark and test polynomial families.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::roots::{Point, RootSet};
use crate::error::{Error, Result};
use crate::number::{int, mul_pow2, rat, Rational};
use crate::poly::Polynomial;

/// `x^n - 2 (2^L x - 1)^2`.
pub fn mignotte(n: usize, l: u32) -> Result<Polynomial> {
    if n < 3 || l < 1 {
        return Err(Error::InvalidArgument("mignotte needs n >= 3 and L >= 1".into()));
    }
    let a = BigInt::one() << l as usize;
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::from(-2);
    c[1] = &a * BigInt::from(4);
    c[2] = -(&a * &a * BigInt::from(2));
    c[n] += 1;
    Ok(Polynomial::from_bigints(c))
}

/// Roots `sum_i s_i 2^(-ratio (i - 1))` over all sign vectors `s` of length
/// `depth`: `2^depth` real roots in nested pairs.
pub fn nested_clusters(depth: usize, ratio_log2: u32) -> Result<(Polynomial, RootSet)> {
    if !(1..=4).contains(&depth) || ratio_log2 < 2 {
        return Err(Error::InvalidArgument("nested clusters need 1 <= depth <= 4 and ratio >= 2".into()));
    }
    let mut xs = vec![Rational::zero()];
    for i in 0..depth {
        let step = mul_pow2(&int(1), -(ratio_log2 as i64) * i as i64);
        xs = xs.iter().flat_map(|x| [x - &step, x + &step]).collect();
    }
    let roots = RootSet::from_reals(&xs)?;
    Ok((roots.polynomial(), roots))
}

pub fn from_roots(roots: &RootSet) -> Polynomial {
    roots.polynomial()
}

/// Chebyshev polynomial of the first kind, `T_n`.
pub fn chebyshev_like(n: usize) -> Result<Polynomial> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    let x = Polynomial::from_i64(&[0, 1]);
    let two_x = Polynomial::from_i64(&[0, 2]);
    let (mut a, mut b) = (Polynomial::one(), x);
    for _ in 1..n {
        let c = two_x.mul(&b).sub(&a);
        a = b;
        b = c;
    }
    Ok(b)
}

/// Degree-`n` integer polynomial with coefficients uniform in
/// `(-2^L, 2^L)`, redrawn until square-free.
pub fn random_int(n: usize, l: u32, seed: u64) -> Result<Polynomial> {
    if n < 2 || !(1..=4096).contains(&l) {
        return Err(Error::InvalidArgument("need n >= 2 and 1 <= L <= 4096".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut c: Vec<BigInt> = (0..=n).map(|_| random_coeff(&mut rng, l)).collect();
        while c[n].is_zero() {
            c[n] = random_coeff(&mut rng, l);
        }
        let f = Polynomial::from_bigints(c);
        if f.is_square_free() {
            return Ok(f);
        }
    }
}

/// Uniform in `(-2^l, 2^l)` up to the negligible bias of a signed zero.
fn random_coeff(rng: &mut ChaCha8Rng, l: u32) -> BigInt {
    let words: Vec<u32> = (0..l.div_ceil(32)).map(|_| rng.gen()).collect();
    let mag = BigUint::from_slice(&words) >> (32 * l.div_ceil(32) - l) as usize;
    let v = BigInt::from(mag);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

fn dyadic_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64, bits: u32) -> Rational {
    let s = 1i64 << bits;
    rat(rng.gen_range(lo * s..=hi * s), s)
}

/// Random conjugate-closed root set of size `n` mixing well separated roots,
/// complex pairs and tight clusters.
pub fn random_roots(n: usize, seed: u64) -> RootSet {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<Point> = Vec::new();
        while pts.len() < n {
            let left = n - pts.len();
            let choice = rng.gen_range(0..4);
            let center = dyadic_in(&mut rng, -4, 4, 4);
            match choice {
                0 if left >= 2 => {
                    let im = dyadic_in(&mut rng, 1, 3, 4);
                    pts.push(Point { re: center.clone(), im: im.clone() });
                    pts.push(Point { re: center, im: -im });
                }
                1 if left >= 2 => {
                    let e = rng.gen_range(6..40);
                    let size = rng.gen_range(2..=left.min(4));
                    for j in 0..size {
                        let off = mul_pow2(&int(2 * j as i64 - size as i64 + 1), -e);
                        pts.push(Point::real(&center + off));
                    }
                }
                _ => pts.push(Point::real(center)),
            }
        }
        if let Ok(s) = RootSet::new(pts) {
            return s;
        }
    }
}

/// A root set of size `n` with a real cluster of `k` roots inside
/// `[m - 2^-e, m + 2^-e]` and every other root at distance at least `1` from `m`.
pub fn separated_cluster(n: usize, k: usize, e: u32, seed: u64) -> (RootSet, Rational) {
    assert!(2 <= k && k < n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = dyadic_in(&mut rng, -1, 1, 6);
        let mut pts: Vec<Point> = Vec::new();
        let mut offs: Vec<i64> = Vec::new();
        while offs.len() < k {
            let t = rng.gen_range(-64i64..=64);
            if !offs.contains(&t) {
                offs.push(t);
            }
        }
        for t in offs {
            pts.push(Point::real(&m + mul_pow2(&int(t), -(e as i64) - 6)));
        }
        while pts.len() < n {
            let d = dyadic_in(&mut rng, 1, 6, 3);
            let side = if rng.gen_bool(0.5) { &m + &d } else { &m - &d };
            if n - pts.len() >= 2 && rng.gen_bool(0.3) {
                let im = dyadic_in(&mut rng, 1, 3, 3);
                pts.push(Point { re: side.clone(), im: im.clone() });
                pts.push(Point { re: side, im: -im });
            } else {
                pts.push(Point::real(side));
            }
        }
        if let Ok(s) = RootSet::new(pts) {
            return (s, m);
        }
    }
}

/// Dense point set of size `size` on a jittered three-row lattice, made of
/// real points and conjugate pairs; redrawn until it passes the density test.
pub fn random_dense_points(size: usize, seed: u64) -> RootSet {
    assert!(size >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<Point> = Vec::new();
        let mut col = 0i64;
        while pts.len() < size {
            let x = int(col) + dyadic_in(&mut rng, 0, 1, 4) / int(5);
            if size - pts.len() >= 2 && rng.gen_bool(0.6) {
                let y = int(1) + dyadic_in(&mut rng, 0, 1, 4) / int(5);
                pts.push(Point { re: x.clone(), im: y.clone() });
                pts.push(Point { re: x.clone(), im: -y });
            }
            if pts.len() < size && rng.gen_bool(0.7) {
                pts.push(Point::real(x));
            }
            col += 1;
        }
        let Ok(s) = RootSet::new(pts) else { continue };
        if super::separation_tree::is_dense(&s) {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::predicates::sturm_count;

    #[test]
    fn mignotte_shape() {
        let f = mignotte(16, 16).unwrap();
        assert_eq!(f.degree(), Some(16));
        assert_eq!(f.coeff(2), -mul_pow2(&int(1), 33));
        assert!(f.is_square_free());
        let b = f.cauchy_bound();
        let i0 = Interval::new(-&b, b).unwrap();
        assert_eq!(sturm_count(&f, &i0), 4);
    }

    #[test]
    fn expansions() {
        let s = RootSet::from_reals(&[int(1), int(2), int(3)]).unwrap();
        assert_eq!(from_roots(&s), Polynomial::from_i64(&[-6, 11, -6, 1]));
        let e = mul_pow2(&int(1), -20);
        let s = RootSet::from_reals(&[e.clone(), -e.clone(), mul_pow2(&int(1), 20)]).unwrap();
        let f = from_roots(&s);
        let want = Polynomial::new(vec![e.clone(), -(&e * &e), -mul_pow2(&int(1), 20), int(1)]);
        assert_eq!(f, want);
    }

    #[test]
    fn chebyshev_roots_are_real() {
        let t = chebyshev_like(7).unwrap();
        assert_eq!(t.coeff(7), int(64));
        assert_eq!(sturm_count(&t, &Interval::from_ints(-2, 2)), 7);
    }

    #[test]
    fn random_families_are_reproducible() {
        let a = random_int(10, 8, 7).unwrap();
        assert_eq!(a, random_int(10, 8, 7).unwrap());
        assert!(a.is_square_free());
        assert_eq!(random_roots(9, 3), random_roots(9, 3));
        assert_eq!(random_roots(9, 3).len(), 9);
        let (p, s) = nested_clusters(3, 4).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(p.degree(), Some(8));
    }
}
