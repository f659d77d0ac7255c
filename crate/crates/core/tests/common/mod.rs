#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vandcond::knots::{make_knot_vector, KnotVector, DEFAULT_TOL};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kv(pts: &[Complex64]) -> KnotVector {
    make_knot_vector(pts, DEFAULT_TOL).unwrap()
}

/// Points in the annulus 0.5 <= |z| <= 2 with pairwise distance >= gap.
pub fn annulus_knots(rng: &mut ChaCha8Rng, count: usize, gap: f64) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::new();
    while pts.len() < count {
        let z = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
        if pts.iter().all(|p| (p - z).norm() >= gap) {
            pts.push(z);
        }
    }
    pts
}

/// Disjoint square Cauchy knot sets drawn from the annulus.
pub fn cauchy_pair(rng: &mut ChaCha8Rng, n: usize, gap: f64) -> (KnotVector, KnotVector) {
    let pts = annulus_knots(rng, 2 * n, gap);
    (kv(&pts[..n]), kv(&pts[n..]))
}

pub struct Separated {
    pub s: KnotVector,
    pub t: KnotVector,
    pub eta: f64,
    pub c: Complex64,
}

/// A random (eta, c)-separated pair: `l` points uniform in the unit disc
/// about `c`, and `m` points on circles of radius between `eta R` and
/// `2 eta R`, where `R` is the largest distance from `c` to a small point.
pub fn separated_instance(rng: &mut ChaCha8Rng, m: usize, l: usize) -> Separated {
    let centre = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let eta = rng.gen_range(1.5..3.0);
    let t: Vec<Complex64> = (0..l)
        .map(|_| centre + Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)))
        .collect();
    let big_r = t.iter().map(|p| (p - centre).norm()).fold(0.0, f64::max);
    let s: Vec<Complex64> = (0..m)
        .map(|_| {
            centre
                + Complex64::from_polar(
                    eta * big_r * rng.gen_range(1.0..2.0),
                    rng.gen_range(0.0..TAU),
                )
        })
        .collect();
    Separated {
        s: kv(&s),
        t: kv(&t),
        eta,
        c: centre,
    }
}

/// `log10 |prod_{k != i} (pts_i - pts_k)|`, computed directly.
pub fn log10_derivative(pts: &[Complex64], i: usize) -> f64 {
    pts.iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, p)| (pts[i] - p).norm().log10())
        .sum()
}
