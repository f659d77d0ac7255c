//! Knot sequences: roots of unity, the quasi-cyclic and van der Corput
//! orderings, and the perturbed configurations used by the experiment tables.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for pairwise distinctness and knot collisions.
pub const DEFAULT_TOL: f64 = 1e-13;

/// How a knot vector was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum Provenance {
    Custom,
    Dft { n: usize },
    QuasiCyclic { n: usize },
    VanDerCorput { n: usize },
    SingleOutlier { n: usize, s_last: [f64; 2] },
    ScaledCluster { n: usize, k: usize, rho: f64 },
    File { path: String },
    Derived { from: String, op: String },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Custom => "custom",
            Provenance::Dft { .. } => "dft",
            Provenance::QuasiCyclic { .. } => "quasi-cyclic",
            Provenance::VanDerCorput { .. } => "van-der-corput",
            Provenance::SingleOutlier { .. } => "single-outlier",
            Provenance::ScaledCluster { .. } => "scaled-cluster",
            Provenance::File { .. } => "file",
            Provenance::Derived { .. } => "derived",
        }
    }
}

/// An ordered list of pairwise distinct complex knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotVector {
    knots: Vec<Complex64>,
    provenance: Provenance,
}

impl KnotVector {
    /// Validates `points` (non-empty, pairwise distinct within `tol`).
    pub fn new(points: Vec<Complex64>, provenance: Provenance, tol: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_distinct(&points, tol)?;
        Ok(KnotVector {
            knots: points,
            provenance,
        })
    }

    /// Builds without the O(n^2) distinctness scan; generators whose knots
    /// are distinct by construction use this.
    fn trusted(knots: Vec<Complex64>, provenance: Provenance) -> Self {
        debug_assert!(!knots.is_empty());
        KnotVector { knots, provenance }
    }

    pub fn knots(&self) -> &[Complex64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn label(&self) -> &'static str {
        self.provenance.label()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest knot modulus `s_+`.
    pub fn max_modulus(&self) -> f64 {
        self.knots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The first `m` knots.
    pub fn prefix(&self, m: usize) -> Result<KnotVector> {
        if m == 0 || m > self.len() {
            return Err(Error::InvalidArgument(format!(
                "prefix length {m} not in 1..={}",
                self.len()
            )));
        }
        Ok(KnotVector::trusted(
            self.knots[..m].to_vec(),
            Provenance::Derived {
                from: self.label().into(),
                op: format!("prefix({m})"),
            },
        ))
    }

    /// Every knot multiplied by `a` (distinctness is preserved for `a != 0`).
    pub fn scaled(&self, a: Complex64) -> KnotVector {
        KnotVector::trusted(
            self.knots.iter().map(|z| z * a).collect(),
            Provenance::Derived {
                from: self.label().into(),
                op: format!("scale({},{})", a.re, a.im),
            },
        )
    }

    /// Every knot shifted by `a`.
    pub fn shifted(&self, a: Complex64) -> KnotVector {
        KnotVector::trusted(
            self.knots.iter().map(|z| z + a).collect(),
            Provenance::Derived {
                from: self.label().into(),
                op: format!("shift({},{})", a.re, a.im),
            },
        )
    }

    /// Knots at the given indices, in the given order.
    pub fn select(&self, idx: &[usize]) -> Result<KnotVector> {
        let pts = idx
            .iter()
            .map(|&i| {
                self.knots
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        KnotVector::new(
            pts,
            Provenance::Derived {
                from: self.label().into(),
                op: "select".into(),
            },
            0.0,
        )
    }
}

fn check_distinct(points: &[Complex64], tol: f64) -> Result<()> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if (points[i] - points[j]).norm() <= tol {
                return Err(Error::DuplicateKnot { i, j });
            }
        }
    }
    Ok(())
}

/// `exp(2 pi sqrt(-1) num/den)`, reduced to the first octant so that the
/// quarter points come out exact and every other point is within an ulp.
pub fn unit_root(num: u64, den: u64) -> Complex64 {
    assert!(den > 0, "zero denominator");
    let den = den as u128;
    let r = num as u128 % den;
    let quadrant = (4 * r) / den;
    let rem = (4 * r) % den;
    let (c, s) = if 2 * rem <= den {
        let phi = FRAC_PI_2 * (rem as f64 / den as f64);
        (phi.cos(), phi.sin())
    } else {
        let psi = FRAC_PI_2 * ((den - rem) as f64 / den as f64);
        (psi.sin(), psi.cos())
    };
    match quadrant {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// Quasi-cyclic fraction `f_i` as (numerator, denominator).
pub fn quasi_cyclic_fraction(i: u64) -> (u64, u64) {
    if i == 0 {
        return (0, 1);
    }
    let k = 63 - i.leading_zeros() as u64;
    let base = 1u64 << k;
    (2 * (i - base) + 1, base << 1)
}

/// Binary radical inverse of `i` as (numerator, denominator).
pub fn van_der_corput_fraction(i: u64) -> (u64, u64) {
    if i == 0 {
        return (0, 1);
    }
    let bits = 64 - i.leading_zeros();
    let num = i.reverse_bits() >> (64 - bits);
    (num, 1u64 << bits)
}

/// A validated custom knot vector.
pub fn make_knot_vector(points: &[Complex64], tol: f64) -> Result<KnotVector> {
    KnotVector::new(points.to_vec(), Provenance::Custom, tol)
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// The n-th roots of unity in counter-clockwise order.
pub fn roots_of_unity(n: usize) -> Result<KnotVector> {
    positive(n)?;
    let knots = (0..n as u64).map(|i| unit_root(i, n as u64)).collect();
    Ok(KnotVector::trusted(knots, Provenance::Dft { n }))
}

pub fn quasi_cyclic(n: usize) -> Result<KnotVector> {
    positive(n)?;
    let knots = (0..n as u64)
        .map(|i| {
            let (a, b) = quasi_cyclic_fraction(i);
            unit_root(a, b)
        })
        .collect();
    Ok(KnotVector::trusted(knots, Provenance::QuasiCyclic { n }))
}

pub fn van_der_corput(n: usize) -> Result<KnotVector> {
    positive(n)?;
    let knots = (0..n as u64)
        .map(|i| {
            let (a, b) = van_der_corput_fraction(i);
            unit_root(a, b)
        })
        .collect();
    Ok(KnotVector::trusted(knots, Provenance::VanDerCorput { n }))
}

/// `omega_n^i` for `i < n - 1`, followed by `s_last`.
pub fn single_outlier(n: usize, s_last: Complex64) -> Result<KnotVector> {
    if n < 2 {
        return Err(Error::InvalidArgument("single_outlier needs n >= 2".into()));
    }
    let mut knots: Vec<Complex64> = (0..(n - 1) as u64)
        .map(|i| unit_root(i, n as u64))
        .collect();
    if let Some(i) = knots
        .iter()
        .position(|z| (z - s_last).norm() <= DEFAULT_TOL)
    {
        return Err(Error::DuplicateKnot { i, j: n - 1 });
    }
    knots.push(s_last);
    Ok(KnotVector::trusted(
        knots,
        Provenance::SingleOutlier {
            n,
            s_last: [s_last.re, s_last.im],
        },
    ))
}

/// The (n-k)-th roots of unity followed by k scaled k-th roots `rho * omega_k^i`.
pub fn scaled_cluster(n: usize, k: usize, rho: f64) -> Result<KnotVector> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k < n, got k={k}, n={n}"
        )));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rho must lie in (0,1), got {rho}"
        )));
    }
    let m = (n - k) as u64;
    let mut knots: Vec<Complex64> = (0..m).map(|i| unit_root(i, m)).collect();
    knots.extend((0..k as u64).map(|i| unit_root(i, k as u64) * rho));
    Ok(KnotVector::trusted(
        knots,
        Provenance::ScaledCluster { n, k, rho },
    ))
}

/// Serializes knots one per line as `re,im` with 17 significant digits.
pub fn write_knots(kv: &KnotVector) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} knots ({})", kv.len(), kv.label());
    for z in kv.knots() {
        let _ = writeln!(out, "{:.16e},{:.16e}", z.re, z.im);
    }
    out
}

/// Parses the knot file format. Blank lines and `#` comments are skipped; a
/// line with a single number is a real knot.
pub fn parse_knots(text: &str, tol: f64) -> Result<Vec<Complex64>> {
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let parse = |s: Option<&str>| -> Result<f64> {
            s.ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: "missing field".into(),
            })?
            .parse::<f64>()
            .map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })
        };
        let re = parse(fields.next())?;
        let im = match fields.next() {
            Some(s) => parse(Some(s))?,
            None => 0.0,
        };
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "expected `re,im`".into(),
            });
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "non-finite knot".into(),
            });
        }
        pts.push(Complex64::new(re, im));
    }
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_distinct(&pts, tol)?;
    Ok(pts)
}

pub fn read_knot_file(path: &Path, tol: f64) -> Result<KnotVector> {
    let text = std::fs::read_to_string(path)?;
    let pts = parse_knots(&text, tol)?;
    Ok(KnotVector::trusted(
        pts,
        Provenance::File {
            path: path.display().to_string(),
        },
    ))
}

pub fn write_knot_file(path: &Path, kv: &KnotVector) -> Result<()> {
    std::fs::write(path, write_knots(kv))?;
    Ok(())
}
