//! Closed-form determinants and inverses of Cauchy, CV and Vandermonde
//! matrices.
//!
//! Two entry formulas are provided for the Cauchy inverse. [`InverseVariant::PaperEq5`]
//! is the compact expression `(-1)^n s(t_j) t(s_i) / (t_j - s_i)`, evaluated
//! exactly as written. [`InverseVariant::DerivativeCorrected`] is the
//! adjugate-exact entry
//!
//! ```text
//! (C^-1)_ij = s(t_i) t(s_j) / ((t_i - s_j) s'(s_j) t'(t_i))
//! ```
//!
//! with `s(x) = prod (x - s_k)` and `t(x) = prod (x - t_k)`. Only the second one
//! inverts `C`; the first differs from it by the factor `s'(s) t'(t)` for the
//! same knot pair and is kept so its downstream bounds can be probed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knots::{unit_root, KnotVector, DEFAULT_TOL};
use crate::logc::LogComplex;
use crate::matrix::{cv_grid, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseVariant {
    PaperEq5,
    DerivativeCorrected,
}

/// `prod_k (x - knots_k)` in log domain; exactly zero when `x` is a knot.
pub fn log_root_product(knots: &KnotVector, x: Complex64) -> LogComplex {
    log_root_product_slice(knots.knots(), x)
}

pub(crate) fn log_root_product_slice(knots: &[Complex64], x: Complex64) -> LogComplex {
    let mut log10mag = 0.0;
    let mut phase = 0.0;
    for &k in knots {
        let d = x - k;
        if d.re == 0.0 && d.im == 0.0 {
            return LogComplex::ZERO;
        }
        log10mag += d.norm().log10();
        phase += d.arg();
    }
    LogComplex::new(log10mag, phase)
}

/// `prod_{k != i} (pts_i - pts_k)`.
fn log_derivative_at(pts: &[Complex64], i: usize) -> LogComplex {
    LogComplex::product(
        pts.iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &p)| LogComplex::from(pts[i] - p)),
    )
}

fn check_square(s: &[Complex64], t: &[Complex64]) -> Result<()> {
    if s.len() != t.len() {
        return Err(Error::ShapeMismatch(format!(
            "square Cauchy matrix needs |s| = |t|, got {} and {}",
            s.len(),
            t.len()
        )));
    }
    Ok(())
}

fn check_collisions(s: &[Complex64], t: &[Complex64]) -> Result<()> {
    for (i, si) in s.iter().enumerate() {
        for (j, tj) in t.iter().enumerate() {
            if (si - tj).norm() <= DEFAULT_TOL {
                return Err(Error::KnotCollision { i, j });
            }
        }
    }
    Ok(())
}

/// Direct complex versions of the per-knot products, kept when every one of
/// them is far enough from the overflow threshold. Dense matrices use these,
/// since a plain product rounds less than a sum of logarithms and angles.
struct Direct {
    s_at_t: Vec<Complex64>,
    t_at_s: Vec<Complex64>,
    ds: Vec<Complex64>,
    dt: Vec<Complex64>,
}

/// Largest |log10| of a factor for which entry products stay in range.
const DIRECT_LOG10_LIMIT: f64 = 60.0;

fn direct_product(pts: &[Complex64], x: Complex64, skip: Option<usize>) -> Complex64 {
    pts.iter()
        .enumerate()
        .filter(|&(k, _)| Some(k) != skip)
        .fold(Complex64::new(1.0, 0.0), |acc, (_, &p)| acc * (x - p))
}

/// Which matrix entry formula a dense build evaluates.
#[derive(Clone, Copy)]
enum Formula {
    Entry(InverseVariant),
    CvCompact,
}

/// Per-knot log-domain products shared by every inverse entry.
struct Factors {
    n: usize,
    s: Vec<Complex64>,
    t: Vec<Complex64>,
    /// s(t_j)
    s_at_t: Vec<LogComplex>,
    /// t(s_i)
    t_at_s: Vec<LogComplex>,
    /// s'(s_i)
    ds: Vec<LogComplex>,
    /// t'(t_j)
    dt: Vec<LogComplex>,
    direct: Option<Direct>,
}

impl Factors {
    fn general(s: &[Complex64], t: &[Complex64]) -> Result<Self> {
        check_square(s, t)?;
        check_collisions(s, t)?;
        let n = s.len();
        Ok(Factors {
            n,
            s_at_t: t.iter().map(|&x| log_root_product_slice(s, x)).collect(),
            t_at_s: s.iter().map(|&x| log_root_product_slice(t, x)).collect(),
            ds: (0..n).map(|i| log_derivative_at(s, i)).collect(),
            dt: (0..n).map(|j| log_derivative_at(t, j)).collect(),
            s: s.to_vec(),
            t: t.to_vec(),
            direct: None,
        }
        .with_direct(|| Direct {
            s_at_t: t.iter().map(|&x| direct_product(s, x, None)).collect(),
            t_at_s: s.iter().map(|&x| direct_product(t, x, None)).collect(),
            ds: (0..n).map(|i| direct_product(s, s[i], Some(i))).collect(),
            dt: (0..n).map(|j| direct_product(t, t[j], Some(j))).collect(),
        }))
    }

    /// CV specialization: `t(x) = x^n - f^n`, `t'(t_j) = n t_j^(n-1)`.
    fn cv(s: &[Complex64], f: Complex64) -> Result<Self> {
        let n = s.len();
        let t = cv_grid(n, f);
        check_collisions(s, &t)?;
        let fl = LogComplex::from(f);
        let fn_ = fl.powi(n as i64);
        let nn = LogComplex::from_real(n as f64);
        Ok(Factors {
            n,
            s_at_t: t.iter().map(|&x| log_root_product_slice(s, x)).collect(),
            t_at_s: s
                .iter()
                .map(|&x| LogComplex::from(x).powi(n as i64) - fn_)
                .collect(),
            ds: (0..n).map(|i| log_derivative_at(s, i)).collect(),
            dt: t
                .iter()
                .map(|&x| nn * LogComplex::from(x).powi(n as i64 - 1))
                .collect(),
            s: s.to_vec(),
            t: t.clone(),
            direct: None,
        }
        .with_direct(|| Direct {
            s_at_t: t.iter().map(|&x| direct_product(s, x, None)).collect(),
            t_at_s: s
                .iter()
                .map(|&x| x.powi(n as i32) - f.powi(n as i32))
                .collect(),
            ds: (0..n).map(|i| direct_product(s, s[i], Some(i))).collect(),
            dt: t.iter().map(|&x| n as f64 * x.powi(n as i32 - 1)).collect(),
        }))
    }

    fn with_direct(mut self, build: impl FnOnce() -> Direct) -> Self {
        let safe = |v: &[LogComplex]| {
            v.iter()
                .all(|z| !z.is_zero() && z.log10mag.abs() <= DIRECT_LOG10_LIMIT)
        };
        if self.n <= i32::MAX as usize
            && safe(&self.s_at_t)
            && safe(&self.t_at_s)
            && safe(&self.ds)
            && safe(&self.dt)
        {
            self.direct = Some(build());
        }
        self
    }

    fn sign_n(&self) -> LogComplex {
        if self.n.is_multiple_of(2) {
            LogComplex::ONE
        } else {
            -LogComplex::ONE
        }
    }

    /// Entry (i, j) of the inverse.
    fn entry(&self, i: usize, j: usize, variant: InverseVariant) -> LogComplex {
        match variant {
            InverseVariant::PaperEq5 => {
                self.sign_n() * self.s_at_t[j] * self.t_at_s[i]
                    / LogComplex::from(self.t[j] - self.s[i])
            }
            InverseVariant::DerivativeCorrected => {
                self.s_at_t[i] * self.t_at_s[j]
                    / (LogComplex::from(self.t[i] - self.s[j]) * self.ds[j] * self.dt[i])
            }
        }
    }

    /// Compact CV entry for the scaled grid, with denominator
    /// `s_i - t_j`.
    fn cv_compact_entry(&self, i: usize, j: usize) -> LogComplex {
        self.sign_n() * self.s_at_t[j] * self.t_at_s[i] / LogComplex::from(self.s[i] - self.t[j])
    }

    fn log_value(&self, i: usize, j: usize, formula: Formula) -> LogComplex {
        match formula {
            Formula::Entry(variant) => self.entry(i, j, variant),
            Formula::CvCompact => self.cv_compact_entry(i, j),
        }
    }

    /// Entry as a complex number, by direct products when they are safe.
    fn value(&self, i: usize, j: usize, formula: Formula) -> Result<Complex64> {
        let Some(d) = &self.direct else {
            return self.log_value(i, j, formula).to_complex();
        };
        let sign = if self.n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(match formula {
            Formula::Entry(InverseVariant::PaperEq5) => {
                sign * d.s_at_t[j] * d.t_at_s[i] / (self.t[j] - self.s[i])
            }
            Formula::Entry(InverseVariant::DerivativeCorrected) => {
                d.s_at_t[i] * d.t_at_s[j] / ((self.t[i] - self.s[j]) * d.ds[j] * d.dt[i])
            }
            Formula::CvCompact => sign * d.s_at_t[j] * d.t_at_s[i] / (self.s[i] - self.t[j]),
        })
    }

    /// `1 / t(s_i)` as a complex number.
    fn inv_t_at_s(&self, i: usize) -> Result<Complex64> {
        match &self.direct {
            Some(d) => Ok(d.t_at_s[i].inv()),
            None => self.t_at_s[i].recip().to_complex(),
        }
    }

    fn dense(&self, formula: Formula) -> Result<DenseMatrix> {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.value(i, j, formula)?);
            }
        }
        DenseMatrix::from_row_major(n, n, data)
    }
}

/// `det C = prod_{i<j} (s_j - s_i)(t_i - t_j) / prod_{i,j} (s_i - t_j)`.
pub fn cauchy_det(s: &KnotVector, t: &KnotVector) -> Result<LogComplex> {
    let (s, t) = (s.knots(), t.knots());
    check_square(s, t)?;
    check_collisions(s, t)?;
    let n = s.len();
    let mut num = LogComplex::ONE;
    for j in 0..n {
        for i in 0..j {
            num *= LogComplex::from(s[j] - s[i]) * LogComplex::from(t[i] - t[j]);
        }
    }
    let mut den = LogComplex::ONE;
    for si in s {
        for tj in t {
            den *= LogComplex::from(si - tj);
        }
    }
    Ok(num / den)
}

pub fn cauchy_inverse_entry(
    s: &KnotVector,
    t: &KnotVector,
    i: usize,
    j: usize,
    variant: InverseVariant,
) -> Result<LogComplex> {
    let fac = Factors::general(s.knots(), t.knots())?;
    check_index(fac.n, i, j)?;
    Ok(fac.entry(i, j, variant))
}

/// All entries of the inverse in log domain, row-major.
pub fn cauchy_inverse_log(
    s: &KnotVector,
    t: &KnotVector,
    variant: InverseVariant,
) -> Result<Vec<LogComplex>> {
    let fac = Factors::general(s.knots(), t.knots())?;
    let n = fac.n;
    Ok((0..n * n)
        .map(|k| fac.entry(k / n, k % n, variant))
        .collect())
}

pub fn cauchy_inverse(
    s: &KnotVector,
    t: &KnotVector,
    variant: InverseVariant,
) -> Result<DenseMatrix> {
    let fac = Factors::general(s.knots(), t.knots())?;
    fac.dense(Formula::Entry(variant))
}

fn check_index(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "entry ({i},{j}) outside {n}x{n}"
        )));
    }
    Ok(())
}

fn cv_formula(variant: InverseVariant) -> Formula {
    match variant {
        InverseVariant::PaperEq5 => Formula::CvCompact,
        InverseVariant::DerivativeCorrected => Formula::Entry(variant),
    }
}

fn cv_entry(fac: &Factors, i: usize, j: usize, variant: InverseVariant) -> LogComplex {
    fac.log_value(i, j, cv_formula(variant))
}

/// Entry (i, j) of the inverse of the CV matrix `1/(s_i - f omega_n^j)`.
pub fn cv_inverse_entry(
    s: &KnotVector,
    f: Complex64,
    i: usize,
    j: usize,
    variant: InverseVariant,
) -> Result<LogComplex> {
    let fac = Factors::cv(s.knots(), f)?;
    check_index(fac.n, i, j)?;
    Ok(cv_entry(&fac, i, j, variant))
}

/// All CV inverse entries in log domain, row-major.
pub fn cv_inverse_log(
    s: &KnotVector,
    f: Complex64,
    variant: InverseVariant,
) -> Result<Vec<LogComplex>> {
    let fac = Factors::cv(s.knots(), f)?;
    let n = fac.n;
    Ok((0..n * n)
        .map(|k| cv_entry(&fac, k / n, k % n, variant))
        .collect())
}

pub fn cv_inverse(s: &KnotVector, f: Complex64, variant: InverseVariant) -> Result<DenseMatrix> {
    let fac = Factors::cv(s.knots(), f)?;
    fac.dense(cv_formula(variant))
}

/// `V^-1 = diag(f^(n-1-j)) Omega^H diag(omega^-j) C_{s,f}^-1 diag(1/(s_i^n - f^n))`.
pub fn vandermonde_inverse_via_cv(
    s: &KnotVector,
    f: Complex64,
    variant: InverseVariant,
) -> Result<DenseMatrix> {
    let fac = Factors::cv(s.knots(), f)?;
    let n = fac.n;
    let n64 = n as u64;
    // Y = C^-1 diag(1 / t(s_i)) where t(s_i) = s_i^n - f^n
    let mut y = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        for i in 0..n {
            y[k * n + i] = fac.value(k, i, cv_formula(variant))? * fac.inv_t_at_s(i)?;
        }
    }
    let fl = LogComplex::from(f);
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let scale = fl.powi((n - 1 - j) as i64).to_complex()?;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                // (Omega^H)_{jk} omega^{-k} = omega^{-(j+1)k}
                let e = ((j as u64 + 1) * k as u64) % n64;
                acc += unit_root((n64 - e) % n64, n64) * y[k * n + i];
            }
            out.push(scale * acc);
        }
    }
    DenseMatrix::from_row_major(n, n, out)
}

/// Monic coefficients (ascending) of `prod (x - r)`.
pub(crate) fn poly_coeffs(roots: impl IntoIterator<Item = Complex64>) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            let prev = c[k - 1];
            c[k] = prev - r * c[k];
        }
        c[0] = -r * c[0];
    }
    c
}

/// Inverse via Lagrange basis coefficients: column `i` of `V^-1` holds the
/// ascending coefficients of `s_i(x) = s(x) / ((x - s_i) s'(s_i))`.
pub fn vandermonde_inverse_lagrange(s: &KnotVector) -> Result<DenseMatrix> {
    let pts = s.knots();
    let n = pts.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let coeffs = poly_coeffs(
            pts.iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &p)| p),
        );
        let d = log_derivative_at(pts, i);
        if d.is_zero() {
            return Err(Error::KnotCollision { i, j: i });
        }
        for (j, cj) in coeffs.iter().enumerate() {
            if !(cj.re.is_finite() && cj.im.is_finite()) {
                return Err(Error::RangeOverflow {
                    log10mag: f64::INFINITY,
                });
            }
            out[j * n + i] = (LogComplex::from(*cj) / d).to_complex()?;
        }
    }
    DenseMatrix::from_row_major(n, n, out)
}
