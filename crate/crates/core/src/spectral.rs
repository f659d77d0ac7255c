//! Reference numerics: singular values, norms, polynomial coefficients,
//! maximization of `|s(f)|` on the unit circle, and Gaussian elimination
//! without pivoting.

use ndarray::Array2;
use ndarray_linalg::{JobSvd, SVDDC};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cauchyinv::{log_root_product_slice, poly_coeffs};
use crate::error::{Error, Result};
use crate::knots::{unit_root, KnotVector};
use crate::matrix::{dft, DenseMatrix};

/// Condition numbers above this lose more than about 1% of relative accuracy
/// in the smallest singular value of a double-precision SVD.
pub const TRUST_LIMIT: f64 = 0.01 / f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    pub sigma1: f64,
    pub sigma_min: f64,
    pub kappa: f64,
    pub log10kappa: f64,
    pub trustworthy: bool,
}

impl SpectrumSummary {
    fn from_sigma(mut sigma: Vec<f64>) -> Self {
        sigma.sort_by(|a, b| b.total_cmp(a));
        let sigma1 = sigma[0];
        let sigma_min = *sigma.last().unwrap();
        let (kappa, log10kappa) = if sigma_min > 0.0 {
            (sigma1 / sigma_min, sigma1.log10() - sigma_min.log10())
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        SpectrumSummary {
            trustworthy: kappa <= TRUST_LIMIT,
            sigma,
            sigma1,
            sigma_min,
            kappa,
            log10kappa,
        }
    }
}

/// The matrix divided by the power of two nearest its largest entry. The
/// scaling is exact, so it changes no rounding, but keeps the LAPACK
/// bidiagonalization away from overflow.
fn scaled(m: &DenseMatrix) -> Result<(Array2<Complex64>, f64)> {
    if m.data()
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let big = m.max_abs();
    let scale = if big > 0.0 {
        2f64.powi(big.log2().round() as i32)
    } else {
        1.0
    };
    Ok((m.to_ndarray().mapv(|z| z / scale), scale))
}

/// Full singular spectrum by LAPACK's divide-and-conquer SVD.
pub fn singular_values(m: &DenseMatrix) -> Result<SpectrumSummary> {
    let (a, scale) = scaled(m)?;
    let (_, sigma, _) = a
        .svddc(JobSvd::None)
        .map_err(|_| Error::ConvergenceFailure)?;
    Ok(SpectrumSummary::from_sigma(
        sigma.iter().map(|s| s * scale).collect(),
    ))
}

/// `(U, sigma, V^H)` with sigma descending.
pub fn svd_full(m: &DenseMatrix) -> Result<(Array2<Complex64>, Vec<f64>, Array2<Complex64>)> {
    let (a, scale) = scaled(m)?;
    let (u, sigma, vt) = a
        .svddc(JobSvd::All)
        .map_err(|_| Error::ConvergenceFailure)?;
    let (u, vt) = u.zip(vt).ok_or(Error::ConvergenceFailure)?;
    Ok((u, sigma.iter().map(|s| s * scale).collect(), vt))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub norm1: f64,
    pub norm_inf: f64,
    pub norm2: f64,
}

pub fn norms(m: &DenseMatrix) -> Result<Norms> {
    let norm_inf = (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let norm1 = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let norm2 = singular_values(m)?.sigma1;
    Ok(Norms {
        norm1,
        norm_inf,
        norm2,
    })
}

/// Monic coefficients of `prod (x - s_i)` in ascending powers.
pub fn poly_from_roots(knots: &KnotVector) -> Result<Vec<Complex64>> {
    if knots.len() > 4096 {
        return Err(Error::InvalidArgument(
            "poly_from_roots supports n <= 4096".into(),
        ));
    }
    let c = poly_coeffs(knots.knots().iter().copied());
    if let Some(z) = c.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::RangeOverflow {
            log10mag: z.norm().log10(),
        });
    }
    Ok(c)
}

/// Horner evaluation of ascending coefficients.
pub fn poly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// Default circle grid: at least 16 samples per oscillation of `|s(f)|`.
pub fn default_circle_grid(n: usize) -> usize {
    (16 * n).max(1024)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMax {
    pub f_star: Complex64,
    pub theta: f64,
    pub log10_max: f64,
}

fn log10_abs_on_circle(knots: &[Complex64], theta: f64) -> f64 {
    log_root_product_slice(knots, Complex64::from_polar(1.0, theta)).log10mag
}

/// Maximizes `|s(f)|` over `|f| = 1`: uniform grid, then golden-section
/// refinement of the best cell down to an angular width of 1e-12.
pub fn max_abs_on_circle(knots: &KnotVector, grid: usize) -> Result<CircleMax> {
    if grid < 8 {
        return Err(Error::InvalidArgument(
            "circle grid needs at least 8 points".into(),
        ));
    }
    let pts = knots.knots();
    let g = grid as u64;
    let (best_k, best) = (0..g)
        .into_par_iter()
        .map(|k| (k, log_root_product_slice(pts, unit_root(k, g)).log10mag))
        .reduce(
            || (0, f64::NEG_INFINITY),
            |a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    let h = std::f64::consts::TAU / grid as f64;
    let centre = h * best_k as f64;
    let (mut lo, mut hi) = (centre - h, centre + h);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = log10_abs_on_circle(pts, x1);
    let mut f2 = log10_abs_on_circle(pts, x2);
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = log10_abs_on_circle(pts, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = log10_abs_on_circle(pts, x1);
        }
    }
    let (theta, log10_max) = [(centre, best), (x1, f1), (x2, f2)].into_iter().fold(
        (centre, f64::NEG_INFINITY),
        |acc, c| if c.1 > acc.1 { c } else { acc },
    );
    let theta = theta.rem_euclid(std::f64::consts::TAU);
    Ok(CircleMax {
        f_star: Complex64::from_polar(1.0, theta),
        theta,
        log10_max,
    })
}

/// Pivots at or below this magnitude stop the elimination.
pub const ZERO_PIVOT: f64 = 1e-300;

/// Gaussian elimination with no row or column interchange. Returns the
/// solution and the smallest pivot magnitude met.
pub fn genp_solve(a: &DenseMatrix, b: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "GENP on {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut m = a.data().to_vec();
    let mut x = b.to_vec();
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let p = m[k * n + k];
        let pn = p.norm();
        if pn <= ZERO_PIVOT {
            return Err(Error::ZeroPivot(k));
        }
        min_pivot = min_pivot.min(pn);
        let (top, rest) = m.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n..];
        for i in (k + 1)..n {
            let row = &mut rest[(i - k - 1) * n..(i - k) * n];
            let l = row[k] / p;
            if l.re == 0.0 && l.im == 0.0 {
                continue;
            }
            row[k] = Complex64::new(0.0, 0.0);
            for j in (k + 1)..n {
                row[j] -= l * pivot_row[j];
            }
            let xk = x[k];
            x[i] -= l * xk;
        }
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in (i + 1)..n {
            acc -= m[i * n + j] * x[j];
        }
        x[i] = acc / m[i * n + i];
    }
    Ok((x, min_pivot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenpStats {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean_rn: f64,
    pub std_rn: f64,
}

/// Name of the generator behind [`genp_residual_experiment`].
pub const RNG_NAME: &str = "chacha8";

/// Trial `k` draws its right-hand side from stream `k` of a ChaCha8 generator
/// keyed by `seed`, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative residuals of GENP on `Omega_n x = b` for real standard normal `b`.
pub fn genp_residual_experiment(n: usize, trials: usize, seed: u64) -> Result<GenpStats> {
    if n < 2 || trials == 0 {
        return Err(Error::InvalidArgument("need n >= 2 and trials >= 1".into()));
    }
    let omega = dft(n)?;
    let residuals = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let b: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), 0.0))
                .collect();
            let (x, _) = genp_solve(&omega, &b)?;
            let r: Vec<Complex64> = omega
                .matvec(&x)?
                .iter()
                .zip(&b)
                .map(|(a, c)| a - c)
                .collect();
            Ok(norm2(&r) / norm2(&b))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = residuals.iter().sum::<f64>() / trials as f64;
    let std = if trials > 1 {
        (residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(GenpStats {
        n,
        trials,
        seed,
        mean_rn: mean,
        std_rn: std,
    })
}
