//! Dense complex matrices built from knot data.

use std::fmt::Write as _;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knots::{unit_root, KnotVector, DEFAULT_TOL};

/// Records how a [`DenseMatrix`] was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Descriptor {
    Vandermonde { knots: String, n: usize },
    Cauchy { m: usize, l: usize },
    Cv { n: usize, f: [f64; 2] },
    Dft { n: usize },
    BlockOf { q: usize, of: Box<Descriptor> },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    descriptor: Descriptor,
}

impl DenseMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::with_descriptor(rows, cols, data, Descriptor::Custom)
    }

    fn with_descriptor(
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
        descriptor: Descriptor,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(z) = data
            .iter()
            .find(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::RangeOverflow {
                log10mag: if z.norm().is_nan() {
                    f64::NAN
                } else {
                    f64::INFINITY
                },
            });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            data,
            descriptor,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .expect("identity of positive size")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj_transpose(&self) -> DenseMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj()).expect("same entries")
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i)).expect("same entries")
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * rhs.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                for (o, b) in orow.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self::from_row_major(self.rows, rhs.cols, out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `max |(self - I)_ij|` for a square matrix.
    pub fn max_dev_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = if i == j {
                    self.get(i, j) - 1.0
                } else {
                    self.get(i, j)
                };
                worst = worst.max(e.norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("max_abs_diff".into()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Submatrix with the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix> {
        if rows.iter().any(|&i| i >= self.rows) || cols.iter().any(|&j| j >= self.cols) {
            return Err(Error::ShapeMismatch("submatrix index out of range".into()));
        }
        Self::from_fn(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b]))
    }

    pub fn to_ndarray(&self) -> Array2<Complex64> {
        Array2::from_shape_vec((self.rows, self.cols), self.data.clone())
            .expect("shape matches data")
    }

    /// Debug dump: a `rows cols` header, then one `re,im` pair per entry in
    /// row-major order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for z in &self.data {
            let _ = writeln!(out, "{:.16e},{:.16e}", z.re, z.im);
        }
        out
    }
}

/// `V_ij = s_i^j`, with each row built by repeated multiplication.
pub fn vandermonde(s: &KnotVector) -> Result<DenseMatrix> {
    let n = s.len();
    for z in s.knots() {
        let lg = z.norm().log10() * (n as f64 - 1.0);
        if lg > 307.0 {
            return Err(Error::RangeOverflow { log10mag: lg });
        }
    }
    let mut data = Vec::with_capacity(n * n);
    for &z in s.knots() {
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            data.push(p);
            p *= z;
        }
    }
    DenseMatrix::with_descriptor(
        n,
        n,
        data,
        Descriptor::Vandermonde {
            knots: s.label().into(),
            n,
        },
    )
}

/// The DFT matrix `(omega_n^{ij})`, each entry taken from the exact fraction
/// `ij mod n`.
pub fn dft(n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let n64 = n as u64;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n64 {
        for j in 0..n64 {
            data.push(unit_root((i * j) % n64, n64));
        }
    }
    DenseMatrix::with_descriptor(n, n, data, Descriptor::Dft { n })
}

fn cauchy_points(s: &[Complex64], t: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut data = Vec::with_capacity(s.len() * t.len());
    for (i, si) in s.iter().enumerate() {
        for (j, tj) in t.iter().enumerate() {
            let d = si - tj;
            if d.norm() <= tol {
                return Err(Error::KnotCollision { i, j });
            }
            data.push(d.inv());
        }
    }
    Ok(data)
}

/// `C_ij = 1/(s_i - t_j)`; rectangular when the lengths differ.
pub fn cauchy(s: &KnotVector, t: &KnotVector) -> Result<DenseMatrix> {
    let data = cauchy_points(s.knots(), t.knots(), DEFAULT_TOL)?;
    DenseMatrix::with_descriptor(
        s.len(),
        t.len(),
        data,
        Descriptor::Cauchy {
            m: s.len(),
            l: t.len(),
        },
    )
}

/// The CV grid `t_j = f * omega_n^j`.
pub fn cv_grid(n: usize, f: Complex64) -> Vec<Complex64> {
    (0..n as u64).map(|j| f * unit_root(j, n as u64)).collect()
}

/// The CV matrix `1/(s_i - f omega_n^j)`.
pub fn cv_matrix(s: &KnotVector, f: Complex64) -> Result<DenseMatrix> {
    if f.norm() == 0.0 || !f.norm().is_finite() {
        return Err(Error::InvalidArgument(
            "f must be nonzero and finite".into(),
        ));
    }
    let n = s.len();
    let t = cv_grid(n, f);
    let data = cauchy_points(s.knots(), &t, DEFAULT_TOL)?;
    DenseMatrix::with_descriptor(n, n, data, Descriptor::Cv { n, f: [f.re, f.im] })
}

/// The q x q top-left block.
pub fn leading_block(m: &DenseMatrix, q: usize) -> Result<DenseMatrix> {
    if q == 0 || q > m.rows.min(m.cols) {
        return Err(Error::BlockTooLarge {
            q,
            rows: m.rows,
            cols: m.cols,
        });
    }
    let mut data = Vec::with_capacity(q * q);
    for i in 0..q {
        data.extend_from_slice(&m.row(i)[..q]);
    }
    DenseMatrix::with_descriptor(
        q,
        q,
        data,
        Descriptor::BlockOf {
            q,
            of: Box::new(m.descriptor.clone()),
        },
    )
}
