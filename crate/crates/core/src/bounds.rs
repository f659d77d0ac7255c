//! Lower bounds on condition numbers of Vandermonde, CV and DFT-block
//! matrices, together with the arc/separation machinery used to certify
//! exponential growth.
//!
//! Every bound comes back as a [`BoundReport`] holding a log10 value, so even
//! bounds like `10^253` stay exact to the last digit that matters.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cauchyinv::{cv_inverse_log, log_root_product_slice, InverseVariant};
use crate::error::{Error, Result};
use crate::knots::{unit_root, KnotVector};
use crate::matrix::{cv_grid, cv_matrix, vandermonde};
use crate::spectral::{max_abs_on_circle, poly_from_roots, singular_values};

/// Catalan's constant.
pub const CATALAN: f64 = 0.915_965_594_177_219;

/// Tolerance for treating `s_+` as lying on the unit circle.
pub const UNIT_TOL: f64 = 1e-12;

/// Largest n for which `bound_cv` also records an SVD-exact `||C^-1||`.
pub const CV_SVD_LIMIT: usize = 512;

/// Default inflation factors scanned by [`best_arc_search`].
pub const DEFAULT_ETA_GRID: [f64; 3] = [1.1, 1.2, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "Easy-i")]
    EasyI,
    #[serde(rename = "Easy-ii")]
    EasyII,
    RefinedNorm,
    #[serde(rename = "CV-Thm4.1")]
    Cv,
    CircleValue,
    CoeffNorm,
    #[serde(rename = "QuasiCyclic-base")]
    QuasiCyclicBase,
    #[serde(rename = "QuasiCyclic-eq15")]
    QuasiCyclicEq15,
    #[serde(rename = "QuasiCyclic-eq16")]
    QuasiCyclicEq16,
    #[serde(rename = "QuasiCyclic-product")]
    QuasiCyclicProduct,
    #[serde(rename = "QuasiCyclic-integral")]
    QuasiCyclicIntegral,
    DftBlock,
    #[serde(rename = "Separation-sigma")]
    SeparationSigma,
    #[serde(rename = "Arc-CV")]
    ArcCv,
    #[serde(rename = "Arc-Vandermonde")]
    ArcVandermonde,
}

impl BoundId {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundId::EasyI => "Easy-i",
            BoundId::EasyII => "Easy-ii",
            BoundId::RefinedNorm => "RefinedNorm",
            BoundId::Cv => "CV-Thm4.1",
            BoundId::CircleValue => "CircleValue",
            BoundId::CoeffNorm => "CoeffNorm",
            BoundId::QuasiCyclicBase => "QuasiCyclic-base",
            BoundId::QuasiCyclicEq15 => "QuasiCyclic-eq15",
            BoundId::QuasiCyclicEq16 => "QuasiCyclic-eq16",
            BoundId::QuasiCyclicProduct => "QuasiCyclic-product",
            BoundId::QuasiCyclicIntegral => "QuasiCyclic-integral",
            BoundId::DftBlock => "DftBlock",
            BoundId::SeparationSigma => "Separation-sigma",
            BoundId::ArcCv => "Arc-CV",
            BoundId::ArcVandermonde => "Arc-Vandermonde",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub log10value: f64,
    pub variant: Option<InverseVariant>,
    pub applicable: bool,
    /// Why the bound is or is not applicable; empty when nothing to say.
    pub reason: String,
    pub params: Map<String, Value>,
}

impl BoundReport {
    fn new(bound_id: BoundId, log10value: f64) -> Self {
        BoundReport {
            bound_id,
            log10value,
            variant: None,
            applicable: true,
            reason: String::new(),
            params: Map::new(),
        }
    }

    fn variant(mut self, v: InverseVariant) -> Self {
        self.variant = Some(v);
        self
    }

    fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    fn not_applicable(mut self, reason: impl Into<String>) -> Self {
        self.applicable = false;
        self.reason = reason.into();
        self
    }

    fn note(mut self, reason: impl Into<String>) -> Self {
        self.reason = reason.into();
        self
    }

    /// The bound as a plain number; `inf` when beyond double range.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10value)
    }
}

/// JSON number, or null for non-finite values.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn cpx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn log10_s_plus(s: &KnotVector) -> f64 {
    s.max_modulus().log10()
}

fn on_or_inside_unit_circle(s: &KnotVector) -> bool {
    s.max_modulus() <= 1.0 + UNIT_TOL
}

/// `log10 sqrt(sum 10^(2 x_i))` without leaving the double range.
fn log10_norm(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let sum: f64 = logs.iter().map(|x| 10f64.powf(2.0 * (x - m))).sum();
    m + 0.5 * sum.log10()
}

/// `kappa(V) >= max(1, s_+^(n-1) / sqrt(n))`.
pub fn bound_easy(s: &KnotVector) -> BoundReport {
    let n = s.len();
    let raw = if n == 1 {
        0.0
    } else {
        (n - 1) as f64 * log10_s_plus(s) - 0.5 * (n as f64).log10()
    };
    BoundReport::new(BoundId::EasyI, raw.max(0.0))
        .param("n", n)
        .param("s_plus", s.max_modulus())
        .param("raw_log10", num(raw))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMode {
    /// `|V| = max(1, s_+^(n-1))`.
    Literal,
    /// The computed spectral norm of `V`.
    ComputedNorm,
}

/// Cluster bound `|V| nu^(k-1) / (sqrt(k) max(k, nu/(nu-1)))` for `k` knots
/// with `1/|s_i| >= nu`.
pub fn bound_cluster(s: &KnotVector, k: usize, nu: f64, mode: NormMode) -> Result<BoundReport> {
    if !(nu > 1.0) || k == 0 {
        return Err(Error::InvalidArgument(
            "cluster bound needs nu > 1 and k >= 1".into(),
        ));
    }
    let found = s
        .knots()
        .iter()
        .filter(|z| z.norm() * nu <= 1.0 + 1e-12)
        .count();
    if found < k {
        return Err(Error::NotEnoughSmallKnots { needed: k, found });
    }
    let n = s.len();
    let log_norm = match mode {
        NormMode::Literal => ((n - 1) as f64 * log10_s_plus(s)).max(0.0),
        NormMode::ComputedNorm => singular_values(&vandermonde(s)?)?.sigma1.log10(),
    };
    let kf = k as f64;
    let value =
        log_norm + (kf - 1.0) * nu.log10() - 0.5 * kf.log10() - kf.max(nu / (nu - 1.0)).log10();
    Ok(BoundReport::new(BoundId::EasyII, value)
        .param("mode", serde_json::to_value(mode).unwrap())
        .param("k", k)
        .param("nu", nu)
        .param("small_knots", found)
        .param("log10_norm", num(log_norm)))
}

/// `||V|| >= (s_+^n - 1) / ((s_+ - 1) sqrt(n))`; since the first column has
/// norm `sqrt(n)`, dividing once more by `sqrt(n)` bounds `kappa(V)`.
pub fn bound_refined_norm(s: &KnotVector) -> Result<BoundReport> {
    let sp = s.max_modulus();
    if (sp - 1.0).abs() < UNIT_TOL {
        return Err(Error::UnitRadius);
    }
    let n = s.len() as f64;
    let half_log_n = 0.5 * n.log10();
    let log_sum = if sp > 1.0 {
        // s^n - 1 = s^n (1 - s^-n)
        n * sp.log10() + (-(-n * sp.ln()).exp_m1()).log10() - (sp - 1.0).log10()
    } else {
        (-(n * sp.ln()).exp_m1()).log10() - (1.0 - sp).log10()
    };
    let value = log_sum - half_log_n;
    Ok(BoundReport::new(BoundId::RefinedNorm, value)
        .param("quantity", "norm")
        .param("s_plus", sp)
        .param("kappa_log10", (value - half_log_n).max(0.0)))
}

/// Rotates `f` by `2^-40 * 2 pi / n`, the nudge applied when the CV grid
/// hits a knot.
pub fn nudge(f: Complex64, n: usize) -> Complex64 {
    f * Complex64::from_polar(1.0, 2f64.powi(-40) * 2.0 * PI / n as f64)
}

fn with_nudge<T>(
    s: &KnotVector,
    f: Complex64,
    mut run: impl FnMut(Complex64) -> Result<T>,
) -> Result<(T, Complex64, bool)> {
    match run(f) {
        Err(Error::KnotCollision { .. }) => {
            let g = nudge(f, s.len());
            run(g).map(|v| (v, g, true))
        }
        other => other.map(|v| (v, f, false)),
    }
}

/// `kappa(V) >= sqrt(n) ||C^-1|| / max_i |s_i^n - f^n|` with `C` the CV
/// matrix of `s` and `f`, and `||C^-1||` replaced by its largest entry.
pub fn bound_cv(s: &KnotVector, f: Complex64, variant: InverseVariant) -> Result<BoundReport> {
    if (f.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidArgument(
            "f must lie on the unit circle".into(),
        ));
    }
    let n = s.len();
    let (entries, f_used, nudged) = with_nudge(s, f, |g| cv_inverse_log(s, g, variant))?;
    let max_entry = entries
        .iter()
        .map(|z| z.log10mag)
        .fold(f64::NEG_INFINITY, f64::max);
    let grid = cv_grid(n, f_used);
    let max_t = s
        .knots()
        .iter()
        .map(|&x| log_root_product_slice(&grid, x).log10mag)
        .fold(f64::NEG_INFINITY, f64::max);
    let half_log_n = 0.5 * (n as f64).log10();
    let value = half_log_n + max_entry - max_t;
    let mut rep = BoundReport::new(BoundId::Cv, value)
        .variant(variant)
        .param("f", cpx(f_used))
        .param("nudged", nudged)
        .param("log10_max_inverse_entry", num(max_entry))
        .param("log10_max_t_at_s", num(max_t));
    if n <= CV_SVD_LIMIT {
        let exact = cv_matrix(s, f_used)
            .and_then(|c| singular_values(&c))
            .map(|sv| -sv.sigma_min.log10());
        if let Ok(e) = exact {
            rep = rep
                .param("log10_inverse_norm_svd", num(e))
                .param("log10value_svd", num(half_log_n + e - max_t));
        }
    }
    Ok(rep)
}

/// `kappa(V) >= sqrt(n) max_{|f|=1} |s(f)| / 2`, plus the `||v||/2`
/// sampled forms.
pub fn bound_circle_value(s: &KnotVector, grid: usize) -> Result<BoundReport> {
    let n = s.len();
    let cm = max_abs_on_circle(s, grid)?;
    let value = 0.5 * (n as f64).log10() + cm.log10_max - 2f64.log10();
    let sampled = |den: u64| {
        let logs: Vec<f64> = (0..=n as u64)
            .map(|i| log_root_product_slice(s.knots(), unit_root(i % den, den)).log10mag)
            .collect();
        log10_norm(&logs) - 2f64.log10()
    };
    let mut rep = BoundReport::new(BoundId::CircleValue, value)
        .variant(InverseVariant::PaperEq5)
        .param("f_star", cpx(cm.f_star))
        .param("log10_max_abs", num(cm.log10_max))
        .param("grid", grid)
        .param("log10_v_half_omega_n_plus_1", num(sampled(n as u64 + 1)))
        .param("log10_v_half_omega_n", num(sampled(n as u64)));
    if !on_or_inside_unit_circle(s) {
        rep = rep.not_applicable("requires all knots in the closed unit disc");
    }
    Ok(rep)
}

/// `kappa(V) >= ||coefficients of s(x)|| sqrt(n+1) / 2`.
pub fn bound_coeff_norm(s: &KnotVector) -> Result<BoundReport> {
    let c = poly_from_roots(s)?;
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n = s.len() as f64;
    let value = (0.5 * norm * (n + 1.0).sqrt()).log10();
    let mut rep = BoundReport::new(BoundId::CoeffNorm, value)
        .variant(InverseVariant::PaperEq5)
        .param("coeff_norm", norm);
    if !on_or_inside_unit_circle(s) {
        rep = rep.not_applicable("requires all knots in the closed unit disc");
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QcMode {
    Base,
    Eq15,
    Eq16,
    Product,
    Integral,
}

fn log_two_cos(x: f64, q: f64) -> f64 {
    (2.0 * ((0.5 - x / q) * FRAC_PI_2).cos()).ln()
}

/// `int_0^q ln(2 cos((1/2 - x/q) pi/2)) dx` by composite Simpson.
pub fn integral_exponent(q: usize, panels: usize) -> f64 {
    let qf = q as f64;
    let m = panels + panels % 2;
    let h = qf / m as f64;
    let mut acc = log_two_cos(0.0, qf) + log_two_cos(qf, qf);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * log_two_cos(i as f64 * h, qf);
    }
    acc * h / 3.0
}

/// Closed form of [`integral_exponent`]: `q 2G / pi`.
pub fn integral_exponent_closed(q: usize) -> f64 {
    q as f64 * 2.0 * CATALAN / PI
}

const SIMPSON_PANELS: usize = 4096;

fn integral_report(id: BoundId, q: usize) -> BoundReport {
    let y = integral_exponent(q, SIMPSON_PANELS);
    let closed = integral_exponent_closed(q);
    BoundReport::new(id, y / std::f64::consts::LN_10)
        .variant(InverseVariant::PaperEq5)
        .param("mode", "integral")
        .param("q", q)
        .param("exponent_simpson", y)
        .param("exponent_closed_form", closed)
        .param("relative_gap", ((y - closed) / closed).abs())
}

/// Lower bounds for the quasi-cyclic Vandermonde matrix of size `n = 3q`.
pub fn bound_quasi_cyclic(q: usize, mode: QcMode) -> Result<BoundReport> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let needs_pow2 = matches!(mode, QcMode::Base | QcMode::Product);
    if needs_pow2 && !q.is_power_of_two() {
        return Err(Error::BadShape(format!("q = {q} is not a power of two")));
    }
    let qf = q as f64;
    let half_log_n = 0.5 * (3.0 * qf).log10();
    let rep = match mode {
        QcMode::Base => BoundReport::new(
            BoundId::QuasiCyclicBase,
            qf / 2.0 * 2f64.log10() + half_log_n,
        ),
        QcMode::Eq15 => {
            let r = BoundReport::new(
                BoundId::QuasiCyclicEq15,
                qf / 6.0 * 18f64.log10() + half_log_n,
            );
            if q.is_multiple_of(12) {
                r
            } else {
                r.note("q not divisible by 12: real exponent q/6 used")
            }
        }
        QcMode::Eq16 => {
            let base = 2.0 * (PI / 12.0).cos() * 6f64.sqrt();
            let r = BoundReport::new(
                BoundId::QuasiCyclicEq16,
                qf / 3.0 * base.log10() + half_log_n,
            );
            if q.is_multiple_of(12) {
                r
            } else {
                r.note("q not divisible by 12: real exponent q/3 used")
            }
        }
        QcMode::Product => {
            let lp: f64 = (0..q)
                .map(|i| {
                    let c = 2.0 * ((0.5 - i as f64 / qf) * FRAC_PI_2).cos();
                    c.max(2f64.sqrt()).log10()
                })
                .sum();
            BoundReport::new(BoundId::QuasiCyclicProduct, lp + half_log_n)
        }
        QcMode::Integral => {
            return Ok(integral_report(BoundId::QuasiCyclicIntegral, q).param("n", 3 * q))
        }
    };
    Ok(rep
        .variant(InverseVariant::PaperEq5)
        .param("mode", serde_json::to_value(mode).unwrap())
        .param("q", q)
        .param("n", 3 * q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DftBlockMode {
    Base,
    Integral,
}

/// Lower bounds for the leading `n/2 x n/2` block of the n x n DFT matrix.
pub fn bound_dft_block(n: usize, mode: DftBlockMode) -> Result<BoundReport> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let nf = n as f64;
    let q = n / 2;
    Ok(match mode {
        DftBlockMode::Base => {
            let value = (nf / 4.0 - 1.0) * 2f64.log10() + 0.5 * nf.log10();
            let table_form = nf / 4.0 * 2f64.log10() + 0.5 * (nf / 2.0).log10();
            BoundReport::new(BoundId::DftBlock, value)
                .variant(InverseVariant::PaperEq5)
                .param("mode", "base")
                .param("n", n)
                .param("q", q)
                .param("log10_table_form", table_form)
        }
        DftBlockMode::Integral => integral_report(BoundId::DftBlock, q).param("n", n),
    })
}

/// `|t - c| <= |s - c| / eta` for every `s` in `big` and `t` in `small`.
pub fn is_separated(big: &KnotVector, small: &KnotVector, eta: f64, c: Complex64) -> bool {
    let inner = small
        .knots()
        .iter()
        .map(|t| (t - c).norm())
        .fold(0.0, f64::max);
    big.knots().iter().all(|s| inner <= (s - c).norm() / eta)
}

/// `1/sigma_rho(C) >= (eta - 1) eta^(rho-1) delta` for the Cauchy matrix of
/// `(eta, c)`-separated sets, `delta = min |s_i - c|`.
///
/// `params.rigorous_log10` holds the value obtained from truncating the
/// geometric expansion of `1/(s - t)` and bounding the remainder in the
/// Frobenius norm, `(eta - 1) eta^(rho-2) delta / sqrt(m l)`.
pub fn sigma_bound_separated(
    s: &KnotVector,
    t: &KnotVector,
    eta: f64,
    c: Complex64,
    rho: usize,
) -> Result<BoundReport> {
    if !(eta > 1.0) || rho == 0 {
        return Err(Error::InvalidArgument("need eta > 1 and rho >= 1".into()));
    }
    if !is_separated(s, t, eta, c) {
        return Err(Error::NotSeparated);
    }
    let delta = s
        .knots()
        .iter()
        .map(|z| (z - c).norm())
        .fold(f64::INFINITY, f64::min);
    let le = eta.log10();
    let value = (eta - 1.0).log10() + (rho as f64 - 1.0) * le + delta.log10();
    let ml = (s.len() * t.len()) as f64;
    let rigorous = value - le - 0.5 * ml.log10();
    Ok(BoundReport::new(BoundId::SeparationSigma, value)
        .param("quantity", "inverse_sigma_rho")
        .param("rho", rho)
        .param("eta", eta)
        .param("c", cpx(c))
        .param("delta", delta)
        .param("rigorous_log10", num(rigorous)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub j_lo: usize,
    pub j_hi: usize,
    pub l: usize,
    pub c: Complex64,
    pub r: f64,
    pub eta: f64,
    pub m_minus: usize,
    pub m_plus: usize,
    pub rho_bar: i64,
}

/// Knots within this distance of the inflated circle count as outside.
const BOUNDARY_TOL: f64 = 1e-14;

/// Certificate for the grid arc `t_{j_lo}, ..., t_{j_hi}` (indices mod n) of
/// `t_j = f omega_n^j`.
pub fn arc_certificate(
    s: &KnotVector,
    f: Complex64,
    j_lo: usize,
    j_hi: usize,
    eta: f64,
) -> Result<SeparationCertificate> {
    let n = s.len();
    if !(eta > 1.0) {
        return Err(Error::InvalidArgument("eta must exceed 1".into()));
    }
    if (f.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidArgument(
            "f must lie on the unit circle".into(),
        ));
    }
    if j_hi < j_lo || j_lo >= n {
        return Err(Error::InvalidArgument(format!("bad arc [{j_lo}, {j_hi}]")));
    }
    let l = j_hi - j_lo + 1;
    if 2 * l > n {
        return Err(Error::ArcTooLong { l, half: n / 2 });
    }
    let nn = n as u64;
    let t_lo = f * unit_root(j_lo as u64 % nn, nn);
    let t_hi = f * unit_root(j_hi as u64 % nn, nn);
    let c = 0.5 * (t_lo + t_hi);
    let r = (c - t_lo).norm();
    let radius = eta * r;
    let m_minus = s
        .knots()
        .iter()
        .filter(|z| (*z - c).norm() < radius - BOUNDARY_TOL)
        .count();
    Ok(SeparationCertificate {
        j_lo,
        j_hi,
        l,
        c,
        r,
        eta,
        m_minus,
        m_plus: n - m_minus,
        rho_bar: l as i64 - m_minus as i64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcForm {
    /// Bound on `||C^-1||` for the CV matrix.
    Cv,
    /// Bound on `kappa(V)`.
    Vandermonde,
}

fn arc_log10(cert: &SeparationCertificate, n: usize, form: ArcForm) -> f64 {
    let cv = cert.rho_bar as f64 * cert.eta.log10() + ((cert.eta - 1.0) * cert.r).log10();
    match form {
        ArcForm::Cv => cv,
        ArcForm::Vandermonde => cv + 0.5 * (n as f64).log10() - 2f64.log10(),
    }
}

/// `||C^-1|| >= eta^rho_bar (eta - 1) r`, and the resulting
/// `kappa(V) >= sqrt(n)/2 * eta^rho_bar (eta - 1) r` for knots in the unit disc.
pub fn bound_arc(
    s: &KnotVector,
    cert: &SeparationCertificate,
    form: ArcForm,
) -> Result<BoundReport> {
    if cert.rho_bar <= 0 || cert.r == 0.0 {
        return Err(Error::VacuousCertificate(cert.rho_bar));
    }
    let n = s.len();
    let value = arc_log10(cert, n, form);
    // same chain with the rigorous separated-sigma factor
    let rigorous = value - cert.eta.log10() - 0.5 * ((cert.m_plus * cert.l) as f64).log10();
    let id = match form {
        ArcForm::Cv => BoundId::ArcCv,
        ArcForm::Vandermonde => BoundId::ArcVandermonde,
    };
    let mut rep = BoundReport::new(id, value)
        .param("certificate", serde_json::to_value(cert).unwrap())
        .param("rigorous_log10", num(rigorous));
    if form == ArcForm::Vandermonde && !on_or_inside_unit_circle(s) {
        rep = rep.not_applicable("requires all knots in the closed unit disc");
    }
    Ok(rep)
}

/// Scans grid arcs of length up to n/2 and every `eta`, returning the
/// certificate with the largest Arc-Vandermonde bound. Ties go to the
/// smaller `l`, then `j_lo`, then `eta`. With `exhaustive` every arc is
/// visited (n <= 128 only); otherwise start points and lengths step by
/// `max(1, n/64)`.
pub fn best_arc_search(
    s: &KnotVector,
    f: Complex64,
    eta_grid: &[f64],
    exhaustive: bool,
) -> Result<(SeparationCertificate, BoundReport)> {
    if eta_grid.is_empty() || eta_grid.iter().any(|&e| !(e > 1.0)) {
        return Err(Error::InvalidArgument(
            "eta grid values must exceed 1".into(),
        ));
    }
    let n = s.len();
    if exhaustive && n > 128 {
        return Err(Error::InvalidArgument(
            "exhaustive arc scan limited to n <= 128".into(),
        ));
    }
    let stride = if exhaustive { 1 } else { (n / 64).max(1) };
    let best = (0..n)
        .step_by(stride)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|j_lo| {
            let mut local: Option<(f64, SeparationCertificate)> = None;
            for l in (stride..=n / 2).step_by(stride) {
                for &eta in eta_grid {
                    let cert = arc_certificate(s, f, j_lo, j_lo + l - 1, eta)?;
                    if cert.rho_bar <= 0 || cert.r == 0.0 {
                        continue;
                    }
                    let v = arc_log10(&cert, n, ArcForm::Vandermonde);
                    if v > 0.0
                        && local
                            .as_ref()
                            .is_none_or(|(b, bc)| better(v, &cert, *b, bc))
                    {
                        local = Some((v, cert));
                    }
                }
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .reduce(|a, b| if better(b.0, &b.1, a.0, &a.1) { b } else { a });
    let (_, cert) = best.ok_or(Error::NoPositiveBound)?;
    let rep = bound_arc(s, &cert, ArcForm::Vandermonde)?
        .param("stride", stride)
        .param("f", cpx(f));
    Ok((cert, rep))
}

fn better(v: f64, c: &SeparationCertificate, bv: f64, bc: &SeparationCertificate) -> bool {
    // values this close are ties; rounding must not decide the winner
    if (v - bv).abs() > 1e-9 {
        return v > bv;
    }
    (c.l, c.j_lo, c.eta) < (bc.l, bc.j_lo, bc.eta)
}

/// Every bound that applies to a knot vector, for reporting.
pub fn all_bounds(
    s: &KnotVector,
    f: Complex64,
    eta_grid: &[f64],
    grid: usize,
) -> Vec<std::result::Result<BoundReport, (BoundId, Error)>> {
    let mut out = vec![Ok(bound_easy(s))];
    out.push(bound_refined_norm(s).map_err(|e| (BoundId::RefinedNorm, e)));
    for v in [
        InverseVariant::DerivativeCorrected,
        InverseVariant::PaperEq5,
    ] {
        out.push(bound_cv(s, f, v).map_err(|e| (BoundId::Cv, e)));
    }
    out.push(bound_circle_value(s, grid).map_err(|e| (BoundId::CircleValue, e)));
    out.push(bound_coeff_norm(s).map_err(|e| (BoundId::CoeffNorm, e)));
    out.push(
        best_arc_search(s, f, eta_grid, false)
            .map(|(_, r)| r)
            .map_err(|e| (BoundId::ArcVandermonde, e)),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{
        make_knot_vector, quasi_cyclic, roots_of_unity, scaled_cluster, single_outlier, DEFAULT_TOL,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kv(pts: &[Complex64]) -> KnotVector {
        make_knot_vector(pts, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn easy_bound_values() {
        let b = bound_easy(&single_outlier(64, c(1.140625, 0.0)).unwrap());
        assert!((b.value() / 4.98e2 - 1.0).abs() < 5e-3, "{}", b.value());
        let b = bound_easy(&single_outlier(256, c(10.0, 0.0)).unwrap());
        assert!((b.log10value - (253.0 + 6.25f64.log10())).abs() < 2e-3);
        assert_eq!(bound_easy(&roots_of_unity(16).unwrap()).log10value, 0.0);
        assert_eq!(bound_easy(&kv(&[c(0.0, 0.0)])).log10value, 0.0);
    }

    #[test]
    fn cluster_bound() {
        let s = scaled_cluster(64, 8, 0.5).unwrap();
        let b = bound_cluster(&s, 8, 2.0, NormMode::Literal).unwrap();
        assert!((b.value() - 128.0 / (8f64.sqrt() * 8.0)).abs() < 1e-9);
        let b1 = bound_cluster(&s, 1, 2.0, NormMode::Literal).unwrap();
        assert!((b1.value() - 0.5).abs() < 1e-12);
        assert_eq!(
            bound_cluster(&s, 9, 2.0, NormMode::Literal),
            Err(Error::NotEnoughSmallKnots {
                needed: 9,
                found: 8
            })
        );
        let cn = bound_cluster(&s, 8, 2.0, NormMode::ComputedNorm).unwrap();
        assert!(cn.log10value > b.log10value);
        assert!(bound_cluster(&s, 8, 1.0, NormMode::Literal).is_err());
    }

    #[test]
    fn refined_norm() {
        let b = bound_refined_norm(&single_outlier(4, c(10.0, 0.0)).unwrap()).unwrap();
        assert!((b.value() - 9999.0 / 18.0).abs() < 1e-9);
        let s = single_outlier(64, c(1.140625, 0.0)).unwrap();
        assert!(bound_refined_norm(&s).unwrap().log10value >= bound_easy(&s).log10value);
        assert_eq!(
            bound_refined_norm(&roots_of_unity(8).unwrap()),
            Err(Error::UnitRadius)
        );
        let small = kv(&[c(0.5, 0.0), c(-0.25, 0.0)]);
        let b = bound_refined_norm(&small).unwrap();
        assert!((b.value() - 0.75 / (0.5 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cv_bound_on_dft_knots() {
        let s = roots_of_unity(8).unwrap();
        let f = Complex64::from_polar(1.0, 0.1);
        let dc = bound_cv(&s, f, InverseVariant::DerivativeCorrected).unwrap();
        assert!(dc.log10value <= 1e-12, "{}", dc.log10value);
        let svd = dc.params["log10value_svd"].as_f64().unwrap();
        assert!(svd >= dc.log10value - 1e-12 && svd <= 1e-9);
        let pe = bound_cv(&s, f, InverseVariant::PaperEq5).unwrap();
        assert!(pe.log10value > 0.0);
    }

    #[test]
    fn cv_bound_nudges_on_collision() {
        let s = quasi_cyclic(48).unwrap();
        let f = c(0.0, -1.0) * unit_root(1, 64);
        let b = bound_cv(&s, f, InverseVariant::PaperEq5).unwrap();
        assert_eq!(b.params["nudged"], json!(true));
        assert!(b.value() >= 1773.6);
        let r = bound_cv(&s, f, InverseVariant::DerivativeCorrected).unwrap();
        assert!(r.log10value.is_finite());
        assert!(bound_cv(&s, c(2.0, 0.0), InverseVariant::PaperEq5).is_err());
    }

    #[test]
    fn circle_and_coefficient_bounds() {
        let b = bound_circle_value(&roots_of_unity(8).unwrap(), 1024).unwrap();
        assert!((b.log10value - 0.5 * 8f64.log10()).abs() < 1e-12);
        assert!(b.params["log10_v_half_omega_n"].is_null());
        let one = bound_circle_value(&kv(&[c(0.0, 0.0)]), 1024).unwrap();
        assert!((one.log10value + 2f64.log10()).abs() < 1e-12);
        let q = bound_circle_value(&quasi_cyclic(48).unwrap(), 1024).unwrap();
        assert!(q.value() >= 1773.6 && q.applicable);

        let cn = bound_coeff_norm(&roots_of_unity(8).unwrap()).unwrap();
        assert!((cn.value() - 0.5 * 2f64.sqrt() * 3.0).abs() < 1e-12);
        let cn = bound_coeff_norm(&kv(&[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!((cn.value() - 0.5 * 2f64.sqrt() * 3f64.sqrt()).abs() < 1e-12);
        assert!(
            !bound_coeff_norm(&single_outlier(4, c(2.0, 0.0)).unwrap())
                .unwrap()
                .applicable
        );
    }

    #[test]
    fn parseval_between_circle_samples_and_coefficients() {
        let s = quasi_cyclic(24).unwrap();
        let cv = bound_circle_value(&s, 1024).unwrap();
        let cn = bound_coeff_norm(&s).unwrap();
        let sampled = cv.params["log10_v_half_omega_n_plus_1"].as_f64().unwrap();
        assert!((sampled - (cn.log10value)).abs() < 1e-10);
        assert!(cn.log10value <= cv.log10value + 0.5 * (25f64 / 24.0).log10() + 1e-12);
    }

    #[test]
    fn quasi_cyclic_staging() {
        let v = |m| bound_quasi_cyclic(16, m).unwrap().value();
        assert!((v(QcMode::Base) - 1024.0 * 3f64.sqrt()).abs() < 1e-9);
        assert!(
            (v(QcMode::Eq15) - 15417.0).abs() < 1.0,
            "{}",
            v(QcMode::Eq15)
        );
        assert!(
            (v(QcMode::Eq16) - 27598.0).abs() < 1.0,
            "{}",
            v(QcMode::Eq16)
        );
        for q in [16, 32] {
            let l: Vec<f64> = [QcMode::Base, QcMode::Eq15, QcMode::Eq16, QcMode::Product]
                .iter()
                .map(|&m| bound_quasi_cyclic(q, m).unwrap().log10value)
                .collect();
            assert!(l.windows(2).all(|w| w[0] <= w[1]), "{l:?}");
        }
        assert!(matches!(
            bound_quasi_cyclic(12, QcMode::Base),
            Err(Error::BadShape(_))
        ));
        assert!(bound_quasi_cyclic(12, QcMode::Eq15)
            .unwrap()
            .reason
            .is_empty());
    }

    #[test]
    fn integral_matches_catalan_closed_form() {
        for (q, expect) in [(4, 1.03e1), (8, 1.06e2), (16, 1.13e4), (32, 1.27e8)] {
            let b = bound_quasi_cyclic(q, QcMode::Integral).unwrap();
            assert!(b.params["relative_gap"].as_f64().unwrap() < 1e-9);
            assert!(
                (b.value() / expect - 1.0).abs() < 0.01,
                "{q}: {}",
                b.value()
            );
        }
        let d = bound_dft_block(32, DftBlockMode::Integral).unwrap();
        assert!((d.value() / 1.13e4 - 1.0).abs() < 0.01);
    }

    #[test]
    fn dft_block_base() {
        assert!(
            (bound_dft_block(8, DftBlockMode::Base).unwrap().value() - 8f64.sqrt() * 2.0).abs()
                < 1e-12
        );
        assert!((bound_dft_block(2, DftBlockMode::Base).unwrap().value() - 1.0).abs() < 1e-12);
        assert_eq!(
            bound_dft_block(7, DftBlockMode::Base),
            Err(Error::OddSize(7))
        );
        let t = bound_dft_block(16, DftBlockMode::Base).unwrap();
        assert!(
            (t.params["log10_table_form"].as_f64().unwrap() - (16.0 * 8f64.sqrt()).log10()).abs()
                < 1e-12
        );
    }

    #[test]
    fn separation_predicate_and_sigma_bound() {
        let s = kv(&[c(2.0, 0.0)]);
        let zero = c(0.0, 0.0);
        assert!(is_separated(&s, &kv(&[zero]), 2.0, zero));
        assert!(!is_separated(&s, &kv(&[c(1.5, 0.0)]), 2.0, zero));
        let b = sigma_bound_separated(&s, &kv(&[zero]), 2.0, zero, 1).unwrap();
        assert!((b.value() - 2.0).abs() < 1e-12);
        assert_eq!(
            sigma_bound_separated(&s, &kv(&[c(1.5, 0.0)]), 2.0, zero, 1),
            Err(Error::NotSeparated)
        );
        let near = sigma_bound_separated(&s, &kv(&[zero]), 1.0 + 1e-9, zero, 1).unwrap();
        assert!(near.value() < 1e-8);
    }

    #[test]
    fn arc_certificates() {
        let s = roots_of_unity(16).unwrap();
        let f = Complex64::from_polar(1.0, 0.05);
        for j in 0..16 {
            for l in 1..=8 {
                let cert = arc_certificate(&s, f, j, j + l - 1, 1.1).unwrap();
                assert!(cert.rho_bar <= 2);
                assert_eq!(cert.m_minus + cert.m_plus, 16);
            }
        }
        let one = arc_certificate(&s, f, 3, 3, 1.5).unwrap();
        assert_eq!(one.r, 0.0);
        assert!(bound_arc(&s, &one, ArcForm::Cv).is_err());
        assert!(matches!(
            arc_certificate(&s, f, 0, 8, 1.1),
            Err(Error::ArcTooLong { .. })
        ));

        let q = quasi_cyclic(48).unwrap();
        let lower = arc_certificate(&q, c(1.0, 0.0), 28, 35, 1.2).unwrap();
        assert!(lower.rho_bar > 0, "{lower:?}");
        let b = bound_arc(&q, &lower, ArcForm::Vandermonde).unwrap();
        assert!(b.applicable && b.log10value.is_finite());
    }

    #[test]
    fn arc_search() {
        assert_eq!(
            best_arc_search(
                &roots_of_unity(64).unwrap(),
                Complex64::from_polar(1.0, PI / 64.0),
                &DEFAULT_ETA_GRID,
                false
            )
            .unwrap_err(),
            Error::NoPositiveBound
        );
        assert_eq!(
            best_arc_search(
                &roots_of_unity(2).unwrap(),
                c(0.0, 1.0),
                &DEFAULT_ETA_GRID,
                false
            )
            .unwrap_err(),
            Error::NoPositiveBound
        );
        let q = quasi_cyclic(96).unwrap();
        let (cert, rep) = best_arc_search(
            &q,
            Complex64::from_polar(1.0, PI / 96.0),
            &DEFAULT_ETA_GRID,
            false,
        )
        .unwrap();
        assert!(rep.log10value > 0.0 && rep.log10value <= 9.86e14f64.log10());
        let mid = cert.c.arg();
        assert!(mid < 0.0, "{cert:?}");
        assert!(best_arc_search(&q, c(1.0, 0.0), &[1.0], false).is_err());
    }

    #[test]
    fn arc_search_rotation_invariant() {
        let q = quasi_cyclic(48).unwrap();
        let f = Complex64::from_polar(1.0, 0.01);
        let a = Complex64::from_polar(1.0, 0.7);
        let (c1, r1) = best_arc_search(&q, f, &DEFAULT_ETA_GRID, false).unwrap();
        let (c2, r2) = best_arc_search(&q.scaled(a), f * a, &DEFAULT_ETA_GRID, false).unwrap();
        assert_eq!(
            (c1.j_lo, c1.l, c1.eta, c1.rho_bar),
            (c2.j_lo, c2.l, c2.eta, c2.rho_bar)
        );
        assert!((r1.log10value - r2.log10value).abs() < 1e-9);
    }
}
