//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::time::Instant;

use common::{c, cauchy_pair, log10_derivative, separated_instance};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vandcond::bounds::{
    best_arc_search, bound_circle_value, bound_cv, bound_easy, bound_quasi_cyclic, is_separated,
    sigma_bound_separated, QcMode, CATALAN, DEFAULT_ETA_GRID,
};
use vandcond::cauchyinv::{
    cauchy_inverse, cauchy_inverse_entry, vandermonde_inverse_lagrange, vandermonde_inverse_via_cv,
    InverseVariant,
};
use vandcond::knots::{roots_of_unity, van_der_corput};
use vandcond::lab::{run_table, sci3, ExperimentTable, Overrides, TableId};
use vandcond::matrix::{cauchy, dft, vandermonde, DenseMatrix};
use vandcond::spectral::{genp_residual_experiment, norms, singular_values};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn table(id: TableId) -> ExperimentTable {
    run_table(id, &Overrides::default()).expect("table runs")
}

/// Checks `column` of the rows keyed by `key` against reference values.
fn compare(t: &ExperimentTable, column: &str, rows: &[(&[f64], f64, f64)]) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (key, want, tol) in rows {
        let got = t.lookup(key, column).and_then(|c| c.as_f64());
        let good = got.is_some_and(|g| rel(g, *want) <= *tol);
        ok &= good;
        notes.push(format!(
            "{key:?} {} vs {want:.3e} ({}{:.1}%)",
            got.map_or("error".into(), |g| format!("{g:.3e}")),
            if good { "ok " } else { "off " },
            got.map_or(f64::NAN, |g| 100.0 * rel(g, *want))
        ));
    }
    (ok, notes)
}

fn closed_form_inversion() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240101);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let (s, t) = cauchy_pair(&mut rng, n, 0.05);
        let prod = cauchy(&s, &t)
            .unwrap()
            .matmul(&cauchy_inverse(&s, &t, InverseVariant::DerivativeCorrected).unwrap())
            .unwrap();
        worst = worst.max(prod.max_dev_from_identity());
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-8 && secs < 10.0,
        detail: format!("max |C C^-1 - I| = {worst:.2e} over 200 instances in {secs:.2}s"),
    }
}

fn cv_factorization() -> Outcome {
    let f = Complex64::from_polar(1.0, 0.3);
    let mut worst_res = 0.0f64;
    let mut worst_gap = 0.0f64;
    for n in [4, 8, 16, 32] {
        let s = van_der_corput(n).unwrap();
        let v = vandermonde(&s).unwrap();
        let inv = vandermonde_inverse_via_cv(&s, f, InverseVariant::DerivativeCorrected).unwrap();
        worst_res = worst_res.max(v.matmul(&inv).unwrap().max_dev_from_identity());
        let lag = vandermonde_inverse_lagrange(&s).unwrap();
        worst_gap = worst_gap.max(inv.max_abs_diff(&lag).unwrap());
    }
    Outcome {
        pass: worst_res <= 1e-7 && worst_gap <= 1e-7,
        detail: format!("max |V V^-1 - I| = {worst_res:.2e}, Lagrange vs CV {worst_gap:.2e}"),
    }
}

fn dft_conditioning() -> Outcome {
    let mut worst_k = 0.0f64;
    let mut worst_n = 0.0f64;
    for n in [2usize, 4, 8, 16, 64] {
        let m = dft(n).unwrap();
        worst_k = worst_k.max((singular_values(&m).unwrap().kappa - 1.0).abs());
        worst_n = worst_n.max((norms(&m).unwrap().norm2 - (n as f64).sqrt()).abs());
    }
    Outcome {
        pass: worst_k <= 1e-12 && worst_n <= 1e-12,
        detail: format!("|kappa - 1| <= {worst_k:.1e}, |norm - sqrt n| <= {worst_n:.1e}"),
    }
}

fn dft_blocks() -> Outcome {
    let t = table(TableId::T4);
    let (ok, notes) = compare(
        &t,
        "kappa",
        &[
            (&[8.0], 1.53e1, 0.02),
            (&[16.0], 1.06e3, 0.02),
            (&[32.0], 8.18e6, 0.02),
            (&[64.0], 8.44e14, 0.10),
        ],
    );
    let flagged = t
        .lookup(&[64.0], "kappa_trustworthy")
        .is_some_and(|c| matches!(c, vandcond::lab::Cell::Flag { value: false }));
    Outcome {
        pass: ok && flagged,
        detail: format!(
            "{}; n=64 flagged untrustworthy: {flagged}",
            notes.join(", ")
        ),
    }
}

fn quasi_cyclic_table() -> Outcome {
    let t = table(TableId::T3);
    let (ok, notes) = compare(
        &t,
        "kappa",
        &[
            (&[12.0], 2.16e1, 0.02),
            (&[24.0], 1.50e3, 0.02),
            (&[48.0], 1.16e7, 0.05),
            (&[96.0], 9.86e14, 0.15),
        ],
    );
    Outcome {
        pass: ok,
        detail: notes.join(", "),
    }
}

fn single_outlier_table() -> Outcome {
    let t = table(TableId::T1);
    let (ok, mut notes) = compare(
        &t,
        "kappa",
        &[
            (&[64.0, 1.140625], 3.36e3, 0.05),
            (&[128.0, 1.140625], 1.08e7, 0.05),
            (&[256.0, 1.140625], 1.57e14, 0.05),
        ],
    );
    let expected = [
        "4.98E+02",
        "2.03E+11",
        "2.22E+31",
        "1.25E+62",
        "1.60E+06",
        "3.64E+23",
        "9.03E+63",
        "8.84E+125",
        "2.33E+13",
        "1.66E+48",
        "2.12E+129",
        "6.25E+253",
    ];
    let j = t.column_index("easy_bound").unwrap();
    let k = t.column_index("kappa").unwrap();
    let mut bound_ok = true;
    let mut dominated = true;
    for (row, want) in t.rows.iter().zip(expected) {
        let got = sci3(row.cells[j].as_f64(), row.cells[j].log10());
        if got != want {
            bound_ok = false;
            notes.push(format!("bound {got} != {want}"));
        }
        dominated &=
            row.cells[k].log10().unwrap_or(f64::NEG_INFINITY) >= row.cells[j].log10().unwrap();
    }
    notes.push(format!(
        "12 bound cells match: {bound_ok}, kappa >= bound on every row: {dominated}"
    ));
    Outcome {
        pass: ok && bound_ok && dominated,
        detail: notes.join(", "),
    }
}

fn cluster_table() -> Outcome {
    let t = table(TableId::T2);
    let reference: [(f64, f64, f64, f64, f64); 18] = [
        (64.0, 8.0, 0.75, 4.04e1, 7.14e0),
        (64.0, 8.0, 0.5, 6.90e2, 2.44e2),
        (64.0, 16.0, 0.75, 2.71e2, 4.78e1),
        (64.0, 16.0, 0.5, 1.19e5, 4.19e4),
        (64.0, 32.0, 0.75, 1.71e4, 3.02e3),
        (64.0, 32.0, 0.5, 4.91e9, 1.74e9),
        (128.0, 8.0, 0.75, 5.85e1, 1.03e1),
        (128.0, 8.0, 0.5, 1.00e3, 3.53e2),
        (128.0, 16.0, 0.75, 4.03e2, 7.13e1),
        (128.0, 16.0, 0.5, 1.77e5, 6.24e4),
        (128.0, 32.0, 0.75, 2.70e4, 4.77e3),
        (128.0, 32.0, 0.5, 7.77e9, 2.75e9),
        (256.0, 8.0, 0.75, 8.38e1, 1.48e1),
        (256.0, 8.0, 0.5, 1.43e3, 5.06e2),
        (256.0, 16.0, 0.75, 5.85e2, 1.03e2),
        (256.0, 16.0, 0.5, 2.56e5, 9.05e4),
        (256.0, 32.0, 0.75, 4.02e4, 7.11e3),
        (256.0, 32.0, 0.5, 1.16e10, 4.09e9),
    ];
    let mut kappa_ok = 0;
    let mut minus_ok = 0;
    let mut ratios = Vec::new();
    for (n, k, rho, kap, minus) in reference {
        let key = [n, k, rho];
        let got = t.lookup(&key, "kappa").and_then(|c| c.as_f64());
        kappa_ok += got.is_some_and(|g| rel(g, kap) <= 0.05) as usize;
        let cn = t
            .lookup(&key, "kappa_minus_computed_norm")
            .and_then(|c| c.as_f64());
        minus_ok += cn.is_some_and(|g| rel(g, minus) <= 0.15) as usize;
        if let Some(g) = cn {
            ratios.push(minus / g);
        }
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Outcome {
        pass: kappa_ok == 18 && minus_ok == 18,
        detail: format!(
            "kappa within 5%: {kappa_ok}/18; computed-norm lower bound within 15%: {minus_ok}/18 \
             (reference/computed ratio {lo:.2}..{hi:.2})"
        ),
    }
}

fn bound_spot_checks() -> Outcome {
    let v = |q, m| bound_quasi_cyclic(q, m).unwrap().value();
    let base = v(16, QcMode::Base);
    let e15 = v(16, QcMode::Eq15);
    let e16 = v(16, QcMode::Eq16);
    let mut ok = (base - 1773.6).abs() <= 0.1
        && (e15 - 15417.0).abs() <= 1.0
        && (e16 - 27598.0).abs() <= 1.0;
    let mut notes = vec![format!("base {base:.2}, staged {e15:.1}, {e16:.1}")];
    for (q, want) in [(4, 1.03e1), (8, 1.06e2), (16, 1.13e4), (32, 1.27e8)] {
        let got = v(q, QcMode::Integral);
        let closed = (q as f64 * 2.0 * CATALAN / std::f64::consts::PI).exp();
        let good = rel(got, want) <= 0.01 && rel(got, closed) <= 1e-9;
        ok &= good;
        notes.push(format!("q={q} integral {got:.3e}"));
    }
    Outcome {
        pass: ok,
        detail: notes.join(", "),
    }
}

fn genp_experiment() -> Outcome {
    let start = Instant::now();
    let reference: [(usize, f64); 4] =
        [(16, 8.88e-14), (32, 8.01e-10), (64, 5.31e-3), (128, 5.00e0)];
    let means: Vec<(usize, f64)> = [16, 32, 64, 128, 256]
        .iter()
        .map(|&n| (n, genp_residual_experiment(n, 100, 0).unwrap().mean_rn))
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let within = reference
        .iter()
        .zip(&means)
        .all(|((_, want), (_, got))| (got.log10() - want.log10()).abs() <= 1.0);
    let increasing = means.windows(2).all(|w| w[1].1 > w[0].1);
    let shown: Vec<String> = means
        .iter()
        .map(|(n, m)| format!("n={n} {m:.2e}"))
        .collect();
    Outcome {
        pass: within && increasing && secs < 60.0,
        detail: format!(
            "{} in {secs:.1}s; within 10x: {within}, increasing: {increasing}",
            shown.join(", ")
        ),
    }
}

fn separation_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut violated = 0;
    let mut rigorous_violated = 0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=8);
        let l = rng.gen_range(1..=8);
        let inst = separated_instance(&mut rng, m, l);
        assert!(is_separated(&inst.s, &inst.t, inst.eta, inst.c));
        let sigma = singular_values(&cauchy(&inst.s, &inst.t).unwrap())
            .unwrap()
            .sigma;
        for rho in 1..=3usize.min(m.min(l)) {
            let b = sigma_bound_separated(&inst.s, &inst.t, inst.eta, inst.c, rho).unwrap();
            let inv_sigma = -sigma[rho - 1].log10();
            checked += 1;
            violated += (inv_sigma < b.log10value - 1e-12) as usize;
            let rig = b.params["rigorous_log10"].as_f64().unwrap();
            rigorous_violated += (inv_sigma < rig - 1e-12) as usize;
        }
    }
    let mut interlace_fail = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=4);
        let b = DenseMatrix::from_fn(n + k, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .unwrap();
        let rows: Vec<usize> = (0..n).collect();
        let a = b.submatrix(&rows, &rows).unwrap();
        let sa = singular_values(&a).unwrap().sigma;
        let sb = singular_values(&b).unwrap().sigma;
        interlace_fail += (0..n)
            .filter(|&j| j + k < n && sa[j] < sb[j + k] - 1e-12)
            .count();
    }
    Outcome {
        pass: violated == 0 && interlace_fail == 0,
        detail: format!(
            "sigma_rho <= 1/((eta-1) eta^(rho-1) delta) violated in {violated}/{checked} cases \
             (truncation bound with sqrt(ml) eta factor: {rigorous_violated} violations); \
             interlacing failures {interlace_fail}/100"
        ),
    }
}

fn arc_search() -> Outcome {
    let dft_knots = roots_of_unity(64).unwrap();
    let even = best_arc_search(
        &dft_knots,
        Complex64::from_polar(1.0, std::f64::consts::PI / 64.0),
        &DEFAULT_ETA_GRID,
        false,
    );
    let even_ok = matches!(even, Err(vandcond::Error::NoPositiveBound));
    let q = vandcond::knots::quasi_cyclic(96).unwrap();
    let kappa = singular_values(&vandermonde(&q).unwrap())
        .unwrap()
        .log10kappa;
    let (ok_qc, detail) = match best_arc_search(&q, Complex64::from_polar(1.0, std::f64::consts::PI / 96.0), &DEFAULT_ETA_GRID, false) {
        Ok((cert, rep)) => (
            rep.log10value > 0.0 && rep.log10value <= kappa,
            format!(
                "quasi-cyclic n=96 bound 10^{:.2} <= kappa 10^{kappa:.2} (l={}, eta={}, rho_bar={})",
                rep.log10value, cert.l, cert.eta, cert.rho_bar
            ),
        ),
        Err(e) => (false, format!("quasi-cyclic n=96: {e}")),
    };
    Outcome {
        pass: even_ok && ok_qc,
        detail: format!("roots of unity n=64 -> NoPositiveBound: {even_ok}; {detail}"),
    }
}

fn discrepancy_probes() -> Outcome {
    let s = roots_of_unity(8).unwrap();
    let circle = bound_circle_value(&s, 1024).unwrap();
    let exceeds = circle.log10value > 1e-9;
    let mut corrected_ok = true;
    for k in 0..16 {
        let f = Complex64::from_polar(1.0, 0.05 + k as f64 * 0.37);
        corrected_ok &= bound_cv(&s, f, InverseVariant::DerivativeCorrected)
            .unwrap()
            .log10value
            <= 1e-9;
        corrected_ok &= bound_easy(&s).log10value <= 1e-9;
        match best_arc_search(&s, f, &DEFAULT_ETA_GRID, true) {
            Ok((_, r)) => corrected_ok &= r.log10value <= 1e-9,
            Err(e) => corrected_ok &= e == vandcond::Error::NoPositiveBound,
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (sv, tv) = cauchy_pair(&mut rng, 2, 0.05);
        for i in 0..2 {
            for j in 0..2 {
                let compact =
                    cauchy_inverse_entry(&sv, &tv, i, j, InverseVariant::PaperEq5).unwrap();
                let exact =
                    cauchy_inverse_entry(&sv, &tv, j, i, InverseVariant::DerivativeCorrected)
                        .unwrap();
                let factor = log10_derivative(sv.knots(), i) + log10_derivative(tv.knots(), j);
                worst = worst.max((compact.log10mag - exact.log10mag - factor).abs());
            }
        }
    }
    Outcome {
        pass: exceeds && corrected_ok && worst <= 1e-10,
        detail: format!(
            "circle-value bound 10^{:.3} > kappa = 1: {exceeds}; corrected and arc bounds <= 1: {corrected_ok}; \
             max log gap from |s'||t'| = {worst:.1e}",
            circle.log10value
        ),
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("closed-form Cauchy inversion", closed_form_inversion),
        ("CV factorization of V^-1", cv_factorization),
        ("DFT conditioning", dft_conditioning),
        ("DFT leading blocks (T4)", dft_blocks),
        ("quasi-cyclic knots (T3)", quasi_cyclic_table),
        ("single large knot (T1)", single_outlier_table),
        ("small-knot cluster (T2)", cluster_table),
        ("bound formula spot checks", bound_spot_checks),
        ("GENP residuals (T5)", genp_experiment),
        ("separation and interlacing", separation_suite),
        ("arc search", arc_search),
        ("discrepancy probes", discrepancy_probes),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += !o.pass as usize;
        println!(
            "{} [{:>2}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
