//! Experiment tables: the five standard conditioning experiments, computed
//! row by row and serialized as CSV, markdown or JSON.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bound_cluster, bound_dft_block, bound_easy, bound_quasi_cyclic, BoundId, BoundReport,
    DftBlockMode, NormMode, QcMode,
};
use crate::cauchyinv::InverseVariant;
use crate::error::{Error, Result};
use crate::knots::{quasi_cyclic, scaled_cluster, single_outlier};
use crate::matrix::{dft, leading_block, vandermonde};
use crate::spectral::{genp_residual_experiment, singular_values, SpectrumSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches(['T', 't']) {
            "1" => Ok(TableId::T1),
            "2" => Ok(TableId::T2),
            "3" => Ok(TableId::T3),
            "4" => Ok(TableId::T4),
            "5" => Ok(TableId::T5),
            _ => Err(Error::InvalidArgument(format!("unknown table id {s:?}"))),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Outlier values for table T1. The first is `1 + 9/64`, the dyadic value
/// behind the `1.14` row label.
pub const T1_OUTLIERS: [f64; 4] = [1.140625, 1.5625, 3.25, 10.0];
pub const T1_SIZES: [usize; 3] = [64, 128, 256];
pub const T2_SIZES: [usize; 3] = [64, 128, 256];
pub const T2_CLUSTERS: [usize; 3] = [8, 16, 32];
pub const T2_RHOS: [f64; 2] = [0.75, 0.5];
pub const T3_QS: [usize; 4] = [4, 8, 16, 32];
pub const T4_SIZES: [usize; 4] = [8, 16, 32, 64];
pub const T5_SIZES: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];
pub const T5_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Int,
    Real,
    Flag,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

fn col(name: &str, kind: ColumnKind) -> Column {
    Column {
        name: name.to_string(),
        kind,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Cell {
    Int {
        value: i64,
    },
    Real {
        /// `None` when the number does not fit in a double.
        value: Option<f64>,
        /// `None` for zero.
        log10: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trustworthy: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound_id: Option<BoundId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variant: Option<InverseVariant>,
    },
    Flag {
        value: bool,
    },
    Text {
        value: String,
    },
    Error {
        message: String,
    },
}

impl Cell {
    pub fn int(v: usize) -> Cell {
        Cell::Int { value: v as i64 }
    }

    pub fn real(v: f64) -> Cell {
        Cell::Real {
            value: Some(v).filter(|x| x.is_finite()),
            log10: Some(v.abs().log10()).filter(|x| x.is_finite()),
            trustworthy: None,
            bound_id: None,
            variant: None,
        }
    }

    pub fn from_log10(l: f64) -> Cell {
        let v = 10f64.powf(l);
        Cell::Real {
            value: Some(v).filter(|x| x.is_finite() && *x != 0.0),
            log10: Some(l).filter(|x| x.is_finite()),
            trustworthy: None,
            bound_id: None,
            variant: None,
        }
    }

    pub fn kappa(s: &SpectrumSummary) -> Cell {
        match Cell::from_log10(s.log10kappa) {
            Cell::Real { value, log10, .. } => Cell::Real {
                value,
                log10,
                trustworthy: Some(s.trustworthy),
                bound_id: None,
                variant: None,
            },
            other => other,
        }
    }

    pub fn bound(r: &BoundReport) -> Cell {
        match Cell::from_log10(r.log10value) {
            Cell::Real { value, log10, .. } => Cell::Real {
                value,
                log10,
                trustworthy: None,
                bound_id: Some(r.bound_id),
                variant: r.variant,
            },
            other => other,
        }
    }

    /// Numeric content, if any.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int { value } => Some(*value as f64),
            Cell::Real { value, .. } => *value,
            _ => None,
        }
    }

    pub fn log10(&self) -> Option<f64> {
        match self {
            Cell::Real { log10, .. } => *log10,
            Cell::Int { value } => Some((*value as f64).log10()),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int { value } => value.to_string(),
            Cell::Real { value, log10, .. } => sci3(*value, *log10),
            Cell::Flag { value } => value.to_string(),
            Cell::Text { value } => value.clone(),
            Cell::Error { message } => format!("error: {message}"),
        }
    }
}

/// Scientific notation with three significant digits, `1.53E+01` style.
/// Values beyond double range are rendered from their log10.
pub fn sci3(value: Option<f64>, log10: Option<f64>) -> String {
    match (value, log10) {
        (Some(v), _) if v.is_finite() => {
            let s = format!("{v:.2e}");
            let (m, e) = s.split_once('e').expect("exponent form");
            let e: i32 = e.parse().expect("integer exponent");
            format!("{m}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        (_, Some(l)) => {
            let mut e = l.floor();
            let mut m = format!("{:.2}", 10f64.powf(l - e));
            if m == "10.00" {
                m = "1.00".to_string();
                e += 1.0;
            }
            format!(
                "{m}E{}{:02}",
                if e < 0.0 { '-' } else { '+' },
                e.abs() as i64
            )
        }
        (_, None) => "0.00E+00".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub trials: Option<usize>,
    pub tool_version: String,
    pub timestamp_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub table_id: TableId,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub metadata: Metadata,
}

impl ExperimentTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Cell of the first row whose leading cells equal `key`.
    pub fn lookup(&self, key: &[f64], column: &str) -> Option<&Cell> {
        let j = self.column_index(column)?;
        self.rows
            .iter()
            .find(|r| {
                key.iter().zip(&r.cells).all(|(k, c)| {
                    c.as_f64()
                        .is_some_and(|v| (v - k).abs() <= 1e-12 * k.abs().max(1.0))
                })
            })
            .map(|r| &r.cells[j])
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.failed_rows() == self.rows.len()
    }
}

/// Restricts a run to other sizes, trial counts or seeds. Sizes are `n` for
/// every table except T3, where they are `q`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub sizes: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

type RowFn = Box<dyn Fn() -> Result<Vec<Cell>> + Send + Sync>;

struct Layout {
    columns: Vec<Column>,
    /// Key cells of each row plus the computation of the remaining cells.
    rows: Vec<(Vec<Cell>, RowFn)>,
}

fn flag(s: &SpectrumSummary) -> Cell {
    Cell::Flag {
        value: s.trustworthy,
    }
}

fn t1(sizes: &[usize]) -> Layout {
    use ColumnKind::*;
    let mut rows: Vec<(Vec<Cell>, RowFn)> = Vec::new();
    for &n in sizes {
        for &s_last in &T1_OUTLIERS {
            rows.push((
                vec![Cell::int(n), Cell::real(s_last)],
                Box::new(move || {
                    let s = single_outlier(n, Complex64::new(s_last, 0.0))?;
                    let k = singular_values(&vandermonde(&s)?)?;
                    Ok(vec![
                        Cell::kappa(&k),
                        Cell::bound(&bound_easy(&s)),
                        flag(&k),
                    ])
                }),
            ));
        }
    }
    Layout {
        columns: vec![
            col("n", Int),
            col("s_last", Real),
            col("kappa", Real),
            col("easy_bound", Real),
            col("kappa_trustworthy", Flag),
        ],
        rows,
    }
}

fn t2(sizes: &[usize]) -> Layout {
    use ColumnKind::*;
    let mut rows: Vec<(Vec<Cell>, RowFn)> = Vec::new();
    for &n in sizes {
        for &k in &T2_CLUSTERS {
            for &rho in &T2_RHOS {
                rows.push((
                    vec![Cell::int(n), Cell::int(k), Cell::real(rho)],
                    Box::new(move || {
                        let s = scaled_cluster(n, k, rho)?;
                        let kap = singular_values(&vandermonde(&s)?)?;
                        let nu = 1.0 / rho;
                        let lit = bound_cluster(&s, k, nu, NormMode::Literal)?;
                        let cn = bound_cluster(&s, k, nu, NormMode::ComputedNorm)?;
                        Ok(vec![
                            Cell::kappa(&kap),
                            Cell::bound(&lit),
                            Cell::bound(&cn),
                            flag(&kap),
                        ])
                    }),
                ));
            }
        }
    }
    Layout {
        columns: vec![
            col("n", Int),
            col("k", Int),
            col("rho", Real),
            col("kappa", Real),
            col("kappa_minus_literal", Real),
            col("kappa_minus_computed_norm", Real),
            col("kappa_trustworthy", Flag),
        ],
        rows,
    }
}

fn t3(qs: &[usize]) -> Layout {
    use ColumnKind::*;
    let rows = qs
        .iter()
        .map(|&q| {
            let f: RowFn = Box::new(move || {
                let s = quasi_cyclic(3 * q)?;
                let k = singular_values(&vandermonde(&s)?)?;
                Ok(vec![
                    Cell::kappa(&k),
                    Cell::bound(&bound_quasi_cyclic(q, QcMode::Base)?),
                    Cell::bound(&bound_quasi_cyclic(q, QcMode::Product)?),
                    Cell::bound(&bound_quasi_cyclic(q, QcMode::Integral)?),
                    flag(&k),
                ])
            });
            (vec![Cell::int(3 * q), Cell::int(q)], f)
        })
        .collect();
    Layout {
        columns: vec![
            col("n", Int),
            col("q", Int),
            col("kappa", Real),
            col("kappa_base", Real),
            col("kappa_product", Real),
            col("kappa_prime", Real),
            col("kappa_trustworthy", Flag),
        ],
        rows,
    }
}

fn t4(sizes: &[usize]) -> Layout {
    use ColumnKind::*;
    let rows = sizes
        .iter()
        .map(|&n| {
            let f: RowFn = Box::new(move || {
                let k = singular_values(&leading_block(&dft(n)?, n / 2)?)?;
                Ok(vec![
                    Cell::kappa(&k),
                    Cell::bound(&bound_dft_block(n, DftBlockMode::Base)?),
                    Cell::bound(&bound_dft_block(n, DftBlockMode::Integral)?),
                    flag(&k),
                ])
            });
            (vec![Cell::int(n), Cell::int(n / 2)], f)
        })
        .collect();
    Layout {
        columns: vec![
            col("n", Int),
            col("q", Int),
            col("kappa", Real),
            col("kappa_minus", Real),
            col("kappa_prime_minus", Real),
            col("kappa_trustworthy", Flag),
        ],
        rows,
    }
}

fn t5(sizes: &[usize], trials: usize, seed: u64) -> Layout {
    use ColumnKind::*;
    let rows = sizes
        .iter()
        .map(|&n| {
            let f: RowFn = Box::new(move || {
                let st = genp_residual_experiment(n, trials, seed)?;
                Ok(vec![Cell::real(st.mean_rn), Cell::real(st.std_rn)])
            });
            (vec![Cell::int(n)], f)
        })
        .collect();
    Layout {
        columns: vec![col("n", Int), col("mean_rn", Real), col("std_rn", Real)],
        rows,
    }
}

/// Runs one experiment table. Rows are computed in parallel but kept in grid
/// order; a row whose computation fails keeps its key cells and gets error
/// cells everywhere else.
pub fn run_table(id: TableId, overrides: &Overrides) -> Result<ExperimentTable> {
    let seed = overrides.seed.unwrap_or(0);
    let trials = overrides.trials.unwrap_or(T5_TRIALS);
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let sizes = |default: &[usize]| overrides.sizes.clone().unwrap_or_else(|| default.to_vec());
    let layout = match id {
        TableId::T1 => t1(&sizes(&T1_SIZES)),
        TableId::T2 => t2(&sizes(&T2_SIZES)),
        TableId::T3 => t3(&sizes(&T3_QS)),
        TableId::T4 => t4(&sizes(&T4_SIZES)),
        TableId::T5 => t5(&sizes(&T5_SIZES), trials, seed),
    };
    let width = layout.columns.len();
    let rows = layout
        .rows
        .par_iter()
        .map(|(key, compute)| {
            let mut cells = key.clone();
            match compute() {
                Ok(rest) => {
                    cells.extend(rest);
                    Row { cells, error: None }
                }
                Err(e) => {
                    let message = e.to_string();
                    cells.resize(
                        width,
                        Cell::Error {
                            message: message.clone(),
                        },
                    );
                    Row {
                        cells,
                        error: Some(message),
                    }
                }
            }
        })
        .collect();
    Ok(ExperimentTable {
        table_id: id,
        columns: layout.columns,
        rows,
        metadata: Metadata {
            seed,
            trials: (id == TableId::T5).then_some(trials),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_csv(t: &ExperimentTable) -> String {
    let mut out = String::new();
    let trials = t.metadata.trials.map_or("-".to_string(), |n| n.to_string());
    let _ = writeln!(
        out,
        "# table={} seed={} trials={} version={}",
        t.table_id, t.metadata.seed, trials, t.metadata.tool_version
    );
    let _ = writeln!(out, "# timestamp_unix={}", t.metadata.timestamp_unix);
    let reals: Vec<usize> = (0..t.columns.len())
        .filter(|&j| t.columns[j].kind == ColumnKind::Real)
        .collect();
    let mut header: Vec<String> = t.columns.iter().map(|c| c.name.clone()).collect();
    header.extend(
        reals
            .iter()
            .map(|&j| format!("{}_log10", t.columns[j].name)),
    );
    header.push("error".into());
    let _ = writeln!(out, "{}", header.join(","));
    for row in &t.rows {
        let mut fields: Vec<String> = row.cells.iter().map(|c| csv_field(&c.render())).collect();
        fields.extend(reals.iter().map(|&j| match &row.cells[j] {
            Cell::Real { log10: Some(l), .. } => format!("{l:?}"),
            _ => String::new(),
        }));
        fields.push(csv_field(row.error.as_deref().unwrap_or("")));
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

fn emit_markdown(t: &ExperimentTable) -> String {
    let mut out = String::new();
    let names: Vec<&str> = t.columns.iter().map(|c| c.name.as_str()).collect();
    let _ = writeln!(out, "| {} |", names.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(names.len()));
    for row in &t.rows {
        let cells: Vec<String> = row
            .cells
            .iter()
            .map(|c| c.render().replace('|', "\\|"))
            .collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

/// Deterministic serialization; only the timestamp varies between runs.
pub fn emit(t: &ExperimentTable, format: Format) -> String {
    match format {
        Format::Csv => emit_csv(t),
        Format::Markdown => emit_markdown(t),
        Format::Json => serde_json::to_string_pretty(t).expect("tables serialize") + "\n",
    }
}

pub fn parse_json(text: &str) -> Result<ExperimentTable> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })
}
