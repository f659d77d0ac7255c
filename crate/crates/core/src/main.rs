use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use vandcond::bounds::{
    all_bounds, bound_cluster, bound_quasi_cyclic, BoundId, NormMode, QcMode, DEFAULT_ETA_GRID,
};
use vandcond::cauchyinv::{
    cauchy_inverse, cauchy_inverse_log, cv_inverse_log, vandermonde_inverse_lagrange,
    vandermonde_inverse_via_cv, InverseVariant,
};
use vandcond::knots::{
    quasi_cyclic, read_knot_file, roots_of_unity, scaled_cluster, single_outlier, van_der_corput,
    write_knots, KnotVector, Provenance, DEFAULT_TOL,
};
use vandcond::lab::{emit, run_table, Format, Overrides, TableId};
use vandcond::logc::LogComplex;
use vandcond::matrix::{cv_grid, cv_matrix, dft, leading_block, vandermonde};
use vandcond::spectral::{
    default_circle_grid, genp_residual_experiment, max_abs_on_circle, singular_values, RNG_NAME,
};
use vandcond::{Error, Result};

#[derive(Parser)]
#[command(
    name = "vandcond",
    version,
    about = "Condition numbers of Vandermonde, Cauchy and DFT matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a knot vector and write it as `re,im` lines.
    GenKnots {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Condition number of the Vandermonde matrix, as one CSV row.
    Cond {
        #[command(flatten)]
        src: Source,
        /// Use only the leading q x q block.
        #[arg(long)]
        block: Option<usize>,
    },
    /// Build a structured matrix and print its shape and descriptor.
    Build {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = MatrixKind::Vandermonde)]
        matrix: MatrixKind,
        /// Grid rotation for the CV matrix.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        f: Option<Complex64>,
        #[arg(long)]
        block: Option<usize>,
        /// Print every entry as `re,im` after a `rows cols` line.
        #[arg(long)]
        dump: bool,
    },
    /// Closed-form inverse of the Vandermonde or CV matrix.
    Invert {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = Method::Cv)]
        method: Method,
        #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
        variant: VariantArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        f: Option<Complex64>,
        /// Print entries as `i,j,log10mag,phase` instead of a dense dump.
        #[arg(long)]
        log_domain: bool,
    },
    /// Evaluate every applicable lower bound, one JSON object per line.
    Bounds {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        f: Option<Complex64>,
        #[arg(long, value_delimiter = ',')]
        eta_grid: Option<Vec<f64>>,
        /// Grid size for maximizing |s(f)| on the unit circle.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Reproduce one of the experiment tables.
    Table {
        #[arg(long)]
        id: TableId,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Override the size grid (n, or q for T3).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative residuals of Gaussian elimination without pivoting on DFT systems.
    Genp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Dft,
    QuasiCyclic,
    VanDerCorput,
    SingleOutlier,
    ScaledCluster,
    File,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "gen", value_enum)]
    generator: Option<Generator>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    s_last: Option<Complex64>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    #[command(flatten)]
    gen: GenArgs,
    /// Read knots from a file instead of generating them.
    #[arg(long, conflicts_with = "generator")]
    knots: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Vandermonde,
    Cv,
    Dft,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lagrange,
    Cv,
    Cauchy,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Paper,
    Corrected,
}

impl From<VariantArg> for InverseVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Paper => InverseVariant::PaperEq5,
            VariantArg::Corrected => InverseVariant::DerivativeCorrected,
        }
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE or RE,IM, got {s:?}")),
    }
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required for this generator")))
}

impl GenArgs {
    fn build(&self) -> Result<KnotVector> {
        let generator = need(self.generator, "gen")?;
        match generator {
            Generator::Dft => roots_of_unity(need(self.n, "n")?),
            Generator::QuasiCyclic => quasi_cyclic(need(self.n, "n")?),
            Generator::VanDerCorput => van_der_corput(need(self.n, "n")?),
            Generator::SingleOutlier => {
                single_outlier(need(self.n, "n")?, need(self.s_last, "s-last")?)
            }
            Generator::ScaledCluster => scaled_cluster(
                need(self.n, "n")?,
                need(self.k, "k")?,
                need(self.rho, "rho")?,
            ),
            Generator::File => read_knot_file(&need(self.file.clone(), "file")?, DEFAULT_TOL),
        }
    }
}

impl Source {
    fn load(&self) -> Result<KnotVector> {
        match &self.knots {
            Some(p) => read_knot_file(p, DEFAULT_TOL),
            None => self.gen.build(),
        }
    }
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn log_rows(n: usize, entries: &[LogComplex]) -> String {
    let mut out = String::from("i,j,log10mag,phase\n");
    for (k, z) in entries.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{:?},{:?}\n",
            k / n,
            k % n,
            z.log10mag,
            z.phase
        ));
    }
    out
}

fn default_f(s: &KnotVector) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI / s.len() as f64)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenKnots { gen, out } => write_out(&write_knots(&gen.build()?), out.as_ref()),
        Command::Cond { src, block } => {
            let s = src.load()?;
            let mut v = vandermonde(&s)?;
            if let Some(q) = block {
                v = leading_block(&v, q)?;
            }
            let sv = singular_values(&v)?;
            println!("n,sigma1,sigma_min,kappa,log10kappa,trustworthy");
            println!(
                "{},{:?},{:?},{:?},{:?},{}",
                v.rows(),
                sv.sigma1,
                sv.sigma_min,
                sv.kappa,
                sv.log10kappa,
                sv.trustworthy
            );
            Ok(())
        }
        Command::Build {
            src,
            matrix,
            f,
            block,
            dump,
        } => {
            let s = src.load()?;
            let mut m = match matrix {
                MatrixKind::Vandermonde => vandermonde(&s)?,
                MatrixKind::Cv => cv_matrix(&s, f.unwrap_or_else(|| default_f(&s)))?,
                MatrixKind::Dft => dft(s.len())?,
            };
            if let Some(q) = block {
                m = leading_block(&m, q)?;
            }
            if dump {
                print!("{}", m.dump());
            } else {
                let desc = serde_json::to_string(m.descriptor()).expect("descriptor serializes");
                println!("{} {} {desc}", m.rows(), m.cols());
            }
            Ok(())
        }
        Command::Invert {
            src,
            method,
            variant,
            f,
            log_domain,
        } => {
            let s = src.load()?;
            let f = f.unwrap_or_else(|| default_f(&s));
            let variant = InverseVariant::from(variant);
            let n = s.len();
            let text = match (method, log_domain) {
                (Method::Lagrange, false) => vandermonde_inverse_lagrange(&s)?.dump(),
                (Method::Cv, false) => vandermonde_inverse_via_cv(&s, f, variant)?.dump(),
                (Method::Cauchy, false) => {
                    let t = KnotVector::new(cv_grid(n, f), Provenance::Custom, DEFAULT_TOL)?;
                    cauchy_inverse(&s, &t, variant)?.dump()
                }
                (Method::Cauchy, true) => {
                    let t = KnotVector::new(cv_grid(n, f), Provenance::Custom, DEFAULT_TOL)?;
                    log_rows(n, &cauchy_inverse_log(&s, &t, variant)?)
                }
                (Method::Cv, true) => log_rows(n, &cv_inverse_log(&s, f, variant)?),
                (Method::Lagrange, true) => {
                    let m = vandermonde_inverse_lagrange(&s)?;
                    let entries: Vec<LogComplex> =
                        m.data().iter().map(|&z| LogComplex::from(z)).collect();
                    log_rows(n, &entries)
                }
            };
            print!("{text}");
            Ok(())
        }
        Command::Bounds {
            src,
            f,
            eta_grid,
            grid,
        } => {
            let s = src.load()?;
            let grid = grid.unwrap_or_else(|| default_circle_grid(s.len()));
            let eta = eta_grid.unwrap_or_else(|| DEFAULT_ETA_GRID.to_vec());
            let f = match f {
                Some(f) => f,
                None => max_abs_on_circle(&s, grid)?.f_star,
            };
            let mut reports = all_bounds(&s, f, &eta, grid);
            match s.provenance() {
                Provenance::QuasiCyclic { n } if n % 3 == 0 => {
                    for mode in [
                        QcMode::Base,
                        QcMode::Eq15,
                        QcMode::Eq16,
                        QcMode::Product,
                        QcMode::Integral,
                    ] {
                        let id = match mode {
                            QcMode::Base => BoundId::QuasiCyclicBase,
                            QcMode::Eq15 => BoundId::QuasiCyclicEq15,
                            QcMode::Eq16 => BoundId::QuasiCyclicEq16,
                            QcMode::Product => BoundId::QuasiCyclicProduct,
                            QcMode::Integral => BoundId::QuasiCyclicIntegral,
                        };
                        reports.push(bound_quasi_cyclic(n / 3, mode).map_err(|e| (id, e)));
                    }
                }
                Provenance::ScaledCluster { k, rho, .. } => {
                    for mode in [NormMode::Literal, NormMode::ComputedNorm] {
                        reports.push(
                            bound_cluster(&s, *k, 1.0 / rho, mode)
                                .map_err(|e| (BoundId::EasyII, e)),
                        );
                    }
                }
                _ => {}
            }
            let mut any_ok = false;
            for r in reports {
                let line = match r {
                    Ok(rep) => {
                        any_ok = true;
                        serde_json::to_value(&rep).expect("reports serialize")
                    }
                    Err((id, e)) => {
                        json!({"bound_id": id, "applicable": false, "error": e.to_string()})
                    }
                };
                println!("{line}");
            }
            if any_ok {
                Ok(())
            } else {
                Err(Error::NoPositiveBound)
            }
        }
        Command::Table {
            id,
            seed,
            trials,
            sizes,
            format,
            out,
        } => {
            let table = run_table(
                id,
                &Overrides {
                    sizes,
                    trials,
                    seed,
                },
            )?;
            let format = format.unwrap_or(if out.is_some() {
                Format::Csv
            } else {
                Format::Markdown
            });
            write_out(&emit(&table, format), out.as_ref())?;
            if table.all_failed() {
                return Err(Error::ConvergenceFailure);
            }
            Ok(())
        }
        Command::Genp { n, trials, seed } => {
            let st = genp_residual_experiment(n, trials, seed)?;
            println!("# rng={RNG_NAME}");
            println!("n,trials,seed,mean_rn,std_rn");
            println!(
                "{},{},{},{:?},{:?}",
                st.n, st.trials, st.seed, st.mean_rn, st.std_rn
            );
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::Io(_)
        | Error::EmptyInput
        | Error::DuplicateKnot { .. }
        | Error::BadShape(_)
        | Error::OddSize(_)
        | Error::BlockTooLarge { .. }
        | Error::ShapeMismatch(_)
        | Error::ArcTooLong { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vandcond: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
