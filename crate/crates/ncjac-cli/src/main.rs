//! `ncjac`: invariants and normal forms of noncommutative Jacobi algebras.
//!
//! Exit codes: 0 success, 1 computational refusal (the requested invariant
//! is not defined or not certifiable for the input), 2 input error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ncjac_core::calculus::{cyclic_derivative, strike_derivative};
use ncjac_core::classify::{classify, elephant};
use ncjac_core::growth::{bound_series, esp_generator, graded_hilbert, gsv_test};
use ncjac_core::io::{parse, parse_file_contents, print, Report};
use ncjac_core::quotient::{dims, words_below};
use ncjac_core::rational::render;
use ncjac_core::word::Context;
use ncjac_core::{Error, NCPoly};

#[derive(Parser)]
#[command(name = "ncjac", version, about = "Invariants of noncommutative Jacobi algebras")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_parser = ["text", "json"], default_value = "text")]
    format: String,

    /// Number of worker threads for rank computations.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// The potential, e.g. "x*y^2 + x^4". Variables: x, y, z, w.
    #[arg(allow_hyphen_values = true)]
    potential: Option<String>,

    /// Read the potential from a file instead ('#' starts a comment).
    #[arg(short, long, conflicts_with = "potential")]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Differentiate a potential (cyclic derivative by default).
    Derive {
        /// Variable to differentiate by.
        #[arg(long)]
        var: String,
        /// Cyclic derivative (symmetrize, then strike off; the default).
        #[arg(long, conflicts_with = "strike")]
        cyclic: bool,
        /// Strike-off derivative (remove the leading letter only).
        #[arg(long)]
        strike: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Dimension filtration of the Jacobi algebra, with certificates.
    Dims {
        /// Truncation degree (default 12/8/6 for 2/3/4 variables).
        #[arg(short = 'N', long = "max-degree")]
        n: Option<usize>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Normal-form classification, with invariant pair and central slice
    /// when they are defined.
    Classify {
        /// Truncation degree (default 12/8/6 for 2/3/4 variables).
        #[arg(short = 'N', long = "max-degree")]
        n: Option<usize>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Growth and Hilbert series.
    Series {
        #[command(subcommand)]
        which: SeriesCommand,
    },
}

#[derive(Subcommand)]
enum SeriesCommand {
    /// Growth test: expand (1 - t)/(1 - d t + sum t^{r_i}).
    Gsv {
        /// Number of variables.
        #[arg(short)]
        d: usize,
        /// Orders of the relations, comma separated.
        #[arg(short, value_delimiter = ',')]
        r: Vec<usize>,
        /// Number of coefficients to inspect.
        #[arg(short = 'N', default_value_t = 10)]
        n: usize,
    },
    /// Lower-bound series b_j for dimension filtrations.
    Bound {
        #[arg(short)]
        d: usize,
        /// Degree of the homogeneous superpotential.
        #[arg(short)]
        k: usize,
        #[arg(short = 'N', default_value_t = 10)]
        n: usize,
    },
    /// Graded Hilbert series of a homogeneous superpotential quotient.
    Hilbert {
        /// Use the built-in exact superpotential of degree k in d variables.
        #[arg(long, requires = "d", requires = "k")]
        esp: bool,
        #[arg(short)]
        d: Option<usize>,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short = 'N', default_value_t = 10)]
        n: usize,
        /// A homogeneous cyclically symmetric potential (alternative to --esp).
        #[arg(allow_hyphen_values = true, conflicts_with = "esp")]
        potential: Option<String>,
    },
}

/// Infer the variable context from the letters appearing in the input
/// (always at least x, y).
fn detect_context(text: &str) -> Result<Context, Error> {
    let d = if text.contains('w') {
        4
    } else if text.contains('z') {
        3
    } else {
        2
    };
    Context::standard(d)
}

fn read_input(input: &InputArgs) -> Result<(NCPoly, Context), Error> {
    let (text, from_file) = match (&input.potential, &input.file) {
        (Some(t), None) => (t.clone(), false),
        (None, Some(p)) => (
            std::fs::read_to_string(p)
                .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", p.display())))?,
            true,
        ),
        _ => return Err(Error::BadInput("provide a potential or --file, not both".into())),
    };
    let ctx = detect_context(&text)?;
    let f = if from_file { parse_file_contents(&text, &ctx)? } else { parse(&text, &ctx)? };
    Ok((f, ctx))
}

fn default_degree(d: usize) -> usize {
    match d {
        0..=2 => 12,
        3 => 8,
        _ => 6,
    }
}

/// Soft memory cap from NCJAC_MAX_MEM (bytes, with optional K/M/G suffix):
/// refuse up front when a crude upper estimate of the elimination workspace
/// exceeds it.
fn check_memory_cap(d: usize, n: usize) -> Result<(), Error> {
    let Ok(raw) = std::env::var("NCJAC_MAX_MEM") else { return Ok(()) };
    let raw = raw.trim().to_ascii_uppercase();
    let (digits, mult) = match raw.chars().last() {
        Some('K') => (&raw[..raw.len() - 1], 1u128 << 10),
        Some('G') => (&raw[..raw.len() - 1], 1u128 << 30),
        Some('M') => (&raw[..raw.len() - 1], 1u128 << 20),
        _ => (&raw[..], 1u128),
    };
    let cap: u128 = digits
        .trim()
        .parse::<u128>()
        .map_err(|_| Error::BadInput(format!("NCJAC_MAX_MEM is not a size: {raw}")))?
        * mult;
    let words = words_below(d, n + 1) as u128;
    let estimate = words * words * 8;
    if estimate > cap {
        return Err(Error::Refused(format!(
            "estimated elimination workspace {estimate} bytes exceeds NCJAC_MAX_MEM={cap}"
        )));
    }
    Ok(())
}

fn emit(report: &Report, format: &str) -> String {
    if format == "json" {
        report.to_json()
    } else {
        report.to_text()
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Derive { var, cyclic: _, strike, input } => {
            let (f, ctx) = read_input(input)?;
            let i = ctx
                .index_of(var)
                .ok_or_else(|| Error::BadInput(format!("unknown variable: {var}")))?;
            let g = if *strike { strike_derivative(&f, i) } else { cyclic_derivative(&f, i) };
            if cli.format == "json" {
                let mut report = Report::new();
                report.push("potential", json!(print(&f, &ctx)));
                report.push("variable", json!(var));
                report.push("kind", json!(if *strike { "strike" } else { "cyclic" }));
                report.push("result", json!(print(&g, &ctx)));
                Ok(report.to_json())
            } else {
                Ok(print(&g, &ctx))
            }
        }
        Command::Dims { n, input } => {
            let (f, ctx) = read_input(input)?;
            let n = n.unwrap_or_else(|| default_degree(f.d()));
            check_memory_cap(f.d(), n)?;
            let dr = dims(&f, n)?;
            let mut report = Report::new();
            report.push("potential", json!(print(&f, &ctx)));
            report.push("truncation_degree", json!(n));
            report.push("dims", json!(dr.dims));
            report.push("coranks", json!(dr.coranks));
            report.push("stabilized_at", json!(dr.stabilized_at));
            report.push("certified_dim", json!(dr.certified_dim));
            report.push("jdim_verdict", json!(dr.jdim_verdict));
            Ok(emit(&report, &cli.format))
        }
        Command::Classify { n, input } => {
            let (f, _) = read_input(input)?;
            let n = n.unwrap_or_else(|| default_degree(f.d()));
            check_memory_cap(f.d(), n)?;
            let (_, mut report) = classify(&f, n)?;
            match elephant(&f, n) {
                Ok((tag, ereport)) => {
                    report.push("elephant", json!(tag));
                    if let Some(v) = ereport.get("quotient_certified_dim") {
                        report.push("elephant_quotient_dim", v.clone());
                    }
                }
                Err(Error::Refused(msg)) => {
                    report.push("elephant", json!(null));
                    report.push("elephant_note", json!(msg));
                }
                Err(e) => return Err(e),
            }
            Ok(emit(&report, &cli.format))
        }
        Command::Series { which } => {
            let mut report = Report::new();
            match which {
                SeriesCommand::Gsv { d, r, n } => {
                    let (verdict, coeffs) = gsv_test(*d, r, *n);
                    report.push("series", json!("gsv"));
                    report.push("d", json!(d));
                    report.push("orders", json!(r));
                    report.push("inspected_degree", json!(n));
                    report.push(
                        "coefficients",
                        json!(coeffs.iter().map(render).collect::<Vec<_>>()),
                    );
                    report.push("verdict", json!(verdict));
                    report.push(
                        "note",
                        json!(
                            "all-nonnegative coefficients of (1-t)/h certify the sufficient \
                             condition for an infinite-dimensional quotient, up to the \
                             inspected degree"
                        ),
                    );
                }
                SeriesCommand::Bound { d, k, n } => {
                    if *k < 2 {
                        return Err(Error::BadInput("bound series requires k >= 2".into()));
                    }
                    let b = bound_series(*d, *k, *n);
                    report.push("series", json!("bound"));
                    report.push("d", json!(d));
                    report.push("k", json!(k));
                    report.push(
                        "coefficients",
                        json!(b.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
                    );
                    report.push(
                        "closed_form",
                        json!(format!("1/((1-t)(1 - {d}t + {d}t^{} - t^{k}))", k - 1)),
                    );
                }
                SeriesCommand::Hilbert { esp, d, k, n, potential } => {
                    let (g, ctx) = if *esp {
                        let d = d.ok_or_else(|| Error::BadInput("--esp needs -d".into()))?;
                        let k = k.ok_or_else(|| Error::BadInput("--esp needs -k".into()))?;
                        (esp_generator(d, k)?, Context::standard(d)?)
                    } else {
                        let text = potential
                            .as_ref()
                            .ok_or_else(|| Error::BadInput("provide --esp or a potential".into()))?;
                        let ctx = detect_context(text)?;
                        (parse(text, &ctx)?, ctx)
                    };
                    let dims = graded_hilbert(&g, *n)?;
                    report.push("series", json!("hilbert"));
                    report.push("superpotential", json!(print(&g, &ctx)));
                    report.push("graded_dims", json!(dims));
                }
            }
            Ok(emit(&report, &cli.format))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        // A failure here only means a pool was already installed.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match run(&cli) {
        Ok(out) => println!("{out}"),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Refused(_) => 1,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}
