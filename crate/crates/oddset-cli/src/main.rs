//! Command-line front end for odd-distance point sets.
//!
//! Every verb speaks JSON on stdout; `--pretty` switches to a human
//! rendering that is never parsed back. Diagnostics are one line on stderr.
//! The exit code is 0 exactly when the verb's claim holds, 1 when the claim
//! fails on well-formed input, and 2 when the input or arguments are
//! unusable.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oddset::construct::build_odd_set;
use oddset::error::Error;
use oddset::geometry::{parity_audit, verify_odd_set, OddCertificate, Parity, ParityAudit, PointSet};
use oddset::json;
use oddset::rational::parse_rational;
use oddset::rationalize::{dyadic_scale, rationalize_set_with_report, RationalizeReport};
use oddset::search::{
    bound_report, build_odd_graph, enumerate_box, max_odd_clique, BoundReport, CliqueResult,
    Lattice, LatticeBox, DEFAULT_VERTEX_LIMIT,
};

/// Tools for point sets whose pairwise Manhattan distances are odd integers.
#[derive(Parser)]
#[command(name = "oddset", version)]
struct Cli {
    /// Render human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the canonical 2^n-point odd-distance set in dimension n.
    Construct {
        /// Dimension to build in.
        #[arg(short = 'n', long = "dimension")]
        dimension: usize,

        /// Write the point-set document to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Check that every pairwise distance in a point-set file is an odd integer.
    Verify {
        /// Point-set document to check.
        file: PathBuf,
    },

    /// Audit the parity structure of a half-integer point-set file.
    Audit {
        /// Point-set document to audit.
        file: PathBuf,
    },

    /// Find a maximum odd-distance clique over a lattice box by exhaustive search.
    Search {
        /// Dimension of the box.
        #[arg(short = 'n', long = "dimension")]
        dimension: usize,

        /// Lattice to enumerate.
        #[arg(long, value_enum)]
        lattice: LatticeArg,

        /// Lower bound applied to every coordinate, in rational grammar.
        #[arg(long)]
        lo: String,

        /// Upper bound applied to every coordinate, in rational grammar.
        #[arg(long)]
        hi: String,

        /// Worker threads; defaults to available parallelism.
        #[arg(long)]
        threads: Option<usize>,
    },

    /// Replace decimal coordinates with exact rationals realizing odd distances.
    Rationalize {
        /// Decimal point-set document, optionally with declared distances.
        file: PathBuf,

        /// Also write the output document to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Scale an odd-distance set by an odd integer so denominators become powers of two.
    Dyadic {
        /// Point-set document to scale.
        file: PathBuf,

        /// Also write the output document to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    /// Half-integer lattice.
    Half,
    /// Integer lattice.
    Int,
}

impl From<LatticeArg> for Lattice {
    fn from(arg: LatticeArg) -> Lattice {
        match arg {
            LatticeArg::Half => Lattice::HalfIntegers,
            LatticeArg::Int => Lattice::Integers,
        }
    }
}

/// A failed run. `Claim` means the verb's mathematical claim is false for
/// well-formed input; `Operational` means the input or arguments were
/// unusable before any claim could be judged.
enum Failure {
    Claim(String),
    Operational(String),
}

fn claim(err: Error) -> Failure {
    Failure::Claim(err.to_string())
}

fn operational(err: Error) -> Failure {
    Failure::Operational(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (message, code) = match failure {
                Failure::Claim(m) => (m, 1),
                Failure::Operational(m) => (m, 2),
            };
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { dimension, output } => run_construct(dimension, output, cli.pretty),
        Command::Verify { file } => run_verify(&file, cli.pretty),
        Command::Audit { file } => run_audit(&file, cli.pretty),
        Command::Search {
            dimension,
            lattice,
            lo,
            hi,
            threads,
        } => run_search(dimension, lattice.into(), &lo, &hi, threads, cli.pretty),
        Command::Rationalize { file, output } => run_rationalize(&file, output, cli.pretty),
        Command::Dyadic { file, output } => run_dyadic(&file, output, cli.pretty),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Operational(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Operational(format!("cannot write {}: {e}", path.display())))
}

fn load_point_set(path: &Path) -> Result<PointSet, Failure> {
    json::read_point_set(&read_file(path)?).map_err(operational)
}

fn emit(value: &serde_json::Value) {
    println!("{value}");
}

fn print_points(ps: &PointSet) {
    for p in ps.iter() {
        println!("  {p}");
    }
}

fn odd_failure(cert: &OddCertificate) -> Option<Failure> {
    cert.first_failure().map(|fail| {
        claim(Error::NotOddDistance {
            i: fail.i,
            j: fail.j,
            distance: fail.distance.clone(),
        })
    })
}

fn run_construct(dimension: usize, output: Option<PathBuf>, pretty: bool) -> Result<(), Failure> {
    let ps = build_odd_set(dimension).map_err(operational)?;
    let cert = verify_odd_set(&ps);
    let doc = json::write_point_set(&ps);
    if let Some(path) = &output {
        write_file(path, &doc.to_string())?;
    }
    if pretty {
        println!(
            "built {} points in dimension {dimension}; verdict: {}",
            ps.len(),
            verdict_word(&cert)
        );
        if output.is_none() {
            print_points(&ps);
        }
    } else {
        let mut summary = serde_json::json!({
            "dimension": dimension,
            "size": ps.len(),
            "verdict": cert.verdict,
        });
        match &output {
            Some(path) => summary["path"] = path.display().to_string().into(),
            None => summary["set"] = doc,
        }
        emit(&summary);
    }
    match odd_failure(&cert) {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

fn verdict_word(cert: &OddCertificate) -> &'static str {
    if cert.verdict {
        "every pairwise distance is an odd integer"
    } else {
        "some pairwise distance is not an odd integer"
    }
}

fn run_verify(file: &Path, pretty: bool) -> Result<(), Failure> {
    let ps = load_point_set(file)?;
    let cert = verify_odd_set(&ps);
    if pretty {
        println!(
            "{} points, {} pairs checked",
            cert.set_size,
            cert.pair_results.len()
        );
        let failing: Vec<_> = cert.pair_results.iter().filter(|r| !r.is_odd_integer).collect();
        for r in failing.iter().take(5) {
            println!(
                "  pair ({}, {}): distance {} is not an odd integer",
                r.i + 1,
                r.j + 1,
                r.distance
            );
        }
        if failing.len() > 5 {
            println!("  ... and {} more failing pairs", failing.len() - 5);
        }
        println!("verdict: {}", verdict_word(&cert));
    } else {
        emit(&json::write_certificate(&cert));
    }
    match odd_failure(&cert) {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

fn parity_word(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn fingerprint_word(fingerprint: &[bool]) -> String {
    fingerprint.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The audit claim: weight parity is uniform and no fingerprint fiber holds
/// more than two points. Returns the first counterexample as a diagnostic.
fn audit_failure(audit: &ParityAudit) -> Option<Failure> {
    if !audit.uniform_weight_parity {
        let first = audit.weight_parities[0];
        let k = audit
            .weight_parities
            .iter()
            .position(|&p| p != first)
            .expect("a non-uniform audit has a differing point");
        return Some(Failure::Claim(format!(
            "point {} has {} coordinate weight while point 1 has {}",
            k + 1,
            parity_word(audit.weight_parities[k]),
            parity_word(first)
        )));
    }
    if !audit.fibers_within_two {
        let (fingerprint, count) = audit
            .fiber_sizes
            .iter()
            .find(|(_, &count)| count > 2)
            .expect("an oversized audit has an oversized fiber");
        return Some(Failure::Claim(format!(
            "fingerprint {} is shared by {} points, more than 2",
            fingerprint_word(fingerprint),
            count
        )));
    }
    None
}

fn run_audit(file: &Path, pretty: bool) -> Result<(), Failure> {
    let ps = load_point_set(file)?;
    let audit = parity_audit(&ps).map_err(claim)?;
    if pretty {
        for (k, (fingerprint, parity)) in audit
            .fingerprints
            .iter()
            .zip(&audit.weight_parities)
            .enumerate()
        {
            println!(
                "  point {}: fingerprint {}, weight parity {}",
                k + 1,
                fingerprint_word(fingerprint),
                parity_word(*parity)
            );
        }
        println!(
            "uniform weight parity: {}; fibers within two: {}",
            audit.uniform_weight_parity, audit.fibers_within_two
        );
    } else {
        emit(&json::write_audit(&audit));
    }
    match audit_failure(&audit) {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

fn vertex_limit() -> Result<usize, Failure> {
    match std::env::var("ODDSET_VERTEX_LIMIT") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Operational(format!("ODDSET_VERTEX_LIMIT is not a vertex count: `{text}`"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_VERTEX_LIMIT),
        Err(e) => Err(Failure::Operational(format!("ODDSET_VERTEX_LIMIT: {e}"))),
    }
}

fn run_search(
    dimension: usize,
    lattice: Lattice,
    lo: &str,
    hi: &str,
    threads: Option<usize>,
    pretty: bool,
) -> Result<(), Failure> {
    let lo = parse_rational(lo).map_err(operational)?;
    let hi = parse_rational(hi).map_err(operational)?;
    let bx = LatticeBox::new(lattice, vec![lo; dimension], vec![hi; dimension])
        .map_err(operational)?;
    let vertices = enumerate_box(&bx, vertex_limit()?).map_err(operational)?;
    let graph = build_odd_graph(&vertices);
    let result = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::Operational(format!("cannot start {t} worker threads: {e}")))?
            .install(|| max_odd_clique(&graph)),
        None => max_odd_clique(&graph),
    };
    let report = bound_report(dimension, lattice, &result);
    if pretty {
        print_search(&vertices, &result, &report);
    } else {
        emit(&json::write_search(&result, &report));
    }
    if report.violation {
        return Err(Failure::Claim(format!(
            "a clique of {} points exceeds the bound {} {}",
            report.max_size, report.cap, report.scope
        )));
    }
    Ok(())
}

fn print_search(vertices: &PointSet, result: &CliqueResult, report: &BoundReport) {
    println!(
        "{} lattice box in dimension {}: {} vertices",
        report.lattice.name(),
        report.dimension,
        vertices.len()
    );
    println!(
        "maximum clique size {} against bound {} ({})",
        report.max_size, report.cap, report.scope
    );
    println!(
        "violation: {}; nodes explored: {}; elapsed: {} ms",
        report.violation,
        result.nodes_explored,
        result.elapsed.as_millis()
    );
    println!("witness:");
    print_points(&result.witness);
}

fn run_rationalize(file: &Path, output: Option<PathBuf>, pretty: bool) -> Result<(), Failure> {
    let input = json::read_decimal_point_set(&read_file(file)?).map_err(operational)?;
    let (ps, report) = rationalize_set_with_report(&input).map_err(claim)?;
    let doc = json::write_rationalized(&ps, &report);
    if let Some(path) = &output {
        write_file(path, &doc.to_string())?;
    }
    if pretty {
        print_points(&ps);
        print_report(&report);
    } else {
        emit(&doc);
    }
    Ok(())
}

fn print_report(report: &RationalizeReport) {
    println!(
        "free variables: {}; C = {}; epsilon = {}",
        report.free_variables, report.bound_c, report.epsilon
    );
    let applied: Vec<&str> = report
        .separation_applied
        .iter()
        .map(|&a| if a { "yes" } else { "no" })
        .collect();
    println!("separation applied per coordinate: {}", applied.join(", "));
}

fn run_dyadic(file: &Path, output: Option<PathBuf>, pretty: bool) -> Result<(), Failure> {
    let ps = load_point_set(file)?;
    let (scaled, scale) = dyadic_scale(&ps).map_err(claim)?;
    let doc = json::write_dyadic(&scaled, &scale);
    if let Some(path) = &output {
        write_file(path, &doc.to_string())?;
    }
    if pretty {
        println!("scale: {scale}");
        print_points(&scaled);
    } else {
        emit(&doc);
    }
    Ok(())
}
