//! `walksym` — exact random-walk symmetry analysis from the command line.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, unknown
//! families, out-of-range enumeration), 2 for invalid input data
//! (malformed graph6 records, disconnected graphs where connectivity is
//! required). Data errors in `.g6` files name the offending line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use walksym_core::electrical;
use walksym_core::graph::{enumerate_connected, make_family, parse_graph6, Family, Graph};
use walksym_core::linalg::rational_to_f64;
use walksym_core::scanner::{self, ClassificationReport, PropertyExpr};
use walksym_core::walks;

#[derive(Parser)]
#[command(
    name = "walksym",
    version,
    about = "Exact analysis of random-walk symmetry on small graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a graph6 record, or every record in a .g6 file
    Analyze {
        /// Inline graph6 record, or a path to a .g6 file (one record per line)
        input: String,
        /// Emit JSON instead of the text report
        #[arg(long)]
        json: bool,
    },
    /// Print the graph6 record of a standard family member
    Gen {
        /// One of: complete, cycle, path, star, complete_bipartite, hypercube, petersen
        family: String,
        /// Family parameters, e.g. `gen cycle 4` or `gen complete_bipartite 2 3`
        params: Vec<usize>,
    },
    /// Print one canonical graph6 line per connected isomorphism class (n <= 7)
    Enumerate { n: usize },
    /// Classify every record in a .g6 file and print a summary
    Scan {
        file: PathBuf,
        /// Bucket filter such as "walk_regular & !vertex_transitive" (repeatable)
        #[arg(long = "filter")]
        filters: Vec<String>,
        /// Worker threads; the summary is identical for every value
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
        jobs: u64,
        /// Also write the summary as JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the distinct exact R_pi values of a .g6 file, ascending
    Spectrum {
        file: PathBuf,
        /// Also write the spectrum as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo return-frequency estimate next to the exact value
    Simulate {
        graph6: String,
        /// Start (and return) vertex
        #[arg(long)]
        vertex: usize,
        /// Walk length in steps
        #[arg(long)]
        steps: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the exact expected hitting-time table of a graph6 record
    Hitting { graph6: String },
    /// Print the exact effective-resistance table of a graph6 record
    Resistance { graph6: String },
}

enum CliError {
    Usage(String),
    Data(String),
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let requested = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            err.print().expect("diagnostics are writable");
            return if requested { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input, json } => analyze(&input, json),
        Command::Gen { family, params } => {
            let family: Family = family.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
            let g = make_family(family, &params).map_err(|e| CliError::Usage(format!("{e}")))?;
            println!("{}", g.to_graph6());
            Ok(())
        }
        Command::Enumerate { n } => {
            let graphs = enumerate_connected(n).map_err(|e| CliError::Usage(format!("{e}")))?;
            for g in graphs {
                println!("{}", g.to_graph6());
            }
            Ok(())
        }
        Command::Scan {
            file,
            filters,
            jobs,
            out,
        } => scan(&file, &filters, jobs as usize, out.as_deref()),
        Command::Spectrum { file, csv } => spectrum(&file, csv.as_deref()),
        Command::Simulate {
            graph6,
            vertex,
            steps,
            trials,
            seed,
        } => simulate(&graph6, vertex, steps, trials, seed),
        Command::Hitting { graph6 } => {
            let g = parse_inline(&graph6)?;
            let h = electrical::hitting_matrix(&g).map_err(data)?;
            print_table(
                "expected hitting times (row = start, column = target):",
                g.n(),
                |x, y| h.get(x, y).to_string(),
            );
            Ok(())
        }
        Command::Resistance { graph6 } => {
            let g = parse_inline(&graph6)?;
            let r = electrical::resistance_matrix(&g).map_err(data)?;
            print_table("effective resistances:", g.n(), |u, v| {
                r.get(u, v).to_string()
            });
            Ok(())
        }
    }
}

fn parse_inline(text: &str) -> Result<Graph, CliError> {
    parse_graph6(text).map_err(|e| CliError::Data(format!("invalid graph6 record {text:?}: {e}")))
}

/// Reads a `.g6` file into `(line number, graph)` pairs, skipping blank lines.
fn read_g6_file(path: &Path) -> Result<Vec<(usize, Graph)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line)
            .map_err(|e| CliError::Data(format!("{}:{}: {e}", path.display(), idx + 1)))?;
        records.push((idx + 1, g));
    }
    Ok(records)
}

fn analyze(input: &str, json: bool) -> Result<(), CliError> {
    if Path::new(input).is_file() {
        let records = read_g6_file(Path::new(input))?;
        let mut reports = Vec::new();
        for (line_no, g) in &records {
            let report = scanner::classify(g)
                .map_err(|e| CliError::Data(format!("{input}:{line_no}: {e}")))?;
            reports.push(report);
        }
        if json {
            println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
        } else {
            for (i, report) in reports.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print!("{}", render_report(report));
            }
        }
    } else {
        let g = parse_inline(input)?;
        let report = scanner::classify(&g).map_err(data)?;
        if json {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        } else {
            print!("{}", render_report(&report));
        }
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_report(r: &ClassificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "graph: {}", r.graph6).unwrap();
    writeln!(s, "n: {}", r.n).unwrap();
    writeln!(s, "m: {}", r.m).unwrap();
    match r.degree {
        Some(d) => writeln!(s, "regular: yes (degree {d})").unwrap(),
        None => writeln!(s, "regular: no").unwrap(),
    }
    writeln!(s, "walk_regular: {}", yes_no(r.walk_regular)).unwrap();
    writeln!(s, "vertex_transitive: {}", yes_no(r.vertex_transitive)).unwrap();
    match &r.intersection_array {
        Some(a) => writeln!(s, "distance_regular: yes {a}").unwrap(),
        None => writeln!(s, "distance_regular: no").unwrap(),
    }
    writeln!(s, "reversible: {}", yes_no(r.reversible)).unwrap();
    match &r.r_pi {
        Some(v) => writeln!(s, "r_pi: {v}").unwrap(),
        None => writeln!(s, "r_pi: -").unwrap(),
    }
    match r.spectral_gap {
        Some(v) => writeln!(s, "spectral_gap: {v:.9}").unwrap(),
        None => writeln!(s, "spectral_gap: -").unwrap(),
    }
    writeln!(s, "max_hitting_asymmetry: {}", r.max_hitting_asymmetry).unwrap();
    s
}

fn scan(path: &Path, filter_args: &[String], jobs: usize, out: Option<&Path>) -> Result<(), CliError> {
    let mut filters: Vec<PropertyExpr> = Vec::new();
    for arg in filter_args {
        let expr = arg
            .parse()
            .map_err(|e| CliError::Usage(format!("--filter {arg:?}: {e}")))?;
        filters.push(expr);
    }
    let graphs: Vec<Graph> = read_g6_file(path)?.into_iter().map(|(_, g)| g).collect();
    let summary = scanner::scan_stream(graphs, &filters, jobs);
    if summary.disconnected_skipped > 0 {
        eprintln!(
            "warning: skipped {} disconnected graph(s)",
            summary.disconnected_skipped
        );
    }
    if summary.errors > 0 {
        eprintln!("warning: {} graph(s) failed to classify", summary.errors);
    }

    println!("records: {}", summary.total);
    println!(
        "classified: {} ({} disconnected skipped, {} errors)",
        summary.total - summary.disconnected_skipped - summary.errors,
        summary.disconnected_skipped,
        summary.errors
    );
    println!("regular: {}", summary.counts.regular);
    println!("walk_regular: {}", summary.counts.walk_regular);
    println!("vertex_transitive: {}", summary.counts.vertex_transitive);
    println!("distance_regular: {}", summary.counts.distance_regular);
    println!("reversible: {}", summary.counts.reversible);
    for bucket in &summary.buckets {
        println!("filter {}: {} match(es)", bucket.filter, bucket.members.len());
        for member in &bucket.members {
            println!("  {member}");
        }
    }
    println!("distinct r_pi values: {}", summary.r_pi_spectrum.len());

    if let Some(out_path) = out {
        let mut body = serde_json::to_string_pretty(&summary).expect("summary serializes");
        body.push('\n');
        fs::write(out_path, body)
            .map_err(|e| CliError::Data(format!("{}: {e}", out_path.display())))?;
    }
    Ok(())
}

fn spectrum(path: &Path, csv: Option<&Path>) -> Result<(), CliError> {
    let graphs: Vec<Graph> = read_g6_file(path)?.into_iter().map(|(_, g)| g).collect();
    let entries = scanner::r_pi_spectrum(graphs);
    for entry in &entries {
        println!("{} {}", entry.value, entry.witness);
    }
    if let Some(csv_path) = csv {
        fs::write(csv_path, scanner::spectrum_to_csv(&entries))
            .map_err(|e| CliError::Data(format!("{}: {e}", csv_path.display())))?;
    }
    Ok(())
}

fn simulate(record: &str, vertex: usize, steps: usize, trials: u64, seed: u64) -> Result<(), CliError> {
    let g = parse_inline(record)?;
    if vertex >= g.n() {
        return Err(CliError::Usage(format!(
            "--vertex {vertex} is out of range for a graph on {} vertices",
            g.n()
        )));
    }
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let estimate = walks::simulate_return_frequency(&g, vertex, steps, trials, seed).map_err(data)?;
    let profile = walks::closed_walk_count_profile(&g, steps).map_err(data)?;
    let exact = &profile.return_probs[steps][vertex];
    let exact_f = rational_to_f64(exact);

    println!(
        "graph: {}  vertex: {vertex}  steps: {steps}  trials: {trials}  seed: {seed}",
        g.to_graph6()
    );
    println!("estimate: {:.6}", estimate.point);
    println!("stderr: {:.6}", estimate.stderr);
    println!("exact: {exact} = {exact_f:.6}");
    let diff = (estimate.point - exact_f).abs();
    let deviation = if estimate.stderr == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / estimate.stderr
    };
    println!("deviation: {deviation:.2} stderr");
    Ok(())
}

/// Right-aligned table with vertex labels on both axes.
fn print_table(title: &str, n: usize, entry: impl Fn(usize, usize) -> String) {
    println!("{title}");
    let mut cells = vec![vec![String::new(); n + 1]; n + 1];
    for j in 0..n {
        cells[0][j + 1] = j.to_string();
    }
    for i in 0..n {
        cells[i + 1][0] = i.to_string();
        for j in 0..n {
            cells[i + 1][j + 1] = entry(i, j);
        }
    }
    let mut widths = vec![0usize; n + 1];
    for row in &cells {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, cell)| format!("{:>width$}", cell, width = widths[j]))
            .collect();
        println!("{}", line.join("  ").trim_end());
    }
}
