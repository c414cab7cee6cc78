//! `aalpha`: A_α spectral radius, energy, extremal transforms, law checks
//! and counterexample scans from the command line.
//!
//! Exit codes: 0 pass, 1 law failure or counterexample, 2 parse error,
//! 3 domain error, 4 numerical failure (an unconverged certificate).

mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aalpha::digraph::{generate, Digraph, FamilySpec};
use aalpha::laws::{verify_law, LawId, LawSettings};
use aalpha::linalg::perron::DEFAULT_TOL;
use aalpha::linalg::rational::{check_alpha, default_alpha_grid, parse_rational, Rational};
use aalpha::scc::classify_gnm;
use aalpha::search::{scan_radius_maximality, ScanMode};
use aalpha::spectra::{block_radii, energy, spectral_radius, spectrum_small};
use aalpha::text::{parse_digraph, write_digraph};
use aalpha::transforms::{alpha_threshold, apply, TransformKind};
use aalpha::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{to_value, Report};

#[derive(Parser)]
#[command(
    name = "aalpha",
    version,
    about = "A_alpha spectra and energies of digraphs"
)]
struct Cli {
    /// Worker threads for verify and scan (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified A_alpha spectral radius.
    Radius {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = alpha_arg)]
        alpha: Rational,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// A_alpha energy (sum of squared eigenvalues), exactly.
    Energy {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = alpha_arg)]
        alpha: Rational,
    },
    /// All eigenvalues (at most 16 vertices per strong component).
    Spectrum {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = alpha_arg)]
        alpha: Rational,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Rewire the trees of a digraph with one nontrivial strong component.
    Transform {
        #[command(flatten)]
        input: Input,
        /// prime, double-prime or triple-prime.
        #[arg(long)]
        kind: TransformKind,
        /// Where to write the transformed digraph.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check one law over enumerated and generated instances.
    Verify {
        /// Law identifier, e.g. T2.5 or L3.4.
        #[arg(long)]
        law: LawId,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Comma-separated alphas; default 0, 1/10, ..., 9/10.
        #[arg(long, value_parser = alpha_grid_arg)]
        alpha_grid: Option<AlphaGrid>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Instances per (n, m) before switching to seeded sampling.
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for digraphs whose radius exceeds that of the single-star form.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exhaustive: maximum instances. Sample: number of draws.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_parser = alpha_grid_arg)]
        alpha_grid: Option<AlphaGrid>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Args)]
struct Input {
    /// Digraph file ("n e" header, then one "tail head" line per arc).
    #[arg(required_unless_present = "family", conflicts_with = "family")]
    file: Option<PathBuf>,
    /// Named family instead of a file, e.g. cycle:5, infinity:2,2,3, bispindle:1,2;3.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Clone)]
struct AlphaGrid(Vec<Rational>);

const SAMPLE_DEFAULT: u64 = 10_000;

fn alpha_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn alpha_grid_arg(s: &str) -> Result<AlphaGrid, String> {
    s.split(',')
        .map(alpha_arg)
        .collect::<Result<_, _>>()
        .map(AlphaGrid)
}

enum Failure {
    Parse(String),
    Domain(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Numeric(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidFamily(_) => Failure::Parse(e.to_string()),
            Error::RootsNotConverged { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// A report and the exit code it implies.
struct Outcome {
    report: Report,
    code: u8,
}

fn load(input: &Input) -> Result<(Digraph, serde_json::Value), Failure> {
    if let Some(spec) = &input.family {
        let spec: FamilySpec = spec.parse()?;
        let g = generate(&spec)?;
        let value = json!({ "family": spec.to_string(), "n": g.n(), "arcs": g.arc_count() });
        return Ok((g, value));
    }
    let path = input
        .file
        .as_deref()
        .expect("clap requires a file or a family");
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let g = parse_digraph(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let value = json!({ "file": path.display().to_string(), "n": g.n(), "arcs": g.arc_count() });
    Ok((g, value))
}

fn check(alpha: &Rational) -> Result<(), Failure> {
    check_alpha(alpha).map_err(Failure::from)
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Failure::Domain(format!(
            "tolerance {tol} must lie in (0, 1)"
        )))
    }
}

fn radius(input: &Input, alpha: &Rational, tol: f64) -> Result<Outcome, Failure> {
    check(alpha)?;
    check_tol(tol)?;
    let (g, value) = load(input)?;
    let cert = spectral_radius(&g, alpha, tol)?;
    let blocks = block_radii(&g, alpha, tol)?;
    let code = if cert.converged { 0 } else { 4 };
    let report = Report::new("radius", value)
        .alphas([alpha])
        .tolerance("radius", tol)
        .result(json!({ "radius": to_value(&cert), "blocks": to_value(&blocks) }));
    Ok(Outcome { report, code })
}

fn energy_cmd(input: &Input, alpha: &Rational) -> Result<Outcome, Failure> {
    check(alpha)?;
    let (g, value) = load(input)?;
    let report = Report::new("energy", value)
        .alphas([alpha])
        .tolerance("exact", 0.0)
        .result(energy(&g, alpha)?);
    Ok(Outcome { report, code: 0 })
}

fn spectrum(input: &Input, alpha: &Rational, tol: f64) -> Result<Outcome, Failure> {
    check(alpha)?;
    check_tol(tol)?;
    let (g, value) = load(input)?;
    let report = Report::new("spectrum", value)
        .alphas([alpha])
        .tolerance("roots", tol)
        .result(spectrum_small(&g, alpha, tol)?);
    Ok(Outcome { report, code: 0 })
}

fn transform(input: &Input, kind: TransformKind, out: &Path) -> Result<Outcome, Failure> {
    let (g, value) = load(input)?;
    let s = classify_gnm(&g).map_err(Error::from)?;
    let threshold = alpha_threshold(&s);
    let t = apply(&s, kind);
    let text = write_digraph(&t.result);
    fs::write(out, &text).map_err(|e| Failure::Domain(format!("{}: {e}", out.display())))?;
    let result = json!({
        "kind": kind,
        "n": s.n(),
        "m": s.m(),
        "core": s.core(),
        "tree_sizes": s.tree_sizes(),
        "v1": s.v1(),
        "alpha_threshold": threshold,
        "changed": t.result != g,
        "output": out.display().to_string(),
        "digraph": text,
    });
    let report = Report::new("transform", value).result(result);
    Ok(Outcome { report, code: 0 })
}

fn verify(
    law: LawId,
    max_n: usize,
    grid: Vec<Rational>,
    tol: f64,
    budget: u64,
    seed: u64,
) -> Result<Outcome, Failure> {
    check_tol(tol)?;
    for a in &grid {
        check(a)?;
    }
    let settings = LawSettings {
        max_n,
        alpha_grid: grid.clone(),
        tol,
        budget: Some(budget),
        seed,
        ..LawSettings::default()
    };
    let r = verify_law(law, &settings)?;
    let code = if !r.passed() {
        1
    } else if r.unconverged > 0 {
        4
    } else {
        0
    };
    let mut report = Report::new(
        "verify",
        json!({ "law": law, "max_n": max_n, "budget": budget }),
    )
    .alphas(&grid)
    .tolerance(
        if law.uses_radius() { "radius" } else { "exact" },
        r.tolerance,
    );
    report.seed = Some(seed);
    Ok(Outcome {
        report: report.result(json!({ "passed": r.passed(), "report": to_value(&r) })),
        code,
    })
}

fn scan(
    n: usize,
    m: usize,
    mode: Mode,
    seed: u64,
    budget: Option<u64>,
    grid: Vec<Rational>,
    tol: f64,
) -> Result<Outcome, Failure> {
    check_tol(tol)?;
    for a in &grid {
        check(a)?;
    }
    let mode = match mode {
        Mode::Exhaustive => ScanMode::Exhaustive { budget },
        Mode::Sample => ScanMode::Sample {
            seed,
            count: budget.unwrap_or(SAMPLE_DEFAULT),
        },
    };
    let r = scan_radius_maximality(n, m, &grid, tol, mode)?;
    let code = if !r.counterexamples.is_empty() {
        1
    } else if r.unconverged > 0 {
        4
    } else {
        0
    };
    let mut report = Report::new("scan", json!({ "n": n, "m": m, "mode": mode }))
        .alphas(&grid)
        .tolerance("radius", tol);
    report.seed = r.seed;
    Ok(Outcome {
        report: report.result(&r),
        code,
    })
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let grid = |g: Option<AlphaGrid>| g.map_or_else(default_alpha_grid, |g| g.0);
    match cli.command {
        Command::Radius { input, alpha, tol } => radius(&input, &alpha, tol),
        Command::Energy { input, alpha } => energy_cmd(&input, &alpha),
        Command::Spectrum { input, alpha, tol } => spectrum(&input, &alpha, tol),
        Command::Transform { input, kind, out } => transform(&input, kind, &out),
        Command::Verify {
            law,
            max_n,
            alpha_grid,
            tol,
            budget,
            seed,
        } => verify(law, max_n, grid(alpha_grid), tol, budget, seed),
        Command::Scan {
            n,
            m,
            mode,
            seed,
            budget,
            alpha_grid,
            tol,
        } => scan(n, m, mode, seed, budget, grid(alpha_grid), tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("aalpha: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(Outcome { report, code }) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", report.render());
            ExitCode::from(code)
        }
        Err(f) => {
            let (Failure::Parse(msg) | Failure::Domain(msg) | Failure::Numeric(msg)) = &f;
            eprintln!("aalpha: {msg}");
            ExitCode::from(f.code())
        }
    }
}
