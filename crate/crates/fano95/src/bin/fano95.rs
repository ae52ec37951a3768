//! Command-line front end: enumerate the catalog, inspect families, verify
//! the claim ledger, and check rational inequality systems.

use clap::{Parser, Subcommand, ValueEnum};
use fano95::catalog::{enumerate_families, Catalog, DEFAULT_MAX_WEIGHT};
use fano95::fm::{check_certificate, fm_feasibility, parse_system, FeasibilityResult};
use fano95::golden::golden_system;
use fano95::ledger::{verify_all, ClaimStatus};
use fano95::{mu_bounds, InvolutionKind};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fano95",
    version,
    about = "Exact catalog and verifier for the 95 weighted Fano threefold hypersurface families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build the catalog and write it out.
    Enumerate {
        #[arg(long, default_value_t = DEFAULT_MAX_WEIGHT)]
        max_weight: u32,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print one family with basket, blow-up degrees, involutions, children,
    /// and μ-bounds.
    Family {
        gimel: u32,
        #[arg(long)]
        json: bool,
    },
    /// Claim-ledger operations.
    Ledger {
        #[command(subcommand)]
        command: LedgerCommand,
    },
    /// Linear inequality systems.
    Lp {
        #[command(subcommand)]
        command: LpCommand,
    },
}

#[derive(Subcommand)]
enum LedgerCommand {
    /// Evaluate every claim and golden system; exit 0 on match/anomaly-match,
    /// 1 on any mismatch.
    Verify {
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LpCommand {
    /// Decide a registered system (by id) or a system file.
    Check {
        /// Golden id such as SYS-23, or a path to a constraint file.
        target: String,
        /// Print the infeasibility certificate or the witness.
        #[arg(long)]
        certificate: bool,
    },
}

fn build_catalog(max_weight: u32) -> Result<Catalog, ExitCode> {
    match enumerate_families(max_weight) {
        Ok(c) => Ok(c),
        Err(fano95::catalog::CatalogError::BoundTooSmall(w)) => {
            eprintln!("error: max weight {w} is too small");
            Err(ExitCode::from(2))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(1))
        }
    }
}

fn write_out(path: Option<PathBuf>, payload: &str) -> ExitCode {
    match path {
        None => {
            print!("{payload}");
            ExitCode::SUCCESS
        }
        Some(p) => match std::fs::write(&p, payload) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                ExitCode::from(2)
            }
        },
    }
}

fn run_enumerate(max_weight: u32, out: Option<PathBuf>, format: Format) -> ExitCode {
    let catalog = match build_catalog(max_weight) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let payload = match format {
        Format::Json => catalog.to_json(),
        Format::Csv => catalog.to_csv(),
    };
    write_out(out, &payload)
}

fn run_family(gimel: u32, json: bool) -> ExitCode {
    let catalog = match build_catalog(DEFAULT_MAX_WEIGHT) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let record = match catalog.family(gimel) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if json {
        print!(
            "{}",
            catalog.family_json(gimel).expect("ordinal checked above")
        );
        return ExitCode::SUCCESS;
    }
    let a = record.ws.weights();
    println!(
        "family {}: X_{} in P(1,{},{},{},{}); -K^3 = {}",
        record.gimel,
        record.ws.degree(),
        a[0],
        a[1],
        a[2],
        a[3],
        record.kx3
    );
    for (entry, point) in record.entries() {
        println!(
            "  {} x {} at {}: blow-up degree {} ({})",
            entry.count,
            entry.qtype,
            entry.locus,
            point.ku3,
            match point.sign {
                fano95::Sign::Neg => "negative",
                fano95::Sign::Zero => "zero",
                fano95::Sign::Pos => "positive",
            }
        );
        if !point.children.is_empty() {
            let kids: Vec<String> = point.children.iter().map(|c| c.to_string()).collect();
            println!("    blow-up children: {}", kids.join(", "));
        }
        for t in &point.involutions {
            let kind = match t.kind {
                InvolutionKind::Quadratic => "quadratic",
                InvolutionKind::Elliptic => "elliptic",
            };
            let aj = record.ws.weight(t.j as usize);
            print!("    {kind} involution with j = {} (weight {aj})", t.j);
            match mu_bounds(&record.ws, entry.qtype, t.j, t.kind) {
                Ok(b) => {
                    let mut parts = Vec::new();
                    if let Some(q) = b.upper_quadratic {
                        parts.push(format!("mu <= {q}"));
                    }
                    if let Some(c) = b.upper_cap {
                        parts.push(format!("mu <= {c}"));
                    }
                    if let Some(l) = b.lower_elliptic {
                        parts.push(format!("mu > {l}"));
                    }
                    println!("; {}", parts.join(", "));
                }
                Err(_) => println!(),
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_verify(report_path: Option<PathBuf>) -> ExitCode {
    let catalog = match build_catalog(DEFAULT_MAX_WEIGHT) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = verify_all(&catalog);
    for c in &report.claims {
        let status = match c.status {
            ClaimStatus::Match => "match",
            ClaimStatus::AnomalyMatch => "anomaly-match",
            ClaimStatus::Mismatch => "mismatch",
        };
        let soft = if c.soft { " (informational)" } else { "" };
        println!("{:9} {status}{soft}", c.id);
        if !c.missing.is_empty() {
            println!("          missing: {:?}", c.missing);
        }
        if !c.extra.is_empty() {
            println!("          extra:   {:?}", c.extra);
        }
    }
    for f in &report.fm {
        let mark = if f.verdict == f.expected {
            ""
        } else {
            " (discrepancy)"
        };
        println!(
            "{:9} {} (expected {}){}{}",
            f.id,
            f.verdict,
            f.expected,
            if f.certificate_ok {
                ""
            } else {
                " BAD CERTIFICATE"
            },
            mark
        );
    }
    if let Some(p) = report_path {
        if let Err(e) = std::fs::write(&p, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    if report.passed() {
        println!("overall: ok");
        ExitCode::SUCCESS
    } else {
        println!("overall: MISMATCH");
        ExitCode::from(1)
    }
}

fn run_lp_check(target: &str, want_certificate: bool) -> ExitCode {
    let system = if target.starts_with("SYS-") {
        match golden_system(target) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    } else {
        let text = match std::fs::read_to_string(target) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {target}: {e}");
                return ExitCode::from(2);
            }
        };
        match parse_system(&text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    };
    match fm_feasibility(&system) {
        FeasibilityResult::Infeasible { certificate } => {
            let ok = check_certificate(&system, &certificate).unwrap_or(false);
            println!("INFEASIBLE");
            if want_certificate {
                for (m, c) in certificate.multipliers.iter().zip(&system.constraints) {
                    let rel = match c.relation {
                        fano95::Relation::Lt => "<",
                        fano95::Relation::Le => "<=",
                    };
                    let terms: Vec<String> = c
                        .coeffs
                        .iter()
                        .zip(&system.variables)
                        .filter(|(x, _)| !num_traits_is_zero(x))
                        .map(|(x, v)| format!("{x}*{v}"))
                        .collect();
                    println!("  multiplier {m} on: {} {rel} {}", terms.join(" + "), c.rhs);
                }
                println!("  certificate valid: {ok}");
            }
            ExitCode::SUCCESS
        }
        FeasibilityResult::Feasible { witness } => {
            println!("FEASIBLE");
            if want_certificate {
                for (v, x) in system.variables.iter().zip(&witness) {
                    println!("  {v} = {x}");
                }
            }
            ExitCode::SUCCESS
        }
    }
}

fn num_traits_is_zero(x: &fano95::Rational) -> bool {
    use num_traits::Zero;
    x.is_zero()
}

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe, like any unix filter
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate {
            max_weight,
            out,
            format,
        } => run_enumerate(max_weight, out, format),
        Command::Family { gimel, json } => run_family(gimel, json),
        Command::Ledger {
            command: LedgerCommand::Verify { report },
        } => run_verify(report),
        Command::Lp {
            command:
                LpCommand::Check {
                    target,
                    certificate,
                },
        } => run_lp_check(&target, certificate),
    }
}
