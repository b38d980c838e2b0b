use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3pencil::catalog::{CaseId, Catalog};
use k3pencil::report::{Report, Scope, Verifier};

/// Exact verification of the polyhedral K3 pencils of degree 6, 8 and 12.
#[derive(Parser)]
#[command(name = "k3pencil", version)]
struct Cli {
    /// Directory holding n6.cat, n8.cat, n12.cat and expected.tsv
    /// (defaults to the bundled data).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a group of checks; exits 1 if any entry fails.
    Verify {
        #[arg(value_enum)]
        scope: ScopeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print every check for one case, e.g. "12,3" or "8,generic".
    Report {
        #[arg(long)]
        case: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Groups,
    Fixlines,
    Singularities,
    Lattices,
    Pencil,
    All,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Groups => Scope::Groups,
            ScopeArg::Fixlines => Scope::Fixlines,
            ScopeArg::Singularities => Scope::Singularities,
            ScopeArg::Lattices => Scope::Lattices,
            ScopeArg::Pencil => Scope::Pencil,
            ScopeArg::All => Scope::All,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn render(reports: &[Report], format: Format) -> String {
    match format {
        Format::Text => reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let items: Vec<String> = reports.iter().map(Report::to_json).collect();
            format!("[\n{}\n]\n", items.join(",\n"))
        }
    }
}

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), String> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let catalog = match &cli.catalog {
        Some(dir) => Catalog::from_dir(dir),
        None => Catalog::bundled(),
    }
    .map_err(|e| e.to_string())?;
    let verifier = Verifier::new(catalog);
    match cli.command {
        Command::Verify { scope, format } => {
            let reports = verifier.verify(scope.into()).map_err(|e| e.to_string())?;
            emit(&render(&reports, format))?;
            let total: usize = reports.iter().map(|r| r.entries.len()).sum();
            let failed: Vec<(&str, _)> =
                reports.iter().flat_map(|r| r.failures().map(move |e| (r.case.as_str(), e))).collect();
            for (case, e) in &failed {
                eprintln!("mismatch {case} {}: computed {} expected {}", e.name, e.computed, e.expected);
            }
            eprintln!("{} entries, {} failed", total, failed.len());
            Ok(if failed.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Report { case, format } => {
            let id: CaseId = case.parse().map_err(|e: k3pencil::catalog::CatalogError| e.to_string())?;
            let report = verifier.report(id).map_err(|e| e.to_string())?;
            match format {
                Format::Text => emit(&report.to_text())?,
                Format::Json => emit(&format!("{}\n", report.to_json()))?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
