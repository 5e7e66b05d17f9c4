//! Command-line harness: runs the verification suites against a
//! configuration and writes CSV artifacts plus a JSON summary.
//!
//! Exit codes: 0 when every asserted defect is within tolerance, 1 when a
//! check fails, 2 for unknown commands or malformed configuration.

use clap::{Parser, Subcommand};
use sl2r_fourier::config::Config;
use sl2r_fourier::norm_control::NuCase;
use sl2r_fourier::suites::{self, SuiteOutput};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sl2r-verify",
    about = "Verification suites for the operator-valued Fourier transform on SL(2,R)",
    version
)]
struct Cli {
    /// JSON configuration file; defaults to the built-in reference config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV and JSON reports.
    #[arg(long, global = true, default_value = "reports")]
    out: PathBuf,
    /// Override the K-type window bound (library and field grids).
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Override a named tolerance, e.g. `--tol unitarity=1e-9` (repeatable).
    #[arg(long, global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Haar-measure consistency and invariance checks.
    HaarCheck,
    /// Tempered principal-series unitarity defects.
    Unitarity,
    /// Intertwiner eigenvalue ratios, endpoint, gamma product, intertwining.
    CnVerify,
    /// Finite-difference Casimir eigenvalues per dual family.
    Casimir,
    /// Convergence table of the dual space.
    TopologyTable,
    /// Boundary-limit verification for one case.
    Ncdl {
        /// Boundary case: i, ii, or iii.
        #[arg(long)]
        case: String,
    },
    /// Field-model round trip, commutation, and separation checks.
    FieldsRoundtrip,
    /// Every suite in order.
    All,
}

fn build_config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| format!("config {}: {e}", path.display()))?,
        None => Config::reference(),
    };
    if let Some(n) = cli.window {
        cfg.max_index = n;
        cfg.field_grid.max_index = n;
    }
    for pair in &cli.tol {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("tolerance override `{pair}` is not NAME=VALUE"))?;
        if !cfg.tolerances.contains_key(name) {
            return Err(format!("no tolerance named {name}"));
        }
        let value: f64 = value.parse().map_err(|_| format!("bad tolerance value in `{pair}`"))?;
        cfg.tolerances.insert(name.to_string(), value);
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run_command(cfg: &Config, command: &Command) -> sl2r_fourier::error::Result<SuiteOutput> {
    match command {
        Command::HaarCheck => suites::run_haar(cfg),
        Command::Unitarity => suites::run_unitarity(cfg),
        Command::CnVerify => suites::run_cn(cfg),
        Command::Casimir => suites::run_casimir(cfg),
        Command::TopologyTable => suites::run_topology(cfg),
        Command::Ncdl { case } => suites::run_ncdl(cfg, NuCase::parse(case)?),
        Command::FieldsRoundtrip => suites::run_fields(cfg),
        Command::All => suites::run_all(cfg),
    }
}

fn write_reports(out: &PathBuf, output: &SuiteOutput) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    for (name, content) in &output.csv {
        std::fs::write(out.join(name), content)?;
    }
    let json = serde_json::to_string_pretty(&output.summaries).expect("summaries serialize");
    std::fs::write(out.join("summary.json"), json + "\n")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let output = match run_command(&cfg, &cli.command) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_reports(&cli.out, &output) {
        eprintln!("error: cannot write reports: {e}");
        return ExitCode::from(2);
    }
    for s in &output.summaries {
        println!(
            "{:28} {}  max_defect {:.6e}  tolerance {:.6e}  ({} ms)",
            s.suite,
            if s.pass { "pass" } else { "FAIL" },
            s.max_defect,
            s.tolerance,
            s.runtime_ms
        );
    }
    if output.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
