use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use tstruct_cli::commands::*;
use tstruct_cli::report::{Format, Report};
use tstruct_cli::workspace::{parse_window, Workspace};

/// Exact computations with compactly generated tensor t-structures over
/// spectra of principal ideal domains.
#[derive(Parser)]
#[command(name = "tstruct", version, about)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, default_value = "both")]
    format: String,
    /// Also write the report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a complex or filtration file.
    Validate { file: PathBuf },
    /// Cohomology modules of a complex.
    Cohomology {
        complex: PathBuf,
        #[arg(long)]
        degree: Option<i64>,
    },
    /// Degreewise supports and graded supports of a complex.
    Support { complex: PathBuf },
    /// Aisle membership of a complex in U_phi.
    Membership { complex: PathBuf, filtration: PathBuf },
    /// Coaisle membership (orthogonality against the Koszul generators).
    Coaisle {
        complex: PathBuf,
        filtration: PathBuf,
        /// Check window lo:hi (default: derived from the inputs).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Verified t-decomposition L -> A -> N -> L[1].
    Tdecomp {
        complex: PathBuf,
        filtration: PathBuf,
        /// Attachment iteration cap.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Graded support of a list of complexes.
    Gsupp { list: PathBuf },
    /// Koszul generator family of a filtration.
    Generators {
        filtration: PathBuf,
        /// Window lo:hi.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Classification round-trips.
    Roundtrip {
        /// Direction: phi-psi or psi-phi.
        #[arg(long)]
        dir: String,
        /// Filtration file (phi-psi) or generator list (psi-phi).
        file: PathBuf,
        /// Window lo:hi (phi-psi).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Probe list (psi-phi).
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Restrict a complex to the basic open D(f).
    Restrict {
        complex: PathBuf,
        /// The element f defining D(f).
        #[arg(long)]
        open: String,
    },
    /// Extend a complex from D(f) back to the spectrum.
    Extend {
        complex: PathBuf,
        /// Ambient ring file (default: the unlocalized base ring).
        #[arg(long)]
        ambient: Option<PathBuf>,
        /// Subset file Z for a support-constrained extension.
        #[arg(long)]
        support: Option<PathBuf>,
        /// Degree bound N for the support-constrained extension.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Run the property harness.
    Harness {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Self-test mutation: none or flip-cone-sign.
        #[arg(long, default_value = "none")]
        mutation: String,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    let ws = Workspace;
    match &cli.command {
        Cmd::Validate { file } => cmd_validate(&ws, file),
        Cmd::Cohomology { complex, degree } => cmd_cohomology(&ws, complex, *degree),
        Cmd::Support { complex } => cmd_support(&ws, complex),
        Cmd::Membership {
            complex,
            filtration,
        } => cmd_membership(&ws, complex, filtration),
        Cmd::Coaisle {
            complex,
            filtration,
            window,
        } => {
            let window = window.as_deref().map(parse_window).transpose()?;
            cmd_coaisle(&ws, complex, filtration, window)
        }
        Cmd::Tdecomp {
            complex,
            filtration,
            cap,
        } => cmd_tdecomp(&ws, complex, filtration, *cap),
        Cmd::Gsupp { list } => cmd_gsupp(&ws, list),
        Cmd::Generators { filtration, window } => {
            cmd_generators(&ws, filtration, parse_window(window)?)
        }
        Cmd::Roundtrip {
            dir,
            file,
            window,
            probes,
        } => match dir.as_str() {
            "phi-psi" => {
                let Some(w) = window else {
                    bail!("--window lo:hi is required for --dir phi-psi");
                };
                cmd_roundtrip_phi_psi(&ws, file, parse_window(w)?)
            }
            "psi-phi" => {
                let Some(p) = probes else {
                    bail!("--probes <list.json> is required for --dir psi-phi");
                };
                cmd_roundtrip_psi_phi(&ws, file, p)
            }
            other => bail!("unknown direction '{other}' (phi-psi|psi-phi)"),
        },
        Cmd::Restrict { complex, open } => cmd_restrict(&ws, complex, open),
        Cmd::Extend {
            complex,
            ambient,
            support,
            bound,
        } => cmd_extend(
            &ws,
            complex,
            ambient.as_deref(),
            support.as_deref(),
            *bound,
        ),
        Cmd::Harness {
            seed,
            cases,
            mutation,
        } => cmd_harness(*seed, *cases, mutation),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = report.emit(format, cli.out.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
