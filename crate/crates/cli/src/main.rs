use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graph_spectra::TruncationFlavor;
use graph_spectra_cli::{run, Command, RunConfig, Tolerances};

#[derive(Parser)]
#[command(name = "graph-spectra", version, about = "Spectra, heat kernels and spectral comparison on weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Graph file (.graph text or .json) or generator, e.g. paper-path:N=100
    /// or path:m=n^-4,b=n^2,c=0,N=50
    #[arg(long)]
    input: String,
    /// Truncation flavor for generators
    #[arg(long, default_value = "neumann")]
    flavor: TruncationFlavor,
    /// Path prefix for report.txt and CSV tables (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = Tolerances::default().compare)]
    tol_compare: f64,
    #[arg(long, default_value_t = Tolerances::default().weyl)]
    tol_weyl: f64,
    #[arg(long, default_value_t = Tolerances::default().hadamard)]
    tol_hadamard: f64,
    #[arg(long, default_value_t = Tolerances::default().heat)]
    tol_heat: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the graph invariants
    Validate(Common),
    /// Eigenvalues with per-pair residuals
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Also write the symmetric operator matrix
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Local Weyl defects per vertex
    Weyl(Common),
    /// Heat kernel values
    Heat {
        #[command(flatten)]
        common: Common,
        /// Times, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0.1,1")]
        t: Vec<f64>,
    },
    /// Spectral comparison with an added potential
    Compare {
        #[command(flatten)]
        common: Common,
        /// Potential: closed form in n or value file (default: the graph's own, over a zero baseline)
        #[arg(long)]
        c: Option<String>,
    },
    /// Hadamard derivative against finite differences
    Hadamard {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        /// Single eigenvalue index (1-based); all by default
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Truncation study over sizes and both flavors
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        c: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Number of eigenvalue shifts to report per size
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
}

fn config(cli: Cli) -> RunConfig {
    let (common, command) = match cli.command {
        Cmd::Validate(c) => (c, Command::Validate),
        Cmd::Spectrum { common, dump_matrix } => (common, Command::Spectrum { dump_matrix }),
        Cmd::Weyl(c) => (c, Command::Weyl),
        Cmd::Heat { common, t } => (common, Command::Heat { times: t }),
        Cmd::Compare { common, c } => (common, Command::Compare { c }),
        Cmd::Hadamard { common, c, tau, n, h } => (common, Command::Hadamard { c, tau, n, h }),
        Cmd::Converge { common, c, sizes, k } => (common, Command::Converge { c, sizes, k }),
    };
    RunConfig {
        command,
        input: common.input,
        flavor: common.flavor,
        tolerances: Tolerances {
            compare: common.tol_compare,
            weyl: common.tol_weyl,
            hadamard: common.tol_hadamard,
            heat: common.tol_heat,
        },
        output: common.output,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { graph_spectra_cli::EXIT_INPUT } else { 0 });
        }
    };
    let status = run(&config(cli), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(status)
}
