use clap::{Parser, Subcommand, ValueEnum};
use jclattice::basis::LatticeSpec;
use jclattice::config::{ConfigError, SweepConfig};
use jclattice::sweep::{basis_info, csv_header, emit_analytics_table, run_sweep, solve_point, SweepError};
use jclattice::validate::{validate_with, Mutation};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact diagonalization of the multi-connected Jaynes-Cummings ring.
#[derive(Parser)]
#[command(name = "jclattice", version)]
struct Cli {
    /// Config file, or a bundled config name (fig2, fig3, fig4).
    #[arg(long, global = true)]
    config: Option<String>,
    /// Sweep worker count.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output CSV; overrides `output.path`. `-` writes to stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one point and print its CSV row.
    Solve {
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        excitations: Option<usize>,
        /// Detuning in units of `model.g0_mhz`.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0, conflicts_with = "delta")]
        delta_over_g0: f64,
        /// Detuning in MHz.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 150.0)]
        gl: f64,
        #[arg(long, default_value_t = 150.0)]
        gr: f64,
    },
    /// Run every (pair, detuning) point of the config.
    Sweep,
    /// Write the nonlinearity table.
    Analytics,
    /// Report the sector dimension and Hamiltonian sparsity.
    BasisInfo {
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        excitations: Option<usize>,
    },
    /// Run the oracle and symmetry checks.
    Validate {
        /// Inject a known defect to exercise the harness.
        #[arg(long, value_enum, default_value_t = Inject::None)]
        inject: Inject,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Inject {
    None,
    NegatedLeftCoupling,
    HalfCavityVacuum,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("cannot write `{path}`: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Failed(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Sweep(SweepError::Io(e))
    }
}

fn load(cli: &Cli, fallback: Option<&str>) -> Result<SweepConfig, CliError> {
    Ok(match cli.config.as_deref().or(fallback) {
        Some(name) => SweepConfig::load(name)?,
        None => SweepConfig::default(),
    })
}

fn lattice(cfg: &SweepConfig, sites: Option<usize>, excitations: Option<usize>) -> Result<LatticeSpec, CliError> {
    let spec = LatticeSpec::new(
        sites.unwrap_or(cfg.lattice.sites()),
        excitations.unwrap_or(cfg.lattice.excitations()),
    )
    .map_err(ConfigError::from)?;
    if spec.sites() < 2 {
        return Err(ConfigError::InvalidValue {
            key: "sites".into(),
            value: spec.sites().to_string(),
            reason: "the ring needs at least two sites".into(),
        }
        .into());
    }
    Ok(spec)
}

/// `--output`, else `output.path` when `use_config_path`, else stdout.
fn sink(cli: &Cli, cfg: &SweepConfig, use_config_path: bool) -> Result<Box<dyn Write>, CliError> {
    let path = cli.output.clone().or_else(|| if use_config_path { cfg.output_path.clone() } else { None });
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let file = File::create(&p).map_err(|source| CliError::Output { path: p.clone(), source })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve { sites, excitations, delta_over_g0, delta, gl, gr } => {
            let cfg = load(cli, None)?;
            let spec = lattice(&cfg, *sites, *excitations)?;
            let basis = jclattice::enumerate_basis(spec).map_err(SweepError::from)?;
            let delta = delta.unwrap_or(delta_over_g0 * cfg.g0);
            let row = solve_point(&basis, cfg.omega_c, delta, *gl, *gr, &cfg.solver)?;
            let mut out = sink(cli, &cfg, false)?;
            writeln!(out, "{}", csv_header(spec.max_distance()))?;
            writeln!(out, "{}", row.to_csv())?;
            out.flush()?;
            if !row.converged {
                return Err(CliError::Failed(format!("solver did not converge (residual {:e})", row.residual)));
            }
        }
        Command::Sweep => {
            let cfg = load(cli, None)?;
            let mut out = sink(cli, &cfg, true)?;
            let summary = run_sweep(&cfg, cli.threads, &mut out)?;
            eprintln!("{} rows, {} unconverged", summary.rows, summary.unconverged);
            if summary.unconverged > 0 {
                return Err(CliError::Failed(format!("{} points did not converge", summary.unconverged)));
            }
        }
        Command::Analytics => {
            let cfg = load(cli, Some("fig2"))?;
            let a = &cfg.analytics;
            let mut out = sink(cli, &cfg, true)?;
            let rows = emit_analytics_table(cfg.omega_c, a.g, a.n_max, &a.delta_over_g, &mut out)?;
            eprintln!("{rows} rows");
        }
        Command::BasisInfo { sites, excitations } => {
            let cfg = load(cli, None)?;
            let spec = lattice(&cfg, *sites, *excitations)?;
            let info = basis_info(spec, 1.0, 1.0)?;
            let mut out = sink(cli, &cfg, false)?;
            writeln!(
                out,
                "M={} N={} dimension={} nonzeros={} x_max={}",
                info.sites,
                info.excitations,
                info.dimension,
                info.nonzeros,
                spec.max_distance()
            )?;
            out.flush()?;
        }
        Command::Validate { inject } => {
            let mutation = match inject {
                Inject::None => Mutation::None,
                Inject::NegatedLeftCoupling => Mutation::NegatedLeftCoupling,
                Inject::HalfCavityVacuum => Mutation::HalfCavityVacuum,
            };
            let report = validate_with(mutation);
            let cfg = SweepConfig::default();
            let mut out = sink(cli, &cfg, false)?;
            writeln!(out, "{report}")?;
            out.flush()?;
            if !report.passed() {
                return Err(CliError::Failed(format!("{} checks failed", report.failures().count())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Config(_) | CliError::Sweep(SweepError::NoThreads) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
