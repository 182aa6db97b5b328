use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edgemodes_cli::config::{ConfigFile, RunConfig, Scenario, WindowKind, OUT_ENV};
use edgemodes_cli::{run, CliError};

/// Majorana edge-mode simulations of the kicked Ising chain.
///
/// Settings come from an optional JSON or TOML file (--config) and are
/// overridden by flags.  Config keys: scenario, L, g, zeta, J, h, h_sites, T,
/// delta, delta_grid, g_grid, L_set, h_grid, ensemble, seed, gamma_phi,
/// gamma_d, shots, sample_shots, window, threads, out.  Angles delta and zeta
/// are in units of pi; h is in radians.  The output directory defaults to
/// $EDGEMODES_OUT, then ./edgemodes-out.
#[derive(Parser, Debug)]
#[command(name = "edgemodes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fourier spectrum of <Z_1(t)> at h = 0 over g_grid x L_set (free fermions).
    Spectrum(Common),
    /// Per-site autocorrelators z_j <Z_j(t)>, edge vs bulk (statevector).
    Dynamics(Common),
    /// nu_max(delta) of the kicked-Ising edge peak (pi mode, or 0 mode when g < J).
    DisorderSweep(Common),
    /// Edge-mode lifetime vs g under dephasing and decay (density matrix).
    Lindblad(Common),
    /// Pauli expansion of the edge mode from late-time string correlators.
    Reconstruct(Common),
    /// nu_max(delta) of the XY-model edge excitation.
    Xy(Common),
    /// ln Delta(L) vs L for each g in g_grid.
    Splitting(Common),
    /// pi-pairing defect over mean level spacing for each h in h_grid.
    Pairing(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON or TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short = 'L', long = "length")]
    l: Option<usize>,
    #[arg(long)]
    g: Option<f64>,
    /// XY rotation angle in units of pi.
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(short = 'J', long = "coupling")]
    j: Option<f64>,
    /// Uniform field angle (radians).
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Number of cycles.
    #[arg(short = 'T', long = "cycles")]
    t: Option<usize>,
    /// Disorder half-width in units of pi.
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated disorder grid in units of pi.
    #[arg(long, value_delimiter = ',')]
    delta_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    g_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    l_set: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    h_grid: Option<Vec<f64>>,
    #[arg(long)]
    ensemble: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma_phi: Option<f64>,
    #[arg(long)]
    gamma_d: Option<f64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    sample_shots: bool,
    #[arg(long, value_enum)]
    window: Option<Window>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Window {
    Rectangular,
    Hann,
}

impl Common {
    fn into_file(self, scenario: Scenario) -> ConfigFile {
        ConfigFile {
            scenario: Some(scenario),
            l: self.l,
            g: self.g,
            zeta: self.zeta,
            j: self.j,
            h: self.h,
            h_sites: None,
            t: self.t,
            delta: self.delta,
            delta_grid: self.delta_grid,
            g_grid: self.g_grid,
            l_set: self.l_set,
            h_grid: self.h_grid,
            ensemble: self.ensemble,
            seed: self.seed,
            gamma_phi: self.gamma_phi,
            gamma_d: self.gamma_d,
            shots: self.shots,
            sample_shots: self.sample_shots.then_some(true),
            window: self.window.map(|w| match w {
                Window::Rectangular => WindowKind::Rectangular,
                Window::Hann => WindowKind::Hann,
            }),
            threads: self.threads,
            out: self.out,
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (scenario, common) = match cli.command {
        Command::Spectrum(c) => (Scenario::Spectrum, c),
        Command::Dynamics(c) => (Scenario::Dynamics, c),
        Command::DisorderSweep(c) => (Scenario::DisorderSweep, c),
        Command::Lindblad(c) => (Scenario::Lindblad, c),
        Command::Reconstruct(c) => (Scenario::Reconstruct, c),
        Command::Xy(c) => (Scenario::Xy, c),
        Command::Splitting(c) => (Scenario::Splitting, c),
        Command::Pairing(c) => (Scenario::Pairing, c),
    };
    let base = match &common.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    if let Some(s) = base.scenario.filter(|s| *s != scenario) {
        return Err(CliError::Config(format!(
            "scenario: file says `{}` but the subcommand is `{}`",
            s.name(),
            scenario.name()
        )));
    }
    let file = base.overlay(common.into_file(scenario));
    let config = RunConfig::resolve(file, std::env::var_os(OUT_ENV).map(PathBuf::from))?;
    if let Some(n) = config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let meta = run(&config)?;
    for f in &meta.files {
        println!("{}", config.out.join(f).display());
    }
    println!("{}", config.out.join("meta.json").display());
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let rec = e.record();
            eprintln!("{}", serde_json::json!({ "error": rec }));
            ExitCode::from(rec.exit_code as u8)
        }
    }
}
