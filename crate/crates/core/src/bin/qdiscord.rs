//! Command-line front end: discord of JSON states, the CS <-> X transform,
//! and the nanopore dynamics emitters (CSV/JSON, no plotting).
//!
//! Exit codes: 0 success, 1 domain error (invalid state, no roots, failed
//! selftest), 2 usage error.

use clap::{Parser, Subcommand};
use qdiscord::csx::{self, CsMatrix, XMatrix};
use qdiscord::density::EntropyUnit;
use qdiscord::discord::DiscordOptions;
use qdiscord::nanopore::{self, NanoporeParams, SweepRange};
use qdiscord::oracle::OracleGrid;
use qdiscord::selftest::{run_all, SelftestConfig};
use qdiscord::{io, oracle, piecewise_discord};
use std::path::PathBuf;
use std::process::ExitCode;

fn version_string() -> String {
    format!(
        "{} (cs2x coefficient table sha256 {})",
        env!("CARGO_PKG_VERSION"),
        csx::signs_table_hash()
    )
}

#[derive(Parser, Debug)]
#[command(name = "qdiscord", version = version_string(), about)]
struct Cli {
    /// Entropy unit of reported values.
    #[arg(long, global = true, default_value = "bits")]
    units: UnitArg,
    /// Validation tolerance for input density matrices.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed of any randomized check.
    #[arg(long, global = true, default_value_t = 0x51e5)]
    seed: u64,
    /// Worker threads for sweeps and oracle grids (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum UnitArg {
    Bits,
    Nats,
}

impl From<UnitArg> for EntropyUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Bits => EntropyUnit::Bits,
            UnitArg::Nats => EntropyUnit::Nats,
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    /// Piecewise formula (X or CS states).
    Piecewise,
    /// Brute-force measurement grid (any state).
    Oracle,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum discord of a two-qubit state read from JSON.
    Discord {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "piecewise")]
        method: MethodArg,
        /// Interior grid of the piecewise theta scan.
        #[arg(long, default_value_t = 64)]
        grid_points: usize,
        /// Polar resolution of the oracle grid.
        #[arg(long, default_value_t = 181)]
        oracle_theta: usize,
        /// Azimuthal resolution of the oracle grid.
        #[arg(long, default_value_t = 181)]
        oracle_phi: usize,
        /// Skip the oracle's local refinement.
        #[arg(long)]
        no_refine: bool,
    },
    /// Double-Hadamard similarity between CS and X matrices.
    Cs2x {
        #[arg(long)]
        input: PathBuf,
        /// Map X to CS instead of CS to X.
        #[arg(long)]
        inverse: bool,
    },
    /// Discord sweep over dimensionless time, CSV output.
    Nanopore {
        #[arg(long = "N")]
        n_particles: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        steps: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Times where the Q0 and Qpi/2 branches cross, as a JSON list.
    NanoporeCrossings {
        #[arg(long = "N")]
        n_particles: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t_max: f64,
    },
    /// Discord plateau in the thermodynamic limit.
    NanoporeLimit {
        #[arg(long)]
        beta: f64,
    },
    /// Flickering spectrum: harmonic amplitudes of Q over one period.
    NanoporeSpectrum {
        #[arg(long = "N")]
        n_particles: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        harmonics: usize,
    },
    /// Run the acceptance checks and print a pass/fail table.
    Selftest {
        /// Random states for the oracle-equivalence check.
        #[arg(long, default_value_t = 500)]
        oracle_states: usize,
        /// Report oracle-backed checks as skipped (exit stays nonzero).
        #[arg(long)]
        skip_oracle: bool,
    },
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Read(#[from] io::ReadError),
    #[error(transparent)]
    Structure(#[from] csx::StructureError),
    #[error(transparent)]
    NotXOrCs(#[from] qdiscord::NotXOrCs),
    #[error(transparent)]
    Params(#[from] nanopore::ParamError),
    #[error(transparent)]
    Spectrum(#[from] nanopore::SpectrumError),
    #[error("no branch crossings in (0, {t_max})")]
    NoRoots { t_max: f64 },
    #[error("{failed} of {total} selftest checks did not pass")]
    SelftestFailed { failed: usize, total: usize },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let unit: EntropyUnit = cli.units.into();
    match &cli.command {
        Command::Discord {
            input,
            method,
            grid_points,
            oracle_theta,
            oracle_phi,
            no_refine,
        } => {
            let rho = io::read_state_file(input, cli.tol)?;
            match method {
                MethodArg::Piecewise => {
                    let opts =
                        DiscordOptions { grid_points: *grid_points, ..DiscordOptions::default() };
                    let result = piecewise_discord(&rho, unit, &opts, cli.tol)?;
                    println!("{}", serde_json::to_string(&result).expect("serializes"));
                }
                MethodArg::Oracle => {
                    let grid = OracleGrid { n_theta: *oracle_theta, n_phi: *oracle_phi };
                    let q = oracle::discord(&rho, unit, &grid, !*no_refine);
                    println!("{{\"q_value\":{},\"unit\":\"{unit}\",\"method\":\"oracle\"}}", fmt17(q));
                }
            }
            Ok(())
        }
        Command::Cs2x { input, inverse } => {
            let m = io::read_matrix_file(input)?;
            let out = if *inverse {
                csx::x_to_cs(&XMatrix::from_matrix(&m, cli.tol)?).to_matrix()
            } else {
                csx::cs_to_x(&CsMatrix::from_matrix(&m, cli.tol)?).to_matrix()
            };
            println!("{}", io::matrix_to_json_string(&out));
            Ok(())
        }
        Command::Nanopore { n_particles, beta, t_start, t_end, steps, out } => {
            NanoporeParams::new(*n_particles, *beta, t_start.max(0.0))?;
            let range = SweepRange {
                n_particles: *n_particles,
                beta: *beta,
                t_start: *t_start,
                t_end: *t_end,
                steps: *steps,
            };
            let records = nanopore::sweep(&range, &DiscordOptions::default());
            let mut csv = String::from("alpha_t,q0_bits,q_pi2_bits,q_theta_bits,q_bits,theta_opt\n");
            for r in &records {
                let q_theta = r.q_theta_bits.map(fmt17).unwrap_or_default();
                csv.push_str(&format!(
                    "{},{},{},{q_theta},{},{}\n",
                    fmt17(r.alpha_t),
                    fmt17(r.q0_bits),
                    fmt17(r.q_pi2_bits),
                    fmt17(r.q_bits),
                    fmt17(r.theta_opt),
                ));
            }
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::NanoporeCrossings { n_particles, beta, t_max } => {
            NanoporeParams::new(*n_particles, *beta, 0.0)?;
            let roots = nanopore::find_branch_crossings(*n_particles, *beta, (0.0, *t_max));
            let rendered: Vec<String> = roots.iter().map(|r| fmt17(*r)).collect();
            println!("[{}]", rendered.join(","));
            if roots.is_empty() {
                return Err(CliError::NoRoots { t_max: *t_max });
            }
            Ok(())
        }
        Command::NanoporeLimit { beta } => {
            println!("{}", fmt17(nanopore::thermodynamic_limit_discord(*beta)));
            Ok(())
        }
        Command::NanoporeSpectrum { n_particles, beta, samples, harmonics } => {
            NanoporeParams::new(*n_particles, *beta, 0.0)?;
            let spectrum = nanopore::flicker_spectrum(*n_particles, *beta, *samples, *harmonics)?;
            println!("harmonic,amplitude");
            for (k, amp) in spectrum {
                println!("{k},{}", fmt17(amp));
            }
            Ok(())
        }
        Command::Selftest { oracle_states, skip_oracle } => {
            let cfg = SelftestConfig {
                oracle_states: *oracle_states,
                skip_oracle: *skip_oracle,
                seed: cli.seed,
            };
            let outcomes = run_all(&cfg);
            let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
            let mut failed = 0usize;
            for o in &outcomes {
                if !o.passed {
                    failed += 1;
                }
                println!("{:<width$}  {}  {}", o.name, o.status(), o.detail);
            }
            if failed > 0 {
                return Err(CliError::SelftestFailed { failed, total: outcomes.len() });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!(
        "qdiscord: command = {:?}, units = {:?}, tol = {:.3e}, seed = {}, threads = {}",
        std::env::args().nth(1).unwrap_or_default(),
        cli.units,
        cli.tol,
        cli.seed,
        if cli.threads == 0 { "all".to_string() } else { cli.threads.to_string() }
    );
    if cli.threads > 0 {
        // ignore failure when a pool already exists (repeated calls in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
