use std::path::PathBuf;
use std::process::ExitCode;

use causal_game::game::default_k0;
use causal_game::{
    optimal_dt, simulate_game, success_probability, sweep, violation_threshold_sigma, GameConfig,
};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

mod fock_demo;
mod format;
mod sweep_config;

use format::sig9;
use sweep_config::{DtRange, SweepFile};

/// Causal-inequality guessing game with Gaussian-localised photon modes.
///
/// Worker threads can be capped with CAUSAL_GAME_THREADS (0 = one per core).
#[derive(Debug, Parser)]
#[command(name = "causal-game", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Success probability and transmissions for one configuration.
    Psucc(GameArgs),
    /// Optimal timing offset for equal widths.
    Optimize {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        json: bool,
    },
    /// Largest equal width that still reaches the causal bound.
    Threshold {
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dt: f64,
        #[arg(long)]
        json: bool,
    },
    /// Equal-width grid over sigma and dt, written as CSV or JSON.
    Sweep(SweepArgs),
    /// Monte Carlo simulation of the protocol.
    Montecarlo {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 1_000_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Self-check of the Fock-space mirror, CNOT and feedback circuits.
    FockDemo,
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long, allow_negative_numbers = true)]
    sigma_a: f64,
    #[arg(long, allow_negative_numbers = true)]
    sigma_b: f64,
    #[arg(long, allow_negative_numbers = true)]
    tau: f64,
    #[arg(long, allow_negative_numbers = true)]
    dt: f64,
    /// Carrier wavenumber [default: 100·max(sigma-a, sigma-b)]
    #[arg(long, allow_negative_numbers = true)]
    k0: Option<f64>,
    /// Print full-precision JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl GameArgs {
    fn config(&self) -> GameConfig {
        GameConfig {
            sigma_a: self.sigma_a,
            sigma_b: self.sigma_b,
            tau: self.tau,
            dt: self.dt,
            k0: self.k0.unwrap_or_else(|| default_k0(self.sigma_a, self.sigma_b)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated widths.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    sigma: Vec<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Comma-separated timing offsets.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    dt: Vec<f64>,
    /// Evenly spaced offsets `start:stop:count`, appended after --dt.
    #[arg(long, allow_hyphen_values = true)]
    dt_range: Option<DtRange>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file [default: stdout]
    #[arg(long)]
    output: Option<PathBuf>,
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(clap::error::ErrorKind::MissingRequiredArgument, msg).exit()
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("CAUSAL_GAME_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("CAUSAL_GAME_THREADS must be a nonnegative integer, got `{raw}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

fn run_sweep(args: SweepArgs) -> Result<(), String> {
    let file = match &args.config {
        Some(path) => SweepFile::load(path)?,
        None => SweepFile::default(),
    };
    let sigma = if args.sigma.is_empty() { file.sigma.clone() } else { args.sigma.clone() };
    let Some(tau) = args.tau.or(file.tau) else {
        usage_error("sweep needs --tau (or `tau` in the config file)");
    };
    let mut dt = if args.dt.is_empty() && args.dt_range.is_none() {
        let mut dt = file.dt.clone();
        if let Some(range) = file.dt_range()? {
            dt.extend(range.values());
        }
        dt
    } else {
        args.dt.clone()
    };
    if let Some(range) = &args.dt_range {
        dt.extend(range.values());
    }
    if sigma.is_empty() || dt.is_empty() {
        usage_error("sweep needs nonempty --sigma and --dt/--dt-range grids");
    }
    let format = args.format.or(file.format).unwrap_or(Format::Csv);
    let output = args.output.clone().or(file.output.clone());

    let rows = sweep(&sigma, tau, &dt).map_err(|e| e.to_string())?;
    let body = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?
        }
        Format::Json => to_json(&rows)? + "\n",
    };
    match output {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    configure_threads()?;
    match cli.command {
        Command::Psucc(args) => {
            let s = success_probability(&args.config()).map_err(|e| e.to_string())?;
            if args.json {
                println!("{}", to_json(&s)?);
            } else {
                println!("p_transmit_ab = {}", sig9(s.p_transmit_ab));
                println!("p_transmit_ba = {}", sig9(s.p_transmit_ba));
                println!("p_bob_guesses_right = {}", sig9(s.p_bob_guesses_right));
                println!("p_alice_guesses_right = {}", sig9(s.p_alice_guesses_right));
                println!("p_succ = {}", sig9(s.p_succ));
                println!("violation_margin = {}", sig9(s.violation_margin));
                println!("violates_bound = {}", s.violates_bound);
            }
        }
        Command::Optimize { sigma, tau, json } => {
            let r = optimal_dt(sigma, tau).map_err(|e| e.to_string())?;
            if json {
                println!("{}", to_json(&r)?);
            } else {
                println!("dt_star = {}", r.dt_star);
                println!("p_succ_star = {}", r.p_succ_star);
                println!("regime = {:?}", r.regime);
                println!("bifurcation_sigma_tau = {}", r.bifurcation_sigma_tau);
            }
        }
        Command::Threshold { tau, dt, json } => {
            let r = violation_threshold_sigma(tau, dt).map_err(|e| e.to_string())?;
            if json {
                println!("{}", to_json(&r)?);
            } else {
                println!("sigma = {}", r.sigma);
                println!("always_violates = {}", r.always_violates);
            }
        }
        Command::Sweep(args) => run_sweep(args)?,
        Command::Montecarlo { game, rounds, seed } => {
            let r = simulate_game(&game.config(), rounds, seed).map_err(|e| e.to_string())?;
            if game.json {
                println!("{}", to_json(&r)?);
            } else {
                println!("n_rounds = {}", r.n_rounds);
                println!("seed = {}", r.seed);
                println!("empirical_p_succ = {}", r.empirical_p_succ);
                println!("standard_error = {}", r.standard_error);
                println!("empirical_p_xb = {}", r.empirical_p_xb);
                println!("empirical_p_ya = {}", r.empirical_p_ya);
            }
        }
        Command::FockDemo => {
            let checks = fock_demo::run_checks();
            let mut failed = 0;
            for check in &checks {
                println!("{} {}", if check.passed { "PASS" } else { "FAIL" }, check.name);
                failed += usize::from(!check.passed);
            }
            if failed > 0 {
                return Err(format!("{failed} of {} checks failed", checks.len()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
