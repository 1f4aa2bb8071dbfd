use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use radiance::crosscheck::{run_suite, Suite};
use radiance::planner::{plan, PlanInputs};
use radiance::scenario::{run_scenario, ScenarioError, UnitsPreset};

#[derive(Parser)]
#[command(name = "radiance", version, about = "Motion-induced vacuum radiation from mirrors and open cavities")]
struct Cli {
    /// Worker threads (RADIANCE_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON scenario and write CSV + JSON sidecar.
    Run { scenario: PathBuf },
    /// Run a verification suite: analytic-limits, engine-agreement,
    /// eq6-calibration or comb-selection.
    Crosscheck { suite: String },
    /// Feasibility numbers for a resonantly driven cavity.
    Plan {
        #[arg(long)]
        finesse: f64,
        /// Mechanical angular frequency Ω.
        #[arg(long)]
        omega: f64,
        /// Peak mirror velocity.
        #[arg(long)]
        velocity: f64,
        /// Field temperature in kelvin.
        #[arg(long, default_value_t = 0.0)]
        temperature: f64,
        /// Optical angular frequency for the thermal check (defaults to Ω).
        #[arg(long)]
        optical: Option<f64>,
        /// Assert Ω sits on an odd cavity resonance.
        #[arg(long)]
        resonant: bool,
        #[arg(long, value_parser = ["si", "natural"], default_value = "si")]
        units: String,
    },
}

fn threads(flag: Option<usize>) -> Option<usize> {
    std::env::var("RADIANCE_THREADS").ok().and_then(|v| v.parse().ok()).or(flag)
}

fn fail(e: &ScenarioError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = threads(cli.threads) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match cli.command {
        Command::Run { scenario } => match run_scenario(&scenario, &cli.out) {
            Ok(out) => {
                if !cli.quiet {
                    for w in &out.warnings {
                        eprintln!("warning: {w:?}");
                    }
                    println!("wrote {} and {}", out.csv.display(), out.sidecar.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Crosscheck { suite } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(msg) => return fail(&ScenarioError::Schema(msg)),
            };
            match run_suite(suite) {
                Ok(report) => {
                    if !cli.quiet {
                        print!("{report}");
                    }
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => fail(&e.into()),
            }
        }
        Command::Plan { finesse, omega, velocity, temperature, optical, resonant, units } => {
            let units = if units == "si" { UnitsPreset::Si } else { UnitsPreset::Natural }.system();
            let inputs = PlanInputs {
                finesse,
                mech_frequency: omega,
                optical_frequency: optical,
                peak_velocity: velocity,
                temperature,
                resonance_asserted: resonant,
            };
            match plan(&inputs, &units) {
                Ok(p) => {
                    if !cli.quiet {
                        for w in &p.warnings {
                            eprintln!("warning: {w:?}");
                        }
                    }
                    println!("{}", serde_json::to_string_pretty(&p).expect("plan serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e.into()),
            }
        }
    }
}
