use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use groupquant::report::VerificationReport;
use groupquant::scenarios::{self, ScenarioConfig, ScenarioError, BUILTIN_SCENARIOS};

/// Verify group-theoretic quantization properties on finite models.
#[derive(Debug, Parser)]
#[command(name = "groupquant", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario from its name and/or a JSON configuration file.
    Verify {
        /// Scenario name, or `all` for every built-in scenario.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the tolerance of every check.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Spin component along (ax, ay, az).
    Spin {
        #[arg(long)]
        j: f64,
        #[arg(long, allow_negative_numbers = true)]
        ax: f64,
        #[arg(long, allow_negative_numbers = true)]
        ay: f64,
        #[arg(long, allow_negative_numbers = true)]
        az: f64,
        /// Sample the component more finely and reduce to the spectrum.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Position and momentum on the cyclic lattice Z_n.
    Phase {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in scenarios.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, ScenarioError> {
    let (reports, out) = match command {
        Command::List => {
            for name in BUILTIN_SCENARIOS {
                println!("{name}");
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Verify {
            scenario,
            config,
            out,
            tolerance,
        } => {
            if let Some(t) = tolerance {
                if !t.is_finite() || t < 0.0 {
                    return Err(ScenarioError::BadParam(format!("tolerance {t}")));
                }
            }
            let reports = match (scenario, config) {
                (Some(name), None) if name == "all" => scenarios::run_all(tolerance)?,
                (Some(name), None) => {
                    vec![scenarios::run_scenario(
                        &ScenarioConfig::new(&name),
                        tolerance,
                    )?]
                }
                (name, Some(path)) => {
                    let text = fs::read_to_string(&path).map_err(|e| {
                        ScenarioError::ConfigParse(format!("{}: {e}", path.display()))
                    })?;
                    let config = ScenarioConfig::from_json(&text)?;
                    if let Some(name) = name {
                        if name != config.scenario {
                            return Err(ScenarioError::BadParam(format!(
                                "--scenario {name} conflicts with `{}` in the configuration",
                                config.scenario
                            )));
                        }
                    }
                    vec![scenarios::run_scenario(&config, tolerance)?]
                }
                (None, None) => {
                    return Err(ScenarioError::BadParam(
                        "give --scenario or --config".into(),
                    ))
                }
            };
            (reports, out)
        }
        Command::Spin {
            j,
            ax,
            ay,
            az,
            reduce,
            seed,
            out,
        } => {
            let mut config = ScenarioConfig::new("spin")
                .with_param("j", json!(j))
                .with_param("direction", json!([ax, ay, az]))
                .with_param("reduce", json!(reduce));
            config.seed = seed;
            (vec![scenarios::run_scenario(&config, None)?], out)
        }
        Command::Phase { n, out } => {
            let config = ScenarioConfig::new("phase").with_param("n", json!(n));
            (vec![scenarios::run_scenario(&config, None)?], out)
        }
    };

    for report in &reports {
        summarize(report);
    }
    let text = match reports.as_slice() {
        [one] => one.to_json(),
        many => serde_json::to_string_pretty(many).expect("reports always serialize"),
    };
    match out {
        Some(path) => fs::write(&path, text + "\n")
            .map_err(|e| ScenarioError::Internal(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(if reports.iter().all(VerificationReport::all_passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn summarize(report: &VerificationReport) {
    for check in &report.checks {
        eprintln!(
            "{} {}/{}: max_error {:e}, tolerance {:e}",
            if check.passed { "PASS" } else { "FAIL" },
            report.scenario,
            check.name,
            check.max_error,
            check.tolerance
        );
    }
}
