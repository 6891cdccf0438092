use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, warn};

use fracfk::bench::{parse_config, preset, preset_names, run_study, verify_suite};
use fracfk::numerics::Precision;
use fracfk::scheme::Variant;
use fracfk::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "fracfk", version, about = "Convergence studies for the backward fractional Feynman-Kac equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a study described by a JSON configuration
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// std64 or extended
        #[arg(long, value_parser = parse_precision)]
        precision: Option<Precision>,
        /// corrected, uncorrected, comparison_initial or comparison_source
        #[arg(long, value_parser = parse_variant)]
        scheme: Option<Variant>,
    },
    /// Built-in example configurations
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Run the oracle checks
    Verify,
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset as JSON
    Show { name: String },
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    match s {
        "std64" => Ok(Precision::Standard64),
        "extended" => Ok(Precision::Extended),
        _ => Err(format!("unknown precision '{s}' (expected std64 or extended)")),
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::parse(s).ok_or_else(|| format!("unknown scheme '{s}'"))
}

fn config_failure(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_config_error() { EXIT_CONFIG } else { EXIT_NUMERIC })
}

fn run(config: PathBuf, out_dir: PathBuf, precision: Option<Precision>, scheme: Option<Variant>) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => return config_failure(&Error::Io(format!("{}: {e}", config.display()))),
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return config_failure(&e),
    };
    if precision.is_some() {
        cfg.precision = precision;
    }
    if let Some(s) = scheme {
        cfg.scheme = s;
        if let Err(e) = cfg.check_scheme() {
            return config_failure(&e);
        }
    }
    info!("running {} ({} cells)", cfg.name, cfg.alphas.len() * cfg.ks.len());
    let report = run_study(&cfg);
    for w in &report.warnings {
        warn!("{w}");
    }
    let (csv, md) = match report.write(&cfg, &out_dir) {
        Ok(p) => p,
        Err(e) => return config_failure(&e),
    };
    print!("{}", report.markdown(&cfg));
    println!("wrote {} and {}", csv.display(), md.display());
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("cell failed: alpha={} k={} grid=1/{}: {}", f.alpha, f.k, f.grid, f.message);
        }
        ExitCode::from(EXIT_NUMERIC)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out_dir, precision, scheme } => run(config, out_dir, precision, scheme),
        Command::Presets { action: PresetAction::List } => {
            for (name, about) in preset_names() {
                println!("{name:<14} {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Presets { action: PresetAction::Show { name } } => match preset(&name) {
            Some(p) => {
                println!("{}", serde_json::to_string_pretty(&p).expect("serializable"));
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: unknown preset '{name}'");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Command::Verify => {
            let mut ok = true;
            for c in verify_suite() {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NUMERIC)
            }
        }
    }
}
