use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kuranishi_cli::{run_scenario, CliError, Command, GeometryKind, Scenario};

/// Exact Kuranishi-data engine: identity fuzzing, Maurer-Cartan solving and certificates.
#[derive(Parser, Debug)]
#[command(name = "kuranishi", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Fuzz the operator identity suite.
    Identities(Common),
    /// Solve the Maurer-Cartan equation order by order on the torus.
    McSolve(Common),
    /// Obstruction class of Kuranishi data integrable modulo the ideal.
    Obstruction(Common),
    /// Gauge family of `xi` under `alpha`, or local-gauge data of `beta` on a chart.
    Gauge(Common),
    /// Pairing certificate for a flat extension of a harmonic class.
    Pairing41(Common),
    /// Semiregularity certificate for a coordinate subtorus.
    Pairing43(Common),
    /// Cochains of the pair obstruction for a coordinate subtorus.
    PairCocycle(Common),
    /// Gauss-Manin derivative of a form.
    Gm(Common),
    /// Flat extension of a harmonic class.
    Extend(Common),
    /// Run the command named inside the scenario file.
    Run(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario JSON file; flags below override its fields.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<u64>,
    /// Truncation order N.
    #[arg(long)]
    order: Option<u32>,
    /// Monomial ideal, e.g. "t^3" or "t1*t2, t2^2".
    #[arg(long)]
    ideal: Option<String>,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, value_parser = ["chart", "torus"])]
    geometry: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Input binding ROLE=EXPR, repeatable.
    #[arg(long = "input", value_name = "ROLE=EXPR")]
    inputs: Vec<String>,
    /// Comma-separated 1-based tangential indices of the subtorus.
    #[arg(long, value_delimiter = ',')]
    subtorus: Option<Vec<usize>>,
}

fn build(common: &Common) -> Result<Scenario, CliError> {
    let mut s = match &common.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Scenario(format!("cannot read {}: {e}", path.display())))?;
            Scenario::from_json(&text)?
        }
        None => Scenario::default(),
    };
    if let Some(seed) = common.seed {
        s.seed = seed;
    }
    if common.count.is_some() {
        s.count = common.count;
    }
    if let Some(order) = common.order {
        s.order = order;
    }
    if common.ideal.is_some() {
        s.ideal = common.ideal.clone();
    }
    match common.geometry.as_deref() {
        Some("chart") => s.geometry = GeometryKind::Chart,
        Some(_) => s.geometry = GeometryKind::Torus,
        None => {}
    }
    if let Some(n) = common.n {
        s.n = n;
    }
    if let Some(m) = common.m {
        s.m = m;
    }
    for binding in &common.inputs {
        let (role, expr) =
            binding.split_once('=').ok_or_else(|| CliError::Scenario(format!("input `{binding}` is not ROLE=EXPR")))?;
        s.inputs.insert(role.trim().to_string(), expr.to_string());
    }
    if common.subtorus.is_some() {
        s.subtorus = common.subtorus.clone();
    }
    Ok(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.verb {
        Verb::Identities(c) => (Some(Command::Identities), c),
        Verb::McSolve(c) => (Some(Command::McSolve), c),
        Verb::Obstruction(c) => (Some(Command::Obstruction), c),
        Verb::Gauge(c) => (Some(Command::Gauge), c),
        Verb::Pairing41(c) => (Some(Command::Pairing41), c),
        Verb::Pairing43(c) => (Some(Command::Pairing43), c),
        Verb::PairCocycle(c) => (Some(Command::PairCocycle), c),
        Verb::Gm(c) => (Some(Command::Gm), c),
        Verb::Extend(c) => (Some(Command::Extend), c),
        Verb::Run(c) => (None, c),
    };
    let outcome = build(common).and_then(|s| run_scenario(&s, command));
    match outcome {
        Ok(out) => {
            let text = out.render();
            print!("{text}");
            if let Some(path) = &common.json {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
