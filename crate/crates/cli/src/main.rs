use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use kerr_mzi::estimate::{estimate, EstimateSpec, DEFAULT_WAVELENGTH};
use kerr_mzi::format::parse_angle;
use kerr_mzi::output::write_atomic;
use kerr_mzi::simulate::{simulate, SimulateSpec};
use kerr_mzi::sweep::{Preset, Quantity, SweepSpec};
use kerr_mzi_core::{Arm, CircuitParams};

/// Dual Mach-Zehnder interferometers coupled by a cross-Kerr medium.
///
/// All angles are in radians and accept forms like `pi`, `pi/2` or `3pi/4`.
#[derive(Parser)]
#[command(name = "kerr-mzi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a quantity over the detuning and write one column per chi.
    Sweep(SweepArgs),
    /// Run a Monte-Carlo experiment and compare with the analytic model.
    Simulate(SimulateArgs),
    /// Sensitivity report for a pair source at the out-of-phase point.
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Figure preset; explicit flags override its settings.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, value_enum)]
    quantity: Option<Quantity>,
    /// Comma-separated chi values.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, allow_hyphen_values = true)]
    chi: Option<Vec<f64>>,
    /// Phase of interferometer A (inferred_phase only).
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Set phi to the geometric phase chi/2 of each column.
    #[arg(long, conflicts_with = "phi")]
    phi_geometric: bool,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    start: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    stop: Option<f64>,
    /// Number of axis points, endpoints included.
    #[arg(long)]
    steps: Option<usize>,
    /// Postselection count for snr and fisher.
    #[arg(long)]
    postselections: Option<u64>,
    /// Use raw theta-b rather than the detuning as the axis.
    #[arg(long)]
    raw_theta: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Port {
    X,
    Y,
}

impl From<Port> for Arm {
    fn from(p: Port) -> Self {
        match p {
            Port::X => Arm::X,
            Port::Y => Arm::Y,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    theta_b: f64,
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    chi: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Port of B to postselect on.
    #[arg(long, value_enum, default_value = "y")]
    port: Port,
    /// Worker threads; all cores when omitted. Counts do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// CSV output file; the CSV goes to standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Pair rate in 1/s.
    #[arg(long, allow_hyphen_values = true)]
    rate: f64,
    /// Integration time in s.
    #[arg(long, allow_hyphen_values = true)]
    duration: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    chi: f64,
    /// Wavelength in m.
    #[arg(long, default_value_t = DEFAULT_WAVELENGTH, allow_hyphen_values = true)]
    wavelength: f64,
    /// Also write the report as CSV.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn emit(output: Option<&PathBuf>, contents: &str) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, contents.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut spec = match (args.preset, args.quantity, args.chi.clone()) {
        (Some(preset), _, _) => SweepSpec::preset(preset),
        (None, Some(q), Some(chi)) => SweepSpec::new(q, chi),
        (None, None, _) => anyhow::bail!("sweep needs --preset or --quantity"),
        (None, Some(_), None) => anyhow::bail!("sweep needs --chi"),
    };
    if let Some(q) = args.quantity {
        spec.quantity = q;
    }
    if let Some(chi) = args.chi {
        spec.chi_list = chi;
    }
    if let Some(phi) = args.phi {
        spec.phi = phi;
    }
    spec.phi_geometric |= args.phi_geometric;
    spec.start = args.start.unwrap_or(spec.start);
    spec.stop = args.stop.unwrap_or(spec.stop);
    spec.steps = args.steps.unwrap_or(spec.steps);
    spec.n = args.postselections.unwrap_or(spec.n);
    spec.raw_theta |= args.raw_theta;
    emit(args.output.as_ref(), &spec.to_csv()?)
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let params = CircuitParams::new(args.phi, args.theta_b, args.chi);
    if !params.chi_in_range() {
        eprintln!("warning: chi = {} lies outside [0, pi]", args.chi);
    }
    let report = simulate(&SimulateSpec {
        params,
        n_trials: args.trials,
        seed: args.seed,
        port: args.port.into(),
        threads: args.threads,
    })?;
    match &args.output {
        Some(path) => {
            write_atomic(path, report.to_csv().as_bytes())?;
            println!("{}", report.summary());
        }
        None => {
            emit(None, &report.to_csv())?;
            eprintln!("{}", report.summary());
        }
    }
    Ok(())
}

fn run_estimate(args: EstimateArgs) -> Result<()> {
    let report = estimate(&EstimateSpec {
        rate: args.rate,
        duration: args.duration,
        chi: args.chi,
        wavelength: args.wavelength,
    })?;
    if let Some(path) = &args.output {
        write_atomic(path, report.to_csv().as_bytes())?;
    }
    emit(None, &report.to_text())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let rendered = e.render().to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Estimate(a) => run_estimate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
