//! Command-line front end: `evolve`, `qsl`, and `sweep` subcommands.
//!
//! Standard output carries only CSV; diagnostics go to standard error. Exit
//! codes: 0 on success, 1 for domain errors, 2 for usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dynamics::{self, DensityMatrix, DynamicsError, ModelParams};
use crate::qsl::{self, QslError};
use crate::sweep::{
    self, format_value, InitialState, SweepError, SweepRow, SweepSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "qsl-lab",
    version,
    about = "Non-unitary qubit dynamics under non-Hermitian detuning and quantum-speed-limit bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve a state and print the trajectory as CSV.
    Evolve {
        /// Detuning ratio Δ = γ/ω.
        #[arg(long)]
        delta: f64,
        /// Coupling ω (energy scale; ħ = 1).
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Final time.
        #[arg(long = "t-max")]
        t_max: f64,
        /// Number of time steps (the trajectory has steps + 1 rows).
        #[arg(long)]
        steps: usize,
        /// Initial state: excited | ground | mixed:<p>.
        #[arg(long, value_parser = parse_initial)]
        initial: InitialState,
        /// Evolution route.
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Output path (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one QSL bound on the window [tau, tau + tau_d].
    Qsl {
        #[arg(long)]
        delta: f64,
        /// Initial time of the driving window.
        #[arg(long)]
        tau: f64,
        /// Driving time.
        #[arg(long = "tau-d")]
        tau_d: f64,
        /// Initial state at t = 0: excited | mixed:<p>.
        #[arg(long, value_parser = parse_initial)]
        initial: InitialState,
        /// Quadrature nodes (odd).
        #[arg(long, default_value_t = 201)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a figure table or run a custom sweep.
    Sweep {
        /// Figure preset 1..5 (τ_D = 1 everywhere).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        figure: Option<u8>,
        /// Custom sweep kind when no preset is used.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Detuning Δ (tau-scan mode, or overriding a preset).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "tau-max")]
        tau_max: Option<f64>,
        #[arg(long = "tau-steps")]
        tau_steps: Option<usize>,
        #[arg(long = "tau-d")]
        tau_d: Option<f64>,
        #[arg(long, value_parser = parse_initial)]
        initial: Option<InitialState>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        omega: Option<f64>,
        /// Output path; presets with several Δ values write one file per Δ
        /// with a `_delta<value>` suffix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Method {
    Closed,
    Ode,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Mode {
    Fig1,
    TauScan,
}

fn parse_initial(s: &str) -> Result<InitialState, String> {
    s.parse()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Dynamics(DynamicsError),
    Qsl(QslError),
    Sweep(SweepError),
    Io(io::Error),
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::Dynamics(e)
    }
}
impl From<QslError> for CliError {
    fn from(e: QslError) -> Self {
        CliError::Qsl(e)
    }
}
impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Sweep(e)
    }
}
impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Dynamics(e)) => {
            eprintln!("{e}");
            1
        }
        Err(CliError::Qsl(e)) => {
            eprintln!("{e}");
            1
        }
        Err(CliError::Sweep(e)) => {
            eprintln!("{e}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("IoError: {e}");
            1
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve {
            delta,
            omega,
            t_max,
            steps,
            initial,
            method,
            out,
        } => evolve_cmd(delta, omega, t_max, steps, initial, method, out),
        Command::Qsl {
            delta,
            tau,
            tau_d,
            initial,
            nodes,
            out,
        } => qsl_cmd(delta, tau, tau_d, initial, nodes, out),
        Command::Sweep {
            figure,
            mode,
            delta,
            tau_max,
            tau_steps,
            tau_d,
            initial,
            nodes,
            omega,
            out,
        } => sweep_cmd(SweepArgs {
            figure,
            mode,
            delta,
            tau_max,
            tau_steps,
            tau_d,
            initial,
            nodes,
            omega,
            out,
        }),
    }
}

fn with_output<F>(out: &Option<PathBuf>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn evolve_cmd(
    delta: f64,
    omega: f64,
    t_max: f64,
    steps: usize,
    initial: InitialState,
    method: Method,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if steps < 1 {
        return Err(CliError::Usage("--steps must be >= 1".into()));
    }
    if !(t_max > 0.0) {
        return Err(CliError::Usage("--t-max must be positive".into()));
    }
    let params = ModelParams::new(omega, delta * omega)?;
    let rho0 = initial.density_matrix()?;

    let mut rows: Vec<(f64, DensityMatrix)> = Vec::with_capacity(steps + 1);
    match method {
        Method::Closed => {
            let h = t_max / steps as f64;
            for k in 0..=steps {
                let t = k as f64 * h;
                let state = if k == 0 {
                    rho0
                } else {
                    dynamics::evolve_closed_form(&rho0, &params, t)?
                };
                rows.push((t, state));
            }
        }
        Method::Ode => {
            let traj = dynamics::integrate_ode(&rho0, &params, t_max, steps)?;
            rows.extend(traj.times.iter().copied().zip(traj.states.iter().copied()));
        }
    }

    with_output(&out, |w| {
        writeln!(w, "t,rho11,rho12_re,rho12_im,rho22,population")?;
        for (t, state) in &rows {
            let m = state.matrix();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                format_value(*t),
                format_value(m.a11.re),
                format_value(m.a12.re),
                format_value(m.a12.im),
                format_value(m.a22.re),
                format_value(state.excited_population()),
            )?;
        }
        Ok(())
    })
}

fn qsl_cmd(
    delta: f64,
    tau: f64,
    tau_d: f64,
    initial: InitialState,
    nodes: usize,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if matches!(initial, InitialState::Ground) {
        return Err(CliError::Usage(
            "--initial must be excited or mixed:<p> for qsl".into(),
        ));
    }
    if nodes < 3 || nodes % 2 == 0 {
        return Err(CliError::Usage("--nodes must be odd and >= 3".into()));
    }
    if tau < 0.0 {
        return Err(CliError::Usage("--tau must be >= 0".into()));
    }
    if !(tau_d > 0.0) {
        return Err(CliError::Usage("--tau-d must be positive".into()));
    }
    let params = ModelParams::from_delta(delta)?;
    let rho0 = initial.density_matrix()?;
    let rho_tau = if tau == 0.0 {
        rho0
    } else {
        dynamics::evolve_closed_form(&rho0, &params, tau)?
    };
    let r = qsl::qsl_mixed(&rho_tau, &params, tau, tau_d, nodes)?;
    let rho_end = dynamics::evolve_closed_form(&rho_tau, &params, tau_d)?;
    let row = SweepRow {
        delta,
        tau: Some(tau),
        tau_qsl: r.tau_qsl,
        population: rho_tau.excited_population(),
        trace_distance: qsl::trace_distance(&rho_tau, &rho_end)?,
        relative_purity: qsl::relative_purity(&rho_tau, &rho_end)?,
        lambda_inf: r.lambda.operator,
        regime: params.regime(),
    };
    with_output(&out, |w| {
        sweep::emit_csv(std::slice::from_ref(&row), w)?;
        Ok(())
    })
}

struct SweepArgs {
    figure: Option<u8>,
    mode: Option<Mode>,
    delta: Option<f64>,
    tau_max: Option<f64>,
    tau_steps: Option<usize>,
    tau_d: Option<f64>,
    initial: Option<InitialState>,
    nodes: Option<usize>,
    omega: Option<f64>,
    out: Option<PathBuf>,
}

fn sweep_cmd(args: SweepArgs) -> Result<(), CliError> {
    let specs = build_specs(&args)?;
    if let Some(InitialState::Ground) = args.initial {
        return Err(CliError::Usage(
            "--initial must be excited or mixed:<p> for sweep".into(),
        ));
    }

    if specs.len() == 1 {
        let rows = sweep::run(&specs[0].0)?;
        return with_output(&args.out, |w| {
            sweep::emit_csv(&rows, w)?;
            Ok(())
        });
    }

    // One file per Δ; a destination is required to place them.
    let out = args.out.as_ref().ok_or_else(|| {
        CliError::Usage("--out is required for multi-delta figure presets".into())
    })?;
    for (spec, delta) in &specs {
        let rows = sweep::run(spec)?;
        let path = suffixed_path(out, *delta);
        let dest = Some(path);
        with_output(&dest, |w| {
            sweep::emit_csv(&rows, w)?;
            Ok(())
        })?;
    }
    Ok(())
}

fn suffixed_path(base: &Path, delta: f64) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_delta{delta}.{}", ext.to_string_lossy()),
        None => format!("{stem}_delta{delta}"),
    };
    base.with_file_name(name)
}

/// Expand a preset or custom mode into concrete specs, one per Δ value.
fn build_specs(args: &SweepArgs) -> Result<Vec<(SweepSpec, f64)>, CliError> {
    if let Some(nodes) = args.nodes {
        if nodes < 3 || nodes % 2 == 0 {
            return Err(CliError::Usage("--nodes must be odd and >= 3".into()));
        }
    }
    let omega = args.omega.unwrap_or(1.0);
    let tau_d = args.tau_d.unwrap_or(1.0);
    let nodes = args.nodes.unwrap_or_else(|| sweep::default_nodes(tau_d));

    let fig1_spec = |tau_d: f64, nodes: usize| SweepSpec::Fig1DeltaScan {
        delta_min: -15.0,
        delta_max: 15.0,
        delta_steps: 601,
        tau_d,
        nodes,
        omega,
    };
    let tau_spec = |delta: f64, tau_max: f64, tau_steps: usize, initial: InitialState| {
        SweepSpec::TauScan {
            delta,
            tau_d,
            tau_max,
            tau_steps,
            initial,
            nodes,
            omega,
        }
    };

    match (args.figure, args.mode) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--figure and --mode are mutually exclusive".into(),
        )),
        (Some(1), None) => {
            if args.delta.is_some() {
                return Err(CliError::Usage(
                    "--delta does not apply to figure 1 (it scans a Δ grid)".into(),
                ));
            }
            Ok(vec![(fig1_spec(tau_d, nodes), f64::NAN)])
        }
        (Some(n), None) => {
            // Preset caption parameters for figures 2-5.
            let (deltas, initial, tau_max): (Vec<f64>, InitialState, f64) = match n {
                2 => (vec![0.4, 0.9], InitialState::Excited, 15.0),
                3 => (vec![1.1, 2.5], InitialState::Excited, 15.0),
                4 => (vec![0.6, 0.9], InitialState::Mixed(0.6), 20.0),
                5 => (vec![1.0, -1.0], InitialState::Mixed(0.6), 20.0),
                _ => unreachable!("figure range enforced by clap"),
            };
            let deltas = match args.delta {
                Some(d) => vec![d],
                None => deltas,
            };
            let initial = args.initial.unwrap_or(initial);
            let tau_max = args.tau_max.unwrap_or(tau_max);
            let tau_steps = args.tau_steps.unwrap_or(400);
            Ok(deltas
                .into_iter()
                .map(|d| (tau_spec(d, tau_max, tau_steps, initial), d))
                .collect())
        }
        (None, Some(Mode::Fig1)) => Ok(vec![(fig1_spec(tau_d, nodes), f64::NAN)]),
        (None, Some(Mode::TauScan)) => {
            let delta = args
                .delta
                .ok_or_else(|| CliError::Usage("--delta is required for tau-scan".into()))?;
            let tau_max = args
                .tau_max
                .ok_or_else(|| CliError::Usage("--tau-max is required for tau-scan".into()))?;
            let tau_steps = args
                .tau_steps
                .ok_or_else(|| CliError::Usage("--tau-steps is required for tau-scan".into()))?;
            let initial = args
                .initial
                .ok_or_else(|| CliError::Usage("--initial is required for tau-scan".into()))?;
            Ok(vec![(tau_spec(delta, tau_max, tau_steps, initial), delta)])
        }
        (None, None) => Err(CliError::Usage(
            "either --figure <1..5> or --mode fig1|tau-scan is required".into(),
        )),
    }
}
