//! Parameter-sweep drivers emitting deterministic CSV tables.
//!
//! Two sweep kinds exist: a detuning scan of the pure-state bound over a Δ
//! grid at fixed driving time, and a τ-scan of the mixed-state bound along a
//! single continuous evolution. Rows are computed independently (in parallel)
//! and sorted by their grid key before emission, so output bytes never depend
//! on scheduling.

use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{
    self, DensityMatrix, DynamicsError, ModelParams, PtRegime,
};
use crate::qsl::{self, QslError, QslResult};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Qsl(#[from] QslError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

/// Initial state selector shared by the sweeps and the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Excited,
    Ground,
    /// `(1 - p/2)|1⟩⟨1| + (p/2)|0⟩⟨0|` with 0 < p < 1.
    Mixed(f64),
}

impl InitialState {
    pub fn density_matrix(&self) -> Result<DensityMatrix, DynamicsError> {
        match self {
            InitialState::Excited => Ok(DensityMatrix::excited()),
            InitialState::Ground => Ok(DensityMatrix::ground()),
            InitialState::Mixed(p) => DensityMatrix::mixed(*p),
        }
    }
}

impl std::str::FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "excited" => Ok(InitialState::Excited),
            "ground" => Ok(InitialState::Ground),
            _ => {
                let p = s
                    .strip_prefix("mixed:")
                    .ok_or_else(|| format!("expected excited, ground, or mixed:<p>, got '{s}'"))?
                    .parse::<f64>()
                    .map_err(|e| format!("bad mixed weight: {e}"))?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(format!("mixed weight p must lie in (0, 1), got {p}"));
                }
                Ok(InitialState::Mixed(p))
            }
        }
    }
}

/// What to sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    /// Pure-state bound over a Δ grid at fixed driving time.
    Fig1DeltaScan {
        delta_min: f64,
        delta_max: f64,
        delta_steps: usize,
        tau_d: f64,
        nodes: usize,
        omega: f64,
    },
    /// Mixed-state bound over an initial-time grid for one Δ.
    TauScan {
        delta: f64,
        tau_d: f64,
        tau_max: f64,
        tau_steps: usize,
        initial: InitialState,
        nodes: usize,
        omega: f64,
    },
}

/// One output row; `tau` is `None` for detuning-scan rows (empty CSV field).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub tau: Option<f64>,
    pub tau_qsl: f64,
    pub population: f64,
    pub trace_distance: f64,
    pub relative_purity: f64,
    pub lambda_inf: f64,
    pub regime: PtRegime,
}

/// Default quadrature grid: 201 nodes per unit of driving time, odd, >= 3.
pub fn default_nodes(tau_d: f64) -> usize {
    let n = (201.0 * tau_d).ceil() as usize;
    let n = n.max(3);
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

/// Evaluate a node-count-parameterized QSL bound, doubling the grid until two
/// successive refinements agree to 1e-8 (cap 3201 nodes).
fn converged<F>(mut nodes: usize, eval: F) -> Result<QslResult, QslError>
where
    F: Fn(usize) -> Result<QslResult, QslError>,
{
    let mut prev = eval(nodes)?;
    loop {
        let next_nodes = 2 * nodes - 1;
        let next = eval(next_nodes)?;
        let gap = (next.tau_qsl - prev.tau_qsl).abs();
        if gap < 1e-8 {
            return Ok(next);
        }
        if next_nodes >= 3201 {
            return Err(QslError::QuadratureNonconvergent(gap, next_nodes));
        }
        nodes = next_nodes;
        prev = next;
    }
}

fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let h = (max - min) / (steps - 1) as f64;
    (0..steps).map(|k| min + k as f64 * h).collect()
}

/// Detuning scan of the pure-state bound from `|1⟩⟨1|` over `[0, τ_D]`.
pub fn run_fig1(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    let SweepSpec::Fig1DeltaScan {
        delta_min,
        delta_max,
        delta_steps,
        tau_d,
        nodes,
        omega,
    } = spec
    else {
        return Err(SweepError::InvalidSpec(
            "run_fig1 requires a Fig1DeltaScan spec".into(),
        ));
    };
    validate_common(*tau_d, *nodes, *delta_steps)?;

    let psi0 = DensityMatrix::excited();
    let mut rows = grid(*delta_min, *delta_max, *delta_steps)
        .par_iter()
        .map(|&delta| -> Result<SweepRow, SweepError> {
            let params = ModelParams::new(*omega, delta * omega)?;
            let r = converged(*nodes, |n| qsl::qsl_pure(&psi0, &params, *tau_d, n))?;
            let rho_end = dynamics::evolve_closed_form(&psi0, &params, *tau_d)?;
            Ok(SweepRow {
                delta,
                tau: None,
                tau_qsl: r.tau_qsl,
                population: rho_end.excited_population(),
                trace_distance: qsl::trace_distance(&psi0, &rho_end)?,
                relative_purity: qsl::relative_purity(&psi0, &rho_end)?,
                lambda_inf: r.lambda.operator,
                regime: params.regime(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    Ok(rows)
}

/// τ-scan of the mixed-state bound on windows `[τ, τ + τ_D]` along a single
/// continuous evolution from t = 0.
pub fn run_tau_scan(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    let SweepSpec::TauScan {
        delta,
        tau_d,
        tau_max,
        tau_steps,
        initial,
        nodes,
        omega,
    } = spec
    else {
        return Err(SweepError::InvalidSpec(
            "run_tau_scan requires a TauScan spec".into(),
        ));
    };
    validate_common(*tau_d, *nodes, *tau_steps)?;
    if !(*tau_max > 0.0) {
        return Err(SweepError::InvalidSpec("tau_max must be positive".into()));
    }
    if matches!(initial, InitialState::Ground) {
        return Err(SweepError::InvalidSpec(
            "tau scans take excited or mixed:<p> initial states".into(),
        ));
    }

    let params = ModelParams::new(*omega, delta * omega)?;
    let rho0 = initial.density_matrix()?;
    let mut rows = grid(0.0, *tau_max, *tau_steps)
        .par_iter()
        .map(|&tau| -> Result<SweepRow, SweepError> {
            let rho_tau = if tau == 0.0 {
                rho0
            } else {
                dynamics::evolve_closed_form(&rho0, &params, tau)?
            };
            let r = converged(*nodes, |n| qsl::qsl_mixed(&rho_tau, &params, tau, *tau_d, n))?;
            let rho_end = dynamics::evolve_closed_form(&rho_tau, &params, *tau_d)?;
            Ok(SweepRow {
                delta: *delta,
                tau: Some(tau),
                tau_qsl: r.tau_qsl,
                population: rho_tau.excited_population(),
                trace_distance: qsl::trace_distance(&rho_tau, &rho_end)?,
                relative_purity: qsl::relative_purity(&rho_tau, &rho_end)?,
                lambda_inf: r.lambda.operator,
                regime: params.regime(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.tau.unwrap().total_cmp(&b.tau.unwrap()));
    Ok(rows)
}

/// Dispatch on the spec kind.
pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    match spec {
        SweepSpec::Fig1DeltaScan { .. } => run_fig1(spec),
        SweepSpec::TauScan { .. } => run_tau_scan(spec),
    }
}

fn validate_common(tau_d: f64, nodes: usize, steps: usize) -> Result<(), SweepError> {
    if !(tau_d > 0.0) {
        return Err(SweepError::InvalidSpec("tau_d must be positive".into()));
    }
    if nodes < 3 || nodes % 2 == 0 {
        return Err(SweepError::InvalidSpec(format!(
            "nodes must be odd and >= 3, got {nodes}"
        )));
    }
    if steps < 2 {
        return Err(SweepError::InvalidSpec("steps must be >= 2".into()));
    }
    Ok(())
}

pub const CSV_HEADER: &str =
    "delta,tau,tau_qsl,population,trace_distance,relative_purity,lambda_inf,regime";

/// Fixed decimal formatting with 12 significant digits; byte-identical output
/// for identical inputs.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.11}", 0.0);
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Write rows as CSV with the fixed header and '\n' line endings.
pub fn emit_csv<W: Write>(rows: &[SweepRow], mut dest: W) -> Result<(), SweepError> {
    if rows.is_empty() {
        return Err(SweepError::InvalidSpec("no rows to emit".into()));
    }
    writeln!(dest, "{CSV_HEADER}")?;
    for row in rows {
        let tau = row.tau.map(format_value).unwrap_or_default();
        writeln!(
            dest,
            "{},{},{},{},{},{},{},{}",
            format_value(row.delta),
            tau,
            format_value(row.tau_qsl),
            format_value(row.population),
            format_value(row.trace_distance),
            format_value(row.relative_purity),
            format_value(row.lambda_inf),
            row.regime,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fig1() -> SweepSpec {
        SweepSpec::Fig1DeltaScan {
            delta_min: -2.0,
            delta_max: 2.0,
            delta_steps: 9,
            tau_d: 1.0,
            nodes: 201,
            omega: 1.0,
        }
    }

    #[test]
    fn fig1_rows_ordered_and_bounded() {
        let rows = run_fig1(&small_fig1()).unwrap();
        assert_eq!(rows.len(), 9);
        for w in rows.windows(2) {
            assert!(w[0].delta < w[1].delta);
        }
        for r in &rows {
            assert!(r.tau_qsl <= 1.0 + 1e-9);
            assert!(r.tau.is_none());
        }
        // Δ = 0 row: Rabi population cos²(1).
        let mid = &rows[4];
        assert!(mid.delta.abs() < 1e-12);
        assert!((mid.population - 1f64.cos().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn tau_scan_basics() {
        let spec = SweepSpec::TauScan {
            delta: 0.9,
            tau_d: 1.0,
            tau_max: 4.0,
            tau_steps: 21,
            initial: InitialState::Mixed(0.6),
            nodes: 201,
            omega: 1.0,
        };
        let rows = run_tau_scan(&spec).unwrap();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[0].tau, Some(0.0));
        assert!((rows[0].population - 0.7).abs() < 1e-12);
        for r in &rows {
            assert!(r.tau_qsl <= 1.0 + 1e-9);
            assert_eq!(r.regime, PtRegime::PtSymmetric);
        }
    }

    #[test]
    fn tau_scan_rejects_ground_initial() {
        let spec = SweepSpec::TauScan {
            delta: 0.9,
            tau_d: 1.0,
            tau_max: 4.0,
            tau_steps: 5,
            initial: InitialState::Ground,
            nodes: 201,
            omega: 1.0,
        };
        assert!(matches!(
            run_tau_scan(&spec),
            Err(SweepError::InvalidSpec(_))
        ));
    }

    #[test]
    fn csv_format_contract() {
        let rows = run_fig1(&SweepSpec::Fig1DeltaScan {
            delta_min: 0.0,
            delta_max: 1.0,
            delta_steps: 2,
            tau_d: 1.0,
            nodes: 21,
            omega: 1.0,
        })
        .unwrap();
        let mut buf = Vec::new();
        emit_csv(&rows[..1], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3); // header + 1 row + trailing newline
        assert!(lines[1].contains(",,")); // empty tau field
        assert!(lines[1].ends_with("pt_symmetric") || lines[1].ends_with("exceptional_point"));
    }

    #[test]
    fn csv_is_deterministic() {
        let spec = small_fig1();
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_csv(&run_fig1(&spec).unwrap(), &mut a).unwrap();
        emit_csv(&run_fig1(&spec).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn format_value_significant_digits() {
        assert_eq!(format_value(1.0), "1.00000000000");
        assert_eq!(format_value(0.5), "0.500000000000");
        assert_eq!(format_value(-12.25), "-12.2500000000");
        assert_eq!(format_value(0.0), "0.00000000000");
    }

    #[test]
    fn initial_state_parsing() {
        assert_eq!("excited".parse::<InitialState>().unwrap(), InitialState::Excited);
        assert_eq!("ground".parse::<InitialState>().unwrap(), InitialState::Ground);
        assert_eq!(
            "mixed:0.6".parse::<InitialState>().unwrap(),
            InitialState::Mixed(0.6)
        );
        assert!("mixed:1.5".parse::<InitialState>().is_err());
        assert!("mixed:0".parse::<InitialState>().is_err());
        assert!("thermal".parse::<InitialState>().is_err());
    }

    #[test]
    fn default_nodes_are_odd() {
        assert_eq!(default_nodes(1.0), 201);
        assert_eq!(default_nodes(0.001), 3);
        assert!(default_nodes(2.0) % 2 == 1);
        assert!(default_nodes(std::f64::consts::FRAC_PI_2) % 2 == 1);
    }
}
