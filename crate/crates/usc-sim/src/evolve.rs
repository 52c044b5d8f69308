//! State propagation under static and time-dependent Hamiltonians, plus
//! rotating-frame transformations and convergence utilities.
//!
//! The integrator is a midpoint-exponential scheme: each step applies
//! U = exp(−i H(t + dt/2) dt) computed from the Hermitian eigendecomposition
//! of the midpoint Hamiltonian, so every step is exactly unitary. For a
//! static Hamiltonian the decomposition is computed once and the evolution
//! to each requested time is exact.

use crate::error::{Error, Result};
use crate::hamiltonians::TimeDependentHamiltonian;
use crate::linalg::{self, HermitianEig};
use crate::operators::{Operator, QuantumState, Sign};

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum DtSpec {
    /// Resolve the fastest time-dependent coefficient with
    /// `steps_per_fastest_period` steps per period.
    Auto,
    /// Fixed step in seconds.
    Explicit(f64),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Method {
    MidpointExponential,
    /// Midpoint-exponential with the step refined 8×, for use as an
    /// independent reference in accuracy measurements.
    ReferenceFineStep,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PropagationSettings {
    pub dt: DtSpec,
    pub method: Method,
    pub tolerance: f64,
    pub steps_per_fastest_period: u32,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        PropagationSettings {
            dt: DtSpec::Auto,
            method: Method::MidpointExponential,
            tolerance: 1e-8,
            steps_per_fastest_period: 40,
        }
    }
}

impl PropagationSettings {
    pub fn with_dt(dt: f64) -> Self {
        PropagationSettings { dt: DtSpec::Explicit(dt), ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if let DtSpec::Explicit(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::InvalidParameters(format!("dt must be positive, got {dt}")));
            }
        }
        if self.steps_per_fastest_period < 10 {
            return Err(Error::InvalidParameters(format!(
                "steps_per_fastest_period must be at least 10, got {}",
                self.steps_per_fastest_period
            )));
        }
        Ok(())
    }

    /// Target step for a given Hamiltonian (before the reference-method
    /// refinement). `None` for static Hamiltonians with `Auto`.
    pub fn resolve_dt(&self, h: &TimeDependentHamiltonian) -> Option<f64> {
        let base = match self.dt {
            DtSpec::Explicit(dt) => Some(dt),
            DtSpec::Auto => h.auto_dt(self.steps_per_fastest_period),
        };
        base.map(|dt| match self.method {
            Method::MidpointExponential => dt,
            Method::ReferenceFineStep => dt / 8.0,
        })
    }
}

/// States sampled on an ascending time grid.
#[derive(Clone, Debug)]
pub struct TrajectoryResult {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    pub settings_used: PropagationSettings,
    /// Maximum |‖ψ‖ − 1| observed before per-step renormalization.
    pub norm_drift: f64,
}

impl TrajectoryResult {
    pub fn final_state(&self) -> &QuantumState {
        self.states.last().expect("trajectory is never empty")
    }
}

const NORM_DRIFT_HARD_LIMIT: f64 = 1e-6;

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameters("time grid is empty".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidParameters(format!(
            "time grid must start at 0, got {:.6e}",
            t_grid[0]
        )));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameters("time grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Propagates `psi0` under `h`, returning the state at every grid time.
/// The grid must start at 0 and ascend strictly.
pub fn propagate(
    h: &TimeDependentHamiltonian,
    psi0: &QuantumState,
    t_grid: &[f64],
    settings: &PropagationSettings,
) -> Result<TrajectoryResult> {
    settings.validate()?;
    check_grid(t_grid)?;
    if psi0.dim() != h.dim() || psi0.space != h.space() {
        return Err(Error::InvalidSpace(format!(
            "state dim {} does not match Hamiltonian dim {}",
            psi0.dim(),
            h.dim()
        )));
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > QuantumState::NORM_TOLERANCE {
        return Err(Error::InvalidParameters(format!(
            "initial state norm {norm} deviates from 1 beyond 1e-9"
        )));
    }

    if h.is_static() {
        return propagate_static(h, psi0, t_grid, settings);
    }

    let dt_target = settings
        .resolve_dt(h)
        .expect("non-static Hamiltonian always resolves a dt");

    let mut states = Vec::with_capacity(t_grid.len());
    states.push(psi0.clone());
    let mut psi = psi0.amplitudes.clone();
    let mut max_drift: f64 = 0.0;

    for window in t_grid.windows(2) {
        let (t_a, t_b) = (window[0], window[1]);
        let span = t_b - t_a;
        // Tolerant ceiling so a span that is a whole number of steps up to
        // float rounding is not split into one extra shortened step; keeps
        // step boundaries reproducible across segment splits.
        let ratio = span / dt_target;
        let n_sub = (ratio - 1e-9).ceil().max(1.0) as u64;
        let dt = span / n_sub as f64;
        for k in 0..n_sub {
            let t_mid = t_a + (k as f64 + 0.5) * dt;
            let hm = h.matrix_at(t_mid);
            if hm.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::EvaluatorError { t: t_mid });
            }
            let dec = linalg::eigh(&hm)?;
            psi = dec.evolve(&psi, dt);
            let norm = linalg::vector_norm(&psi);
            let drift = (norm - 1.0).abs();
            max_drift = max_drift.max(drift);
            if drift > NORM_DRIFT_HARD_LIMIT {
                return Err(Error::IntegrationFailure { drift });
            }
            psi.mapv_inplace(|z| z / norm);
        }
        states.push(QuantumState { amplitudes: psi.clone(), space: psi0.space });
    }

    Ok(TrajectoryResult {
        times: t_grid.to_vec(),
        states,
        settings_used: *settings,
        norm_drift: max_drift,
    })
}

fn propagate_static(
    h: &TimeDependentHamiltonian,
    psi0: &QuantumState,
    t_grid: &[f64],
    settings: &PropagationSettings,
) -> Result<TrajectoryResult> {
    let dec: HermitianEig = linalg::eigh(&h.matrix_at(0.0))?;
    let mut states = Vec::with_capacity(t_grid.len());
    let mut max_drift: f64 = 0.0;
    for &t in t_grid {
        let mut psi = dec.evolve(&psi0.amplitudes, t);
        let norm = linalg::vector_norm(&psi);
        let drift = (norm - 1.0).abs();
        max_drift = max_drift.max(drift);
        if drift > NORM_DRIFT_HARD_LIMIT {
            return Err(Error::IntegrationFailure { drift });
        }
        psi.mapv_inplace(|z| z / norm);
        states.push(QuantumState { amplitudes: psi, space: psi0.space });
    }
    Ok(TrajectoryResult {
        times: t_grid.to_vec(),
        states,
        settings_used: *settings,
        norm_drift: max_drift,
    })
}

/// exp(±i · generator · t) |ψ⟩ via eigendecomposition of the generator.
pub fn frame_transform(
    psi: &QuantumState,
    generator: &Operator,
    t: f64,
    sign: Sign,
) -> Result<QuantumState> {
    let asymmetry = generator.hermiticity_error();
    if asymmetry > 1e-12 {
        return Err(Error::NonHermitianGenerator { asymmetry });
    }
    if generator.dim() != psi.dim() || generator.space != psi.space {
        return Err(Error::InvalidSpace(format!(
            "generator dim {} does not match state dim {}",
            generator.dim(),
            psi.dim()
        )));
    }
    let dec = linalg::eigh(&generator.matrix)?;
    // evolve applies exp(−iEs); flip the time argument for the + sign.
    let amplitudes = dec.evolve(&psi.amplitudes, -sign.as_f64() * t);
    let mut out = QuantumState { amplitudes, space: psi.space };
    out.renormalize();
    Ok(out)
}

/// Doubles the Fock dimension until the diagnostic produced by `run` changes
/// by less than `tol`; returns the first converged dimension with its value.
pub fn converge_fock_dim(
    mut run: impl FnMut(usize) -> Result<f64>,
    start_dim: usize,
    tol: f64,
) -> Result<(usize, f64)> {
    const MAX_DIM: usize = 512;
    if start_dim < 4 {
        return Err(Error::InvalidParameters(format!(
            "start_dim must be at least 4, got {start_dim}"
        )));
    }
    let mut dim = start_dim;
    let mut value = run(dim)?;
    loop {
        let next_dim = dim * 2;
        if next_dim > MAX_DIM {
            return Err(Error::ConvergenceFailure(format!(
                "diagnostic failed to converge to {tol:.3e} by fock_dim {MAX_DIM}"
            )));
        }
        let next_value = run(next_dim)?;
        if (next_value - value).abs() < tol {
            return Ok((dim, value));
        }
        dim = next_dim;
        value = next_value;
    }
}

/// Halves the explicit step in `settings` until the diagnostic changes by
/// less than `tol`; returns the first converged dt with its value.
pub fn converge_dt(
    mut run: impl FnMut(f64) -> Result<f64>,
    settings: &PropagationSettings,
    tol: f64,
) -> Result<(f64, f64)> {
    const DT_FLOOR: f64 = 1e-16;
    let DtSpec::Explicit(start_dt) = settings.dt else {
        return Err(Error::InvalidParameters(
            "converge_dt needs an explicit starting dt; resolve Auto via auto_dt first".into(),
        ));
    };
    let mut dt = start_dt;
    let mut value = run(dt)?;
    if !tol.is_finite() {
        return Ok((dt, value));
    }
    loop {
        let next_dt = dt / 2.0;
        if next_dt < DT_FLOOR {
            return Err(Error::ConvergenceFailure(format!(
                "diagnostic failed to converge to {tol:.3e} before dt underflow"
            )));
        }
        let next_value = run(next_dt)?;
        if (next_value - value).abs() < tol {
            return Ok((dt, value));
        }
        dt = next_dt;
        value = next_value;
    }
}
