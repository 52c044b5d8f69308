//! Measured quantities: qubit populations, reduced and postselected field
//! states, Wigner functions via the displaced-parity trace, cat-state
//! references and fidelities, and quadrature/photon-number time series.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::evolve::TrajectoryResult;
use crate::hamiltonians::DerivedParams;
use crate::linalg;
use crate::operators::{
    displacement, number_operator, quadrature_p, quadrature_x, HilbertConfig,
    QuantumState, Space,
};

/// Positive-semidefinite, unit-trace density matrix on a declared space.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub matrix: Array2<C64>,
    pub space: Space,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().iter().sum()
    }

    pub fn from_pure(state: &QuantumState) -> Self {
        let n = state.dim();
        let mut matrix = Array2::<C64>::zeros((n, n));
        for r in 0..n {
            for c in 0..n {
                matrix[[r, c]] = state.amplitudes[r] * state.amplitudes[c].conj();
            }
        }
        DensityMatrix { matrix, space: state.space }
    }

    /// Checks trace, Hermiticity, and eigenvalue positivity.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvalidParameters(format!("density matrix trace {tr} is not 1")));
        }
        if linalg::hermiticity_error(&self.matrix) > 1e-12 {
            return Err(Error::InvalidParameters("density matrix is not Hermitian".into()));
        }
        let eigs = linalg::eigh(&self.matrix)?;
        if eigs.values.iter().any(|&e| e < -1e-10) {
            return Err(Error::InvalidParameters(format!(
                "density matrix has negative eigenvalue {:.3e}",
                eigs.values[0]
            )));
        }
        Ok(())
    }
}

/// Scalar observable sampled on a time grid.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Self {
        assert_eq!(times.len(), values.len(), "time series length mismatch");
        TimeSeries { times, values, label: label.into() }
    }
}

/// (P_g, P_e) of a composite state; the ground block is the first
/// `fock_dim` amplitudes by the basis-ordering convention.
pub fn qubit_populations(psi: &QuantumState) -> Result<(f64, f64)> {
    if psi.space != Space::Composite {
        return Err(Error::InvalidSpace("qubit_populations needs a composite state".into()));
    }
    let fock_dim = psi.dim() / 2;
    let p_g: f64 = psi.amplitudes.iter().take(fock_dim).map(|z| z.norm_sqr()).sum();
    let p_e: f64 = psi.amplitudes.iter().skip(fock_dim).map(|z| z.norm_sqr()).sum();
    Ok((p_g, p_e))
}

/// Field density matrix after tracing out the qubit from a pure composite state.
pub fn partial_trace_qubit(psi: &QuantumState) -> Result<DensityMatrix> {
    if psi.space != Space::Composite {
        return Err(Error::InvalidSpace("partial_trace_qubit needs a composite state".into()));
    }
    let fock_dim = psi.dim() / 2;
    let mut rho = Array2::<C64>::zeros((fock_dim, fock_dim));
    for q in 0..2 {
        let block = psi.amplitudes.slice(ndarray::s![q * fock_dim..(q + 1) * fock_dim]);
        for r in 0..fock_dim {
            for c in 0..fock_dim {
                rho[[r, c]] += block[r] * block[c].conj();
            }
        }
    }
    Ok(DensityMatrix { matrix: rho, space: Space::FieldOnly })
}

/// Same reduction for a composite density matrix.
pub fn partial_trace_qubit_density(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.space != Space::Composite {
        return Err(Error::InvalidSpace("partial_trace_qubit needs a composite input".into()));
    }
    let fock_dim = rho.dim() / 2;
    let mut out = Array2::<C64>::zeros((fock_dim, fock_dim));
    for q in 0..2 {
        for r in 0..fock_dim {
            for c in 0..fock_dim {
                out[[r, c]] += rho.matrix[[q * fock_dim + r, q * fock_dim + c]];
            }
        }
    }
    Ok(DensityMatrix { matrix: out, space: Space::FieldOnly })
}

/// Qubit measurement outcome used for conditioning the field state.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QubitOutcome {
    Ground,
    Excited,
    /// (|g⟩ + |e⟩)/√2.
    Plus,
    /// (|g⟩ − |e⟩)/√2.
    Minus,
}

impl QubitOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            QubitOutcome::Ground => "g",
            QubitOutcome::Excited => "e",
            QubitOutcome::Plus => "plus",
            QubitOutcome::Minus => "minus",
        }
    }
}

/// Conditions a composite pure state on a qubit outcome, returning the
/// normalized field state and the outcome probability.
pub fn postselect_qubit(
    psi: &QuantumState,
    outcome: QubitOutcome,
) -> Result<(QuantumState, f64)> {
    if psi.space != Space::Composite {
        return Err(Error::InvalidSpace("postselect_qubit needs a composite state".into()));
    }
    let fock_dim = psi.dim() / 2;
    let g = psi.amplitudes.slice(ndarray::s![..fock_dim]);
    let e = psi.amplitudes.slice(ndarray::s![fock_dim..]);
    let inv_sqrt2 = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let projected: Array1<C64> = match outcome {
        QubitOutcome::Ground => g.to_owned(),
        QubitOutcome::Excited => e.to_owned(),
        QubitOutcome::Plus => (&g.to_owned() + &e.to_owned()).mapv(|z| z * inv_sqrt2),
        QubitOutcome::Minus => (&g.to_owned() - &e.to_owned()).mapv(|z| z * inv_sqrt2),
    };
    let probability: f64 = projected.iter().map(|z| z.norm_sqr()).sum();
    if probability <= 1e-12 {
        return Err(Error::PostselectionImpossible {
            outcome: outcome.label().into(),
            probability,
        });
    }
    let amplitudes = projected.mapv(|z| z / C64::from(probability.sqrt()));
    Ok((QuantumState { amplitudes, space: Space::FieldOnly }, probability))
}

/// Rectangular phase-space sampling region, α = x + iy.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct WignerGridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub points_per_axis: usize,
}

impl Default for WignerGridSpec {
    fn default() -> Self {
        WignerGridSpec { x_min: -3.5, x_max: 3.5, y_min: -3.5, y_max: 3.5, points_per_axis: 121 }
    }
}

impl WignerGridSpec {
    fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![(min + max) / 2.0];
        }
        (0..n).map(|k| min + (max - min) * k as f64 / (n - 1) as f64).collect()
    }
}

/// Sampled Wigner function; `values[[iy, ix]]` corresponds to
/// α = x_axis[ix] + i·y_axis[iy].
#[derive(Clone, Debug)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub values: Array2<f64>,
    /// Set when the grid reaches beyond the truncation safety radius
    /// √(fock_dim)/2; values there may carry truncation error.
    pub truncation_warning: bool,
}

/// W(α) = (2/π) Tr(D†(α) ρ_f D(α) (−1)^{a†a}), evaluated pointwise.
pub fn wigner(rho_f: &DensityMatrix, spec: &WignerGridSpec) -> Result<WignerGrid> {
    if rho_f.space != Space::FieldOnly {
        return Err(Error::InvalidSpace("wigner needs a field density matrix".into()));
    }
    let fock_dim = rho_f.dim();
    let cfg = HilbertConfig::new(fock_dim)?;
    let parity_diag: Vec<f64> =
        (0..fock_dim).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let x_axis = WignerGridSpec::axis(spec.x_min, spec.x_max, spec.points_per_axis);
    let y_axis = WignerGridSpec::axis(spec.y_min, spec.y_max, spec.points_per_axis);
    let safety_radius = (fock_dim as f64).sqrt() / 2.0;
    let mut truncation_warning = false;
    let mut values = Array2::<f64>::zeros((y_axis.len(), x_axis.len()));
    for (iy, &y) in y_axis.iter().enumerate() {
        for (ix, &x) in x_axis.iter().enumerate() {
            let alpha = C64::new(x, y);
            if alpha.norm() > safety_radius {
                truncation_warning = true;
            }
            let d = displacement(alpha, &cfg).matrix;
            let displaced = linalg::dagger(&d).dot(&rho_f.matrix).dot(&d);
            let tr: f64 = displaced
                .diag()
                .iter()
                .zip(parity_diag.iter())
                .map(|(z, p)| z.re * p)
                .sum();
            values[[iy, ix]] = 2.0 / PI * tr;
        }
    }
    Ok(WignerGrid { x_axis, y_axis, values, truncation_warning })
}

/// W at a single phase-space point.
pub fn wigner_point(rho_f: &DensityMatrix, alpha: C64) -> Result<f64> {
    let spec = WignerGridSpec {
        x_min: alpha.re,
        x_max: alpha.re,
        y_min: alpha.im,
        y_max: alpha.im,
        points_per_axis: 1,
    };
    Ok(wigner(rho_f, &spec)?.values[[0, 0]])
}

/// (min W, ∫ max(0, −W) dx dy) over the grid, the integral by the 2D
/// trapezoid rule.
pub fn wigner_negativity(grid: &WignerGrid) -> (f64, f64) {
    let min = grid.values.iter().copied().fold(f64::INFINITY, f64::min);
    let nx = grid.x_axis.len();
    let ny = grid.y_axis.len();
    if nx < 2 || ny < 2 {
        return (min, 0.0);
    }
    let dx = (grid.x_axis[nx - 1] - grid.x_axis[0]) / (nx - 1) as f64;
    let dy = (grid.y_axis[ny - 1] - grid.y_axis[0]) / (ny - 1) as f64;
    let mut integral = 0.0;
    for iy in 0..ny {
        let wy = if iy == 0 || iy == ny - 1 { 0.5 } else { 1.0 };
        for ix in 0..nx {
            let wx = if ix == 0 || ix == nx - 1 { 0.5 } else { 1.0 };
            let v = grid.values[[iy, ix]];
            if v < 0.0 {
                integral += wx * wy * (-v);
            }
        }
    }
    (min, integral * dx * dy)
}

/// ∫∫ W dx dy by the trapezoid rule (normalization diagnostic).
pub fn wigner_integral(grid: &WignerGrid) -> f64 {
    let nx = grid.x_axis.len();
    let ny = grid.y_axis.len();
    if nx < 2 || ny < 2 {
        return 0.0;
    }
    let dx = (grid.x_axis[nx - 1] - grid.x_axis[0]) / (nx - 1) as f64;
    let dy = (grid.y_axis[ny - 1] - grid.y_axis[0]) / (ny - 1) as f64;
    let mut integral = 0.0;
    for iy in 0..ny {
        let wy = if iy == 0 || iy == ny - 1 { 0.5 } else { 1.0 };
        for ix in 0..nx {
            let wx = if ix == 0 || ix == nx - 1 { 0.5 } else { 1.0 };
            integral += wx * wy * grid.values[[iy, ix]];
        }
    }
    integral * dx * dy
}

/// Normalized (|α⟩ + e^{iθ}|−α⟩) superposition built from displacement
/// operators acting on the vacuum.
pub fn cat_reference(alpha: C64, relative_phase: f64, cfg: &HilbertConfig) -> QuantumState {
    let vac = QuantumState::ket_fock(cfg, 0);
    let plus = displacement(alpha, cfg).apply(&vac).unwrap().amplitudes;
    let minus = displacement(-alpha, cfg).apply(&vac).unwrap().amplitudes;
    let phase = C64::from_polar(1.0, relative_phase);
    QuantumState::from_unnormalized(plus + minus.mapv(|z| phase * z), Space::FieldOnly)
        .expect("cat superposition is never the zero vector")
}

/// Coherent branch amplitude of the effective evolution from the vacuum,
/// (g_eff/ω_eff)(e^{−iω_eff t} − 1), with the ω_eff → 0 limit −i g_eff t.
pub fn cat_amplitude(derived: &DerivedParams, t: f64) -> C64 {
    if derived.omega_eff == 0.0 {
        return C64::new(0.0, -derived.g_eff * t);
    }
    let rotating = C64::from_polar(1.0, -derived.omega_eff * t) - C64::new(1.0, 0.0);
    C64::from(derived.g_eff / derived.omega_eff) * rotating
}

/// |⟨ψ_ref|ψ⟩|².
pub fn fidelity(psi_ref: &QuantumState, psi: &QuantumState) -> Result<f64> {
    if psi_ref.space != psi.space || psi_ref.dim() != psi.dim() {
        return Err(Error::InvalidSpace("fidelity operands live on different spaces".into()));
    }
    Ok(psi_ref.fidelity(psi))
}

/// ⟨ψ_ref|ρ|ψ_ref⟩.
pub fn fidelity_density(psi_ref: &QuantumState, rho: &DensityMatrix) -> Result<f64> {
    if psi_ref.space != rho.space || psi_ref.dim() != rho.dim() {
        return Err(Error::InvalidSpace("fidelity operands live on different spaces".into()));
    }
    let rho_psi = rho.matrix.dot(&psi_ref.amplitudes);
    let value: C64 = psi_ref
        .amplitudes
        .iter()
        .zip(rho_psi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(value.re)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// ⟨x̂⟩ or ⟨p̂⟩ per trajectory point (composite states).
pub fn quadrature_series(traj: &TrajectoryResult, which: Quadrature) -> Result<TimeSeries> {
    let first = traj.states.first().ok_or_else(|| {
        Error::InvalidParameters("empty trajectory".into())
    })?;
    if first.space != Space::Composite {
        return Err(Error::InvalidSpace("quadrature_series needs composite states".into()));
    }
    let cfg = HilbertConfig::new(first.dim() / 2)?;
    let field_op = match which {
        Quadrature::X => quadrature_x(&cfg),
        Quadrature::P => quadrature_p(&cfg),
    };
    let id_q = crate::operators::Operator::identity(Space::QubitOnly, &cfg);
    let full = crate::operators::tensor(&id_q, &field_op)?;
    let label = match which {
        Quadrature::X => "x_quad",
        Quadrature::P => "p_quad",
    };
    let values = traj
        .states
        .iter()
        .map(|s| full.expectation(s).map(|z| z.re))
        .collect::<Result<Vec<f64>>>()?;
    Ok(TimeSeries::new(traj.times.clone(), values, label))
}

/// ⟨a†a⟩ per trajectory point.
pub fn photon_number_series(traj: &TrajectoryResult) -> Result<TimeSeries> {
    let first = traj.states.first().ok_or_else(|| {
        Error::InvalidParameters("empty trajectory".into())
    })?;
    if first.space != Space::Composite {
        return Err(Error::InvalidSpace("photon_number_series needs composite states".into()));
    }
    let cfg = HilbertConfig::new(first.dim() / 2)?;
    let id_q = crate::operators::Operator::identity(Space::QubitOnly, &cfg);
    let full = crate::operators::tensor(&id_q, &number_operator(&cfg))?;
    let values = traj
        .states
        .iter()
        .map(|s| full.expectation(s).map(|z| z.re))
        .collect::<Result<Vec<f64>>>()?;
    Ok(TimeSeries::new(traj.times.clone(), values, "n_mean"))
}

/// Diagonal of a field density matrix: photon-number probabilities.
pub fn photon_distribution(rho_f: &DensityMatrix) -> Result<Vec<f64>> {
    if rho_f.space != Space::FieldOnly {
        return Err(Error::InvalidSpace("photon_distribution needs a field density matrix".into()));
    }
    Ok(rho_f.matrix.diag().iter().map(|z| z.re).collect())
}

/// Mean photon number of a field density matrix.
pub fn mean_photon_number(rho_f: &DensityMatrix) -> Result<f64> {
    let dist = photon_distribution(rho_f)?;
    Ok(dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum())
}
