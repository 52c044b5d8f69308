//! Simulator for a strongly coupled qubit–resonator system under two-tone
//! orthogonal driving, whose effective dynamics reaches the ultrastrong and
//! deep-strong coupling regimes of light–matter interaction.
//!
//! The crate builds the relevant Hamiltonians (lab frame, rotating frame,
//! interaction picture, static effective models, and a 1+1 Dirac form),
//! propagates states with an exactly unitary midpoint-exponential
//! integrator, encodes the two-tone and Ramsey-echo pulse protocols, and
//! extracts observables: qubit populations, photon statistics, reduced and
//! postselected field states, Wigner functions, cat-state fidelities, and
//! quadrature time series.
//!
//! All internal quantities are angular frequencies in rad/s and times in
//! seconds (ℏ = 1); the CLI boundary speaks frequency/2π in GHz and times
//! in μs.

pub mod config;
pub mod emit;
pub mod error;
pub mod evolve;
pub mod hamiltonians;
pub mod linalg;
pub mod observables;
pub mod operators;
pub mod protocols;
pub mod validate;

pub use error::{Error, Result};
pub use evolve::{
    converge_dt, converge_fock_dim, frame_transform, propagate, DtSpec, Method,
    PropagationSettings, TrajectoryResult,
};
pub use hamiltonians::{
    build_dirac, build_driven_lab, build_effective, build_interaction_picture, build_jc,
    build_rabi, build_rotating_l1, check_rwa_validity, derive_effective_params, ghz,
    solve_resonance, DerivedParams, DriveTone, QubitBasis, RwaReport, SystemParams,
    TimeDependentHamiltonian,
};
pub use observables::{
    cat_amplitude, cat_reference, fidelity, fidelity_density, partial_trace_qubit,
    photon_distribution, photon_number_series, postselect_qubit, quadrature_series,
    qubit_populations, wigner, wigner_negativity, DensityMatrix, Quadrature, QubitOutcome,
    TimeSeries, WignerGrid, WignerGridSpec,
};
pub use operators::{
    displacement, fock_annihilator, fock_creator, parity, qubit_operators,
    rotated_qubit_state, tensor, HilbertConfig, Operator, QuantumState, Sign, Space,
};
pub use protocols::{
    interaction_picture_readout, interaction_picture_transform, ramsey_readout, ramsey_sweep,
    run_schedule, two_tone_protocol, PulseSchedule, PulseSegment, RamseyConfig, TimeOrigin,
};
