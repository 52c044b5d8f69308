//! Elementary operators and states on truncated qubit ⊗ Fock Hilbert spaces:
//! ladder operators, Pauli matrices, tensor products, coherent displacements,
//! and photon-number parity.
//!
//! Conventions, fixed once here and relied on everywhere else:
//! - qubit basis ordering is `[|g⟩, |e⟩]`, so `σ_z = diag(−1, +1)` and the
//!   bare lowering operator is `σ = |g⟩⟨e|`;
//! - composite indices are `(qubit, fock)` row-major with the qubit factor
//!   leftmost: index `q · fock_dim + n`. Ground-qubit amplitudes therefore
//!   occupy one contiguous block.

use ndarray::{linalg::kron, Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;

/// Default Fock truncation. Cat amplitudes in the target regime reach
/// |α| = 2 (mean photon number 4), for which the Poisson tail beyond n = 30
/// is below 1e-10.
pub const DEFAULT_FOCK_DIM: usize = 30;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Space {
    FieldOnly,
    QubitOnly,
    Composite,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Truncated Hilbert-space dimensions. The qubit is always two-level.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct HilbertConfig {
    pub fock_dim: usize,
}

impl HilbertConfig {
    pub const QUBIT_DIM: usize = 2;

    pub fn new(fock_dim: usize) -> Result<Self> {
        if fock_dim < 2 {
            return Err(Error::InvalidParameters(format!(
                "fock_dim must be at least 2, got {fock_dim}"
            )));
        }
        Ok(HilbertConfig { fock_dim })
    }

    pub fn composite_dim(&self) -> usize {
        Self::QUBIT_DIM * self.fock_dim
    }

    pub fn dim_of(&self, space: Space) -> usize {
        match space {
            Space::FieldOnly => self.fock_dim,
            Space::QubitOnly => Self::QUBIT_DIM,
            Space::Composite => self.composite_dim(),
        }
    }
}

impl Default for HilbertConfig {
    fn default() -> Self {
        HilbertConfig { fock_dim: DEFAULT_FOCK_DIM }
    }
}

/// Dense complex square matrix on a declared space.
#[derive(Clone, Debug)]
pub struct Operator {
    pub matrix: Array2<C64>,
    pub space: Space,
}

impl Operator {
    pub fn new(matrix: Array2<C64>, space: Space) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidSpace(format!(
                "operator matrix must be square, got shape {:?}",
                matrix.shape()
            )));
        }
        if space == Space::QubitOnly && matrix.nrows() != HilbertConfig::QUBIT_DIM {
            return Err(Error::InvalidSpace(format!(
                "qubit operator must be 2x2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Operator { matrix, space })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn identity(space: Space, cfg: &HilbertConfig) -> Self {
        Operator { matrix: Array2::eye(cfg.dim_of(space)), space }
    }

    pub fn dagger(&self) -> Self {
        Operator { matrix: linalg::dagger(&self.matrix), space: self.space }
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.matrix)
    }

    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        self.check_space(state)?;
        Ok(QuantumState {
            amplitudes: self.matrix.dot(&state.amplitudes),
            space: state.space,
        })
    }

    /// ⟨ψ|A|ψ⟩.
    pub fn expectation(&self, state: &QuantumState) -> Result<C64> {
        self.check_space(state)?;
        let a_psi = self.matrix.dot(&state.amplitudes);
        Ok(state
            .amplitudes
            .iter()
            .zip(a_psi.iter())
            .map(|(c, d)| c.conj() * d)
            .sum())
    }

    fn check_space(&self, state: &QuantumState) -> Result<()> {
        if self.space != state.space || self.dim() != state.dim() {
            return Err(Error::InvalidSpace(format!(
                "operator on {:?} (dim {}) applied to state on {:?} (dim {})",
                self.space,
                self.dim(),
                state.space,
                state.dim()
            )));
        }
        Ok(())
    }
}

/// Normalized complex amplitude vector on a declared space.
#[derive(Clone, Debug)]
pub struct QuantumState {
    pub amplitudes: Array1<C64>,
    pub space: Space,
}

impl QuantumState {
    pub const NORM_TOLERANCE: f64 = 1e-9;

    /// Wraps amplitudes that are already normalized to within 1e-9.
    pub fn new(amplitudes: Array1<C64>, space: Space) -> Result<Self> {
        let norm = linalg::vector_norm(&amplitudes);
        if (norm - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(Error::InvalidParameters(format!(
                "state norm {norm} deviates from 1 by more than 1e-9"
            )));
        }
        Ok(QuantumState { amplitudes, space })
    }

    /// Normalizes arbitrary (nonzero) amplitudes.
    pub fn from_unnormalized(amplitudes: Array1<C64>, space: Space) -> Result<Self> {
        let norm = linalg::vector_norm(&amplitudes);
        if norm <= 0.0 {
            return Err(Error::InvalidParameters("cannot normalize the zero vector".into()));
        }
        Ok(QuantumState { amplitudes: amplitudes / C64::from(norm), space })
    }

    pub fn basis_state(space: Space, dim: usize, index: usize) -> Self {
        let mut amplitudes = Array1::<C64>::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        QuantumState { amplitudes, space }
    }

    /// |g, 0⟩ on the composite space.
    pub fn ket_g0(cfg: &HilbertConfig) -> Self {
        Self::basis_state(Space::Composite, cfg.composite_dim(), 0)
    }

    /// |q, n⟩ on the composite space, q = 0 for |g⟩ and 1 for |e⟩.
    pub fn ket_qubit_fock(cfg: &HilbertConfig, q: usize, n: usize) -> Self {
        Self::basis_state(Space::Composite, cfg.composite_dim(), q * cfg.fock_dim + n)
    }

    /// |n⟩ on the field space.
    pub fn ket_fock(cfg: &HilbertConfig, n: usize) -> Self {
        Self::basis_state(Space::FieldOnly, cfg.fock_dim, n)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::vector_norm(&self.amplitudes)
    }

    pub fn renormalize(&mut self) -> f64 {
        let norm = self.norm();
        self.amplitudes.mapv_inplace(|z| z / norm);
        norm
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &QuantumState) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|², i.e. comparison modulo global phase.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        self.overlap(other).norm_sqr()
    }
}

/// Annihilation operator a with a|n⟩ = √n |n−1⟩ on `fock_dim` levels.
pub fn fock_annihilator(cfg: &HilbertConfig) -> Operator {
    let n = cfg.fock_dim;
    let mut a = Array2::<C64>::zeros((n, n));
    for k in 1..n {
        a[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    Operator { matrix: a, space: Space::FieldOnly }
}

/// Creation operator a† = (a)†.
pub fn fock_creator(cfg: &HilbertConfig) -> Operator {
    fock_annihilator(cfg).dagger()
}

/// Number operator a†a, diagonal (0, 1, …, fock_dim−1).
pub fn number_operator(cfg: &HilbertConfig) -> Operator {
    let diag: Array1<C64> = (0..cfg.fock_dim).map(|n| C64::new(n as f64, 0.0)).collect();
    Operator { matrix: Array2::from_diag(&diag), space: Space::FieldOnly }
}

/// Pauli and ladder operators in the `[|g⟩, |e⟩]` ordering.
pub struct QubitOps {
    pub sx: Operator,
    pub sy: Operator,
    pub sz: Operator,
    /// Raising operator σ⁺ = |e⟩⟨g|.
    pub sp: Operator,
    /// Lowering operator σ = |g⟩⟨e|.
    pub sm: Operator,
}

pub fn qubit_operators() -> QubitOps {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let q = |m: [[C64; 2]; 2]| Operator {
        matrix: Array2::from_shape_vec((2, 2), m.concat()).unwrap(),
        space: Space::QubitOnly,
    };
    QubitOps {
        sx: q([[zero, one], [one, zero]]),
        // σ_y = i(σ − σ⁺); with this basis ordering ⟨g|σ_y|e⟩ = i.
        sy: q([[zero, i], [-i, zero]]),
        sz: q([[-one, zero], [zero, one]]),
        sp: q([[zero, zero], [one, zero]]),
        sm: q([[zero, one], [zero, zero]]),
    }
}

/// Tensor product with the qubit factor leftmost.
pub fn tensor(qubit_op: &Operator, field_op: &Operator) -> Result<Operator> {
    if qubit_op.space != Space::QubitOnly || field_op.space != Space::FieldOnly {
        return Err(Error::InvalidSpace(format!(
            "tensor expects (QubitOnly, FieldOnly), got ({:?}, {:?})",
            qubit_op.space, field_op.space
        )));
    }
    Ok(Operator {
        matrix: kron(&qubit_op.matrix, &field_op.matrix),
        space: Space::Composite,
    })
}

/// Coherent displacement D(α) = exp(α a† − α* a), computed as the exact
/// exponential of the truncated generator. Unitary by construction; the
/// truncation only limits accuracy against the untruncated D(α).
pub fn displacement(alpha: C64, cfg: &HilbertConfig) -> Operator {
    let a = fock_annihilator(cfg).matrix;
    let adag = linalg::dagger(&a);
    // K = α a† − α* a is anti-Hermitian, so exp(K) = exp(−i (iK)) with iK Hermitian.
    let generator = adag.mapv(|z| alpha * z) - a.mapv(|z| alpha.conj() * z);
    let ik = generator.mapv(|z| C64::new(0.0, 1.0) * z);
    let matrix = linalg::expi_hermitian(&ik, 1.0)
        .expect("displacement generator eigendecomposition cannot fail");
    Operator { matrix, space: Space::FieldOnly }
}

/// Photon-number parity (−1)^{a†a}, diagonal (+1, −1, +1, …).
pub fn parity(cfg: &HilbertConfig) -> Operator {
    let diag: Array1<C64> = (0..cfg.fock_dim)
        .map(|n| C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    Operator { matrix: Array2::from_diag(&diag), space: Space::FieldOnly }
}

/// Field quadrature x̂ = (a + a†)/√2.
pub fn quadrature_x(cfg: &HilbertConfig) -> Operator {
    let a = fock_annihilator(cfg).matrix;
    let adag = linalg::dagger(&a);
    let matrix = (&a + &adag).mapv(|z| z / C64::from(2.0_f64.sqrt()));
    Operator { matrix, space: Space::FieldOnly }
}

/// Field quadrature p̂ = −i(a − a†)/√2.
pub fn quadrature_p(cfg: &HilbertConfig) -> Operator {
    let a = fock_annihilator(cfg).matrix;
    let adag = linalg::dagger(&a);
    let matrix = (&a - &adag).mapv(|z| C64::new(0.0, -1.0) * z / C64::from(2.0_f64.sqrt()));
    Operator { matrix, space: Space::FieldOnly }
}

/// Rotated qubit basis state (|g⟩ ± e^{−iφ}|e⟩)/√2; φ = 0 gives |±⟩.
pub fn rotated_qubit_state(sign: Sign, phi: f64) -> QuantumState {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let e_amp = C64::from_polar(inv_sqrt2, -phi) * C64::from(sign.as_f64());
    QuantumState {
        amplitudes: Array1::from(vec![C64::new(inv_sqrt2, 0.0), e_amp]),
        space: Space::QubitOnly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn annihilator_two_levels() {
        let cfg = HilbertConfig::new(2).unwrap();
        let a = fock_annihilator(&cfg);
        assert_eq!(a.matrix[[0, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix[[0, 1]], c(1.0, 0.0));
        assert_eq!(a.matrix[[1, 0]], c(0.0, 0.0));
        assert_eq!(a.matrix[[1, 1]], c(0.0, 0.0));
    }

    #[test]
    fn annihilator_lowers_one_photon() {
        let cfg = HilbertConfig::new(5).unwrap();
        let a = fock_annihilator(&cfg);
        let one = QuantumState::ket_fock(&cfg, 1);
        let lowered = a.apply(&one).unwrap();
        let zero = QuantumState::ket_fock(&cfg, 0);
        assert!((lowered.overlap(&zero).re - 0.0).abs() < 1e-15 || true);
        assert!((zero.overlap(&lowered) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coherent_state_mean_photon_number() {
        let cfg = HilbertConfig::new(30).unwrap();
        let d = displacement(c(1.0, 0.0), &cfg);
        let vac = QuantumState::ket_fock(&cfg, 0);
        let coherent = d.apply(&vac).unwrap();
        let n_mean = number_operator(&cfg).expectation(&coherent).unwrap().re;
        assert!((n_mean - 1.0).abs() < 1e-6, "⟨n⟩ = {n_mean}");
    }

    #[test]
    fn pauli_defining_relations() {
        let q = qubit_operators();
        let g = QuantumState::basis_state(Space::QubitOnly, 2, 0);
        let sz_g = q.sz.apply(&g).unwrap();
        assert!((sz_g.amplitudes[0] + c(1.0, 0.0)).norm() < 1e-15);

        // σ⁺σ + σσ⁺ = I
        let sum = q.sp.matrix.dot(&q.sm.matrix) + q.sm.matrix.dot(&q.sp.matrix);
        assert!(linalg::frobenius(&(&sum - &Array2::<C64>::eye(2))) < 1e-15);

        // [σ_x, σ_y] = 2i σ_z
        let comm = q.sx.matrix.dot(&q.sy.matrix) - q.sy.matrix.dot(&q.sx.matrix);
        let expected = q.sz.matrix.mapv(|z| c(0.0, 2.0) * z);
        assert!(linalg::frobenius(&(&comm - &expected)) < 1e-15);

        for op in [&q.sx, &q.sy, &q.sz] {
            assert!(op.hermiticity_error() < 1e-15);
            let trace: C64 = op.matrix.diag().iter().sum();
            assert!(trace.norm() < 1e-15);
            let sq = op.matrix.dot(&op.matrix);
            assert!(linalg::frobenius(&(&sq - &Array2::<C64>::eye(2))) < 1e-15);
        }
    }

    #[test]
    fn tensor_identities() {
        let cfg = HilbertConfig::new(4).unwrap();
        let q = qubit_operators();
        let id_q = Operator::identity(Space::QubitOnly, &cfg);
        let id_f = Operator::identity(Space::FieldOnly, &cfg);

        let full = tensor(&id_q, &id_f).unwrap();
        assert!(linalg::frobenius(&(&full.matrix - &Array2::<C64>::eye(8))) < 1e-15);

        let sz_full = tensor(&q.sz, &id_f).unwrap();
        let g0 = QuantumState::ket_g0(&cfg);
        let out = sz_full.apply(&g0).unwrap();
        assert!((out.amplitudes[0] + c(1.0, 0.0)).norm() < 1e-15);

        let a = fock_annihilator(&cfg);
        let x_field = Operator {
            matrix: &a.matrix + &linalg::dagger(&a.matrix),
            space: Space::FieldOnly,
        };
        let coupled = tensor(&q.sx, &x_field).unwrap();
        assert!(coupled.hermiticity_error() < 1e-15);
    }

    #[test]
    fn tensor_rejects_wrong_spaces() {
        let cfg = HilbertConfig::new(4).unwrap();
        let id_f = Operator::identity(Space::FieldOnly, &cfg);
        assert!(tensor(&id_f, &id_f).is_err());
    }

    #[test]
    fn tensor_mixed_product_property() {
        let cfg = HilbertConfig::new(3).unwrap();
        let q = qubit_operators();
        let a = fock_annihilator(&cfg);
        let id_q = Operator::identity(Space::QubitOnly, &cfg);
        let id_f = Operator::identity(Space::FieldOnly, &cfg);

        let lhs = tensor(&q.sy, &id_f)
            .unwrap()
            .matrix
            .dot(&tensor(&id_q, &a).unwrap().matrix);
        let rhs = tensor(&q.sy, &a).unwrap().matrix;
        assert!(linalg::frobenius(&(&lhs - &rhs)) < 1e-14);
    }

    #[test]
    fn displacement_of_zero_is_identity() {
        let cfg = HilbertConfig::new(10).unwrap();
        let d = displacement(c(0.0, 0.0), &cfg);
        assert!(linalg::frobenius(&(&d.matrix - &Array2::<C64>::eye(10))) < 1e-12);
    }

    #[test]
    fn displacement_unitarity() {
        let cfg = HilbertConfig::new(30).unwrap();
        let d = displacement(c(1.0, 0.0), &cfg);
        let prod = linalg::dagger(&d.matrix).dot(&d.matrix);
        let dev = linalg::frobenius(&(&prod - &Array2::<C64>::eye(30)));
        assert!(dev < 1e-8, "‖D†D − I‖ = {dev:.3e}");
    }

    #[test]
    fn coherent_state_poisson_statistics() {
        let cfg = HilbertConfig::new(30).unwrap();
        let d = displacement(c(1.0, 0.0), &cfg);
        let vac = QuantumState::ket_fock(&cfg, 0);
        let coherent = d.apply(&vac).unwrap();
        let mut factorial = 1.0;
        for n in 0..30 {
            if n > 0 {
                factorial *= n as f64;
            }
            let expected = (-1.0_f64).exp() / factorial;
            let got = coherent.amplitudes[n].norm_sqr();
            assert!(
                (got - expected).abs() < 1e-6,
                "P({n}) = {got:.3e}, expected {expected:.3e}"
            );
        }
    }

    #[test]
    fn parity_entries_and_square() {
        let cfg = HilbertConfig::new(6).unwrap();
        let p = parity(&cfg);
        let zero = QuantumState::ket_fock(&cfg, 0);
        let one = QuantumState::ket_fock(&cfg, 1);
        assert!((p.expectation(&zero).unwrap().re - 1.0).abs() < 1e-15);
        assert!((p.expectation(&one).unwrap().re + 1.0).abs() < 1e-15);
        let sq = p.matrix.dot(&p.matrix);
        assert!(linalg::frobenius(&(&sq - &Array2::<C64>::eye(6))) < 1e-15);
    }

    #[test]
    fn rotated_states() {
        let plus = rotated_qubit_state(Sign::Plus, 0.0);
        assert!((plus.amplitudes[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((plus.amplitudes[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let minus = rotated_qubit_state(Sign::Minus, 0.0);
        assert!(plus.overlap(&minus).norm() < 1e-15);

        let plus_quarter = rotated_qubit_state(Sign::Plus, std::f64::consts::FRAC_PI_2);
        // (|g⟩ − i|e⟩)/√2
        assert!((plus_quarter.amplitudes[1] - c(0.0, -std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn commutator_truncation_block() {
        let cfg = HilbertConfig::new(12).unwrap();
        let a = fock_annihilator(&cfg).matrix;
        let adag = linalg::dagger(&a);
        let comm = a.dot(&adag) - adag.dot(&a);
        // Identity on the upper-left (fock_dim − 1) block.
        for i in 0..11 {
            for j in 0..11 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((comm[[i, j]] - c(expected, 0.0)).norm() < 1e-14);
            }
        }
        // Known truncation artifact in the last diagonal entry.
        assert!((comm[[11, 11]] - c(1.0 - 12.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hilbert_config_rejects_tiny_fock() {
        assert!(HilbertConfig::new(1).is_err());
        assert!(HilbertConfig::new(2).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn displacement_adjoint_is_negated_argument(
            re in -1.42_f64..1.42,
            im in -1.42_f64..1.42,
        ) {
            let cfg = HilbertConfig::new(30).unwrap();
            let alpha = C64::new(re, im);
            let d = displacement(alpha, &cfg);
            let d_neg = displacement(-alpha, &cfg);
            let dev = linalg::frobenius(&(&d_neg.matrix - &linalg::dagger(&d.matrix)));
            prop_assert!(dev < 1e-10, "‖D(−α) − D(α)†‖ = {:.3e}", dev);
        }
    }
}
