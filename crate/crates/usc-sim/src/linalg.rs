//! Dense complex-matrix helpers: Hermitian eigendecomposition, unitary
//! exponentials, and norm utilities shared across the crate.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance relative to the larger of the two norms.
///
/// Returns an absolute distance when both operands are (numerically) zero.
pub fn relative_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let scale = frobenius(a).max(frobenius(b));
    let diff = frobenius(&(a - b));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// ‖M − M†‖ / ‖M‖ (plain ‖M − M†‖ for zero M).
pub fn hermiticity_error(m: &Array2<C64>) -> f64 {
    let scale = frobenius(m);
    let diff = frobenius(&(m - &dagger(m)));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub fn vector_norm(v: &Array1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian matrix, with the adjoint eigenvector
/// matrix cached for repeated unitary applications.
pub struct HermitianEig {
    pub values: Array1<f64>,
    pub vectors: Array2<C64>,
    vectors_dag: Array2<C64>,
}

/// Some LAPACK-wrapper versions hand a row-major complex buffer straight to
/// the column-major backend, which then diagonalizes the transposed
/// (conjugated) matrix; the returned eigenvectors must be conjugated back.
/// Probe the backend once with a matrix that distinguishes the two cases.
fn backend_conjugates_eigenvectors() -> bool {
    static FLAG: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    *FLAG.get_or_init(|| {
        let mut probe = Array2::<C64>::zeros((2, 2));
        probe[[0, 1]] = C64::new(0.0, 1.0);
        probe[[1, 0]] = C64::new(0.0, -1.0);
        let (values, vectors) = probe
            .eigh(UPLO::Lower)
            .expect("2x2 Hermitian probe cannot fail");
        let v0 = vectors.column(0);
        let lambda = C64::from(values[0]);
        let residual: f64 = (0..2)
            .map(|r| {
                let mv: C64 = (0..2).map(|k| probe[[r, k]] * v0[k]).sum();
                (mv - lambda * v0[r]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        residual > 1e-8
    })
}

pub fn eigh(m: &Array2<C64>) -> Result<HermitianEig> {
    let standard = m.as_standard_layout();
    let (values, mut vectors) = standard
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Linalg(e.to_string()))?;
    if backend_conjugates_eigenvectors() {
        vectors.mapv_inplace(|z| z.conj());
    }
    let vectors_dag = dagger(&vectors);
    Ok(HermitianEig { values, vectors, vectors_dag })
}

impl HermitianEig {
    /// exp(−i H s) ψ for the decomposed H.
    pub fn evolve(&self, psi: &Array1<C64>, s: f64) -> Array1<C64> {
        let mut coeffs = self.vectors_dag.dot(psi);
        coeffs
            .iter_mut()
            .zip(self.values.iter())
            .for_each(|(c, &e)| *c *= C64::from_polar(1.0, -e * s));
        self.vectors.dot(&coeffs)
    }

    /// exp(−i H s) as a dense matrix.
    pub fn unitary(&self, s: f64) -> Array2<C64> {
        let phases = Array2::from_diag(
            &self.values.mapv(|e| C64::from_polar(1.0, -e * s)),
        );
        self.vectors.dot(&phases).dot(&self.vectors_dag)
    }
}

/// exp(−i H s) for Hermitian H via eigendecomposition; exactly unitary up to
/// roundoff regardless of ‖H s‖.
pub fn expi_hermitian(h: &Array2<C64>, s: f64) -> Result<Array2<C64>> {
    Ok(eigh(h)?.unitary(s))
}
