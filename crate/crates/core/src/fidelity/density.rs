use nalgebra::{Complex, SMatrix, SVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
pub type Matrix8 = SMatrix<Complex64, 8, 8>;
pub type Vector8 = SVector<Complex64, 8>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated (and clamped to zero) in a density matrix.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;
/// Eigenvalues at or below this magnitude are round-off of exact zeros.
pub const ZERO_EIGENVALUE: f64 = 1e-14;

/// Index of `|σ₁σ₂σ₃⟩` with ↑ = 0, ↓ = 1 and particle 1 most significant.
pub fn basis_index(s1: u8, s2: u8, s3: u8) -> usize {
    debug_assert!(s1 < 2 && s2 < 2 && s3 < 2);
    4 * s1 as usize + 2 * s2 as usize + s3 as usize
}

/// Hermitian, unit-trace, positive semidefinite 8×8 matrix over three spins.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix8 {
    matrix: Matrix8,
}

impl DensityMatrix8 {
    pub fn new(matrix: Matrix8) -> Result<Self> {
        let herm_err = (matrix - matrix.adjoint()).camax();
        if !(herm_err <= HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm_err:e})")));
        }
        let trace = matrix.trace();
        if !((trace.re - 1.0).abs() <= TRACE_TOL && trace.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let rho = Self { matrix };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::InvalidState(format!("not positive semidefinite (eigenvalue {min:e})")));
        }
        Ok(rho)
    }

    /// Projector onto `psi / |psi|`.
    pub fn from_state_vector(psi: &Vector8) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let unit = psi.unscale(norm);
        Ok(Self {
            matrix: unit * unit.adjoint(),
        })
    }

    pub(crate) fn from_raw(matrix: Matrix8) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix8 {
        &self.matrix
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.hermitian_part()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Principal square root via Hermitian eigendecomposition.
    ///
    /// Eigenvalues in `[−1e−10, 1e−14]` are treated as zero; anything more
    /// negative is an error.
    pub fn sqrt(&self) -> Result<Matrix8> {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let mut roots = eig.eigenvalues;
        for lambda in roots.iter_mut() {
            if *lambda < -NEGATIVE_EIGENVALUE_TOL {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {lambda:e} in square root"
                )));
            }
            *lambda = if *lambda <= ZERO_EIGENVALUE { 0.0 } else { lambda.sqrt() };
        }
        let v = &eig.eigenvectors;
        let scaled = Matrix8::from_fn(|i, j| v[(i, j)] * roots[j]);
        Ok(scaled * v.adjoint())
    }

    fn hermitian_part(&self) -> Matrix8 {
        (self.matrix + self.matrix.adjoint()).scale(0.5)
    }
}
