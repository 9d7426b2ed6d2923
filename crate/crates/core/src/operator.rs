use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const UNITARY_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorRole {
    Unitary,
    Hermitian,
}

/// Dense square operator on the register basis, tagged by its role.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    matrix: DMatrix<Complex64>,
    role: OperatorRole,
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`
pub fn unitarity_error(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    max_abs_diff(&(m.adjoint() * m), &DMatrix::identity(n, n))
}

/// `‖H − H†‖_max`
pub fn hermiticity_error(m: &DMatrix<Complex64>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

impl OperatorMatrix {
    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim), role: OperatorRole::Unitary }
    }

    /// Checked constructor; fails if `‖U†U − I‖_max ≥ 1e-10`.
    pub fn unitary(matrix: DMatrix<Complex64>) -> Result<Self> {
        let deviation = unitarity_error(&matrix);
        if matrix.is_square() && deviation < UNITARY_TOL {
            Ok(Self { matrix, role: OperatorRole::Unitary })
        } else {
            Err(Error::NotInRole { role: "unitary", deviation })
        }
    }

    /// Checked constructor; fails if `‖H − H†‖_max ≥ 1e-12`.
    pub fn hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        let deviation = hermiticity_error(&matrix);
        if matrix.is_square() && deviation < HERMITIAN_TOL {
            Ok(Self { matrix, role: OperatorRole::Hermitian })
        } else {
            Err(Error::NotInRole { role: "Hermitian", deviation })
        }
    }

    pub(crate) fn from_parts(matrix: DMatrix<Complex64>, role: OperatorRole) -> Self {
        Self { matrix, role }
    }

    pub fn role(&self) -> OperatorRole {
        self.role
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `next · self`: apply `self` first, then `next`.
    pub fn then(&self, next: &OperatorMatrix) -> OperatorMatrix {
        Self { matrix: &next.matrix * &self.matrix, role: OperatorRole::Unitary }
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        Self { matrix: self.matrix.adjoint(), role: self.role }
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.matrix)
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }
}
