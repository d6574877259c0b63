use std::sync::Arc;

use super::{invert, Algebra};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// A unital algebra homomorphism; column `i` of the matrix is `f(e_i)` in target coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    matrix: Matrix,
}

impl AlgebraHom {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Matrix) -> Result<AlgebraHom> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim() * source.dim(), got: matrix.rows() * matrix.cols() });
        }
        if matrix.column(0) != target.unit_coords() {
            return Err(Error::InvalidHom("f(1) ≠ 1".into()));
        }
        let m = source.dim();
        for i in 0..m {
            let fi = matrix.column(i);
            for j in 0..m {
                let lhs = matrix.mul_vec(&source.mul_basis_coords(i, j))?;
                let rhs = target.mul_coords(&fi, &matrix.column(j));
                if lhs != rhs {
                    return Err(Error::InvalidHom(format!("f(e{i}·e{j}) ≠ f(e{i})·f(e{j})")));
                }
            }
        }
        Ok(AlgebraHom { source, target, matrix })
    }

    pub fn identity(a: &Arc<Algebra>) -> AlgebraHom {
        AlgebraHom { source: a.clone(), target: a.clone(), matrix: Matrix::identity(a.dim()) }
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        self.matrix.mul_vec(coords)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AlgebraHom) -> Result<AlgebraHom> {
        if inner.target != self.source {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraHom { source: inner.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&inner.matrix)? })
    }

    pub fn kernel(&self) -> Subspace {
        self.matrix.kernel()
    }

    pub fn image(&self) -> Subspace {
        self.matrix.image()
    }

    pub fn is_automorphism(&self) -> bool {
        self.source == self.target && invert(&self.matrix).is_some()
    }

    pub fn inverse(&self) -> Option<AlgebraHom> {
        let inv = invert(&self.matrix)?;
        Some(AlgebraHom { source: self.target.clone(), target: self.source.clone(), matrix: inv })
    }
}
