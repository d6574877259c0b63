use std::sync::Arc;

use num_traits::Zero;

use super::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A bimodule stored by the action matrices of the basis elements of `A`.
/// `left[i]` is `m ↦ e_i·m`, `right[i]` is `m ↦ m·e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    algebra: Arc<Algebra>,
    dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(algebra: Arc<Algebra>, dim: usize, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Bimodule> {
        let b = Bimodule { algebra, dim, left, right };
        b.validate()?;
        Ok(b)
    }

    /// Skips validation; used for modules built from already-verified structure.
    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, dim: usize, left: Vec<Matrix>, right: Vec<Matrix>) -> Bimodule {
        Bimodule { algebra, dim, left, right }
    }

    fn validate(&self) -> Result<()> {
        let m = self.algebra.dim();
        let bad = |msg: String| Err(Error::InvalidBimodule(msg));
        if self.left.len() != m || self.right.len() != m {
            return bad(format!("expected {m} action matrices per side"));
        }
        for (side, mats) in [("left", &self.left), ("right", &self.right)] {
            for (i, a) in mats.iter().enumerate() {
                if a.rows() != self.dim || a.cols() != self.dim {
                    return bad(format!("{side} action of e{i} is not {0}×{0}", self.dim));
                }
            }
        }
        let id = Matrix::identity(self.dim);
        if self.left[0] != id || self.right[0] != id {
            return bad("the unit must act as the identity".into());
        }
        for i in 0..m {
            for j in 0..m {
                let prod = self.algebra.mul_basis_coords(i, j);
                let l = self.left_of(&prod);
                if l != self.left[i].mul(&self.left[j])? {
                    return bad(format!("left action is not multiplicative on ({i}, {j})"));
                }
                let r = self.right_of(&prod);
                if r != self.right[j].mul(&self.right[i])? {
                    return bad(format!("right action is not anti-multiplicative on ({i}, {j})"));
                }
                if self.left[i].mul(&self.right[j])? != self.right[j].mul(&self.left[i])? {
                    return bad(format!("actions of e{i} (left) and e{j} (right) do not commute"));
                }
            }
        }
        Ok(())
    }

    fn combine(mats: &[Matrix], coords: &[Scalar], dim: usize) -> Matrix {
        let mut out = Matrix::zeros(dim, dim);
        for (c, mat) in coords.iter().zip(mats) {
            if !c.is_zero() {
                out = out.add(&mat.scale(c)).expect("square");
            }
        }
        out
    }

    /// Left action matrix of an arbitrary element given by coordinates.
    pub fn left_of(&self, coords: &[Scalar]) -> Matrix {
        Self::combine(&self.left, coords, self.dim)
    }

    pub fn right_of(&self, coords: &[Scalar]) -> Matrix {
        Self::combine(&self.right, coords, self.dim)
    }

    /// `A` acting on itself by multiplication.
    pub fn regular(algebra: &Arc<Algebra>) -> Bimodule {
        let m = algebra.dim();
        let left = (0..m).map(|i| algebra.left_mult_matrix(i)).collect();
        let right = (0..m).map(|i| algebra.right_mult_matrix(i)).collect();
        Bimodule::new_unchecked(algebra.clone(), m, left, right)
    }

    /// `A⊗A` with `a(x⊗y)b = ax⊗yb`; basis index `x*m + y`.
    pub fn free(algebra: &Arc<Algebra>) -> Bimodule {
        let m = algebra.dim();
        let n = m * m;
        let mut left = Vec::with_capacity(m);
        let mut right = Vec::with_capacity(m);
        for a in 0..m {
            let mut l = Matrix::zeros(n, n);
            let mut r = Matrix::zeros(n, n);
            for x in 0..m {
                for y in 0..m {
                    for (k, c) in algebra.product_terms(a, x) {
                        l.set(k * m + y, x * m + y, c.clone());
                    }
                    for (k, c) in algebra.product_terms(y, a) {
                        r.set(x * m + k, x * m + y, c.clone());
                    }
                }
            }
            left.push(l);
            right.push(r);
        }
        Bimodule::new_unchecked(algebra.clone(), n, left, right)
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Bimodule {
        let m = algebra.dim();
        Bimodule::new_unchecked(algebra.clone(), 0, vec![Matrix::zeros(0, 0); m], vec![Matrix::zeros(0, 0); m])
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn act_left(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.left[i].mul_vec(v).expect("vector sized to module")
    }

    pub fn act_right(&self, v: &[Scalar], i: usize) -> Vec<Scalar> {
        self.right[i].mul_vec(v).expect("vector sized to module")
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Checks that a matrix `self → other` commutes with both actions, returning the
    /// first offending basis index and side on failure.
    pub fn hom_violation(&self, other: &Bimodule, map: &Matrix) -> Option<(usize, &'static str)> {
        for i in 0..self.algebra.dim() {
            if map.mul(&self.left[i]).ok()? != other.left[i].mul(map).ok()? {
                return Some((i, "left"));
            }
            if map.mul(&self.right[i]).ok()? != other.right[i].mul(map).ok()? {
                return Some((i, "right"));
            }
        }
        None
    }
}
