use num_traits::Zero;

use super::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanBuilder, Subspace};
use crate::scalar::{one, Scalar};

/// `M⊗_A N` as the quotient of `M⊗N` (basis index `x*dim N + y`) by the balancing relations.
#[derive(Debug, Clone)]
pub struct TensorQuotient {
    dim_m: usize,
    dim_n: usize,
    relations: Subspace,
    induced: Bimodule,
}

fn kron_apply(dim_m: usize, dim_n: usize, left: Option<&Matrix>, right: Option<&Matrix>, v: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); dim_m * dim_n];
    for x in 0..dim_m {
        for y in 0..dim_n {
            let c = &v[x * dim_n + y];
            if c.is_zero() {
                continue;
            }
            for x2 in 0..dim_m {
                let a = match left {
                    Some(l) => l.get(x2, x).clone(),
                    None if x2 == x => one(),
                    None => continue,
                };
                if a.is_zero() {
                    continue;
                }
                for y2 in 0..dim_n {
                    let b = match right {
                        Some(r) => r.get(y2, y).clone(),
                        None if y2 == y => one(),
                        None => continue,
                    };
                    if !b.is_zero() {
                        out[x2 * dim_n + y2] += c * &a * b;
                    }
                }
            }
        }
    }
    out
}

/// Tensor product over the common algebra, using the right action of `m` and the left action of `n`.
/// The quotient inherits the left action of `m` and the right action of `n`.
pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<TensorQuotient> {
    if m.algebra() != n.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let a = m.algebra().clone();
    let (dm, dn) = (m.dim(), n.dim());
    let total = dm * dn;
    let mut span = SpanBuilder::new(total);
    for i in 0..a.dim() {
        for x in 0..dm {
            for y in 0..dn {
                let mut unit = vec![Scalar::zero(); total];
                unit[x * dn + y] = one();
                let ma = kron_apply(dm, dn, Some(m.right(i)), None, &unit);
                let an = kron_apply(dm, dn, None, Some(n.left(i)), &unit);
                let rel: Vec<Scalar> = ma.into_iter().zip(an).map(|(p, q)| p - q).collect();
                span.insert(rel);
            }
        }
    }
    let relations = span.finish();
    let reps = relations.complement_columns();
    let q = reps.len();
    let induce = |f: &dyn Fn(&[Scalar]) -> Vec<Scalar>| {
        let cols: Vec<Vec<Scalar>> = reps
            .iter()
            .map(|&c| {
                let mut v = vec![Scalar::zero(); total];
                v[c] = one();
                relations.quotient_coords(&f(&v))
            })
            .collect();
        Matrix::from_columns(&cols, q).expect("columns sized")
    };
    let left = (0..a.dim()).map(|i| induce(&|v| kron_apply(dm, dn, Some(m.left(i)), None, v))).collect();
    let right = (0..a.dim()).map(|i| induce(&|v| kron_apply(dm, dn, None, Some(n.right(i)), v))).collect();
    let induced = Bimodule::new(a, q, left, right)?;
    Ok(TensorQuotient { dim_m: dm, dim_n: dn, relations, induced })
}

impl TensorQuotient {
    pub fn dim(&self) -> usize {
        self.induced.dim()
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// Image of `x⊗y` in quotient coordinates.
    pub fn factor(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim_m * self.dim_n];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                v[i * self.dim_n + j] = a * b;
            }
        }
        self.relations.quotient_coords(&v)
    }

    pub fn as_bimodule(&self) -> &Bimodule {
        &self.induced
    }

    /// Given a bilinear map as a matrix on `M⊗N`, returns the unique induced map on the
    /// quotient if the map kills every balancing relation.
    pub fn factor_through(&self, bilinear: &Matrix) -> Result<Option<Matrix>> {
        if bilinear.cols() != self.dim_m * self.dim_n {
            return Err(Error::DimensionMismatch { expected: self.dim_m * self.dim_n, got: bilinear.cols() });
        }
        for r in self.relations.basis() {
            if bilinear.mul_vec(r)?.iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
        }
        let cols: Vec<Vec<Scalar>> = self.relations.complement_columns().iter().map(|&c| bilinear.column(c)).collect();
        Ok(Some(Matrix::from_columns(&cols, bilinear.rows())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn regular_tensor_regular_is_regular() {
        for a in [builtins::dual(), builtins::matrix(2), builtins::truncpoly(3)] {
            let r = Bimodule::regular(&a);
            let t = tensor_over(&r, &r).unwrap();
            assert_eq!(t.dim(), a.dim());
            // multiplication factors through the quotient
            let n = a.dim();
            let mut mult = Matrix::zeros(n, n * n);
            for x in 0..n {
                for y in 0..n {
                    for (k, c) in a.product_terms(x, y) {
                        mult.set(*k, x * n + y, c.clone());
                    }
                }
            }
            let induced = t.factor_through(&mult).unwrap().unwrap();
            assert_eq!(induced.rank(), n);
        }
    }

    #[test]
    fn module_tensor_regular() {
        let a = builtins::upper(2);
        let free = Bimodule::free(&a);
        assert_eq!(tensor_over(&free, &Bimodule::regular(&a)).unwrap().dim(), free.dim());
        assert_eq!(tensor_over(&Bimodule::regular(&a), &free).unwrap().dim(), free.dim());
    }

    #[test]
    fn non_balanced_map_does_not_factor() {
        let a = builtins::dual();
        let r = Bimodule::regular(&a);
        let t = tensor_over(&r, &r).unwrap();
        // x⊗y ↦ x_0 y_1 is not balanced
        let mut m = Matrix::zeros(1, 4);
        m.set(0, 1, one());
        assert!(t.factor_through(&m).unwrap().is_none());
    }
}
