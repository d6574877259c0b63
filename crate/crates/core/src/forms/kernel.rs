use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::limits;
use crate::linalg::{Matrix, SpanBuilder, Subspace};
use crate::scalar::Scalar;

use num_traits::Zero;

/// Matrix of `μ^n: A^⊗n → A`, tensor basis index `Σ i_t m^{n−1−t}`.
fn mu_n(a: &Algebra, n: usize) -> Matrix {
    let m = a.dim();
    let total = m.pow(n as u32);
    let mut mat = Matrix::zeros(m, total);
    for idx in 0..total {
        let mut digits = vec![0; n];
        let mut rest = idx;
        for t in (0..n).rev() {
            digits[t] = rest % m;
            rest /= m;
        }
        let mut acc = a.basis_coords(digits[0]);
        for &d in &digits[1..] {
            acc = a.mul_coords(&acc, &a.basis_coords(d));
        }
        for (r, c) in acc.into_iter().enumerate() {
            if !c.is_zero() {
                mat.set(r, idx, c);
            }
        }
    }
    mat
}

/// Compares `ker μ^n` with `Σ_i A^⊗i ⊗ Ω_1(A) ⊗ A^⊗(n−2−i)` inside `A^⊗n`, where
/// `Ω_1(A) = ker μ²`.
pub fn kernel_of_mu_n(a: &Algebra, n: usize) -> Result<bool> {
    let (lhs, rhs) = kernel_of_mu_n_spaces(a, n)?;
    Ok(lhs == rhs)
}

pub fn kernel_of_mu_n_spaces(a: &Algebra, n: usize) -> Result<(Subspace, Subspace)> {
    if n < 2 {
        return Err(Error::Input("arity must be at least 2".into()));
    }
    let m = a.dim();
    let total = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    limits::check("tensor power dimension", total)?;
    let ker = mu_n(a, n).kernel();
    let omega1 = mu_n(a, 2).kernel();
    let mut span = SpanBuilder::new(total);
    for i in 0..=n - 2 {
        let left = m.pow(i as u32);
        let right = m.pow((n - 2 - i) as u32);
        for l in 0..left {
            for r in 0..right {
                for w in omega1.basis() {
                    let mut v = vec![Scalar::zero(); total];
                    for (pair, c) in w.iter().enumerate() {
                        if !c.is_zero() {
                            v[(l * m * m + pair) * right + r] = c.clone();
                        }
                    }
                    span.insert(v);
                }
            }
        }
    }
    Ok((ker, span.finish()))
}
