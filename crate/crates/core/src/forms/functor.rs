use super::{Form, Omega};
use crate::algebra::AlgebraHom;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Matrix of `Ω_k(f): Ω_k(A) → Ω_k(B)`, sending `a_0 da_1⋯da_k` to `f(a_0) df(a_1)⋯df(a_k)`.
pub fn omega_functor(src: &Omega, dst: &Omega, f: &AlgebraHom, k: usize) -> Result<Matrix> {
    if f.source() != src.algebra() || f.target() != dst.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let (rows, cols) = (dst.check_dim(k)?, src.check_dim(k)?);
    let images: Vec<Form> = (0..src.m()).map(|i| dst.from_element(&f.matrix().column(i))).collect();
    let diffs: Vec<Form> = images.iter().map(|x| dst.d(x)).collect();
    let mut mat = Matrix::zeros(rows, cols);
    for idx in 0..cols {
        let (i, js) = src.decode(k, idx);
        let mut w = images[i].clone();
        for j in js {
            w = dst.mul(&w, &diffs[j]);
        }
        for (r, c) in w.terms() {
            mat.set(r, idx, c.clone());
        }
    }
    Ok(mat)
}
