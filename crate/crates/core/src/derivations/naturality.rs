use super::{algebraic_bracket, compose_contraction, fn_bracket, FieldValuedForm, GradedOp, IdentityCheck};
use crate::algebra::AlgebraHom;
use crate::error::{Error, Result};
use crate::forms::{omega_functor, Form, Omega};
use crate::linalg::{solve_linear, Matrix};

/// `K'∘Ω_1(f) = Ω_k(f)∘K` as matrices `Ω_1(A) → Ω_k(B)`.
pub fn f_related(src: &Omega, dst: &Omega, f: &AlgebraHom, k: &FieldValuedForm, k2: &FieldValuedForm) -> Result<bool> {
    if k.degree() != k2.degree() {
        return Err(Error::Degree(format!("f-relatedness needs equal degrees, got {} and {}", k.degree(), k2.degree())));
    }
    let left = k2.matrix(dst)?.mul(&omega_functor(src, dst, f, 1)?)?;
    let right = omega_functor(src, dst, f, k.degree())?.mul(&k.matrix(src)?)?;
    Ok(left == right)
}

/// `Ω_k(f)` applied to a form of `src`.
fn push(src: &Omega, dst: &Omega, mat: &Matrix, w: &Form) -> Result<Form> {
    dst.from_dense(w.degree(), &mat.mul_vec(&src.to_dense(w))?)
}

/// For surjective `f`, the unique `K'` related to `K`, when one exists.
pub fn push_forward(src: &Omega, dst: &Omega, f: &AlgebraHom, k: &FieldValuedForm) -> Result<Option<FieldValuedForm>> {
    let omf = omega_functor(src, dst, f, k.degree())?;
    let mut delta = Vec::with_capacity(dst.m());
    for i in 0..dst.m() {
        let target = dst.algebra().basis_coords(i);
        let Some((pre, _)) = solve_linear(f.matrix(), &target)? else {
            return Err(Error::InvalidHom("push forward needs a surjective homomorphism".into()));
        };
        delta.push(push(src, dst, &omf, &k.on_exact(&pre))?);
    }
    let Ok(candidate) = FieldValuedForm::new(dst, k.degree(), delta) else {
        return Ok(None);
    };
    Ok(f_related(src, dst, f, k, &candidate)?.then_some(candidate))
}

fn ops_related(src: &Omega, dst: &Omega, f: &AlgebraHom, a: &GradedOp, b: &GradedOp, n: usize) -> Result<bool> {
    for j in 0..=n {
        let Ok(target) = usize::try_from(j as i64 + a.degree()) else { continue };
        let (fj, ft) = (omega_functor(src, dst, f, j)?, omega_functor(src, dst, f, target)?);
        for idx in 0..src.check_dim(j)? {
            let w = Form::basis(j, idx);
            let lhs = b.apply(dst, &push(src, dst, &fj, &w)?);
            let rhs = push(src, dst, &ft, &a.apply(src, &w))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Given two related pairs, relatedness of `j`, `L`, `[,]^Δ`, `j_{K_1}∘K_2` and the FN
/// bracket. Operator checks run on degrees `≤ n`.
pub fn naturality_checks(
    src: &Omega,
    dst: &Omega,
    f: &AlgebraHom,
    pair1: (&FieldValuedForm, &FieldValuedForm),
    pair2: (&FieldValuedForm, &FieldValuedForm),
    n: usize,
) -> Result<Vec<IdentityCheck>> {
    let ((k1, k1p), (k2, k2p)) = (pair1, pair2);
    let check = |name: &str, holds: bool| IdentityCheck { name: name.to_string(), holds };
    let mut out =
        vec![check("K1, K1' related", f_related(src, dst, f, k1, k1p)?), check("K2, K2' related", f_related(src, dst, f, k2, k2p)?)];
    out.push(check("j_K'∘Ω(f) = Ω(f)∘j_K", ops_related(src, dst, f, &GradedOp::j(k1.clone()), &GradedOp::j(k1p.clone()), n)?));
    out.push(check("L_K'∘Ω(f) = Ω(f)∘L_K", ops_related(src, dst, f, &GradedOp::l(k1.clone()), &GradedOp::l(k1p.clone()), n)?));
    if k1.degree() > 0 && k2.degree() > 0 {
        let (a, b) = (algebraic_bracket(src, k1, k2)?, algebraic_bracket(dst, k1p, k2p)?);
        out.push(check("[K1,K2]^D related", f_related(src, dst, f, &a, &b)?));
    }
    if k1.degree() + k2.degree() > 0 {
        let (a, b) = (compose_contraction(src, k1, k2)?, compose_contraction(dst, k1p, k2p)?);
        out.push(check("j_K1∘K2 related", f_related(src, dst, f, &a, &b)?));
    }
    let (a, b) = (fn_bracket(src, k1, k2), fn_bracket(dst, k1p, k2p));
    out.push(check("[K1,K2] related", f_related(src, dst, f, &a, &b)?));
    Ok(out)
}
