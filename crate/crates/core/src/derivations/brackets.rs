use super::{FieldValuedForm, GradedOp};
use crate::error::{Error, Result};
use crate::forms::{Form, Omega};
use crate::scalar;

fn by_delta(om: &Omega, degree: usize, f: impl Fn(usize) -> Form) -> FieldValuedForm {
    let mut delta = vec![Form::zero(degree)];
    delta.extend((1..om.m()).map(|i| {
        let v = f(i);
        debug_assert_eq!(v.degree(), degree);
        v
    }));
    FieldValuedForm::new_unchecked(degree, delta)
}

/// `[K, L]^Δ = j_K∘L − (−1)^{kl} j_L∘K` for `K ∈ Ω^1_{k+1}`, `L ∈ Ω^1_{l+1}`.
pub fn algebraic_bracket(om: &Omega, k: &FieldValuedForm, l: &FieldValuedForm) -> Result<FieldValuedForm> {
    if k.degree() == 0 || l.degree() == 0 {
        return Err(Error::Degree("fields have no algebraic bracket".into()));
    }
    let (kd, ld) = (k.degree() as i64 - 1, l.degree() as i64 - 1);
    let s = scalar::sign(kd * ld);
    let (jk, jl) = (GradedOp::j(k.clone()), GradedOp::j(l.clone()));
    let degree = k.degree() + l.degree() - 1;
    Ok(by_delta(om, degree, |i| {
        let mut v = jk.apply(om, l.delta(i));
        v.axpy(&-s.clone(), &jl.apply(om, k.delta(i)));
        v
    }))
}

/// The Frölicher-Nijenhuis bracket, `delta_{[K,L]} = L_K∘delta_L − (−1)^{kl} L_L∘delta_K`.
pub fn fn_bracket(om: &Omega, k: &FieldValuedForm, l: &FieldValuedForm) -> FieldValuedForm {
    let s = scalar::sign((k.degree() * l.degree()) as i64);
    let (lk, ll) = (GradedOp::l(k.clone()), GradedOp::l(l.clone()));
    by_delta(om, k.degree() + l.degree(), |i| {
        let mut v = lk.apply(om, l.delta(i));
        v.axpy(&-s.clone(), &ll.apply(om, k.delta(i)));
        v
    })
}

/// `j_L∘K`, of degree `deg K + deg L − 1`.
pub fn compose_contraction(om: &Omega, l: &FieldValuedForm, k: &FieldValuedForm) -> Result<FieldValuedForm> {
    if k.degree() + l.degree() == 0 {
        return Err(Error::Degree("j_X∘Y of two fields has negative degree".into()));
    }
    let jl = GradedOp::j(l.clone());
    let degree = k.degree() + l.degree() - 1;
    Ok(by_delta(om, degree, |i| {
        let v = jl.apply(om, k.delta(i));
        if v.degree() == degree {
            v
        } else {
            Form::zero(degree)
        }
    }))
}

/// `[X, Y] = X∘Y − Y∘X` on `A`.
pub fn lie_bracket_fields(om: &Omega, x: &FieldValuedForm, y: &FieldValuedForm) -> Result<FieldValuedForm> {
    if x.degree() != 0 || y.degree() != 0 {
        return Err(Error::Degree("the Lie bracket of fields needs two degree-0 forms".into()));
    }
    let apply = |f: &FieldValuedForm, v: &Form| {
        let mut out = Form::zero(0);
        for (idx, c) in v.terms() {
            out.axpy(c, f.delta(idx));
        }
        out
    };
    Ok(by_delta(om, 0, |i| apply(x, y.delta(i)).sub(&apply(y, x.delta(i)))))
}
