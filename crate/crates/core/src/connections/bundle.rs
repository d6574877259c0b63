use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::{integrable_distribution, Distribution, Projection};
use crate::algebra::Algebra;
use crate::derivations::{f_related, fn_bracket, FieldValuedForm};
use crate::error::{Error, Result};
use crate::forms::{omega_functor, Form, Omega};
use crate::group::GroupAction;
use crate::linalg::{SpanBuilder, Subspace};
use crate::scalar::Scalar;

/// An algebra with a unital subalgebra `B`, optionally `B = A^G` for a finite group action.
#[derive(Debug, Clone)]
pub struct Bundle {
    algebra: Arc<Algebra>,
    base: Subspace,
    action: Option<GroupAction>,
}

impl Bundle {
    pub fn new(algebra: Arc<Algebra>, base: Subspace) -> Result<Bundle> {
        if base.ambient_dim() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: base.ambient_dim() });
        }
        if !base.contains(&algebra.unit_coords())? || !algebra.is_subalgebra(&base)? {
            return Err(Error::Input("bundle base must be a subalgebra containing 1".into()));
        }
        Ok(Bundle { algebra, base, action: None })
    }

    /// `B = A^G`.
    pub fn from_action(action: GroupAction) -> Bundle {
        let base = action.fixed_subalgebra();
        Bundle { algebra: action.algebra().clone(), base, action: Some(action) }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn base(&self) -> &Subspace {
        &self.base
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    /// `Ω^hor_1`, the bimodule generated by `d(B)`.
    pub fn horizontal_one_forms(&self, om: &Omega) -> Result<Distribution> {
        integrable_distribution(om, &self.base)
    }
}

/// `Ω^hor_k`: degree 0 is `A`, degree 1 is `Ω^hor_1`, and `Ω^hor_k = Ω^hor_1·Ω^hor_{k−1}`.
pub fn horizontal_forms(om: &Omega, bundle: &Bundle, k: usize) -> Result<Subspace> {
    let dim = om.check_dim(k)?;
    if k == 0 {
        return Ok(Subspace::full(dim));
    }
    let one = bundle.horizontal_one_forms(om)?;
    let mut current = one.space().clone();
    let gens = one.forms(om);
    for r in 2..=k {
        let mut span = SpanBuilder::new(om.check_dim(r)?);
        for v in current.basis() {
            let w = om.from_dense(r - 1, v)?;
            for g in &gens {
                span.insert(om.to_dense(&om.mul(g, &w)));
            }
        }
        current = span.finish();
    }
    Ok(current)
}

/// Verdicts for a candidate connection `χ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionReport {
    pub idempotent: bool,
    pub image_is_horizontal: bool,
    pub is_connection: bool,
    /// `χ∘Ω_1(λ_g) = Ω_1(λ_g)∘χ` for all `g`; `None` without an action.
    pub principal: Option<bool>,
    /// `R = [χ,χ]` kills `Ω^hor_1`.
    pub curvature_kills_horizontal: bool,
    /// `R` takes values in `Ω^hor_2`.
    pub curvature_horizontal_values: bool,
    pub curvature_equivariant: Option<bool>,
}

pub fn connection_check(om: &Omega, bundle: &Bundle, chi: &FieldValuedForm) -> Result<ConnectionReport> {
    if chi.degree() != 1 {
        return Err(Error::Degree(format!("a connection lives in Ω^1_1, got degree {}", chi.degree())));
    }
    let hor = bundle.horizontal_one_forms(om)?;
    let (idempotent, image_is_horizontal) = match Projection::new(om, chi.clone()) {
        Ok(p) => (true, p.matrix().image() == *hor.space()),
        Err(Error::NotIdempotent) => (false, chi.matrix(om)?.image() == *hor.space()),
        Err(e) => return Err(e),
    };
    let r = fn_bracket(om, chi, chi);
    let hor2 = horizontal_forms(om, bundle, 2)?;
    let curvature_kills_horizontal = hor.forms(om).iter().all(|w| r.apply_one_form(om, w).is_zero());
    let mut curvature_horizontal_values = true;
    for idx in 0..om.dim(1) {
        let img = r.apply_one_form(om, &Form::basis(1, idx));
        curvature_horizontal_values &= hor2.contains(&om.to_dense(&img))?;
    }
    let (principal, curvature_equivariant) = match bundle.action() {
        Some(action) => {
            let (mut p, mut q) = (true, true);
            for g in 0..action.group().order() {
                let lg = action.map(g);
                p &= f_related(om, om, lg, chi, chi)?;
                q &= f_related(om, om, lg, &r, &r)?;
            }
            (Some(p), Some(q))
        }
        None => (None, None),
    };
    Ok(ConnectionReport {
        idempotent,
        image_is_horizontal,
        is_connection: idempotent && image_is_horizontal,
        principal,
        curvature_kills_horizontal,
        curvature_horizontal_values,
        curvature_equivariant,
    })
}

/// `Ω_k(λ_g)∘d = d∘Ω_{k−1}(λ_g)` for every `g` and `1 ≤ k ≤ n`.
pub fn lambda_commutes_with_d(om: &Omega, action: &GroupAction, n: usize) -> Result<bool> {
    for g in 0..action.group().order() {
        let lg = action.map(g);
        for k in 1..=n {
            let lhs = omega_functor(om, om, lg, k)?.mul(&om.d_matrix(k - 1)?)?;
            let rhs = om.d_matrix(k - 1)?.mul(&omega_functor(om, om, lg, k - 1)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `dim Ω_1 − dim Ω^hor_1 = dim(A⊗_B A) − dim A`, with `A⊗_B A` computed directly from
/// the balancing relations `xb⊗y − x⊗by`.
pub fn splitting_row_holds(om: &Omega, bundle: &Bundle) -> Result<bool> {
    let a = bundle.algebra();
    let m = a.dim();
    let mut rel = SpanBuilder::new(m * m);
    for b in bundle.base().basis() {
        for x in 0..m {
            for y in 0..m {
                let (xb, by) = (a.mul_coords(&a.basis_coords(x), b), a.mul_coords(b, &a.basis_coords(y)));
                let mut v = vec![Scalar::zero(); m * m];
                for (i, c) in xb.iter().enumerate() {
                    v[i * m + y] += c;
                }
                for (j, c) in by.iter().enumerate() {
                    v[x * m + j] -= c;
                }
                rel.insert(v);
            }
        }
    }
    let tensor_dim = m * m - rel.dim();
    let hor = bundle.horizontal_one_forms(om)?.dim();
    Ok(om.dim(1) + m == tensor_dim + hor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::linalg::Matrix;

    fn kk_swap() -> GroupAction {
        let kk = builtins::product(&builtins::field(), &builtins::field());
        GroupAction::new(kk, builtins::cyclic(2), vec![Matrix::identity(2), Matrix::from_i64(2, 2, &[1, 1, 0, -1])]).unwrap()
    }

    #[test]
    fn b_equals_a() {
        let a = builtins::truncpoly(3);
        let om = Omega::new(a.clone());
        let bundle = Bundle::new(a, Subspace::full(3)).unwrap();
        assert!(horizontal_forms(&om, &bundle, 1).unwrap().is_full());
        let rep = connection_check(&om, &bundle, &FieldValuedForm::identity(&om)).unwrap();
        assert!(rep.is_connection && rep.curvature_kills_horizontal && rep.curvature_horizontal_values);
        assert!(fn_bracket(&om, &FieldValuedForm::identity(&om), &FieldValuedForm::identity(&om)).is_zero());
        assert!(splitting_row_holds(&om, &bundle).unwrap());
    }

    #[test]
    fn swap_on_kk() {
        let bundle = Bundle::from_action(kk_swap());
        let om = Omega::new(bundle.algebra().clone());
        assert_eq!(bundle.base().dim(), 1);
        assert_eq!(horizontal_forms(&om, &bundle, 1).unwrap().dim(), 0);
        let rep = connection_check(&om, &bundle, &FieldValuedForm::zero(&om, 1)).unwrap();
        assert!(rep.is_connection);
        assert_eq!(rep.principal, Some(true));
        assert_eq!(rep.curvature_equivariant, Some(true));
        let id = connection_check(&om, &bundle, &FieldValuedForm::identity(&om)).unwrap();
        assert!(id.idempotent && !id.image_is_horizontal && !id.is_connection);
        assert!(lambda_commutes_with_d(&om, bundle.action().unwrap(), 3).unwrap());
        assert!(splitting_row_holds(&om, &bundle).unwrap());
    }

    #[test]
    fn non_idempotent_distinguished() {
        let a = builtins::dual();
        let om = Omega::new(a.clone());
        let bundle = Bundle::new(a, Subspace::full(2)).unwrap();
        let two = FieldValuedForm::identity(&om).scale(&crate::scalar::int(2));
        let rep = connection_check(&om, &bundle, &two).unwrap();
        assert!(!rep.idempotent && rep.image_is_horizontal && !rep.is_connection);
    }

    #[test]
    fn group_algebra_trivial_action() {
        let a = builtins::group_algebra(&builtins::cyclic(2));
        let om = Omega::new(a.clone());
        let action = GroupAction::new(a, builtins::cyclic(2), vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
        let bundle = Bundle::from_action(action);
        assert!(bundle.base().is_full());
        let rep = connection_check(&om, &bundle, &FieldValuedForm::identity(&om)).unwrap();
        assert!(rep.is_connection && rep.principal == Some(true));
    }

    #[test]
    fn rejects_non_subalgebra() {
        let a = builtins::truncpoly(3);
        let x = Subspace::from_generators(3, vec![a.basis_coords(0), a.basis_coords(1)]);
        assert!(Bundle::new(a, x).is_err());
    }
}
