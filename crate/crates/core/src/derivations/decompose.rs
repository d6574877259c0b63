use super::op::GradedDerivation;
use super::{ops_agree, FieldValuedForm, GradedOp};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::forms::{Form, Omega};
use crate::scalar;

/// First basis pair `(p, a, q, b)` with `p + q ≤ n` where graded Leibniz fails.
pub fn is_graded_derivation(om: &Omega, op: &GradedOp, n: usize, exec: Execution) -> Result<Option<(usize, usize, usize, usize)>> {
    let k = op.degree();
    for p in 0..=n {
        for q in 0..=n - p {
            let (dp, dq) = (om.check_dim(p)?, om.check_dim(q)?);
            let s = scalar::sign(k * p as i64);
            let bad = exec.map_range(dp * dq, |ab| {
                let (a, b) = (ab / dq, ab % dq);
                let (f, g) = (Form::basis(p, a), Form::basis(q, b));
                let lhs = op.apply(om, &om.mul(&f, &g));
                let mut rhs = om.mul(&op.apply(om, &f), &g);
                let right = om.mul(&f, &op.apply(om, &g));
                let ok = if lhs.degree() != rhs.degree() || rhs.degree() != right.degree() {
                    // operator of negative degree on Ω_0: every term is zero
                    lhs.is_zero() && rhs.is_zero() && right.is_zero()
                } else {
                    rhs.axpy(&s, &right);
                    lhs == rhs
                };
                (!ok).then_some(ab)
            });
            if let Some(ab) = bad.into_iter().flatten().next() {
                return Ok(Some((p, ab / dq, q, ab % dq)));
            }
        }
    }
    Ok(None)
}

/// `D = L_K + j_L` with `K` absent for degree −1.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub k: Option<FieldValuedForm>,
    pub l: FieldValuedForm,
    /// `L_K + j_L` agrees with `D` on degrees `≤ N`.
    pub reconstructs: bool,
    /// `[D, d] = 0` on degrees `≤ N − 1`.
    pub commutes_with_d: bool,
}

pub fn decompose_derivation(om: &Omega, d: &GradedDerivation, exec: Execution) -> Result<Decomposition> {
    let n = d.truncation();
    if n == 0 {
        return Err(Error::Degree("decomposition needs the operator on Ω_1".into()));
    }
    if d.degree < -1 {
        return Err(Error::Degree(format!("graded derivations of Ω have degree ≥ −1, got {}", d.degree)));
    }
    let op = d.op();
    if let Some((p, a, q, b)) = is_graded_derivation(om, &op, n, exec)? {
        return Err(Error::NotGradedDerivation(format!("Leibniz fails on {} ⊗ {}", om.label(p, a), om.label(q, b))));
    }
    let k = if d.degree >= 0 {
        let delta = (0..om.m()).map(|i| op.apply(om, &Form::basis(0, i))).collect();
        Some(FieldValuedForm::new(om, d.degree as usize, delta).map_err(|e| Error::NotGradedDerivation(e.to_string()))?)
    } else {
        None
    };
    let rest = match &k {
        Some(k) => op.minus(&GradedOp::l(k.clone()))?,
        None => op.clone(),
    };
    let l_degree = (d.degree + 1) as usize;
    let delta = (0..om.m()).map(|i| rest.apply(om, &om.d(&Form::basis(0, i)))).collect();
    let l = FieldValuedForm::new(om, l_degree, delta).map_err(|e| Error::NotGradedDerivation(e.to_string()))?;
    let rebuilt = match &k {
        Some(k) => GradedOp::l(k.clone()).plus(&GradedOp::j(l.clone()))?,
        None => GradedOp::j(l.clone()),
    };
    let reconstructs = ops_agree(om, &rebuilt, &op, n, exec)?;
    let commutator = GradedOp::commutator(&op, &GradedOp::D);
    let commutes_with_d = ops_agree(om, &commutator, &GradedOp::zero(commutator.degree()), n - 1, exec)?;
    Ok(Decomposition { k, l, reconstructs, commutes_with_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::derivations::{field_valued_space, random_fvf};
    use crate::random::trial_rng;

    #[test]
    fn d_decomposes_as_identity() {
        let om = Omega::new(builtins::dual());
        let d = GradedOp::D.materialize(&om, 3).unwrap();
        let dec = decompose_derivation(&om, &d, Execution::Sequential).unwrap();
        assert_eq!(dec.k.unwrap(), FieldValuedForm::identity(&om));
        assert!(dec.l.is_zero() && dec.reconstructs && dec.commutes_with_d);
    }

    #[test]
    fn algebraic_has_no_k_part() {
        let om = Omega::new(builtins::truncpoly(3));
        let m = field_valued_space(&om, 2).unwrap().remove(1);
        let d = GradedOp::j(m.clone()).materialize(&om, 2).unwrap();
        let dec = decompose_derivation(&om, &d, Execution::Sequential).unwrap();
        assert!(dec.k.unwrap().is_zero());
        assert_eq!(dec.l, m);
    }

    #[test]
    fn round_trip_random() {
        let om = Omega::new(builtins::dual());
        let b1 = field_valued_space(&om, 1).unwrap();
        let b2 = field_valued_space(&om, 2).unwrap();
        for t in 0..4 {
            let mut rng = trial_rng(7, t);
            let k = random_fvf(&om, Some(&b1), 1, &mut rng);
            let l = random_fvf(&om, Some(&b2), 2, &mut rng);
            let op = GradedOp::l(k.clone()).plus(&GradedOp::j(l.clone())).unwrap();
            let dec = decompose_derivation(&om, &op.materialize(&om, 2).unwrap(), Execution::Sequential).unwrap();
            assert_eq!(dec.k.unwrap(), k);
            assert_eq!(dec.l.is_zero(), dec.commutes_with_d);
            assert_eq!(dec.l, l);
        }
    }

    #[test]
    fn rejects_non_derivation() {
        let om = Omega::new(builtins::dual());
        // 2·id on Ω_0 and id elsewhere is not a derivation
        let mut t = GradedOp::D.materialize(&om, 1).unwrap();
        t.degree = 0;
        t.maps = vec![crate::Matrix::identity(2).scale(&scalar::int(2)), crate::Matrix::identity(2)];
        assert!(matches!(decompose_derivation(&om, &t, Execution::Sequential), Err(Error::NotGradedDerivation(_))));
    }
}
