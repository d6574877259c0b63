use serde::Serialize;

use super::{algebraic_bracket, compose_contraction, fn_bracket, ops_agree, FieldValuedForm, GradedOp};
use crate::error::Result;
use crate::exec::Execution;
use crate::forms::Omega;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &str, holds: bool) -> IdentityCheck {
        IdentityCheck { name: name.to_string(), holds }
    }
}

fn deg(k: &FieldValuedForm) -> i64 {
    k.degree() as i64
}

fn combo(om: &Omega, terms: &[(Scalar, &FieldValuedForm)]) -> Result<FieldValuedForm> {
    let mut out = FieldValuedForm::zero(om, terms[0].1.degree());
    for (c, f) in terms {
        out = out.add(&f.scale(c))?;
    }
    Ok(out)
}

/// `[L_K, j_L]` for `K ∈ Ω^1_k`, `L ∈ Ω^1_{ℓ+1}`, and `[j_L, L_K]` with both signs on its
/// last term; only the `+` sign holds.
pub fn check_lie_contraction(
    om: &Omega,
    k: &FieldValuedForm,
    l: &FieldValuedForm,
    n: usize,
    exec: Execution,
) -> Result<Vec<IdentityCheck>> {
    let (kd, ld) = (deg(k), deg(l) - 1);
    let (lk, jl) = (GradedOp::l(k.clone()), GradedOp::j(l.clone()));
    let jlk = compose_contraction(om, l, k)?;
    let l_jlk = GradedOp::l(jlk);

    let lhs = GradedOp::commutator(&lk, &jl);
    let rhs = GradedOp::lin(vec![(scalar::one(), GradedOp::j(fn_bracket(om, k, l))), (-scalar::sign(kd * ld), l_jlk.clone())])?;
    let first = ops_agree(om, &lhs, &rhs, n, exec)?;

    let lhs2 = GradedOp::commutator(&jl, &lk);
    let j_lk = GradedOp::j(fn_bracket(om, l, k));
    let minus = GradedOp::lin(vec![(scalar::one(), l_jlk.clone()), (-scalar::sign(kd), j_lk.clone())])?;
    let flipped = GradedOp::lin(vec![(scalar::one(), l_jlk), (scalar::sign(kd), j_lk)])?;
    Ok(vec![
        IdentityCheck::new("[L_K, j_L] = j([K,L]) - (-1)^{kl} L(j_L o K)", first),
        IdentityCheck::new("[j_L, L_K] = L(j_L o K) - (-1)^k j([L,K])", ops_agree(om, &lhs2, &minus, n, exec)?),
        IdentityCheck::new("[j_L, L_K] = L(j_L o K) + (-1)^k j([L,K])", ops_agree(om, &lhs2, &flipped, n, exec)?),
    ])
}

/// The three relations for `K_i ∈ Ω^1_{k_i}`, `L_i ∈ Ω^1_{k_i+1}`. Relation 2 is evaluated
/// with `L = L_1`; relation 3 with `K = K_1`.
pub fn check_sum_brackets(
    om: &Omega,
    k1: &FieldValuedForm,
    k2: &FieldValuedForm,
    l1: &FieldValuedForm,
    l2: &FieldValuedForm,
    n: usize,
    exec: Execution,
) -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        IdentityCheck::new("[L_K1 + j_L1, L_K2 + j_L2] = L(...) + j(...)", relation_1(om, k1, k2, l1, l2, n, exec)?),
        IdentityCheck::new("j_L o [K1,K2] expansion", relation_2(om, l1, k1, k2, [1, 1, 1, 1])?),
        IdentityCheck::new("ad_K [L1,L2]^D expansion", relation_3(om, k1, l1, l2, [1, 1, 1, 1])?),
    ])
}

fn relation_1(
    om: &Omega,
    k1: &FieldValuedForm,
    k2: &FieldValuedForm,
    l1: &FieldValuedForm,
    l2: &FieldValuedForm,
    n: usize,
    exec: Execution,
) -> Result<bool> {
    let s = scalar::sign(deg(k1) * deg(k2));
    let a = GradedOp::l(k1.clone()).plus(&GradedOp::j(l1.clone()))?;
    let b = GradedOp::l(k2.clone()).plus(&GradedOp::j(l2.clone()))?;
    let lhs = GradedOp::commutator(&a, &b);
    let lie_part = combo(
        om,
        &[
            (scalar::one(), &fn_bracket(om, k1, k2)),
            (scalar::one(), &compose_contraction(om, l1, k2)?),
            (-s.clone(), &compose_contraction(om, l2, k1)?),
        ],
    )?;
    let alg_part = combo(
        om,
        &[(scalar::one(), &algebraic_bracket(om, l1, l2)?), (scalar::one(), &fn_bracket(om, k1, l2)), (-s, &fn_bracket(om, k2, l1))],
    )?;
    let rhs = GradedOp::l(lie_part).plus(&GradedOp::j(alg_part))?;
    ops_agree(om, &lhs, &rhs, n, exec)
}

/// `j_L∘[K1,K2] = [j_L∘K1, K2] + ε_0 (−1)^{k_1ℓ}[K1, j_L∘K2]
///   − (ε_1 (−1)^{k_1ℓ} j(ad_{K1}L)∘K2 − ε_2 (−1)^{(k_1+ℓ)k_2} j(ad_{K2}L)∘K1)`, with `ε_3` on
/// the first right-hand term. `eps = [1; 4]` is the relation itself.
pub(crate) fn relation_2(om: &Omega, l: &FieldValuedForm, k1: &FieldValuedForm, k2: &FieldValuedForm, eps: [i64; 4]) -> Result<bool> {
    let (ld, a, b) = (deg(l) - 1, deg(k1), deg(k2));
    let lhs = compose_contraction(om, l, &fn_bracket(om, k1, k2))?;
    let e = |i: usize| scalar::int(eps[i]);
    let rhs = combo(
        om,
        &[
            (e(3), &fn_bracket(om, &compose_contraction(om, l, k1)?, k2)),
            (e(0) * scalar::sign(a * ld), &fn_bracket(om, k1, &compose_contraction(om, l, k2)?)),
            (-e(1) * scalar::sign(a * ld), &compose_contraction(om, &fn_bracket(om, k1, l), k2)?),
            (e(2) * scalar::sign((a + ld) * b), &compose_contraction(om, &fn_bracket(om, k2, l), k1)?),
        ],
    )?;
    Ok(lhs == rhs)
}

/// `ad_K[L1,L2]^Δ = ε_3 [ad_K L1, L2]^Δ + ε_0 (−1)^{kk_1}[L1, ad_K L2]^Δ
///   − (ε_1 (−1)^{kk_1} ad(j_{L1}∘K)L2 − ε_2 (−1)^{(k+k_1)k_2} ad(j_{L2}∘K)L1)`.
pub(crate) fn relation_3(om: &Omega, k: &FieldValuedForm, l1: &FieldValuedForm, l2: &FieldValuedForm, eps: [i64; 4]) -> Result<bool> {
    let (kd, a, b) = (deg(k), deg(l1) - 1, deg(l2) - 1);
    let lhs = fn_bracket(om, k, &algebraic_bracket(om, l1, l2)?);
    let e = |i: usize| scalar::int(eps[i]);
    let rhs = combo(
        om,
        &[
            (e(3), &algebraic_bracket(om, &fn_bracket(om, k, l1), l2)?),
            (e(0) * scalar::sign(kd * a), &algebraic_bracket(om, l1, &fn_bracket(om, k, l2))?),
            (-e(1) * scalar::sign(kd * a), &fn_bracket(om, &compose_contraction(om, l1, k)?, l2)),
            (e(2) * scalar::sign((kd + a) * b), &fn_bracket(om, &compose_contraction(om, l2, k)?, l1)),
        ],
    )?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::derivations::{field_valued_space, random_fvf};
    use crate::random::trial_rng;

    fn sample(om: &Omega, degrees: &[usize], seed: u64) -> Vec<FieldValuedForm> {
        let mut rng = trial_rng(seed, 0);
        degrees
            .iter()
            .map(|&d| {
                let b = field_valued_space(om, d).ok();
                random_fvf(om, b.as_deref(), d, &mut rng)
            })
            .collect()
    }

    fn signs(bits: usize) -> [i64; 4] {
        [0, 1, 2, 3].map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
    }

    #[test]
    fn swapped_form_needs_plus() {
        let om = Omega::new(builtins::truncpoly(3));
        let mut minus_failed = false;
        for (ds, seed) in [([1usize, 2], 1u64), ([2, 2], 2), ([0, 2], 3), ([1, 3], 4)] {
            let f = sample(&om, &ds, seed);
            let r = check_lie_contraction(&om, &f[0], &f[1], 2, Execution::Parallel).unwrap();
            assert!(r[0].holds && r[2].holds);
            minus_failed |= !r[1].holds;
        }
        assert!(minus_failed);
    }

    #[test]
    fn sum_brackets_on_dual_numbers() {
        let om = Omega::new(builtins::dual());
        for (ds, seed) in [([1usize, 1, 2, 2], 5u64), ([1, 2, 2, 3], 6), ([0, 1, 1, 2], 7)] {
            let f = sample(&om, &ds, seed);
            for c in check_sum_brackets(&om, &f[0], &f[1], &f[2], &f[3], 3, Execution::Parallel).unwrap() {
                assert!(c.holds, "{}", c.name);
            }
        }
    }

    #[test]
    fn matrix_algebra_identities() {
        let om = Omega::new(builtins::matrix(2));
        let f = sample(&om, &[1, 1, 2, 2], 8);
        let r = check_lie_contraction(&om, &f[0], &f[2], 2, Execution::Parallel).unwrap();
        assert!(r[0].holds && r[2].holds && !r[1].holds);
        for c in check_sum_brackets(&om, &f[0], &f[1], &f[2], &f[3], 2, Execution::Parallel).unwrap() {
            assert!(c.holds, "{}", c.name);
        }
    }

    #[test]
    fn stated_signs_are_the_only_ones() {
        let om = Omega::new(builtins::truncpoly(3));
        let f = sample(&om, &[1, 2, 2, 3], 2);
        for bits in 1..16 {
            assert!(!relation_2(&om, &f[2], &f[0], &f[1], signs(bits)).unwrap());
            assert!(!relation_3(&om, &f[0], &f[2], &f[3], signs(bits)).unwrap());
        }
    }
}
