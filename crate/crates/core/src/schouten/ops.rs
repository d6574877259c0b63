use itertools::Itertools;
use num_traits::Zero;

use super::{inversions, MultiMap, Values};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

fn product_values(phi: &MultiMap, psi: &MultiMap) -> Result<Values> {
    if phi.algebra() != psi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(match (phi.values(), psi.values()) {
        (Values::Scalar, Values::Scalar) => Values::Scalar,
        _ => Values::Algebra,
    })
}

/// Product of two values: scalars multiply, scalars scale, algebra elements multiply in `A`.
fn mul_values(phi: &MultiMap, x: &[Scalar], psi: &MultiMap, y: &[Scalar]) -> Vec<Scalar> {
    match (phi.values(), psi.values()) {
        (Values::Scalar, Values::Scalar) => vec![&x[0] * &y[0]],
        (Values::Scalar, Values::Algebra) => y.iter().map(|v| &x[0] * v).collect(),
        (Values::Algebra, Values::Scalar) => x.iter().map(|v| v * &y[0]).collect(),
        (Values::Algebra, Values::Algebra) => phi.algebra().mul_coords(x, y),
    }
}

fn add_into(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Splits positions `0..n` into an increasing `k`-subset followed by its complement.
fn shuffles(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>, Scalar)> {
    (0..n)
        .combinations(k)
        .map(|s| {
            let rest: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
            let perm: Vec<usize> = s.iter().chain(&rest).copied().collect();
            let sign = scalar::sign(inversions(&perm) as i64);
            (s, rest, sign)
        })
        .collect()
}

fn pick(v: &[usize], idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| v[i]).collect()
}

/// `(φ∧ψ)(v_1,…,v_{k+l}) = (1/k!l!) Σ_σ sign σ φ(v_σ1,…,v_σk)ψ(v_σ(k+1),…)`.
pub fn wedge(phi: &MultiMap, psi: &MultiMap) -> Result<MultiMap> {
    if phi.is_skew() && psi.is_skew() {
        wedge_shuffle(phi, psi)
    } else {
        wedge_full(phi, psi)
    }
}

fn wedge_shuffle(phi: &MultiMap, psi: &MultiMap) -> Result<MultiMap> {
    let values = product_values(phi, psi)?;
    let (k, l) = (phi.arity(), psi.arity());
    let sh = shuffles(k + l, k);
    let w = super::value_dim(phi.algebra(), values);
    MultiMap::from_increasing(phi.algebra(), k + l, values, |v| {
        let mut acc = vec![Scalar::zero(); w];
        for (s, rest, sign) in &sh {
            add_into(&mut acc, sign, &mul_values(phi, phi.eval(&pick(v, s)), psi, psi.eval(&pick(v, rest))));
        }
        acc
    })
}

pub(crate) fn wedge_full(phi: &MultiMap, psi: &MultiMap) -> Result<MultiMap> {
    let values = product_values(phi, psi)?;
    let (k, l) = (phi.arity(), psi.arity());
    let n = k + l;
    let norm = scalar::factorial(k) * scalar::factorial(l);
    let perms: Vec<(Vec<usize>, Scalar)> = (0..n).permutations(n).map(|p| (p.clone(), scalar::sign(inversions(&p) as i64))).collect();
    let w = super::value_dim(phi.algebra(), values);
    MultiMap::from_fn(phi.algebra(), n, values, |v| {
        let mut acc = vec![Scalar::zero(); w];
        for (p, sign) in &perms {
            let t = pick(v, p);
            add_into(&mut acc, sign, &mul_values(phi, phi.eval(&t[..k]), psi, psi.eval(&t[k..])));
        }
        acc.into_iter().map(|x| x / &norm).collect()
    })
}

fn check_insertable(k: &MultiMap, phi: &MultiMap) -> Result<()> {
    if k.values() != Values::Algebra {
        return Err(Error::Input("only A-valued maps can be inserted".into()));
    }
    if k.arity() == 0 {
        return Err(Error::Degree("insertion needs a map of arity at least 1".into()));
    }
    if k.algebra() != phi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// `Σ_e K(…)_e Φ(e, rest)`.
fn insert_value(phi: &MultiMap, kv: &[Scalar], rest: &[usize], acc: &mut [Scalar], sign: &Scalar) {
    let mut tuple = Vec::with_capacity(rest.len() + 1);
    for (e, c) in kv.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        tuple.clear();
        tuple.push(e);
        tuple.extend_from_slice(rest);
        add_into(acc, &(sign * c), phi.eval(&tuple));
    }
}

/// `(i_KΦ)(v_1,…,v_{k+p}) = (1/(k+1)!(p−1)!) Σ_σ sign σ Φ(K(v_σ1,…,v_σ(k+1)), v_σ(k+2),…)`;
/// zero when `Φ` has arity 0.
pub fn insertion(k: &MultiMap, phi: &MultiMap) -> Result<MultiMap> {
    check_insertable(k, phi)?;
    if phi.arity() == 0 {
        return MultiMap::zero(phi.algebra(), k.arity() - 1, phi.values());
    }
    if k.is_skew() && phi.is_skew() {
        insertion_shuffle(k, phi)
    } else {
        insertion_full(k, phi)
    }
}

fn insertion_shuffle(k: &MultiMap, phi: &MultiMap) -> Result<MultiMap> {
    let (a, p) = (k.arity(), phi.arity());
    let n = a - 1 + p;
    let sh = shuffles(n, a);
    let w = phi.value_dim();
    MultiMap::from_increasing(phi.algebra(), n, phi.values(), |v| {
        let mut acc = vec![Scalar::zero(); w];
        for (s, rest, sign) in &sh {
            insert_value(phi, k.eval(&pick(v, s)), &pick(v, rest), &mut acc, sign);
        }
        acc
    })
}

pub(crate) fn insertion_full(k: &MultiMap, phi: &MultiMap) -> Result<MultiMap> {
    check_insertable(k, phi)?;
    let (a, p) = (k.arity(), phi.arity());
    if p == 0 {
        return MultiMap::zero(phi.algebra(), a - 1, phi.values());
    }
    let n = a - 1 + p;
    let norm = scalar::factorial(a) * scalar::factorial(p - 1);
    let perms: Vec<(Vec<usize>, Scalar)> = (0..n).permutations(n).map(|q| (q.clone(), scalar::sign(inversions(&q) as i64))).collect();
    let w = phi.value_dim();
    MultiMap::from_fn(phi.algebra(), n, phi.values(), |v| {
        let mut acc = vec![Scalar::zero(); w];
        for (q, sign) in &perms {
            let t = pick(v, q);
            insert_value(phi, k.eval(&t[..a]), &t[a..], &mut acc, sign);
        }
        acc.into_iter().map(|x| x / &norm).collect()
    })
}

/// `[K, L]^∧ = i_K L − (−1)^{kl} i_L K` for `K` of arity `k+1`, `L` of arity `l+1`.
pub fn nr_bracket(k: &MultiMap, l: &MultiMap) -> Result<MultiMap> {
    if l.values() != Values::Algebra {
        return Err(Error::Input("the bracket is defined on A-valued maps".into()));
    }
    let s = scalar::sign(k.degree() * l.degree());
    insertion(k, l)?.sub(&insertion(l, k)?.scale(&s))
}

/// `[i_K, i_L]Φ = i_K i_L Φ − (−1)^{kl} i_L i_K Φ`.
pub fn graded_commutator_insertion(k: &MultiMap, l: &MultiMap, phi: &MultiMap) -> Result<MultiMap> {
    let s = scalar::sign(k.degree() * l.degree());
    insertion(k, &insertion(l, phi)?)?.sub(&insertion(l, &insertion(k, phi)?)?.scale(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::linalg::Matrix;
    use crate::random::{small_vector, trial_rng};
    use std::sync::Arc;

    fn rand(a: &Arc<crate::Algebra>, arity: usize, values: Values, seed: u64, i: u64) -> MultiMap {
        MultiMap::random_skew(a, arity, values, &mut trial_rng(seed, i)).unwrap()
    }

    #[test]
    fn wedge_of_covectors() {
        let a = builtins::truncpoly(3);
        let phi = MultiMap::covector(&a, &small_vector(&mut trial_rng(2, 0), 3)).unwrap();
        let psi = MultiMap::covector(&a, &small_vector(&mut trial_rng(2, 1), 3)).unwrap();
        let w = wedge(&phi, &psi).unwrap();
        for v in 0..3 {
            for u in 0..3 {
                let expected = &phi.eval(&[v])[0] * &psi.eval(&[u])[0] - &phi.eval(&[u])[0] * &psi.eval(&[v])[0];
                assert_eq!(w.eval(&[v, u])[0], expected);
            }
        }
        assert!(wedge(&phi, &phi).unwrap().is_zero());
        let odd = rand(&a, 3, Values::Scalar, 2, 2);
        assert!(wedge(&odd, &odd).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative() {
        let a = builtins::matrix(2);
        for (i, (p, q, r)) in [(1, 1, 1), (1, 2, 1), (0, 2, 2)].into_iter().enumerate() {
            let i = i as u64 * 3;
            for values in [Values::Scalar, Values::Algebra] {
                let (x, y, z) = (rand(&a, p, values, 4, i), rand(&a, q, values, 4, i + 1), rand(&a, r, values, 4, i + 2));
                let lhs = wedge(&wedge(&x, &y).unwrap(), &z).unwrap();
                let rhs = wedge(&x, &wedge(&y, &z).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
            let (x, y) = (rand(&a, p, Values::Scalar, 5, i), rand(&a, q, Values::Scalar, 5, i + 1));
            let s = scalar::sign((p * q) as i64);
            assert_eq!(wedge(&x, &y).unwrap(), wedge(&y, &x).unwrap().scale(&s));
        }
    }

    #[test]
    fn shuffle_sums_match_full_sums() {
        let a = builtins::upper(2);
        for (i, (p, q)) in [(1, 1), (1, 2), (2, 2), (0, 3)].into_iter().enumerate() {
            let i = i as u64 * 2;
            let (x, y) = (rand(&a, p, Values::Algebra, 6, i), rand(&a, q, Values::Algebra, 6, i + 1));
            assert_eq!(wedge_shuffle(&x, &y).unwrap(), wedge_full(&x, &y).unwrap());
            if p >= 1 {
                assert_eq!(insertion_shuffle(&x, &y).unwrap(), insertion_full(&x, &y).unwrap());
            }
            if p >= 1 && q >= 1 {
                let s = rand(&a, q, Values::Scalar, 6, i + 10);
                assert_eq!(insertion_shuffle(&x, &s).unwrap(), insertion_full(&x, &s).unwrap());
            }
        }
    }

    #[test]
    fn degree_zero_insertion_is_composition() {
        let a = builtins::matrix(2);
        let k = MultiMap::linear(&a, &Matrix::from_i64(4, 4, &[0, 1, 0, 0, 2, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, -1])).unwrap();
        let phi = MultiMap::covector(&a, &small_vector(&mut trial_rng(3, 0), 4)).unwrap();
        let ik = insertion(&k, &phi).unwrap();
        for v in 0..4 {
            let kv = k.eval(&[v]);
            let expected: Scalar = kv.iter().enumerate().map(|(e, c)| c * &phi.eval(&[e])[0]).sum();
            assert_eq!(ik.eval(&[v])[0], expected);
        }
        let constant = MultiMap::new(a.clone(), 0, Values::Scalar, vec![scalar::one()]).unwrap();
        let out = insertion(&k, &constant).unwrap();
        assert!(out.is_zero() && out.arity() == 0);
    }

    #[test]
    fn insertion_is_a_graded_derivation() {
        let a = builtins::upper(2);
        for (i, (ka, p, q)) in [(1, 1, 1), (2, 1, 1), (2, 1, 2), (1, 2, 1)].into_iter().enumerate() {
            let i = i as u64 * 3;
            let k = rand(&a, ka, Values::Algebra, 7, i);
            let (phi, psi) = (rand(&a, p, Values::Scalar, 7, i + 1), rand(&a, q, Values::Scalar, 7, i + 2));
            let lhs = insertion(&k, &wedge(&phi, &psi).unwrap()).unwrap();
            let s = scalar::sign(k.degree() * p as i64);
            let rhs = wedge(&insertion(&k, &phi).unwrap(), &psi)
                .unwrap()
                .add(&wedge(&phi, &insertion(&k, &psi).unwrap()).unwrap().scale(&s))
                .unwrap();
            assert_eq!(lhs, rhs, "arities {ka} {p} {q}");
            assert_eq!(lhs.arity(), ka - 1 + p + q);
        }
    }

    #[test]
    fn bracket_of_linear_maps() {
        let a = builtins::truncpoly(3);
        let (x, y) = (rand(&a, 1, Values::Algebra, 8, 0), rand(&a, 1, Values::Algebra, 8, 1));
        let (mx, my) = (x.as_matrix().unwrap(), y.as_matrix().unwrap());
        // i_K L = L∘K, so the bracket is L∘K − K∘L
        let expected = my.mul(&mx).unwrap().sub(&mx.mul(&my).unwrap()).unwrap();
        assert_eq!(nr_bracket(&x, &y).unwrap().as_matrix().unwrap(), expected);
    }

    #[test]
    fn bracket_antisymmetry_jacobi_and_insertion_identity() {
        let a = builtins::matrix(2);
        for (i, (p, q, r)) in [(1, 1, 2), (2, 2, 1), (2, 2, 2), (1, 3, 2)].into_iter().enumerate() {
            let i = i as u64 * 4;
            let (k, l, n) =
                (rand(&a, p, Values::Algebra, 9, i), rand(&a, q, Values::Algebra, 9, i + 1), rand(&a, r, Values::Algebra, 9, i + 2));
            let (dk, dl) = (k.degree(), l.degree());
            let kl = nr_bracket(&k, &l).unwrap();
            assert_eq!(kl, nr_bracket(&l, &k).unwrap().scale(&-scalar::sign(dk * dl)));
            let lhs = nr_bracket(&k, &nr_bracket(&l, &n).unwrap()).unwrap();
            let rhs = nr_bracket(&kl, &n)
                .unwrap()
                .add(&nr_bracket(&l, &nr_bracket(&k, &n).unwrap()).unwrap().scale(&scalar::sign(dk * dl)))
                .unwrap();
            assert_eq!(lhs, rhs, "jacobi {p} {q} {r}");
            let phi = rand(&a, 2, Values::Scalar, 9, i + 3);
            assert_eq!(graded_commutator_insertion(&k, &l, &phi).unwrap(), insertion(&kl, &phi).unwrap(), "[i_K, i_L] {p} {q}");
        }
    }

    #[test]
    fn commutator_self_bracket() {
        for a in [builtins::matrix(2), builtins::upper(2)] {
            let mu = MultiMap::commutator(&a);
            let b = nr_bracket(&mu, &mu).unwrap();
            assert_eq!(b, insertion(&mu, &mu).unwrap().scale(&scalar::int(2)));
            assert!(b.is_zero());
        }
        let a = builtins::truncpoly(3);
        let mu = rand(&a, 2, Values::Algebra, 10, 0);
        assert!(!nr_bracket(&mu, &mu).unwrap().is_zero());
    }
}
