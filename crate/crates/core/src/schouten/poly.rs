use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::{nr_bracket, MultiMap, Values};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::limits;
use crate::linalg::Matrix;
use crate::random::small_vector;
use crate::scalar::{self, Scalar};

/// Value of `K` with slot `slot` filled by the element `x` and the others by `rest`.
fn eval_linear(k: &MultiMap, slot: usize, x: &[Scalar], rest: &[usize]) -> Vec<Scalar> {
    let mut acc = vec![Scalar::zero(); k.value_dim()];
    let mut tuple = rest.to_vec();
    tuple.insert(slot, 0);
    for (e, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        tuple[slot] = e;
        for (a, v) in acc.iter_mut().zip(k.eval(&tuple)) {
            *a += c * v;
        }
    }
    acc
}

/// `K(…, ab, …) − a·K(…, b, …) − K(…, a, …)·b` for all basis `a, b` and fillings of the
/// other slots, concatenated.
fn leibniz_defect(k: &MultiMap, slot: usize) -> Vec<Scalar> {
    let a = k.algebra();
    let m = a.dim();
    let mut out = Vec::new();
    let others = k.arity() - 1;
    for r in 0..m.pow(others as u32) {
        let rest: Vec<usize> = (0..others).rev().map(|t| r / m.pow(t as u32) % m).collect();
        for x in 0..m {
            for y in 0..m {
                let mut tx = rest.clone();
                tx.insert(slot, x);
                let mut ty = rest.clone();
                ty.insert(slot, y);
                let lhs = eval_linear(k, slot, &a.mul_basis_coords(x, y), &rest);
                let left = a.mul_coords(&a.basis_coords(x), k.eval(&ty));
                let right = a.mul_coords(k.eval(&tx), &a.basis_coords(y));
                out.extend(lhs.iter().zip(&left).zip(&right).map(|((l, p), q)| l - p - q));
            }
        }
    }
    out
}

fn leibniz_in_slot(k: &MultiMap, slot: usize) -> bool {
    leibniz_defect(k, slot).iter().all(Zero::is_zero)
}

/// Skew, `A`-valued, and `a ↦ K(a, a_1, …, a_k)` is a derivation for every basis tuple.
pub fn is_polyderivation(k: &MultiMap) -> bool {
    k.values() == Values::Algebra && k.arity() >= 1 && k.is_skew() && leibniz_in_slot(k, 0)
}

/// Leibniz in both slots of a bilinear `A`-valued map.
pub fn is_biderivation(mu: &MultiMap) -> bool {
    mu.values() == Values::Algebra && mu.arity() == 2 && leibniz_in_slot(mu, 0) && leibniz_in_slot(mu, 1)
}

/// Basis of the skew polyderivations of the given arity.
pub fn polyderivation_space(a: &Arc<Algebra>, arity: usize) -> Result<Vec<MultiMap>> {
    if arity == 0 {
        return Err(Error::Degree("polyderivations have arity at least 1".into()));
    }
    let m = a.dim();
    let bases: Vec<Vec<usize>> = (0..m).combinations(arity).collect();
    let unknowns = bases.len() * m;
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let unit_map = |u: usize| -> Result<MultiMap> {
        let (b, s) = (u / m, u % m);
        MultiMap::from_increasing(a, arity, Values::Algebra, |t| {
            let mut v = vec![Scalar::zero(); m];
            if t == bases[b].as_slice() {
                v[s] = scalar::one();
            }
            v
        })
    };
    let maps: Vec<MultiMap> = (0..unknowns).map(unit_map).collect::<Result<_>>()?;
    let columns: Vec<Vec<Scalar>> = maps.iter().map(|k| leibniz_defect(k, 0)).collect();
    let rows = columns[0].len();
    limits::check_dense("polyderivation system", rows, unknowns)?;
    let kernel = Matrix::from_columns(&columns, rows)?.kernel();
    kernel
        .basis()
        .iter()
        .map(|v| {
            let mut out = MultiMap::zero(a, arity, Values::Algebra)?;
            for (c, k) in v.iter().zip(&maps) {
                if !c.is_zero() {
                    out = out.add(&k.scale(c))?;
                }
            }
            Ok(out)
        })
        .collect()
}

/// Random combination of a polyderivation basis with coefficients in `-2..=2`.
pub fn random_polyderivation<R: Rng>(a: &Arc<Algebra>, arity: usize, basis: &[MultiMap], rng: &mut R) -> Result<MultiMap> {
    let mut out = MultiMap::zero(a, arity, Values::Algebra)?;
    for (c, k) in small_vector(rng, basis.len()).iter().zip(basis) {
        out = out.add(&k.scale(c))?;
    }
    Ok(out)
}

/// `[K_1, K_2]^∧` is again a polyderivation.
pub fn schouten_closure_check(k1: &MultiMap, k2: &MultiMap) -> Result<bool> {
    Ok(is_polyderivation(&nr_bracket(k1, k2)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PoissonVerdict {
    pub skew: bool,
    pub biderivation: bool,
    /// `[μ, μ]^∧ = 0`.
    pub jacobi: bool,
}

impl PoissonVerdict {
    pub fn is_poisson(&self) -> bool {
        self.skew && self.biderivation && self.jacobi
    }
}

fn check_bilinear(mu: &MultiMap) -> Result<()> {
    if mu.arity() != 2 || mu.values() != Values::Algebra {
        return Err(Error::Degree(format!("a Poisson structure is an A-valued map of arity 2, got arity {}", mu.arity())));
    }
    Ok(())
}

pub fn poisson_check(mu: &MultiMap) -> Result<PoissonVerdict> {
    check_bilinear(mu)?;
    Ok(PoissonVerdict { skew: mu.is_skew(), biderivation: is_biderivation(mu), jacobi: nr_bracket(mu, mu)?.is_zero() })
}

/// `a ↦ μ(a, ·)` lands in `Der(A)` and `μ̌(μ(a, b)) = [μ̌(a), μ̌(b)]` on all basis pairs.
pub fn poisson_bracket_hom_check(mu: &MultiMap) -> Result<bool> {
    check_bilinear(mu)?;
    if !leibniz_in_slot(mu, 1) {
        return Ok(false);
    }
    let m = mu.algebra().dim();
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let lhs = eval_linear(mu, 0, mu.eval(&[x, y]), &[z]);
                let p = eval_linear(mu, 1, mu.eval(&[y, z]), &[x]);
                let q = eval_linear(mu, 1, mu.eval(&[x, z]), &[y]);
                if lhs.iter().zip(&p).zip(&q).any(|((l, p), q)| l != &(p - q)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct PoissonScan {
    /// Dimension of the space of skew biderivations scanned over.
    pub candidates_dim: usize,
    pub searched: usize,
    pub found: Vec<MultiMap>,
    pub exhaustive: bool,
}

/// Brute-force scan of `{−bound, …, bound}`-combinations of skew biderivations for
/// `[μ, μ]^∧ = 0`, visiting at most `max_points` lattice points.
pub fn poisson_lattice_scan(a: &Arc<Algebra>, bound: i64, max_points: usize) -> Result<PoissonScan> {
    let basis = polyderivation_space(a, 2)?;
    let r = basis.len();
    let side = (2 * bound + 1) as usize;
    let total = side.checked_pow(r as u32);
    let mut found = Vec::new();
    let mut searched = 0;
    let mut digits = vec![0usize; r];
    loop {
        if searched == max_points {
            break;
        }
        searched += 1;
        let mut mu = MultiMap::zero(a, 2, Values::Algebra)?;
        for (d, k) in digits.iter().zip(&basis) {
            let c = scalar::int(*d as i64 - bound);
            if !c.is_zero() {
                mu = mu.add(&k.scale(&c))?;
            }
        }
        if nr_bracket(&mu, &mu)?.is_zero() {
            found.push(mu);
        }
        let mut i = 0;
        while i < r {
            digits[i] += 1;
            if digits[i] < side {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    Ok(PoissonScan { candidates_dim: r, searched, found, exhaustive: total == Some(searched) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{derivation_space, derivation_to_maps, Bimodule};
    use crate::builtins;
    use crate::derivations::{field_space, lie_bracket_fields};
    use crate::forms::Omega;
    use crate::random::trial_rng;

    #[test]
    fn arity_one_polyderivations_are_derivations() {
        let a = builtins::matrix(2);
        let m = Bimodule::regular(&a);
        let ders = derivation_to_maps(&derivation_space(&a, &m), &a, &m);
        for d in &ders {
            assert!(is_polyderivation(&MultiMap::linear(&a, d).unwrap()));
        }
        assert_eq!(polyderivation_space(&a, 1).unwrap().len(), ders.len());
        assert!(!is_polyderivation(&MultiMap::linear(&a, &Matrix::identity(4)).unwrap()));
    }

    #[test]
    fn commutator_is_a_polyderivation() {
        for (name, a) in builtins::roster() {
            assert!(is_polyderivation(&MultiMap::commutator(&a)), "{name}");
        }
    }

    #[test]
    fn brackets_of_polyderivations_close() {
        for (name, a) in builtins::roster() {
            let b1 = polyderivation_space(&a, 1).unwrap();
            let b2 = polyderivation_space(&a, 2).unwrap();
            for i in 0..4u64 {
                let mut rng = trial_rng(12, i);
                let (x, y) = (random_polyderivation(&a, 1, &b1, &mut rng).unwrap(), random_polyderivation(&a, 2, &b2, &mut rng).unwrap());
                let z = random_polyderivation(&a, 2, &b2, &mut rng).unwrap();
                for (p, q) in [(&x, &y), (&y, &z), (&x, &x), (&y, &x)] {
                    assert!(schouten_closure_check(p, q).unwrap(), "{name}");
                }
            }
        }
    }

    #[test]
    fn commutator_is_poisson_everywhere() {
        for (name, a) in builtins::roster() {
            let mu = MultiMap::commutator(&a);
            let v = poisson_check(&mu).unwrap();
            assert!(v.is_poisson(), "{name}: {v:?}");
            assert!(poisson_bracket_hom_check(&mu).unwrap(), "{name}");
            assert!(poisson_check(&MultiMap::zero(&a, 2, Values::Algebra).unwrap()).unwrap().is_poisson());
        }
    }

    #[test]
    fn commutator_leibniz_identities() {
        // μ(ab, c) = aμ(b, c) + μ(a, c)b and μ(a, bc) = μ(a, b)c + bμ(a, c)
        let a = builtins::upper(2);
        let mu = MultiMap::commutator(&a);
        assert!(leibniz_in_slot(&mu, 0) && leibniz_in_slot(&mu, 1));
    }

    #[test]
    fn product_is_not_poisson() {
        let a = builtins::matrix(2);
        let v = poisson_check(&MultiMap::product(&a)).unwrap();
        assert!(!v.skew && !v.biderivation);
        let mu = MultiMap::random_skew(&a, 2, Values::Algebra, &mut trial_rng(13, 0)).unwrap();
        let v = poisson_check(&mu).unwrap();
        assert!(v.skew && !v.is_poisson());
    }

    #[test]
    fn jacobi_verdict_matches_direct_expansion() {
        let a = builtins::upper(2);
        for i in 0..6u64 {
            let mu = MultiMap::random_skew(&a, 2, Values::Algebra, &mut trial_rng(14, i)).unwrap();
            let mut direct = true;
            for (x, y, z) in (0..3).cartesian_product(0..3).cartesian_product(0..3).map(|((x, y), z)| (x, y, z)) {
                let c = |p: usize, q: usize, r: usize| eval_linear(&mu, 0, mu.eval(&[p, q]), &[r]);
                let s: Vec<Scalar> = c(x, y, z).iter().zip(c(y, z, x)).zip(c(z, x, y)).map(|((p, q), r)| p + q + r).collect();
                direct &= s.iter().all(Zero::is_zero);
            }
            assert_eq!(poisson_check(&mu).unwrap().jacobi, direct);
        }
        assert!(poisson_check(&MultiMap::zero(&a, 2, Values::Algebra).unwrap()).unwrap().jacobi);
    }

    #[test]
    fn arity_one_bracket_is_minus_field_bracket() {
        let a = builtins::matrix(2);
        let om = Omega::new(a.clone());
        let fields = field_space(&om).unwrap();
        let as_map = |f: &crate::derivations::FieldValuedForm| {
            let cols: Vec<Vec<Scalar>> = (0..4).map(|j| om.to_dense(f.delta(j))).collect();
            MultiMap::linear(&a, &Matrix::from_columns(&cols, 4).unwrap()).unwrap()
        };
        for x in &fields {
            for y in &fields {
                let nr = nr_bracket(&as_map(x), &as_map(y)).unwrap();
                assert_eq!(nr, as_map(&lie_bracket_fields(&om, x, y).unwrap()).scale(&-scalar::one()));
            }
        }
    }

    #[test]
    fn lattice_scan() {
        let a = builtins::matrix(2);
        let scan = poisson_lattice_scan(&a, 1, 50).unwrap();
        assert!(scan.searched <= 50 && !scan.found.is_empty());
        assert!(scan.found.iter().all(|mu| poisson_check(mu).unwrap().is_poisson()));
        let kk = builtins::product(&builtins::field(), &builtins::field());
        let scan = poisson_lattice_scan(&kk, 2, 1000).unwrap();
        assert!(scan.exhaustive && scan.candidates_dim == 0 && scan.found.len() == 1);
    }
}
