//! Multilinear maps `A^k → A` (or `A^k → 𝕂`), the wedge product, the insertion
//! operator, the Nijenhuis-Richardson bracket, polyderivations and Poisson structures.
//!
//! A map of arity `k` is stored on all `m^k` basis tuples, most significant slot first.
//! Operations on skew inputs sum over shuffles and evaluate only increasing tuples;
//! other inputs go through the full permutation sums with their factorial weights.

mod ops;
mod poly;

use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::limits;
use crate::linalg::Matrix;
use crate::random::small_vector;
use crate::scalar::{self, Scalar};

pub use ops::{graded_commutator_insertion, insertion, nr_bracket, wedge};
pub use poly::{
    is_biderivation, is_polyderivation, poisson_bracket_hom_check, poisson_check, poisson_lattice_scan, polyderivation_space,
    random_polyderivation, schouten_closure_check, PoissonScan, PoissonVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Values {
    Scalar,
    Algebra,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    algebra: Arc<Algebra>,
    arity: usize,
    values: Values,
    coords: Vec<Scalar>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiMapJson {
    pub arity: usize,
    #[serde(default = "algebra_values")]
    pub values: Values,
    #[serde(with = "crate::serial::vec_scalar")]
    pub coords: Vec<Scalar>,
}

fn algebra_values() -> Values {
    Values::Algebra
}

impl MultiMap {
    /// `coords[t·w + s]` is coordinate `s` of the value on basis tuple `t`, `w = 1` or `dim A`.
    pub fn new(algebra: Arc<Algebra>, arity: usize, values: Values, coords: Vec<Scalar>) -> Result<MultiMap> {
        let expected = size(&algebra, arity, values)?;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: coords.len() });
        }
        Ok(MultiMap { algebra, arity, values, coords })
    }

    /// Like [`MultiMap::new`], but rejects maps that are not skew-symmetric.
    pub fn skew(algebra: Arc<Algebra>, arity: usize, values: Values, coords: Vec<Scalar>) -> Result<MultiMap> {
        let k = MultiMap::new(algebra, arity, values, coords)?;
        if let Some((t, slot)) = k.skew_violation() {
            return Err(Error::Input(format!("map is not skew-symmetric: slots {slot}, {} on tuple {:?}", slot + 1, k.decode(t))));
        }
        Ok(k)
    }

    pub fn zero(algebra: &Arc<Algebra>, arity: usize, values: Values) -> Result<MultiMap> {
        let n = size(algebra, arity, values)?;
        Ok(MultiMap { algebra: algebra.clone(), arity, values, coords: vec![Scalar::zero(); n] })
    }

    /// Evaluates `f` on every basis tuple.
    pub fn from_fn(algebra: &Arc<Algebra>, arity: usize, values: Values, f: impl Fn(&[usize]) -> Vec<Scalar>) -> Result<MultiMap> {
        let mut out = MultiMap::zero(algebra, arity, values)?;
        let w = out.value_dim();
        for t in 0..out.tuples() {
            let v = f(&out.decode(t));
            out.coords[t * w..(t + 1) * w].clone_from_slice(&v);
        }
        Ok(out)
    }

    /// Evaluates `f` on strictly increasing tuples and extends skew-symmetrically.
    pub(crate) fn from_increasing(
        algebra: &Arc<Algebra>,
        arity: usize,
        values: Values,
        f: impl Fn(&[usize]) -> Vec<Scalar> + Sync,
    ) -> Result<MultiMap> {
        let mut out = MultiMap::zero(algebra, arity, values)?;
        let w = out.value_dim();
        let bases: Vec<Vec<usize>> = (0..algebra.dim()).combinations(arity).collect();
        let vals = Execution::default().map(&bases, |b| f(b));
        for (base, v) in bases.into_iter().zip(vals) {
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            for perm in (0..arity).permutations(arity) {
                let tuple: Vec<usize> = perm.iter().map(|&i| base[i]).collect();
                let s = scalar::sign(inversions(&perm) as i64);
                let t = out.encode(&tuple);
                for (o, x) in out.coords[t * w..(t + 1) * w].iter_mut().zip(&v) {
                    *o = &s * x;
                }
            }
        }
        Ok(out)
    }

    pub fn random_skew<R: Rng>(algebra: &Arc<Algebra>, arity: usize, values: Values, rng: &mut R) -> Result<MultiMap> {
        let w = value_dim(algebra, values);
        let n = (0..algebra.dim()).combinations(arity).count();
        let raw = small_vector(rng, n * w);
        let lookup: std::collections::HashMap<Vec<usize>, usize> =
            (0..algebra.dim()).combinations(arity).enumerate().map(|(i, c)| (c, i)).collect();
        MultiMap::from_increasing(algebra, arity, values, |t| raw[lookup[t] * w..(lookup[t] + 1) * w].to_vec())
    }

    /// Arity-1 `A`-valued map with matrix columns `K(e_j)`.
    pub fn linear(algebra: &Arc<Algebra>, k: &Matrix) -> Result<MultiMap> {
        let m = algebra.dim();
        if k.rows() != m || k.cols() != m {
            return Err(Error::DimensionMismatch { expected: m * m, got: k.rows() * k.cols() });
        }
        MultiMap::from_fn(algebra, 1, Values::Algebra, |t| k.column(t[0]))
    }

    /// Arity-1 scalar-valued form `e_j ↦ φ_j`.
    pub fn covector(algebra: &Arc<Algebra>, phi: &[Scalar]) -> Result<MultiMap> {
        MultiMap::new(algebra.clone(), 1, Values::Scalar, phi.to_vec())
    }

    /// `μ(a, b) = ab − ba`.
    pub fn commutator(algebra: &Arc<Algebra>) -> MultiMap {
        MultiMap::from_fn(algebra, 2, Values::Algebra, |t| {
            let (x, y) = (algebra.mul_basis_coords(t[0], t[1]), algebra.mul_basis_coords(t[1], t[0]));
            x.iter().zip(&y).map(|(p, q)| p - q).collect()
        })
        .expect("arity 2 fits")
    }

    /// `μ(a, b) = ab`; never skew, since `μ(1, 1) = 1`.
    pub fn product(algebra: &Arc<Algebra>) -> MultiMap {
        MultiMap::from_fn(algebra, 2, Values::Algebra, |t| algebra.mul_basis_coords(t[0], t[1])).expect("arity 2 fits")
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Operator degree `arity − 1` of an `A`-valued map.
    pub fn degree(&self) -> i64 {
        self.arity as i64 - 1
    }

    pub fn values(&self) -> Values {
        self.values
    }

    pub fn value_dim(&self) -> usize {
        value_dim(&self.algebra, self.values)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn tuples(&self) -> usize {
        self.algebra.dim().pow(self.arity as u32)
    }

    pub(crate) fn encode(&self, tuple: &[usize]) -> usize {
        let m = self.algebra.dim();
        tuple.iter().fold(0, |acc, &i| acc * m + i)
    }

    pub(crate) fn decode(&self, mut t: usize) -> Vec<usize> {
        let m = self.algebra.dim();
        let mut out = vec![0; self.arity];
        for slot in out.iter_mut().rev() {
            *slot = t % m;
            t /= m;
        }
        out
    }

    /// Value on a basis tuple.
    pub fn eval(&self, tuple: &[usize]) -> &[Scalar] {
        let w = self.value_dim();
        let t = self.encode(tuple);
        &self.coords[t * w..(t + 1) * w]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// First tuple and slot where swapping adjacent arguments fails to negate the value.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        for t in 0..self.tuples() {
            let tuple = self.decode(t);
            for slot in 0..self.arity.saturating_sub(1) {
                let mut swapped = tuple.clone();
                swapped.swap(slot, slot + 1);
                let (a, b) = (self.eval(&tuple), self.eval(&swapped));
                if a.iter().zip(b).any(|(x, y)| x != &-y.clone()) {
                    return Some((t, slot));
                }
            }
        }
        None
    }

    pub fn is_skew(&self) -> bool {
        self.skew_violation().is_none()
    }

    /// `(1/k!) Σ_σ sign σ · f(v_σ1, …, v_σk)`.
    pub fn alternate(&self) -> MultiMap {
        let k = self.arity;
        let w = self.value_dim();
        let norm = scalar::factorial(k);
        let perms: Vec<(Vec<usize>, Scalar)> = (0..k).permutations(k).map(|p| (p.clone(), scalar::sign(inversions(&p) as i64))).collect();
        MultiMap::from_fn(&self.algebra, k, self.values, |t| {
            let mut acc = vec![Scalar::zero(); w];
            for (p, s) in &perms {
                let tuple: Vec<usize> = p.iter().map(|&i| t[i]).collect();
                for (a, x) in acc.iter_mut().zip(self.eval(&tuple)) {
                    *a += s * x;
                }
            }
            acc.into_iter().map(|x| x / &norm).collect()
        })
        .expect("same shape as self")
    }

    fn check_same(&self, other: &MultiMap) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        if self.arity != other.arity || self.values != other.values {
            return Err(Error::Degree(format!("cannot add maps of arity {} and {}", self.arity, other.arity)));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(MultiMap { coords, ..self.clone() })
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> MultiMap {
        MultiMap { coords: self.coords.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// Matrix of an arity-1 `A`-valued map.
    pub fn as_matrix(&self) -> Option<Matrix> {
        if self.arity != 1 || self.values != Values::Algebra {
            return None;
        }
        let m = self.algebra.dim();
        let cols: Vec<Vec<Scalar>> = (0..m).map(|j| self.eval(&[j]).to_vec()).collect();
        Matrix::from_columns(&cols, m).ok()
    }

    pub fn to_json(&self) -> MultiMapJson {
        MultiMapJson { arity: self.arity, values: self.values, coords: self.coords.clone() }
    }

    pub fn from_json(algebra: &Arc<Algebra>, j: &MultiMapJson) -> Result<MultiMap> {
        MultiMap::new(algebra.clone(), j.arity, j.values, j.coords.clone())
    }
}

fn value_dim(a: &Algebra, values: Values) -> usize {
    match values {
        Values::Scalar => 1,
        Values::Algebra => a.dim(),
    }
}

fn size(a: &Algebra, arity: usize, values: Values) -> Result<usize> {
    let t = (a.dim() as u128).pow(arity as u32) * value_dim(a, values) as u128;
    let t = usize::try_from(t).unwrap_or(usize::MAX);
    limits::check("multilinear map coordinates", t)?;
    Ok(t)
}

pub(crate) fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}
