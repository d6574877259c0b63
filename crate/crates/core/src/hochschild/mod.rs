//! Normalized Hochschild cochains `Ā^{⊗n} → M` and two independent routes to
//! `H^n(A, M)`: the normalized complex, and bimodule homomorphisms out of `Ω_n(A)`
//! modulo those factoring over `I`.
//!
//! A cochain is stored by its values on basis tuples `(ē_{j1},…,ē_{jn})`, `j_t ≥ 1`; the
//! tuple index is the same as the index of the basis form `(0; j1,…,jn)` of `Ω_n`.

mod forms_route;

use num_traits::Zero;
use rand::Rng;

use crate::algebra::{Algebra, Bimodule};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::limits;
use crate::linalg::Matrix;
use crate::random::small_vector;
use crate::scalar::{self, Scalar};

pub use forms_route::{
    build_i, cocycle_to_hom, cohomology, dn_cocycle, forms_bimodule, free_bimodule, hom_space, hom_to_cocycle, i_star_matrix,
    is_coboundary, BimoduleHom, CoboundaryWitness, CohomologyReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedCochain {
    arity: usize,
    module_dim: usize,
    values: Vec<Scalar>,
}

impl NormalizedCochain {
    /// `values[J·dim M + s]` is coordinate `s` of `c(ē_J)`.
    pub fn new(a: &Algebra, arity: usize, module_dim: usize, values: Vec<Scalar>) -> Result<NormalizedCochain> {
        let expected = tuples(a, arity) * module_dim;
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: values.len() });
        }
        Ok(NormalizedCochain { arity, module_dim, values })
    }

    pub fn zero(a: &Algebra, arity: usize, module_dim: usize) -> NormalizedCochain {
        NormalizedCochain { arity, module_dim, values: vec![Scalar::zero(); tuples(a, arity) * module_dim] }
    }

    pub fn random<R: Rng>(a: &Algebra, arity: usize, module_dim: usize, rng: &mut R) -> NormalizedCochain {
        NormalizedCochain { arity, module_dim, values: small_vector(rng, tuples(a, arity) * module_dim) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Scalar> {
        self.values
    }

    /// `c(ē_J)` for a flat tuple index.
    pub fn value(&self, tuple: usize) -> &[Scalar] {
        &self.values[tuple * self.module_dim..(tuple + 1) * self.module_dim]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// `(m − 1)^n`.
pub fn tuples(a: &Algebra, n: usize) -> usize {
    (a.dim() - 1).pow(n as u32)
}

/// The normalized complex `C̄^n(A, M)`.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    module: Bimodule,
}

impl CochainComplex {
    pub fn new(module: Bimodule) -> CochainComplex {
        CochainComplex { module }
    }

    pub fn module(&self) -> &Bimodule {
        &self.module
    }

    fn algebra(&self) -> &Algebra {
        self.module.algebra()
    }

    pub fn dim(&self, n: usize) -> usize {
        tuples(self.algebra(), n) * self.module.dim()
    }

    pub fn check_dim(&self, n: usize) -> Result<usize> {
        let d = self.dim(n);
        limits::check("cochain space dimension", d)?;
        Ok(d)
    }

    /// `(δc)(a_1,…,a_{n+1}) = a_1c(a_2,…) + Σ(−1)^i c(…,a_ia_{i+1},…) + (−1)^{n+1}c(…,a_n)a_{n+1}`.
    pub fn coboundary(&self, c: &NormalizedCochain) -> Result<NormalizedCochain> {
        let p = self.module.dim();
        if c.module_dim != p {
            return Err(Error::DimensionMismatch { expected: p, got: c.module_dim });
        }
        let n = c.arity;
        let a = self.algebra();
        let r = a.dim() - 1;
        let out_tuples = tuples(a, n + 1);
        let mut values = vec![Scalar::zero(); out_tuples * p];
        if r == 0 {
            return Ok(NormalizedCochain { arity: n + 1, module_dim: p, values });
        }
        let head = r.pow(n as u32);
        for t in 0..out_tuples {
            let js = decode(r, n + 1, t);
            let out = &mut values[t * p..(t + 1) * p];
            add_into(out, &scalar::one(), &self.module.act_left(js[0], c.value(t % head)));
            for i in 1..=n {
                let s = scalar::sign(i as i64);
                for (k, coef) in a.product_terms(js[i - 1], js[i]) {
                    if *k == 0 {
                        continue;
                    }
                    let mut merged = js[..i - 1].to_vec();
                    merged.push(*k);
                    merged.extend_from_slice(&js[i + 1..]);
                    add_into(out, &(&s * coef), c.value(encode(r, &merged)));
                }
            }
            let last = self.module.act_right(c.value(t / r), js[n]);
            add_into(out, &scalar::sign(n as i64 + 1), &last);
        }
        Ok(NormalizedCochain { arity: n + 1, module_dim: p, values })
    }

    /// Matrix of `δ: C̄^n → C̄^{n+1}`.
    pub fn coboundary_matrix(&self, n: usize, exec: Execution) -> Result<Matrix> {
        let (rows, cols) = (self.check_dim(n + 1)?, self.check_dim(n)?);
        let p = self.module.dim();
        let columns: Vec<Result<Vec<Scalar>>> = exec.map_range(cols, |idx| {
            let mut v = vec![Scalar::zero(); cols];
            v[idx] = scalar::one();
            Ok(self.coboundary(&NormalizedCochain { arity: n, module_dim: p, values: v })?.values)
        });
        let columns: Vec<Vec<Scalar>> = columns.into_iter().collect::<Result<_>>()?;
        Matrix::from_columns(&columns, rows)
    }

    pub fn coboundary_rank(&self, n: usize, exec: Execution) -> Result<usize> {
        let (rows, cols) = (self.check_dim(n + 1)?, self.check_dim(n)?);
        if rows == 0 || cols == 0 {
            return Ok(0);
        }
        limits::check_dense("coboundary matrix entries", rows, cols)?;
        Ok(self.coboundary_matrix(n, exec)?.rank())
    }

    /// `dim ker δ_n − dim im δ_{n−1}`.
    pub fn cohomology_dim(&self, n: usize, exec: Execution) -> Result<usize> {
        let below = if n == 0 { 0 } else { self.coboundary_rank(n - 1, exec)? };
        Ok(self.check_dim(n)? - self.coboundary_rank(n, exec)? - below)
    }

    pub fn is_cocycle(&self, c: &NormalizedCochain) -> Result<bool> {
        Ok(self.coboundary(c)?.is_zero())
    }
}

fn add_into(out: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (o, x) in out.iter_mut().zip(v) {
        if !x.is_zero() {
            *o += c * x;
        }
    }
}

/// Tuple of `n` indices in `1..m` from its flat index (most significant first).
pub(crate) fn decode(r: usize, n: usize, mut t: usize) -> Vec<usize> {
    let mut js = vec![0; n];
    for slot in js.iter_mut().rev() {
        *slot = t % r + 1;
        t /= r;
    }
    js
}

pub(crate) fn encode(r: usize, js: &[usize]) -> usize {
    js.iter().fold(0, |acc, &j| acc * r + (j - 1))
}
