//! Field valued forms `Ω^1_k = Hom_A^A(Ω_1, Ω_k)`, the graded derivations of `Ω(A)` they
//! generate, and the algebraic and Frölicher-Nijenhuis brackets.
//!
//! Degree bookkeeping: the subscript of `Ω^1_k` is the target form degree. The operator
//! `j_K` has degree `k − 1` and `L_K` has degree `k`.

mod brackets;
mod decompose;
mod identities;
mod naturality;
mod op;

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Form, Omega};
use crate::limits;
use crate::linalg::Matrix;
use crate::random::{small_scalar, sparse_vector};
use crate::scalar::Scalar;

pub use brackets::{algebraic_bracket, compose_contraction, fn_bracket, lie_bracket_fields};
pub use decompose::{decompose_derivation, is_graded_derivation, Decomposition};
pub use identities::{check_lie_contraction, check_sum_brackets, IdentityCheck};
pub use naturality::{f_related, naturality_checks, push_forward};
pub use op::{ops_agree, GradedDerivation, GradedOp};

/// An element of `Ω^1_k`, stored by its generating derivation `delta = K∘d: A → Ω_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldValuedForm {
    degree: usize,
    delta: Vec<Form>,
}

/// JSON shape: `{degree, delta}` with `delta` a `dim Ω_k × dim A` matrix of rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldValuedFormJson {
    pub degree: usize,
    #[serde(with = "crate::serial::vec_vec_scalar")]
    pub delta: Vec<Vec<Scalar>>,
}

impl FieldValuedForm {
    /// Validates `delta(1) = 0` and Leibniz on all basis pairs.
    pub fn new(om: &Omega, degree: usize, delta: Vec<Form>) -> Result<FieldValuedForm> {
        let k = FieldValuedForm::new_unchecked(degree, delta);
        if k.delta.len() != om.m() {
            return Err(Error::DimensionMismatch { expected: om.m(), got: k.delta.len() });
        }
        if let Some(f) = k.delta.iter().find(|f| f.degree() != degree) {
            return Err(Error::Degree(format!("delta component of degree {}, expected {degree}", f.degree())));
        }
        if let Some((i, j)) = k.leibniz_violation(om) {
            return Err(Error::NotLeibniz(i, j));
        }
        Ok(k)
    }

    pub(crate) fn new_unchecked(degree: usize, delta: Vec<Form>) -> FieldValuedForm {
        FieldValuedForm { degree, delta }
    }

    pub fn zero(om: &Omega, degree: usize) -> FieldValuedForm {
        FieldValuedForm { degree, delta: vec![Form::zero(degree); om.m()] }
    }

    /// `Id_{Ω_1}`, with `delta = d`.
    pub fn identity(om: &Omega) -> FieldValuedForm {
        let delta = (0..om.m()).map(|i| om.d(&Form::basis(0, i))).collect();
        FieldValuedForm { degree: 1, delta }
    }

    /// The inner derivation `a ↦ a·w − w·a`.
    pub fn inner(om: &Omega, w: &Form) -> FieldValuedForm {
        let delta = (0..om.m()).map(|i| om.left_basis(i, w).sub(&om.right_basis(w, i))).collect();
        FieldValuedForm { degree: w.degree(), delta }
    }

    /// A field from a derivation matrix `A → A` (column i = image of e_i).
    pub fn from_field_matrix(om: &Omega, mat: &Matrix) -> Result<FieldValuedForm> {
        let delta = (0..om.m()).map(|i| om.from_element(&mat.column(i))).collect();
        FieldValuedForm::new(om, 0, delta)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn delta(&self, i: usize) -> &Form {
        &self.delta[i]
    }

    pub fn is_zero(&self) -> bool {
        self.delta.iter().all(Form::is_zero)
    }

    pub fn leibniz_violation(&self, om: &Omega) -> Option<(usize, usize)> {
        if !self.delta[0].is_zero() {
            return Some((0, 0));
        }
        let a = om.algebra();
        for i in 1..om.m() {
            for j in 1..om.m() {
                let mut lhs = Form::zero(self.degree);
                for (k, c) in a.product_terms(i, j) {
                    lhs.axpy(c, &self.delta[*k]);
                }
                let rhs = om.right_basis(&self.delta[i], j).add(&om.left_basis(i, &self.delta[j]));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `K(da)` for `a` given by coordinates.
    pub fn on_exact(&self, a: &[Scalar]) -> Form {
        let mut out = Form::zero(self.degree);
        for (i, c) in a.iter().enumerate() {
            out.axpy(c, &self.delta[i]);
        }
        out
    }

    /// Extension to `Ω_1` by `K(a_0 de_j) = a_0·delta(e_j)`.
    pub fn apply_one_form(&self, om: &Omega, w: &Form) -> Form {
        assert_eq!(w.degree(), 1, "field valued forms act on 1-forms");
        let mut out = Form::zero(self.degree);
        let n = om.m() - 1;
        for (idx, c) in w.terms() {
            let (i, j) = (idx / n, idx % n + 1);
            out.axpy(c, &om.left_basis(i, &self.delta[j]));
        }
        out
    }

    /// Matrix of `K: Ω_1 → Ω_k`.
    pub fn matrix(&self, om: &Omega) -> Result<Matrix> {
        om.matrix_of(1, self.degree, |w| self.apply_one_form(om, w))
    }

    fn zip(&self, other: &FieldValuedForm, f: impl Fn(&Form, &Form) -> Form) -> Result<FieldValuedForm> {
        if self.degree != other.degree {
            return Err(Error::Degree(format!("cannot combine degrees {} and {}", self.degree, other.degree)));
        }
        let delta = self.delta.iter().zip(&other.delta).map(|(a, b)| f(a, b)).collect();
        Ok(FieldValuedForm { degree: self.degree, delta })
    }

    pub fn add(&self, other: &FieldValuedForm) -> Result<FieldValuedForm> {
        self.zip(other, Form::add)
    }

    pub fn sub(&self, other: &FieldValuedForm) -> Result<FieldValuedForm> {
        self.zip(other, Form::sub)
    }

    pub fn scale(&self, c: &Scalar) -> FieldValuedForm {
        FieldValuedForm { degree: self.degree, delta: self.delta.iter().map(|f| f.scale(c)).collect() }
    }

    pub fn to_json(&self, om: &Omega) -> FieldValuedFormJson {
        let cols: Vec<Vec<Scalar>> = self.delta.iter().map(|f| om.to_dense(f)).collect();
        let rows = om.dim(self.degree);
        let delta = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        FieldValuedFormJson { degree: self.degree, delta }
    }

    pub fn from_json(om: &Omega, j: &FieldValuedFormJson) -> Result<FieldValuedForm> {
        let rows = om.dim(j.degree);
        if j.delta.len() != rows || j.delta.iter().any(|r| r.len() != om.m()) {
            return Err(Error::DimensionMismatch { expected: rows * om.m(), got: j.delta.iter().map(Vec::len).sum() });
        }
        let delta = (0..om.m())
            .map(|i| om.from_dense(j.degree, &j.delta.iter().map(|r| r[i].clone()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        FieldValuedForm::new(om, j.degree, delta)
    }
}

/// A basis of `Ω^1_k`, solving the Leibniz system for `delta(e_i)`, `i ≥ 1`.
pub fn field_valued_space(om: &Omega, k: usize) -> Result<Vec<FieldValuedForm>> {
    let dim = om.check_dim(k)?;
    let m = om.m();
    if m == 1 || dim == 0 {
        return Ok(Vec::new());
    }
    let unknowns = (m - 1) * dim;
    let rows_count = (m - 1) * (m - 1) * dim;
    limits::check_dense("Leibniz system entries", rows_count, unknowns)?;
    let a = om.algebra();
    let var = |i: usize, r: usize| (i - 1) * dim + r;
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(rows_count);
    // precompute right actions of basis forms of Ω_k
    let right: Vec<Vec<Form>> = (0..dim).map(|s| (0..m).map(|j| om.right_basis(&Form::basis(k, s), j)).collect()).collect();
    for i in 1..m {
        for j in 1..m {
            let mut block = vec![vec![Scalar::zero(); unknowns]; dim];
            for (c, s) in a.product_terms(i, j) {
                if *c != 0 {
                    for (r, row) in block.iter_mut().enumerate() {
                        row[var(*c, r)] += s;
                    }
                }
            }
            for s in 0..dim {
                for (r, c) in right[s][j].terms() {
                    block[r][var(i, s)] -= c;
                }
                for (r, c) in om.left_basis(i, &Form::basis(k, s)).terms() {
                    block[r][var(j, s)] -= c;
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
    }
    let kernel = if rows.is_empty() { crate::linalg::Subspace::full(unknowns) } else { Matrix::from_rows(rows, unknowns)?.kernel() };
    let basis = kernel
        .basis()
        .iter()
        .map(|v| {
            let mut delta = vec![Form::zero(k)];
            for i in 1..m {
                delta.push(om.from_dense(k, &v[(i - 1) * dim..i * dim]).expect("slice sized"));
            }
            FieldValuedForm::new_unchecked(k, delta)
        })
        .collect();
    Ok(basis)
}

/// Fields `X(A) = Der(A)` as degree-0 field valued forms.
pub fn field_space(om: &Omega) -> Result<Vec<FieldValuedForm>> {
    field_valued_space(om, 0)
}

/// A random element of `Ω^1_k`: a small combination of `basis` when given, otherwise an
/// inner derivation of a sparse random form (exact, but only covering inner elements).
pub fn random_fvf<R: Rng>(om: &Omega, basis: Option<&[FieldValuedForm]>, k: usize, rng: &mut R) -> FieldValuedForm {
    match basis {
        Some(b) if !b.is_empty() => {
            let mut out = FieldValuedForm::zero(om, k);
            for (n, v) in b.iter().enumerate() {
                let c = if b.len() > 6 && n % 2 == 1 { Scalar::zero() } else { small_scalar(rng) };
                if !c.is_zero() {
                    out = out.add(&v.scale(&c)).expect("same degree");
                }
            }
            out
        }
        Some(_) => FieldValuedForm::zero(om, k),
        None => {
            let w = om.from_dense(k, &sparse_vector(rng, om.dim(k), 3)).expect("sized");
            FieldValuedForm::inner(om, &w)
        }
    }
}

/// Shared handle used by operators.
pub type FvfRef = Arc<FieldValuedForm>;
