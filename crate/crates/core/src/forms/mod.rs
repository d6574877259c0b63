//! Universal differential forms in the model `Ω_k(A) ≅ A⊗Ā^⊗k`.
//!
//! The basis element `(i; j_1,…,j_k)` stands for `e_i de_{j_1}⋯de_{j_k}`, with
//! `i ∈ 0..m` and `j_t ∈ 1..m` (the unit is killed in `Ā`). Its flat index is
//! `i·(m−1)^k + Σ_t (j_t−1)(m−1)^{k−t}`, so concatenating index lists is
//! `idx·(m−1)^l + tail`.

mod derham;
mod functor;
mod kernel;

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

pub use derham::{commutator_subspace, de_rham, graded_trace, DeRham};
pub use functor::omega_functor;
pub use kernel::{kernel_of_mu_n, kernel_of_mu_n_spaces};

/// A homogeneous form stored sparsely by flat basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    degree: usize,
    terms: BTreeMap<usize, Scalar>,
}

impl Form {
    pub fn zero(degree: usize) -> Form {
        Form { degree, terms: BTreeMap::new() }
    }

    pub fn basis(degree: usize, idx: usize) -> Form {
        Form::term(degree, idx, Scalar::one())
    }

    pub fn term(degree: usize, idx: usize, c: Scalar) -> Form {
        let mut f = Form::zero(degree);
        f.add_term(idx, c);
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, idx: usize) -> Scalar {
        self.terms.get(&idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, idx: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c·other`.
    pub fn axpy(&mut self, c: &Scalar, other: &Form) {
        debug_assert_eq!(self.degree, other.degree, "degree mismatch in form sum");
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(*k, c * v);
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        if c.is_zero() {
            return Form::zero(self.degree);
        }
        Form { degree: self.degree, terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Scalar::one())
    }

    /// Re-indexes each term; `f` returns `None` to drop a term.
    pub fn map_indices(&self, degree: usize, f: impl Fn(usize) -> Option<usize>) -> Form {
        let mut out = Form::zero(degree);
        for (k, v) in &self.terms {
            if let Some(k2) = f(*k) {
                out.add_term(k2, v.clone());
            }
        }
        out
    }
}

/// JSON shape of a form: `{degree, coords: [rational strings]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    #[serde(with = "crate::serial::vec_scalar")]
    pub coords: Vec<Scalar>,
}

/// The graded differential algebra `Ω_*(A)` of one algebra, with a memo of right actions
/// on basis forms. Shared freely across threads.
pub struct Omega {
    algebra: Arc<Algebra>,
    m: usize,
    right_cache: DashMap<(usize, usize, usize), Arc<Form>>,
}

impl std::fmt::Debug for Omega {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Omega").field("algebra", &self.algebra).finish()
    }
}

impl Omega {
    pub fn new(algebra: Arc<Algebra>) -> Arc<Omega> {
        let m = algebra.dim();
        Arc::new(Omega { algebra, m, right_cache: DashMap::new() })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// `dim A`.
    pub fn m(&self) -> usize {
        self.m
    }

    fn bar(&self) -> usize {
        self.m - 1
    }

    fn tail_dim(&self, k: usize) -> usize {
        self.bar().pow(k as u32)
    }

    /// `dim Ω_k = m(m−1)^k`.
    pub fn dim(&self, k: usize) -> usize {
        self.m * self.tail_dim(k)
    }

    pub fn check_dim(&self, k: usize) -> Result<usize> {
        let d = self.dim(k);
        crate::limits::check("form space dimension", d)?;
        Ok(d)
    }

    pub fn index(&self, i: usize, js: &[usize]) -> usize {
        let n = self.bar();
        js.iter().fold(i, |acc, &j| {
            debug_assert!(j >= 1 && j < self.m, "bar index out of range");
            acc * n + (j - 1)
        })
    }

    pub fn decode(&self, k: usize, idx: usize) -> (usize, Vec<usize>) {
        let n = self.bar();
        let mut js = vec![0; k];
        let mut rest = idx;
        for t in (0..k).rev() {
            js[t] = rest % n + 1;
            rest /= n;
        }
        (rest, js)
    }

    /// Human-readable basis label like `e12 de21 de22`.
    pub fn label(&self, k: usize, idx: usize) -> String {
        let names = self.algebra.names();
        let (i, js) = self.decode(k, idx);
        let mut s = names[i].clone();
        for j in js {
            s.push_str(&format!(" d{}", names[j]));
        }
        s
    }

    /// Degree-0 form from algebra coordinates.
    pub fn from_element(&self, coords: &[Scalar]) -> Form {
        let mut f = Form::zero(0);
        for (i, c) in coords.iter().enumerate() {
            f.add_term(i, c.clone());
        }
        f
    }

    pub fn to_dense(&self, f: &Form) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim(f.degree)];
        for (k, c) in f.terms() {
            v[k] = c.clone();
        }
        v
    }

    pub fn from_dense(&self, degree: usize, v: &[Scalar]) -> Result<Form> {
        if v.len() != self.dim(degree) {
            return Err(Error::DimensionMismatch { expected: self.dim(degree), got: v.len() });
        }
        let mut f = Form::zero(degree);
        for (k, c) in v.iter().enumerate() {
            f.add_term(k, c.clone());
        }
        Ok(f)
    }

    pub fn to_json(&self, f: &Form) -> FormJson {
        FormJson { degree: f.degree, coords: self.to_dense(f) }
    }

    pub fn from_json(&self, j: &FormJson) -> Result<Form> {
        self.from_dense(j.degree, &j.coords)
    }

    /// The universal differential: `(i; J) ↦ (0; i, J)` for `i ≠ 0`, zero for `i = 0`.
    pub fn d(&self, f: &Form) -> Form {
        let k = f.degree;
        let t = self.tail_dim(k);
        f.map_indices(k + 1, |idx| {
            let (i, rest) = (idx / t, idx % t);
            (i != 0).then(|| (i - 1) * t + rest)
        })
    }

    /// `d` of an algebra element.
    pub fn d_element(&self, coords: &[Scalar]) -> Form {
        self.d(&self.from_element(coords))
    }

    /// `e_a · f`.
    pub fn left_basis(&self, a: usize, f: &Form) -> Form {
        let t = self.tail_dim(f.degree);
        let mut out = Form::zero(f.degree);
        for (idx, c) in f.terms() {
            let (i, rest) = (idx / t, idx % t);
            for (k, s) in self.algebra.product_terms(a, i) {
                out.add_term(k * t + rest, c * s);
            }
        }
        out
    }

    pub fn left(&self, a: &[Scalar], f: &Form) -> Form {
        let mut out = Form::zero(f.degree);
        for (i, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out.axpy(c, &self.left_basis(i, f));
        }
        out
    }

    /// Right action of `e_b` on a basis form, via
    /// `(ω' de_j)·e_b = ω'·d(e_j e_b) − (ω'·e_j) de_b`.
    fn right_basis_form(&self, k: usize, idx: usize, b: usize) -> Arc<Form> {
        if let Some(hit) = self.right_cache.get(&(k, idx, b)) {
            return hit.clone();
        }
        let out = if b == 0 {
            Form::basis(k, idx)
        } else if k == 0 {
            let mut f = Form::zero(0);
            for (c, s) in self.algebra.product_terms(idx, b) {
                f.add_term(*c, s.clone());
            }
            f
        } else {
            let n = self.bar();
            let (prefix, j) = (idx / n, idx % n + 1);
            let mut f = Form::zero(k);
            for (c, s) in self.algebra.product_terms(j, b) {
                if *c != 0 {
                    f.add_term(prefix * n + (c - 1), s.clone());
                }
            }
            let inner = self.right_basis_form(k - 1, prefix, j);
            for (p, s) in inner.terms() {
                f.add_term(p * n + (b - 1), -s.clone());
            }
            f
        };
        let out = Arc::new(out);
        self.right_cache.insert((k, idx, b), out.clone());
        out
    }

    /// `f · e_b`.
    pub fn right_basis(&self, f: &Form, b: usize) -> Form {
        let mut out = Form::zero(f.degree);
        for (idx, c) in f.terms() {
            out.axpy(c, &self.right_basis_form(f.degree, idx, b));
        }
        out
    }

    pub fn right(&self, f: &Form, b: &[Scalar]) -> Form {
        let mut out = Form::zero(f.degree);
        for (j, c) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out.axpy(c, &self.right_basis(f, j));
        }
        out
    }

    /// The product `ω·η`: right-multiply `ω` by the leading coefficient of each basis
    /// term of `η`, then append that term's `Ā`-indices.
    pub fn mul(&self, w: &Form, h: &Form) -> Form {
        let l = h.degree;
        let t = self.tail_dim(l);
        let mut out = Form::zero(w.degree + l);
        for (idx, c) in h.terms() {
            let (b0, tail) = (idx / t, idx % t);
            let wb = self.right_basis(w, b0);
            for (p, s) in wb.terms() {
                out.add_term(p * t + tail, c * s);
            }
        }
        out
    }

    /// Graded commutator `ωη − (−1)^{pq} ηω`.
    pub fn graded_commutator(&self, w: &Form, h: &Form) -> Form {
        let s = scalar::sign((w.degree * h.degree) as i64);
        let mut out = self.mul(w, h);
        out.axpy(&-s, &self.mul(h, w));
        out
    }

    /// Dense matrix of a degree-preserving or degree-shifting linear map given on basis forms.
    pub fn matrix_of(&self, from: usize, to: usize, f: impl Fn(&Form) -> Form) -> Result<Matrix> {
        let (rows, cols) = (self.check_dim(to)?, self.check_dim(from)?);
        let mut mat = Matrix::zeros(rows, cols);
        for idx in 0..cols {
            let img = f(&Form::basis(from, idx));
            if img.degree != to {
                return Err(Error::Degree(format!("map lands in degree {}, expected {to}", img.degree)));
            }
            for (r, c) in img.terms() {
                mat.set(r, idx, c.clone());
            }
        }
        Ok(mat)
    }

    pub fn d_matrix(&self, k: usize) -> Result<Matrix> {
        self.matrix_of(k, k + 1, |f| self.d(f))
    }
}

/// A truncated inhomogeneous form `ω_0 + … + ω_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedForm {
    components: Vec<Form>,
}

impl GradedForm {
    pub fn zero(n: usize) -> GradedForm {
        GradedForm { components: (0..=n).map(Form::zero).collect() }
    }

    pub fn from_components(components: Vec<Form>) -> Result<GradedForm> {
        for (k, f) in components.iter().enumerate() {
            if f.degree() != k {
                return Err(Error::Degree(format!("component {k} has degree {}", f.degree())));
            }
        }
        Ok(GradedForm { components })
    }

    pub fn truncation(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, k: usize) -> &Form {
        &self.components[k]
    }

    /// Product truncated at the same degree.
    pub fn mul(&self, om: &Omega, other: &GradedForm) -> GradedForm {
        let n = self.truncation().min(other.truncation());
        let mut out = GradedForm::zero(n);
        for p in 0..=n {
            for q in 0..=n - p {
                let prod = om.mul(&self.components[p], &other.components[q]);
                out.components[p + q].axpy(&Scalar::one(), &prod);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::scalar::int;

    #[test]
    fn dims_match_model() {
        let om = Omega::new(builtins::matrix(2));
        assert_eq!(om.dim(0), 4);
        assert_eq!(om.dim(1), 12);
        assert_eq!(om.dim(3), 108);
        let k = Omega::new(builtins::field());
        assert_eq!(k.dim(0), 1);
        assert_eq!(k.dim(2), 0);
    }

    #[test]
    fn index_round_trip() {
        let om = Omega::new(builtins::truncpoly(4));
        for idx in 0..om.dim(3) {
            let (i, js) = om.decode(3, idx);
            assert_eq!(om.index(i, &js), idx);
        }
    }

    #[test]
    fn differential_on_dual_numbers() {
        let om = Omega::new(builtins::dual());
        assert!(om.d_element(&[int(1), int(0)]).is_zero());
        let de = om.d_element(&[int(0), int(1)]);
        assert_eq!(de, Form::basis(1, om.index(0, &[1])));
        assert!(om.d(&de).is_zero());
    }

    #[test]
    fn right_action_dual() {
        let om = Omega::new(builtins::dual());
        let de = Form::basis(1, om.index(0, &[1]));
        let r = om.right_basis(&de, 1);
        // (de)·e = d(e²) − e de = −e de
        assert_eq!(r, Form::term(1, om.index(1, &[1]), int(-1)));
        assert_eq!(om.right_basis(&de, 0), de);
    }

    #[test]
    fn de_de_is_concatenation() {
        let om = Omega::new(builtins::dual());
        let de = Form::basis(1, om.index(0, &[1]));
        assert_eq!(om.mul(&de, &de), Form::basis(2, om.index(0, &[1, 1])));
    }

    #[test]
    fn leibniz_on_basis_pairs() {
        let om = Omega::new(builtins::matrix(2));
        for k in 0..2 {
            for l in 0..2 {
                for a in 0..om.dim(k) {
                    for b in (0..om.dim(l)).step_by(3) {
                        let (w, h) = (Form::basis(k, a), Form::basis(l, b));
                        let lhs = om.d(&om.mul(&w, &h));
                        let mut rhs = om.mul(&om.d(&w), &h);
                        rhs.axpy(&scalar::sign(k as i64), &om.mul(&w, &om.d(&h)));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let om = Omega::new(builtins::dual());
        let f = Form::term(1, 1, crate::scalar::ratio(-1, 2));
        let j = serde_json::to_value(om.to_json(&f)).unwrap();
        assert_eq!(j, serde_json::json!({"degree": 1, "coords": ["0", "-1/2"]}));
        assert_eq!(om.from_json(&serde_json::from_value(j).unwrap()).unwrap(), f);
    }
}
