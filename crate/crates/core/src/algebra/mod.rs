//! Finite-dimensional unital associative algebras given by structure constants
//! over a basis whose first element is the unit.

mod bimodule;
mod derivation;
mod hom;
mod tensor;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

pub use bimodule::Bimodule;
pub use derivation::{
    check_derivation_hom_correspondence, derivation_space, derivation_to_maps, is_derivation, sections_of_projection, semidirect_product,
};
pub use hom::AlgebraHom;
pub use tensor::{tensor_over, TensorQuotient};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// Raw structure constants `c[i][j][k]` with `e_i·e_j = Σ_k c[i][j][k] e_k`,
/// not yet validated. Used while building and rebasing tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    pub names: Vec<String>,
    pub constants: Vec<Scalar>,
}

impl StructureTable {
    pub fn zero(names: Vec<String>) -> Self {
        let m = names.len();
        Self { names, constants: vec![Scalar::zero(); m * m * m] }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let m = self.dim();
        &self.constants[(i * m + j) * m + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let m = self.dim();
        self.constants[(i * m + j) * m + k] = v;
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let m = self.dim();
        let mut out = vec![Scalar::zero(); m];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += c * &ab;
                    }
                }
            }
        }
        out
    }

    /// Re-expresses the table in a new basis given by vectors in old coordinates.
    pub fn rebase(&self, basis: &[Vec<Scalar>], names: Vec<String>) -> Result<StructureTable> {
        let m = self.dim();
        if basis.len() != m || names.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: basis.len() });
        }
        let change = Matrix::from_columns(basis, m)?;
        let inverse = invert(&change).ok_or_else(|| Error::Input("rebasing vectors are not a basis".into()))?;
        let mut out = StructureTable::zero(names);
        for i in 0..m {
            for j in 0..m {
                let prod = self.mul(&basis[i], &basis[j]);
                let coords = inverse.mul_vec(&prod)?;
                for (k, c) in coords.into_iter().enumerate() {
                    out.set(i, j, k, c);
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, Scalar::one());
    }
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.get(i, n + j).clone());
        }
    }
    Some(inv)
}

/// A validated algebra. Basis element 0 is the unit.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    table: StructureTable,
    // sparse products: products[i*m + j] = nonzero (k, c[i][j][k])
    products: Vec<Vec<(usize, Scalar)>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("basis", &self.names).finish()
    }
}

impl Algebra {
    pub fn new(table: StructureTable) -> Result<Algebra> {
        let m = table.dim();
        if table.constants.len() != m * m * m {
            return Err(Error::BadTable { expected: m * m * m, got: table.constants.len() });
        }
        if m == 0 {
            return Err(Error::Input("an algebra needs at least the unit".into()));
        }
        let products: Vec<Vec<(usize, Scalar)>> = (0..m * m)
            .map(|ij| {
                let (i, j) = (ij / m, ij % m);
                (0..m)
                    .filter_map(|k| {
                        let c = table.get(i, j, k);
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        let alg = Algebra { names: table.names.clone(), table, products };
        alg.validate()?;
        Ok(alg)
    }

    pub fn from_constants(names: Vec<String>, constants: Vec<Scalar>) -> Result<Algebra> {
        Algebra::new(StructureTable { names, constants })
    }

    fn validate(&self) -> Result<()> {
        let m = self.dim();
        for i in 0..m {
            let e = self.basis_coords(i);
            if self.mul_basis_coords(0, i) != e || self.mul_basis_coords(i, 0) != e {
                return Err(Error::Unit(i));
            }
        }
        for i in 0..m {
            for j in 0..m {
                let ij = self.mul_basis_coords(i, j);
                for k in 0..m {
                    let left = self.mul_coords(&ij, &self.basis_coords(k));
                    let jk = self.mul_basis_coords(j, k);
                    let right = self.mul_coords(&self.basis_coords(i), &jk);
                    if left != right {
                        return Err(Error::Associativity(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn basis_coords(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    pub fn unit_coords(&self) -> Vec<Scalar> {
        self.basis_coords(0)
    }

    /// Nonzero structure constants of `e_i·e_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim() + j]
    }

    pub fn mul_basis_coords(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        for (k, c) in self.product_terms(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn mul_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in self.product_terms(i, j) {
                    out[*k] += c * &ab;
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ e_i·x`.
    pub fn left_mult_matrix(&self, i: usize) -> Matrix {
        let m = self.dim();
        let mut mat = Matrix::zeros(m, m);
        for j in 0..m {
            for (k, c) in self.product_terms(i, j) {
                mat.set(*k, j, c.clone());
            }
        }
        mat
    }

    /// Matrix of `x ↦ x·e_i`.
    pub fn right_mult_matrix(&self, i: usize) -> Matrix {
        let m = self.dim();
        let mut mat = Matrix::zeros(m, m);
        for j in 0..m {
            for (k, c) in self.product_terms(j, i) {
                mat.set(*k, j, c.clone());
            }
        }
        mat
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.product_terms(i, j) == self.product_terms(j, i)))
    }

    /// The center `{z : z·e_i = e_i·z ∀ i}`.
    pub fn center(&self) -> Subspace {
        let m = self.dim();
        let mut rows = Vec::new();
        for i in 0..m {
            let diff = self.right_mult_matrix(i).sub(&self.left_mult_matrix(i)).expect("square");
            for r in 0..m {
                rows.push(diff.row(r).to_vec());
            }
        }
        Matrix::from_rows(rows, m).expect("rows sized").kernel()
    }

    pub fn opposite(&self) -> Algebra {
        let m = self.dim();
        let mut t = StructureTable::zero(self.names.clone());
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    t.set(i, j, k, self.table.get(j, i, k).clone());
                }
            }
        }
        Algebra::new(t).expect("opposite of a valid algebra is valid")
    }

    /// Smallest subalgebra containing the unit and the given vectors.
    pub fn generated_subalgebra(&self, generators: &[Vec<Scalar>]) -> Subspace {
        let m = self.dim();
        let mut span = crate::linalg::SpanBuilder::new(m);
        span.insert(self.unit_coords());
        for g in generators {
            span.insert(g.clone());
        }
        loop {
            let basis: Vec<Vec<Scalar>> = span.clone().finish().basis().to_vec();
            let mut grew = false;
            for x in &basis {
                for y in &basis {
                    grew |= span.insert(self.mul_coords(x, y));
                }
            }
            if !grew {
                return span.finish();
            }
        }
    }

    /// Whether a subspace contains 1 and is closed under multiplication.
    pub fn is_subalgebra(&self, s: &Subspace) -> Result<bool> {
        if !s.contains(&self.unit_coords())? {
            return Ok(false);
        }
        for x in s.basis() {
            for y in s.basis() {
                if !s.contains(&self.mul_coords(x, y))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Scalar>) -> Result<Element> {
        Element::new(self.clone(), coords)
    }
}

/// An element of an algebra, carrying its algebra handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    algebra: Arc<Algebra>,
    coords: Vec<Scalar>,
}

impl Element {
    pub fn new(algebra: Arc<Algebra>, coords: Vec<Scalar>) -> Result<Element> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: coords.len() });
        }
        Ok(Element { algebra, coords })
    }

    pub fn basis(algebra: &Arc<Algebra>, i: usize) -> Element {
        Element { algebra: algebra.clone(), coords: algebra.basis_coords(i) }
    }

    pub fn unit(algebra: &Arc<Algebra>) -> Element {
        Element::basis(algebra, 0)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    fn same_algebra(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    pub fn multiply(&self, other: &Element) -> Result<Element> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element { algebra: self.algebra.clone(), coords: self.algebra.mul_coords(&self.coords, &other.coords) })
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Element { algebra: self.algebra.clone(), coords })
    }
}

pub fn multiply(a: &Element, b: &Element) -> Result<Element> {
    a.multiply(b)
}
