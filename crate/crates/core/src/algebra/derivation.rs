use std::sync::Arc;

use num_traits::Zero;

use super::{Algebra, AlgebraHom, Bimodule, StructureTable};
use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Matrix, Subspace};
use crate::scalar::{one, Scalar};

/// Linear maps `A → M` are flattened as `v[i*dim M + r] = D(e_i)_r`.
fn flat(i: usize, r: usize, dm: usize) -> usize {
    i * dm + r
}

/// Rows of the Leibniz system `D(e_i e_j) − D(e_i)e_j − e_iD(e_j) = 0`.
fn leibniz_rows(a: &Algebra, m: &Bimodule) -> Vec<Vec<Scalar>> {
    let (n, dm) = (a.dim(), m.dim());
    let mut rows = Vec::with_capacity(n * n * dm);
    for i in 0..n {
        for j in 0..n {
            for r in 0..dm {
                let mut row = vec![Scalar::zero(); n * dm];
                for (k, c) in a.product_terms(i, j) {
                    row[flat(*k, r, dm)] += c;
                }
                for s in 0..dm {
                    let rj = m.right(j).get(r, s);
                    if !rj.is_zero() {
                        row[flat(i, s, dm)] -= rj;
                    }
                    let li = m.left(i).get(r, s);
                    if !li.is_zero() {
                        row[flat(j, s, dm)] -= li;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// All derivations `A → M` as a subspace of flattened maps.
pub fn derivation_space(a: &Algebra, m: &Bimodule) -> Subspace {
    let cols = a.dim() * m.dim();
    let rows = leibniz_rows(a, m);
    if rows.is_empty() {
        return Subspace::full(cols);
    }
    Matrix::from_rows(rows, cols).expect("rows sized").kernel()
}

/// Turns flattened maps back into `dim M × dim A` matrices.
pub fn derivation_to_maps(space: &Subspace, a: &Algebra, m: &Bimodule) -> Vec<Matrix> {
    let (n, dm) = (a.dim(), m.dim());
    space
        .basis()
        .iter()
        .map(|v| {
            let mut mat = Matrix::zeros(dm, n);
            for i in 0..n {
                for r in 0..dm {
                    mat.set(r, i, v[flat(i, r, dm)].clone());
                }
            }
            mat
        })
        .collect()
}

pub fn is_derivation(a: &Algebra, m: &Bimodule, map: &Matrix) -> bool {
    if map.rows() != m.dim() || map.cols() != a.dim() {
        return false;
    }
    (0..a.dim()).all(|i| {
        (0..a.dim()).all(|j| {
            let lhs = map.mul_vec(&a.mul_basis_coords(i, j)).expect("sized");
            let di = map.column(i);
            let dj = map.column(j);
            let rhs: Vec<Scalar> = m.act_right(&di, j).into_iter().zip(m.act_left(i, &dj)).map(|(x, y)| x + y).collect();
            lhs == rhs
        })
    })
}

/// `A⊛M` with `(a, m)(b, n) = (ab, an + mb)`; basis is `A`'s basis followed by `M`'s.
pub fn semidirect_product(a: &Arc<Algebra>, m: &Bimodule) -> Result<Algebra> {
    if !m.is_valid() {
        return Err(Error::InvalidBimodule("semidirect product needs a valid bimodule".into()));
    }
    let (n, dm) = (a.dim(), m.dim());
    let mut names: Vec<String> = a.names().to_vec();
    names.extend((0..dm).map(|r| format!("m{r}")));
    let mut t = StructureTable::zero(names);
    for i in 0..n {
        for j in 0..n {
            for (k, c) in a.product_terms(i, j) {
                t.set(i, j, *k, c.clone());
            }
        }
        for r in 0..dm {
            for s in 0..dm {
                let l = m.left(i).get(s, r);
                if !l.is_zero() {
                    t.set(i, n + r, n + s, l.clone());
                }
                let rr = m.right(i).get(s, r);
                if !rr.is_zero() {
                    t.set(n + r, i, n + s, rr.clone());
                }
            }
        }
    }
    Algebra::new(t)
}

/// Algebra homomorphisms `φ: A → A⊛M` with `pr_1∘φ = Id`, as an affine family of
/// flattened `M`-components. Solved directly from the multiplication table of `A⊛M`.
pub fn sections_of_projection(a: &Arc<Algebra>, m: &Bimodule) -> Result<Option<(Vec<Scalar>, Subspace)>> {
    let s = semidirect_product(a, m)?;
    let (n, dm) = (a.dim(), m.dim());
    let unknowns = n * dm;
    // φ(e_i) = e_i + Σ_r x_{ir} f_r; expand φ(e_i e_j) − φ(e_i)φ(e_j) in the basis of A⊛M.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for out in 0..n + dm {
                let mut row = vec![Scalar::zero(); unknowns];
                let mut constant = Scalar::zero();
                for (k, c) in a.product_terms(i, j) {
                    if out < n && *k == out {
                        constant += c;
                    }
                    if out >= n {
                        row[flat(*k, out - n, dm)] += c;
                    }
                }
                for (k, c) in s.product_terms(i, j) {
                    if *k == out {
                        constant -= c;
                    }
                }
                for r in 0..dm {
                    for (k, c) in s.product_terms(i, n + r) {
                        if *k == out {
                            row[flat(j, r, dm)] -= c;
                        }
                    }
                    for (k, c) in s.product_terms(n + r, j) {
                        if *k == out {
                            row[flat(i, r, dm)] -= c;
                        }
                    }
                    for q in 0..dm {
                        if s.product_terms(n + r, n + q).iter().any(|(k, _)| *k == out) {
                            return Err(Error::InvalidBimodule("M·M ≠ 0 in the semidirect product".into()));
                        }
                    }
                }
                rows.push(row);
                rhs.push(-constant);
            }
        }
    }
    // φ(1) = 1
    for r in 0..dm {
        let mut row = vec![Scalar::zero(); unknowns];
        row[flat(0, r, dm)] = one();
        rows.push(row);
        rhs.push(Scalar::zero());
    }
    let mat = Matrix::from_rows(rows, unknowns)?;
    solve_linear(&mat, &rhs)
}

/// Checks that `D ↦ (a ↦ (a, D a))` identifies derivations `A → M` with sections of
/// `pr_1: A⊛M → A`: both spaces agree and every basis derivation yields an algebra hom.
pub fn check_derivation_hom_correspondence(a: &Arc<Algebra>, m: &Bimodule) -> Result<bool> {
    let der = derivation_space(a, m);
    let Some((particular, homogeneous)) = sections_of_projection(a, m)? else {
        return Ok(false);
    };
    // the zero derivation gives the inclusion, so the affine family must pass through 0
    if !homogeneous.contains(&particular)? || homogeneous != der {
        return Ok(false);
    }
    let s = Arc::new(semidirect_product(a, m)?);
    let (n, dm) = (a.dim(), m.dim());
    for d in derivation_to_maps(&der, a, m) {
        let mut phi = Matrix::zeros(n + dm, n);
        for i in 0..n {
            phi.set(i, i, one());
            for r in 0..dm {
                phi.set(n + r, i, d.get(r, i).clone());
            }
        }
        let hom = AlgebraHom::new(a.clone(), s.clone(), phi)?;
        let mut pr = Matrix::zeros(n, n + dm);
        for i in 0..n {
            pr.set(i, i, one());
        }
        let pr = AlgebraHom::new(s.clone(), a.clone(), pr)?;
        if pr.compose(&hom)? != AlgebraHom::identity(a) {
            return Ok(false);
        }
    }
    Ok(true)
}
