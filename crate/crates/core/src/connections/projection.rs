use num_traits::{Signed, Zero};

use super::{ideal_components, involutive, Distribution};
use crate::derivations::{compose_contraction, field_valued_space, fn_bracket, FieldValuedForm, IdentityCheck};
use crate::error::{Error, Result};
use crate::forms::{Form, Omega};
use crate::linalg::{solve_linear, Matrix, SpanBuilder, Subspace};
use crate::scalar::{self, ratio, Scalar};

/// An idempotent `P ∈ Ω^1_1 = Hom_A^A(Ω_1, Ω_1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    p: FieldValuedForm,
    matrix: Matrix,
}

impl Projection {
    pub fn new(om: &Omega, p: FieldValuedForm) -> Result<Projection> {
        if p.degree() != 1 {
            return Err(Error::Degree(format!("a projection lives in Ω^1_1, got degree {}", p.degree())));
        }
        let matrix = p.matrix(om)?;
        if matrix.mul(&matrix)? != matrix {
            return Err(Error::NotIdempotent);
        }
        Ok(Projection { p, matrix })
    }

    pub fn identity(om: &Omega) -> Projection {
        Projection::new(om, FieldValuedForm::identity(om)).expect("Id is idempotent")
    }

    pub fn zero(om: &Omega) -> Projection {
        Projection::new(om, FieldValuedForm::zero(om, 1)).expect("0 is idempotent")
    }

    pub fn form(&self) -> &FieldValuedForm {
        &self.p
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `P̄ = Id − P`.
    pub fn complement(&self, om: &Omega) -> Projection {
        let p = FieldValuedForm::identity(om).sub(&self.p).expect("both degree 1");
        Projection::new(om, p).expect("Id − P is idempotent")
    }

    /// `P(Ω_1)`.
    pub fn vertical(&self) -> Distribution {
        Distribution { space: self.matrix.image() }
    }

    /// `ker P`.
    pub fn horizontal(&self) -> Distribution {
        Distribution { space: self.matrix.kernel() }
    }
}

/// Idempotents of `End = Hom_A^A(Ω_1, Ω_1)`. `exhaustive` is true when every idempotent
/// was found (`dim End ≤ 2`, in closed form); larger spaces are searched on a lattice.
#[derive(Debug, Clone)]
pub struct ProjectionSearch {
    pub endomorphism_dim: usize,
    pub projections: Vec<Projection>,
    pub exhaustive: bool,
}

const LATTICE: [(i64, i64); 7] = [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)];
const LATTICE_BUDGET: usize = 20_000;

fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Scalar::new(n, d))
}

fn flat(m: &Matrix) -> Vec<Scalar> {
    (0..m.rows()).flat_map(|r| m.row(r).to_vec()).collect()
}

pub fn find_projections(om: &Omega) -> Result<ProjectionSearch> {
    let dim1 = om.check_dim(1)?;
    let id = FieldValuedForm::identity(om);
    if dim1 == 0 {
        return Ok(ProjectionSearch { endomorphism_dim: 0, projections: vec![Projection::zero(om)], exhaustive: true });
    }
    // basis Id, X_1, … of End
    let raw = field_valued_space(om, 1)?;
    let mut span = SpanBuilder::new(dim1 * dim1);
    let mut basis: Vec<(FieldValuedForm, Matrix)> = Vec::new();
    for k in std::iter::once(id.clone()).chain(raw) {
        let m = k.matrix(om)?;
        if span.insert(flat(&m)) {
            basis.push((k, m));
        }
    }
    let r = basis.len();
    let coords_matrix = Matrix::from_columns(&basis.iter().map(|(_, m)| flat(m)).collect::<Vec<_>>(), dim1 * dim1)?;
    // structure constants X_i X_j = Σ c_ij^k X_k
    let mut prod = vec![vec![vec![Scalar::zero(); r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            let xy = basis[i].1.mul(&basis[j].1)?;
            let (c, _) =
                solve_linear(&coords_matrix, &flat(&xy))?.ok_or_else(|| Error::Input("End(Ω_1) not closed under composition".into()))?;
            prod[i][j] = c;
        }
    }
    let is_idempotent = |c: &[Scalar]| {
        let mut sq = vec![Scalar::zero(); r];
        for i in (0..r).filter(|&i| !c[i].is_zero()) {
            for j in (0..r).filter(|&j| !c[j].is_zero()) {
                let cij = &c[i] * &c[j];
                for (k, s) in sq.iter_mut().enumerate() {
                    if !prod[i][j][k].is_zero() {
                        *s += &cij * &prod[i][j][k];
                    }
                }
            }
        }
        sq == c
    };
    let mut found: Vec<Vec<Scalar>> = Vec::new();
    let push = |c: Vec<Scalar>, found: &mut Vec<Vec<Scalar>>| {
        if !found.contains(&c) {
            found.push(c);
        }
    };
    let zero = vec![Scalar::zero(); r];
    let mut unit = zero.clone();
    unit[0] = scalar::one();
    push(zero.clone(), &mut found);
    push(unit, &mut found);
    let exhaustive = match r {
        1 => true,
        2 => {
            // P = a + bX with X² = α + βX: b = 0, or b²(β² + 4α) = 1 and a = (1 − bβ)/2
            let (alpha, beta) = (prod[1][1][0].clone(), prod[1][1][1].clone());
            let disc = &beta * &beta + scalar::int(4) * &alpha;
            if let Some(s) = rational_sqrt(&disc).filter(|s| !s.is_zero()) {
                let b = scalar::one() / s;
                for b in [b.clone(), -b] {
                    let a = (scalar::one() - &b * &beta) / scalar::int(2);
                    push(vec![a, b], &mut found);
                }
            }
            true
        }
        _ => {
            let lattice: Vec<Scalar> = LATTICE.iter().map(|&(n, d)| ratio(n, d)).collect();
            let full = LATTICE.len().checked_pow(r as u32).filter(|&n| n <= LATTICE_BUDGET).is_some();
            let max_support = if full { r - 1 } else { 2 };
            let mut support: Vec<usize> = Vec::new();
            subsets(r, max_support, 1, &mut support, &mut |sup| {
                for a in &lattice {
                    let mut c = zero.clone();
                    c[0] = a.clone();
                    fill(sup, 0, &lattice[1..], &mut c, &mut |c| {
                        if is_idempotent(c) {
                            push(c.to_vec(), &mut found);
                        }
                    });
                }
            });
            false
        }
    };
    let projections = found
        .into_iter()
        .map(|c| {
            let mut p = FieldValuedForm::zero(om, 1);
            for (ci, (k, _)) in c.iter().zip(&basis) {
                if !ci.is_zero() {
                    p = p.add(&k.scale(ci)).expect("degree 1");
                }
            }
            Projection::new(om, p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectionSearch { endomorphism_dim: r, projections, exhaustive })
}

/// Calls `visit` with every increasing index set in `start..r` of size `≤ max`.
fn subsets(r: usize, max: usize, start: usize, current: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    visit(current);
    if current.len() == max {
        return;
    }
    for i in start..r {
        current.push(i);
        subsets(r, max, i + 1, current, visit);
        current.pop();
    }
}

/// Assigns every combination of `values` to the positions `sup[pos..]`.
fn fill(sup: &[usize], pos: usize, values: &[Scalar], c: &mut Vec<Scalar>, visit: &mut dyn FnMut(&[Scalar])) {
    if pos == sup.len() {
        visit(c);
        return;
    }
    for v in values {
        c[sup[pos]] = v.clone();
        fill(sup, pos + 1, values, c, visit);
    }
    c[sup[pos]] = Scalar::zero();
}

/// `Ω(P)` on a homogeneous form: the algebra map induced by `P` on `Ω_1`, identity on `A`.
pub fn induced_map(om: &Omega, p: &FieldValuedForm, w: &Form) -> Form {
    let k = w.degree();
    if k == 0 {
        return w.clone();
    }
    let mut out = Form::zero(k);
    for (idx, c) in w.terms() {
        let (i, js) = om.decode(k, idx);
        let mut acc = p.apply_one_form(om, &Form::basis(1, om.index(i, &js[..1])));
        for &j in &js[1..] {
            acc = om.mul(&acc, p.delta(j));
        }
        out.axpy(c, &acc);
    }
    out
}

/// `[P,P]`, `R = [P,P]∘P` and `R̄ = [P,P]∘P̄`.
#[derive(Debug, Clone)]
pub struct Curvature {
    pub bracket: FieldValuedForm,
    pub r: FieldValuedForm,
    pub rbar: FieldValuedForm,
}

pub fn curvature(om: &Omega, p: &Projection) -> Curvature {
    let bracket = fn_bracket(om, &p.p, &p.p);
    let pbar = p.complement(om);
    let r = compose_contraction(om, &bracket, &p.p).expect("degree 2 after degree 1");
    let rbar = compose_contraction(om, &bracket, &pbar.p).expect("degree 2 after degree 1");
    Curvature { bracket, r, rbar }
}

fn kernel_of_induced(om: &Omega, p: &FieldValuedForm, r: usize) -> Result<Subspace> {
    Ok(om.matrix_of(r, r, |w| induced_map(om, p, w))?.kernel())
}

/// Names of the two involutivity checks with vertical and horizontal exchanged; reported,
/// but not expected to hold.
pub const OPPOSITE_INVOLUTIVITY: [&str; 2] =
    ["R = 0 iff ker P involutive (opposite pairing)", "Rbar = 0 iff im P involutive (opposite pairing)"];

/// The curvature lemma: both closed formulas, ideals as kernels of `Ω(P)` to degree `n`,
/// and the involutivity criterion in both pairings.
pub fn check_projection_curvature(om: &Omega, p: &Projection, n: usize) -> Result<Vec<IdentityCheck>> {
    let c = curvature(om, p);
    let pbar = p.complement(om);
    let check = |name: &str, holds: bool| IdentityCheck { name: name.to_string(), holds };
    let minus_two = scalar::int(-2);
    let mut formula_r = true;
    let mut formula_rbar = true;
    for idx in 0..om.check_dim(1)? {
        let w = Form::basis(1, idx);
        let lhs = c.r.apply_one_form(om, &w);
        let rhs = induced_map(om, &pbar.p, &om.d(&p.p.apply_one_form(om, &w))).scale(&minus_two);
        formula_r &= lhs == rhs;
        let lhs = c.rbar.apply_one_form(om, &w);
        let rhs = induced_map(om, &p.p, &om.d(&pbar.p.apply_one_form(om, &w))).scale(&minus_two);
        formula_rbar &= lhs == rhs;
    }
    let mut ideals_ker = true;
    let mut ideals_im = true;
    let (ker_ideal, im_ideal) = (ideal_components(om, &p.horizontal(), n)?, ideal_components(om, &p.vertical(), n)?);
    for r in 1..=n {
        ideals_ker &= ker_ideal[r] == kernel_of_induced(om, &p.p, r)?;
        ideals_im &= im_ideal[r] == kernel_of_induced(om, &pbar.p, r)?;
    }
    let (r_zero, rbar_zero) = (c.r.is_zero(), c.rbar.is_zero());
    let (hor_inv, ver_inv) = (involutive(om, &p.horizontal())?, involutive(om, &p.vertical())?);
    Ok(vec![
        check("R(w) = -2 Omega(Pbar) d P w", formula_r),
        check("Rbar(w) = -2 Omega(P) d Pbar w", formula_rbar),
        check("(ker P) = ker Omega(P)", ideals_ker),
        check("(im P) = ker Omega(Pbar)", ideals_im),
        check(OPPOSITE_INVOLUTIVITY[0], r_zero == hor_inv),
        check(OPPOSITE_INVOLUTIVITY[1], rbar_zero == ver_inv),
        check("R = 0 iff im P involutive", r_zero == ver_inv),
        check("Rbar = 0 iff ker P involutive", rbar_zero == hor_inv),
    ])
}

/// `[P, R + R̄] = 0` and `2[R, P] = j_R∘R̄ + j_R̄∘R`, with the decomposition checks.
pub fn bianchi(om: &Omega, p: &Projection) -> Result<Vec<IdentityCheck>> {
    let c = curvature(om, p);
    let check = |name: &str, holds: bool| IdentityCheck { name: name.to_string(), holds };
    let sum = c.r.add(&c.rbar)?;
    let first = fn_bracket(om, &p.p, &sum).is_zero();
    let lhs = fn_bracket(om, &c.r, &p.p).scale(&scalar::int(2));
    let rhs = compose_contraction(om, &c.r, &c.rbar)?.add(&compose_contraction(om, &c.rbar, &c.r)?)?;
    let pbar = p.complement(om);
    Ok(vec![
        check("[P,P] = R + Rbar", sum == c.bracket),
        check("Rbar_P = R_Pbar", curvature(om, &pbar).r == c.rbar),
        check("[P, R + Rbar] = 0", first),
        check("2[R,P] = j_R Rbar + j_Rbar R", lhs == rhs),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn all_hold(checks: &[IdentityCheck], skip: &[&str]) {
        for c in checks {
            if !skip.contains(&c.name.as_str()) {
                assert!(c.holds, "{}", c.name);
            }
        }
    }

    #[test]
    fn kk_has_four_idempotents() {
        let om = Omega::new(builtins::product(&builtins::field(), &builtins::field()));
        let s = find_projections(&om).unwrap();
        assert_eq!(s.endomorphism_dim, 2);
        assert!(s.exhaustive);
        assert_eq!(s.projections.len(), 4);
    }

    #[test]
    fn dual_numbers_only_trivial() {
        let om = Omega::new(builtins::dual());
        let s = find_projections(&om).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.projections.len(), 2);
    }

    #[test]
    fn matrix_endomorphisms() {
        let om = Omega::new(builtins::matrix(2));
        let s = find_projections(&om).unwrap();
        assert_eq!(s.endomorphism_dim, 9);
        assert!(!s.exhaustive);
        assert!(s.projections.len() > 2);
    }

    #[test]
    fn trivial_projections_are_flat() {
        let om = Omega::new(builtins::upper(2));
        for p in [Projection::identity(&om), Projection::zero(&om)] {
            let c = curvature(&om, &p);
            assert!(c.r.is_zero() && c.rbar.is_zero());
            all_hold(&check_projection_curvature(&om, &p, 2).unwrap(), &[]);
            all_hold(&bianchi(&om, &p).unwrap(), &[]);
        }
    }

    #[test]
    fn non_idempotent_rejected() {
        let om = Omega::new(builtins::dual());
        let two = FieldValuedForm::identity(&om).scale(&scalar::int(2));
        assert_eq!(Projection::new(&om, two), Err(Error::NotIdempotent));
    }

    #[test]
    fn enumerated_projections() {
        let algebras = [
            builtins::product(&builtins::field(), &builtins::field()),
            builtins::upper(2),
            builtins::truncpoly(3),
            builtins::group_algebra(&builtins::cyclic(2)),
        ];
        let mut opposite_fails = 0;
        for a in algebras {
            let om = Omega::new(a);
            for p in find_projections(&om).unwrap().projections {
                let l = check_projection_curvature(&om, &p, 3).unwrap();
                all_hold(&l, &OPPOSITE_INVOLUTIVITY);
                opposite_fails += l.iter().filter(|c| OPPOSITE_INVOLUTIVITY.contains(&c.name.as_str()) && !c.holds).count();
                all_hold(&bianchi(&om, &p).unwrap(), &[]);
            }
        }
        // the involutivity criterion holds with vertical and horizontal exchanged
        assert!(opposite_fails > 0);
    }
}
