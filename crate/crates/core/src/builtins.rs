//! Built-in algebra families. Every constructor returns a validated algebra whose
//! first basis element is the unit.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{Algebra, StructureTable};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::scalar::{one, Scalar};

fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = one();
    v
}

fn build(table: StructureTable) -> Arc<Algebra> {
    Arc::new(Algebra::new(table).expect("built-in tables are valid"))
}

/// The ground field 𝕂.
pub fn field() -> Arc<Algebra> {
    let mut t = StructureTable::zero(vec!["1".into()]);
    t.set(0, 0, 0, one());
    build(t)
}

/// Dual numbers 𝕂[e]/(e²).
pub fn dual() -> Arc<Algebra> {
    truncpoly_named(2, &["1", "e"])
}

/// 𝕂[x]/(xⁿ) with basis 1, x, x2, …
pub fn truncpoly(n: usize) -> Arc<Algebra> {
    let names: Vec<String> = (0..n.max(1))
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x{k}"),
        })
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    truncpoly_named(n.max(1), &refs)
}

fn truncpoly_named(n: usize, names: &[&str]) -> Arc<Algebra> {
    let mut t = StructureTable::zero(names.iter().map(|s| s.to_string()).collect());
    for i in 0..n {
        for j in 0..n - i {
            t.set(i, j, i + j, one());
        }
    }
    build(t)
}

fn unit_label(i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("e{i}{j}")
    } else {
        format!("e{i}_{j}")
    }
}

/// Full matrix algebra over the matrix units, rebased so that `1 = Σ E_ii` comes first
/// and `E_11` is dropped: for n = 2 the basis is 1, e12, e21, e22.
pub fn matrix(n: usize) -> Arc<Algebra> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    matrix_like(n, &cells)
}

/// Upper triangular n×n matrices, same conventions as [`matrix`].
pub fn upper(n: usize) -> Arc<Algebra> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    matrix_like(n, &cells)
}

fn matrix_like(n: usize, cells: &[(usize, usize)]) -> Arc<Algebra> {
    assert!(n >= 1, "matrix size must be positive");
    let d = cells.len();
    let index = |i: usize, j: usize| cells.iter().position(|&c| c == (i, j));
    let mut raw = StructureTable::zero(cells.iter().map(|&(i, j)| unit_label(i + 1, j + 1, n)).collect());
    for (a, &(i, j)) in cells.iter().enumerate() {
        for (b, &(k, l)) in cells.iter().enumerate() {
            if j == k {
                let c = index(i, l).expect("closed under products");
                raw.set(a, b, c, one());
            }
        }
    }
    let mut unit = vec![Scalar::zero(); d];
    for i in 0..n {
        unit[index(i, i).expect("diagonal present")] = one();
    }
    let mut basis = vec![unit];
    let mut names = vec!["1".to_string()];
    for (a, name) in raw.names.iter().enumerate().skip(1) {
        basis.push(unit_vec(d, a));
        names.push(name.clone());
    }
    build(raw.rebase(&basis, names).expect("unit plus the other matrix units form a basis"))
}

/// `A × B` with componentwise product. Basis: `1 = (1,1)`, then `(a_i, 0)` for i ≥ 1,
/// then `(0, 1)`, then `(0, b_j)` for j ≥ 1.
pub fn product(a: &Algebra, b: &Algebra) -> Arc<Algebra> {
    let (ma, mb) = (a.dim(), b.dim());
    let d = ma + mb;
    let mut raw = StructureTable::zero((0..d).map(|i| i.to_string()).collect());
    for i in 0..ma {
        for j in 0..ma {
            for (k, c) in a.product_terms(i, j) {
                raw.set(i, j, *k, c.clone());
            }
        }
    }
    for i in 0..mb {
        for j in 0..mb {
            for (k, c) in b.product_terms(i, j) {
                raw.set(ma + i, ma + j, ma + k, c.clone());
            }
        }
    }
    let mut unit = unit_vec(d, 0);
    unit[ma] = one();
    let mut basis = vec![unit];
    let mut names = vec!["1".to_string()];
    for i in 1..ma {
        basis.push(unit_vec(d, i));
        names.push(format!("l.{}", a.names()[i]));
    }
    basis.push(unit_vec(d, ma));
    names.push("r.1".into());
    for j in 1..mb {
        basis.push(unit_vec(d, ma + j));
        names.push(format!("r.{}", b.names()[j]));
    }
    build(raw.rebase(&basis, names).expect("product basis"))
}

pub fn opposite(a: &Algebra) -> Arc<Algebra> {
    Arc::new(a.opposite())
}

/// Group algebra 𝕂[G]; basis is the group elements with the identity first.
pub fn group_algebra(g: &FiniteGroup) -> Arc<Algebra> {
    let n = g.order();
    let mut t = StructureTable::zero(g.names().to_vec());
    for i in 0..n {
        for j in 0..n {
            t.set(i, j, g.mul(i, j), one());
        }
    }
    build(t)
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let names: Vec<String> = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{k}"),
        })
        .collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::new(names, table).expect("cyclic table is a group")
}

/// Looks up a builtin family by name and integer parameters.
pub fn by_name(name: &str, params: &[usize]) -> Result<Arc<Algebra>> {
    let arity = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::Input(format!("builtin {name} takes {k} parameter(s), got {}", params.len())))
        }
    };
    let positive = |p: usize| {
        if p == 0 {
            Err(Error::Input(format!("builtin {name} needs a positive parameter")))
        } else {
            Ok(p)
        }
    };
    match name {
        "field" | "k" => arity(0).map(|_| field()),
        "dual" => arity(0).map(|_| dual()),
        "truncpoly" => {
            arity(1)?;
            Ok(truncpoly(positive(params[0])?))
        }
        "matrix" => {
            arity(1)?;
            Ok(matrix(positive(params[0])?))
        }
        "upper" => {
            arity(1)?;
            Ok(upper(positive(params[0])?))
        }
        "cyclic" | "group_algebra" => {
            arity(1)?;
            Ok(group_algebra(&cyclic(positive(params[0])?)))
        }
        "kk" => arity(0).map(|_| product(&field(), &field())),
        _ => Err(Error::Input(format!("unknown builtin {name}"))),
    }
}

/// Names accepted by [`by_name`] together with their parameter counts.
pub const BUILTIN_NAMES: &[(&str, usize)] =
    &[("field", 0), ("dual", 0), ("truncpoly", 1), ("matrix", 1), ("upper", 1), ("cyclic", 1), ("kk", 0)];

/// The desk-scale roster: 𝕂, dual numbers, 𝕂[x]/(x³), 𝕂×𝕂, M_2, 𝕂[C_2], upper(2).
pub fn roster() -> Vec<(&'static str, Arc<Algebra>)> {
    vec![
        ("field", field()),
        ("dual", dual()),
        ("truncpoly(3)", truncpoly(3)),
        ("kk", product(&field(), &field())),
        ("matrix(2)", matrix(2)),
        ("cyclic(2)", group_algebra(&cyclic(2))),
        ("upper(2)", upper(2)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn coords(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn dims() {
        assert_eq!(field().dim(), 1);
        assert_eq!(dual().dim(), 2);
        assert_eq!(truncpoly(3).dim(), 3);
        assert_eq!(matrix(2).dim(), 4);
        assert_eq!(matrix(3).dim(), 9);
        assert_eq!(upper(2).dim(), 3);
        assert_eq!(upper(3).dim(), 6);
        assert_eq!(product(&dual(), &dual()).dim(), 4);
        assert_eq!(group_algebra(&cyclic(3)).dim(), 3);
    }

    #[test]
    fn truncpoly_relation() {
        let a = truncpoly(3);
        assert_eq!(a.mul_basis_coords(1, 2), coords(&[0, 0, 0]));
        assert_eq!(a.mul_basis_coords(1, 1), coords(&[0, 0, 1]));
    }

    #[test]
    fn product_is_componentwise() {
        let p = product(&dual(), &dual());
        // basis 1, l.e, r.1, r.e
        assert_eq!(p.mul_basis_coords(1, 3), coords(&[0, 0, 0, 0]));
        assert_eq!(p.mul_basis_coords(2, 2), coords(&[0, 0, 1, 0]));
        assert_eq!(p.mul_basis_coords(2, 3), coords(&[0, 0, 0, 1]));
        assert_eq!(p.mul_basis_coords(2, 1), coords(&[0, 0, 0, 0]));
        assert!(p.is_commutative());
    }

    #[test]
    fn matrix_rebased_first_unit() {
        let a = matrix(2);
        assert_eq!(a.names(), &["1", "e12", "e21", "e22"]);
        // e12·e21 = E11 = 1 − e22
        assert_eq!(a.mul_basis_coords(1, 2), coords(&[1, 0, 0, -1]));
        assert!(!a.is_commutative());
    }

    #[test]
    fn unknown_builtin() {
        assert!(by_name("nope", &[]).is_err());
        assert!(by_name("matrix", &[]).is_err());
        assert_eq!(by_name("matrix", &[2]).unwrap().dim(), 4);
    }
}
