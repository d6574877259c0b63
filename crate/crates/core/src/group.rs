//! Finite groups by multiplication table and their actions on algebras by automorphisms.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraHom};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Element 0 must be the identity.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = names.len();
        let bad = |msg: String| Err(Error::InvalidAction(msg));
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad(format!("group table must be {n}×{n} with entries below {n}"));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return bad(format!("element {} is not fixed by the identity", names[g]));
            }
            if !(0..n).any(|h| table[g][h] == 0 && table[h][g] == 0) {
                return bad(format!("element {} has no inverse", names[g]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("table is not associative on ({}, {}, {})", names[a], names[b], names[c]));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup { names: vec!["1".into()], table: vec![vec![0]] }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.table[g][h] == 0).expect("validated group")
    }
}

/// A homomorphism `G → Aut(A)`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    algebra: Arc<Algebra>,
    group: FiniteGroup,
    maps: Vec<AlgebraHom>,
}

impl GroupAction {
    pub fn new(algebra: Arc<Algebra>, group: FiniteGroup, matrices: Vec<Matrix>) -> Result<GroupAction> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidAction(format!("expected {} matrices", group.order())));
        }
        let mut maps = Vec::with_capacity(matrices.len());
        for (g, mat) in matrices.into_iter().enumerate() {
            let name = &group.names()[g];
            let hom = AlgebraHom::new(algebra.clone(), algebra.clone(), mat)
                .map_err(|e| Error::InvalidAction(format!("λ({name}) is not an algebra map: {e}")))?;
            if !hom.is_automorphism() {
                return Err(Error::InvalidAction(format!("λ({name}) is not invertible")));
            }
            maps.push(hom);
        }
        if maps[0] != AlgebraHom::identity(&algebra) {
            return Err(Error::InvalidAction("the identity must act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if maps[group.mul(g, h)].matrix() != &maps[g].matrix().mul(maps[h].matrix())? {
                    let n = group.names();
                    return Err(Error::InvalidAction(format!("λ({0}{1}) ≠ λ({0})λ({1})", n[g], n[h])));
                }
            }
        }
        Ok(GroupAction { algebra, group, maps })
    }

    pub fn trivial(algebra: &Arc<Algebra>) -> GroupAction {
        GroupAction { algebra: algebra.clone(), group: FiniteGroup::trivial(), maps: vec![AlgebraHom::identity(algebra)] }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn map(&self, g: usize) -> &AlgebraHom {
        &self.maps[g]
    }

    /// The fixed subalgebra `A^G`.
    pub fn fixed_subalgebra(&self) -> Subspace {
        let m = self.algebra.dim();
        let mut rows = Vec::new();
        for hom in &self.maps[1..] {
            let diff = hom.matrix().sub(&Matrix::identity(m)).expect("square");
            rows.extend((0..m).map(|r| diff.row(r).to_vec()));
        }
        if rows.is_empty() {
            return Subspace::full(m);
        }
        Matrix::from_rows(rows, m).expect("rows sized").kernel()
    }
}
