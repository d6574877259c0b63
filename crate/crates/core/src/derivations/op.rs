use std::sync::Arc;

use dashmap::DashMap;

use super::FieldValuedForm;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::forms::{Form, Omega};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

/// `j_K` and `L_K` of one field valued form, memoized on basis forms.
pub struct Atom {
    k: FieldValuedForm,
    j_cache: DashMap<(usize, usize), Arc<Form>>,
    l_cache: DashMap<(usize, usize), Arc<Form>>,
}

impl Atom {
    fn new(k: FieldValuedForm) -> Arc<Atom> {
        Arc::new(Atom { k, j_cache: DashMap::new(), l_cache: DashMap::new() })
    }

    fn j_basis(&self, om: &Omega, l: usize, idx: usize) -> Arc<Form> {
        if let Some(hit) = self.j_cache.get(&(l, idx)) {
            return hit.clone();
        }
        let out = Arc::new(contract_basis(om, &self.k, l, idx));
        self.j_cache.insert((l, idx), out.clone());
        out
    }

    fn j(&self, om: &Omega, w: &Form) -> Form {
        let mut out = Form::zero(j_degree(&self.k, w.degree()));
        for (idx, c) in w.terms() {
            out.axpy(c, &self.j_basis(om, w.degree(), idx));
        }
        out
    }

    fn l(&self, om: &Omega, w: &Form) -> Form {
        let l = w.degree();
        let mut out = Form::zero(l + self.k.degree());
        for (idx, c) in w.terms() {
            let hit = self.l_cache.get(&(l, idx)).map(|h| h.clone());
            let img = hit.unwrap_or_else(|| {
                let f = Form::basis(l, idx);
                let q = self.k.degree() as i64;
                let mut v = self.j(om, &om.d(&f));
                if l > 0 {
                    v.axpy(&-scalar::sign(q - 1), &om.d(&self.j(om, &f)));
                }
                let v = Arc::new(v);
                self.l_cache.insert((l, idx), v.clone());
                v
            });
            out.axpy(c, &img);
        }
        out
    }
}

fn j_degree(k: &FieldValuedForm, l: usize) -> usize {
    if l == 0 {
        k.degree().saturating_sub(1)
    } else {
        l + k.degree() - 1
    }
}

/// `j_K(a_0 de_{j_1}…de_{j_l}) = Σ_t (−1)^{t(q−1)} (a_0 de_{j_1}…de_{j_{t−1}})·K(de_{j_t})·de_{j_{t+1}}…`,
/// with `t` counted from 0 and `q = deg K`.
fn contract_basis(om: &Omega, k: &FieldValuedForm, l: usize, idx: usize) -> Form {
    let q = k.degree();
    let mut out = Form::zero(j_degree(k, l));
    if l == 0 {
        return out;
    }
    let n = om.m() - 1;
    let (i, js) = om.decode(l, idx);
    for t in 0..l {
        let prefix = Form::basis(t, om.index(i, &js[..t]));
        let middle = om.mul(&prefix, k.delta(js[t]));
        let rest = l - t - 1;
        let tail = js[t + 1..].iter().fold(0, |acc, &j| acc * n + (j - 1));
        let shift = n.pow(rest as u32);
        let s = scalar::sign((t * (q + 1)) as i64);
        for (p, c) in middle.terms() {
            out.add_term(p * shift + tail, &s * c);
        }
    }
    out
}

/// A homogeneous linear operator on `Ω_*(A)`, built from `d`, `j_K`, `L_K`, sums and
/// compositions. Evaluation is exact on sparse forms.
#[derive(Clone)]
pub enum GradedOp {
    D,
    J(Arc<Atom>),
    L(Arc<Atom>),
    Sum {
        degree: i64,
        terms: Vec<(Scalar, GradedOp)>,
    },
    /// `outer ∘ inner`
    Compose(Box<GradedOp>, Box<GradedOp>),
    /// Per-degree matrices `Ω_j → Ω_{j+degree}` for `j ≤ maps.len() − 1`.
    Table {
        degree: i64,
        maps: Arc<Vec<Matrix>>,
    },
}

impl std::fmt::Debug for GradedOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GradedOp::D => write!(f, "d"),
            GradedOp::J(a) => write!(f, "j(K{})", a.k.degree()),
            GradedOp::L(a) => write!(f, "L(K{})", a.k.degree()),
            GradedOp::Sum { terms, .. } => f.debug_list().entries(terms.iter().map(|(c, o)| (scalar::to_string(c), o))).finish(),
            GradedOp::Compose(a, b) => write!(f, "({a:?} ∘ {b:?})"),
            GradedOp::Table { degree, maps } => write!(f, "table(degree {degree}, {} maps)", maps.len()),
        }
    }
}

impl GradedOp {
    pub fn j(k: FieldValuedForm) -> GradedOp {
        GradedOp::J(Atom::new(k))
    }

    pub fn l(k: FieldValuedForm) -> GradedOp {
        GradedOp::L(Atom::new(k))
    }

    pub fn zero(degree: i64) -> GradedOp {
        GradedOp::Sum { degree, terms: Vec::new() }
    }

    pub fn degree(&self) -> i64 {
        match self {
            GradedOp::D => 1,
            GradedOp::J(a) => a.k.degree() as i64 - 1,
            GradedOp::L(a) => a.k.degree() as i64,
            GradedOp::Sum { degree, .. } | GradedOp::Table { degree, .. } => *degree,
            GradedOp::Compose(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn lin(terms: Vec<(Scalar, GradedOp)>) -> Result<GradedOp> {
        let degree = terms.first().map(|(_, o)| o.degree()).ok_or_else(|| Error::Degree("empty combination".into()))?;
        if terms.iter().any(|(_, o)| o.degree() != degree) {
            return Err(Error::Degree("combination of operators of different degrees".into()));
        }
        Ok(GradedOp::Sum { degree, terms })
    }

    pub fn plus(&self, other: &GradedOp) -> Result<GradedOp> {
        GradedOp::lin(vec![(scalar::one(), self.clone()), (scalar::one(), other.clone())])
    }

    pub fn minus(&self, other: &GradedOp) -> Result<GradedOp> {
        GradedOp::lin(vec![(scalar::one(), self.clone()), (scalar::int(-1), other.clone())])
    }

    pub fn then(&self, outer: &GradedOp) -> GradedOp {
        GradedOp::Compose(Box::new(outer.clone()), Box::new(self.clone()))
    }

    /// Graded commutator `[A, B] = A∘B − (−1)^{|A||B|} B∘A`.
    pub fn commutator(a: &GradedOp, b: &GradedOp) -> GradedOp {
        let s = scalar::sign(a.degree() * b.degree());
        GradedOp::Sum { degree: a.degree() + b.degree(), terms: vec![(scalar::one(), b.then(a)), (-s, a.then(b))] }
    }

    fn out_degree(&self, l: usize) -> Option<usize> {
        usize::try_from(l as i64 + self.degree()).ok()
    }

    /// Image of a homogeneous form; degrees below zero map to the zero 0-form.
    pub fn apply(&self, om: &Omega, w: &Form) -> Form {
        let Some(target) = self.out_degree(w.degree()) else {
            return Form::zero(0);
        };
        match self {
            GradedOp::D => om.d(w),
            GradedOp::J(a) => a.j(om, w),
            GradedOp::L(a) => a.l(om, w),
            GradedOp::Sum { terms, .. } => {
                let mut out = Form::zero(target);
                for (c, o) in terms {
                    let img = o.apply(om, w);
                    if img.degree() == target {
                        out.axpy(c, &img);
                    }
                }
                out
            }
            GradedOp::Compose(outer, inner) => {
                let mid = inner.apply(om, w);
                if inner.out_degree(w.degree()).is_none() {
                    return Form::zero(target);
                }
                outer.apply(om, &mid)
            }
            GradedOp::Table { maps, .. } => {
                let mat = maps.get(w.degree()).unwrap_or_else(|| panic!("table operator has no map on degree {}", w.degree()));
                let v = mat.mul_vec(&om.to_dense(w)).expect("table sized to Ω");
                om.from_dense(target, &v).expect("table sized to Ω")
            }
        }
    }

    /// Per-degree matrices up to `n`, as a [`GradedDerivation`] candidate.
    pub fn materialize(&self, om: &Omega, n: usize) -> Result<GradedDerivation> {
        let mut maps = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let target = self.out_degree(j).unwrap_or(0);
            maps.push(om.matrix_of(j, target, |w| {
                let img = self.apply(om, w);
                if img.degree() != target {
                    Form::zero(target)
                } else {
                    img
                }
            })?);
        }
        Ok(GradedDerivation { degree: self.degree(), maps })
    }
}

/// Degree `k` operator given by matrices `D_j: Ω_j → Ω_{j+k}`, `j ≤ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDerivation {
    pub degree: i64,
    pub maps: Vec<Matrix>,
}

impl GradedDerivation {
    pub fn truncation(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn op(&self) -> GradedOp {
        GradedOp::Table { degree: self.degree, maps: Arc::new(self.maps.clone()) }
    }
}

/// Exact equality of two operators on every basis form of `Ω_j`, `j ≤ n`.
pub fn ops_agree(om: &Omega, a: &GradedOp, b: &GradedOp, n: usize, exec: Execution) -> Result<bool> {
    if a.degree() != b.degree() {
        return Ok(false);
    }
    for j in 0..=n {
        let dim = om.check_dim(j)?;
        if !exec.all(dim, |idx| {
            let w = Form::basis(j, idx);
            let (x, y) = (a.apply(om, &w), b.apply(om, &w));
            x.sub(&y).is_zero()
        }) {
            return Ok(false);
        }
    }
    Ok(true)
}
