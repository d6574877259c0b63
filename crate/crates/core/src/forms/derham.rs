use serde::Serialize;

use super::{Form, Omega};
use crate::error::Result;
use crate::exec::Execution;
use crate::linalg::{Matrix, SpanBuilder, Subspace};

/// Span of graded commutators `[ω_p, ω_q]` of basis forms with `p + q = r`.
pub fn commutator_subspace(om: &Omega, r: usize, exec: Execution) -> Result<Subspace> {
    let dim = om.check_dim(r)?;
    let mut span = SpanBuilder::new(dim);
    for p in 0..=r {
        let q = r - p;
        // [ω_q, ω_p] = ±[ω_p, ω_q], so half the bidegrees suffice
        if q < p {
            break;
        }
        let (dp, dq) = (om.dim(p), om.dim(q));
        if dp == 0 || dq == 0 {
            continue;
        }
        let vectors = exec.map_range(dp * dq, |ab| {
            let (a, b) = (ab / dq, ab % dq);
            om.to_dense(&om.graded_commutator(&Form::basis(p, a), &Form::basis(q, b)))
        });
        for v in vectors {
            span.insert(v);
            if span.is_full() {
                return Ok(span.finish());
            }
        }
    }
    Ok(span.finish())
}

/// Image of a form in `Ω̄_r = Ω_r / [Ω, Ω]_r`, coordinates on the non-pivot columns.
pub fn graded_trace(om: &Omega, commutators: &Subspace, w: &Form) -> Vec<crate::scalar::Scalar> {
    commutators.quotient_coords(&om.to_dense(w))
}

/// Dimensions of the commutator-quotient complex and its homology up to the truncation degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeRham {
    pub truncation: usize,
    pub form_dims: Vec<usize>,
    pub commutator_dims: Vec<usize>,
    /// `dim H̄_p` for `p < N`.
    pub homology: Vec<usize>,
    /// Lower bound for `dim H̄_N`; exact computation would need degree `N+1`.
    pub top_lower_bound: usize,
    pub d_squared_zero: bool,
    pub d_preserves_commutators: bool,
}

fn d_images(om: &Omega, p: usize) -> Vec<Vec<crate::scalar::Scalar>> {
    (0..om.dim(p)).map(|a| om.to_dense(&om.d(&Form::basis(p, a)))).collect()
}

pub fn de_rham(om: &Omega, n: usize, exec: Execution) -> Result<DeRham> {
    for r in 0..=n {
        om.check_dim(r)?;
    }
    let comms: Vec<Subspace> = (0..=n).map(|r| commutator_subspace(om, r, exec)).collect::<Result<_>>()?;
    let mut homology = Vec::with_capacity(n);
    let mut preserves = true;
    let mut squared = true;
    for p in 0..=n {
        let dp = om.dim(p);
        let boundaries = if p == 0 {
            comms[0].clone()
        } else {
            let mut span = SpanBuilder::from_subspace(&comms[p]);
            for v in d_images(om, p - 1) {
                span.insert(v);
            }
            span.finish()
        };
        if p == n {
            // ker d_N = dΩ_{N−1} already lies in the boundaries, so this bound is what can be certified
            let mut span = SpanBuilder::from_subspace(&boundaries);
            for a in 0..dp {
                let f = Form::basis(p, a);
                if om.d(&f).is_zero() {
                    span.insert(om.to_dense(&f));
                }
            }
            let top = span.dim() - boundaries.dim();
            return Ok(DeRham {
                truncation: n,
                form_dims: (0..=n).map(|r| om.dim(r)).collect(),
                commutator_dims: comms.iter().map(Subspace::dim).collect(),
                homology,
                top_lower_bound: top,
                d_squared_zero: squared,
                d_preserves_commutators: preserves,
            });
        }
        let next = &comms[p + 1];
        // Z_p = d⁻¹(C_{p+1}) as the kernel of Ω_p → Ω_{p+1}/C_{p+1}
        let cols: Vec<Vec<_>> = d_images(om, p).iter().map(|v| next.quotient_coords(v)).collect();
        let qdim = om.dim(p + 1) - next.dim();
        let cycles_dim = if qdim == 0 || dp == 0 { dp } else { dp - Matrix::from_columns(&cols, qdim)?.rank() };
        homology.push(cycles_dim - boundaries.dim());
        for c in comms[p].basis() {
            let dc = om.d(&om.from_dense(p, c)?);
            if !next.contains(&om.to_dense(&dc))? {
                preserves = false;
            }
        }
        for a in 0..dp {
            if !om.d(&om.d(&Form::basis(p, a))).is_zero() {
                squared = false;
            }
        }
    }
    unreachable!("loop returns at p = n")
}
