//! Distributions in `Ω_1(A)`, projections with their curvature and cocurvature, and
//! bundles `B ⊆ A` with finite structure groups.
//!
//! Conventions: for a projection `P`, the vertical distribution is `P(Ω_1)` and the
//! horizontal one is `ker P`.

mod bundle;
mod projection;

use crate::error::{Error, Result};
use crate::forms::{Form, Omega};
use crate::linalg::{SpanBuilder, Subspace};

pub use bundle::{connection_check, horizontal_forms, lambda_commutes_with_d, splitting_row_holds, Bundle, ConnectionReport};
pub use projection::{
    bianchi, check_projection_curvature, curvature, find_projections, induced_map, Curvature, Projection, ProjectionSearch,
    OPPOSITE_INVOLUTIVITY,
};

/// A sub-bimodule of `Ω_1(A)`, in dense coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    space: Subspace,
}

impl Distribution {
    pub fn new(om: &Omega, space: Subspace) -> Result<Distribution> {
        if space.ambient_dim() != om.dim(1) {
            return Err(Error::DimensionMismatch { expected: om.dim(1), got: space.ambient_dim() });
        }
        if !is_distribution(om, &space)? {
            return Err(Error::InvalidBimodule("subspace of Ω_1 is not stable under both actions".into()));
        }
        Ok(Distribution { space })
    }

    pub fn zero(om: &Omega) -> Distribution {
        Distribution { space: Subspace::zero(om.dim(1)) }
    }

    pub fn full(om: &Omega) -> Distribution {
        Distribution { space: Subspace::full(om.dim(1)) }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn forms(&self, om: &Omega) -> Vec<Form> {
        self.space.basis().iter().map(|v| om.from_dense(1, v).expect("sized to Ω_1")).collect()
    }
}

fn action_images(om: &Omega, f: &Form) -> Vec<Form> {
    (1..om.m()).flat_map(|i| [om.left_basis(i, f), om.right_basis(f, i)]).collect()
}

pub fn is_distribution(om: &Omega, s: &Subspace) -> Result<bool> {
    for v in s.basis() {
        let f = om.from_dense(1, v)?;
        for g in action_images(om, &f) {
            if !s.contains(&om.to_dense(&g))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest distribution containing the given 1-forms.
pub fn bimodule_span(om: &Omega, generators: &[Form]) -> Result<Distribution> {
    let dim = om.check_dim(1)?;
    let mut span = SpanBuilder::new(dim);
    let mut queue: Vec<Form> = Vec::new();
    for g in generators {
        if g.degree() != 1 {
            return Err(Error::Degree(format!("distribution generators must be 1-forms, got degree {}", g.degree())));
        }
        if span.insert(om.to_dense(g)) {
            queue.push(g.clone());
        }
    }
    while let Some(f) = queue.pop() {
        for g in action_images(om, &f) {
            if span.insert(om.to_dense(&g)) {
                queue.push(g);
            }
        }
    }
    Ok(Distribution { space: span.finish() })
}

/// Degree components `I_0, …, I_n` of the graded ideal generated by `D`, via
/// `I_r = Ω_1·I_{r−1} + D·Ω_{r−1}`.
pub fn ideal_components(om: &Omega, d: &Distribution, n: usize) -> Result<Vec<Subspace>> {
    let mut out = vec![Subspace::zero(om.dim(0))];
    if n == 0 {
        return Ok(out);
    }
    out.push(d.space.clone());
    let gens = d.forms(om);
    for r in 2..=n {
        let dim = om.check_dim(r)?;
        let mut span = SpanBuilder::new(dim);
        let prev: Vec<Form> = out[r - 1].basis().iter().map(|v| om.from_dense(r - 1, v)).collect::<Result<_>>()?;
        'outer: for a in 0..om.dim(1) {
            let w = Form::basis(1, a);
            for p in &prev {
                span.insert(om.to_dense(&om.mul(&w, p)));
                if span.is_full() {
                    break 'outer;
                }
            }
        }
        if !span.is_full() {
            'outer2: for g in &gens {
                for b in 0..om.dim(r - 1) {
                    span.insert(om.to_dense(&om.mul(g, &Form::basis(r - 1, b))));
                    if span.is_full() {
                        break 'outer2;
                    }
                }
            }
        }
        out.push(span.finish());
    }
    Ok(out)
}

/// `d(D) ⊆ (D)_2`.
pub fn involutive(om: &Omega, d: &Distribution) -> Result<bool> {
    let ideal = ideal_components(om, d, 2)?;
    for g in d.forms(om) {
        if !ideal[2].contains(&om.to_dense(&om.d(&g)))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `d(I_r) ⊆ I_{r+1}` for all `r < n`; follows from [`involutive`] by Leibniz.
pub fn ideal_d_stable(om: &Omega, d: &Distribution, n: usize) -> Result<bool> {
    let ideal = ideal_components(om, d, n)?;
    for r in 1..n {
        for v in ideal[r].basis() {
            let dv = om.d(&om.from_dense(r, v)?);
            if !ideal[r + 1].contains(&om.to_dense(&dv))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The distribution generated by `d(B)`.
pub fn integrable_distribution(om: &Omega, b: &Subspace) -> Result<Distribution> {
    let gens: Vec<Form> = b.basis().iter().map(|v| om.d_element(v)).collect();
    bimodule_span(om, &gens)
}

pub fn globally_integrable(om: &Omega, d: &Distribution, b: &Subspace) -> Result<bool> {
    Ok(integrable_distribution(om, b)?.space == d.space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn trivial_distributions() {
        let om = Omega::new(builtins::matrix(2));
        for d in [Distribution::zero(&om), Distribution::full(&om)] {
            assert!(is_distribution(&om, d.space()).unwrap());
            assert!(involutive(&om, &d).unwrap());
        }
    }

    #[test]
    fn span_of_d_epsilon() {
        let om = Omega::new(builtins::dual());
        let de = Form::basis(1, om.index(0, &[1]));
        let single = Subspace::from_generators(om.dim(1), vec![om.to_dense(&de)]);
        assert!(!is_distribution(&om, &single).unwrap());
        let span = bimodule_span(&om, &[de]).unwrap();
        assert_eq!(span.dim(), 2);
        assert_eq!(bimodule_span(&om, &span.forms(&om)).unwrap(), span);
    }

    #[test]
    fn integrability_extremes() {
        let a = builtins::truncpoly(3);
        let om = Omega::new(a.clone());
        let full = Subspace::full(3);
        assert!(globally_integrable(&om, &Distribution::full(&om), &full).unwrap());
        let scalars = Subspace::from_generators(3, vec![a.unit_coords()]);
        assert!(globally_integrable(&om, &Distribution::zero(&om), &scalars).unwrap());
        assert!(!globally_integrable(&om, &Distribution::full(&om), &scalars).unwrap());
    }

    #[test]
    fn kk_diagonal_integrates_to_zero() {
        let a = builtins::product(&builtins::field(), &builtins::field());
        let om = Omega::new(a.clone());
        let diag = Subspace::from_generators(2, vec![a.unit_coords()]);
        assert_eq!(integrable_distribution(&om, &diag).unwrap().dim(), 0);
    }

    #[test]
    fn full_ideal_is_everything() {
        let om = Omega::new(builtins::dual());
        let ideal = ideal_components(&om, &Distribution::full(&om), 3).unwrap();
        assert!(ideal[2].is_full() && ideal[3].is_full());
        assert!(ideal_d_stable(&om, &Distribution::full(&om), 3).unwrap());
    }
}
