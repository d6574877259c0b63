//! Classical values, computed by hand or quoted from the standard examples.

use ncdiff::builtins;
use ncdiff::forms::{de_rham, Omega};
use ncdiff::hochschild::cohomology;
use ncdiff::{Bimodule, Execution};

fn hh(name: &str, expected: &[usize]) {
    let a = builtins::roster().into_iter().find(|(n, _)| *n == name).unwrap().1;
    let om = Omega::new(a.clone());
    let module = Bimodule::regular(&a);
    for (n, &want) in expected.iter().enumerate() {
        let r = cohomology(&om, &module, n, Execution::default()).unwrap();
        assert!(r.agree, "{name}, n = {n}");
        assert_eq!(r.dim_hn_complex, want, "{name}, HH^{n}");
    }
}

#[test]
fn semisimple_algebras_are_rigid() {
    hh("field", &[1, 0, 0, 0]);
    hh("kk", &[2, 0, 0, 0]);
    hh("cyclic(2)", &[2, 0, 0, 0]);
    hh("matrix(2)", &[1, 0, 0]);
}

#[test]
fn upper_triangular_is_hereditary_with_trivial_center() {
    hh("upper(2)", &[1, 0, 0, 0]);
}

#[test]
fn truncated_polynomials_are_periodic() {
    // k[x]/(x^n) in characteristic 0: HH^0 = n, HH^i = n - 1 for i >= 1
    hh("dual", &[2, 1, 1, 1]);
    hh("truncpoly(3)", &[3, 2, 2, 2]);
}

#[test]
fn free_bimodule_coefficients() {
    // A is projective over A ⊗ A^op when semisimple, so H^n(A, A ⊗ A) = 0 for n >= 1
    let a = builtins::matrix(2);
    let om = Omega::new(a.clone());
    for n in 1..=2 {
        let r = cohomology(&om, &Bimodule::free(&a), n, Execution::default()).unwrap();
        assert!(r.agree);
        assert_eq!(r.dim_hn_complex, 0);
    }
}

#[test]
fn de_rham_of_the_ground_field() {
    let om = Omega::new(builtins::field());
    let r = de_rham(&om, 3, Execution::default()).unwrap();
    assert_eq!(r.form_dims, vec![1, 0, 0, 0]);
    assert_eq!(r.homology, vec![1, 0, 0]);
    assert!(r.d_squared_zero && r.d_preserves_commutators);
}

#[test]
fn omega_dims_of_three_dimensional_algebras() {
    for a in [builtins::truncpoly(3), builtins::upper(2)] {
        let om = Omega::new(a);
        assert_eq!((0..=4).map(|k| om.dim(k)).collect::<Vec<_>>(), vec![3, 6, 12, 24, 48]);
    }
}
