//! Shared fixtures: the two counterexample Jacobi algebras.

#![allow(dead_code)]

use lrlab_core::algebra::{AlgElement, Algebra, Derivation, Monomial, Presentation};
use lrlab_core::field::Field;
use lrlab_core::jacobi::JacobiBracket;
use lrlab_core::F2;
use std::sync::Arc;

pub fn mono(exps: &[u32]) -> Monomial {
    Monomial { exps: exps.to_vec() }
}

/// Example 1: A = k[x,y]/<xy, x^2, y^2>, E(x) = y, E(y) = 0, bracket
/// {a,b} = a E(b) - E(a) b, distinguished element h = y. Works over any
/// field.
pub struct Example1<F: Field> {
    pub algebra: Arc<Algebra<F>>,
    pub e: Derivation<F>,
    pub bracket: JacobiBracket<F>,
    pub h: AlgElement<F>,
}

pub fn example1<F: Field>() -> Example1<F> {
    let p = Presentation {
        variables: vec!["x".into(), "y".into()],
        ideal: vec![mono(&[1, 1]), mono(&[2, 0]), mono(&[0, 2])],
        alt_table: None,
    };
    let algebra = Algebra::build(&p).unwrap();
    let y = algebra.basis_el(2);
    let e = Derivation::from_images(&algebra, &[y.clone(), algebra.zero()]).unwrap();
    let mut bracket = JacobiBracket::from_vector_field(algebra.clone(), &e);
    let report = bracket.verify(8);
    assert!(report.passed(), "example 1 bracket must be a valid Jacobi bracket: {report}");
    Example1 { algebra, e, bracket, h: y }
}

/// Example 2: A = Z2[x,y,z]/<x^4, y^6, z^2, x y^4, x^3 y, x^3 z> with
/// E(x) = E(z) = x^2, E(y) = 0, F(x) = F(z) = 0, F(y) = z, the pair
/// bracket {a,b} = E(a)F(b) - F(a)E(b) + aE(b) - E(a)b, and h = y^2.
pub struct Example2 {
    pub algebra: Arc<Algebra<F2>>,
    pub e: Derivation<F2>,
    pub f: Derivation<F2>,
    pub bracket: JacobiBracket<F2>,
    pub h: AlgElement<F2>,
}

pub fn example2() -> Example2 {
    let p = Presentation::<F2> {
        variables: vec!["x".into(), "y".into(), "z".into()],
        ideal: vec![
            mono(&[4, 0, 0]),
            mono(&[0, 6, 0]),
            mono(&[0, 0, 2]),
            mono(&[1, 4, 0]),
            mono(&[3, 1, 0]),
            mono(&[3, 0, 1]),
        ],
        alt_table: None,
    };
    let algebra = Algebra::build(&p).unwrap();
    let x2 = el(&algebra, &[2, 0, 0]);
    let z = el(&algebra, &[0, 0, 1]);
    let e = Derivation::from_images(&algebra, &[x2.clone(), algebra.zero(), x2]).unwrap();
    let f = Derivation::from_images(&algebra, &[algebra.zero(), z, algebra.zero()]).unwrap();
    let mut bracket = JacobiBracket::from_derivation_pair(algebra.clone(), &e, &f);
    let report = bracket.verify(8);
    assert!(report.passed(), "example 2 bracket must be a valid Jacobi bracket: {report}");
    let h = el(&algebra, &[0, 2, 0]);
    Example2 { algebra, e, f, bracket, h }
}

/// Basis element of a monomial quotient by exponent vector.
pub fn el<F: Field>(algebra: &Arc<Algebra<F>>, exps: &[u32]) -> AlgElement<F> {
    let i = algebra
        .monomial_index(&mono(exps))
        .unwrap_or_else(|| panic!("{exps:?} is not a standard monomial"));
    algebra.basis_el(i)
}

pub fn idx<F: Field>(algebra: &Arc<Algebra<F>>, exps: &[u32]) -> usize {
    algebra.monomial_index(&mono(exps)).unwrap()
}
