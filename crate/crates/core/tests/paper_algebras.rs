//! The two example algebras, pinned against the published basis,
//! annihilator, image and bracket data.

mod common;

use common::{el, example1, example2, idx, mono};
use lrlab_core::algebra::AlgElement;
use lrlab_core::field::Field;
use lrlab_core::linalg::Subspace;
use lrlab_core::{Q, F2};

#[test]
fn example1_dims_over_q_and_gf2() {
    let e1q = example1::<Q>();
    assert_eq!(e1q.algebra.dim(), 3);
    let e1f2 = example1::<F2>();
    assert_eq!(e1f2.algebra.dim(), 3);
    // Ann({y}) = span{x, y} in both characteristics
    for ann in [
        e1q.algebra.annihilator(&[e1q.h.clone()]).unwrap().dim(),
        e1f2.algebra.annihilator(&[e1f2.h.clone()]).unwrap().dim(),
    ] {
        assert_eq!(ann, 2);
    }
}

#[test]
fn example1_bracket_and_hamiltonian() {
    let ex = example1::<Q>();
    let a = &ex.algebra;
    let (x, y) = (a.basis_el(1), a.basis_el(2));
    // {1, x} = y; {x, y} = 0
    assert_eq!(ex.bracket.eval(&a.one(), &x), y);
    assert!(ex.bracket.eval(&x, &y).is_zero());
    assert!(!ex.bracket.is_poisson());
    // Phi_a = a E(.): Phi_x(x) = x E(x) = xy = 0
    let phi_x = ex.bracket.hamiltonian(&x).unwrap();
    assert!(phi_x.apply(a, &x).is_zero());
    // Im(E) = span{y}
    assert_eq!(ex.e.image().dim(), 1);
    assert!(ex.e.image().contains(&y.to_row()).unwrap());
    assert!(ex.bracket.verify_hamiltonian_hom(8).passed());
}

#[test]
fn example2_basis_is_the_published_29_monomials() {
    let ex = example2();
    let a = &ex.algebra;
    assert_eq!(a.dim(), 29);
    let expected: Vec<&[u32]> = vec![
        &[0, 0, 0],
        &[1, 0, 0],
        &[2, 0, 0],
        &[3, 0, 0],
        &[0, 1, 0],
        &[0, 2, 0],
        &[0, 3, 0],
        &[0, 4, 0],
        &[0, 5, 0],
        &[0, 0, 1],
        &[1, 1, 0],
        &[2, 1, 0],
        &[1, 2, 0],
        &[1, 3, 0],
        &[2, 2, 0],
        &[2, 3, 0],
        &[1, 0, 1],
        &[2, 0, 1],
        &[0, 1, 1],
        &[0, 2, 1],
        &[0, 3, 1],
        &[0, 4, 1],
        &[0, 5, 1],
        &[1, 1, 1],
        &[2, 1, 1],
        &[1, 2, 1],
        &[1, 3, 1],
        &[2, 2, 1],
        &[2, 3, 1],
    ];
    let mut want: Vec<_> = expected.iter().map(|e| mono(e)).collect();
    let mut got: Vec<_> = a.basis_monomials().to_vec();
    want.sort_by(lrlab_core::algebra::Monomial::grlex_cmp);
    got.sort_by(lrlab_core::algebra::Monomial::grlex_cmp);
    assert_eq!(got, want);
}

#[test]
fn example2_products_reduce() {
    let ex = example2();
    let a = &ex.algebra;
    // x^3 * y^2 = 0 because x y^4 | ... no: x^3 y | x^3 y^2
    let x3 = el(a, &[3, 0, 0]);
    let y2 = el(a, &[0, 2, 0]);
    assert!(a.multiply(&x3, &y2).unwrap().is_zero());
    // x * y^3 stays standard
    let x = el(a, &[1, 0, 0]);
    let y3 = el(a, &[0, 3, 0]);
    assert_eq!(a.multiply(&x, &y3).unwrap(), el(a, &[1, 3, 0]));
}

fn span_of<F: Field>(els: &[AlgElement<F>], ambient: usize) -> Subspace<F> {
    Subspace::from_rows(els.iter().map(AlgElement::to_row).collect(), ambient)
}

#[test]
fn example2_annihilator_of_y2_is_the_13_published_monomials() {
    let ex = example2();
    let a = &ex.algebra;
    let ann = a.annihilator(&[ex.h.clone()]).unwrap();
    let published: Vec<&[u32]> = vec![
        &[3, 0, 0], // x^3
        &[0, 4, 0], // y^4
        &[0, 5, 0], // y^5
        &[1, 2, 0], // x y^2
        &[1, 3, 0], // x y^3
        &[2, 2, 0], // x^2 y^2
        &[2, 3, 0], // x^2 y^3
        &[0, 4, 1], // y^4 z
        &[0, 5, 1], // y^5 z
        &[1, 2, 1], // x y^2 z
        &[1, 3, 1], // x y^3 z
        &[2, 2, 1], // x^2 y^2 z
        &[2, 3, 1], // x^2 y^3 z
    ];
    let want = span_of(&published.iter().map(|e| el(a, e)).collect::<Vec<_>>(), a.dim());
    assert_eq!(ann.dim(), 13);
    assert_eq!(ann, want);
}

#[test]
fn example2_images_match_the_paper() {
    let ex = example2();
    let a = &ex.algebra;
    // Im(E): 8 spanning elements, inside x^2 A
    let img_e = ex.e.image();
    let mut x2z_x3 = el(a, &[2, 0, 1]);
    x2z_x3 = x2z_x3.add(&el(a, &[3, 0, 0]));
    let want_e = span_of(
        &[
            el(a, &[2, 0, 0]),
            el(a, &[2, 1, 0]),
            el(a, &[2, 2, 0]),
            el(a, &[2, 3, 0]),
            x2z_x3,
            el(a, &[2, 1, 1]),
            el(a, &[2, 2, 1]),
            el(a, &[2, 3, 1]),
        ],
        a.dim(),
    );
    assert_eq!(img_e.dim(), 8);
    assert_eq!(img_e, want_e);
    // Im(E) is contained in x^2 A
    let x2 = el(a, &[2, 0, 0]);
    let x2a = a.mult_op(&x2).column_space();
    assert!(x2a.contains_subspace(&img_e));

    // Im(F): the published 7 elements
    let want_f = span_of(
        &[
            el(a, &[0, 0, 1]),
            el(a, &[0, 2, 1]),
            el(a, &[0, 4, 1]),
            el(a, &[1, 0, 1]),
            el(a, &[2, 0, 1]),
            el(a, &[1, 2, 1]),
            el(a, &[2, 2, 1]),
        ],
        a.dim(),
    );
    assert_eq!(ex.f.image(), want_f);

    // Im(F o E) = span{x^2 z, x^2 y^2 z}
    let fe = ex.f.matrix.mul_mat(&ex.e.matrix);
    let want_fe = span_of(&[el(a, &[2, 0, 1]), el(a, &[2, 2, 1])], a.dim());
    assert_eq!(fe.column_space(), want_fe);

    // Im(E o F) = span{x^2, x^2 y^2, x^2 z + x^3, x^2 y^2 z}
    let ef = ex.e.matrix.mul_mat(&ex.f.matrix);
    let mut x2z_x3 = el(a, &[2, 0, 1]);
    x2z_x3 = x2z_x3.add(&el(a, &[3, 0, 0]));
    let want_ef = span_of(
        &[el(a, &[2, 0, 0]), el(a, &[2, 2, 0]), x2z_x3, el(a, &[2, 2, 1])],
        a.dim(),
    );
    assert_eq!(ef.column_space(), want_ef);
}

#[test]
fn example2_vanishing_products() {
    // E(a) F(E(b)) = 0 and E(a) E(F(b)) = 0 for all basis pairs: the
    // argument that makes the pair bracket a Jacobi bracket.
    let ex = example2();
    let a = &ex.algebra;
    let fe = ex.f.matrix.mul_mat(&ex.e.matrix);
    let ef = ex.e.matrix.mul_mat(&ex.f.matrix);
    for i in 0..a.dim() {
        let e_a = a.element_from_row(&ex.e.matrix.mul_vec(&a.basis_el(i).to_row()));
        if e_a.is_zero() {
            continue;
        }
        for j in 0..a.dim() {
            let feb = a.element_from_row(&fe.mul_vec(&a.basis_el(j).to_row()));
            let efb = a.element_from_row(&ef.mul_vec(&a.basis_el(j).to_row()));
            assert!(a.mul_unchecked(&e_a, &feb).is_zero(), "E(e_{i}) F(E(e_{j})) != 0");
            assert!(a.mul_unchecked(&e_a, &efb).is_zero(), "E(e_{i}) E(F(e_{j})) != 0");
        }
    }
}

#[test]
fn example2_bracket_values() {
    let ex = example2();
    let a = &ex.algebra;
    // {1, b} = E(b) for every basis b
    for j in 0..a.dim() {
        let eb = ex.e.apply(a, &a.basis_el(j));
        assert_eq!(*ex.bracket.basis_bracket(a.unit_index(), j), eb);
    }
    // {x, y} = x^2 z + x^2 y in characteristic 2
    let want = el(a, &[2, 0, 1]).add(&el(a, &[2, 1, 0]));
    assert_eq!(*ex.bracket.basis_bracket(idx(a, &[1, 0, 0]), idx(a, &[0, 1, 0])), want);
    // alternating by construction
    let y = el(a, &[0, 1, 0]);
    assert!(ex.bracket.eval(&y, &y).is_zero());
    assert!(!ex.bracket.is_poisson());
}

#[test]
fn example2_h_subspace_is_x2a_plus_y2a_of_dim_21() {
    let ex = example2();
    let a = &ex.algebra;
    let ann = a.annihilator(&[ex.h.clone()]).unwrap();
    // H = intersection of Ann_A(r) over the 13 annihilator basis elements
    let spaces: Vec<Subspace<F2>> = ann
        .basis_rows()
        .iter()
        .map(|r| a.annihilator(&[a.element_from_row(r)]).unwrap())
        .collect();
    let h_cap = Subspace::intersect_all(&spaces).unwrap();
    assert_eq!(h_cap.dim(), 21);
    // equals x^2 A + y^2 A
    let x2a = a.mult_op(&el(a, &[2, 0, 0])).column_space();
    let y2a = a.mult_op(&el(a, &[0, 2, 0])).column_space();
    assert_eq!(h_cap, x2a.sum(&y2a).unwrap());
    // and the 21 published monomials span it
    let published: Vec<&[u32]> = vec![
        &[2, 0, 0],
        &[3, 0, 0],
        &[2, 1, 0],
        &[2, 2, 0],
        &[2, 3, 0],
        &[2, 0, 1],
        &[2, 1, 1],
        &[2, 2, 1],
        &[2, 3, 1],
        &[0, 2, 0],
        &[1, 2, 0],
        &[0, 3, 0],
        &[0, 4, 0],
        &[0, 5, 0],
        &[0, 2, 1],
        &[1, 3, 0],
        &[1, 2, 1],
        &[0, 3, 1],
        &[0, 4, 1],
        &[0, 5, 1],
        &[1, 3, 1],
    ];
    let want = span_of(&published.iter().map(|e| el(a, e)).collect::<Vec<_>>(), a.dim());
    assert_eq!(h_cap, want);
}

#[test]
fn example2_x_solves_the_existence_equation() {
    // r * x = {1, r} = E(r) for all r in Ann({y^2})
    let ex = example2();
    let a = &ex.algebra;
    let x = el(a, &[1, 0, 0]);
    let ann = a.annihilator(&[ex.h.clone()]).unwrap();
    for r in ann.basis_rows() {
        let re = a.element_from_row(r);
        assert_eq!(a.mul_unchecked(&re, &x), ex.e.apply(a, &re));
    }
}

#[test]
fn brute_force_annihilator_agrees_on_small_algebras() {
    // oracle: enumerate all GF(2) vectors of a dim <= 8 algebra
    let ex = example1::<F2>();
    let a = &ex.algebra;
    let h = &ex.h;
    let ann = a.annihilator(&[h.clone()]).unwrap();
    let dim = a.dim();
    let mut members = 0u32;
    for bits in 0u32..(1 << dim) {
        let coeffs: Vec<F2> = (0..dim)
            .map(|i| lrlab_core::field::Gf::<2>((u64::from(bits) >> i) & 1))
            .collect();
        let v = a.element(coeffs).unwrap();
        let in_ann = a.mul_unchecked(&v, h).is_zero();
        assert_eq!(ann.contains(&v.to_row()).unwrap(), in_ann);
        if in_ann {
            members += 1;
        }
    }
    assert_eq!(members, 1 << ann.dim());
}
