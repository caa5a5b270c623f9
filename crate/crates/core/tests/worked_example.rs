//! The embedded four-vertex example, checked entry by entry in exact
//! arithmetic and through every construction used by the verifier.

use mwspec_core::example;
use mwspec_core::linalg::{
    inertia_of, nullity_of, ratio, DenseMatrix, Inertia, RationalMatrix, Tolerance,
};
use mwspec_core::operators::{
    build_distance_matrix, build_laplacian, build_u, distance_inverse_closed_form,
    distance_inverse_dense,
};
use mwspec_core::perturbation::{
    bordered, f_alpha_block, gx_matrix, haynsworth_check, perturbed_pencil,
    principal_block_submatrix, schur_complement, BlockIndexSet, Pivot,
};
use mwspec_core::scalar::{rational_to_f64, Rational, Scalar};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn exact_f() -> mwspec_core::operators::BlockMatrix<Rational> {
    let d_inv = distance_inverse_closed_form(&example::tree()).unwrap();
    let l = build_laplacian(&example::graph()).unwrap();
    perturbed_pencil(&d_inv, &l, Rational::from_i64(1))
        .unwrap()
        .f
}

#[test]
fn distance_laplacian_and_perturbed_inverse_are_exact() {
    let d = build_distance_matrix(&example::tree());
    assert_eq!(*d.matrix(), example::expected_distance());
    let l = build_laplacian(&example::graph()).unwrap();
    assert_eq!(*l.matrix(), example::expected_laplacian());
    // Every denominator of L divides 16.
    let sixteen = num_bigint::BigInt::from(16);
    assert!(l
        .matrix()
        .as_slice()
        .iter()
        .all(|q| (&sixteen % q.denom()) == 0.into()));
    let f = exact_f();
    assert_eq!(*f.matrix(), example::expected_perturbed_inverse());
    assert_eq!(f.matrix()[(0, 0)], ratio(3419893, 612184));
}

#[test]
fn distance_block_between_leaves_sums_two_weights() {
    let d = build_distance_matrix(&example::tree());
    let expected =
        RationalMatrix::from_rows(&[[ratio(13, 1), ratio(6, 1)], [ratio(6, 1), ratio(10, 1)]])
            .unwrap();
    assert_eq!(d.block(0, 3), expected);
}

#[test]
fn closed_form_and_dense_inverse_agree_exactly() {
    let d = build_distance_matrix(&example::tree());
    assert_eq!(
        distance_inverse_closed_form(&example::tree()).unwrap(),
        distance_inverse_dense(&d).unwrap()
    );
}

#[test]
fn pencil_at_zero_returns_distance_matrix() {
    let d_inv = distance_inverse_closed_form(&example::tree()).unwrap();
    let l = build_laplacian(&example::graph()).unwrap();
    let f = perturbed_pencil(&d_inv, &l, Rational::from_i64(0))
        .unwrap()
        .f;
    assert_eq!(*f.matrix(), example::expected_distance());
}

#[test]
fn last_diagonal_block_and_first_off_diagonal_block() {
    let f = exact_f();
    let b44 = RationalMatrix::from_rows(&[
        [ratio(3647621, 612184), ratio(2294033, 612184)],
        [ratio(2294033, 612184), ratio(1968213, 306092)],
    ])
    .unwrap();
    assert_eq!(f.block(3, 3), b44);
    let d_inv = distance_inverse_closed_form(&example::tree()).unwrap();
    let l = build_laplacian(&example::graph()).unwrap();
    let f12 = f_alpha_block(&d_inv, &l, 0, 1, Rational::from_i64(1)).unwrap();
    let expected = RationalMatrix::from_rows(&[
        [ratio(3525525, 612184), ratio(2430433, 612184)],
        [ratio(2255293, 612184), ratio(935945, 153046)],
    ])
    .unwrap();
    assert_eq!(f12, expected);
}

#[test]
fn inertias_of_pencil_bordered_matrix_and_schur_complement() {
    let f = exact_f().to_f64();
    assert_eq!(
        inertia_of(f.matrix(), &tol()).unwrap(),
        Inertia::new(6, 0, 2)
    );
    let u = build_u::<f64>(4, 2).unwrap();
    let g = bordered(&f, &u).unwrap();
    assert_eq!(inertia_of(&g.g, &tol()).unwrap(), Inertia::new(8, 0, 2));
    let h = haynsworth_check(&g.g, &Pivot::Leading(8), &tol()).unwrap();
    assert!(h.pass);
    assert_eq!(
        (h.pivot, h.complement),
        (Inertia::new(6, 0, 2), Inertia::new(2, 0, 0))
    );

    // G/F = −UᵀD⁻¹U, exactly.
    let fq = exact_f();
    let uq = build_u::<Rational>(4, 2).unwrap();
    let gq = bordered(&fq, &uq).unwrap();
    let complement = schur_complement(&gq.g, &Pivot::Leading(8)).unwrap();
    let d_inv = distance_inverse_closed_form(&example::tree()).unwrap();
    let target = uq
        .transpose()
        .matmul(d_inv.matrix())
        .unwrap()
        .matmul(&uq)
        .unwrap()
        .neg();
    assert_eq!(complement, target);
}

#[test]
fn deleting_a_vertex_leaves_a_negative_definite_pencil_block() {
    let d_inv = distance_inverse_closed_form(&example::tree())
        .unwrap()
        .to_f64();
    let l = build_laplacian(&example::graph()).unwrap().to_f64();
    let p = perturbed_pencil(&d_inv, &l, 1.0).unwrap().p;
    let sub =
        principal_block_submatrix(&p, &BlockIndexSet::new(vec![0, 1, 2], 4).unwrap()).unwrap();
    assert_eq!(
        inertia_of(sub.matrix(), &tol()).unwrap(),
        Inertia::new(6, 0, 0)
    );
}

#[test]
fn nullity_equalities_used_in_the_proofs() {
    let d_inv = distance_inverse_closed_form(&example::tree())
        .unwrap()
        .to_f64();
    // D⁻¹ with vertex 4 removed has nullity s = 2.
    let q = principal_block_submatrix(&d_inv, &BlockIndexSet::all_but(3, 4).unwrap()).unwrap();
    assert_eq!(nullity_of(q.matrix(), &tol()).unwrap(), 2);
    // At β = 1, Q = P[[{2,3,4}]] is nonsingular and so is F_11.
    let l = build_laplacian(&example::graph()).unwrap().to_f64();
    let pencil = perturbed_pencil(&d_inv, &l, 1.0).unwrap();
    let q = principal_block_submatrix(&pencil.p, &BlockIndexSet::all_but(0, 4).unwrap()).unwrap();
    assert_eq!(nullity_of(q.matrix(), &tol()).unwrap(), 0);
    assert_eq!(nullity_of(&pencil.f.block(0, 0), &tol()).unwrap(), 0);
    // Scalar case: [[0,1],[1,0]] is its own inverse; the zero (2,2) entry
    // matches the singular leading 1×1 block of the inverse.
    let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
    let h = a.inverse().unwrap();
    assert_eq!(nullity_of(&h.window(0, 0, 1, 1), &tol()).unwrap(), 1);
    assert_eq!(nullity_of(&a.window(1, 1, 1, 1), &tol()).unwrap(), 1);
}

#[test]
fn compression_by_first_basis_vector_has_expected_diagonal() {
    let f = exact_f();
    let x = [Rational::from_i64(1), Rational::from_i64(0)];
    let g = gx_matrix(&f, &x).unwrap().gx;
    let diag: Vec<Rational> = (0..4).map(|i| g[(i, i)].clone()).collect();
    assert_eq!(
        diag,
        vec![
            ratio(3419893, 612184),
            ratio(3037701, 612184),
            ratio(3655573, 612184),
            ratio(3647621, 612184)
        ]
    );
    assert_eq!(
        inertia_of(&g.to_f64(), &tol()).unwrap(),
        Inertia::new(3, 0, 1)
    );
    assert!((0..4).all(|i| (0..4).all(|j| i == j || g[(i, j)] != Rational::from_i64(0))));
}

#[test]
fn trace_of_off_diagonal_block_tends_to_distance_trace() {
    let d = build_distance_matrix(&example::tree()).to_f64();
    let d_inv = distance_inverse_closed_form(&example::tree())
        .unwrap()
        .to_f64();
    let l = build_laplacian(&example::graph()).unwrap().to_f64();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let target = d.block(i, j).trace();
            let got = f_alpha_block(&d_inv, &l, i, j, 1e-6).unwrap().trace();
            assert!(
                (got - target).abs() <= 1e-3 * target.max(1.0),
                "({i}, {j}): {got} vs {target}"
            );
            for alpha in [0.01, 0.1, 1.0, 10.0, 100.0] {
                assert!(f_alpha_block(&d_inv, &l, i, j, alpha).unwrap().trace() > 0.0);
            }
        }
    }
}

#[test]
fn exact_and_float_kernels_agree_to_twelve_digits() {
    let exact = exact_f();
    let inst = example::instance().map_scalars(rational_to_f64);
    let d_inv = distance_inverse_closed_form(inst.tree()).unwrap();
    let l = build_laplacian(inst.graph()).unwrap();
    let float = perturbed_pencil(&d_inv, &l, 1.0).unwrap().f;
    assert!(
        float
            .matrix()
            .rel_diff(&exact.to_f64().into_matrix())
            .unwrap()
            <= 1e-12
    );
}
