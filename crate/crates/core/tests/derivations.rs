use std::collections::BTreeSet;

use iwc_core::{admissible_signatures, catalog_tensor_in, derivation_basis, FieldMode, Matrix, Scalar, Signature};

/// Rows are the flattened basis matrices, so equal row spaces mean the same
/// space of derivations.
fn flatten(mode: FieldMode, ms: &[Matrix]) -> Matrix {
    Matrix::from_rows(mode, ms.iter().map(|m| m.entries().to_vec()).collect()).unwrap()
}

/// One matrix per free parameter; each parameter is a list of `(row, col, coeff)`.
fn family(mode: FieldMode, params: &[&[(usize, usize, i64)]]) -> Vec<Matrix> {
    params
        .iter()
        .map(|cells| {
            let mut m = Matrix::zeros(mode, 4, 4);
            for &(r, c, v) in cells.iter() {
                m.set(r - 1, c - 1, Scalar::from_int(mode, v));
            }
            m
        })
        .collect()
}

fn same_span(mode: FieldMode, a: &[Matrix], b: &[Matrix]) -> bool {
    let (fa, fb) = (flatten(mode, a), flatten(mode, b));
    let both = flatten(mode, &[a, b].concat());
    fa.rank() == a.len() && fa.rank() == fb.rank() && both.rank() == fa.rank()
}

fn support(mode: FieldMode, ms: &[Matrix]) -> BTreeSet<usize> {
    let r = flatten(mode, ms).rref();
    let mut s = BTreeSet::new();
    for row in 0..r.pivots.len() {
        for (k, x) in r.matrix.row(row).iter().enumerate() {
            if !x.is_zero() {
                s.insert(k);
            }
        }
    }
    s
}

#[test]
fn der_g1_plus_g32_matches_displayed_form() {
    let mode = FieldMode::Gaussian;
    let t = catalog_tensor_in("g1+g3.2", mode).unwrap();
    let der = derivation_basis(&t);
    assert_eq!(der.dim(), 6);
    // γ¹₁, γ¹₄, γ²₂ (also at (3,3)), γ²₃, γ²₄, γ³₄
    let shown = family(
        mode,
        &[&[(1, 1, 1)], &[(1, 4, 1)], &[(2, 2, 1), (3, 3, 1)], &[(2, 3, 1)], &[(2, 4, 1)], &[(3, 4, 1)]],
    );
    assert!(same_span(mode, &der.basis, &shown));
    assert_eq!(support(mode, &der.basis), support(mode, &shown));
}

#[test]
fn der_g41_matches_displayed_form() {
    let mode = FieldMode::Gaussian;
    let t = catalog_tensor_in("g4.1", mode).unwrap();
    let der = derivation_basis(&t);
    assert_eq!(der.dim(), 7);
    // γ³₃ and γ⁴₄ on the diagonal, γ²₃ twice above it, then γ¹₃, γ¹₄, γ²₄, γ³₄
    let shown = family(
        mode,
        &[
            &[(1, 1, 1), (2, 2, 1), (3, 3, 1)],
            &[(1, 1, 2), (2, 2, 1), (4, 4, 1)],
            &[(1, 2, 1), (2, 3, 1)],
            &[(1, 3, 1)],
            &[(1, 4, 1)],
            &[(2, 4, 1)],
            &[(3, 4, 1)],
        ],
    );
    assert!(same_span(mode, &der.basis, &shown));
    assert_eq!(support(mode, &der.basis), support(mode, &shown));
}

#[test]
fn real_forms_have_the_same_dimensions() {
    let q = FieldMode::Rational;
    assert_eq!(derivation_basis(&catalog_tensor_in("A1+A3.2", q).unwrap()).dim(), 6);
    assert_eq!(derivation_basis(&catalog_tensor_in("A4.1", q).unwrap()).dim(), 7);
}

#[test]
fn g41_signatures_are_the_two_parameter_family() {
    let t = catalog_tensor_in("g4.1", FieldMode::Gaussian).unwrap();
    let got: BTreeSet<Vec<i64>> = admissible_signatures(&t, 4).into_iter().map(|s| s.0).collect();
    let mut want = BTreeSet::new();
    for alpha in 0..=4 {
        for beta in 0..=4 {
            if alpha + 2 * beta <= 4 {
                want.insert(Signature::new(vec![alpha + 2 * beta, alpha + beta, alpha, beta]).normalized().0);
            }
        }
    }
    assert_eq!(got, want);
}

#[test]
fn g1_plus_g32_signatures_have_a_zero_and_a_repeat() {
    let t = catalog_tensor_in("g1+g3.2", FieldMode::Gaussian).unwrap();
    let got: BTreeSet<Vec<i64>> = admissible_signatures(&t, 3).into_iter().map(|s| s.0).collect();
    let mut want = BTreeSet::new();
    for alpha in 0..=3 {
        for beta in 0..=3 {
            want.insert(Signature::new(vec![beta, alpha, alpha, 0]).normalized().0);
        }
    }
    assert_eq!(got, want);
}
