use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iwc_core::{catalog_tensor_in, verify_iw, FieldMode, IWSpec, Matrix, Scalar, Signature};
use iwc_polysys::*;

const Q: FieldMode = FieldMode::Rational;
const NV: usize = 3;

fn poly_strategy(max_deg: u16, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, NV), -3i64..=3, 1i64..=2), 0..=max_terms).prop_map(
        |terms| {
            MultiPoly::from_terms(
                Q,
                NV,
                terms.into_iter().map(|(e, n, d)| (Monomial::new(e), Scalar::from_ratio(Q, n, d))),
            )
        },
    )
}

fn point_strategy() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), NV)
        .prop_map(|v| v.into_iter().map(|(n, d)| Scalar::from_ratio(Q, n, d)).collect())
}

fn ideal(gens: Vec<MultiPoly>) -> Ideal {
    Ideal::new(vec![Var::Named("x".into()), Var::Named("y".into()), Var::Named("z".into())], Q, gens)
}

fn small_budget() -> GbOptions {
    GbOptions { stop_on_unit: false, ..GbOptions::with_budget(2_000) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(p in poly_strategy(3, 5), q in poly_strategy(3, 5), r in poly_strategy(3, 5)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p + &(-&p), MultiPoly::zero(Q, NV));
        prop_assert_eq!(&p * &MultiPoly::from_int(Q, NV, 1), p.clone());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly_strategy(3, 5), q in poly_strategy(3, 5), x in point_strategy()) {
        prop_assert_eq!((&p + &q).eval(&x), &p.eval(&x) + &q.eval(&x));
        prop_assert_eq!((&p * &q).eval(&x), &p.eval(&x) * &q.eval(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_basis_ignores_generator_order(gens in prop::collection::vec(poly_strategy(2, 3), 2..=3), seed in any::<u64>()) {
        let i = ideal(gens.clone());
        let Ok(gb) = buchberger(&i, &small_budget()) else { return Ok(()) };
        prop_assert!(gb.is_groebner());
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
        }
        let mut shuffled = gens;
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        if let Ok(other) = buchberger(&ideal(shuffled), &small_budget()) {
            prop_assert_eq!(gb, other);
        }
    }

    #[test]
    fn members_reduce_to_zero(gens in prop::collection::vec(poly_strategy(2, 3), 2), c0 in poly_strategy(1, 2), c1 in poly_strategy(1, 2)) {
        let i = ideal(gens.clone());
        let Ok(gb) = buchberger(&i, &small_budget()) else { return Ok(()) };
        let member = &(&c0 * &gens[0]) + &(&c1 * &gens[1]);
        prop_assert!(gb.reduce(&member).is_zero());
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let rows = (0..n).map(|_| (0..n).map(|_| Scalar::from_int(Q, rng.gen_range(-2..=2))).collect()).collect();
    Matrix::from_rows(Q, rows).unwrap()
}

/// The generated system vanishes at `A` exactly when the contraction limit
/// reproduces the target constants verbatim.
#[test]
fn soundness_link_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let cases = [
        ("so3", "heisenberg3", vec![1, 1, 2]),
        ("so3", "heisenberg3", vec![2, 1, 1]),
        ("heisenberg3+A1", "abelian4", vec![1, 1, 1, 0]),
        ("2A2.1", "A4.1", vec![3, 2, 1, 1]),
    ];
    for (source, target, sig) in cases {
        let src = catalog_tensor_in(source, Q).unwrap();
        let tgt = catalog_tensor_in(target, Q).unwrap();
        let sig = Signature::new(sig);
        let sys = generate_iw_system(&src, &tgt, &sig, SystemOptions::default()).unwrap();
        let mut tested = 0;
        while tested < 50 {
            let a = random_matrix(&mut rng, src.dim());
            if a.det().unwrap().is_zero() {
                continue;
            }
            tested += 1;
            let report = verify_iw(source, &src, &IWSpec::new(a.clone(), sig.clone()), target).unwrap();
            let sat = sys.is_satisfied_by(&a, &src);
            assert_eq!(sat, report.exact_match, "{source} -> {target} {sig} at {a:?}");
        }
        // so3 with the identity ordering reaches heisenberg3 verbatim for (1,1,2)
        if sig.0 == [1, 1, 2] {
            let id = Matrix::identity(Q, 3);
            assert!(sys.is_satisfied_by(&id, &src));
        }
    }
    let src = catalog_tensor_in("2A2.1", Q).unwrap();
    let tgt = catalog_tensor_in("A4.1", Q).unwrap();
    let a = fixture_witness("G41-3211").unwrap();
    for sig in [vec![3, 2, 1, 1], vec![4, 3, 2, 1]] {
        let sys = generate_iw_system(&src, &tgt, &Signature::new(sig), SystemOptions::default()).unwrap();
        assert!(sys.is_satisfied_by(&a, &src));
    }
}

/// Random points of the fixture ring and single-coordinate perturbations of
/// genuine witnesses are all rejected.
#[test]
fn forged_witnesses_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for id in FIXTURE_IDS {
        let f = load_fixture(id).unwrap();
        let n = f.ideal.nvars();
        let mut rejected = 0;
        while rejected < 100 {
            let point: Vec<Scalar> =
                (0..n).map(|_| Scalar::from_ratio(Q, rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
            if f.ideal.vanishes_at(&point) {
                continue;
            }
            assert!(!check_certificate(&f.ideal, &Certificate::FeasibleWitness { point }), "{id}");
            rejected += 1;
        }
        if let Some(a) = fixture_witness(id) {
            let good = f.point_for(&a).unwrap();
            assert!(check_certificate(&f.ideal, &Certificate::FeasibleWitness { point: good.clone() }));
            for k in 0..n {
                let mut bad = good.clone();
                bad[k] = &bad[k] + &Scalar::one(Q);
                if !f.ideal.vanishes_at(&bad) {
                    assert!(!check_certificate(&f.ideal, &Certificate::FeasibleWitness { point: bad }), "{id} slot {k}");
                }
            }
        }
    }
}
