use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iwc_core::{
    catalog, contract_with_matrix, iw_limit_diagonal, EpsMatrix, Error, FieldMode, Signature, StructureTensor,
};

const PER_TENSOR: usize = 200;

fn all_tensors() -> Vec<(&'static str, StructureTensor)> {
    [FieldMode::Rational, FieldMode::Gaussian]
        .into_iter()
        .flat_map(|m| catalog(m).iter().map(|e| (e.name, e.tensor.clone())))
        .collect()
}

/// The divergence rule read straight off the constants.
fn diverges(t: &StructureTensor, a: &[i64]) -> bool {
    t.nonzero().any(|(i, j, k, _)| a[i] + a[j] < a[k])
}

fn check(name: &str, t: &StructureTensor, sig: &Signature) {
    let fast = iw_limit_diagonal(t, sig);
    let u = EpsMatrix::diag_powers(t.mode(), sig.exponents());
    let general = contract_with_matrix(t, &u);
    assert_eq!(matches!(fast, Err(Error::NoLimit { .. })), diverges(t, sig.exponents()), "{name} {sig:?}");
    match (fast, general) {
        (Ok(f), Ok(g)) => {
            assert_eq!(f.tensor, g.tensor, "{name} {sig:?}");
            assert!(f.tensor.validate().is_empty(), "{name} {sig:?}");
            for k in 2..=3 {
                let r = iw_limit_diagonal(t, &sig.scaled(k)).expect("rescaled limit");
                assert_eq!(r.tensor, f.tensor, "{name} {sig:?} x{k}");
            }
        }
        (Err(Error::NoLimit { .. }), Err(Error::NoLimit { .. })) => {
            assert!(matches!(iw_limit_diagonal(t, &sig.scaled(2)), Err(Error::NoLimit { .. })));
        }
        (f, g) => panic!("{name} {sig:?}: diagonal {:?} vs general {:?}", f.err(), g.err()),
    }
}

#[test]
fn catalog_times_random_signatures() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tensors = all_tensors();
    for (name, t) in &tensors {
        for _ in 0..PER_TENSOR {
            let sig = Signature::new((0..t.dim()).map(|_| rng.gen_range(0..=4)).collect());
            check(name, t, &sig);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn diagonal_and_general_paths_agree(idx in 0usize..20, raw in prop::collection::vec(0i64..=4, 4)) {
        let tensors = all_tensors();
        let (name, t) = &tensors[idx % tensors.len()];
        let sig = Signature::new(raw[..t.dim()].to_vec());
        check(name, t, &sig);
    }

    #[test]
    fn zero_signature_is_the_identity(idx in 0usize..20) {
        let tensors = all_tensors();
        let (_, t) = &tensors[idx % tensors.len()];
        let r = iw_limit_diagonal(t, &Signature::zero(t.dim())).unwrap();
        prop_assert_eq!(&r.tensor, t);
    }
}
