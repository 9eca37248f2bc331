use std::time::Instant;

use iwc_core::{FieldMode, Matrix, Scalar};
use iwc_polysys::*;

fn opts() -> GbOptions {
    GbOptions::default()
}

#[test]
fn infeasible_fixtures_certify_and_recheck() {
    for id in ["G32-regime1", "G32-regime2", "G41-2101"] {
        let f = load_fixture(id).unwrap();
        assert_eq!(f.expectation, Expectation::ComplexInfeasible);
        let t0 = Instant::now();
        let ComplexOutcome::Infeasible(c) = certify_complex(&f.ideal, &opts()).unwrap() else {
            panic!("{id}: no unit")
        };
        assert!(t0.elapsed().as_secs() < 60, "{id} too slow");
        assert!(check_certificate(&f.ideal, &c), "{id}");
        let back = Certificate::from_json(&c.to_json(&f.ideal.vars), &f.ideal).unwrap();
        assert!(check_certificate(&f.ideal, &back), "{id} after JSON");
    }
}

#[test]
fn literature_witness_is_a_point_of_feasible_fixtures() {
    for id in ["G41-4321", "G41-3211"] {
        let f = load_fixture(id).unwrap();
        let a = fixture_witness(id).unwrap();
        let point = f.point_for(&a).unwrap();
        // det A = 1, so the slack is 1 as well
        assert_eq!(point[f.ideal.var_index(&Var::T).unwrap()], Scalar::from_int(FieldMode::Rational, 1));
        let c = Certificate::FeasibleWitness { point };
        assert!(check_certificate(&f.ideal, &c), "{id}");
        // the same matrix is not a point of the infeasible (2,1,0,1) fixture
        let g = load_fixture("G41-2101").unwrap();
        assert!(!g.ideal.vanishes_at(&g.point_for(&a).unwrap()));
    }
}

#[test]
fn forged_identity_witness_is_rejected() {
    let f = load_fixture("G41-2101").unwrap();
    let id = Matrix::identity(FieldMode::Rational, 4);
    let c = Certificate::FeasibleWitness { point: f.point_for(&id).unwrap() };
    assert!(!check_certificate(&f.ideal, &c));
}

#[test]
fn fixtures_lie_in_generated_systems() {
    for id in FIXTURE_IDS {
        let f = load_fixture(id).unwrap();
        let c = f.containment(&GbOptions::default()).unwrap();
        assert!(c.holds(), "{id}: {c:?}");
    }
}

#[test]
fn so3_fixture_branch_x1_is_complex_feasible() {
    // I + ⟨x1⟩ has the Gaussian point below, so no unit can be derived there.
    let f = load_fixture("SO3-2101").unwrap();
    let (x1, _) = f.real_branch_data().unwrap();
    let branch = f.ideal.extended([x1]);
    let g = FieldMode::Gaussian;
    let i = Scalar::i();
    let z = Scalar::zero(g);
    let one = Scalar::from_int(g, 1);
    let m1 = Scalar::from_int(g, -1);
    let rows = [
        [one.clone(), z.clone(), one.clone(), z.clone()],
        [z.clone(), z.clone(), i.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), -&i],
        [z.clone(), m1.clone(), one.clone(), Scalar::from_int(g, 5)],
    ];
    let mut point = Vec::new();
    for v in &branch.vars {
        point.push(match *v {
            Var::A(r, c) => rows[r - 1][c - 1].clone(),
            Var::X(1) => z.clone(),
            Var::X(2) => one.clone(),
            Var::T => m1.clone(),
            _ => unreachable!(),
        });
    }
    let gi = Ideal::new(
        branch.vars.clone(),
        g,
        branch.gens.iter().map(|p| p.with_mode(g).unwrap()).collect(),
    );
    assert!(gi.vanishes_at(&point));
    assert!(matches!(certify_complex(&branch, &opts()).unwrap(), ComplexOutcome::Consistent(_)));
}

#[test]
fn so3_fixture_real_branch_certificate() {
    let f = load_fixture("SO3-2101").unwrap();
    let t0 = Instant::now();
    // the whole ideal has complex points
    assert!(matches!(certify_complex(&f.ideal, &opts()).unwrap(), ComplexOutcome::Consistent(_)));
    let (x1, col3) = f.real_branch_data().unwrap();
    let p = &x1 * &Factor::SumOfSquares(col3.clone()).value(FieldMode::Rational, f.ideal.nvars());
    assert!(prove_membership(&f.ideal, &p, &opts()).unwrap().is_some());
    let c3 = f.ideal.extended(col3);
    assert!(matches!(certify_complex(&c3, &opts()).unwrap(), ComplexOutcome::Infeasible(_)));

    let plan = f.real_branch_plan().unwrap();
    let c = certify_real_branch(&f.ideal, &plan, &opts()).unwrap().unwrap();
    assert!(check_certificate(&f.ideal, &c));
    assert!(t0.elapsed().as_secs() < 120);
    let back = Certificate::from_json(&c.to_json(&f.ideal.vars), &f.ideal).unwrap();
    assert_eq!(back, c);
    // the same tree is meaningless over Q(i)
    let g = FieldMode::Gaussian;
    let gi = Ideal::new(f.ideal.vars.clone(), g, f.ideal.gens.iter().map(|p| p.with_mode(g).unwrap()).collect());
    assert!(!check_certificate(&gi, &c));
}
