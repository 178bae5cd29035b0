use super::*;
use crate::products::samples;
use crate::rewriting::abelianization;
use proptest::prelude::*;

fn prepared(d: SemidirectData) -> PreparedAsp {
    PreparedAsp::new(d, &Limits::default(), 8).unwrap()
}

fn w(powers: &[(u32, i64)]) -> FreeWord {
    FreeWord::from_powers(powers)
}

#[test]
fn multiplication_on_the_factors() {
    let asp = prepared(samples::symmetric_by_conjugation(&mut ChaCha8Rng::seed_from_u64(1)));
    let (b, b1) = (w(&[(0, 1)]), w(&[(1, 1)]));
    let p = asp_multiply(&asp, &(FreeWord::empty(), b.clone()), &(FreeWord::empty(), b1.clone()));
    assert_eq!(asp.equal(&p, &(FreeWord::empty(), b.mul(&b1))), Equality::Equal);
    let p = asp_multiply(&asp, &(b.clone(), FreeWord::empty()), &(b1.clone(), FreeWord::empty()));
    assert_eq!(asp.equal(&p, &(b.mul(&b1), FreeWord::empty())), Equality::Equal);
}

#[test]
fn trivial_action_is_the_direct_product() {
    let asp = prepared(samples::integers_over_even());
    let x = (w(&[(0, 2)]), w(&[(0, -1)]));
    let y = (w(&[(0, -5)]), w(&[(0, 3)]));
    assert_eq!(asp_multiply(&asp, &x, &y), (w(&[(0, -3)]), w(&[(0, 2)])));
}

#[test]
fn conjugation_action_twists_products() {
    let asp = prepared(samples::symmetric_by_conjugation(&mut ChaCha8Rng::seed_from_u64(2)));
    // (s, 1)(1, v)(s, 1)^-1 = (1, s v s^-1) = (1, v^-1)
    let s = (FreeWord::gen(0), FreeWord::empty());
    let v = (FreeWord::empty(), FreeWord::gen(1));
    let x = asp_multiply(&asp, &asp_multiply(&asp, &asp.inverse(&s), &v), &s);
    assert_eq!(asp.equal(&x, &(FreeWord::empty(), w(&[(1, -1)]))), Equality::Equal);
}

#[test]
fn integers_over_even_integers_give_z() {
    let asp = prepared(samples::integers_over_even());
    let r = asp_diagonal_checks(&asp, 12, 0).unwrap();
    assert!(!r.vacuous);
    assert!(r.instances() > 0);
    let built = asp_build(&asp, 3, &Limits::default()).unwrap();
    let ab = abelianization(&built.descriptor);
    assert_eq!(ab.free_rank, 1);
    assert!(ab.torsion.is_empty());
}

#[test]
fn trivial_n_is_vacuous() {
    let mut d = samples::integers_over_even();
    d.n_gens.clear();
    d.psi.clear();
    let asp = prepared(d);
    assert!(asp_diagonal_checks(&asp, 8, 0).unwrap().vacuous);
    let built = asp_build(&asp, 2, &Limits::default()).unwrap();
    assert_eq!(built.descriptor.relators, vec![w(&[(0, -1), (1, 1), (0, 1), (1, -1)])]);
}

#[test]
fn trivial_b_gives_a() {
    let d = SemidirectData {
        a: GroupDescriptor::symmetric3("s", "r"),
        b: GroupDescriptor::trivial(),
        action: vec![vec![], vec![]],
        action_inv: None,
        n_gens: vec![],
        psi: vec![],
    };
    let built = asp_build(&prepared(d), 2, &Limits::default()).unwrap();
    assert_eq!(built.descriptor, GroupDescriptor::symmetric3("s", "r"));
}

#[test]
fn inconsistent_psi_is_reported() {
    let asp = prepared(samples::inconsistent_symmetric());
    assert!(matches!(asp_diagonal_checks(&asp, 8, 0), Err(ProductError::IdentityViolation(_))));
}

#[test]
fn psi_must_be_well_defined() {
    let mut d = samples::integers_over_even();
    d.a = GroupDescriptor::finite_cyclic("a", 4);
    d.b = GroupDescriptor::finite_cyclic("b", 3);
    // a^2 has order 2 but psi sends it to an element of order 3
    assert!(matches!(PreparedAsp::new(d, &Limits::default(), 8), Err(ProductError::IdentityViolation(_))));
}

#[test]
fn non_injective_psi_breaks_the_embedding() {
    // ψ(a) = b with b of order 2 forces a^2 = 1 in the quotient
    let d = SemidirectData {
        a: GroupDescriptor::cyclic("a"),
        b: GroupDescriptor::finite_cyclic("b", 2),
        action: vec![vec![FreeWord::gen(0)]],
        action_inv: None,
        n_gens: vec![FreeWord::gen(0)],
        psi: vec![FreeWord::gen(0)],
    };
    let asp = prepared(d);
    assert!(matches!(asp_build(&asp, 3, &Limits::default()), Err(ProductError::ConsistencyFail(_))));
}

fn random_data() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_finite_data_satisfies_identities(seed in random_data()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let asp = prepared(samples::random_finite(&mut rng));
        let r = asp_diagonal_checks(&asp, 8, seed).unwrap();
        prop_assert_eq!(r.undecided, 0);
    }

    #[test]
    fn multiplication_is_associative(seed in random_data(), xs in prop::collection::vec((0u32..2, -3i64..=3, 0u32..2, -3i64..=3), 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let asp = prepared(samples::random_finite(&mut rng));
        let (ra, rb) = (asp.data.a.rank() as u32, asp.data.b.rank() as u32);
        let el: Vec<Pair> = xs.iter().map(|&(i, e, j, f)| {
            let a = if ra == 0 { FreeWord::empty() } else { w(&[(i % ra, e)]) };
            let b = if rb == 0 { FreeWord::empty() } else { w(&[(j % rb, f)]) };
            (a, b)
        }).collect();
        let l = asp_multiply(&asp, &asp_multiply(&asp, &el[0], &el[1]), &el[2]);
        let r = asp_multiply(&asp, &el[0], &asp_multiply(&asp, &el[1], &el[2]));
        prop_assert_eq!(asp.equal(&l, &r), Equality::Equal);
        let one = (FreeWord::empty(), FreeWord::empty());
        prop_assert_eq!(asp.equal(&asp_multiply(&asp, &one, &el[0]), &el[0]), Equality::Equal);
        prop_assert_eq!(asp.equal(&asp_multiply(&asp, &el[0], &asp.inverse(&el[0])), &one), Equality::Equal);
    }
}
