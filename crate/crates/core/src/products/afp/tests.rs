use super::*;
use proptest::prelude::*;

fn torus_knot() -> AmalgamatedProduct {
    AmalgamatedProduct::new(
        GroupDescriptor::cyclic("x"),
        GroupDescriptor::cyclic("y"),
        vec![FreeWord::from_powers(&[(0, 2)])],
        vec![FreeWord::from_powers(&[(0, 3)])],
    )
    .unwrap()
}

#[test]
fn torus_knot_centre_is_generated_by_x_squared() {
    let c = afp_centre(&torus_knot()).unwrap();
    assert!(!c.trivial);
    assert_eq!(c.generators_in_a, vec![FreeWord::from_powers(&[(0, 2)])]);
    assert_eq!(c.generators_in_b, vec![FreeWord::from_powers(&[(0, 3)])]);
}

#[test]
fn free_product_has_trivial_centre() {
    let ap =
        AmalgamatedProduct::new(GroupDescriptor::cyclic("x"), GroupDescriptor::cyclic("y"), vec![], vec![]).unwrap();
    assert!(afp_centre(&ap).unwrap().trivial);
}

#[test]
fn free_factor_of_rank_two_kills_the_centre() {
    let ap = AmalgamatedProduct::new(
        GroupDescriptor::free(&["u", "v"]),
        GroupDescriptor::cyclic("y"),
        vec![FreeWord::gen(0)],
        vec![FreeWord::from_powers(&[(0, 2)])],
    )
    .unwrap();
    assert!(afp_centre(&ap).unwrap().trivial);
}

#[test]
fn improper_subgroup_is_reported() {
    let ap = AmalgamatedProduct::new(
        GroupDescriptor::cyclic("x"),
        GroupDescriptor::cyclic("y"),
        vec![FreeWord::gen(0)],
        vec![FreeWord::from_powers(&[(0, 2)])],
    )
    .unwrap();
    assert_eq!(afp_centre(&ap), Err(ProductError::SubgroupNotProper("A".into())));
}

#[test]
fn abelian_centres_meet_in_the_lattice() {
    // Z^2 = <a,b> and Z = <c>, amalgamating a with c^2
    let ap = AmalgamatedProduct::new(
        GroupDescriptor::free_abelian(&["a", "b"]),
        GroupDescriptor::cyclic("c"),
        vec![FreeWord::from_powers(&[(0, 1)])],
        vec![FreeWord::from_powers(&[(0, 2)])],
    )
    .unwrap();
    let c = afp_centre(&ap).unwrap();
    assert_eq!(c.generators_h, vec![FreeWord::gen(0)]);
    assert_eq!(c.witness_a, FreeWord::gen(1));
}

#[test]
fn abelian_oracle_splits_exactly() {
    let z2 = GroupDescriptor::free_abelian(&["a", "b"]);
    let o = AbelianOracle::new(&z2, &[FreeWord::from_powers(&[(0, 2), (1, 1)])]);
    let w = FreeWord::from_powers(&[(0, 5), (1, 3)]);
    let (h, r) = o.split(&w).unwrap();
    let back = FreeWord::from_powers(&[(0, 2), (1, 1)]).pow(h.exponent_sum(0)).mul(&r);
    assert_eq!((back.exponent_sum(0), back.exponent_sum(1)), (5, 3));
    assert_eq!(o.contains(&FreeWord::from_powers(&[(0, 4), (1, 2)])), Decision::Yes);
    assert_eq!(o.contains(&FreeWord::gen(0)), Decision::No);
}

#[test]
fn free_cyclic_oracle_reps_are_coset_invariant() {
    let u = FreeWord::from_powers(&[(0, 1), (1, 1)]);
    let o = FreeCyclicOracle::new(std::slice::from_ref(&u)).unwrap();
    let w = FreeWord::from_powers(&[(1, -1), (0, 2)]);
    let (_, r1) = o.split(&w).unwrap();
    let (_, r2) = o.split(&u.pow(3).mul(&w)).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(o.contains(&u.pow(-2)), Decision::Yes);
}

#[test]
fn bounded_oracle_reports_membership() {
    let s3 = GroupDescriptor::symmetric3("s", "r");
    let o = BoundedOracle::new(&s3, &[FreeWord::gen(1)], 4, &Limits::default());
    assert_eq!(o.contains(&FreeWord::from_powers(&[(1, 2)])), Decision::Yes);
    assert_eq!(o.contains(&FreeWord::gen(0)), Decision::No);
}

#[test]
fn presentation_adds_amalgamation_relators() {
    let p = torus_knot().presentation();
    assert_eq!(p.generators, vec!["x".to_string(), "y".to_string()]);
    assert_eq!(p.relators, vec![FreeWord::from_powers(&[(0, 2), (1, -3)])]);
}

fn syllables() -> impl Strategy<Value = Vec<(bool, i64)>> {
    prop::collection::vec((any::<bool>(), -4i64..=4), 0..6)
}

fn to_input(v: &[(bool, i64)]) -> Vec<(Side, FreeWord)> {
    v.iter().map(|&(b, e)| (if b { Side::B } else { Side::A }, FreeWord::from_powers(&[(0, e)]))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_ignores_amalgamation_moves(v in syllables(), at in 0usize..6, k in -2i64..=2) {
        // inserting x^{2k} y^{-3k}, which is trivial, leaves the normal form unchanged
        let ap = torus_knot();
        let mut w = to_input(&v);
        let pos = at.min(w.len());
        w.insert(pos, (Side::B, FreeWord::from_powers(&[(0, -3 * k)])));
        w.insert(pos, (Side::A, FreeWord::from_powers(&[(0, 2 * k)])));
        let a = afp_normal_form(&ap, &to_input(&v)).unwrap();
        let b = afp_normal_form(&ap, &w).unwrap();
        prop_assert_eq!(a.equal(&b, &ap), Equality::Equal);
    }

    #[test]
    fn normal_form_reps_alternate(v in syllables()) {
        let ap = torus_knot();
        let nf = afp_normal_form(&ap, &to_input(&v)).unwrap();
        for pair in nf.reps.windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0);
        }
        for (s, r) in &nf.reps {
            prop_assert!(!r.is_empty());
            prop_assert_eq!(ap.oracle(*s).unwrap().contains(r), Decision::No);
        }
    }
}

#[test]
fn amalgamation_relation_normalises_to_identity() {
    let ap = torus_knot();
    let nf = afp_normal_form(
        &ap,
        &[(Side::A, FreeWord::from_powers(&[(0, 2)])), (Side::B, FreeWord::from_powers(&[(0, -3)]))],
    )
    .unwrap();
    assert!(nf.reps.is_empty());
    assert!(nf.h.is_empty());
    let nf = afp_normal_form(&ap, &[(Side::A, FreeWord::gen(0)), (Side::B, FreeWord::gen(0))]).unwrap();
    assert_eq!(nf.reps.len(), 2);
}

#[test]
fn centre_commutes_in_the_amalgam_presentation() {
    for (p, q) in [(2, 3), (2, 5), (3, 4)] {
        let ap = AmalgamatedProduct::new(
            GroupDescriptor::cyclic("x"),
            GroupDescriptor::cyclic("y"),
            vec![FreeWord::from_powers(&[(0, p)])],
            vec![FreeWord::from_powers(&[(0, q)])],
        )
        .unwrap();
        let c = afp_centre(&ap).unwrap();
        let e = RewriteEngine::complete(&ap.presentation(), &Limits::small());
        for z in &c.generators_in_a {
            for g in [FreeWord::gen(0), FreeWord::gen(1)] {
                assert_eq!(e.equal(&z.mul(&g), &g.mul(z)), Equality::Equal, "({p},{q})");
            }
        }
    }
}
