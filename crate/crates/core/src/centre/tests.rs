use super::*;
use crate::analysis::generalised_unimodular_free_t_named;
use crate::words::{parse_relative_word, Gen};
use proptest::prelude::*;

fn rel(s: &str, a: &Alphabet) -> RelativeWord {
    parse_relative_word(s, a).unwrap()
}

fn z2() -> GroupDescriptor {
    GroupDescriptor::free_abelian(&["a", "b"])
}

fn free_t(w: &RelativeWord, a: &Alphabet) -> TGroup {
    TGroup::Witnessed(generalised_unimodular_free_t_named(w, &a.variables).unwrap())
}

#[test]
fn gtg_over_z2_is_isomorphic_to_g() {
    let a = Alphabet::new(&["a", "b"], &["t"]);
    let w = rel("a t b", &a);
    let v = classify_centre(&z2(), &TGroup::Free, &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::IsomorphicToZG);
    let iso = v.isomorphism.unwrap();
    assert!(iso.relator_image_trivial);
    assert_eq!(iso.images, vec![("t".to_string(), "a^-1 b^-1".to_string())]);
}

#[test]
fn two_variables_over_z_is_trivial() {
    let a = Alphabet::new(&["g"], &["x", "y"]);
    let w = rel("g x g^2 y", &a);
    let v = classify_centre(&GroupDescriptor::cyclic("g"), &TGroup::Free, &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::Trivial);
    assert_eq!(v.provenance, Provenance::Theorem);
}

#[test]
fn braid_relator_is_the_one_relator_case() {
    let a = Alphabet::new(&["g"], &["t"]);
    let w = rel("g t g t^-1 g^-1 t^-1", &a);
    let v = classify_centre(&GroupDescriptor::cyclic("g"), &TGroup::Free, &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::OneRelatorCentreCase);
    let note = v.braid.unwrap();
    assert!(note.relator_maps_to_identity && note.amalgam_relator_is_conjugate_of_w && note.round_trip);
    assert_eq!(note.amalgam_centre, vec!["x^2".to_string()]);
    assert_eq!(note.centre, "g t g t g t");
}

#[test]
fn cyclic_g_with_gtg_lists_both_cases() {
    let a = Alphabet::new(&["g"], &["t"]);
    let w = rel("g t g", &a);
    let v = classify_centre(&GroupDescriptor::cyclic("g"), &TGroup::Free, &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::IsomorphicToZG);
    assert_eq!(v.applicable_cases, vec!["GTG_FORM".to_string(), "CYCLIC_G".to_string()]);
}

#[test]
fn noncyclic_g_one_variable_is_trivial() {
    let a = Alphabet::new(&["a", "b"], &["t"]);
    let w = rel("a t b t a^-1 t^-1", &a);
    let v = classify_centre(&z2(), &TGroup::Free, &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::Trivial);
}

#[test]
fn hypotheses_are_enforced() {
    let a = Alphabet::new(&["a", "b"], &["t"]);
    let mut g = z2();
    g.torsion_free = false;
    let w = rel("a t b", &a);
    assert!(matches!(
        classify_centre(&g, &TGroup::Free, &w, &a, &Limits::default()),
        Err(CentreError::HypothesisUnverified(_))
    ));
    let w = rel("a t b t", &a);
    assert!(matches!(
        classify_centre(&z2(), &TGroup::Free, &w, &a, &Limits::default()),
        Err(CentreError::HypothesisUnverified(_))
    ));
    let a2 = Alphabet::new(&["a", "b"], &["x", "y"]);
    let w = rel("a x y b x y", &a2);
    assert!(classify_centre(&z2(), &TGroup::Free, &w, &a2, &Limits::default()).is_err());
}

#[test]
fn single_syllable_over_free_t_is_case2_with_trivial_amalgam_centre() {
    let a = Alphabet::new(&["a", "b"], &["x", "y"]);
    let w = rel("a x y", &a);
    let split = theorem2_case_split(&z2(), &GroupDescriptor::free(&["x", "y"]), &w, &Limits::default()).unwrap();
    assert_eq!(split.tag, CaseTag::Case2);
    let v = classify_centre(&z2(), &free_t(&w, &a), &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::AfpCentre { generators: vec![] });
    assert_eq!(v.applicable_cases[0], "CASE2");
}

#[test]
fn abelian_t_gives_a_nontrivial_amalgam_centre() {
    let a = Alphabet::new(&["a", "b"], &["x", "y"]);
    let w = rel("a x", &a);
    let t = GroupDescriptor::free_abelian(&["x", "y"]);
    let wit = crate::analysis::declare_witness(
        &crate::analysis::DeclaredWitness {
            t_group: t.clone(),
            t: FreeWord::gen(0),
            r_normal_generators: vec![FreeWord::gen(0)],
            quotient: None,
            s_trivial: true,
            s_free_declared: true,
            strong_up_declared: true,
        },
        &Limits::default(),
    )
    .unwrap();
    let v = classify_centre(&z2(), &TGroup::Witnessed(wit), &w, &a, &Limits::default()).unwrap();
    assert_eq!(v.verdict, Verdict::AfpCentre { generators: vec!["a".into()] });
}

#[test]
fn case_split_examples() {
    let t = GroupDescriptor::free(&["x", "y"]);
    let a = Alphabet::new(&["a", "b"], &["x", "y"]);
    let l = Limits::default();
    assert_eq!(theorem2_case_split(&z2(), &t, &rel("x", &a), &l).unwrap().tag, CaseTag::Case1);
    assert_eq!(theorem2_case_split(&z2(), &t, &rel("a x y b y^-1 x^-1", &a), &l).unwrap().tag, CaseTag::Case3);
    assert_eq!(theorem2_case_split(&z2(), &t, &rel("a x b y", &a), &l).unwrap().tag, CaseTag::Case4);
}

#[test]
fn lemma5_on_decidable_classes() {
    assert_eq!(lemma5_cyclic_from_squares(&GroupDescriptor::cyclic("g")), Decision::Yes);
    assert_eq!(lemma5_cyclic_from_squares(&z2()), Decision::No);
    assert_eq!(lemma5_cyclic_from_squares(&GroupDescriptor::free(&["x", "y"])), Decision::No);
    assert_eq!(lemma5_cyclic_from_squares(&GroupDescriptor::symmetric3("s", "r")), Decision::Unknown);
}

fn var_word(max: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..2u32, any::<bool>()), 1..=max)
        .prop_map(|v| FreeWord::new(v.into_iter().map(|(i, b)| Gen::new(i, b))))
        .prop_filter("nonempty", |w| !w.is_empty())
}

fn coef_word() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..2u32, any::<bool>()), 0..=3)
        .prop_map(|v| FreeWord::new(v.into_iter().map(|(i, b)| Gen::new(i, b))))
}

fn assemble(parts: &[(FreeWord, FreeWord)]) -> RelativeWord {
    let mut letters = Vec::new();
    for (c, v) in parts {
        letters.extend(c.letters().iter().map(|&g| Letter::Coef(g)));
        letters.extend(v.letters().iter().map(|&g| Letter::Var(g)));
    }
    RelativeWord::from_letters(letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn several_variables_ignore_coefficients(
        vars in prop::collection::vec(var_word(3), 1..4),
        c1 in prop::collection::vec(coef_word(), 4),
        c2 in prop::collection::vec(coef_word(), 4),
    ) {
        let a = Alphabet::new(&["a", "b"], &["x", "y"]);
        let w1 = assemble(&vars.iter().cloned().zip(c1).map(|(v, c)| (c, v)).collect::<Vec<_>>());
        let w2 = assemble(&vars.iter().cloned().zip(c2).map(|(v, c)| (c, v)).collect::<Vec<_>>());
        let l = Limits::default();
        let r1 = classify_centre(&z2(), &TGroup::Free, &w1, &a, &l);
        let r2 = classify_centre(&z2(), &TGroup::Free, &w2, &a, &l);
        if let (Ok(v1), Ok(v2)) = (&r1, &r2) {
            prop_assert_eq!(&v1.verdict, &Verdict::Trivial);
            prop_assert_eq!(&v2.verdict, &Verdict::Trivial);
        }
    }

    #[test]
    fn exactly_one_case_fires(
        vars in prop::collection::vec(var_word(3), 1..4),
        coefs in prop::collection::vec(coef_word(), 4),
    ) {
        let w = assemble(&vars.iter().cloned().zip(coefs).map(|(v, c)| (c, v)).collect::<Vec<_>>());
        prop_assume!(w.is_cyclically_reduced() && w.letters().iter().any(|l| l.is_var()));
        let t = GroupDescriptor::free(&["x", "y"]);
        let split = theorem2_case_split(&z2(), &t, &w, &Limits::default()).unwrap();
        let syl = cyclic_syllables(&w).unwrap();
        let q = syl.len();
        let g1_trivial = q == 1 && syl[0].coef.exponent_sum(0) == 0 && syl[0].coef.exponent_sum(1) == 0;
        let roots: std::collections::BTreeSet<_> = syl.iter().filter_map(|s| normalised_root(&s.var)).collect();
        let fired = [
            q == 1 && g1_trivial,
            q == 1 && !g1_trivial,
            q > 1 && roots.len() <= 1,
            q > 1 && roots.len() > 1,
        ];
        prop_assert_eq!(fired.iter().filter(|&&b| b).count(), 1);
        let idx = fired.iter().position(|&b| b).unwrap();
        let tags = [CaseTag::Case1, CaseTag::Case2, CaseTag::Case3, CaseTag::Case4];
        prop_assert_eq!(split.tag, tags[idx]);
    }

    #[test]
    fn missing_torsion_flag_never_yields_a_verdict(vars in prop::collection::vec(var_word(3), 1..3), coefs in prop::collection::vec(coef_word(), 3)) {
        let a = Alphabet::new(&["a", "b"], &["x", "y"]);
        let w = assemble(&vars.iter().cloned().zip(coefs).map(|(v, c)| (c, v)).collect::<Vec<_>>());
        let mut g = z2();
        g.torsion_free = false;
        let r = classify_centre(&g, &TGroup::Free, &w, &a, &Limits::default());
        prop_assert!(r.is_err() || r.unwrap().verdict == Verdict::Unknown);
    }
}
