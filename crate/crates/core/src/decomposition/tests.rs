use super::*;
use crate::rewriting::GroupDescriptor;
use crate::truth::Equality;
use crate::words::{parse_relative_word, Letter};
use proptest::prelude::*;

fn ctx(word: &str, coefs: &[&str], vars: &[&str]) -> DecompositionContext {
    let alphabet = Alphabet::new(coefs, vars);
    let w = parse_relative_word(word, &alphabet).unwrap();
    build_context(&w, &alphabet, &GroupDescriptor::free(coefs), &Limits::default()).unwrap()
}

fn p_of(c: &DecompositionContext) -> (usize, usize) {
    let mut window = CosetWindow::new();
    let s = suffix_cosets(c, &mut window);
    (s.p_min, s.p_max)
}

#[test]
fn two_syllables_give_two_cosets() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    assert!(c.t1.is_complete());
    assert_eq!(p_of(&c), (2, 2));
}

#[test]
fn conjugated_syllable_shares_a_coset() {
    let c = ctx("a x b y c x^-1", &["a", "b", "c"], &["x", "y"]);
    assert_eq!(p_of(&c), (2, 2));
}

#[test]
fn single_variable_has_one_coset() {
    let c = ctx("a x", &["a"], &["x"]);
    assert_eq!(p_of(&c), (1, 1));
    let c = ctx("a x b x c x^-1", &["a", "b", "c"], &["x"]);
    assert_eq!(p_of(&c), (1, 1));
}

#[test]
fn square_is_rejected() {
    let alphabet = Alphabet::new(&["a"], &["x"]);
    let w = parse_relative_word("a x^2", &alphabet).unwrap();
    let err = build_context(&w, &alphabet, &GroupDescriptor::free(&["a"]), &Limits::default()).err().unwrap();
    assert!(matches!(err, DecompositionError::RejectedRelator(GuRejection::ProperPower { k: 2, .. })));
}

#[test]
fn representative_of_y_is_x_inverse() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    let mut window = CosetWindow::new();
    let s = suffix_cosets(&c, &mut window);
    let reps = coset_representatives(&window, &s);
    assert_eq!(reps[0].1, FreeWord::empty());
    assert_eq!(reps[1].1, FreeWord::new([Gen::new(0, true)]));
}

#[test]
fn rewritten_relation_for_two_cosets() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    let mut window = CosetWindow::new();
    let s = suffix_cosets(&c, &mut window);
    let rel = rewrite_relation(&c, &window, &s).unwrap();
    // r_1 = xy, r_2 = (x^-1)^-1 y = xy
    let xy = FreeWord::new([Gen::pos(0), Gen::pos(1)]);
    assert_eq!(rel.entries[0].r, xy);
    assert_eq!(rel.entries[1].r, xy);
    assert_eq!(rel.reassemble(), c.word);
}

#[test]
fn h1_relator_is_unimodular() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    let mut window = CosetWindow::new();
    let s = suffix_cosets(&c, &mut window);
    let rel = rewrite_relation(&c, &window, &s).unwrap();
    let h1 = build_h1(&c, &s, &rel);
    assert_eq!(h1.t_exponent, Some(1));
    assert_eq!(h1.p, 2);
    // t̄ · t̄⁻¹ a t̄ · t̄⁻¹ b t̄ with r_1 = r_2 = t
    assert_eq!(h1.relator.show(&c, &window), "[a]^(1) [b]^(x^-1) bar(x y)");
}

#[test]
fn action_by_identity_is_trivial() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    let mut window = CosetWindow::new();
    let s = suffix_cosets(&c, &mut window);
    for g in h1::h1_generators(&c, &s.x1) {
        assert_eq!(action_apply(&c, &mut window, &g, &FreeWord::empty()).unwrap(), g);
    }
}

#[test]
fn iso_sends_relator_consistently() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    let mut window = CosetWindow::new();
    let s = suffix_cosets(&c, &mut window);
    let rel = rewrite_relation(&c, &window, &s).unwrap();
    let h1 = build_h1(&c, &s, &rel);
    for x in s.x1.clone() {
        let iso = iso_h1_to_hx(&c, &mut window, &h1, x).unwrap();
        assert!(iso.representative_independent);
    }
    let identity = iso_h1_to_hx(&c, &mut window, &h1, 0).unwrap();
    assert_eq!(identity.relator_image, h1.relator);
    for g in h1::h1_generators(&c, &s.x1) {
        assert!(h1::iso_composes(&c, &mut window, &g, 1, 1).unwrap());
        assert!(h1::iso_composes(&c, &mut window, &g, 0, 1).unwrap());
    }
}

#[test]
fn trivial_coefficients_give_degenerate_relator() {
    let alphabet = Alphabet::new(&["a"], &["x", "y"]);
    let w = parse_relative_word("x y", &alphabet).unwrap();
    let c = build_context(&w, &alphabet, &GroupDescriptor::free(&["a"]), &Limits::default()).unwrap();
    assert!(c.w_in_t);
    let mut window = CosetWindow::new();
    let s = suffix_cosets(&c, &mut window);
    let rel = rewrite_relation(&c, &window, &s).unwrap();
    assert!(build_h1(&c, &s, &rel).degenerate);
}

fn gu_word() -> impl Strategy<Value = RelativeWord> {
    // syllables (coefficient letter, variable letter, variable exponent)
    prop::collection::vec((0..4u32, 0..4u32, 1..3i64), 1..5).prop_map(|syl| {
        let mut letters = Vec::new();
        for (g, v, e) in syl {
            letters.push(Letter::Coef(Gen::from_code(g)));
            let v = Gen::from_code(v);
            for _ in 0..e {
                letters.push(Letter::Var(v));
            }
        }
        RelativeWord::from_letters(letters)
    })
}

fn accepted(w: &RelativeWord) -> Option<DecompositionContext> {
    let alphabet = Alphabet::new(&["a", "b"], &["x", "y"]);
    build_context(w, &alphabet, &GroupDescriptor::free(&["a", "b"]), &Limits::small()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reassembly_and_unimodularity(w in gu_word()) {
        let Some(c) = accepted(&w) else { return Ok(()) };
        let mut window = CosetWindow::new();
        let s = suffix_cosets(&c, &mut window);
        prop_assert!(1 <= s.p_min && s.p_min <= s.p_max && s.p_max <= c.q());
        let rel = rewrite_relation(&c, &window, &s).unwrap();
        prop_assert_eq!(rel.reassemble(), c.word.clone());
        for e in &rel.entries {
            prop_assert_eq!(e.c.mul(&e.r), s.suffixes[rel.entries.iter().position(|x| x == e).unwrap()].clone());
        }
        prop_assert_eq!(build_h1(&c, &s, &rel).t_exponent, Some(1));
    }

    #[test]
    fn action_is_a_right_action(w in gu_word(), x in 0..4u32, x2 in 0..4u32) {
        let Some(c) = accepted(&w) else { return Ok(()) };
        let mut window = CosetWindow::new();
        let s = suffix_cosets(&c, &mut window);
        let (x, x2) = (FreeWord::new([Gen::from_code(x)]), FreeWord::new([Gen::from_code(x2)]));
        for g in h1::h1_generators(&c, &s.x1) {
            match h1::action_composes(&c, &mut window, &g, &x, &x2) {
                Ok(b) => prop_assert!(b),
                Err(DecompositionError::UnknownCoset(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}

#[test]
fn report_for_two_cosets() {
    let c = ctx("a x b y", &["a", "b"], &["x", "y"]);
    let r = assemble_report(&c, &report::ReportOptions::default()).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    println!("{}", serde_json::to_string_pretty(&json).unwrap());
    for key in [
        "classification",
        "cosets",
        "representatives",
        "relation2",
        "h1_presentation",
        "action_table",
        "theorem3",
        "provenance",
    ] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(r.cosets.p, 2);
    assert_eq!(r.theorem3.strict.status, "THEOREM");
    assert!(r.relation2.reassembles);
    assert!(r.theorem3.relator_images.iter().all(|i| i.verdict == Equality::Equal));
    assert!(r
        .theorem3
        .subgroup_checks
        .iter()
        .all(|c| matches!(c.verdict, crate::products::DepthVerdict::HoldsAtDepth(d) if d > 0)));
    assert_eq!(r.action_table.composition.status, "EXACT");
    assert_eq!(r.action_table.iso_composition.status, "EXACT");
}

#[test]
fn cyclic_g_turns_strictness_off() {
    let alphabet = Alphabet::new(&["a"], &["x", "y"]);
    let w = parse_relative_word("a x a y", &alphabet).unwrap();
    let c = build_context(&w, &alphabet, &GroupDescriptor::cyclic("a"), &Limits::default()).unwrap();
    let r = assemble_report(&c, &report::ReportOptions::default()).unwrap();
    assert!(r.theorem3.strict.status.starts_with("HYPOTHESIS_FAILS"));
}

#[test]
fn one_variable_report_has_a_single_coset() {
    let c = ctx("a x b x c x^-1", &["a", "b", "c"], &["x"]);
    let r = assemble_report(&c, &report::ReportOptions::default()).unwrap();
    assert_eq!(r.cosets.p, 1);
    assert_eq!(r.theorem3.window_cosets, vec!["1".to_string()]);
    assert!(r.theorem3.claims.iter().any(|c| c.statement.starts_with("T/R is trivial")));
}

#[test]
fn partial_quotient_is_reported_honestly() {
    let alphabet = Alphabet::new(&["a", "b"], &["x", "y"]);
    let w = parse_relative_word("a y b x a y^-1 b x^-2", &alphabet).unwrap();
    let limits = Limits { max_rules: 3, ..Limits::default() };
    let c = build_context(&w, &alphabet, &GroupDescriptor::free(&["a", "b"]), &limits).unwrap();
    assert!(!c.t1.is_complete());
    let r = assemble_report(&c, &report::ReportOptions::default()).unwrap();
    assert!(r.relation2.reassembles);
    assert!(r.cosets.p_min <= r.cosets.p_max);
    if r.cosets.p_min < r.cosets.p_max {
        assert_eq!(r.cosets.provenance, crate::truth::Provenance::Unknown);
    }
}
