use super::*;
use crate::words::parse_free_word;
use proptest::prelude::*;

fn fw(s: &str, names: &[&str]) -> FreeWord {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    parse_free_word(s, &names).unwrap()
}

fn xy(relators: &[&str]) -> GroupDescriptor {
    GroupDescriptor::new(&["x", "y"], relators.iter().map(|r| fw(r, &["x", "y"])).collect(), ClassHint::Generic, true)
}

#[test]
fn free_group_completes_with_cancellation_rules() {
    let e = RewriteEngine::complete(&GroupDescriptor::free(&["x"]), &Limits::default());
    assert!(e.is_complete());
    assert_eq!(e.rule_count(), 2);
    assert_eq!(e.is_trivial(&fw("x", &["x"])), Equality::Distinct);
}

#[test]
fn z2_completes() {
    let e = RewriteEngine::complete(&xy(&["x y x^-1 y^-1"]), &Limits::default());
    assert!(e.is_complete());
    assert_eq!(e.equal(&fw("x y", &["x", "y"]), &fw("y x", &["x", "y"])), Equality::Equal);
    assert_eq!(e.equal(&fw("x", &["x", "y"]), &fw("y", &["x", "y"])), Equality::Distinct);
}

#[test]
fn xy_relator_gives_powers_of_x() {
    let e = RewriteEngine::complete(&xy(&["x y"]), &Limits::default());
    assert!(e.is_complete());
    assert_eq!(e.equal(&fw("x", &["x", "y"]), &fw("y^-1", &["x", "y"])), Equality::Equal);
    for w in ["y", "y^3 x", "x^-1 y^2", "y x y"] {
        let nf = e.normal_form(&fw(w, &["x", "y"]));
        assert!(nf.letters().iter().all(|g| g.index == 0), "{w} -> {nf:?}");
    }
    assert_eq!(e.is_trivial(&fw("x y", &["x", "y"])), Equality::Equal);
    assert_eq!(e.is_trivial(&fw("x", &["x", "y"])), Equality::Distinct);
}

#[test]
fn abelianization_examples() {
    let a = abelianization(&xy(&["x y"]));
    assert_eq!((a.free_rank, a.torsion.len()), (1, 0));
    let a = abelianization(&GroupDescriptor::free(&["x"]));
    assert_eq!((a.free_rank, a.torsion.len()), (1, 0));
    let a = abelianization(&xy(&["x^2 y^3"]));
    assert_eq!((a.free_rank, a.torsion.len()), (1, 0));
    let a = abelianization(&GroupDescriptor::symmetric3("s", "r"));
    assert_eq!(a.free_rank, 0);
    assert_eq!(a.torsion, vec![BigInt::from(2)]);
}

#[test]
fn symmetric_group_has_six_normal_forms() {
    let e = RewriteEngine::complete(&GroupDescriptor::symmetric3("s", "r"), &Limits::default());
    assert!(e.is_complete());
    let mut seen = std::collections::HashSet::new();
    let gens = [Gen::pos(0), Gen::new(0, true), Gen::pos(1), Gen::new(1, true)];
    let mut frontier = vec![FreeWord::empty()];
    for _ in 0..5 {
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens {
                next.push(e.normal_form(&w.mul(&FreeWord::new([g]))));
            }
        }
        frontier = next;
        seen.extend(frontier.iter().cloned());
    }
    assert_eq!(seen.len(), 6);
}

#[test]
fn partial_engine_never_guesses() {
    // Baumslag–Solitar BS(1,2) with a tiny budget: undecided pairs stay UNKNOWN
    let d = xy(&["y x y^-1 x^-2"]);
    let limits = Limits { max_rules: 3, ..Limits::default() };
    let e = RewriteEngine::complete(&d, &limits);
    assert_eq!(e.status(), Status::Partial);
    assert_eq!(e.is_trivial(&fw("y", &["x", "y"])), Equality::Distinct);
    assert_ne!(e.is_trivial(&fw("y x y^-1 x^-2", &["x", "y"])), Equality::Distinct);
}

#[test]
fn validate_class_hints() {
    let d = GroupDescriptor::free_abelian(&["a", "b", "c"]);
    assert!(d.validate(&Limits::default()).unwrap().is_empty());
    let mut bad = GroupDescriptor::free(&["a", "b"]);
    bad.class_hint = ClassHint::FgAbelian;
    assert!(matches!(bad.validate(&Limits::default()), Err(RewriteError::InconsistentClassHint { .. })));
    let mut bad = GroupDescriptor::free_abelian(&["a", "b"]);
    bad.class_hint = ClassHint::Cyclic;
    assert!(bad.validate(&Limits::default()).is_err());
}

fn z2() -> &'static RewriteEngine {
    static E: std::sync::OnceLock<RewriteEngine> = std::sync::OnceLock::new();
    E.get_or_init(|| RewriteEngine::complete(&xy(&["x y x^-1 y^-1"]), &Limits::default()))
}

fn s3() -> &'static RewriteEngine {
    static E: std::sync::OnceLock<RewriteEngine> = std::sync::OnceLock::new();
    E.get_or_init(|| RewriteEngine::complete(&GroupDescriptor::symmetric3("s", "r"), &Limits::default()))
}

fn word_strategy(gens: u32, max: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max)
        .prop_map(|v| FreeWord::new(v.into_iter().map(|(i, b)| Gen::new(i, b))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z2_matches_vector_oracle(u in word_strategy(2, 8), v in word_strategy(2, 8)) {
        let e = z2();
        let same = (0..2).all(|i| u.exponent_sum(i) == v.exponent_sum(i));
        prop_assert_eq!(e.equal(&u, &v), Equality::from_bool(same));
    }

    #[test]
    fn rules_decrease_shortlex(rel in word_strategy(2, 6)) {
        let d = xy(&[]);
        let d = GroupDescriptor { relators: vec![rel], ..d };
        let e = RewriteEngine::complete(&d, &Limits::small());
        for (l, r) in e.rules() {
            let key = |w: &[Gen]| (w.len(), w.to_vec());
            prop_assert!(key(&r) < key(&l));
        }
    }

    #[test]
    fn abelianization_ignores_consequences(
        rel in word_strategy(3, 6),
        c1 in word_strategy(3, 3),
        c2 in word_strategy(3, 3),
    ) {
        let d = GroupDescriptor::new(&["a", "b", "c"], vec![rel.clone()], ClassHint::Generic, false);
        let consequence = rel.conjugate_by(&c1).mul(&rel.inverse().conjugate_by(&c2)).mul(&rel.conjugate_by(&c2));
        let mut d2 = d.clone();
        d2.relators.push(consequence);
        let a = abelianization(&d);
        let b = abelianization(&d2);
        prop_assert_eq!(a.free_rank, b.free_rank);
        prop_assert_eq!(a.torsion, b.torsion);
    }

    #[test]
    fn answers_are_sound_in_finite_quotient(u in word_strategy(2, 7)) {
        // in S3 a complete engine agrees with the permutation action
        let e = s3();
        let s = [1usize, 0, 2];
        let r = [1usize, 2, 0];
        let mut p = [0usize, 1, 2];
        for g in u.letters() {
            let m = if g.index == 0 { s } else { r };
            let m = if g.inverse && g.index == 1 { [2, 0, 1] } else { m };
            p = [m[p[0]], m[p[1]], m[p[2]]];
        }
        let trivial = p == [0, 1, 2];
        prop_assert_eq!(e.is_trivial(&u), Equality::from_bool(trivial));
    }
}
