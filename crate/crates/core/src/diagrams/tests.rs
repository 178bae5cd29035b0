use super::fixtures::*;
use super::labels::*;
use super::*;
use crate::rewriting::{GroupDescriptor, Limits, RewriteEngine};
use crate::truth::{Decision, Equality};
use crate::words::{parse_relative_word, Alphabet};
use proptest::prelude::*;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn hexagon() -> HowieDiagram {
    HowieDiagram::from_spec(&hexagon_fan(), &hexagon_fan_corners(), &names(&["t"])).unwrap()
}

#[test]
fn hexagon_fan_has_the_stated_counts() {
    let d = hexagon();
    let r = validate_map(&d.map).unwrap();
    assert_eq!((r.faces, r.corners, r.pre_edges, r.edges, r.vertices), (5, 18, 18, 9, 6));
    assert_eq!(r.euler_characteristic, 2);
}

#[test]
fn bigon_is_the_smallest_sphere() {
    let m = SphereMap::from_spec(&bigon()).unwrap();
    let r = validate_map(&m).unwrap();
    assert_eq!((r.corners, r.edges, r.faces, r.vertices), (2, 1, 2, 1));
}

#[test]
fn edge_used_once_is_malformed() {
    let mut spec = bigon();
    spec.faces.pop();
    assert!(matches!(SphereMap::from_spec(&spec), Err(DiagramError::Malformed(_))));
}

#[test]
fn torus_fails_the_euler_test() {
    // one square with opposite sides glued: V = 1, E = 2, F = 1
    let spec: DiagramSpec = serde_json::from_str(
        r#"{"faces":[{"id":"T","boundary":[
            {"edge":"a","dir":1},{"corner":"1"},{"edge":"b","dir":1},{"corner":"1"},
            {"edge":"a","dir":-1},{"corner":"1"},{"edge":"b","dir":-1},{"corner":"1"}]}]}"#,
    )
    .unwrap();
    let m = SphereMap::from_spec(&spec).unwrap();
    assert_eq!(map_report(&m).euler_characteristic, 0);
    assert!(validate_map(&m).is_err());
}

#[test]
fn non_alternating_boundary_is_rejected() {
    let spec: DiagramSpec =
        serde_json::from_str(r#"{"faces":[{"id":"F","boundary":[{"corner":"1"},{"corner":"1"}]}]}"#).unwrap();
    assert!(SphereMap::from_spec(&spec).is_err());
}

#[test]
fn uppermost_vertex_reads_b3_c2_d1() {
    let d = hexagon();
    let v = d.map.vertex_of[d.map.corner_by_name("b3").unwrap()];
    let l = vertex_label(&d, v);
    assert_eq!(l.corners, names(&["b3", "c2", "d1"]));
    assert_eq!(l.label.display(&hexagon_fan_corners()).to_string(), "b3 c2 d1");
}

#[test]
fn face_b_from_alpha() {
    let d = hexagon();
    let b = d.map.face_by_id("B").unwrap();
    // the pre-edge s1 is the fifth step of B
    let alphabet = Alphabet { coefficients: hexagon_fan_corners(), variables: names(&["t"]) };
    let label = face_label(&d, b, 4).display(&alphabet).to_string();
    assert_eq!(label, "t b4 t b5 t^-1 b0 t^-1 b1 t^-1 b2 t b3");
}

fn xy_alphabet() -> Alphabet {
    Alphabet::new(&["a", "b"], &["t"])
}

fn z2() -> GroupDescriptor {
    GroupDescriptor::free_abelian(&["a", "b"])
}

#[test]
fn mirror_pair_is_one_reducible_pair() {
    let alphabet = xy_alphabet();
    let w = parse_relative_word("a t b t^-1 a t", &alphabet).unwrap();
    let spec = mirror_pair(&w, &alphabet);
    let d = HowieDiagram::from_spec(&spec, &alphabet.coefficients, &alphabet.variables).unwrap();
    validate_map(&d.map).unwrap();
    let pres = RelativePresentation {
        h: GroupDescriptor::free(&["a", "b"]),
        variables: alphabet.variables.clone(),
        relators: vec![w],
    };
    let engine = RewriteEngine::complete(&pres.h, &Limits::default());
    let r = check_diagram(&d, &pres, &engine);
    assert_eq!(r.is_diagram, Decision::Yes);
    assert_eq!(r.reducible_pairs.len(), 1);
    assert_eq!(r.reducible_pairs[0].verdict, Equality::Equal);
    assert_eq!(r.reduced, Decision::No);
}

#[test]
fn nontrivial_interior_vertex_fails() {
    let d = HowieDiagram::from_spec(&bigon(), &names(&["f0", "g0"]), &names(&["t"])).unwrap();
    let pres = RelativePresentation {
        h: GroupDescriptor::free(&["f0", "g0"]),
        variables: names(&["t"]),
        relators: vec![parse_relative_word("t f0", &Alphabet::new(&["f0", "g0"], &["t"])).unwrap()],
    };
    let engine = RewriteEngine::complete(&pres.h, &Limits::default());
    let r = check_diagram(&d, &pres, &engine);
    assert!(r.vertices.iter().any(|v| v.verdict == VertexVerdict::Fail));
    assert_eq!(r.is_diagram, Decision::No);
}

#[test]
fn relators_of_h_make_the_vertex_trivial() {
    // corners a b and a^-1 b^-1 meet at the single vertex: trivial only in Z^2
    let spec: DiagramSpec = serde_json::from_str(
        r#"{"faces":[{"id":"F","boundary":[{"edge":"e","dir":1},{"corner":"a b"}]},
                     {"id":"G","boundary":[{"edge":"e","dir":-1},{"corner":"a^-1 b^-1"}]}]}"#,
    )
    .unwrap();
    let alphabet = xy_alphabet();
    let d = HowieDiagram::from_spec(&spec, &alphabet.coefficients, &alphabet.variables).unwrap();
    let pres = RelativePresentation {
        h: z2(),
        variables: alphabet.variables.clone(),
        relators: vec![parse_relative_word("t b a", &alphabet).unwrap()],
    };
    let engine = RewriteEngine::complete(&pres.h, &Limits::default());
    let r = check_diagram(&d, &pres, &engine);
    assert_eq!(r.is_diagram, Decision::Yes, "{r:?}");
    // F reads t (a b) = t (b a) in Z^2; G reads t^-1 (a b)^-1
    assert_eq!(r.reducible_pairs.len(), 1);
    let free = RewriteEngine::complete(&GroupDescriptor::free(&["a", "b"]), &Limits::default());
    assert_eq!(check_diagram(&d, &pres, &free).is_diagram, Decision::No);
}

#[test]
fn hexagon_with_generic_corners_is_reduced() {
    let d = hexagon();
    let engine = RewriteEngine::complete(
        &GroupDescriptor::free(&hexagon_fan_corners().iter().map(String::as_str).collect::<Vec<_>>()),
        &Limits::default(),
    );
    assert!(find_reducible_pairs(&d, &engine).is_empty());
}

fn phi_square(p1: &str, p2: &str) -> DiagramSpec {
    // two t^-1 p t (p^φ)^-1 cells glued along a t-edge, closed up by a third face
    serde_json::from_str(&format!(
        r#"{{"faces":[
            {{"id":"P","boundary":[{{"edge":"u","dir":-1}},{{"corner":"{p1}"}},{{"edge":"m","dir":1}},{{"corner":"{p2}"}}]}},
            {{"id":"Q","boundary":[{{"edge":"m","dir":-1}},{{"corner":"{p1}"}},{{"edge":"v","dir":1}},{{"corner":"{p2}"}}]}},
            {{"id":"X","boundary":[{{"edge":"u","dir":1}},{{"corner":"1"}},{{"edge":"v","dir":-1}},{{"corner":"1"}}]}}],
          "exterior_faces":["X"]}}"#
    ))
    .unwrap()
}

fn phi_spec() -> PhiPresentationSpec {
    // P = <a>, a^φ = b
    PhiPresentationSpec {
        h: GroupDescriptor::free(&["a", "b"]),
        letter: 0,
        p_generators: vec![FreeWord::gen(0)],
        phi_images: vec![FreeWord::gen(1)],
        search_depth: 3,
    }
}

#[test]
fn adjacent_phi_cells_are_not_phi_reduced() {
    let alphabet = xy_alphabet();
    let d = HowieDiagram::from_spec(&phi_square("a", "b^-1"), &alphabet.coefficients, &alphabet.variables).unwrap();
    validate_map(&d.map).unwrap();
    let spec = phi_spec();
    let engine = RewriteEngine::complete(&spec.h, &Limits::default());
    let v = is_phi_reduced(&d, &spec, &engine);
    assert_eq!(v.phi_cells, names(&["P", "Q"]));
    assert_eq!(v.phi_reduced, Decision::No);
}

#[test]
fn non_phi_cells_do_not_count() {
    let alphabet = xy_alphabet();
    let d = HowieDiagram::from_spec(&phi_square("a", "a"), &alphabet.coefficients, &alphabet.variables).unwrap();
    let spec = phi_spec();
    let engine = RewriteEngine::complete(&spec.h, &Limits::default());
    let v = is_phi_reduced(&d, &spec, &engine);
    assert!(v.phi_cells.is_empty());
    assert_eq!(v.phi_reduced, v.reduced);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn face_labels_rotate_with_the_start(face in 0usize..5, start in 0usize..6) {
        let d = hexagon();
        let k = d.map.faces[face].steps.len();
        let start = start % k;
        let base = face_label(&d, face, 0);
        let shifted = face_label(&d, face, start);
        let offset: usize = (0..start).map(|i| 1 + d.corner_labels[d.map.faces[face].steps[i].corner].len()).sum();
        prop_assert_eq!(shifted, base.rotate(offset));
    }

    #[test]
    fn mirror_pairs_are_spheres_with_one_reducible_pair(
        syl in prop::collection::vec((0..4u32, any::<bool>()), 1..6),
        perm in any::<u64>(),
    ) {
        let alphabet = xy_alphabet();
        let mut letters = Vec::new();
        for (g, inv) in syl {
            letters.push(crate::words::Letter::Coef(crate::words::Gen::from_code(g)));
            letters.push(crate::words::Letter::Var(crate::words::Gen::new(0, inv)));
        }
        let w = crate::words::RelativeWord::from_letters(letters);
        prop_assume!(w.letters().iter().any(|l| l.is_var()) && w.is_cyclically_reduced());
        let mut spec = mirror_pair(&w, &alphabet);
        // renaming edges must not matter
        for f in &mut spec.faces {
            for s in &mut f.boundary {
                if let SlotSpec::Edge { edge, .. } = s {
                    *edge = format!("{}{}", perm % 7, edge);
                }
            }
        }
        let d = HowieDiagram::from_spec(&spec, &alphabet.coefficients, &alphabet.variables).unwrap();
        let r = validate_map(&d.map).unwrap();
        prop_assert_eq!(r.vertices, r.edges);
        let engine = RewriteEngine::complete(&GroupDescriptor::free(&["a", "b"]), &Limits::default());
        let pairs = find_reducible_pairs(&d, &engine);
        prop_assert_eq!(pairs.len(), 1);
        prop_assert_eq!(pairs[0].verdict, Equality::Equal);
    }
}
