//! Small maps used by tests and the self-test command.

use super::{DiagramSpec, FaceSpec, SlotSpec};
use crate::words::{Alphabet, Letter, RelativeWord};

fn corner(label: &str, id: Option<&str>) -> SlotSpec {
    SlotSpec::Corner { corner: label.to_string(), id: id.map(str::to_string) }
}

fn edge(id: &str, dir: i8, label: &str) -> SlotSpec {
    SlotSpec::Edge { edge: id.to_string(), dir, label: Some(label.to_string()) }
}

/// Faces given as `(pre-edge id, dir, corner name)` steps; corners are labelled by their own name.
fn named_faces(faces: &[(&str, &[(&str, i8, &str)])]) -> Vec<FaceSpec> {
    faces
        .iter()
        .map(|(id, steps)| FaceSpec {
            id: id.to_string(),
            boundary: steps.iter().flat_map(|&(e, d, c)| [edge(e, d, "t"), corner(c, Some(c))]).collect(),
        })
        .collect()
}

/// A hexagon `B` fan-triangulated from one vertex into `C, D, A, E`: five faces,
/// eighteen corners, nine edges, six vertices. Every edge is labelled `t`.
/// Reading `B` from the pre-edge `s1` gives the directions `(+,+,−,−,−,+)`, and the
/// vertex shared by `B, C, D` has corners `b3, c2, d1` clockwise.
pub fn hexagon_fan() -> DiagramSpec {
    DiagramSpec {
        faces: named_faces(&[
            ("A", &[("d3", 1, "a1"), ("s3", 1, "a2"), ("d4", -1, "a0")]),
            (
                "B",
                &[
                    ("s5", -1, "b0"),
                    ("s4", -1, "b1"),
                    ("s3", -1, "b2"),
                    ("s2", 1, "b3"),
                    ("s1", 1, "b4"),
                    ("s0", 1, "b5"),
                ],
            ),
            ("C", &[("s0", -1, "c1"), ("s1", -1, "c2"), ("d2", -1, "c0")]),
            ("D", &[("d2", 1, "d1"), ("s2", -1, "d2"), ("d3", -1, "d0")]),
            ("E", &[("d4", 1, "e1"), ("s4", 1, "e2"), ("s5", 1, "e0")]),
        ]),
        exterior_faces: Vec::new(),
        exterior_vertices: Vec::new(),
    }
}

/// Corner names of [`hexagon_fan`], used as free generators of `H`.
pub fn hexagon_fan_corners() -> Vec<String> {
    let mut out = Vec::new();
    for (f, n) in [("a", 3), ("b", 6), ("c", 3), ("d", 3), ("e", 3)] {
        out.extend((0..n).map(|i| format!("{f}{i}")));
    }
    out
}

/// Two faces sharing one loop edge: the smallest map on the sphere.
pub fn bigon() -> DiagramSpec {
    DiagramSpec {
        faces: named_faces(&[("F", &[("e", 1, "f0")]), ("G", &[("e", -1, "g0")])]),
        exterior_faces: Vec::new(),
        exterior_vertices: Vec::new(),
    }
}

/// A face spelling `w` glued along every edge to its mirror image.
/// `w` must contain a variable letter.
pub fn mirror_pair(w: &RelativeWord, alphabet: &Alphabet) -> DiagramSpec {
    let l = w.letters();
    let start = l.iter().position(|x| x.is_var()).expect("relator without variables");
    let mut steps: Vec<(Letter, RelativeWord)> = Vec::new();
    for k in 0..l.len() {
        match l[(start + k) % l.len()] {
            v @ Letter::Var(_) => steps.push((v, RelativeWord::empty())),
            c @ Letter::Coef(_) => {
                let last = steps.last_mut().unwrap();
                last.1 = last.1.mul(&RelativeWord::from_letters([c]));
            }
        }
    }
    let k = steps.len();
    let slot = |i: usize, flip: bool, h: &RelativeWord| {
        let Letter::Var(g) = steps[i].0 else { unreachable!() };
        let dir = if g.inverse != flip { -1 } else { 1 };
        let name = &alphabet.variables[g.index as usize];
        let label = if h.is_empty() { "1".to_string() } else { h.display(alphabet).to_string() };
        [edge(&format!("e{i}"), dir, name), corner(&label, None)]
    };
    let face: Vec<SlotSpec> = (0..k).flat_map(|i| slot(i, false, &steps[i].1)).collect();
    let mirror: Vec<SlotSpec> = (0..k).flat_map(|j| slot((k - j) % k, true, &steps[k - 1 - j].1.inverse())).collect();
    DiagramSpec {
        faces: vec![FaceSpec { id: "W".into(), boundary: face }, FaceSpec { id: "M".into(), boundary: mirror }],
        exterior_faces: Vec::new(),
        exterior_vertices: Vec::new(),
    }
}
