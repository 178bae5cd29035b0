//! Vertex and face labels, diagram conditions, reducible pairs and φ-cells.

use super::{map_report, HowieDiagram, MapReport};
use crate::rewriting::{GroupDescriptor, RewriteEngine};
use crate::truth::{Decision, Equality};
use crate::words::{Alphabet, FreeWord, Gen, Letter, RelativeWord};
use serde::Serialize;
use std::collections::BTreeMap;

/// `⟨H, t_1, t_2, ... | w_1, w_2, ...⟩`.
#[derive(Debug, Clone)]
pub struct RelativePresentation {
    pub h: GroupDescriptor,
    pub variables: Vec<String>,
    pub relators: Vec<RelativeWord>,
}

impl RelativePresentation {
    pub fn alphabet(&self) -> Alphabet {
        Alphabet { coefficients: self.h.generators.clone(), variables: self.variables.clone() }
    }
}

/// A cyclic label cut after each edge letter: `(t^{±1}, corner word)` pairs.
pub type Cycle = Vec<(Gen, FreeWord)>;

fn cycle_of(w: &RelativeWord) -> Option<Cycle> {
    let l = w.letters();
    let start = l.iter().position(|x| x.is_var())?;
    let mut out: Cycle = Vec::new();
    for k in 0..l.len() {
        match l[(start + k) % l.len()] {
            Letter::Var(g) => out.push((g, FreeWord::empty())),
            Letter::Coef(g) => {
                let last = out.last_mut().expect("starts with a variable");
                last.1 = last.1.mul(&FreeWord::new([g]));
            }
        }
    }
    Some(out)
}

fn face_cycle(d: &HowieDiagram, face: usize, start: usize) -> Cycle {
    let steps = &d.map.faces[face].steps;
    (0..steps.len())
        .map(|i| {
            let s = &steps[(start + i) % steps.len()];
            let g = Gen::new(d.edge_labels[s.pre_edge.edge], s.pre_edge.dir < 0);
            (g, d.corner_labels[s.corner].clone())
        })
        .collect()
}

fn cycle_word(c: &Cycle) -> RelativeWord {
    let mut letters = Vec::new();
    for (g, h) in c {
        letters.push(Letter::Var(*g));
        letters.extend(h.letters().iter().map(|&x| Letter::Coef(x)));
    }
    RelativeWord::from_letters(letters)
}

/// `∏ λ(e_i)^{ε_i} λ(c_i)` read anticlockwise from the pre-edge at `start`.
pub fn face_label(d: &HowieDiagram, face: usize, start: usize) -> RelativeWord {
    cycle_word(&face_cycle(d, face, start))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLabel {
    /// Corner ids, clockwise from the least one.
    pub corners: Vec<String>,
    /// Defined up to conjugacy.
    pub label: FreeWord,
}

pub fn vertex_label(d: &HowieDiagram, v: usize) -> VertexLabel {
    let corners = d.map.corners_at(v);
    let label = corners.iter().fold(FreeWord::empty(), |acc, &c| acc.mul(&d.corner_labels[c]));
    VertexLabel { corners: corners.iter().map(|&c| d.map.corner_names[c].clone()).collect(), label }
}

fn all_equal(verdicts: impl Iterator<Item = Equality>) -> Equality {
    let mut out = Equality::Equal;
    for v in verdicts {
        match v {
            Equality::Distinct => return Equality::Distinct,
            Equality::Unknown => out = Equality::Unknown,
            Equality::Equal => {}
        }
    }
    out
}

/// Whether `b` read from position `rot` spells `a`, corner words compared in `H`.
fn cycles_agree(a: &Cycle, b: &Cycle, rot: usize, engine: &RewriteEngine) -> Equality {
    if a.len() != b.len() {
        return Equality::Distinct;
    }
    let k = a.len();
    if (0..k).any(|j| a[j].0 != b[(j + rot) % k].0) {
        return Equality::Distinct;
    }
    all_equal((0..k).map(|j| engine.equal(&a[j].1, &b[(j + rot) % k].1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FaceVerdict {
    Exterior,
    /// The label is a rotation of `w_relator^{±1}`.
    Matches {
        relator: usize,
        inverse: bool,
        rotation: usize,
    },
    Unknown,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VertexVerdict {
    Exterior,
    Trivial,
    Unknown,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceCheck {
    pub id: String,
    pub label: String,
    #[serde(flatten)]
    pub verdict: FaceVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexCheck {
    pub corners: Vec<String>,
    pub label: String,
    pub verdict: VertexVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReduciblePair {
    pub faces: (String, String),
    pub edges: Vec<String>,
    pub verdict: Equality,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub map: MapReport,
    pub faces: Vec<FaceCheck>,
    pub vertices: Vec<VertexCheck>,
    pub reducible_pairs: Vec<ReduciblePair>,
    pub is_diagram: Decision,
    pub reduced: Decision,
}

fn match_face(c: &Cycle, pres: &RelativePresentation, engine: &RewriteEngine) -> FaceVerdict {
    let mut unknown = false;
    for (i, w) in pres.relators.iter().enumerate() {
        for inverse in [false, true] {
            let target = if inverse { w.inverse() } else { w.clone() };
            let Some(t) = cycle_of(&target) else { continue };
            for rot in 0..t.len() {
                match cycles_agree(&t, c, rot, engine) {
                    Equality::Equal => return FaceVerdict::Matches { relator: i, inverse, rotation: rot },
                    Equality::Unknown => unknown = true,
                    Equality::Distinct => {}
                }
            }
        }
    }
    if unknown {
        FaceVerdict::Unknown
    } else {
        FaceVerdict::Fail
    }
}

pub fn check_diagram(d: &HowieDiagram, pres: &RelativePresentation, engine: &RewriteEngine) -> DiagramReport {
    let alphabet = pres.alphabet();
    let faces: Vec<FaceCheck> = (0..d.map.faces.len())
        .map(|f| {
            let c = face_cycle(d, f, 0);
            let verdict =
                if d.exterior_faces.contains(&f) { FaceVerdict::Exterior } else { match_face(&c, pres, engine) };
            FaceCheck { id: d.map.faces[f].id.clone(), label: cycle_word(&c).display(&alphabet).to_string(), verdict }
        })
        .collect();
    let vertices: Vec<VertexCheck> = (0..d.map.vertex_count)
        .map(|v| {
            let l = vertex_label(d, v);
            let verdict = if d.exterior_vertices.contains(&v) {
                VertexVerdict::Exterior
            } else {
                match engine.is_trivial(&l.label) {
                    Equality::Equal => VertexVerdict::Trivial,
                    Equality::Unknown => VertexVerdict::Unknown,
                    Equality::Distinct => VertexVerdict::Fail,
                }
            };
            let label = l.label.display(&pres.h.generators).to_string();
            VertexCheck { corners: l.corners, label, verdict }
        })
        .collect();
    let reducible_pairs = find_reducible_pairs(d, engine);
    let fail = faces.iter().any(|f| f.verdict == FaceVerdict::Fail)
        || vertices.iter().any(|v| v.verdict == VertexVerdict::Fail);
    let unknown = faces.iter().any(|f| f.verdict == FaceVerdict::Unknown)
        || vertices.iter().any(|v| v.verdict == VertexVerdict::Unknown);
    let is_diagram = if fail {
        Decision::No
    } else if unknown {
        Decision::Unknown
    } else {
        Decision::Yes
    };
    let reduced = reduced_decision(&reducible_pairs);
    DiagramReport { map: map_report(&d.map), faces, vertices, reducible_pairs, is_diagram, reduced }
}

fn reduced_decision(pairs: &[ReduciblePair]) -> Decision {
    if pairs.iter().any(|p| p.verdict == Equality::Equal) {
        Decision::No
    } else if pairs.is_empty() {
        Decision::Yes
    } else {
        Decision::Unknown
    }
}

/// The cycle of `a^{-1}` read from the inverse of its first edge letter.
fn mirror(a: &Cycle) -> Cycle {
    let k = a.len();
    (0..k).map(|j| (a[(k - j) % k].0.inv(), a[k - 1 - j].1.inverse())).collect()
}

/// Distinct interior faces across an edge whose labels, read from that edge, are
/// mutually inverse. Pairs whose corner comparisons are undecided are listed with
/// an `UNKNOWN` verdict.
pub fn find_reducible_pairs(d: &HowieDiagram, engine: &RewriteEngine) -> Vec<ReduciblePair> {
    let mut found: BTreeMap<(usize, usize), (Vec<String>, Equality)> = BTreeMap::new();
    for (e, uses) in d.map.edge_uses.iter().enumerate() {
        let [(f, s), (g, t)] = *uses;
        if f == g || d.exterior_faces.contains(&f) || d.exterior_faces.contains(&g) {
            continue;
        }
        let a = face_cycle(d, f, s);
        let b = face_cycle(d, g, t);
        let v = cycles_agree(&mirror(&a), &b, 0, engine);
        if v == Equality::Distinct {
            continue;
        }
        let entry = found.entry((f.min(g), f.max(g))).or_insert((Vec::new(), Equality::Unknown));
        entry.0.push(d.map.edge_names[e].clone());
        if v == Equality::Equal {
            entry.1 = Equality::Equal;
        }
    }
    found
        .into_iter()
        .map(|((f, g), (edges, verdict))| ReduciblePair {
            faces: (d.map.faces[f].id.clone(), d.map.faces[g].id.clone()),
            edges,
            verdict,
        })
        .collect()
}

/// `⟨H, t | p^t = p^φ (p ∈ P∖1), w_1, ...⟩` with `P` given by generators and their images.
#[derive(Debug, Clone)]
pub struct PhiPresentationSpec {
    pub h: GroupDescriptor,
    /// Variable index of the letter `t`.
    pub letter: u32,
    pub p_generators: Vec<FreeWord>,
    pub phi_images: Vec<FreeWord>,
    /// Length bound when writing a corner word as an element of `P`.
    pub search_depth: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiVerdict {
    pub reduced: Decision,
    pub phi_cells: Vec<String>,
    pub adjacent_phi_cells: Vec<(String, String)>,
    pub phi_reduced: Decision,
}

/// Whether the face reads `t^{-1} p t (p^φ)^{-1}` up to rotation, `p` found by bounded search.
fn is_phi_cell(c: &Cycle, spec: &PhiPresentationSpec, engine: &RewriteEngine) -> bool {
    if c.len() != 2 {
        return false;
    }
    let t = Gen::pos(spec.letter);
    let (h1, h2) = match (c[0].0, c[1].0) {
        (a, b) if a == t.inv() && b == t => (&c[0].1, &c[1].1),
        (a, b) if a == t && b == t.inv() => (&c[1].1, &c[0].1),
        _ => return false,
    };
    if !engine.is_trivial(h1).is_distinct() {
        return false;
    }
    let k = spec.p_generators.len() as u32;
    let mut layer = vec![FreeWord::empty()];
    for _ in 0..spec.search_depth {
        let mut next = Vec::new();
        for u in &layer {
            for code in 0..2 * k {
                let g = Gen::from_code(code);
                if u.letters().last() == Some(&g.inv()) {
                    continue;
                }
                let u = u.mul(&FreeWord::new([g]));
                let p = u.substitute(&spec.p_generators);
                if engine.equal(&p, h1).is_equal()
                    && engine.equal(&u.substitute(&spec.phi_images), &h2.inverse()).is_equal()
                {
                    return true;
                }
                next.push(u);
            }
        }
        layer = next;
    }
    false
}

/// Reduced, and no two distinct interior φ-cells share an edge.
pub fn is_phi_reduced(d: &HowieDiagram, spec: &PhiPresentationSpec, engine: &RewriteEngine) -> PhiVerdict {
    let reduced = reduced_decision(&find_reducible_pairs(d, engine));
    let cells: Vec<bool> = (0..d.map.faces.len())
        .map(|f| !d.exterior_faces.contains(&f) && is_phi_cell(&face_cycle(d, f, 0), spec, engine))
        .collect();
    let mut adjacent = Vec::new();
    for uses in &d.map.edge_uses {
        let (f, g) = (uses[0].0, uses[1].0);
        let pair = (d.map.faces[f.min(g)].id.clone(), d.map.faces[f.max(g)].id.clone());
        if f != g && cells[f] && cells[g] && !adjacent.contains(&pair) {
            adjacent.push(pair);
        }
    }
    let phi_reduced = match reduced {
        Decision::No => Decision::No,
        _ if !adjacent.is_empty() => Decision::No,
        r => r,
    };
    PhiVerdict {
        reduced,
        phi_cells: (0..cells.len()).filter(|&f| cells[f]).map(|f| d.map.faces[f].id.clone()).collect(),
        adjacent_phi_cells: adjacent,
        phi_reduced,
    }
}
