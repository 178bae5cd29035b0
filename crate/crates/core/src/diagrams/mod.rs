//! Oriented maps on the sphere and Howie diagrams over relative presentations.

pub mod fixtures;
pub mod labels;

#[cfg(test)]
mod tests;

use crate::words::{parse_free_word, FreeWord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub use labels::{check_diagram, face_label, find_reducible_pairs, is_phi_reduced, vertex_label, PhiPresentationSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed map: {0}")]
    Malformed(String),
    #[error("bad label: {0}")]
    Label(String),
}

/// One boundary slot as written in a diagram file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlotSpec {
    Corner {
        corner: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    Edge {
        edge: String,
        dir: i8,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub id: String,
    /// Anticlockwise, alternating corners and pre-edges.
    pub boundary: Vec<SlotSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub faces: Vec<FaceSpec>,
    #[serde(default)]
    pub exterior_faces: Vec<String>,
    /// Vertices named by any of their corners.
    #[serde(default)]
    pub exterior_vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreEdge {
    pub edge: usize,
    /// `+1` when the anticlockwise boundary follows the arrow.
    pub dir: i8,
}

/// A pre-edge followed by the corner at its end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub pre_edge: PreEdge,
    pub corner: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: String,
    pub steps: Vec<Step>,
}

/// A combinatorial map on a closed oriented surface.
#[derive(Debug, Clone, Serialize)]
pub struct SphereMap {
    pub faces: Vec<Face>,
    pub edge_names: Vec<String>,
    pub corner_names: Vec<String>,
    /// Face and step index of each corner.
    pub corner_at: Vec<(usize, usize)>,
    /// Both pre-edges `(face, step)` of each edge.
    pub edge_uses: Vec<[(usize, usize); 2]>,
    /// Vertex of each corner.
    pub vertex_of: Vec<usize>,
    pub vertex_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub faces: usize,
    pub corners: usize,
    pub pre_edges: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub sphere: bool,
}

fn malformed(s: impl Into<String>) -> DiagramError {
    DiagramError::Malformed(s.into())
}

fn root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Raw labels read alongside the map.
struct RawLabels {
    corners: Vec<String>,
    edges: Vec<Option<String>>,
}

impl SphereMap {
    pub fn from_spec(spec: &DiagramSpec) -> Result<Self, DiagramError> {
        Self::build(spec).map(|(m, _)| m)
    }

    fn build(spec: &DiagramSpec) -> Result<(Self, RawLabels), DiagramError> {
        let mut faces = Vec::new();
        let mut edge_index: BTreeMap<String, usize> = BTreeMap::new();
        let mut edge_names = Vec::new();
        let mut edge_slots: Vec<Vec<(usize, usize, i8)>> = Vec::new();
        let mut raw = RawLabels { corners: Vec::new(), edges: Vec::new() };
        let mut corner_names = Vec::new();
        let mut corner_at = Vec::new();
        let mut seen_faces = BTreeSet::new();
        for (fi, f) in spec.faces.iter().enumerate() {
            if !seen_faces.insert(f.id.clone()) {
                return Err(malformed(format!("duplicate face id {}", f.id)));
            }
            let b = &f.boundary;
            if b.is_empty() {
                return Err(malformed(format!("face {} has an empty boundary", f.id)));
            }
            if b.len() % 2 == 1 {
                return Err(malformed(format!("face {} does not alternate corners and pre-edges", f.id)));
            }
            let first_edge = usize::from(matches!(b[0], SlotSpec::Corner { .. }));
            let mut corner_no = BTreeMap::new();
            let mut k = 0;
            for (pos, s) in b.iter().enumerate() {
                if let SlotSpec::Corner { .. } = s {
                    corner_no.insert(pos, k);
                    k += 1;
                }
            }
            let mut steps = Vec::new();
            for j in 0..b.len() / 2 {
                let ep = (first_edge + 2 * j) % b.len();
                let cp = (ep + 1) % b.len();
                let (SlotSpec::Edge { edge, dir, label }, SlotSpec::Corner { corner, id }) = (&b[ep], &b[cp]) else {
                    return Err(malformed(format!("face {} does not alternate corners and pre-edges", f.id)));
                };
                if *dir != 1 && *dir != -1 {
                    return Err(malformed(format!("edge {edge} has direction {dir}")));
                }
                let e = *edge_index.entry(edge.clone()).or_insert_with(|| {
                    edge_names.push(edge.clone());
                    edge_slots.push(Vec::new());
                    raw.edges.push(None);
                    edge_names.len() - 1
                });
                if let Some(l) = label {
                    match &raw.edges[e] {
                        Some(old) if old != l => {
                            return Err(malformed(format!("edge {edge} carries labels {old} and {l}")))
                        }
                        _ => raw.edges[e] = Some(l.clone()),
                    }
                }
                edge_slots[e].push((fi, j, *dir));
                let c = corner_names.len();
                corner_names.push(id.clone().unwrap_or_else(|| format!("{}.{}", f.id, corner_no[&cp])));
                corner_at.push((fi, j));
                raw.corners.push(corner.clone());
                steps.push(Step { pre_edge: PreEdge { edge: e, dir: *dir }, corner: c });
            }
            faces.push(Face { id: f.id.clone(), steps });
        }
        let mut names = BTreeSet::new();
        for n in &corner_names {
            if !names.insert(n) {
                return Err(malformed(format!("duplicate corner id {n}")));
            }
        }
        let mut edge_uses = Vec::new();
        for (e, uses) in edge_slots.iter().enumerate() {
            if uses.len() != 2 {
                return Err(malformed(format!("edge {} appears {} time(s), not twice", edge_names[e], uses.len())));
            }
            if uses[0].2 == uses[1].2 {
                return Err(malformed(format!("edge {} is traversed the same way by both faces", edge_names[e])));
            }
            edge_uses.push([(uses[0].0, uses[0].1), (uses[1].0, uses[1].1)]);
        }
        let n = corner_names.len();
        let mut parent: Vec<usize> = (0..n).collect();
        let start = |faces: &[Face], (f, s): (usize, usize)| {
            let k = faces[f].steps.len();
            faces[f].steps[(s + k - 1) % k].corner
        };
        for uses in &edge_uses {
            let (a, b) = (uses[0], uses[1]);
            let (sa, ea) = (start(&faces, a), faces[a.0].steps[a.1].corner);
            let (sb, eb) = (start(&faces, b), faces[b.0].steps[b.1].corner);
            for (x, y) in [(sa, eb), (ea, sb)] {
                let (rx, ry) = (root(&mut parent, x), root(&mut parent, y));
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
        let mut ids = BTreeMap::new();
        let vertex_of: Vec<usize> = (0..n)
            .map(|c| {
                let r = root(&mut parent, c);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect();
        let map =
            SphereMap { faces, edge_names, corner_names, corner_at, edge_uses, vertex_of, vertex_count: ids.len() };
        Ok((map, raw))
    }

    pub fn corner_count(&self) -> usize {
        self.corner_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    /// Corner of the face across the outgoing pre-edge of `c`, at the same vertex.
    pub fn clockwise_next(&self, c: usize) -> usize {
        let (f, s) = self.corner_at[c];
        let k = self.faces[f].steps.len();
        let out = (f, (s + 1) % k);
        let e = self.faces[f].steps[out.1].pre_edge.edge;
        let uses = self.edge_uses[e];
        let mate = if uses[0] == out { uses[1] } else { uses[0] };
        self.faces[mate.0].steps[mate.1].corner
    }

    /// Corners at vertex `v` listed clockwise from the least corner index.
    pub fn corners_at(&self, v: usize) -> Vec<usize> {
        let Some(first) = (0..self.corner_count()).find(|&c| self.vertex_of[c] == v) else {
            return Vec::new();
        };
        let mut out = vec![first];
        let mut c = self.clockwise_next(first);
        while c != first {
            out.push(c);
            c = self.clockwise_next(c);
        }
        out
    }

    pub fn corner_by_name(&self, name: &str) -> Option<usize> {
        self.corner_names.iter().position(|n| n == name)
    }

    pub fn face_by_id(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }
}

pub fn map_report(m: &SphereMap) -> MapReport {
    let (v, e, f) = (m.vertex_count, m.edge_count(), m.faces.len());
    let mut parent: Vec<usize> = (0..v).collect();
    for uses in &m.edge_uses {
        let a = uses[0];
        let k = m.faces[a.0].steps.len();
        let x = m.vertex_of[m.faces[a.0].steps[(a.1 + k - 1) % k].corner];
        let y = m.vertex_of[m.faces[a.0].steps[a.1].corner];
        let (rx, ry) = (root(&mut parent, x), root(&mut parent, y));
        parent[rx] = ry;
    }
    let connected = (0..v).filter(|&i| root(&mut parent, i) == i).count() <= 1;
    let chi = v as i64 - e as i64 + f as i64;
    MapReport {
        faces: f,
        corners: m.corner_count(),
        pre_edges: m.faces.iter().map(|f| f.steps.len()).sum(),
        edges: e,
        vertices: v,
        euler_characteristic: chi,
        connected,
        sphere: connected && chi == 2,
    }
}

/// Structural checks plus the sphere test.
pub fn validate_map(m: &SphereMap) -> Result<MapReport, DiagramError> {
    let r = map_report(m);
    if r.corners != r.pre_edges || r.pre_edges != 2 * r.edges {
        return Err(malformed(format!("{} corners, {} pre-edges, {} edges", r.corners, r.pre_edges, r.edges)));
    }
    if !r.connected {
        return Err(malformed("the 1-skeleton is not connected"));
    }
    if r.euler_characteristic != 2 {
        return Err(malformed(format!(
            "Euler characteristic {} = {} - {} + {} is not 2",
            r.euler_characteristic, r.vertices, r.edges, r.faces
        )));
    }
    Ok(r)
}

/// A labelled map: corners carry words of `H`, edges carry letters `t_i`.
#[derive(Debug, Clone, Serialize)]
pub struct HowieDiagram {
    pub map: SphereMap,
    pub corner_labels: Vec<FreeWord>,
    /// Variable index of each edge label.
    pub edge_labels: Vec<u32>,
    pub exterior_faces: BTreeSet<usize>,
    pub exterior_vertices: BTreeSet<usize>,
}

impl HowieDiagram {
    /// Reads labels with `h_names` for corner words and `t_names` for edge letters.
    /// An unlabelled edge gets the first letter.
    pub fn from_spec(spec: &DiagramSpec, h_names: &[String], t_names: &[String]) -> Result<Self, DiagramError> {
        let (map, raw) = SphereMap::build(spec)?;
        let corner_labels = raw
            .corners
            .iter()
            .map(|c| parse_free_word(c, h_names).map_err(|e| DiagramError::Label(format!("corner `{c}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let edge_labels = raw
            .edges
            .iter()
            .map(|l| match l {
                None if !t_names.is_empty() => Ok(0),
                None => Err(DiagramError::Label("no edge letters declared".into())),
                Some(l) => t_names
                    .iter()
                    .position(|t| t == l)
                    .map(|i| i as u32)
                    .ok_or_else(|| DiagramError::Label(format!("undeclared edge label `{l}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut exterior_faces = BTreeSet::new();
        for id in &spec.exterior_faces {
            exterior_faces.insert(map.face_by_id(id).ok_or_else(|| malformed(format!("unknown exterior face {id}")))?);
        }
        let mut exterior_vertices = BTreeSet::new();
        for c in &spec.exterior_vertices {
            let c = map.corner_by_name(c).ok_or_else(|| malformed(format!("unknown corner {c}")))?;
            exterior_vertices.insert(map.vertex_of[c]);
        }
        Ok(HowieDiagram { map, corner_labels, edge_labels, exterior_faces, exterior_vertices })
    }

    pub fn from_json(text: &str, h_names: &[String], t_names: &[String]) -> Result<Self, DiagramError> {
        let spec: DiagramSpec = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        Self::from_spec(&spec, h_names, t_names)
    }
}
