//! Finitely generated subgroups of free groups via Stallings folding.

use crate::words::{FreeWord, Gen};
use std::collections::{BTreeMap, VecDeque};

/// Folded core graph of a subgroup, with a free basis read off a spanning tree.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    /// `edges[v]` maps a letter code to the target vertex; both orientations are stored.
    edges: Vec<BTreeMap<u32, usize>>,
    /// Path label from the base vertex to each vertex along the tree.
    tree_path: Vec<FreeWord>,
    /// Non-tree edges `(u, code, v)` with `code` a positive letter, in basis order.
    basis_edges: Vec<(usize, u32, usize)>,
}

struct Folder {
    parent: Vec<usize>,
    edges: Vec<BTreeMap<u32, usize>>,
}

impl Folder {
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.edges.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn add_edge(&mut self, u: usize, g: Gen, v: usize) {
        let mut pending = VecDeque::from([(u, g.code(), v), (v, g.code() ^ 1, u)]);
        while let Some((a, c, b)) = pending.pop_front() {
            let (a, b) = (self.find(a), self.find(b));
            match self.edges[a].get(&c).copied() {
                None => {
                    self.edges[a].insert(c, b);
                }
                Some(old) => {
                    let old = self.find(old);
                    if old != b {
                        self.merge(old, b, &mut pending);
                    }
                }
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize, pending: &mut VecDeque<(usize, u32, usize)>) {
        self.parent[b] = a;
        let moved = std::mem::take(&mut self.edges[b]);
        for (c, t) in moved {
            pending.push_back((a, c, t));
        }
    }
}

impl SubgroupGraph {
    pub fn new(gens: &[FreeWord]) -> Self {
        let mut f = Folder { parent: vec![0], edges: vec![BTreeMap::new()] };
        for w in gens {
            let letters = w.letters();
            if letters.is_empty() {
                continue;
            }
            let mut cur = 0;
            for (k, &g) in letters.iter().enumerate() {
                let next = if k + 1 == letters.len() { 0 } else { f.add_vertex() };
                f.add_edge(cur, g, next);
                cur = next;
            }
        }
        // Compact surviving vertices, base first.
        let base = f.find(0);
        let mut index = BTreeMap::new();
        let mut order = vec![base];
        index.insert(base, 0usize);
        let mut queue = VecDeque::from([base]);
        let mut edges: Vec<BTreeMap<u32, usize>> = vec![BTreeMap::new()];
        let mut tree_path = vec![FreeWord::empty()];
        let mut tree_edges = std::collections::HashSet::new();
        while let Some(v) = queue.pop_front() {
            let vi = index[&v];
            let out: Vec<(u32, usize)> = f.edges[v].iter().map(|(&c, &t)| (c, t)).collect();
            for (c, t) in out {
                let t = f.find(t);
                let ti = match index.get(&t) {
                    Some(&i) => i,
                    None => {
                        let i = order.len();
                        index.insert(t, i);
                        order.push(t);
                        edges.push(BTreeMap::new());
                        tree_path.push(tree_path[vi].mul(&FreeWord::new([Gen::from_code(c)])));
                        tree_edges.insert((vi, c, i));
                        tree_edges.insert((i, c ^ 1, vi));
                        queue.push_back(t);
                        i
                    }
                };
                edges[vi].insert(c, ti);
            }
        }
        let mut basis_edges = Vec::new();
        for (u, out) in edges.iter().enumerate() {
            for (&c, &v) in out {
                if c & 1 == 0 && !tree_edges.contains(&(u, c, v)) {
                    basis_edges.push((u, c, v));
                }
            }
        }
        SubgroupGraph { edges, tree_path, basis_edges }
    }

    pub fn rank(&self) -> usize {
        self.basis_edges.len()
    }

    pub fn basis(&self) -> Vec<FreeWord> {
        self.basis_edges
            .iter()
            .map(|&(u, c, v)| {
                self.tree_path[u].mul(&FreeWord::new([Gen::from_code(c)])).mul(&self.tree_path[v].inverse())
            })
            .collect()
    }

    pub fn contains(&self, w: &FreeWord) -> bool {
        self.express(w).is_some()
    }

    /// Coordinates of `w` as a word in the basis (generator `k` is the `k`-th basis element).
    pub fn express(&self, w: &FreeWord) -> Option<FreeWord> {
        let mut v = 0;
        let mut out = Vec::new();
        for g in w.letters() {
            let c = g.code();
            let t = *self.edges[v].get(&c)?;
            let key = if c & 1 == 0 { (v, c, t) } else { (t, c ^ 1, v) };
            if let Some(k) = self.basis_edges.iter().position(|e| *e == key) {
                out.push(Gen::new(k as u32, c & 1 == 1));
            }
            v = t;
        }
        (v == 0).then(|| FreeWord::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(p: &[(u32, i64)]) -> FreeWord {
        FreeWord::from_powers(p)
    }

    #[test]
    fn redundant_generators_fold_away() {
        let g = SubgroupGraph::new(&[w(&[(0, 1), (1, 1)]), w(&[(0, 1), (1, 1)]).pow(2), FreeWord::empty()]);
        assert_eq!(g.rank(), 1);
        assert!(g.contains(&w(&[(0, 1), (1, 1)]).pow(-3)));
        assert!(!g.contains(&FreeWord::gen(0)));
    }

    #[test]
    fn even_length_subgroup_has_rank_three() {
        // words of even length in F(x, y): index 2, rank 1 + 2(2 - 1) = 3
        let gens = [w(&[(0, 2)]), w(&[(0, 1), (1, 1)]), w(&[(0, 1), (1, -1)])];
        let g = SubgroupGraph::new(&gens);
        assert_eq!(g.rank(), 3);
        assert!(g.contains(&w(&[(1, 2)])));
        assert!(!g.contains(&w(&[(1, 3)])));
    }

    fn word() -> impl Strategy<Value = FreeWord> {
        prop::collection::vec((0u32..2, any::<bool>()), 0..6)
            .prop_map(|v| FreeWord::new(v.into_iter().map(|(i, b)| Gen::new(i, b))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn expressions_evaluate_back(gens in prop::collection::vec(word(), 1..4), pick in prop::collection::vec((0usize..4, any::<bool>()), 0..5)) {
            let g = SubgroupGraph::new(&gens);
            let mut x = FreeWord::empty();
            for (k, inv) in pick {
                let h = &gens[k % gens.len()];
                x = x.mul(&if inv { h.inverse() } else { h.clone() });
            }
            let coords = g.express(&x).expect("product of generators lies in the subgroup");
            prop_assert_eq!(coords.substitute(&g.basis()), x);
            for b in g.basis() {
                prop_assert!(!b.is_empty());
            }
        }
    }
}
