//! Families `Ω` of index subsets, the injectivity conditions for
//! `G_ω → G_I`, and explicit amalgam decompositions of `G_{Ω′}`.

use super::ProductError;
use crate::rewriting::free_product::{reduced_elements, FreeProductReducer};
use crate::rewriting::lattice::Lattice;
use crate::rewriting::{ClassHint, GroupDescriptor, Limits, RewriteEngine};
use crate::truth::Equality;
use crate::words::{parse_free_word, FreeWord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Index set `I`, the family `Ω`, factors `G_i` and relators `N_ω`.
///
/// Relators of `N_ω` are words over the generators of the factors in `ω`,
/// numbered factor by factor in index order.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaFamily {
    pub index: Vec<String>,
    pub omega: Vec<BTreeSet<usize>>,
    pub factors: Vec<GroupDescriptor>,
    pub relators: Vec<Vec<FreeWord>>,
}

#[derive(Deserialize)]
struct FactorJson {
    generators: Vec<String>,
    #[serde(default)]
    relators: Vec<String>,
    #[serde(default)]
    class: Option<ClassHint>,
    #[serde(default = "yes")]
    torsion_free: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
struct FamilyJson {
    #[serde(rename = "I")]
    index: Vec<String>,
    omega: Vec<Vec<String>>,
    factors: BTreeMap<String, FactorJson>,
    #[serde(rename = "N", default)]
    relators: BTreeMap<String, Vec<String>>,
}

impl OmegaFamily {
    /// Duplicate sets are collapsed; every set must be nonempty.
    pub fn new(
        index: Vec<String>,
        omega: Vec<BTreeSet<usize>>,
        factors: Vec<GroupDescriptor>,
        relators: Vec<Vec<FreeWord>>,
    ) -> Result<Self, ProductError> {
        if factors.len() != index.len() {
            return Err(ProductError::Malformed("one factor per index is required".into()));
        }
        if relators.len() != omega.len() {
            return Err(ProductError::Malformed("one relator list per set is required".into()));
        }
        let mut fam = OmegaFamily { index, omega: Vec::new(), factors, relators: Vec::new() };
        for (w, rels) in omega.into_iter().zip(relators) {
            if w.is_empty() {
                return Err(ProductError::Malformed("empty set in the family".into()));
            }
            if w.iter().any(|&i| i >= fam.index.len()) {
                return Err(ProductError::Malformed("set refers to an unknown index".into()));
            }
            match fam.omega.iter().position(|v| *v == w) {
                Some(k) => fam.relators[k].extend(rels),
                None => {
                    fam.omega.push(w);
                    fam.relators.push(rels);
                }
            }
        }
        for (k, rels) in fam.relators.iter().enumerate() {
            let rank = fam.omega_group(k).rank() as u32;
            if rels.iter().any(|r| r.max_index().is_some_and(|m| m >= rank)) {
                return Err(ProductError::Malformed(format!("relator of {} uses foreign generators", fam.set_name(k))));
            }
        }
        Ok(fam)
    }

    /// Family with trivial `N_ω` and the given factors.
    pub fn free(index: &[&str], omega: &[&[&str]], factors: Vec<GroupDescriptor>) -> Result<Self, ProductError> {
        let index: Vec<String> = index.iter().map(|s| s.to_string()).collect();
        let sets = omega
            .iter()
            .map(|w| w.iter().map(|x| position(&index, x)).collect::<Result<BTreeSet<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let n = sets.len();
        OmegaFamily::new(index, sets, factors, vec![Vec::new(); n])
    }

    /// `{"I": [...], "omega": [[...]], "factors": {i: {...}}, "N": {"a,b": [...]}}`.
    pub fn from_json(text: &str) -> Result<Self, ProductError> {
        let raw: FamilyJson = serde_json::from_str(text).map_err(|e| ProductError::Malformed(e.to_string()))?;
        let mut factors = Vec::new();
        for name in &raw.index {
            let f = raw.factors.get(name).ok_or_else(|| ProductError::Malformed(format!("no factor for {name}")))?;
            let relators = f
                .relators
                .iter()
                .map(|r| parse_free_word(r, &f.generators))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ProductError::Malformed(format!("factor {name}: {e}")))?;
            let class_hint = f.class.unwrap_or(if relators.is_empty() { ClassHint::Free } else { ClassHint::Generic });
            factors.push(GroupDescriptor {
                generators: f.generators.clone(),
                relators,
                class_hint,
                torsion_free: f.torsion_free,
            });
        }
        let sets = raw
            .omega
            .iter()
            .map(|w| w.iter().map(|x| position(&raw.index, x)).collect::<Result<BTreeSet<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut relators = vec![Vec::new(); sets.len()];
        for (key, words) in &raw.relators {
            let set = key.split(',').map(|x| position(&raw.index, x.trim())).collect::<Result<BTreeSet<_>, _>>()?;
            let k = sets
                .iter()
                .position(|w| *w == set)
                .ok_or_else(|| ProductError::Malformed(format!("N given for unknown set {key}")))?;
            let names: Vec<String> = set.iter().flat_map(|&i| factors[i].generators.iter().cloned()).collect();
            for w in words {
                relators[k]
                    .push(parse_free_word(w, &names).map_err(|e| ProductError::Malformed(format!("N[{key}]: {e}")))?);
            }
        }
        OmegaFamily::new(raw.index, sets, factors, relators)
    }

    pub fn set_name(&self, k: usize) -> String {
        self.omega[k].iter().map(|&i| self.index[i].to_uppercase()).collect()
    }

    pub fn intersection(&self) -> BTreeSet<usize> {
        let mut it = self.omega.iter();
        let Some(first) = it.next() else { return BTreeSet::new() };
        it.fold(first.clone(), |acc, w| &acc & w)
    }

    /// Offset of each factor's generators inside `★_{i∈ω} G_i`.
    fn offsets(&self, set: &BTreeSet<usize>) -> BTreeMap<usize, u32> {
        let mut off = 0;
        set.iter()
            .map(|&i| {
                let o = off;
                off += self.factors[i].rank() as u32;
                (i, o)
            })
            .collect()
    }

    fn free_product(&self, set: &BTreeSet<usize>) -> GroupDescriptor {
        let offsets = self.offsets(set);
        let mut generators = Vec::new();
        let mut relators = Vec::new();
        for &i in set {
            let f = &self.factors[i];
            let shift: Vec<u32> = (0..f.rank() as u32).map(|g| g + offsets[&i]).collect();
            generators.extend(f.generators.iter().cloned());
            relators.extend(f.relators.iter().map(|r| r.relabel(&shift)));
        }
        let class_hint = if relators.is_empty() { ClassHint::Free } else { ClassHint::Generic };
        let torsion_free = set.iter().all(|&i| self.factors[i].torsion_free);
        GroupDescriptor { generators, relators, class_hint, torsion_free }
    }

    /// Presentation of `G_ω`.
    pub fn omega_group(&self, k: usize) -> GroupDescriptor {
        let mut d = self.free_product(&self.omega[k]);
        if !self.relators[k].is_empty() {
            d.relators.extend(self.relators[k].iter().cloned());
            d.class_hint = ClassHint::Generic;
        }
        d
    }
}

fn position(index: &[String], name: &str) -> Result<usize, ProductError> {
    index.iter().position(|x| x == name).ok_or_else(|| ProductError::Malformed(format!("unknown index {name}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthVerdict {
    /// Decided exactly.
    Holds,
    HoldsAtDepth(usize),
    Refuted,
    Unknown,
}

impl fmt::Display for DepthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthVerdict::Holds => write!(f, "HOLDS"),
            DepthVerdict::HoldsAtDepth(d) => write!(f, "HOLDS_AT_DEPTH_{d}"),
            DepthVerdict::Refuted => write!(f, "REFUTED"),
            DepthVerdict::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

impl Serialize for DepthVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl DepthVerdict {
    pub fn is_refuted(self) -> bool {
        self == DepthVerdict::Refuted
    }
}

/// `min`/`max` elements for one subfamily `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinMax {
    pub family: Vec<String>,
    pub min: String,
    pub omega_min: String,
    pub max: String,
    pub omega_max: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CombinatorialReport {
    pub holds: bool,
    pub subfamilies_checked: usize,
    pub witnesses: Vec<MinMax>,
    /// Subfamilies admitting no `min`/`max` pair.
    pub failures: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorCheck {
    pub omega: String,
    pub i: String,
    pub verdict: DepthVerdict,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop1Report {
    pub combinatorial: CombinatorialReport,
    /// `N_ω ∩ ★_{j∈ω∖{i}} G_j = {1}` for `i ∉ ∩Ω`.
    pub injectivity: Vec<FactorCheck>,
    /// `(★_{j∈ω∖{i}} G_j) N_ω ⊉ G_i`.
    pub strictness: Vec<FactorCheck>,
    pub depth: usize,
}

impl Prop1Report {
    pub fn conditions_hold(&self) -> bool {
        self.combinatorial.holds
            && self.injectivity.iter().all(|c| !c.verdict.is_refuted() && c.verdict != DepthVerdict::Unknown)
    }
}

const MAX_ENUMERATED_FAMILY: usize = 20;

/// `min`/`max` for `F` given as indices into `fam.omega`: `min` is the least
/// element lying in exactly one set, `max` the greatest such element lying in a
/// different set.
pub fn min_max(fam: &OmegaFamily, members: &[usize]) -> Option<(usize, usize, usize, usize)> {
    let mut private: Vec<(usize, usize)> = Vec::new();
    let union: BTreeSet<usize> = members.iter().flat_map(|&k| fam.omega[k].iter().copied()).collect();
    for &x in &union {
        let owners: Vec<usize> = members.iter().copied().filter(|&k| fam.omega[k].contains(&x)).collect();
        if owners.len() == 1 {
            private.push((x, owners[0]));
        }
    }
    let &(min, omin) = private.first()?;
    let &(max, omax) = private.iter().rev().find(|(_, k)| *k != omin)?;
    Some((min, omin, max, omax))
}

pub fn combinatorial_conditions(fam: &OmegaFamily) -> Result<CombinatorialReport, ProductError> {
    let n = fam.omega.len();
    if n > MAX_ENUMERATED_FAMILY {
        return Err(ProductError::Malformed(format!("family of {n} sets is too large to enumerate")));
    }
    let mut report =
        CombinatorialReport { holds: true, subfamilies_checked: 0, witnesses: Vec::new(), failures: Vec::new() };
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
        let family: Vec<String> = members.iter().map(|&k| fam.set_name(k)).collect();
        report.subfamilies_checked += 1;
        match min_max(fam, &members) {
            Some((min, omin, max, omax)) => report.witnesses.push(MinMax {
                family,
                min: fam.index[min].clone(),
                omega_min: fam.set_name(omin),
                max: fam.index[max].clone(),
                omega_max: fam.set_name(omax),
            }),
            None => {
                report.holds = false;
                report.failures.push(family);
            }
        }
    }
    Ok(report)
}

const WORD_BUDGET: usize = 2_000_000;

/// Generators of `★_{j∈ω∖{i}} G_j` inside `★_{j∈ω} G_j`.
fn sub_embedding(fam: &OmegaFamily, set: &BTreeSet<usize>, i: usize) -> (BTreeSet<usize>, Vec<u32>) {
    let full = fam.offsets(set);
    let mut sub = set.clone();
    sub.remove(&i);
    let map = sub
        .iter()
        .flat_map(|&j| {
            let off = full[&j];
            (0..fam.factors[j].rank() as u32).map(move |g| g + off)
        })
        .collect();
    (sub, map)
}

/// Both algebraic conditions for every `ω` and `i ∈ ω ∖ ∩Ω`, searching words up to `depth`.
pub fn prop1_conditions(fam: &OmegaFamily, depth: usize, limits: &Limits) -> Result<Prop1Report, ProductError> {
    let combinatorial = combinatorial_conditions(fam)?;
    let engines: Vec<RewriteEngine> = fam.factors.iter().map(|f| RewriteEngine::complete(f, limits)).collect();
    let core = fam.intersection();
    let mut injectivity = Vec::new();
    let mut strictness = Vec::new();
    for k in 0..fam.omega.len() {
        let set = &fam.omega[k];
        let g_omega = RewriteEngine::complete(&fam.omega_group(k), limits);
        let names = fam.omega_group(k).generators;
        for &i in set.difference(&core) {
            let (sub, map) = sub_embedding(fam, set, i);
            let reducer = FreeProductReducer::new(sub.iter().map(|&j| &engines[j]).collect());

            let mut killed = None;
            let mut undecided = false;
            let run = reduced_elements(&reducer, depth, WORD_BUDGET, &mut |w| {
                match g_omega.is_trivial(&w.relabel(&map)) {
                    Equality::Equal => {
                        killed = Some(w.relabel(&map));
                        return false;
                    }
                    Equality::Unknown => undecided = true,
                    Equality::Distinct => {}
                }
                true
            });
            let verdict = if killed.is_some() {
                DepthVerdict::Refuted
            } else if undecided || run.undecided {
                DepthVerdict::Unknown
            } else {
                DepthVerdict::HoldsAtDepth(run.depth)
            };
            injectivity.push(FactorCheck {
                omega: fam.set_name(k),
                i: fam.index[i].clone(),
                verdict,
                witness: killed.map(|w| w.display(&names).to_string()),
            });

            strictness.push(strictness_check(fam, k, i, &g_omega, &reducer, &map, depth, &names));
        }
    }
    Ok(Prop1Report { combinatorial, injectivity, strictness, depth })
}

#[allow(clippy::too_many_arguments)]
fn strictness_check(
    fam: &OmegaFamily,
    k: usize,
    i: usize,
    g_omega: &RewriteEngine,
    reducer: &FreeProductReducer,
    map: &[u32],
    depth: usize,
    names: &[String],
) -> FactorCheck {
    let offset = fam.offsets(&fam.omega[k])[&i];
    let mut verdict = DepthVerdict::Refuted;
    let mut witness = None;
    for g in 0..fam.factors[i].rank() as u32 {
        let target = FreeWord::gen(g + offset);
        let mut found = false;
        reduced_elements(reducer, depth, WORD_BUDGET, &mut |w| {
            found = g_omega.equal(&w.relabel(map), &target) == Equality::Equal;
            !found
        });
        if !found {
            let ab = g_omega.abelianization();
            let mut rows: Vec<_> = (0..map.len() as u32).map(|j| ab.image(&FreeWord::gen(map[j as usize]))).collect();
            rows.extend(ab.matrix.iter().cloned());
            let span = Lattice::new(ab.generators, rows);
            verdict =
                if span.contains(&ab.image(&target)) { DepthVerdict::HoldsAtDepth(depth) } else { DepthVerdict::Holds };
            witness = Some(target.display(names).to_string());
            if verdict == DepthVerdict::Holds {
                break;
            }
        }
    }
    FactorCheck { omega: fam.set_name(k), i: fam.index[i].clone(), verdict, witness }
}

/// Decomposition of `G_{Ω′}` into iterated amalgams of the `G_ω` and free factors `G_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AfpTree {
    Empty,
    /// `G_ω` for a set of the family.
    Leaf(usize),
    /// A single factor `G_i`.
    Factor(usize),
    FreeProduct(Vec<AfpTree>),
    /// `left *_{★_{i∈over} G_i} G_{right}`, split off at the private element `private`.
    Amalgam {
        left: Box<AfpTree>,
        right: usize,
        over: BTreeSet<usize>,
        private: usize,
    },
}

impl AfpTree {
    pub fn render(&self, fam: &OmegaFamily) -> String {
        match self {
            AfpTree::Empty => "1".into(),
            AfpTree::Leaf(k) => fam.set_name(*k),
            AfpTree::Factor(i) => fam.index[*i].to_uppercase(),
            AfpTree::FreeProduct(parts) => parts.iter().map(|p| p.wrapped(fam)).collect::<Vec<_>>().join(" * "),
            AfpTree::Amalgam { left, right, over, .. } => {
                let over: Vec<String> = over.iter().map(|&i| fam.index[i].to_uppercase()).collect();
                format!("{} *_{{{}}} {}", left.wrapped(fam), over.join("*"), fam.set_name(*right))
            }
        }
    }

    fn wrapped(&self, fam: &OmegaFamily) -> String {
        match self {
            AfpTree::FreeProduct(_) | AfpTree::Amalgam { .. } => format!("({})", self.render(fam)),
            _ => self.render(fam),
        }
    }

    /// Sets of the family occurring as leaves.
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            AfpTree::Empty | AfpTree::Factor(_) => Vec::new(),
            AfpTree::Leaf(k) => vec![*k],
            AfpTree::FreeProduct(parts) => parts.iter().flat_map(|p| p.leaves()).collect(),
            AfpTree::Amalgam { left, right, .. } => {
                let mut v = left.leaves();
                v.push(*right);
                v
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma8Report {
    pub tree: AfpTree,
    pub rendered: String,
    /// 1 when `ω ∈ Ω′`, 2 otherwise.
    pub case: u8,
    pub notes: Vec<String>,
}

/// Sets and free factors making up `G_F * ★_{r ∈ shared ∖ ∪F} G_r`.
struct Split<'a> {
    fam: &'a OmegaFamily,
    /// Indices of the extra set in case 2; never private.
    avoid: &'a BTreeSet<usize>,
    protected: Option<usize>,
}

impl Split<'_> {
    /// `F` is split as `(rest) *_γ G_{ω′}` where `ω′` holds the greatest element
    /// private to it. Indices in `shared` are amalgamated further up, so they
    /// are kept out of `ω′` when possible; otherwise they are attached as free
    /// factors to a split that ignores them.
    fn build(&self, family: &[usize], shared: &BTreeSet<usize>) -> Result<AfpTree, ProductError> {
        let fam = self.fam;
        let union: BTreeSet<usize> = family.iter().flat_map(|&k| fam.omega[k].iter().copied()).collect();
        let free: Vec<AfpTree> = shared.difference(&union).map(|&i| AfpTree::Factor(i)).collect();
        let with_free = |core: AfpTree| -> AfpTree {
            if free.is_empty() {
                return core;
            }
            let mut parts = match core {
                AfpTree::Empty => Vec::new(),
                c => vec![c],
            };
            parts.extend(free.iter().cloned());
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                AfpTree::FreeProduct(parts)
            }
        };
        match family {
            [] => Ok(with_free(AfpTree::Empty)),
            [only] => Ok(with_free(AfpTree::Leaf(*only))),
            _ => {
                if let Some(t) = self.split_off(family, shared)? {
                    return Ok(t);
                }
                if !shared.is_empty() {
                    if let Some(t) = self.split_off(family, &BTreeSet::new())? {
                        return Ok(with_free(t));
                    }
                }
                let names: Vec<String> = family.iter().map(|&k| fam.set_name(k)).collect();
                Err(ProductError::ConditionsFail(format!("no set with a private element in {{{}}}", names.join(", "))))
            }
        }
    }

    fn split_off(&self, family: &[usize], shared: &BTreeSet<usize>) -> Result<Option<AfpTree>, ProductError> {
        let fam = self.fam;
        let mut best: Option<(usize, usize)> = None;
        for &k in family {
            if Some(k) == self.protected {
                continue;
            }
            let others: BTreeSet<usize> = family
                .iter()
                .filter(|&&j| j != k)
                .flat_map(|&j| fam.omega[j].iter().copied())
                .chain(shared.iter().copied())
                .chain(self.avoid.iter().copied())
                .collect();
            if let Some(&m) = fam.omega[k].difference(&others).last() {
                if best.is_none_or(|(bm, _)| m > bm) {
                    best = Some((m, k));
                }
            }
        }
        let Some((m, chosen)) = best else { return Ok(None) };
        let rest: Vec<usize> = family.iter().copied().filter(|&k| k != chosen).collect();
        let outside: BTreeSet<usize> = rest
            .iter()
            .flat_map(|&j| fam.omega[j].iter().copied())
            .chain(shared.iter().copied())
            .chain(self.avoid.iter().copied())
            .collect();
        let gamma: BTreeSet<usize> = &fam.omega[chosen] & &outside;
        let next_shared: BTreeSet<usize> = &gamma | &(shared - &fam.omega[chosen]);
        let left = self.build(&rest, &next_shared)?;
        Ok(Some(AfpTree::Amalgam { left: Box::new(left), right: chosen, over: gamma, private: m }))
    }
}

/// Decomposition of `G_{Ω′}` witnessing that the `G_i`, `i ∈ α`, freely generate
/// their free product in it.
pub fn lemma8_decomposition(
    fam: &OmegaFamily,
    omega_prime: &[usize],
    omega: usize,
    alpha: &BTreeSet<usize>,
) -> Result<Lemma8Report, ProductError> {
    if omega >= fam.omega.len() || omega_prime.iter().any(|&k| k >= fam.omega.len()) {
        return Err(ProductError::Malformed("set index out of range".into()));
    }
    let mut family: Vec<usize> = omega_prime.to_vec();
    family.sort_unstable();
    family.dedup();
    let w = &fam.omega[omega];
    let union: BTreeSet<usize> = family.iter().flat_map(|&k| fam.omega[k].iter().copied()).collect();
    if !alpha.is_subset(&(w & &union)) {
        return Err(ProductError::Malformed("α must lie in ω ∩ ∪Ω′".into()));
    }
    if alpha == w {
        return Err(ProductError::Malformed("α must be a proper subset of ω".into()));
    }
    if !fam.intersection().is_subset(alpha) {
        return Err(ProductError::Malformed("α must contain ∩Ω".into()));
    }
    let mut check: Vec<usize> = family.clone();
    if !check.contains(&omega) {
        check.push(omega);
    }
    if check.len() > MAX_ENUMERATED_FAMILY {
        return Err(ProductError::Malformed("family too large to enumerate".into()));
    }
    for mask in 1u32..(1 << check.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..check.len()).filter(|b| mask & (1 << b) != 0).map(|b| check[b]).collect();
        if min_max(fam, &members).is_none() {
            let names: Vec<String> = members.iter().map(|&k| fam.set_name(k)).collect();
            return Err(ProductError::ConditionsFail(format!("no min/max for {{{}}}", names.join(", "))));
        }
    }
    let (case, tree, notes) = if family.contains(&omega) {
        let split = Split { fam, avoid: &BTreeSet::new(), protected: Some(omega) };
        (1, split.build(&family, &BTreeSet::new())?, Vec::new())
    } else {
        let tree = Split { fam, avoid: w, protected: None }.build(&family, &BTreeSet::new())?;
        let note =
            "case 2: indices of ω outside the remaining sets enter as free factors next to the base leaf".to_string();
        (2, tree, vec![note])
    };
    Ok(Lemma8Report { rendered: tree.render(fam), tree, case, notes })
}
