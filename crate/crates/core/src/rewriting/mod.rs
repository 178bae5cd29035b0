//! Three-valued word problem for finitely presented groups: shortlex
//! Knuth–Bendix completion with limits and an abelianization fallback.

pub mod free_product;
pub mod lattice;
pub mod subgroup;
pub mod text;

use crate::truth::Equality;
use crate::words::{FreeWord, Gen};
use lattice::{smith, Matrix, Smith};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassHint {
    Free,
    Cyclic,
    FgAbelian,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("class hint {hint:?} contradicted: {reason}")]
    InconsistentClassHint { hint: ClassHint, reason: String },
    #[error("relator refers to generator {0} outside the presentation")]
    UndeclaredGenerator(u32),
}

/// A finitely presented group with an optional structure class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
    pub class_hint: ClassHint,
    pub torsion_free: bool,
}

impl GroupDescriptor {
    pub fn new(generators: &[&str], relators: Vec<FreeWord>, class_hint: ClassHint, torsion_free: bool) -> Self {
        GroupDescriptor {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relators,
            class_hint,
            torsion_free,
        }
    }

    pub fn free(generators: &[&str]) -> Self {
        GroupDescriptor::new(generators, Vec::new(), ClassHint::Free, true)
    }

    pub fn free_of_rank(rank: usize, prefix: &str) -> Self {
        let names: Vec<String> = (1..=rank).map(|i| format!("{prefix}{i}")).collect();
        GroupDescriptor { generators: names, relators: Vec::new(), class_hint: ClassHint::Free, torsion_free: true }
    }

    /// `Z^n` on the given generators.
    pub fn free_abelian(generators: &[&str]) -> Self {
        let n = generators.len() as u32;
        let mut relators = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                relators.push(commutator(i, j));
            }
        }
        let hint = if n <= 1 { ClassHint::Cyclic } else { ClassHint::FgAbelian };
        GroupDescriptor::new(generators, relators, hint, true)
    }

    pub fn free_abelian_of_rank(rank: usize, prefix: &str) -> Self {
        let names: Vec<String> = (1..=rank).map(|i| format!("{prefix}{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        GroupDescriptor::free_abelian(&refs)
    }

    /// Infinite cyclic group.
    pub fn cyclic(generator: &str) -> Self {
        GroupDescriptor::new(&[generator], Vec::new(), ClassHint::Cyclic, true)
    }

    pub fn finite_cyclic(generator: &str, order: i64) -> Self {
        GroupDescriptor::new(&[generator], vec![FreeWord::from_powers(&[(0, order)])], ClassHint::Cyclic, order == 1)
    }

    /// `S_3 = <s, r | s^2, r^3, s r s r>`.
    pub fn symmetric3(s: &str, r: &str) -> Self {
        GroupDescriptor::new(
            &[s, r],
            vec![
                FreeWord::from_powers(&[(0, 2)]),
                FreeWord::from_powers(&[(1, 3)]),
                FreeWord::from_powers(&[(0, 1), (1, 1), (0, 1), (1, 1)]),
            ],
            ClassHint::Generic,
            false,
        )
    }

    pub fn trivial() -> Self {
        GroupDescriptor::new(&[], Vec::new(), ClassHint::Cyclic, true)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Checks relators against the alphabet and the class hint at bounded depth.
    /// Returns notes on checks that could not be completed.
    pub fn validate(&self, limits: &Limits) -> Result<Vec<String>, RewriteError> {
        let n = self.rank() as u32;
        for r in &self.relators {
            if let Some(i) = r.max_index() {
                if i >= n {
                    return Err(RewriteError::UndeclaredGenerator(i));
                }
            }
        }
        let mut notes = Vec::new();
        let fail = |reason: String| Err(RewriteError::InconsistentClassHint { hint: self.class_hint, reason });
        match self.class_hint {
            ClassHint::Generic => {}
            ClassHint::Free => {
                if self.relators.iter().any(|r| !r.is_empty()) {
                    // a free presentation may still carry redundant relators; only flag it
                    notes.push("FREE hint with nonempty relators is not verified".into());
                }
            }
            ClassHint::FgAbelian | ClassHint::Cyclic => {
                let engine = RewriteEngine::complete(self, limits);
                for i in 0..n {
                    for j in i + 1..n {
                        match engine.is_trivial(&commutator(i, j)) {
                            Equality::Equal => {}
                            Equality::Distinct => return fail(format!("generators {i} and {j} do not commute")),
                            Equality::Unknown => notes.push(format!("commutator of generators {i} and {j} undecided")),
                        }
                    }
                }
                if self.class_hint == ClassHint::Cyclic {
                    let ab = abelianization(self);
                    if ab.torsion.len() + ab.free_rank > 1 {
                        return fail("abelianization is not cyclic".into());
                    }
                }
            }
        }
        Ok(notes)
    }
}

pub fn commutator(i: u32, j: u32) -> FreeWord {
    FreeWord::new([Gen::pos(i), Gen::pos(j), Gen::new(i, true), Gen::new(j, true)])
}

/// Smith normal form of the relator exponent matrix.
#[derive(Debug, Clone)]
pub struct AbelianizedLattice {
    pub generators: usize,
    pub matrix: Matrix,
    pub smith: Option<Smith>,
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

impl AbelianizedLattice {
    pub fn image(&self, w: &FreeWord) -> Vec<BigInt> {
        (0..self.generators as u32).map(|i| BigInt::from(w.exponent_sum(i))).collect()
    }

    /// Whether the word dies in the abelianization.
    pub fn is_trivial(&self, w: &FreeWord) -> bool {
        let e = self.image(w);
        let Some(s) = &self.smith else {
            return e.iter().all(Zero::is_zero);
        };
        let f = lattice::vec_mul(&e, &s.v, self.generators);
        f.iter().enumerate().all(|(i, fi)| match s.diagonal.get(i) {
            Some(d) => fi.is_multiple_of(d),
            None => fi.is_zero(),
        })
    }
}

pub fn abelianization(desc: &GroupDescriptor) -> AbelianizedLattice {
    let n = desc.rank();
    let rows: Vec<Vec<BigInt>> =
        desc.relators.iter().map(|r| (0..n as u32).map(|i| BigInt::from(r.exponent_sum(i))).collect()).collect();
    if rows.is_empty() || n == 0 {
        return AbelianizedLattice { generators: n, matrix: rows, smith: None, free_rank: n, torsion: Vec::new() };
    }
    let s = smith(&rows, n);
    let free_rank = n - s.rank();
    let torsion = s.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
    AbelianizedLattice { generators: n, matrix: rows, smith: Some(s), free_rank, torsion }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_rules: usize,
    pub max_length: usize,
    pub max_steps: u64,
    pub time_budget: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_rules: 5000, max_length: 256, max_steps: 1_000_000, time_budget: None }
    }
}

impl Limits {
    pub fn small() -> Self {
        Limits { max_rules: 400, max_length: 40, max_steps: 100_000, time_budget: Some(Duration::from_secs(2)) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Complete,
    Partial,
}

type Code = u32;

fn shortlex(a: &[Code], b: &[Code]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn codes(w: &FreeWord) -> Vec<Code> {
    w.letters().iter().map(|g| g.code()).collect()
}

fn invert(w: &[Code]) -> Vec<Code> {
    w.iter().rev().map(|c| c ^ 1).collect()
}

/// A shortlex rewriting system for a presented group.
#[derive(Debug, Clone)]
pub struct RewriteEngine {
    generators: usize,
    rules: Vec<(Vec<Code>, Vec<Code>)>,
    index: HashMap<Vec<Code>, usize>,
    max_lhs: usize,
    status: Status,
    abelian: AbelianizedLattice,
}

struct Completion<'a> {
    engine: RewriteEngine,
    alive: Vec<bool>,
    limits: &'a Limits,
    steps: u64,
    started: Instant,
    overflow: bool,
}

impl RewriteEngine {
    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn abelianization(&self) -> &AbelianizedLattice {
        &self.abelian
    }

    /// Rules as raw letter sequences (left sides are not freely reduced words).
    pub fn rules(&self) -> impl Iterator<Item = (Vec<Gen>, Vec<Gen>)> + '_ {
        let conv = |w: &[Code]| w.iter().map(|&c| Gen::from_code(c)).collect::<Vec<_>>();
        self.rules.iter().map(move |(l, r)| (conv(l), conv(r)))
    }

    pub fn complete(desc: &GroupDescriptor, limits: &Limits) -> RewriteEngine {
        let engine = RewriteEngine {
            generators: desc.rank(),
            rules: Vec::new(),
            index: HashMap::new(),
            max_lhs: 0,
            status: Status::Partial,
            abelian: abelianization(desc),
        };
        let mut c =
            Completion { engine, alive: Vec::new(), limits, steps: 0, started: Instant::now(), overflow: false };
        let mut pending: BinaryHeap<Reverse<(usize, Vec<Code>, Vec<Code>)>> = BinaryHeap::new();
        for g in 0..2 * desc.rank() as Code {
            c.add_rule(vec![g, g ^ 1], Vec::new());
        }
        for r in &desc.relators {
            let (_, core) = r.cyclic_split();
            let w = codes(&core);
            for rot in 0..w.len() {
                let mut rw = w[rot..].to_vec();
                rw.extend_from_slice(&w[..rot]);
                for word in [rw.clone(), invert(&rw)] {
                    let split = (word.len() + 2) / 2;
                    let lhs = word[..split].to_vec();
                    let rhs = invert(&word[split..]);
                    pending.push(Reverse((lhs.len() + rhs.len(), lhs, rhs)));
                }
            }
        }
        let complete = c.run(&mut pending);
        let mut engine = c.finish();
        engine.status = if complete { Status::Complete } else { Status::Partial };
        engine
    }

    /// Shortlex-reduced form under the current rules.
    pub fn reduce_codes(&self, word: &[Code]) -> Vec<Code> {
        let mut steps = 0u64;
        reduce_with(&self.index, &self.rules, self.max_lhs, word, &mut steps, None).0
    }

    pub fn normal_form(&self, w: &FreeWord) -> FreeWord {
        FreeWord::new(self.reduce_codes(&codes(w)).into_iter().map(Gen::from_code))
    }

    pub fn equal(&self, u: &FreeWord, v: &FreeWord) -> Equality {
        let d = u.mul(&v.inverse());
        self.is_trivial(&d)
    }

    pub fn is_trivial(&self, w: &FreeWord) -> Equality {
        if w.is_empty() || self.reduce_codes(&codes(w)).is_empty() {
            return Equality::Equal;
        }
        if self.is_complete() || !self.abelian.is_trivial(w) {
            return Equality::Distinct;
        }
        Equality::Unknown
    }
}

/// Stack-based rewriting: scan left to right, test suffixes against rule heads.
/// Returns the reduced word and whether the step cap was hit.
fn reduce_with(
    index: &HashMap<Vec<Code>, usize>,
    rules: &[(Vec<Code>, Vec<Code>)],
    max_lhs: usize,
    word: &[Code],
    steps: &mut u64,
    cap: Option<u64>,
) -> (Vec<Code>, bool) {
    let mut input: Vec<Code> = word.iter().rev().copied().collect();
    let mut out: Vec<Code> = Vec::with_capacity(word.len());
    while let Some(c) = input.pop() {
        out.push(c);
        let n = out.len();
        for len in 1..=max_lhs.min(n) {
            if let Some(&r) = index.get(&out[n - len..]) {
                out.truncate(n - len);
                input.extend(rules[r].1.iter().rev());
                *steps += 1;
                if cap.is_some_and(|c| *steps > c) {
                    out.extend(input.iter().rev());
                    return (out, true);
                }
                break;
            }
        }
    }
    (out, false)
}

impl Completion<'_> {
    fn reduce(&mut self, w: &[Code]) -> Vec<Code> {
        let e = &self.engine;
        let (out, capped) = reduce_with(&e.index, &e.rules, e.max_lhs, w, &mut self.steps, Some(self.limits.max_steps));
        if capped {
            self.overflow = true;
        }
        out
    }

    fn out_of_budget(&self) -> bool {
        self.steps > self.limits.max_steps || self.limits.time_budget.is_some_and(|b| self.started.elapsed() > b)
    }

    fn add_rule(&mut self, lhs: Vec<Code>, rhs: Vec<Code>) -> usize {
        let id = self.engine.rules.len();
        self.engine.max_lhs = self.engine.max_lhs.max(lhs.len());
        self.engine.index.insert(lhs.clone(), id);
        self.engine.rules.push((lhs, rhs));
        self.alive.push(true);
        id
    }

    fn kill(&mut self, id: usize) {
        self.alive[id] = false;
        let lhs = &self.engine.rules[id].0;
        if self.engine.index.get(lhs) == Some(&id) {
            self.engine.index.remove(lhs);
        }
    }

    fn live_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Critical pairs between rules `a` and `b` (suffix of lhs(a) = prefix of lhs(b)).
    fn overlaps(&self, a: usize, b: usize, out: &mut Vec<(Vec<Code>, Vec<Code>)>) {
        let (la, ra) = &self.engine.rules[a];
        let (lb, rb) = &self.engine.rules[b];
        for k in 1..la.len().min(lb.len()) {
            if la[la.len() - k..] == lb[..k] {
                // la = x·o, lb = o·y; x·o·y rewrites to ra·y and x·rb
                let mut left = ra.clone();
                left.extend_from_slice(&lb[k..]);
                let mut right = la[..la.len() - k].to_vec();
                right.extend_from_slice(rb);
                out.push((left, right));
            }
        }
    }

    fn run(&mut self, pending: &mut BinaryHeap<Reverse<(usize, Vec<Code>, Vec<Code>)>>) -> bool {
        let mut dropped = false;
        // the initial free-reduction rules overlap only trivially (a a^-1 a)
        while let Some(Reverse((_, u, v))) = pending.pop() {
            if self.out_of_budget() || self.overflow {
                return false;
            }
            let u = self.reduce(&u);
            let v = self.reduce(&v);
            if u == v {
                continue;
            }
            let (lhs, rhs) = if shortlex(&u, &v) == Ordering::Greater { (u, v) } else { (v, u) };
            if lhs.len() > self.limits.max_length {
                dropped = true;
                continue;
            }
            if self.live_count() >= self.limits.max_rules {
                return false;
            }
            let id = self.add_rule(lhs.clone(), rhs);
            // interreduce: rules whose lhs contains the new lhs become equations again
            for j in 0..id {
                if !self.alive[j] {
                    continue;
                }
                if contains(&self.engine.rules[j].0, &lhs) {
                    self.kill(j);
                    let (lj, rj) = self.engine.rules[j].clone();
                    pending.push(Reverse((lj.len() + rj.len(), lj, rj)));
                } else if contains(&self.engine.rules[j].1, &lhs) {
                    let rj = self.engine.rules[j].1.clone();
                    self.engine.rules[j].1 = self.reduce(&rj);
                }
            }
            let mut cps = Vec::new();
            for j in 0..=id {
                if !self.alive[j] {
                    continue;
                }
                self.overlaps(id, j, &mut cps);
                if j != id {
                    self.overlaps(j, id, &mut cps);
                }
            }
            for (a, b) in cps {
                pending.push(Reverse((a.len() + b.len(), a, b)));
            }
        }
        !dropped && !self.overflow
    }

    fn finish(self) -> RewriteEngine {
        let mut e = self.engine;
        let rules: Vec<_> = e.rules.into_iter().zip(self.alive).filter_map(|(r, a)| a.then_some(r)).collect();
        e.index = rules.iter().enumerate().map(|(i, (l, _))| (l.clone(), i)).collect();
        e.max_lhs = rules.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        e.rules = rules;
        e
    }
}

fn contains(hay: &[Code], needle: &[Code]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// `equal` against the empty word in the group of `desc`, with default limits.
pub fn is_trivial_in(desc: &GroupDescriptor, u: &FreeWord) -> Equality {
    RewriteEngine::complete(desc, &Limits::default()).is_trivial(u)
}

#[cfg(test)]
mod tests;
