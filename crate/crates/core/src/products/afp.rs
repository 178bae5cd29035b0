//! `A *_H B` with coset-representative oracles, normal forms and the centre
//! as the intersection of the factor centres.

use super::ProductError;
use crate::rewriting::lattice::{self, hnf, reduce_mod, smith, Lattice, Matrix, Smith};
use crate::rewriting::{ClassHint, GroupDescriptor, Limits, RewriteEngine};
use crate::truth::{Decision, Equality};
use crate::words::{FreeWord, Gen};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Right cosets `H w` of the amalgamated subgroup inside one factor.
pub trait CosetOracle: Send + Sync {
    /// `w = h · r` with `h` a word in the generators of `H` and `r` the canonical
    /// representative of `H w` (empty exactly when `w ∈ H`). `None` if undecided.
    fn split(&self, w: &FreeWord) -> Option<(FreeWord, FreeWord)>;

    fn contains(&self, w: &FreeWord) -> Decision {
        match self.split(w) {
            Some((_, r)) => Decision::from_bool(r.is_empty()),
            None => Decision::Unknown,
        }
    }
}

fn exponent_vector(w: &FreeWord, n: usize) -> Vec<BigInt> {
    (0..n as u32).map(|i| BigInt::from(w.exponent_sum(i))).collect()
}

fn word_from_vector(v: &[BigInt]) -> FreeWord {
    let powers: Vec<(u32, i64)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i as u32, x.to_i64().expect("exponent fits in i64")))
        .collect();
    FreeWord::from_powers(&powers)
}

/// Exact oracle for an abelian factor `Z^m / L` and `H` spanned by exponent vectors.
pub struct AbelianOracle {
    dim: usize,
    h_count: usize,
    stacked: Smith,
    hermite: Matrix,
}

impl AbelianOracle {
    pub fn new(factor: &GroupDescriptor, h_images: &[FreeWord]) -> Self {
        let dim = factor.rank();
        let mut rows: Matrix = h_images.iter().map(|w| exponent_vector(w, dim)).collect();
        rows.extend(factor.relators.iter().map(|r| exponent_vector(r, dim)));
        if rows.is_empty() {
            rows.push(vec![BigInt::zero(); dim]);
        }
        AbelianOracle { dim, h_count: h_images.len(), stacked: smith(&rows, dim), hermite: hnf(&rows, dim) }
    }
}

impl CosetOracle for AbelianOracle {
    fn split(&self, w: &FreeWord) -> Option<(FreeWord, FreeWord)> {
        let e = exponent_vector(w, self.dim);
        let rep = reduce_mod(&self.hermite, &e);
        let diff: Vec<BigInt> = e.iter().zip(rep.iter()).map(|(a, b)| a - b).collect();
        let x = lattice::solve(&self.stacked, &diff)?;
        Some((word_from_vector(&x[..self.h_count]), word_from_vector(&rep)))
    }
}

/// Exact oracle for a free factor and a cyclic (or trivial) `H = <u>`:
/// the representative is the shortlex-least element of `H w`.
pub struct FreeCyclicOracle {
    u: Option<FreeWord>,
}

impl FreeCyclicOracle {
    pub fn new(h_images: &[FreeWord]) -> Option<Self> {
        match h_images.len() {
            0 => Some(FreeCyclicOracle { u: None }),
            1 => Some(FreeCyclicOracle { u: (!h_images[0].is_empty()).then(|| h_images[0].clone()) }),
            _ => None,
        }
    }
}

impl CosetOracle for FreeCyclicOracle {
    fn split(&self, w: &FreeWord) -> Option<(FreeWord, FreeWord)> {
        let Some(u) = &self.u else {
            return Some((FreeWord::empty(), w.clone()));
        };
        let bound = 2 * w.len() as i64 + 2;
        let mut best: Option<(i64, FreeWord)> = None;
        for j in -bound..=bound {
            let cand = u.pow(j).mul(w);
            if best.as_ref().is_none_or(|(_, b)| cand.shortlex_cmp(b).is_lt()) {
                best = Some((j, cand));
            }
        }
        let (j, rep) = best.expect("nonempty range");
        Some((FreeWord::from_powers(&[(0, -j)]), rep))
    }
}

/// Membership-only oracle for a generic factor: bounded search over `H`-words
/// for `Yes`, abelianization for `No`.
pub struct BoundedOracle {
    engine: RewriteEngine,
    h_images: Vec<FreeWord>,
    depth: usize,
    abelian_h: Lattice,
    dim: usize,
}

impl BoundedOracle {
    pub fn new(factor: &GroupDescriptor, h_images: &[FreeWord], depth: usize, limits: &Limits) -> Self {
        let dim = factor.rank();
        let mut rows: Matrix = h_images.iter().map(|w| exponent_vector(w, dim)).collect();
        rows.extend(factor.relators.iter().map(|r| exponent_vector(r, dim)));
        BoundedOracle {
            engine: RewriteEngine::complete(factor, limits),
            h_images: h_images.to_vec(),
            depth,
            abelian_h: Lattice::new(dim, rows),
            dim,
        }
    }
}

impl CosetOracle for BoundedOracle {
    fn split(&self, w: &FreeWord) -> Option<(FreeWord, FreeWord)> {
        if self.engine.is_trivial(w) == Equality::Equal {
            return Some((FreeWord::empty(), FreeWord::empty()));
        }
        let k = self.h_images.len() as u32;
        for hw in enumerate_words(k, self.depth) {
            let img = hw.substitute(&self.h_images);
            if self.engine.equal(&img, w) == Equality::Equal {
                return Some((hw, FreeWord::empty()));
            }
        }
        None
    }

    fn contains(&self, w: &FreeWord) -> Decision {
        if !self.abelian_h.contains(&exponent_vector(w, self.dim)) {
            return Decision::No;
        }
        match self.split(w) {
            Some(_) => Decision::Yes,
            None => Decision::Unknown,
        }
    }
}

/// All freely reduced words of length `<= depth` over `k` generators, shortlex order.
pub fn enumerate_words(k: u32, depth: usize) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::empty()];
    let mut layer = vec![FreeWord::empty()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for code in 0..2 * k {
                let g = Gen::from_code(code);
                if w.letters().last() == Some(&g.inv()) {
                    continue;
                }
                let mut letters = w.letters().to_vec();
                letters.push(g);
                next.push(FreeWord::new(letters));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Centre of a factor as seen from the amalgamated subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FactorCentre {
    /// The factor is abelian.
    Whole,
    Trivial,
    /// `Z(X) ∩ H` given by exponent vectors over the generators of `H`.
    InH(Vec<Vec<i64>>),
}

/// `A *_{H} B` where `H` has generators with images `h_in_a`, `h_in_b`.
#[derive(Clone)]
pub struct AmalgamatedProduct {
    pub a: GroupDescriptor,
    pub b: GroupDescriptor,
    pub h_in_a: Vec<FreeWord>,
    pub h_in_b: Vec<FreeWord>,
    pub oracle_a: Option<Arc<dyn CosetOracle>>,
    pub oracle_b: Option<Arc<dyn CosetOracle>>,
    pub centre_a: Option<FactorCentre>,
    pub centre_b: Option<FactorCentre>,
    pub engine_a: Arc<RewriteEngine>,
    pub engine_b: Arc<RewriteEngine>,
}

pub(crate) fn default_oracle(x: &GroupDescriptor, h: &[FreeWord], limits: &Limits) -> Arc<dyn CosetOracle> {
    match x.class_hint {
        ClassHint::Cyclic | ClassHint::FgAbelian => Arc::new(AbelianOracle::new(x, h)),
        ClassHint::Free if x.relators.is_empty() => match FreeCyclicOracle::new(h) {
            Some(o) => Arc::new(o),
            None => Arc::new(BoundedOracle::new(x, h, 6, limits)),
        },
        _ => Arc::new(BoundedOracle::new(x, h, 6, limits)),
    }
}

pub(crate) fn default_centre(x: &GroupDescriptor) -> Option<FactorCentre> {
    match x.class_hint {
        ClassHint::Cyclic | ClassHint::FgAbelian => Some(FactorCentre::Whole),
        ClassHint::Free if x.relators.is_empty() => {
            Some(if x.rank() >= 2 { FactorCentre::Trivial } else { FactorCentre::Whole })
        }
        _ => None,
    }
}

impl AmalgamatedProduct {
    pub fn new(
        a: GroupDescriptor,
        b: GroupDescriptor,
        h_in_a: Vec<FreeWord>,
        h_in_b: Vec<FreeWord>,
    ) -> Result<Self, ProductError> {
        Self::with_limits(a, b, h_in_a, h_in_b, &Limits::default())
    }

    pub fn with_limits(
        a: GroupDescriptor,
        b: GroupDescriptor,
        h_in_a: Vec<FreeWord>,
        h_in_b: Vec<FreeWord>,
        limits: &Limits,
    ) -> Result<Self, ProductError> {
        if h_in_a.len() != h_in_b.len() {
            return Err(ProductError::Malformed("H has different numbers of images in A and B".into()));
        }
        let oracle_a = Some(default_oracle(&a, &h_in_a, limits));
        let oracle_b = Some(default_oracle(&b, &h_in_b, limits));
        Ok(AmalgamatedProduct {
            centre_a: default_centre(&a),
            centre_b: default_centre(&b),
            engine_a: Arc::new(RewriteEngine::complete(&a, limits)),
            engine_b: Arc::new(RewriteEngine::complete(&b, limits)),
            a,
            b,
            h_in_a,
            h_in_b,
            oracle_a,
            oracle_b,
        })
    }

    pub fn h_rank(&self) -> usize {
        self.h_in_a.len()
    }

    fn oracle(&self, s: Side) -> Option<&Arc<dyn CosetOracle>> {
        match s {
            Side::A => self.oracle_a.as_ref(),
            Side::B => self.oracle_b.as_ref(),
        }
    }

    pub fn engine(&self, s: Side) -> &RewriteEngine {
        match s {
            Side::A => &self.engine_a,
            Side::B => &self.engine_b,
        }
    }

    pub fn factor(&self, s: Side) -> &GroupDescriptor {
        match s {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    /// Image of an `H`-word in the given factor.
    pub fn h_image(&self, s: Side, h: &FreeWord) -> FreeWord {
        match s {
            Side::A => h.substitute(&self.h_in_a),
            Side::B => h.substitute(&self.h_in_b),
        }
    }

    /// Presentation of the amalgam: generators of `A` then of `B`.
    pub fn presentation(&self) -> GroupDescriptor {
        let na = self.a.rank() as u32;
        let shift: Vec<u32> = (0..self.b.rank() as u32).map(|i| i + na).collect();
        let mut generators = self.a.generators.clone();
        for g in &self.b.generators {
            let mut name = g.clone();
            while generators.contains(&name) {
                name.push('\'');
            }
            generators.push(name);
        }
        let mut relators = self.a.relators.clone();
        relators.extend(self.b.relators.iter().map(|r| r.relabel(&shift)));
        for (ha, hb) in self.h_in_a.iter().zip(&self.h_in_b) {
            relators.push(ha.mul(&hb.relabel(&shift).inverse()));
        }
        GroupDescriptor {
            generators,
            relators,
            class_hint: ClassHint::Generic,
            torsion_free: self.a.torsion_free && self.b.torsion_free,
        }
    }

    /// Word in the amalgam presentation for a factor element.
    pub fn embed(&self, s: Side, w: &FreeWord) -> FreeWord {
        match s {
            Side::A => w.clone(),
            Side::B => {
                let na = self.a.rank() as u32;
                let shift: Vec<u32> = (0..self.b.rank() as u32).map(|i| i + na).collect();
                w.relabel(&shift)
            }
        }
    }
}

/// `h · r_1 ⋯ r_k` with alternating nontrivial coset representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AfpNormalForm {
    /// Word in the generators of `H`.
    pub h: FreeWord,
    pub reps: Vec<(Side, FreeWord)>,
}

impl AfpNormalForm {
    pub fn to_word(&self, ap: &AmalgamatedProduct) -> FreeWord {
        let mut w = ap.h_image(Side::A, &self.h);
        for (s, r) in &self.reps {
            w = w.mul(&ap.embed(*s, r));
        }
        w
    }

    /// Equality of normal forms: same representatives and equal `H`-parts.
    pub fn equal(&self, other: &AfpNormalForm, ap: &AmalgamatedProduct) -> Equality {
        if self.reps != other.reps {
            return Equality::Distinct;
        }
        ap.engine_a.equal(&ap.h_image(Side::A, &self.h), &ap.h_image(Side::A, &other.h))
    }
}

/// Normal form of a product of factor elements, built right to left.
pub fn afp_normal_form(ap: &AmalgamatedProduct, word: &[(Side, FreeWord)]) -> Result<AfpNormalForm, ProductError> {
    let mut carry = FreeWord::empty();
    let mut stack: Vec<(Side, FreeWord)> = Vec::new();
    for (side, x) in word.iter().rev() {
        let mut y = x.mul(&ap.h_image(*side, &carry));
        if let Some((s, _)) = stack.last() {
            if s == side {
                let (_, r) = stack.pop().unwrap();
                y = y.mul(&r);
            }
        }
        let oracle = ap.oracle(*side).ok_or(ProductError::OracleUnknown)?;
        let (h, r) = oracle.split(&y).ok_or(ProductError::OracleUnknown)?;
        carry = h;
        if !r.is_empty() {
            stack.push((*side, r));
        }
    }
    stack.reverse();
    Ok(AfpNormalForm { h: carry, reps: stack })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentreDescription {
    pub trivial: bool,
    /// Generators as words in the generators of `H`.
    pub generators_h: Vec<FreeWord>,
    pub generators_in_a: Vec<FreeWord>,
    pub generators_in_b: Vec<FreeWord>,
    /// Elements of `A ∖ H` and `B ∖ H` showing properness.
    pub witness_a: FreeWord,
    pub witness_b: FreeWord,
}

fn properness_witness(ap: &AmalgamatedProduct, s: Side) -> Result<FreeWord, ProductError> {
    let name = match s {
        Side::A => "A",
        Side::B => "B",
    };
    let oracle = ap.oracle(s).ok_or(ProductError::OracleUnknown)?;
    let mut undecided = false;
    for i in 0..ap.factor(s).rank() as u32 {
        let g = FreeWord::gen(i);
        match oracle.contains(&g) {
            Decision::No => return Ok(g),
            Decision::Unknown => undecided = true,
            Decision::Yes => {}
        }
    }
    if undecided {
        Err(ProductError::OracleUnknown)
    } else {
        Err(ProductError::SubgroupNotProper(name.into()))
    }
}

fn centre_lattice(c: &FactorCentre, k: usize) -> Lattice {
    match c {
        FactorCentre::Whole => {
            Lattice::from_i64(k, &(0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect::<Vec<_>>())
        }
        FactorCentre::Trivial => Lattice::new(k, Vec::new()),
        FactorCentre::InH(v) => Lattice::from_i64(k, v),
    }
}

/// Centre of `A *_H B` when `H` is proper in both factors: `Z(A) ∩ Z(B)`.
pub fn afp_centre(ap: &AmalgamatedProduct) -> Result<CentreDescription, ProductError> {
    let witness_a = properness_witness(ap, Side::A)?;
    let witness_b = properness_witness(ap, Side::B)?;
    let ca = ap.centre_a.as_ref().ok_or(ProductError::OracleUnknown)?;
    let cb = ap.centre_b.as_ref().ok_or(ProductError::OracleUnknown)?;
    let k = ap.h_rank();
    let meet = centre_lattice(ca, k).intersect(&centre_lattice(cb, k));
    let mut generators_h = Vec::new();
    for row in meet.gens_i64().ok_or(ProductError::OracleUnknown)? {
        let powers: Vec<(u32, i64)> =
            row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, x)).collect();
        let h = FreeWord::from_powers(&powers);
        if ap.engine_a.is_trivial(&ap.h_image(Side::A, &h)) != Equality::Equal {
            generators_h.push(h);
        }
    }
    let generators_in_a = generators_h.iter().map(|h| ap.engine_a.normal_form(&ap.h_image(Side::A, h))).collect();
    let generators_in_b = generators_h.iter().map(|h| ap.engine_b.normal_form(&ap.h_image(Side::B, h))).collect();
    Ok(CentreDescription {
        trivial: generators_h.is_empty(),
        generators_h,
        generators_in_a,
        generators_in_b,
        witness_a,
        witness_b,
    })
}

#[cfg(test)]
mod tests;
