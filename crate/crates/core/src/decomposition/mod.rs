//! Splitting a generalised unimodular relator over a free `T` into the
//! semidirect product `T ⋉_{R=R̄} K`, with `K` a free iterated amalgamated
//! product of copies of the one-variable group `H̃₁`.

pub mod h1;
pub mod report;

#[cfg(test)]
mod tests;

use crate::analysis::{generalised_unimodular_free_t_named, GuRejection, GuWitness};
use crate::rewriting::{GroupDescriptor, Limits, RewriteEngine};
use crate::truth::Equality;
use crate::words::{Alphabet, FreeWord, Gen, RelativeWord, Syllable};
use serde::Serialize;
use thiserror::Error;

pub use h1::{action_apply, build_h1, iso_h1_to_hx, HSym, LWord, RelativeHPresentation};
pub use report::{assemble_report, DecompositionReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("relator rejected: {0}")]
    RejectedRelator(GuRejection),
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("coset of {0} cannot be located within limits")]
    UnknownCoset(String),
    #[error("membership of {0} in R undecided")]
    KernelMembershipUnknown(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub struct DecompositionContext {
    pub alphabet: Alphabet,
    /// The relator rotated to `g_1 t_1 ... g_q t_q`.
    pub word: RelativeWord,
    pub syllables: Vec<Syllable>,
    pub g: GroupDescriptor,
    pub witness: GuWitness,
    /// Rewriting for `T₁ = T/R`, possibly partial.
    pub t1: RewriteEngine,
    /// No coefficient letters at all.
    pub w_in_t: bool,
    pub limits: Limits,
}

impl DecompositionContext {
    pub fn variables(&self) -> &[String] {
        &self.alphabet.variables
    }

    pub fn rank(&self) -> usize {
        self.alphabet.variables.len()
    }

    pub fn q(&self) -> usize {
        self.syllables.len()
    }

    pub fn t(&self) -> &FreeWord {
        &self.witness.t
    }

    /// `t_i t_{i+1} ... t_q` for every `i`.
    pub fn suffixes(&self) -> Vec<FreeWord> {
        let mut out = vec![FreeWord::empty(); self.q()];
        let mut acc = FreeWord::empty();
        for i in (0..self.q()).rev() {
            acc = self.syllables[i].var.mul(&acc);
            out[i] = acc.clone();
        }
        out
    }

    pub fn show_t(&self, w: &FreeWord) -> String {
        w.display(&self.alphabet.variables).to_string()
    }

    pub fn show_g(&self, w: &FreeWord) -> String {
        w.display(&self.alphabet.coefficients).to_string()
    }
}

/// Rotation beginning with a coefficient block and ending with a variable block.
fn syllable_rotation(w: &RelativeWord) -> RelativeWord {
    let l = w.letters();
    let n = l.len();
    (0..n).find(|&i| !l[i].is_var() && l[(i + n - 1) % n].is_var()).map_or_else(|| w.clone(), |i| w.rotate(i))
}

pub fn build_context(
    w: &RelativeWord,
    alphabet: &Alphabet,
    g: &GroupDescriptor,
    limits: &Limits,
) -> Result<DecompositionContext, DecompositionError> {
    if !w.is_cyclically_reduced() {
        return Err(DecompositionError::NotCyclicallyReduced);
    }
    if g.generators.len() != alphabet.coefficients.len() {
        return Err(DecompositionError::Malformed(format!(
            "G has {} generators but the alphabet names {} coefficients",
            g.generators.len(),
            alphabet.coefficients.len()
        )));
    }
    let word = syllable_rotation(w);
    let witness =
        generalised_unimodular_free_t_named(&word, &alphabet.variables).map_err(DecompositionError::RejectedRelator)?;
    let (syllables, tail) = word.syllables();
    debug_assert!(tail.is_empty());
    let t1 = RewriteEngine::complete(&witness.quotient, limits);
    Ok(DecompositionContext {
        alphabet: alphabet.clone(),
        w_in_t: !word.has_coefficients(),
        word,
        syllables,
        g: g.clone(),
        witness,
        t1,
        limits: *limits,
    })
}

/// A coset `yR` with its representative `c_y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coset {
    pub representative: FreeWord,
    /// Reduced form in `T₁`; canonical when the engine is complete.
    pub label: FreeWord,
    /// `c_y` is known to be the shortlex-least word of the coset.
    pub least: bool,
}

const REPRESENTATIVE_SEARCH: usize = 20_000;

fn search_representative(ctx: &DecompositionContext, w: &FreeWord) -> Coset {
    let label = ctx.t1.normal_form(w);
    if ctx.t1.is_complete() {
        return Coset { representative: label.clone(), label, least: true };
    }
    let gens = 2 * ctx.rank() as u32;
    let mut layer = vec![FreeWord::empty()];
    let mut seen = 0usize;
    let mut clean = true;
    for _ in 0..=label.len() {
        let mut next = Vec::new();
        for c in &layer {
            seen += 1;
            if seen > REPRESENTATIVE_SEARCH {
                return Coset { representative: label.clone(), label, least: false };
            }
            match ctx.t1.is_trivial(&c.inverse().mul(w)) {
                Equality::Equal => return Coset { representative: c.clone(), label, least: clean },
                Equality::Unknown => clean = false,
                Equality::Distinct => {}
            }
            for code in 0..gens {
                let g = Gen::from_code(code);
                if c.letters().last() != Some(&g.inv()) {
                    next.push(c.mul(&FreeWord::new([g])));
                }
            }
        }
        layer = next;
    }
    Coset { representative: label.clone(), label, least: false }
}

/// The finitely many cosets met so far, the identity coset first.
#[derive(Debug, Clone, Serialize)]
pub struct CosetWindow {
    pub cosets: Vec<Coset>,
    /// Some pair was undecided and treated as distinct.
    pub undecided: bool,
}

impl CosetWindow {
    pub fn new() -> Self {
        let one = Coset { representative: FreeWord::empty(), label: FreeWord::empty(), least: true };
        CosetWindow { cosets: vec![one], undecided: false }
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn rep(&self, i: usize) -> &FreeWord {
        &self.cosets[i].representative
    }

    /// Index of the coset of `w`, adding it if new. Undecided comparisons count as
    /// distinct and set the `undecided` flag.
    pub fn locate(&mut self, ctx: &DecompositionContext, w: &FreeWord) -> usize {
        for (i, c) in self.cosets.iter().enumerate() {
            match ctx.t1.is_trivial(&c.representative.inverse().mul(w)) {
                Equality::Equal => return i,
                Equality::Unknown => self.undecided = true,
                Equality::Distinct => {}
            }
        }
        self.cosets.push(search_representative(ctx, w));
        self.cosets.len() - 1
    }

    /// Like [`CosetWindow::locate`] but refuses to guess.
    pub fn locate_exact(&mut self, ctx: &DecompositionContext, w: &FreeWord) -> Result<usize, DecompositionError> {
        let before = self.undecided;
        self.undecided = false;
        let i = self.locate(ctx, w);
        let guessed = self.undecided;
        self.undecided |= before;
        if guessed {
            return Err(DecompositionError::UnknownCoset(ctx.show_t(w)));
        }
        Ok(i)
    }
}

impl Default for CosetWindow {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuffixCosets {
    pub suffixes: Vec<FreeWord>,
    /// Coset index of each suffix.
    pub labels: Vec<usize>,
    /// `X₁` as window indices, in order of first appearance.
    pub x1: Vec<usize>,
    pub p_min: usize,
    pub p_max: usize,
}

impl SuffixCosets {
    pub fn p_decided(&self) -> bool {
        self.p_min == self.p_max
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Suffix cosets `x_i = t_i ... t_q R`. Undecided equalities give `p_min < p_max`;
/// the window then follows the `p_max` reading.
pub fn suffix_cosets(ctx: &DecompositionContext, window: &mut CosetWindow) -> SuffixCosets {
    let suffixes = ctx.suffixes();
    let labels: Vec<usize> = suffixes.iter().map(|s| window.locate(ctx, s)).collect();
    let mut x1: Vec<usize> = Vec::new();
    for &l in &labels {
        if !x1.contains(&l) {
            x1.push(l);
        }
    }
    let mut parent: Vec<usize> = (0..x1.len()).collect();
    for a in 0..x1.len() {
        for b in a + 1..x1.len() {
            if !ctx.t1.equal(window.rep(x1[a]), window.rep(x1[b])).is_distinct() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let p_min = (0..x1.len()).filter(|&i| find(&mut parent, i) == i).count();
    SuffixCosets { suffixes, labels, p_max: x1.len(), x1, p_min }
}

/// `c_y` for each `y ∈ X₁`, in the order of `X₁`.
pub fn coset_representatives(window: &CosetWindow, cosets: &SuffixCosets) -> Vec<(usize, FreeWord)> {
    cosets.x1.iter().map(|&y| (y, window.rep(y).clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationEntry {
    pub g: FreeWord,
    pub coset: usize,
    pub c: FreeWord,
    /// `r_i = c_{x_i}^{-1} t_i ... t_q`, an element of `R`.
    pub r: FreeWord,
}

/// `t ∏ g_i^{c_{x_i} r_i} = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewrittenRelation {
    pub t: FreeWord,
    pub entries: Vec<RelationEntry>,
}

impl RewrittenRelation {
    pub fn reassemble(&self) -> RelativeWord {
        let mut out = RelativeWord::from_var(&self.t);
        for e in &self.entries {
            let u = RelativeWord::from_var(&e.c.mul(&e.r));
            out = out.mul(&u.inverse()).mul(&RelativeWord::from_coef(&e.g)).mul(&u);
        }
        out
    }
}

pub fn rewrite_relation(
    ctx: &DecompositionContext,
    window: &CosetWindow,
    cosets: &SuffixCosets,
) -> Result<RewrittenRelation, DecompositionError> {
    let mut entries = Vec::new();
    for (i, s) in cosets.suffixes.iter().enumerate() {
        let y = cosets.labels[i];
        let c = window.rep(y).clone();
        let r = c.inverse().mul(s);
        if !ctx.t1.is_trivial(&r).is_equal() {
            return Err(DecompositionError::KernelMembershipUnknown(ctx.show_t(&r)));
        }
        entries.push(RelationEntry { g: ctx.syllables[i].coef.clone(), coset: y, c, r });
    }
    let rel = RewrittenRelation { t: ctx.t().clone(), entries };
    if rel.reassemble() != ctx.word {
        return Err(DecompositionError::Malformed("rewritten relation does not reassemble to the relator".into()));
    }
    Ok(rel)
}

/// The relator as a letter sequence, for display.
pub fn show_relative(ctx: &DecompositionContext, w: &RelativeWord) -> String {
    w.display(&ctx.alphabet).to_string()
}
