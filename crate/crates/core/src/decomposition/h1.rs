//! The one-variable group `H̃₁` over `H₁ = S̄ * ★_{y∈X₁} G^{(c_y)}` and the action of `T`.

use super::{CosetWindow, DecompositionContext, DecompositionError, RewrittenRelation, SuffixCosets};
use crate::words::{FreeWord, Gen};
use serde::Serialize;
use std::fmt::Write;

/// A letter of `L = R̄ * ★_y G^{(c_y)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum HSym {
    /// `r̄` for `r ∈ R`, written as a word in `T`.
    R(FreeWord),
    /// `g^{(c_y)}` for a generator letter `g` and a window coset `y`.
    G { coset: usize, g: Gen },
}

/// A reduced word of `L`: no two adjacent `R̄` letters, no cancelling pair of copy letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct LWord(Vec<HSym>);

impl LWord {
    pub fn new(syms: impl IntoIterator<Item = HSym>) -> Self {
        let mut out: Vec<HSym> = Vec::new();
        for s in syms {
            match s {
                HSym::R(w) => {
                    let merged = match out.last() {
                        Some(HSym::R(u)) => {
                            let m = u.mul(&w);
                            out.pop();
                            m
                        }
                        _ => w,
                    };
                    if !merged.is_empty() {
                        out.push(HSym::R(merged));
                    }
                }
                HSym::G { coset, g } => {
                    if out.last() == Some(&HSym::G { coset, g: g.inv() }) {
                        out.pop();
                    } else {
                        out.push(HSym::G { coset, g });
                    }
                }
            }
        }
        LWord(out)
    }

    pub fn r(w: &FreeWord) -> Self {
        LWord::new([HSym::R(w.clone())])
    }

    pub fn copy(coset: usize, g: &FreeWord) -> Self {
        LWord::new(g.letters().iter().map(|&g| HSym::G { coset, g }))
    }

    pub fn syms(&self) -> &[HSym] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &LWord) -> LWord {
        LWord::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn inverse(&self) -> LWord {
        LWord::new(self.0.iter().rev().map(|s| match s {
            HSym::R(w) => HSym::R(w.inverse()),
            HSym::G { coset, g } => HSym::G { coset: *coset, g: g.inv() },
        }))
    }

    /// `u^{-1} self u`.
    pub fn conjugate_by(&self, u: &LWord) -> LWord {
        u.inverse().mul(self).mul(u)
    }

    /// Image under the retraction `L → R̄` killing every copy of `G`.
    pub fn r_part(&self) -> FreeWord {
        let mut acc = FreeWord::empty();
        for s in &self.0 {
            if let HSym::R(w) = s {
                acc = acc.mul(w);
            }
        }
        acc
    }

    pub fn cosets(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().filter_map(|s| match s {
            HSym::G { coset, .. } => Some(*coset),
            HSym::R(_) => None,
        })
    }

    pub fn show(&self, ctx: &DecompositionContext, window: &CosetWindow) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            if !out.is_empty() {
                out.push(' ');
            }
            match &self.0[i] {
                HSym::R(w) => {
                    let _ = write!(out, "bar({})", ctx.show_t(w));
                    i += 1;
                }
                HSym::G { coset, .. } => {
                    let mut letters = Vec::new();
                    while let Some(HSym::G { coset: c, g }) = self.0.get(i) {
                        if c != coset {
                            break;
                        }
                        letters.push(*g);
                        i += 1;
                    }
                    let g = ctx.show_g(&FreeWord::new(letters));
                    let _ = write!(out, "[{g}]^({})", ctx.show_t(window.rep(*coset)));
                }
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelativeHPresentation {
    pub x1: Vec<usize>,
    pub p: usize,
    /// `t̄ ∏ (g_i^{(c_{x_i})})^{r̄_i}`.
    pub relator: LWord,
    /// Exponent of `t̄` under the retraction `R̄ → <t̄>` killing `S̄` and the copies of `G`.
    pub t_exponent: Option<i64>,
    pub s_trivial: bool,
    /// The relator is `t̄` alone.
    pub degenerate: bool,
    pub notes: Vec<String>,
}

pub fn build_h1(ctx: &DecompositionContext, cosets: &SuffixCosets, rel: &RewrittenRelation) -> RelativeHPresentation {
    let mut relator = LWord::r(&rel.t);
    for e in &rel.entries {
        relator = relator.mul(&LWord::copy(e.coset, &e.g).conjugate_by(&LWord::r(&e.r)));
    }
    let t_exponent = (relator.r_part() == rel.t).then_some(1);
    let degenerate = relator == LWord::r(&rel.t);
    let s_trivial = ctx.witness.s_trivial;
    let mut notes = Vec::new();
    if degenerate {
        notes.push("every coefficient is trivial: the relator is t̄ = 1".to_string());
    }
    if s_trivial && cosets.p_max == 1 {
        notes.push("S is trivial and p = 1, so T = R = <t> is cyclic".to_string());
    }
    RelativeHPresentation { x1: cosets.x1.clone(), p: cosets.p_max, relator, t_exponent, s_trivial, degenerate, notes }
}

/// `s^{x^φ}`: `r̄ ↦ (r^x)‾` and `g^{(c_y)} ↦ (g^{(c_{yx})})^{ā}` with `c_y x = c_{yx} a`.
pub fn action_apply(
    ctx: &DecompositionContext,
    window: &mut CosetWindow,
    s: &LWord,
    x: &FreeWord,
) -> Result<LWord, DecompositionError> {
    let mut out = Vec::new();
    for sym in s.syms() {
        match sym {
            HSym::R(r) => out.push(HSym::R(r.conjugate_by(x))),
            HSym::G { coset, g } => {
                let cx = window.rep(*coset).mul(x);
                let yx = window.locate_exact(ctx, &cx)?;
                let a = window.rep(yx).inverse().mul(&cx);
                out.push(HSym::R(a.inverse()));
                out.push(HSym::G { coset: yx, g: *g });
                out.push(HSym::R(a));
            }
        }
    }
    Ok(LWord::new(out))
}

/// Generators of `H̃₁` as letters of `L`: `t̄` and every letter of every copy in `X₁`.
pub fn h1_generators(ctx: &DecompositionContext, x1: &[usize]) -> Vec<LWord> {
    let mut out = vec![LWord::r(ctx.t())];
    for &y in x1 {
        for k in 0..ctx.g.generators.len() as u32 {
            out.push(LWord::copy(y, &FreeWord::gen(k)));
        }
    }
    out
}

/// The isomorphism `H̃₁ → H̃_x`, which is the action of `c_x`.
#[derive(Debug, Clone, Serialize)]
pub struct IsoData {
    pub coset: usize,
    pub c_x: FreeWord,
    pub t_image: LWord,
    /// `(y, yx, r)` with `c_y c_x = c_{yx} r`: `g^{(c_y)} ↦ (g^{(c_{yx})})^{r̄}`.
    pub copies: Vec<(usize, usize, FreeWord)>,
    pub relator_image: LWord,
    /// Acting by `c_x t` instead of `c_x` conjugates the image relator by `t̄`.
    pub representative_independent: bool,
}

pub fn iso_h1_to_hx(
    ctx: &DecompositionContext,
    window: &mut CosetWindow,
    h1: &RelativeHPresentation,
    x: usize,
) -> Result<IsoData, DecompositionError> {
    let c_x = window.rep(x).clone();
    let t_image = action_apply(ctx, window, &LWord::r(ctx.t()), &c_x)?;
    let mut copies = Vec::new();
    for &y in &h1.x1 {
        let w = window.rep(y).mul(&c_x);
        let yx = window.locate_exact(ctx, &w)?;
        copies.push((y, yx, window.rep(yx).inverse().mul(&w)));
    }
    let relator_image = action_apply(ctx, window, &h1.relator, &c_x)?;
    let alt = action_apply(ctx, window, &h1.relator, &c_x.mul(ctx.t()))?;
    let representative_independent = alt == relator_image.conjugate_by(&LWord::r(ctx.t()));
    Ok(IsoData { coset: x, c_x, t_image, copies, relator_image, representative_independent })
}

/// Acting by `x` then `x2` agrees with acting by `x x2` on `s`.
pub fn action_composes(
    ctx: &DecompositionContext,
    window: &mut CosetWindow,
    s: &LWord,
    x: &FreeWord,
    x2: &FreeWord,
) -> Result<bool, DecompositionError> {
    let step = action_apply(ctx, window, s, x)?;
    let twice = action_apply(ctx, window, &step, x2)?;
    Ok(twice == action_apply(ctx, window, s, &x.mul(x2))?)
}

/// `iso(x)` after `iso(x′)` equals `iso(x′x)` followed by conjugation by `r̄″`,
/// where `c_{x′} c_x = c_{x′x} r″`.
pub fn iso_composes(
    ctx: &DecompositionContext,
    window: &mut CosetWindow,
    s: &LWord,
    x_prime: usize,
    x: usize,
) -> Result<bool, DecompositionError> {
    let (cp, c) = (window.rep(x_prime).clone(), window.rep(x).clone());
    let w = cp.mul(&c);
    let xpx = window.locate_exact(ctx, &w)?;
    let r2 = window.rep(xpx).inverse().mul(&w);
    let step = action_apply(ctx, window, s, &cp)?;
    let lhs = action_apply(ctx, window, &step, &c)?;
    let direct = action_apply(ctx, window, s, &window.rep(xpx).clone())?;
    Ok(lhs == direct.conjugate_by(&LWord::r(&r2)))
}
