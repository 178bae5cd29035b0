//! Relator classification: unimodularity, generalised unimodularity over a
//! free `T`, and the complexity-at-most-one shape `c t ∏ (b_i a_i^t)`.

use crate::rewriting::{ClassHint, GroupDescriptor, Limits, RewriteEngine};
use crate::truth::Equality;
use crate::words::{
    cyclic_reduce, erase_coefficients, exponent_sum, is_proper_power, Alphabet, CyclicWord, FreeWord, Letter,
    RelativeWord,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("inconsistent witness: {0}")]
    InconsistentWitness(String),
    #[error("witness lacks a declaration: {0}")]
    MissingDeclaration(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GuStatus {
    Yes,
    No,
    HypothesisOnly,
}

/// One maximal run of a single variable between coefficient letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run {
    pub variable: u32,
    pub exponent: i64,
}

/// A rotation of the relator written literally as `c t ∏_{i=0}^m (b_i t^{-1} a_i t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityOneForm {
    pub c: FreeWord,
    /// Pairs `(b_i, a_i)`.
    pub pairs: Vec<(FreeWord, FreeWord)>,
    /// The literal word; its cyclic reduction is the input's conjugacy class.
    pub literal: RelativeWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorClassification {
    pub unimodular: bool,
    pub generalised_unimodular: GuStatus,
    pub complexity_le_one: bool,
    /// Exponents of the runs, read cyclically from the canonical syllable form.
    pub exponent_pattern: Vec<i64>,
    pub pattern_variables: Vec<u32>,
    pub exponent_sums: Vec<i64>,
    pub normal_form: Option<ComplexityOneForm>,
    pub notes: Vec<String>,
}

/// Cyclic run decomposition of a cyclically reduced word.
pub fn runs(c: &CyclicWord) -> Vec<Run> {
    let w = c.syllable_form();
    let mut out: Vec<Run> = Vec::new();
    let mut broken = true;
    for &l in w.letters() {
        match l {
            Letter::Coef(_) => broken = true,
            Letter::Var(g) => {
                match out.last_mut() {
                    Some(r) if !broken && r.variable == g.index => r.exponent += g.exponent(),
                    _ => out.push(Run { variable: g.index, exponent: g.exponent() }),
                }
                broken = false;
            }
        }
    }
    let closes_up = !w.has_coefficients() && out.len() > 1;
    if closes_up && out[0].variable == out[out.len() - 1].variable {
        let last = out.pop().unwrap();
        out[0].exponent += last.exponent;
    }
    out
}

fn alternating(len: usize, first: i64) -> Vec<i64> {
    (0..len).map(|i| if i % 2 == 0 { first } else { -first }).collect()
}

/// Exponent patterns realised by `c t ∏_{i=0}^m (b_i a_i^t)` after cyclic reduction,
/// for a pattern of the given length: `(+1, (-1,+1)^k)` when `c ≠ 1`, and
/// `((-1,+1)^k, -1, +2)` when `c = 1` absorbs into the last `t`.
fn shape_targets(len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if len % 2 == 1 {
        out.push(alternating(len, 1));
    } else {
        let mut v = alternating(len, -1);
        v[len - 1] = 2;
        out.push(v);
    }
    out
}

fn find_rotation(pattern: &[i64], target: &[i64]) -> Option<usize> {
    let n = pattern.len();
    (0..n).find(|&r| (0..n).all(|i| pattern[(i + r) % n] == target[i]))
}

/// Emits the literal form for a one-variable cyclic word whose pattern matches.
fn complexity_one_form(c: &CyclicWord) -> Option<ComplexityOneForm> {
    let (syl, tail) = c.syllable_form().syllables();
    if !tail.is_empty() || syl.is_empty() {
        return None;
    }
    let pattern: Vec<i64> = syl.iter().map(|s| s.var.exponent_sum(s.var.letters()[0].index)).collect();
    let q = syl.len();
    let t = |e: i64| FreeWord::from_powers(&[(0, e)]);
    for target in shape_targets(q) {
        let Some(r) = find_rotation(&pattern, &target) else { continue };
        let rot: Vec<_> = (0..q).map(|i| syl[(i + r) % q].clone()).collect();
        let mut literal = Vec::new();
        let push_coef = |lit: &mut Vec<Letter>, w: &FreeWord| lit.extend(w.letters().iter().map(|&g| Letter::Coef(g)));
        let push_t = |lit: &mut Vec<Letter>, e: i64| lit.extend(t(e).letters().iter().map(|&g| Letter::Var(g)));
        let (cword, body): (FreeWord, &[_]) =
            if target[0] == 1 { (rot[0].coef.clone(), &rot[1..]) } else { (FreeWord::empty(), &rot[..]) };
        push_coef(&mut literal, &cword);
        push_t(&mut literal, 1);
        let mut pairs = Vec::new();
        for pair in body.chunks(2) {
            let (b, a) = (&pair[0].coef, &pair[1].coef);
            push_coef(&mut literal, b);
            push_t(&mut literal, -1);
            push_coef(&mut literal, a);
            push_t(&mut literal, 1);
            pairs.push((b.clone(), a.clone()));
        }
        let literal = RelativeWord::from_letters(literal);
        if &cyclic_reduce(&literal).0 == c {
            return Some(ComplexityOneForm { c: cword, pairs, literal });
        }
    }
    None
}

pub fn classify(w: &RelativeWord, n: usize) -> Result<RelatorClassification, AnalysisError> {
    if !w.is_cyclically_reduced() {
        return Err(AnalysisError::NotCyclicallyReduced);
    }
    let (c, _) = cyclic_reduce(w);
    let runs = runs(&c);
    let exponent_sums: Vec<i64> = (0..n as u32).map(|v| exponent_sum(w, v)).collect();
    let unimodular = n == 1 && exponent_sums[0] == 1;
    let mut notes = Vec::new();
    let normal_form = if n == 1 { complexity_one_form(&c) } else { None };
    if n == 1 && !unimodular {
        notes.push(format!("exponent sum {} is not one", exponent_sums[0]));
    }
    let gu = match generalised_unimodular_free_t(w, n) {
        Ok(_) => GuStatus::Yes,
        Err(rej) => {
            notes.push(rej.to_string());
            GuStatus::No
        }
    };
    Ok(RelatorClassification {
        unimodular,
        generalised_unimodular: gu,
        complexity_le_one: normal_form.is_some(),
        exponent_pattern: runs.iter().map(|r| r.exponent).collect(),
        pattern_variables: runs.iter().map(|r| r.variable).collect(),
        exponent_sums,
        normal_form,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StrongUpBasis {
    LocallyIndicableByBrodskii,
    Declared,
}

/// Data for conditions 1)–3) of generalised unimodularity.
#[derive(Debug, Clone, Serialize)]
pub struct GuWitness {
    /// `t = ∏ t_i`.
    pub t: FreeWord,
    pub t_group: GroupDescriptor,
    /// Normal generators of `R`.
    pub r_normal_generators: Vec<FreeWord>,
    pub r_description: String,
    /// Whether the complement `S` in `R = <t> * S` is trivial.
    pub s_trivial: bool,
    pub quotient: GroupDescriptor,
    pub basis: StrongUpBasis,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum GuRejection {
    #[error("the product of the t_i is trivial (w' is empty, and 1 = 1^2)")]
    TrivialProduct,
    #[error("w' is a proper power (k = {k})")]
    ProperPower { root: FreeWord, k: u32 },
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
}

fn variable_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// The free-`T` witness: accepted iff `w'` is nonempty and not a proper power.
pub fn generalised_unimodular_free_t(w: &RelativeWord, n: usize) -> Result<GuWitness, GuRejection> {
    generalised_unimodular_free_t_named(w, &variable_names(n))
}

pub fn generalised_unimodular_free_t_named(w: &RelativeWord, variables: &[String]) -> Result<GuWitness, GuRejection> {
    if !w.is_cyclically_reduced() {
        return Err(GuRejection::NotCyclicallyReduced);
    }
    let wp = erase_coefficients(w);
    if wp.is_empty() {
        return Err(GuRejection::TrivialProduct);
    }
    let pp = is_proper_power(&wp);
    if pp.is_proper_power {
        return Err(GuRejection::ProperPower { root: pp.root, k: pp.k });
    }
    let t_group = GroupDescriptor {
        generators: variables.to_vec(),
        relators: Vec::new(),
        class_hint: ClassHint::Free,
        torsion_free: true,
    };
    let quotient = GroupDescriptor {
        generators: variables.to_vec(),
        relators: vec![wp.clone()],
        class_hint: ClassHint::Generic,
        torsion_free: true,
    };
    Ok(GuWitness {
        r_description: format!("normal closure of w' = {}", wp.display(variables)),
        t: wp.clone(),
        t_group,
        r_normal_generators: vec![wp],
        s_trivial: variables.len() == 1,
        quotient,
        basis: StrongUpBasis::LocallyIndicableByBrodskii,
    })
}

/// A user-supplied witness for a non-free `T`.
#[derive(Debug, Clone)]
pub struct DeclaredWitness {
    pub t_group: GroupDescriptor,
    pub t: FreeWord,
    pub r_normal_generators: Vec<FreeWord>,
    /// `T/R`; defaults to `T` with the normal generators of `R` added as relators.
    pub quotient: Option<GroupDescriptor>,
    pub s_trivial: bool,
    pub s_free_declared: bool,
    pub strong_up_declared: bool,
}

/// Accepts a declared witness after bounded consistency checks.
pub fn declare_witness(d: &DeclaredWitness, limits: &Limits) -> Result<GuWitness, AnalysisError> {
    let bad = |m: &str| Err(AnalysisError::InconsistentWitness(m.to_string()));
    if !d.t_group.torsion_free {
        return Err(AnalysisError::MissingDeclaration("T torsion-free".into()));
    }
    if !d.s_free_declared {
        return Err(AnalysisError::MissingDeclaration("<t> is a free factor of R".into()));
    }
    if !d.strong_up_declared {
        return Err(AnalysisError::MissingDeclaration("T/R has the strong UP property".into()));
    }
    let t_engine = RewriteEngine::complete(&d.t_group, limits);
    if t_engine.is_trivial(&d.t) == Equality::Equal {
        return bad("t is trivial in T");
    }
    let quotient = d.quotient.clone().unwrap_or_else(|| {
        let mut q = d.t_group.clone();
        q.relators.extend(d.r_normal_generators.iter().cloned());
        q.class_hint = ClassHint::Generic;
        q
    });
    let q_engine = RewriteEngine::complete(&quotient, limits);
    if q_engine.is_trivial(&d.t) == Equality::Distinct {
        return bad("t does not lie in R");
    }
    let gens: Vec<FreeWord> = (0..d.t_group.rank() as u32).map(FreeWord::gen).collect();
    for r in &d.r_normal_generators {
        if q_engine.is_trivial(r) == Equality::Distinct {
            return bad("a generator of R survives in T/R");
        }
        for x in &gens {
            if q_engine.is_trivial(&r.conjugate_by(x)) == Equality::Distinct {
                return bad("R is not normal in T");
            }
        }
    }
    Ok(GuWitness {
        t: d.t.clone(),
        t_group: d.t_group.clone(),
        r_normal_generators: d.r_normal_generators.clone(),
        r_description: "declared".into(),
        s_trivial: d.s_trivial,
        quotient,
        basis: StrongUpBasis::Declared,
    })
}

/// Convenience: the one-variable alphabet `G ∪ {t}` used by examples.
pub fn one_variable_alphabet(coefficients: &[&str]) -> Alphabet {
    Alphabet::new(coefficients, &["t"])
}
