//! Centre of `⟨G, T | w⟩` for torsion-free `G` and `T` and a (generalised)
//! unimodular relator.

mod braid;

use crate::analysis::{generalised_unimodular_free_t_named, GuWitness};
use crate::products::{afp_centre, AmalgamatedProduct};
use crate::rewriting::{abelianization, ClassHint, GroupDescriptor, Limits, RewriteEngine};
use crate::truth::{Decision, Equality, Provenance};
use crate::words::{
    erase_coefficients, exponent_sum, normalised_root, Alphabet, CyclicWord, FreeWord, Letter, RelativeWord,
};
use serde::Serialize;
use thiserror::Error;

pub use braid::{braid_note, is_braid_relator, BraidNote};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CentreError {
    #[error("hypothesis unverified: {0}")]
    HypothesisUnverified(String),
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Trivial,
    #[serde(rename = "ISOMORPHIC_TO_Z_G")]
    IsomorphicToZG,
    OneRelatorCentreCase,
    /// Generators written in `G`; empty when the centre is trivial.
    AfpCentre {
        generators: Vec<String>,
    },
    GIsomorphic,
    Unknown,
}

/// Explicit map `⟨G, t | w⟩ -> G` for `w = g t g'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GIsomorphism {
    pub images: Vec<(String, String)>,
    pub relator_image: String,
    pub relator_image_trivial: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentreVerdict {
    pub verdict: Verdict,
    pub applicable_cases: Vec<String>,
    pub hypotheses_used: Vec<String>,
    pub provenance: Provenance,
    pub statement: String,
    pub isomorphism: Option<GIsomorphism>,
    pub braid: Option<BraidNote>,
    pub notes: Vec<String>,
}

impl CentreVerdict {
    fn new(verdict: Verdict, provenance: Provenance, statement: &str) -> Self {
        CentreVerdict {
            verdict,
            applicable_cases: Vec::new(),
            hypotheses_used: Vec::new(),
            provenance,
            statement: statement.to_string(),
            isomorphism: None,
            braid: None,
            notes: Vec::new(),
        }
    }
}

/// How `T` is given.
#[derive(Debug, Clone)]
pub enum TGroup {
    /// Free on the alphabet's variables.
    Free,
    /// Any torsion-free group with an accepted witness.
    Witnessed(GuWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
    Case4,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseSplit {
    pub tag: CaseTag,
    pub q: usize,
    /// Whether `⟨t_1, …, t_q⟩` is cyclic.
    pub t_subgroup_cyclic: Decision,
    pub statement: String,
}

fn plain_free(d: &GroupDescriptor) -> bool {
    d.class_hint == ClassHint::Free && d.relators.is_empty()
}

fn abelian_hint(d: &GroupDescriptor) -> bool {
    matches!(d.class_hint, ClassHint::Cyclic | ClassHint::FgAbelian)
}

fn abelian_width(d: &GroupDescriptor) -> usize {
    let ab = abelianization(d);
    ab.free_rank + ab.torsion.len()
}

pub fn group_is_cyclic(d: &GroupDescriptor) -> Decision {
    if d.rank() <= 1 || d.class_hint == ClassHint::Cyclic {
        return Decision::Yes;
    }
    if plain_free(d) {
        return Decision::No;
    }
    let width = abelian_width(d);
    if d.class_hint == ClassHint::FgAbelian {
        return Decision::from_bool(width <= 1);
    }
    if width >= 2 {
        Decision::No
    } else {
        Decision::Unknown
    }
}

pub fn group_is_trivial(d: &GroupDescriptor, limits: &Limits) -> Decision {
    if d.rank() == 0 {
        return Decision::Yes;
    }
    if abelian_width(d) > 0 || plain_free(d) {
        return Decision::No;
    }
    let e = RewriteEngine::complete(d, limits);
    let mut all = true;
    for i in 0..d.rank() as u32 {
        match e.is_trivial(&FreeWord::gen(i)) {
            Equality::Distinct => return Decision::No,
            Equality::Unknown => all = false,
            Equality::Equal => {}
        }
    }
    if all {
        Decision::Yes
    } else {
        Decision::Unknown
    }
}

fn commutes_with_generators(d: &GroupDescriptor, e: &RewriteEngine, x: &FreeWord) -> Decision {
    let mut out = Decision::Yes;
    for i in 0..d.rank() as u32 {
        let g = FreeWord::gen(i);
        let c = x.mul(&g).mul(&x.inverse()).mul(&g.inverse());
        match e.is_trivial(&c) {
            Equality::Distinct => return Decision::No,
            Equality::Unknown => out = Decision::Unknown,
            Equality::Equal => {}
        }
    }
    out
}

/// Whether `x` is central in `d`.
pub fn is_central(d: &GroupDescriptor, x: &FreeWord, limits: &Limits) -> Decision {
    if abelian_hint(d) {
        return Decision::Yes;
    }
    if plain_free(d) {
        return Decision::from_bool(d.rank() <= 1 || x.is_empty());
    }
    commutes_with_generators(d, &RewriteEngine::complete(d, limits), x)
}

/// Whether `⟨x⟩ ∩ Z(d) ≠ 1`, for torsion-free `d`.
pub fn cyclic_meets_centre(d: &GroupDescriptor, x: &FreeWord, limits: &Limits) -> Decision {
    let e = RewriteEngine::complete(d, limits);
    match e.is_trivial(x) {
        Equality::Equal => return Decision::No,
        Equality::Unknown => return Decision::Unknown,
        Equality::Distinct => {}
    }
    if abelian_hint(d) {
        return Decision::Yes;
    }
    if plain_free(d) {
        return Decision::from_bool(d.rank() <= 1);
    }
    match commutes_with_generators(d, &e, x) {
        Decision::Yes => Decision::Yes,
        _ => Decision::Unknown,
    }
}

/// Whether `⟨G²⟩` cyclic forces `G` cyclic, answered on the decidable classes.
pub fn lemma5_cyclic_from_squares(d: &GroupDescriptor) -> Decision {
    if !d.torsion_free {
        return Decision::Unknown;
    }
    match d.class_hint {
        ClassHint::Cyclic => Decision::Yes,
        ClassHint::FgAbelian => Decision::from_bool(abelianization(d).free_rank <= 1),
        ClassHint::Free if d.relators.is_empty() => Decision::from_bool(d.rank() <= 1),
        _ => Decision::Unknown,
    }
}

fn cyclic_syllables(w: &RelativeWord) -> Result<Vec<crate::words::Syllable>, CentreError> {
    let c = CyclicWord::from_cyclically_reduced(w).ok_or(CentreError::NotCyclicallyReduced)?;
    Ok(c.syllable_form().syllables().0)
}

fn t_subgroup_cyclic(t: &GroupDescriptor, parts: &[FreeWord]) -> Decision {
    if group_is_cyclic(t) == Decision::Yes {
        return Decision::Yes;
    }
    if !plain_free(t) {
        return Decision::Unknown;
    }
    let mut roots = parts.iter().filter_map(normalised_root);
    match roots.next() {
        None => Decision::Yes,
        Some(r) => Decision::from_bool(roots.all(|s| s == r)),
    }
}

/// The four-way split on `q`, `g_1` and the cyclicity of `⟨t_1, …, t_q⟩`.
pub fn theorem2_case_split(
    g: &GroupDescriptor,
    t: &GroupDescriptor,
    w: &RelativeWord,
    limits: &Limits,
) -> Result<CaseSplit, CentreError> {
    let syl = cyclic_syllables(w)?;
    let q = syl.len();
    if q == 0 {
        return Err(CentreError::HypothesisUnverified("w has no letters from T".into()));
    }
    let parts: Vec<FreeWord> = syl.iter().map(|s| s.var.clone()).collect();
    let cyclic = t_subgroup_cyclic(t, &parts);
    let (tag, statement) = if q == 1 {
        match RewriteEngine::complete(g, limits).is_trivial(&syl[0].coef) {
            Equality::Equal => (CaseTag::Case1, "Ĝ ≅ G * (T/⟨⟨t⟩⟩)"),
            Equality::Distinct => (CaseTag::Case2, "Ĝ ≅ G *_{g_1 = t^-1} T"),
            Equality::Unknown => (CaseTag::Unknown, "triviality of g_1 undecided"),
        }
    } else {
        match cyclic {
            Decision::Yes => (CaseTag::Case3, "Ĝ ≅ ⟨G, t | w⟩ *_⟨t⟩ T"),
            Decision::No => (CaseTag::Case4, "Ĝ ≅ T ⋉_{R=R̄} K with K a free iterated amalgamated product"),
            Decision::Unknown => (CaseTag::Unknown, "cyclicity of ⟨t_1, …, t_q⟩ undecided"),
        }
    };
    Ok(CaseSplit { tag, q, t_subgroup_cyclic: cyclic, statement: statement.into() })
}

/// For `w = g t g'`: the map `t -> g^-1 g'^-1`, checked on the relator.
pub fn gtg_isomorphism(w: &RelativeWord, alphabet: &Alphabet) -> Option<GIsomorphism> {
    let letters = w.letters();
    let vars: Vec<usize> = (0..letters.len()).filter(|&i| letters[i].is_var()).collect();
    let [k] = vars[..] else { return None };
    let Letter::Var(x) = letters[k] else { return None };
    if x.inverse {
        return None;
    }
    let coef = |ls: &[Letter]| {
        FreeWord::new(ls.iter().map(|l| match l {
            Letter::Coef(g) | Letter::Var(g) => *g,
        }))
    };
    let (u, v) = (coef(&letters[..k]), coef(&letters[k + 1..]));
    let image = u.inverse().mul(&v.inverse());
    let relator_image = u.mul(&image).mul(&v);
    let names = &alphabet.coefficients;
    let shown = image.display(names).to_string();
    let relator_shown = relator_image.display(names).to_string();
    Some(GIsomorphism {
        images: vec![(alphabet.variables[x.index as usize].clone(), shown)],
        relator_image: relator_shown,
        relator_image_trivial: relator_image.is_empty(),
    })
}

fn hypothesis(m: impl Into<String>) -> CentreError {
    CentreError::HypothesisUnverified(m.into())
}

/// Dispatches on the shape of `T`, `q` and the cyclicity of `G`.
pub fn classify_centre(
    g: &GroupDescriptor,
    t: &TGroup,
    w: &RelativeWord,
    alphabet: &Alphabet,
    limits: &Limits,
) -> Result<CentreVerdict, CentreError> {
    if !g.torsion_free {
        return Err(hypothesis("G is not declared torsion-free"));
    }
    if !w.is_cyclically_reduced() {
        return Err(CentreError::NotCyclicallyReduced);
    }
    match t {
        TGroup::Free => free_route(g, w, alphabet, limits),
        TGroup::Witnessed(wit) => witnessed_route(g, wit, w, alphabet, limits),
    }
}

fn free_route(
    g: &GroupDescriptor,
    w: &RelativeWord,
    alphabet: &Alphabet,
    limits: &Limits,
) -> Result<CentreVerdict, CentreError> {
    let n = alphabet.variables.len();
    match n {
        0 => Err(hypothesis("no variables")),
        1 => one_variable(g, w, alphabet),
        _ => several_variables(g, w, alphabet, limits),
    }
}

fn one_variable(g: &GroupDescriptor, w: &RelativeWord, alphabet: &Alphabet) -> Result<CentreVerdict, CentreError> {
    let e = exponent_sum(w, 0);
    if e.abs() != 1 {
        return Err(hypothesis(format!("w is not unimodular (exponent sum {e})")));
    }
    let w = &if e < 0 { w.inverse() } else { w.clone() };
    let iso = gtg_isomorphism(w, alphabet);
    let cyclic = group_is_cyclic(g);
    let mut cases = Vec::new();
    if iso.is_some() {
        cases.push("GTG_FORM".to_string());
    }
    if cyclic == Decision::Yes {
        cases.push("CYCLIC_G".to_string());
    }
    let mut out = if let Some(iso) = iso {
        let mut v = CentreVerdict::new(
            Verdict::IsomorphicToZG,
            Provenance::Exact,
            "w = g t g', so ⟨G, t | w⟩ ≅ G and the centre is Z(G)",
        );
        if !iso.relator_image_trivial {
            v.verdict = Verdict::Unknown;
            v.provenance = Provenance::Unknown;
        }
        v.isomorphism = Some(iso);
        v
    } else {
        match cyclic {
            Decision::Yes => {
                let mut v = CentreVerdict::new(
                    Verdict::OneRelatorCentreCase,
                    Provenance::Theorem,
                    "G is cyclic and ⟨G, t | w⟩ is a one-relator group; its centre is not computed here",
                );
                if g.rank() == 1 && is_braid_relator(w) {
                    match braid_note(alphabet) {
                        Ok(note) => v.braid = Some(note),
                        Err(e) => v.notes.push(format!("braid companion check failed: {e}")),
                    }
                }
                v
            }
            Decision::No => {
                cases.push("NONCYCLIC_G".to_string());
                CentreVerdict::new(
                    Verdict::Trivial,
                    Provenance::Theorem,
                    "G is noncyclic and w is not of the form g t g'",
                )
            }
            Decision::Unknown => CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, "cyclicity of G undecided"),
        }
    };
    out.applicable_cases = cases;
    out.hypotheses_used = vec![
        "G torsion-free (declared)".into(),
        format!("w unimodular (exponent sum {e}{})", if e < 0 { ", relator inverted" } else { "" }),
        format!("G cyclic: {}", decision_text(cyclic, g)),
    ];
    Ok(out)
}

fn decision_text(d: Decision, g: &GroupDescriptor) -> String {
    let evidence = match g.class_hint {
        ClassHint::Cyclic => "class hint".to_string(),
        _ => format!("rank {}, abelianization width {}", g.rank(), abelian_width(g)),
    };
    let d = match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::Unknown => "undecided",
    };
    format!("{d} ({evidence})")
}

fn several_variables(
    g: &GroupDescriptor,
    w: &RelativeWord,
    alphabet: &Alphabet,
    limits: &Limits,
) -> Result<CentreVerdict, CentreError> {
    generalised_unimodular_free_t_named(w, &alphabet.variables).map_err(|r| hypothesis(r.to_string()))?;
    let trivial = group_is_trivial(g, limits);
    let mut v = match trivial {
        Decision::No => CentreVerdict::new(
            Verdict::Trivial,
            Provenance::Theorem,
            "n ≥ 2 over a nontrivial G: the centre is trivial",
        ),
        Decision::Yes => {
            let mut v = CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, "G is trivial");
            v.notes.push("with G trivial the group is a one-relator group on the variables alone".into());
            v
        }
        Decision::Unknown => CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, "nontriviality of G undecided"),
    };
    v.applicable_cases = vec!["SEVERAL_VARIABLES".into()];
    v.hypotheses_used = vec![
        "G torsion-free (declared)".into(),
        "w' is not a proper power".into(),
        format!(
            "G nontrivial: {}",
            match trivial {
                Decision::No => "yes",
                Decision::Yes => "no",
                Decision::Unknown => "undecided",
            }
        ),
    ];
    Ok(v)
}

fn tag_name(t: CaseTag) -> String {
    serde_json::to_value(t).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn witnessed_route(
    g: &GroupDescriptor,
    wit: &GuWitness,
    w: &RelativeWord,
    alphabet: &Alphabet,
    limits: &Limits,
) -> Result<CentreVerdict, CentreError> {
    let t = &wit.t_group;
    if !t.torsion_free {
        return Err(hypothesis("T is not declared torsion-free"));
    }
    if t.rank() != alphabet.variables.len() {
        return Err(hypothesis("the alphabet's variables do not match the generators of T"));
    }
    let product = erase_coefficients(w);
    if RewriteEngine::complete(t, limits).equal(&product, &wit.t) == Equality::Distinct {
        return Err(hypothesis("the witness t is not the product of the t_i"));
    }
    let split = theorem2_case_split(g, t, w, limits)?;
    let cyclic = group_is_cyclic(g);
    let mut hyps = vec![
        "G torsion-free (declared)".to_string(),
        "T torsion-free (declared)".to_string(),
        format!("w generalised unimodular (witness: {})", wit.r_description),
        format!("G cyclic: {}", decision_text(cyclic, g)),
    ];
    let mut v = match cyclic {
        Decision::Yes if plain_free(t) => {
            let mut v = free_route(g, w, alphabet, limits)?;
            v.notes.push("G is cyclic and T is free: answered by the free-T route".into());
            v
        }
        Decision::Yes => CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, "G is cyclic and T is not free"),
        Decision::Unknown => CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, "cyclicity of G undecided"),
        Decision::No if split.q >= 2 => {
            CentreVerdict::new(Verdict::Trivial, Provenance::Theorem, "G noncyclic and q ≥ 2: the centre is trivial")
        }
        Decision::No => single_syllable(g, t, w, &split, &mut hyps, limits)?,
    };
    v.applicable_cases.insert(0, tag_name(split.tag));
    if !(cyclic == Decision::Yes && plain_free(t)) {
        v.hypotheses_used = hyps;
    }
    v.notes.push(format!("structure: {}", split.statement));
    Ok(v)
}

fn single_syllable(
    g: &GroupDescriptor,
    t: &GroupDescriptor,
    w: &RelativeWord,
    split: &CaseSplit,
    hyps: &mut Vec<String>,
    limits: &Limits,
) -> Result<CentreVerdict, CentreError> {
    let syl = cyclic_syllables(w)?;
    let (g1, t1) = (&syl[0].coef, &syl[0].var);
    let t_cyclic = group_is_cyclic(t);
    hyps.push(format!("T cyclic: {}", decision_text(t_cyclic, t)));
    let v = match (t_cyclic, split.tag) {
        (Decision::Yes, _) => {
            let mut v = CentreVerdict::new(Verdict::GIsomorphic, Provenance::Theorem, "T = ⟨t_1⟩ and Ĝ ≅ G");
            v.applicable_cases.push("T_CYCLIC".into());
            v
        }
        (Decision::Unknown, _) | (_, CaseTag::Unknown) => {
            CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, "cyclicity of T or triviality of g_1 undecided")
        }
        (Decision::No, CaseTag::Case1) => {
            CentreVerdict::new(Verdict::Trivial, Provenance::Theorem, "g_1 = 1 and T noncyclic: the centre is trivial")
        }
        (Decision::No, _) => amalgam_centre(g, t, g1, t1, hyps, limits),
    };
    Ok(v)
}

fn amalgam_centre(
    g: &GroupDescriptor,
    t: &GroupDescriptor,
    g1: &FreeWord,
    t1: &FreeWord,
    hyps: &mut Vec<String>,
    limits: &Limits,
) -> CentreVerdict {
    let statement = "Ĝ = G *_{g_1 = t_1^-1} T, whose centre is Z(G) ∩ Z(T) inside the amalgamated subgroup";
    let computed = AmalgamatedProduct::with_limits(g.clone(), t.clone(), vec![g1.clone()], vec![t1.inverse()], limits)
        .and_then(|ap| afp_centre(&ap));
    match computed {
        Ok(c) => {
            hyps.push("amalgamated subgroup proper in both factors (exact witnesses)".into());
            let generators = c.generators_in_a.iter().map(|x| x.display(&g.generators).to_string()).collect();
            CentreVerdict::new(Verdict::AfpCentre { generators }, Provenance::Exact, statement)
        }
        Err(e) => {
            let tz = is_central(t, t1, limits);
            let gz = cyclic_meets_centre(g, g1, limits);
            hyps.push(format!("t_1 central in T: {tz:?}; ⟨g_1⟩ meets Z(G): {gz:?}"));
            let mut v = if tz == Decision::No || gz == Decision::No {
                CentreVerdict::new(Verdict::Trivial, Provenance::Theorem, statement)
            } else {
                CentreVerdict::new(Verdict::Unknown, Provenance::Unknown, statement)
            };
            v.notes.push(format!("amalgam centre not computed: {e}"));
            v
        }
    }
}

#[cfg(test)]
mod tests;
