//! Bounded checks on a finite window and the assembled decomposition report.

use super::h1::{
    action_composes, build_h1, h1_generators, iso_composes, iso_h1_to_hx, HSym, LWord, RelativeHPresentation,
};
use super::{
    coset_representatives, rewrite_relation, suffix_cosets, CosetWindow, DecompositionContext, DecompositionError,
    RewrittenRelation, SuffixCosets,
};
use crate::analysis::{classify, RelatorClassification};
use crate::products::DepthVerdict;
use crate::rewriting::free_product::{reduced_elements, FreeProductReducer};
use crate::rewriting::subgroup::SubgroupGraph;
use crate::rewriting::{ClassHint, GroupDescriptor, Limits, RewriteEngine};
use crate::truth::{Decision, Equality, Provenance};
use crate::words::{FreeWord, Gen, Letter, RelativeWord};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReportOptions {
    /// Word length for the subgroup spot checks.
    pub depth: usize,
    /// Radius of the ball in `T` whose cosets form the window.
    pub radius: usize,
    /// Words generated per spot check before giving up on the next length.
    pub budget: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { depth: 4, radius: 1, budget: 20_000 }
    }
}

/// `H̃₁` with `R̄` cut down to the finitely generated subgroup `⟨t, r_i⟩`.
pub struct WindowPresentation {
    pub basis: Vec<FreeWord>,
    pub descriptor: GroupDescriptor,
    pub engine: RewriteEngine,
    /// First generator of each copy of `G`, in the order of `X₁`.
    offsets: Vec<(usize, u32)>,
    graph: SubgroupGraph,
}

impl WindowPresentation {
    pub fn new(
        ctx: &DecompositionContext,
        h1: &RelativeHPresentation,
        rel: &RewrittenRelation,
        limits: &Limits,
    ) -> Self {
        let mut gens = vec![ctx.t().clone()];
        gens.extend(rel.entries.iter().map(|e| e.r.clone()));
        let graph = SubgroupGraph::new(&gens);
        let basis = graph.basis();
        let k = basis.len() as u32;
        let m = ctx.g.generators.len() as u32;
        let mut names: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
        let mut offsets = Vec::new();
        let mut relators = Vec::new();
        for (j, &y) in h1.x1.iter().enumerate() {
            let off = k + j as u32 * m;
            offsets.push((y, off));
            names.extend(ctx.g.generators.iter().map(|g| format!("{g}_{j}")));
            let shift: Vec<u32> = (off..off + m).collect();
            relators.extend(ctx.g.relators.iter().map(|r| r.relabel(&shift)));
        }
        let mut wp = WindowPresentation {
            basis,
            descriptor: GroupDescriptor {
                generators: names,
                relators: Vec::new(),
                class_hint: ClassHint::Generic,
                torsion_free: true,
            },
            engine: RewriteEngine::complete(&GroupDescriptor::trivial(), limits),
            offsets,
            graph,
        };
        if let Some(r) = wp.translate(&h1.relator) {
            relators.push(r);
        }
        wp.descriptor.relators = relators;
        wp.engine = RewriteEngine::complete(&wp.descriptor, limits);
        wp
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn offset(&self, coset: usize) -> Option<u32> {
        self.offsets.iter().find(|(y, _)| *y == coset).map(|(_, o)| *o)
    }

    /// The word in the window generators, if every letter lies in the window.
    pub fn translate(&self, w: &LWord) -> Option<FreeWord> {
        let mut out = Vec::new();
        for s in w.syms() {
            match s {
                HSym::R(r) => out.extend_from_slice(self.graph.express(r)?.letters()),
                HSym::G { coset, g } => out.push(Gen::new(self.offset(*coset)? + g.index, g.inverse)),
            }
        }
        Some(FreeWord::new(out))
    }
}

/// No nonempty reduced word of `R̄ * ★_{y∈Y} G^{(c_y)}` dies in `H̃₁`, up to a length.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupCheck {
    /// Representatives of the cosets in `Y`.
    pub copies: Vec<String>,
    pub verdict: DepthVerdict,
    pub undecided: usize,
    pub counterexample: Option<String>,
}

fn subgroup_check(
    ctx: &DecompositionContext,
    window: &CosetWindow,
    wp: &WindowPresentation,
    g_engine: &RewriteEngine,
    ys: &[usize],
    opts: &ReportOptions,
) -> SubgroupCheck {
    let k = wp.rank();
    let free = RewriteEngine::complete(&GroupDescriptor::free_of_rank(k, "b"), &Limits::default());
    let mut engines = vec![&free];
    let mut map: Vec<u32> = (0..k as u32).collect();
    for &y in ys {
        engines.push(g_engine);
        let off = wp.offset(y).expect("copy outside the window");
        map.extend(off..off + ctx.g.generators.len() as u32);
    }
    let reducer = FreeProductReducer::new(engines);
    let mut undecided = 0;
    let mut counterexample = None;
    let run =
        reduced_elements(&reducer, opts.depth, opts.budget, &mut |w| match wp.engine.is_trivial(&w.relabel(&map)) {
            Equality::Equal => {
                counterexample = Some(w.display(&wp.descriptor.generators).to_string());
                false
            }
            Equality::Unknown => {
                undecided += 1;
                true
            }
            Equality::Distinct => true,
        });
    let verdict = if counterexample.is_some() {
        DepthVerdict::Refuted
    } else if run.undecided {
        DepthVerdict::Unknown
    } else {
        DepthVerdict::HoldsAtDepth(run.depth)
    };
    SubgroupCheck {
        copies: ys.iter().map(|&y| ctx.show_t(window.rep(y))).collect(),
        verdict,
        undecided,
        counterexample,
    }
}

/// Proper subsets of `X₁` with at most two elements.
fn small_proper_subsets(x1: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let p = x1.len();
    if p > 1 {
        out.extend(x1.iter().map(|&y| vec![y]));
    }
    if p > 2 {
        for a in 0..p {
            for b in a + 1..p {
                out.push(vec![x1[a], x1[b]]);
            }
        }
    }
    out
}

/// `⟨G, T | w⟩` with the coefficient generators first.
pub fn g_hat(ctx: &DecompositionContext) -> GroupDescriptor {
    let m = ctx.g.generators.len() as u32;
    let mut generators = ctx.g.generators.clone();
    generators.extend(ctx.alphabet.variables.iter().cloned());
    let mut relators = ctx.g.relators.clone();
    relators.push(flatten(&ctx.word, m));
    GroupDescriptor { generators, relators, class_hint: ClassHint::Generic, torsion_free: ctx.g.torsion_free }
}

fn flatten(w: &RelativeWord, m: u32) -> FreeWord {
    FreeWord::new(w.letters().iter().map(|l| match *l {
        Letter::Coef(g) => g,
        Letter::Var(g) => Gen::new(g.index + m, g.inverse),
    }))
}

/// Image in `Ĝ` under `r̄ ↦ r`, `g^{(c_y)} ↦ g^{c_y}`.
pub fn to_g_hat(ctx: &DecompositionContext, window: &CosetWindow, w: &LWord) -> FreeWord {
    let m = ctx.g.generators.len() as u32;
    let mut out = RelativeWord::empty();
    for s in w.syms() {
        let piece = match s {
            HSym::R(r) => RelativeWord::from_var(r),
            HSym::G { coset, g } => {
                let c = RelativeWord::from_var(window.rep(*coset));
                c.inverse().mul(&RelativeWord::from_coef(&FreeWord::new([*g]))).mul(&c)
            }
        };
        out = out.mul(&piece);
    }
    flatten(&out, m)
}

/// Whether `G` is cyclic, from its abelianization when that decides it.
pub fn g_noncyclic(g: &GroupDescriptor) -> Decision {
    if g.generators.len() <= 1 {
        return Decision::No;
    }
    let ab = crate::rewriting::abelianization(g);
    if ab.free_rank + ab.torsion.len() >= 2 {
        return Decision::Yes;
    }
    Decision::Unknown
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub statement: String,
    pub status: String,
}

impl Claim {
    fn new(statement: impl Into<String>, status: impl ToString) -> Self {
        Claim { statement: statement.into(), status: status.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContextSummary {
    pub relator: String,
    pub t: String,
    pub q: usize,
    pub t1: String,
    pub t1_complete: bool,
    pub s_trivial: bool,
    pub w_in_t: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CosetSummary {
    pub suffixes: Vec<String>,
    pub labels: Vec<usize>,
    pub x1: Vec<usize>,
    pub p: usize,
    pub p_min: usize,
    pub p_max: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepresentativeEntry {
    pub coset: usize,
    pub representative: String,
    pub shortlex_least: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationEntrySummary {
    pub g: String,
    pub coset: usize,
    pub c: String,
    pub r: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Relation2 {
    pub t: String,
    pub entries: Vec<RelationEntrySummary>,
    pub reassembles: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct H1Summary {
    pub generators: Vec<String>,
    pub relator: String,
    pub p: usize,
    pub t_exponent: Option<i64>,
    pub s_trivial: bool,
    pub degenerate: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionRow {
    pub coset: String,
    pub x: String,
    pub image: String,
    pub a: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoSummary {
    pub coset: String,
    pub t_image: String,
    pub copies: Vec<String>,
    pub relator_image: String,
    pub representative_independent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionTable {
    pub rows: Vec<ActionRow>,
    pub composition: Claim,
    pub isomorphisms: Vec<IsoSummary>,
    pub iso_composition: Claim,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelatorImage {
    pub coset: String,
    pub verdict: Equality,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem3 {
    pub product: String,
    pub kernel: String,
    pub window_cosets: Vec<String>,
    pub strict: Claim,
    pub claims: Vec<Claim>,
    pub subgroup_checks: Vec<SubgroupCheck>,
    pub relator_images: Vec<RelatorImage>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub classification: RelatorClassification,
    pub context: ContextSummary,
    pub cosets: CosetSummary,
    pub representatives: Vec<RepresentativeEntry>,
    pub relation2: Relation2,
    pub h1_presentation: H1Summary,
    pub action_table: ActionTable,
    pub theorem3: Theorem3,
    pub provenance: Vec<Claim>,
}

fn ball(rank: usize, radius: usize) -> Vec<FreeWord> {
    let mut out = Vec::new();
    let mut layer = vec![FreeWord::empty()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for code in 0..2 * rank as u32 {
                let g = Gen::from_code(code);
                if w.letters().last() != Some(&g.inv()) {
                    next.push(w.mul(&FreeWord::new([g])));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn exact_or_unknown(r: Result<bool, DecompositionError>, ok: &mut bool, unknown: &mut Option<String>) {
    match r {
        Ok(b) => *ok &= b,
        Err(e) => *unknown = Some(e.to_string()),
    }
}

fn verdict(ok: bool, unknown: &Option<String>) -> String {
    match (ok, unknown) {
        (false, _) => "FAILED".into(),
        (true, None) => Provenance::Exact.to_string(),
        (true, Some(e)) => format!("{} ({e})", Provenance::Unknown),
    }
}

fn action_table(
    ctx: &DecompositionContext,
    window: &mut CosetWindow,
    h1: &RelativeHPresentation,
    cosets: &[usize],
) -> ActionTable {
    let mut rows = Vec::new();
    for &y in &h1.x1 {
        for x in 0..ctx.rank() as u32 {
            let cx = window.rep(y).mul(&FreeWord::gen(x));
            let yx = window.locate(ctx, &cx);
            rows.push(ActionRow {
                coset: ctx.show_t(window.rep(y)),
                x: ctx.alphabet.variables[x as usize].clone(),
                image: ctx.show_t(window.rep(yx)),
                a: ctx.show_t(&window.rep(yx).inverse().mul(&cx)),
            });
        }
    }
    let gens = h1_generators(ctx, &h1.x1);
    let letters = ball(ctx.rank(), 1);
    let (mut ok, mut unknown) = (true, None);
    for s in &gens {
        for x in &letters {
            for x2 in &letters {
                exact_or_unknown(action_composes(ctx, window, s, x, x2), &mut ok, &mut unknown);
            }
        }
    }
    let composition =
        Claim::new("acting by x then x' equals acting by x x' on the generators of H̃₁", verdict(ok, &unknown));
    let mut isomorphisms = Vec::new();
    let (mut iso_ok, mut iso_unknown) = (true, None);
    for &x in cosets {
        match iso_h1_to_hx(ctx, window, h1, x) {
            Ok(iso) => {
                iso_ok &= iso.representative_independent;
                isomorphisms.push(IsoSummary {
                    coset: ctx.show_t(&iso.c_x),
                    t_image: iso.t_image.show(ctx, window),
                    copies: iso
                        .copies
                        .iter()
                        .map(|(y, yx, r)| {
                            format!(
                                "G^({}) -> G^({}) conjugated by bar({})",
                                ctx.show_t(window.rep(*y)),
                                ctx.show_t(window.rep(*yx)),
                                ctx.show_t(r)
                            )
                        })
                        .collect(),
                    relator_image: iso.relator_image.show(ctx, window),
                    representative_independent: iso.representative_independent,
                });
            }
            Err(e) => iso_unknown = Some(e.to_string()),
        }
    }
    for &xp in cosets.iter().take(4) {
        for &x in cosets.iter().take(4) {
            for s in &gens {
                exact_or_unknown(iso_composes(ctx, window, s, xp, x), &mut iso_ok, &mut iso_unknown);
            }
        }
    }
    let iso_composition = Claim::new(
        "iso(x) after iso(x') equals iso(x'x) up to conjugation by an element of R̄, and the image relator does not depend on the representative",
        verdict(iso_ok, &iso_unknown),
    );
    ActionTable { rows, composition, isomorphisms, iso_composition }
}

fn show_h1(ctx: &DecompositionContext, window: &CosetWindow, h1: &RelativeHPresentation) -> H1Summary {
    let mut generators = vec![format!("t̄ = bar({})", ctx.show_t(ctx.t()))];
    if !h1.s_trivial {
        generators.push("S̄ (free, opaque)".into());
    }
    generators.extend(h1.x1.iter().map(|&y| format!("G^({})", ctx.show_t(window.rep(y)))));
    H1Summary {
        generators,
        relator: h1.relator.show(ctx, window),
        p: h1.p,
        t_exponent: h1.t_exponent,
        s_trivial: h1.s_trivial,
        degenerate: h1.degenerate,
        notes: h1.notes.clone(),
    }
}

fn theorem_claims(ctx: &DecompositionContext) -> (Claim, Vec<Claim>) {
    let hyp = if ctx.g.torsion_free { Provenance::Theorem.to_string() } else { "HYPOTHESIS_UNVERIFIED".into() };
    let strict = match g_noncyclic(&ctx.g) {
        Decision::Yes => Claim::new("the FIAP K is strict", &hyp),
        Decision::No => Claim::new("the FIAP K is strict", "HYPOTHESIS_FAILS (G is cyclic)"),
        Decision::Unknown => Claim::new("the FIAP K is strict", "UNKNOWN (cyclicity of G undecided)"),
    };
    let mut claims = vec![
        Claim::new("P = T ⋉_{R=R̄} K is isomorphic to Ĝ, by the identity on T and G^(1) -> G", &hyp),
        Claim::new("K is a free iterated amalgamated product of the groups H̃_x, x ∈ T/R", &hyp),
        Claim::new("each H̃_x -> K is injective", &hyp),
        Claim::new("the natural map G -> Ĝ is injective", &hyp),
    ];
    claims.push(if ctx.w_in_t {
        Claim::new("the natural map T -> Ĝ is injective", "NOT_APPLICABLE (w ∈ T)")
    } else {
        Claim::new("the natural map T -> Ĝ is injective", &hyp)
    });
    if ctx.rank() == 1 {
        claims.push(Claim::new("T/R is trivial, so K = H̃₁ and the relator is unimodular", Provenance::Exact));
    }
    (strict, claims)
}

/// Runs the whole pipeline on a prepared context.
pub fn assemble_report(
    ctx: &DecompositionContext,
    opts: &ReportOptions,
) -> Result<DecompositionReport, DecompositionError> {
    let mut window = CosetWindow::new();
    let cosets: SuffixCosets = suffix_cosets(ctx, &mut window);
    let p_exact = cosets.p_decided() && !window.undecided;
    let reps = coset_representatives(&window, &cosets);
    let rel = rewrite_relation(ctx, &window, &cosets)?;
    let h1 = build_h1(ctx, &cosets, &rel);
    for w in ball(ctx.rank(), opts.radius) {
        window.locate(ctx, &w);
    }
    let window_cosets: Vec<usize> = (0..window.len()).collect();
    let table = action_table(ctx, &mut window, &h1, &window_cosets);

    let wp = WindowPresentation::new(ctx, &h1, &rel, &ctx.limits);
    let g_engine = RewriteEngine::complete(&ctx.g, &ctx.limits);
    let mut subgroup_checks = Vec::new();
    for ys in small_proper_subsets(&h1.x1) {
        if ys.is_empty() && ctx.w_in_t {
            continue;
        }
        subgroup_checks.push(subgroup_check(ctx, &window, &wp, &g_engine, &ys, opts));
    }
    let hat = RewriteEngine::complete(&g_hat(ctx), &ctx.limits);
    let mut relator_images = Vec::new();
    for &x in &window_cosets {
        let c_x = window.rep(x).clone();
        let img = match super::h1::action_apply(ctx, &mut window, &h1.relator, &c_x) {
            Ok(r) => hat.is_trivial(&to_g_hat(ctx, &window, &r)),
            Err(_) => Equality::Unknown,
        };
        relator_images.push(RelatorImage { coset: ctx.show_t(window.rep(x)), verdict: img });
    }
    let (strict, claims) = theorem_claims(ctx);

    let p_prov = if p_exact { Provenance::Exact } else { Provenance::Unknown };
    let mut provenance = vec![
        Claim::new("the rewritten relation reassembles to the relator", Provenance::Exact),
        Claim::new(format!("p = {}", cosets.p_max), p_prov),
        Claim::new(
            "the H̃₁ relator has t̄-exponent 1",
            if h1.t_exponent == Some(1) { Provenance::Exact } else { Provenance::Unknown },
        ),
        table.composition.clone(),
        table.iso_composition.clone(),
    ];
    if !p_exact {
        provenance.push(Claim::new(
            format!("p lies in [{}, {}]; undecided cosets were treated as distinct", cosets.p_min, cosets.p_max),
            Provenance::Unknown,
        ));
    }
    for c in &subgroup_checks {
        let y = if c.copies.is_empty() { "R̄".to_string() } else { format!("R̄ * G^({})", c.copies.join(") * G^(")) };
        let status = match c.verdict {
            DepthVerdict::HoldsAtDepth(d) => Provenance::CheckedAtDepth(d).to_string(),
            v => v.to_string(),
        };
        provenance.push(Claim::new(format!("{y} embeds in H̃₁"), status));
    }
    provenance.push(strict.clone());
    provenance.extend(claims.iter().cloned());

    let summary = ContextSummary {
        relator: super::show_relative(ctx, &ctx.word),
        t: ctx.show_t(ctx.t()),
        q: ctx.q(),
        t1: format!("<{} | {}>", ctx.variables().join(", "), ctx.show_t(ctx.t())),
        t1_complete: ctx.t1.is_complete(),
        s_trivial: ctx.witness.s_trivial,
        w_in_t: ctx.w_in_t,
    };
    Ok(DecompositionReport {
        classification: classify(&ctx.word, ctx.rank()).map_err(|e| DecompositionError::Malformed(e.to_string()))?,
        context: summary,
        cosets: CosetSummary {
            suffixes: cosets.suffixes.iter().map(|s| ctx.show_t(s)).collect(),
            labels: cosets.labels.clone(),
            x1: cosets.x1.clone(),
            p: cosets.p_max,
            p_min: cosets.p_min,
            p_max: cosets.p_max,
            provenance: p_prov,
        },
        representatives: reps
            .iter()
            .map(|(y, c)| RepresentativeEntry {
                coset: *y,
                representative: ctx.show_t(c),
                shortlex_least: window.cosets[*y].least,
            })
            .collect(),
        relation2: Relation2 {
            t: ctx.show_t(&rel.t),
            entries: rel
                .entries
                .iter()
                .map(|e| RelationEntrySummary {
                    g: ctx.show_g(&e.g),
                    coset: e.coset,
                    c: ctx.show_t(&e.c),
                    r: ctx.show_t(&e.r),
                })
                .collect(),
            reassembles: rel.reassemble() == ctx.word,
        },
        h1_presentation: show_h1(ctx, &window, &h1),
        action_table: table,
        theorem3: Theorem3 {
            product: "P = T ⋉_{R=R̄} K".into(),
            kernel: format!("R = normal closure of {} in T", ctx.show_t(ctx.t())),
            window_cosets: window_cosets.iter().map(|&x| ctx.show_t(window.rep(x))).collect(),
            strict,
            claims,
            subgroup_checks,
            relator_images,
        },
        provenance,
    })
}
