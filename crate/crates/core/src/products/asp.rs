//! Amalgamated semidirect products `A ⋉_{N=N^ψ} B = (A ⋉ B) / {n n^{-ψ}}`.
//!
//! `A` acts on `B` on the right: `b^{a^φ}`, with `(a,b)(a₁,b₁) = (aa₁, b^{a₁^φ} b₁)`.

use super::ProductError;
use crate::rewriting::lattice::Lattice;
use crate::rewriting::{ClassHint, GroupDescriptor, Limits, RewriteEngine};
use crate::truth::Equality;
use crate::words::FreeWord;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

const MAX_AUTOMORPHISM_ORDER: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct SemidirectData {
    pub a: GroupDescriptor,
    pub b: GroupDescriptor,
    /// For each generator of `A`, the images of the generators of `B` under its action.
    pub action: Vec<Vec<FreeWord>>,
    /// Images under the inverse automorphisms; derived from the order of each automorphism when absent.
    pub action_inv: Option<Vec<Vec<FreeWord>>>,
    /// Generators of `N ◁ A`, as words in `A`.
    pub n_gens: Vec<FreeWord>,
    /// `ψ` of each generator of `N`, as words in `B`.
    pub psi: Vec<FreeWord>,
}

/// Element `(a, b)` of `A ⋉ B`.
pub type Pair = (FreeWord, FreeWord);

pub struct PreparedAsp {
    pub data: SemidirectData,
    pub engine_a: RewriteEngine,
    pub engine_b: RewriteEngine,
    action_inv: Vec<Vec<FreeWord>>,
    /// Normal forms of elements of `N` in `A` mapped to the normal forms of their `ψ`-images.
    psi_table: HashMap<FreeWord, FreeWord>,
    /// Whether the table holds all of `N`.
    psi_closed: bool,
}

impl PreparedAsp {
    /// Completes both factors and tabulates `ψ` on `N` up to `radius` words in the generators of `N`.
    pub fn new(data: SemidirectData, limits: &Limits, radius: usize) -> Result<Self, ProductError> {
        let (na, nb) = (data.a.rank(), data.b.rank());
        if data.action.len() != na || data.action.iter().any(|imgs| imgs.len() != nb) {
            return Err(ProductError::Malformed(
                "action needs one image per generator of B for each generator of A".into(),
            ));
        }
        if data.n_gens.len() != data.psi.len() {
            return Err(ProductError::Malformed("ψ needs one image per generator of N".into()));
        }
        if data.n_gens.iter().any(|w| w.max_index().is_some_and(|m| m as usize >= na))
            || data.psi.iter().any(|w| w.max_index().is_some_and(|m| m as usize >= nb))
        {
            return Err(ProductError::Malformed("N or ψ uses undeclared generators".into()));
        }
        let engine_a = RewriteEngine::complete(&data.a, limits);
        let engine_b = RewriteEngine::complete(&data.b, limits);
        let action_inv = match &data.action_inv {
            Some(inv) => inv.clone(),
            None => data
                .action
                .iter()
                .enumerate()
                .map(|(i, imgs)| {
                    invert_automorphism(&engine_b, imgs).ok_or_else(|| {
                        ProductError::Malformed(format!("inverse of the action of generator {i} not found"))
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        let mut asp =
            PreparedAsp { data, engine_a, engine_b, action_inv, psi_table: HashMap::new(), psi_closed: false };
        asp.tabulate_psi(radius)?;
        Ok(asp)
    }

    fn tabulate_psi(&mut self, radius: usize) -> Result<(), ProductError> {
        let gens: Vec<(FreeWord, FreeWord)> = self
            .data
            .n_gens
            .iter()
            .zip(&self.data.psi)
            .flat_map(|(n, p)| [(n.clone(), p.clone()), (n.inverse(), p.inverse())])
            .collect();
        let mut frontier = vec![(FreeWord::empty(), FreeWord::empty())];
        self.psi_table.insert(FreeWord::empty(), FreeWord::empty());
        for _ in 0..radius {
            let mut next = Vec::new();
            for (n, p) in &frontier {
                for (gn, gp) in &gens {
                    let key = self.engine_a.normal_form(&n.mul(gn));
                    let val = self.engine_b.normal_form(&p.mul(gp));
                    match self.psi_table.get(&key) {
                        Some(old) => {
                            if self.engine_b.equal(old, &val) == Equality::Distinct {
                                let names = &self.data.a.generators;
                                return Err(ProductError::IdentityViolation(format!(
                                    "ψ is not well defined on {}",
                                    key.display(names)
                                )));
                            }
                        }
                        None => {
                            self.psi_table.insert(key.clone(), val.clone());
                            next.push((key, val));
                        }
                    }
                }
            }
            if next.is_empty() {
                self.psi_closed = self.engine_a.is_complete();
                return Ok(());
            }
            frontier = next;
        }
        Ok(())
    }

    /// `ψ(n)` for `n ∈ N` found in the table.
    pub fn psi_of(&self, n: &FreeWord) -> Option<&FreeWord> {
        self.psi_table.get(&self.engine_a.normal_form(n))
    }

    pub fn psi_table_size(&self) -> usize {
        self.psi_table.len()
    }

    /// `b^{a^φ}`.
    pub fn act(&self, b: &FreeWord, a: &FreeWord) -> FreeWord {
        let mut out = b.clone();
        for g in a.letters() {
            let imgs = if g.inverse { &self.action_inv[g.index as usize] } else { &self.data.action[g.index as usize] };
            out = self.engine_b.normal_form(&out.substitute(imgs));
        }
        out
    }

    pub fn inverse(&self, x: &Pair) -> Pair {
        let ai = x.0.inverse();
        let bi = self.act(&x.1.inverse(), &ai);
        (self.engine_a.normal_form(&ai), bi)
    }

    pub fn equal(&self, x: &Pair, y: &Pair) -> Equality {
        match (self.engine_a.equal(&x.0, &y.0), self.engine_b.equal(&x.1, &y.1)) {
            (Equality::Equal, Equality::Equal) => Equality::Equal,
            (Equality::Distinct, _) | (_, Equality::Distinct) => Equality::Distinct,
            _ => Equality::Unknown,
        }
    }
}

/// Inverse of the automorphism with the given generator images, as a power of it.
fn invert_automorphism(engine: &RewriteEngine, imgs: &[FreeWord]) -> Option<Vec<FreeWord>> {
    let gens: Vec<FreeWord> = (0..imgs.len() as u32).map(FreeWord::gen).collect();
    let mut power = gens.clone();
    for _ in 0..MAX_AUTOMORPHISM_ORDER {
        let next: Vec<FreeWord> = power.iter().map(|w| engine.normal_form(&w.substitute(imgs))).collect();
        if next.iter().zip(&gens).all(|(x, g)| engine.equal(x, g) == Equality::Equal) {
            return Some(power);
        }
        power = next;
    }
    None
}

pub fn asp_multiply(asp: &PreparedAsp, x: &Pair, y: &Pair) -> Pair {
    let a = asp.engine_a.normal_form(&x.0.mul(&y.0));
    let b = asp.engine_b.normal_form(&asp.act(&x.1, &y.0).mul(&y.1));
    (a, b)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DiagonalReport {
    /// `N` is trivial and there is nothing to check.
    pub vacuous: bool,
    pub product: usize,
    pub inverse: usize,
    pub conjugation_by_a: usize,
    pub conjugation_by_b: usize,
    /// `(n^a)^ψ = (n^ψ)^{a^φ}` and `b^{n^φ} = b^{n^ψ}`.
    pub consistency: usize,
    /// Instances whose sides could not be compared or whose `ψ` value lies beyond the table.
    pub undecided: usize,
}

impl DiagonalReport {
    pub fn instances(&self) -> usize {
        self.product + self.inverse + self.conjugation_by_a + self.conjugation_by_b + self.consistency
    }
}

fn sample_words(rank: usize, count: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Vec<FreeWord> {
    let mut out: Vec<FreeWord> =
        (0..rank as u32).flat_map(|i| [FreeWord::gen(i), FreeWord::gen(i).inverse()]).collect();
    if rank == 0 {
        return out;
    }
    for _ in 0..count {
        let len = rng.gen_range(1..=max_len);
        let w = FreeWord::new((0..len).map(|_| crate::words::Gen::new(rng.gen_range(0..rank as u32), rng.gen())));
        out.push(w);
    }
    out
}

/// Checks that `{n n^{-ψ}}` is closed under products and inverses and normal in `A ⋉ B`.
pub fn asp_diagonal_checks(asp: &PreparedAsp, samples: usize, seed: u64) -> Result<DiagonalReport, ProductError> {
    let mut report = DiagonalReport::default();
    let mut elements: Vec<(FreeWord, FreeWord)> = asp.psi_table.iter().map(|(n, p)| (n.clone(), p.clone())).collect();
    if elements.iter().all(|(n, _)| n.is_empty()) {
        report.vacuous = true;
        return Ok(report);
    }
    elements.sort_by(|x, y| x.0.shortlex_cmp(&y.0));
    elements.truncate(samples.max(asp.data.n_gens.len() * 2 + 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a_elems = sample_words(asp.data.a.rank(), samples / 4, 3, &mut rng);
    let b_elems = sample_words(asp.data.b.rank(), samples / 4, 3, &mut rng);
    let names_a = &asp.data.a.generators;
    let diag = |n: &FreeWord, p: &FreeWord| -> Pair { (n.clone(), asp.engine_b.normal_form(&p.inverse())) };

    let compare = |lhs: Pair,
                   rhs: Option<Pair>,
                   what: &str,
                   n: &FreeWord,
                   counter: &mut usize,
                   undecided: &mut usize|
     -> Result<(), ProductError> {
        *counter += 1;
        let Some(rhs) = rhs else {
            if asp.psi_closed {
                return Err(ProductError::IdentityViolation(format!(
                    "{what}: result for n = {} leaves N",
                    n.display(names_a)
                )));
            }
            *undecided += 1;
            return Ok(());
        };
        match asp.equal(&lhs, &rhs) {
            Equality::Equal => Ok(()),
            Equality::Distinct => {
                Err(ProductError::IdentityViolation(format!("{what} fails for n = {}", n.display(names_a))))
            }
            Equality::Unknown => {
                *undecided += 1;
                Ok(())
            }
        }
    };
    let lookup = |n: &FreeWord| -> Option<Pair> { asp.psi_of(n).map(|p| diag(&asp.engine_a.normal_form(n), p)) };

    let mut undecided = 0;
    for (n, p) in &elements {
        let d = diag(n, p);
        for (n1, p1) in &elements {
            let lhs = asp_multiply(asp, &d, &diag(n1, p1));
            compare(lhs, lookup(&n.mul(n1)), "product", n, &mut report.product, &mut undecided)?;
        }
        compare(asp.inverse(&d), lookup(&n.inverse()), "inverse", n, &mut report.inverse, &mut undecided)?;
        for a in &a_elems {
            let x = (a.clone(), FreeWord::empty());
            let lhs = asp_multiply(asp, &asp_multiply(asp, &asp.inverse(&x), &d), &x);
            let na = n.conjugate_by(a);
            compare(lhs, lookup(&na), "conjugation by A", n, &mut report.conjugation_by_a, &mut undecided)?;
            // (n^a)^ψ = (n^ψ)^{a^φ}
            if let Some(pa) = asp.psi_of(&na) {
                let lhs = (FreeWord::empty(), pa.clone());
                let rhs = (FreeWord::empty(), asp.act(p, a));
                compare(lhs, Some(rhs), "ψ commutes with the action", n, &mut report.consistency, &mut undecided)?;
            }
        }
        for b in &b_elems {
            let y = (FreeWord::empty(), b.clone());
            let lhs = asp_multiply(asp, &asp_multiply(asp, &asp.inverse(&y), &d), &y);
            compare(lhs, Some(d.clone()), "conjugation by B", n, &mut report.conjugation_by_b, &mut undecided)?;
            // b^{n^φ} = b^{n^ψ}
            let lhs = (FreeWord::empty(), asp.act(b, n));
            let rhs = (FreeWord::empty(), asp.engine_b.normal_form(&b.conjugate_by(p)));
            compare(lhs, Some(rhs), "action of N is conjugation by ψ(N)", n, &mut report.consistency, &mut undecided)?;
        }
    }
    report.undecided = undecided;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct AspPresentation {
    pub descriptor: GroupDescriptor,
    /// `A` and `B` embed and `A ∩ B = N` on all pairs of words up to this length.
    pub checked_depth: usize,
    pub undecided: usize,
}

/// Presentation of `A ⋉_{N=N^ψ} B` on the generators of `A` then `B`.
pub fn asp_presentation(data: &SemidirectData) -> GroupDescriptor {
    let na = data.a.rank() as u32;
    let shift: Vec<u32> = (0..data.b.rank() as u32).map(|i| i + na).collect();
    let mut generators = data.a.generators.clone();
    for g in &data.b.generators {
        let mut name = g.clone();
        while generators.contains(&name) {
            name.push('\'');
        }
        generators.push(name);
    }
    let mut relators = data.a.relators.clone();
    relators.extend(data.b.relators.iter().map(|r| r.relabel(&shift)));
    for (i, imgs) in data.action.iter().enumerate() {
        let a = FreeWord::gen(i as u32);
        for (j, img) in imgs.iter().enumerate() {
            let b = FreeWord::gen(j as u32 + na);
            relators.push(b.conjugate_by(&a).mul(&img.relabel(&shift).inverse()));
        }
    }
    for (n, p) in data.n_gens.iter().zip(&data.psi) {
        relators.push(n.mul(&p.relabel(&shift).inverse()));
    }
    relators.retain(|r| !r.is_empty());
    let class_hint = if relators.is_empty() { ClassHint::Free } else { ClassHint::Generic };
    GroupDescriptor { generators, relators, class_hint, torsion_free: data.a.torsion_free && data.b.torsion_free }
}

/// Builds the presentation and checks on words up to `depth` that `A` and `B`
/// embed and meet exactly in `N`.
pub fn asp_build(asp: &PreparedAsp, depth: usize, limits: &Limits) -> Result<AspPresentation, ProductError> {
    let descriptor = asp_presentation(&asp.data);
    let p = RewriteEngine::complete(&descriptor, limits);
    let na = asp.data.a.rank() as u32;
    let shift: Vec<u32> = (0..asp.data.b.rank() as u32).map(|i| i + na).collect();
    let ball = |rank: usize, engine: &RewriteEngine| -> Vec<FreeWord> {
        let mut v: Vec<FreeWord> =
            super::afp::enumerate_words(rank as u32, depth).iter().map(|w| engine.normal_form(w)).collect();
        v.sort_by(|x, y| x.shortlex_cmp(y));
        v.dedup();
        v
    };
    let a_ball = ball(asp.data.a.rank(), &asp.engine_a);
    let b_ball = ball(asp.data.b.rank(), &asp.engine_b);
    let mut undecided = 0;
    for (x, engine, name, map) in [(&a_ball, &asp.engine_a, "A", None), (&b_ball, &asp.engine_b, "B", Some(&shift))] {
        for w in x {
            if engine.is_trivial(w) != Equality::Distinct {
                continue;
            }
            let img = map.map_or(w.clone(), |m| w.relabel(m));
            match p.is_trivial(&img) {
                Equality::Equal => return Err(ProductError::ConsistencyFail(format!("{name} does not embed"))),
                Equality::Unknown => undecided += 1,
                Equality::Distinct => {}
            }
        }
    }
    let dim = asp.data.a.rank();
    let mut n_rows: Vec<Vec<BigInt>> = asp.data.n_gens.iter().map(|w| exponent_vector(w, dim)).collect();
    n_rows.extend(asp.data.a.relators.iter().map(|w| exponent_vector(w, dim)));
    let n_lattice = Lattice::new(dim, n_rows);
    for a in &a_ball {
        for b in &b_ball {
            if p.equal(a, &b.relabel(&shift)) != Equality::Equal {
                continue;
            }
            match asp.psi_of(a) {
                Some(pa) => {
                    if asp.engine_b.equal(pa, b) == Equality::Distinct {
                        return Err(ProductError::ConsistencyFail(
                            "an element of N is identified with the wrong element of B".into(),
                        ));
                    }
                }
                None if !n_lattice.contains(&exponent_vector(a, dim)) || asp.psi_closed => {
                    return Err(ProductError::ConsistencyFail("A ∩ B is larger than N".into()));
                }
                None => undecided += 1,
            }
        }
    }
    Ok(AspPresentation { descriptor, checked_depth: depth, undecided })
}

fn exponent_vector(w: &FreeWord, n: usize) -> Vec<BigInt> {
    (0..n as u32).map(|i| BigInt::from(w.exponent_sum(i))).collect()
}

#[cfg(test)]
mod tests;
