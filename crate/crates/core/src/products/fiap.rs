//! Free iterated amalgamated products `M_J`, built one leaf at a time:
//! `M_J = M_{j0} *_{H = H^φ} M_{J ∖ {j0}}`.

use super::afp::{default_oracle, AmalgamatedProduct};
use super::ProductError;
use crate::rewriting::{ClassHint, GroupDescriptor, Limits};
use crate::truth::Decision;
use crate::words::FreeWord;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Leaf {
    pub name: String,
    pub group: GroupDescriptor,
}

/// One amalgamation: `H` generated by `h_in_leaf` inside the new leaf, sent by `φ`
/// to `h_in_rest`, words in the presentation of the tree built so far.
#[derive(Debug, Clone, Serialize)]
pub struct AmalgamationStep {
    pub leaf: usize,
    pub h_in_leaf: Vec<FreeWord>,
    pub h_in_rest: Vec<FreeWord>,
}

#[derive(Debug, Clone, Serialize)]
pub enum FiapTree {
    /// `J = ∅`.
    Trivial,
    Amalgam {
        j0: Leaf,
        rest: Box<FiapTree>,
        h_in_j0: Vec<FreeWord>,
        h_in_rest: Vec<FreeWord>,
        /// Element of `M_{j0} ∖ H` when one was found.
        witness: Option<FreeWord>,
    },
}

impl FiapTree {
    pub fn leaves(&self) -> Vec<&Leaf> {
        match self {
            FiapTree::Trivial => Vec::new(),
            FiapTree::Amalgam { j0, rest, .. } => {
                let mut v = rest.leaves();
                v.push(j0);
                v
            }
        }
    }

    pub fn is_strict(&self) -> bool {
        match self {
            FiapTree::Trivial => true,
            FiapTree::Amalgam { rest, witness, .. } => witness.is_some() && rest.is_strict(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FiapTree::Trivial => 0,
            FiapTree::Amalgam { rest, .. } => 1 + rest.depth(),
        }
    }

    /// Generators of the leaves in order of attachment, then all relators.
    pub fn presentation(&self) -> GroupDescriptor {
        match self {
            FiapTree::Trivial => GroupDescriptor::trivial(),
            FiapTree::Amalgam { j0, rest, h_in_j0, h_in_rest, .. } => {
                let base = rest.presentation();
                let offset = base.rank() as u32;
                let shift: Vec<u32> = (0..j0.group.rank() as u32).map(|i| i + offset).collect();
                let mut generators = base.generators.clone();
                for g in &j0.group.generators {
                    let name = if generators.contains(g) { format!("{}_{}", j0.name, g) } else { g.clone() };
                    generators.push(name);
                }
                let mut relators = base.relators.clone();
                relators.extend(j0.group.relators.iter().map(|r| r.relabel(&shift)));
                for (h, img) in h_in_j0.iter().zip(h_in_rest) {
                    relators.push(h.relabel(&shift).mul(&img.inverse()));
                }
                let class_hint = if relators.is_empty() { ClassHint::Free } else { ClassHint::Generic };
                GroupDescriptor {
                    generators,
                    relators,
                    class_hint,
                    torsion_free: base.torsion_free && j0.group.torsion_free,
                }
            }
        }
    }

    /// The top node as `M_{j0} *_H M_{J ∖ {j0}}`.
    pub fn as_amalgam(&self, limits: &Limits) -> Option<Result<AmalgamatedProduct, ProductError>> {
        match self {
            FiapTree::Trivial => None,
            FiapTree::Amalgam { j0, rest, h_in_j0, h_in_rest, .. } => Some(AmalgamatedProduct::with_limits(
                j0.group.clone(),
                rest.presentation(),
                h_in_j0.clone(),
                h_in_rest.clone(),
                limits,
            )),
        }
    }

    /// Attach one more leaf; for infinite `J` the FIAP is the direct limit of
    /// the chain produced by repeated extension.
    pub fn extend(
        self,
        leaf: Leaf,
        h_in_leaf: Vec<FreeWord>,
        h_in_rest: Vec<FreeWord>,
        strict: bool,
        limits: &Limits,
    ) -> Result<FiapTree, ProductError> {
        if h_in_leaf.len() != h_in_rest.len() {
            return Err(ProductError::Malformed(format!("leaf {}: H images differ in number", leaf.name)));
        }
        let rest_rank = match &self {
            FiapTree::Trivial => 0,
            t => t.presentation().rank() as u32,
        };
        if h_in_rest.iter().any(|w| w.max_index().is_some_and(|m| m >= rest_rank)) {
            return Err(ProductError::Malformed(format!("leaf {}: image of H outside the tree", leaf.name)));
        }
        if rest_rank == 0 && h_in_leaf.iter().any(|w| !w.is_empty()) {
            return Err(ProductError::Malformed(format!(
                "leaf {}: nontrivial H cannot embed in the trivial group",
                leaf.name
            )));
        }
        let witness = strictness_witness(&leaf.group, &h_in_leaf, limits);
        if strict && witness.is_none() {
            return Err(ProductError::NotStrict(leaf.name.clone()));
        }
        Ok(FiapTree::Amalgam { j0: leaf, rest: Box::new(self), h_in_j0: h_in_leaf, h_in_rest, witness })
    }
}

fn strictness_witness(g: &GroupDescriptor, h: &[FreeWord], limits: &Limits) -> Option<FreeWord> {
    let oracle = default_oracle(g, h, limits);
    (0..g.rank() as u32).map(FreeWord::gen).find(|w| oracle.contains(w) == Decision::No)
}

/// Build `M_J` from the leaves following `plan` in order; each step attaches
/// `leaves[step.leaf]` to the tree built so far.
pub fn fiap_build(
    leaves: &[Leaf],
    plan: &[AmalgamationStep],
    strict: bool,
    limits: &Limits,
) -> Result<FiapTree, ProductError> {
    let mut used = vec![false; leaves.len()];
    let mut tree = FiapTree::Trivial;
    for step in plan {
        let leaf = leaves.get(step.leaf).ok_or_else(|| ProductError::Malformed(format!("no leaf {}", step.leaf)))?;
        if std::mem::replace(&mut used[step.leaf], true) {
            return Err(ProductError::Malformed(format!("leaf {} attached twice", leaf.name)));
        }
        tree = tree.extend(leaf.clone(), step.h_in_leaf.clone(), step.h_in_rest.clone(), strict, limits)?;
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(ProductError::Malformed(format!("leaf {} missing from the plan", leaves[i].name)));
    }
    Ok(tree)
}
