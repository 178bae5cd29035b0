//! Job files: a presentation of `G` plus the variables and the relator.
//!
//! ```text
//! generators: a, b
//! relators: a b a^-1 b^-1
//! class: abelian
//! torsion_free: true
//! variables: x, y
//! relator: a x b y
//! ```

use relpres::analysis::{declare_witness, generalised_unimodular_free_t_named, DeclaredWitness};
use relpres::centre::TGroup;
use relpres::rewriting::text::{KeyValues, TextError};
use relpres::rewriting::{ClassHint, GroupDescriptor, Limits};
use relpres::words::{parse_relative_word, Alphabet, RelativeWord};

const BASE: [&str; 6] = ["generators", "relators", "class", "torsion_free", "variables", "relator"];
const T_KEYS: [&str; 9] = [
    "t_generators",
    "t_relators",
    "t_class",
    "t_torsion_free",
    "t_witness",
    "r_generators",
    "s_trivial",
    "s_free",
    "strong_up",
];

pub struct Job {
    pub g: GroupDescriptor,
    pub alphabet: Alphabet,
    pub relators: Vec<RelativeWord>,
    kv: KeyValues,
}

impl Job {
    pub fn parse(text: &str, extra: bool) -> Result<Job, TextError> {
        let kv = KeyValues::parse(text)?;
        let allowed: Vec<&str> = if extra { BASE.iter().chain(&T_KEYS).copied().collect() } else { BASE.to_vec() };
        kv.only(&allowed)?;
        let g = kv.presentation("")?;
        let variables = match kv.get("variables") {
            Some(e) => e.names()?,
            None => Vec::new(),
        };
        let alphabet = Alphabet { coefficients: g.generators.clone(), variables };
        let relators = match kv.get("relator") {
            Some(e) => e
                .items()
                .into_iter()
                .map(|(s, off)| parse_relative_word(&s, &alphabet).map_err(|err| e.error(off, err.to_string())))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        Ok(Job { g, alphabet, relators, kv })
    }

    /// The single relator of a one-relator job.
    pub fn relator(&self) -> Result<&RelativeWord, TextError> {
        let e = self.kv.require("relator")?;
        match self.relators.as_slice() {
            [w] => Ok(w),
            _ => Err(e.error(0, "expected exactly one relator")),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, TextError> {
        self.kv.get(key).map(|e| e.boolean()).unwrap_or(Ok(false))
    }

    /// `T` as described by the `t_*` keys; free on the variables when absent.
    pub fn t_group(&self, w: &RelativeWord, limits: &Limits) -> Result<TGroup, String> {
        if self.kv.get("t_generators").is_none() {
            return Ok(TGroup::Free);
        }
        let t = self.kv.presentation("t_").map_err(|e| e.to_string())?;
        if t.generators != self.alphabet.variables {
            return Err("t_generators must list the variables in order".into());
        }
        let plain = t.class_hint == ClassHint::Free && t.relators.is_empty();
        if plain && self.kv.get("t_witness").is_none() && self.kv.get("r_generators").is_none() {
            return generalised_unimodular_free_t_named(w, &t.generators)
                .map(TGroup::Witnessed)
                .map_err(|e| format!("hypothesis unverified: {e}"));
        }
        let names = &t.generators;
        let witness = match self.kv.get("t_witness") {
            Some(e) => e.words(names).map_err(|e| e.to_string())?.into_iter().next().unwrap_or_default(),
            None => relpres::words::erase_coefficients(w),
        };
        let r_normal_generators = match self.kv.get("r_generators") {
            Some(e) => e.words(names).map_err(|e| e.to_string())?,
            None => vec![witness.clone()],
        };
        let declared = DeclaredWitness {
            t_group: t.clone(),
            t: witness,
            r_normal_generators,
            quotient: None,
            s_trivial: self.flag("s_trivial").map_err(|e| e.to_string())?,
            s_free_declared: self.flag("s_free").map_err(|e| e.to_string())?,
            strong_up_declared: self.flag("strong_up").map_err(|e| e.to_string())?,
        };
        declare_witness(&declared, limits).map(TGroup::Witnessed).map_err(|e| format!("hypothesis unverified: {e}"))
    }
}
