//! Reduced words in free products of groups with rewriting engines.

use super::RewriteEngine;
use crate::truth::Equality;
use crate::words::{FreeWord, Gen};

/// Words over the concatenated generators of the factors, reduced syllable by syllable.
pub struct FreeProductReducer<'a> {
    /// Factor owning each generator, with the factor's first generator.
    owner: Vec<(usize, u32)>,
    engines: Vec<&'a RewriteEngine>,
}

impl<'a> FreeProductReducer<'a> {
    pub fn new(engines: Vec<&'a RewriteEngine>) -> Self {
        let mut owner = Vec::new();
        let mut off = 0u32;
        for (f, e) in engines.iter().enumerate() {
            owner.extend((0..e.generators()).map(|_| (f, off)));
            off += e.generators() as u32;
        }
        FreeProductReducer { owner, engines }
    }

    pub fn rank(&self) -> u32 {
        self.owner.len() as u32
    }

    /// Reduced form, or `None` if some syllable cannot be decided trivial or not.
    pub fn reduce(&self, w: &FreeWord) -> Option<FreeWord> {
        let mut stack: Vec<(usize, u32, FreeWord)> = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let (f, off) = self.owner[letters[i].index as usize];
            let mut j = i;
            while j < letters.len() && self.owner[letters[j].index as usize].0 == f {
                j += 1;
            }
            let mut syl = FreeWord::new(letters[i..j].iter().map(|g| Gen::new(g.index - off, g.inverse)));
            i = j;
            if stack.last().is_some_and(|s| s.0 == f) {
                syl = stack.pop().unwrap().2.mul(&syl);
            }
            match self.engines[f].is_trivial(&syl) {
                Equality::Equal => {}
                Equality::Distinct => stack.push((f, off, self.engines[f].normal_form(&syl))),
                Equality::Unknown => return None,
            }
        }
        Some(FreeWord::new(stack.into_iter().flat_map(|(_, off, s)| {
            s.letters().iter().map(move |g| Gen::new(g.index + off, g.inverse)).collect::<Vec<_>>()
        })))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    /// Every reduced word up to this length was visited.
    pub depth: usize,
    /// The visitor asked to stop.
    pub stopped: bool,
    /// Some word could not be reduced.
    pub undecided: bool,
}

/// Visits the nonempty reduced words of the free product layer by layer, up to
/// `max_depth` letters or until `budget` words have been generated.
pub fn reduced_elements(
    reducer: &FreeProductReducer,
    max_depth: usize,
    budget: usize,
    visit: &mut dyn FnMut(&FreeWord) -> bool,
) -> Enumeration {
    let mut out = Enumeration { depth: 0, stopped: false, undecided: false };
    let mut layer = vec![FreeWord::empty()];
    let mut spent = 0usize;
    for len in 1..=max_depth {
        let mut next = Vec::new();
        for w in &layer {
            for code in 0..2 * reducer.rank() {
                let g = Gen::from_code(code);
                if w.letters().last() == Some(&g.inv()) {
                    continue;
                }
                spent += 1;
                if spent > budget {
                    return out;
                }
                let word = w.mul(&FreeWord::new([g]));
                match reducer.reduce(&word) {
                    Some(red) if red == word => {
                        if !visit(&word) {
                            out.stopped = true;
                            return out;
                        }
                        next.push(word);
                    }
                    Some(_) => {}
                    None => out.undecided = true,
                }
            }
        }
        out.depth = len;
        layer = next;
    }
    out
}
