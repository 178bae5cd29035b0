//! Exact word arithmetic in free groups and in free products `G * F(x_1, ..., x_n)`.
//!
//! Everything here is syntactic: coefficient letters are generators of `G` and
//! cancel only against their own inverses. Equality inside `G` is the business
//! of [`crate::rewriting`].

use crate::truth::Equality;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("undeclared generator `{name}` at column {column}")]
    UndeclaredGenerator { name: String, column: usize },
    #[error("generator index {0} is outside the declared alphabet")]
    IndexOutOfRange(u32),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("coefficient equality undecided within limits")]
    OracleUnknown,
}

/// A generator or its inverse. Orders by index, then letter before inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gen {
    pub index: u32,
    pub inverse: bool,
}

impl Gen {
    pub const fn new(index: u32, inverse: bool) -> Self {
        Gen { index, inverse }
    }

    pub const fn pos(index: u32) -> Self {
        Gen { index, inverse: false }
    }

    pub fn inv(self) -> Self {
        Gen { index: self.index, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Dense code `2 * index + inverse`, used by the rewriting engine.
    pub fn code(self) -> u32 {
        2 * self.index + self.inverse as u32
    }

    pub fn from_code(code: u32) -> Self {
        Gen { index: code / 2, inverse: code % 2 == 1 }
    }
}

fn free_reduce_in_place<T: Copy + PartialEq>(letters: &[T], inv: impl Fn(T) -> T) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last().is_some_and(|&last| last == inv(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A freely reduced word in a free group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FreeWord(Vec<Gen>);

impl FreeWord {
    pub fn new(letters: impl IntoIterator<Item = Gen>) -> Self {
        let raw: Vec<Gen> = letters.into_iter().collect();
        FreeWord(free_reduce_in_place(&raw, Gen::inv))
    }

    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn gen(index: u32) -> Self {
        FreeWord(vec![Gen::pos(index)])
    }

    /// Word from signed exponents: `(i, e)` means generator `i` to the power `e`.
    pub fn from_powers(powers: &[(u32, i64)]) -> Self {
        let mut letters = Vec::new();
        for &(i, e) in powers {
            let g = Gen::new(i, e < 0);
            for _ in 0..e.unsigned_abs() {
                letters.push(g);
            }
        }
        FreeWord::new(letters)
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|g| g.inv()).collect())
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `c^{-1} w c`.
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.inverse().mul(self).mul(c)
    }

    pub fn exponent_sum(&self, index: u32) -> i64 {
        self.0.iter().filter(|g| g.index == index).map(|g| g.exponent()).sum()
    }

    /// Splits `w = c · core · c^{-1}` with `core` cyclically reduced.
    pub fn cyclic_split(&self) -> (FreeWord, FreeWord) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inv() {
            k += 1;
        }
        (FreeWord(self.0[..k].to_vec()), FreeWord(self.0[k..n - k].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inv()
    }

    /// Shortlex comparison: length first, then lexicographic by generator order.
    pub fn shortlex_cmp(&self, other: &FreeWord) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.iter().map(|g| g.index).max()
    }

    /// Renames generator `i` to `map[i]`.
    pub fn relabel(&self, map: &[u32]) -> FreeWord {
        FreeWord::new(self.0.iter().map(|g| Gen::new(map[g.index as usize], g.inverse)))
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut out = Vec::new();
        for g in &self.0 {
            let img = &images[g.index as usize];
            if g.inverse {
                out.extend(img.inverse().0);
            } else {
                out.extend(img.0.iter().copied());
            }
        }
        FreeWord::new(out)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayGens { letters: &self.0, names }
    }
}

struct DisplayGens<'a> {
    letters: &'a [Gen],
    names: &'a [String],
}

impl fmt::Display for DisplayGens<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let g = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == g {
                j += 1;
            }
            let e = (j - i) as i64 * g.exponent();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self.names.get(g.index as usize).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// A letter of `G * F(x_1..x_n)`. Coefficients sort before variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Coef(Gen),
    Var(Gen),
}

impl Letter {
    pub fn inv(self) -> Self {
        match self {
            Letter::Coef(g) => Letter::Coef(g.inv()),
            Letter::Var(g) => Letter::Var(g.inv()),
        }
    }

    pub fn is_var(self) -> bool {
        matches!(self, Letter::Var(_))
    }
}

/// Names of the coefficient generators and of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Alphabet {
    pub coefficients: Vec<String>,
    pub variables: Vec<String>,
}

impl Alphabet {
    pub fn new(coefficients: &[&str], variables: &[&str]) -> Self {
        Alphabet {
            coefficients: coefficients.iter().map(|s| s.to_string()).collect(),
            variables: variables.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn check(&self, l: Letter) -> Result<(), WordError> {
        let (g, bound) = match l {
            Letter::Coef(g) => (g, self.coefficients.len()),
            Letter::Var(g) => (g, self.variables.len()),
        };
        if (g.index as usize) < bound {
            Ok(())
        } else {
            Err(WordError::IndexOutOfRange(g.index))
        }
    }
}

/// One syllable `g_i t_i`: a coefficient word followed by a nonempty variable word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub coef: FreeWord,
    pub var: FreeWord,
}

/// A freely reduced word of `G * F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct RelativeWord {
    letters: Vec<Letter>,
}

impl RelativeWord {
    /// Free reduction of an arbitrary letter sequence, without alphabet checks.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let raw: Vec<Letter> = letters.into_iter().collect();
        RelativeWord { letters: free_reduce_in_place(&raw, Letter::inv) }
    }

    pub fn empty() -> Self {
        RelativeWord::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> RelativeWord {
        RelativeWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn mul(&self, other: &RelativeWord) -> RelativeWord {
        RelativeWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn from_coef(w: &FreeWord) -> Self {
        RelativeWord { letters: w.letters().iter().map(|&g| Letter::Coef(g)).collect() }
    }

    pub fn from_var(w: &FreeWord) -> Self {
        RelativeWord { letters: w.letters().iter().map(|&g| Letter::Var(g)).collect() }
    }

    pub fn has_coefficients(&self) -> bool {
        self.letters.iter().any(|l| !l.is_var())
    }

    /// Syllables `g_1 t_1 ... g_q t_q` followed by a trailing coefficient word.
    pub fn syllables(&self) -> (Vec<Syllable>, FreeWord) {
        let mut out = Vec::new();
        let mut coef = Vec::new();
        let mut var = Vec::new();
        for &l in &self.letters {
            match l {
                Letter::Coef(g) => {
                    if !var.is_empty() {
                        out.push(Syllable {
                            coef: FreeWord(std::mem::take(&mut coef)),
                            var: FreeWord(std::mem::take(&mut var)),
                        });
                    }
                    coef.push(g);
                }
                Letter::Var(g) => var.push(g),
            }
        }
        if !var.is_empty() {
            out.push(Syllable { coef: FreeWord(std::mem::take(&mut coef)), var: FreeWord(var) });
        }
        (out, FreeWord(coef))
    }

    /// Number of variable blocks.
    pub fn q(&self) -> usize {
        self.syllables().0.len()
    }

    pub fn from_syllables(syllables: &[Syllable], tail: &FreeWord) -> Self {
        let mut letters = Vec::new();
        for s in syllables {
            letters.extend(s.coef.letters().iter().map(|&g| Letter::Coef(g)));
            letters.extend(s.var.letters().iter().map(|&g| Letter::Var(g)));
        }
        letters.extend(tail.letters().iter().map(|&g| Letter::Coef(g)));
        RelativeWord::from_letters(letters)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        let n = self.letters.len();
        n < 2 || self.letters[0] != self.letters[n - 1].inv()
    }

    /// Left rotation by `k` letters.
    pub fn rotate(&self, k: usize) -> RelativeWord {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        RelativeWord { letters }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayLetters { letters: &self.letters, alphabet }
    }
}

/// Display of a raw letter sequence using the alphabet's names.
pub fn display_letters<'a>(letters: &'a [Letter], alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
    DisplayLetters { letters, alphabet }
}

struct DisplayLetters<'a> {
    letters: &'a [Letter],
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayLetters<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let (g, names) = match l {
                Letter::Coef(g) => (g, &self.alphabet.coefficients),
                Letter::Var(g) => (g, &self.alphabet.variables),
            };
            let e = (j - i) as i64 * g.exponent();
            if i > 0 {
                write!(f, " ")?;
            }
            let name = names.get(g.index as usize).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Free reduction of a raw letter sequence, checking it against the alphabet.
pub fn reduce(raw: &[Letter], alphabet: &Alphabet) -> Result<RelativeWord, WordError> {
    for &l in raw {
        alphabet.check(l)?;
    }
    Ok(RelativeWord::from_letters(raw.iter().copied()))
}

fn least_rotation(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut best = 0;
    for k in 1..n {
        let cand = letters[k..].iter().chain(letters[..k].iter());
        let cur = letters[best..].iter().chain(letters[..best].iter());
        if cand.cmp(cur) == Ordering::Less {
            best = k;
        }
    }
    best
}

/// A cyclically reduced word stored in its canonical (least) rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicWord {
    word: RelativeWord,
}

impl CyclicWord {
    /// Canonical form of a word that is already cyclically reduced.
    pub fn from_cyclically_reduced(w: &RelativeWord) -> Option<Self> {
        if !w.is_cyclically_reduced() {
            return None;
        }
        Some(CyclicWord { word: w.rotate(least_rotation(w.letters())) })
    }

    pub fn representative(&self) -> &RelativeWord {
        &self.word
    }

    /// The rotation `g_1 t_1 ... g_q t_q` ending with a variable block.
    /// Pure-coefficient words are returned unchanged.
    pub fn syllable_form(&self) -> RelativeWord {
        let letters = self.word.letters();
        match letters.iter().rposition(|l| l.is_var()) {
            Some(last_var) => self.word.rotate(last_var + 1),
            None => self.word.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Returns `(c, conjugator)` with `w = conjugator · c · conjugator^{-1}` after reduction.
pub fn cyclic_reduce(w: &RelativeWord) -> (CyclicWord, RelativeWord) {
    let l = w.letters();
    let n = l.len();
    let mut k = 0;
    while 2 * k + 1 < n && l[k] == l[n - 1 - k].inv() {
        k += 1;
    }
    let core = &l[k..n - k];
    let rot = least_rotation(core);
    let mut conj: Vec<Letter> = l[..k].to_vec();
    conj.extend_from_slice(&core[..rot]);
    let core = RelativeWord { letters: core.to_vec() };
    (CyclicWord { word: core.rotate(rot) }, RelativeWord::from_letters(conj))
}

/// Image of `w` under the retraction `G * F -> F` killing `G`.
pub fn erase_coefficients(w: &RelativeWord) -> FreeWord {
    FreeWord::new(w.letters().iter().filter_map(|l| match l {
        Letter::Var(g) => Some(*g),
        Letter::Coef(_) => None,
    }))
}

pub fn exponent_sum(w: &RelativeWord, variable: u32) -> i64 {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::Var(g) if g.index == variable => g.exponent(),
            _ => 0,
        })
        .sum()
}

/// Result of the proper-power test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProperPower {
    pub is_proper_power: bool,
    pub root: FreeWord,
    pub k: u32,
}

/// Decides whether `u = v^k` for some `k >= 2`, returning the root with maximal `k`.
/// The empty word counts (`1 = 1^2`).
pub fn is_proper_power(u: &FreeWord) -> ProperPower {
    if u.is_empty() {
        return ProperPower { is_proper_power: true, root: FreeWord::empty(), k: 2 };
    }
    let (conj, core) = u.cyclic_split();
    let n = core.len();
    let c = core.letters();
    for d in 1..n {
        if n % d != 0 {
            continue;
        }
        if (d..n).all(|i| c[i] == c[i - d]) {
            let period = FreeWord(c[..d].to_vec());
            let root = conj.mul(&period).mul(&conj.inverse());
            return ProperPower { is_proper_power: true, root, k: (n / d) as u32 };
        }
    }
    ProperPower { is_proper_power: false, root: u.clone(), k: 1 }
}

/// Primitive root of a nonempty free-group element, normalised so that `r` and
/// `r^{-1}` give the same answer. Two nontrivial elements commute iff their
/// normalised roots coincide.
pub fn normalised_root(u: &FreeWord) -> Option<FreeWord> {
    if u.is_empty() {
        return None;
    }
    let root = is_proper_power(u).root;
    let inv = root.inverse();
    Some(if inv.shortlex_cmp(&root) == Ordering::Less { inv } else { root })
}

/// Conjugacy of cyclically reduced words of `G * F` by rotation.
///
/// With no oracle coefficient syllables are compared letter by letter. With an
/// oracle, syllables `g_i` are compared by it and variable blocks exactly.
pub fn conjugate_in_free_product(
    u: &CyclicWord,
    v: &CyclicWord,
    oracle: Option<&dyn Fn(&FreeWord, &FreeWord) -> Equality>,
) -> Result<bool, WordError> {
    if u == v {
        return Ok(true);
    }
    let Some(eq) = oracle else {
        return Ok(false);
    };
    let (su, tu) = u.syllable_form().syllables();
    let (sv, tv) = v.syllable_form().syllables();
    if su.is_empty() || sv.is_empty() {
        if !su.is_empty() || !sv.is_empty() {
            return Ok(false);
        }
        return match eq(&tu, &tv) {
            Equality::Equal => Ok(true),
            // conjugacy inside G itself is not decided here
            _ => Err(WordError::OracleUnknown),
        };
    }
    if su.len() != sv.len() {
        return Ok(false);
    }
    let q = su.len();
    let mut unknown = false;
    'rot: for r in 0..q {
        let mut rot_unknown = false;
        for i in 0..q {
            let a = &su[i];
            let b = &sv[(i + r) % q];
            if a.var != b.var {
                continue 'rot;
            }
            match eq(&a.coef, &b.coef) {
                Equality::Equal => {}
                Equality::Distinct => continue 'rot,
                Equality::Unknown => rot_unknown = true,
            }
        }
        if !rot_unknown {
            return Ok(true);
        }
        unknown = true;
    }
    if unknown {
        Err(WordError::OracleUnknown)
    } else {
        Ok(false)
    }
}

// ---------------------------------------------------------------------------
// Text grammar: identifiers, `name^k`, juxtaposition by whitespace or `*`, `1`.

#[derive(Debug)]
struct Token {
    name: String,
    power: i64,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, WordError> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let mut saw_one = false;
    let err = |column: usize, message: &str| WordError::Parse { column, message: message.to_string() };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' {
            i += 1;
            continue;
        }
        if c == '1' {
            let next_ok = i + 1 >= chars.len() || !chars[i + 1].is_ascii_alphanumeric();
            if next_ok {
                saw_one = true;
                i += 1;
                continue;
            }
        }
        if !c.is_ascii_alphabetic() {
            return Err(err(i + 1, &format!("unexpected character `{c}`")));
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
            i += 1;
        }
        let name: String = chars[start..i].iter().collect();
        let mut power = 1i64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let num_start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[num_start..i].iter().collect();
            power = s.parse().map_err(|_| err(num_start + 1, "expected integer exponent"))?;
        }
        out.push(Token { name, power, column: start + 1 });
    }
    if saw_one && !out.is_empty() {
        return Err(err(1, "`1` is only allowed as the empty word"));
    }
    Ok(out)
}

fn push_power<T: Copy>(out: &mut Vec<T>, pos: T, neg: T, power: i64) {
    let l = if power < 0 { neg } else { pos };
    for _ in 0..power.unsigned_abs() {
        out.push(l);
    }
}

/// Parses a word of `G * F` over the given alphabet and reduces it.
pub fn parse_relative_word(text: &str, alphabet: &Alphabet) -> Result<RelativeWord, WordError> {
    let mut letters = Vec::new();
    for t in tokenize(text)? {
        let coef = alphabet.coefficients.iter().position(|n| *n == t.name);
        let var = alphabet.variables.iter().position(|n| *n == t.name);
        let letter = match (coef, var) {
            (Some(i), None) => Letter::Coef(Gen::pos(i as u32)),
            (None, Some(i)) => Letter::Var(Gen::pos(i as u32)),
            (Some(_), Some(_)) => {
                return Err(WordError::Parse {
                    column: t.column,
                    message: format!("`{}` is both a coefficient and a variable", t.name),
                })
            }
            (None, None) => return Err(WordError::UndeclaredGenerator { name: t.name, column: t.column }),
        };
        push_power(&mut letters, letter, letter.inv(), t.power);
    }
    Ok(RelativeWord::from_letters(letters))
}

/// Parses a word of a free group on the given generator names.
pub fn parse_free_word(text: &str, names: &[String]) -> Result<FreeWord, WordError> {
    let mut letters = Vec::new();
    for t in tokenize(text)? {
        let i = names
            .iter()
            .position(|n| *n == t.name)
            .ok_or(WordError::UndeclaredGenerator { name: t.name.clone(), column: t.column })?;
        let g = Gen::pos(i as u32);
        push_power(&mut letters, g, g.inv(), t.power);
    }
    Ok(FreeWord::new(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["g", "h", "k"], &["x", "y", "t"])
    }

    fn w(s: &str) -> RelativeWord {
        parse_relative_word(s, &ab()).unwrap()
    }

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reduce_cancels_variables_and_merges_coefficients() {
        let r = w("g x x^-1 h");
        assert_eq!(r, w("g h"));
        assert_eq!(r.q(), 0);
        assert!(w("1").is_empty());
        let r = w("g x h y^-1");
        assert_eq!(r.len(), 4);
        assert_eq!(r.q(), 2);
    }

    #[test]
    fn reduce_rejects_out_of_range() {
        let raw = [Letter::Var(Gen::pos(7))];
        assert!(matches!(reduce(&raw, &ab()), Err(WordError::IndexOutOfRange(7))));
        assert!(matches!(parse_relative_word("g z", &ab()), Err(WordError::UndeclaredGenerator { column: 3, .. })));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (c, conj) = cyclic_reduce(&w("x g x^-1"));
        assert_eq!(c.representative(), &w("g"));
        assert_eq!(conj, w("x"));

        let (c, conj) = cyclic_reduce(&w("g x h y"));
        assert_eq!(c.representative(), &w("g x h y"));
        assert!(conj.is_empty());

        let input = w("y^-1 g x y");
        let (c, conj) = cyclic_reduce(&input);
        assert_eq!(c.representative(), &w("g x"));
        assert_eq!(conj, w("y^-1"));
        let back = conj.mul(c.representative()).mul(&conj.inverse());
        assert_eq!(back, input);
    }

    #[test]
    fn canonical_rotation_is_rotation_invariant() {
        let a = cyclic_reduce(&w("h x g y")).0;
        let b = cyclic_reduce(&w("g y h x")).0;
        assert_eq!(a, b);
        assert_eq!(a.syllable_form(), w("g y h x"));
    }

    #[test]
    fn erase_examples() {
        let names = names(&["x", "y", "t"]);
        assert_eq!(erase_coefficients(&w("g x h y^-1")), parse_free_word("x y^-1", &names).unwrap());
        assert!(erase_coefficients(&w("g x h x^-1")).is_empty());
        assert_eq!(erase_coefficients(&w("t g t g^-1 t^-1 g^-1")), parse_free_word("t", &names).unwrap());
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(exponent_sum(&w("g t h"), 2), 1);
        assert_eq!(exponent_sum(&w("g x h x^-1"), 0), 0);
        assert_eq!(exponent_sum(&w("t g t g^-1 t^-1 g^-1"), 2), 1);
    }

    #[test]
    fn proper_power_examples() {
        let n = names(&["x", "y"]);
        let e = is_proper_power(&FreeWord::empty());
        assert!(e.is_proper_power && e.k == 2 && e.root.is_empty());

        let c = parse_free_word("x y x^-1 y^-1", &n).unwrap();
        let r = is_proper_power(&c);
        assert!(!r.is_proper_power);
        assert_eq!(r.k, 1);
        assert_eq!(r.root, c);

        let u = parse_free_word("y x y x y y^-1", &n).unwrap();
        let r = is_proper_power(&u);
        assert!(r.is_proper_power);
        assert_eq!(r.k, 2);
        assert_eq!(r.root.pow(2), u);

        // genuine conjugate of a cube
        let u = parse_free_word("y x x x y^-1", &n).unwrap();
        let r = is_proper_power(&u);
        assert_eq!((r.is_proper_power, r.k), (true, 3));
        assert_eq!(r.root, parse_free_word("y x y^-1", &n).unwrap());
    }

    #[test]
    fn conjugacy_examples() {
        let cw = |s: &str| cyclic_reduce(&w(s)).0;
        assert!(conjugate_in_free_product(&cw("g x h y"), &cw("h y g x"), None).unwrap());
        assert!(!conjugate_in_free_product(&cw("g x"), &cw("g y"), None).unwrap());
        assert!(conjugate_in_free_product(&cw("x y"), &cw("y x"), None).unwrap());
    }

    #[test]
    fn conjugacy_with_oracle() {
        let cw = |s: &str| cyclic_reduce(&w(s)).0;
        // oracle: g and h are equal in the coefficient group, k is distinct from both
        let same = |a: &FreeWord, b: &FreeWord| {
            let img = |f: &FreeWord| {
                f.letters().iter().map(|g| if g.index == 2 { 100 } else { 1 } * g.exponent()).sum::<i64>()
            };
            Equality::from_bool(img(a) == img(b))
        };
        assert!(conjugate_in_free_product(&cw("g x k y"), &cw("k y h x"), Some(&same)).unwrap());
        assert!(!conjugate_in_free_product(&cw("g x k y"), &cw("k x h y"), Some(&same)).unwrap());
        let unknown = |_: &FreeWord, _: &FreeWord| Equality::Unknown;
        assert_eq!(conjugate_in_free_product(&cw("g x"), &cw("h x"), Some(&unknown)), Err(WordError::OracleUnknown));
    }

    #[test]
    fn display_round_trip() {
        let a = ab();
        let x = w("g^2 x y^-3 h");
        let s = x.display(&a).to_string();
        assert_eq!(s, "g^2 x y^-3 h");
        assert_eq!(parse_relative_word(&s, &a).unwrap(), x);
        assert_eq!(RelativeWord::empty().display(&a).to_string(), "1");
    }

    #[test]
    fn parse_errors_carry_columns() {
        assert!(matches!(parse_relative_word("g ^2", &ab()), Err(WordError::Parse { column: 3, .. })));
        assert!(matches!(parse_relative_word("g x^a", &ab()), Err(WordError::Parse { .. })));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn letter() -> impl Strategy<Value = Letter> {
        (0u32..2, any::<bool>(), any::<bool>()).prop_map(|(i, inv, var)| {
            let g = Gen::new(i, inv);
            if var {
                Letter::Var(g)
            } else {
                Letter::Coef(g)
            }
        })
    }

    fn raw() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(letter(), 0..14)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(s in raw()) {
            let r = RelativeWord::from_letters(s);
            prop_assert_eq!(RelativeWord::from_letters(r.letters().to_vec()), r);
        }

        #[test]
        fn word_times_inverse_is_empty(s in raw()) {
            let r = RelativeWord::from_letters(s);
            prop_assert!(r.mul(&r.inverse()).is_empty());
        }

        #[test]
        fn erase_is_a_homomorphism(a in raw(), b in raw()) {
            let a = RelativeWord::from_letters(a);
            let b = RelativeWord::from_letters(b);
            prop_assert_eq!(erase_coefficients(&a.mul(&b)), erase_coefficients(&a).mul(&erase_coefficients(&b)));
        }

        #[test]
        fn exponent_sum_conjugation_invariant(a in raw(), c in raw(), k in 0usize..14) {
            let a = RelativeWord::from_letters(a);
            let c = RelativeWord::from_letters(c);
            let conj = c.inverse().mul(&a).mul(&c);
            let rot = a.rotate(k);
            for v in 0..2 {
                prop_assert_eq!(exponent_sum(&a, v), exponent_sum(&conj, v));
                prop_assert_eq!(exponent_sum(&a, v), exponent_sum(&rot, v));
            }
        }

        #[test]
        fn cyclic_reduce_reassembles(a in raw()) {
            let a = RelativeWord::from_letters(a);
            let (c, conj) = cyclic_reduce(&a);
            prop_assert!(c.representative().is_cyclically_reduced());
            prop_assert_eq!(conj.mul(c.representative()).mul(&conj.inverse()), a);
        }

        #[test]
        fn conjugacy_is_equivalence(a in raw(), k in 0usize..14, m in 0usize..14, b in raw()) {
            let a = cyclic_reduce(&RelativeWord::from_letters(a)).0;
            let b = cyclic_reduce(&RelativeWord::from_letters(b)).0;
            let a1 = CyclicWord::from_cyclically_reduced(&a.representative().rotate(k)).unwrap();
            let a2 = CyclicWord::from_cyclically_reduced(&a.representative().rotate(m)).unwrap();
            prop_assert!(conjugate_in_free_product(&a, &a, None).unwrap());
            prop_assert!(conjugate_in_free_product(&a1, &a2, None).unwrap());
            let ab = conjugate_in_free_product(&a, &b, None).unwrap();
            prop_assert_eq!(ab, conjugate_in_free_product(&b, &a, None).unwrap());
        }
    }
}
