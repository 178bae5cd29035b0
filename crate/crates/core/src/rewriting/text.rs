//! `key: value` text files: the presentation format and the job files built on it.
//!
//! ```text
//! generators: x, y
//! relators: x y x^-1 y^-1
//! class: abelian
//! torsion_free: true
//! ```

use super::{ClassHint, GroupDescriptor};
use crate::words::{parse_free_word, parse_relative_word, Alphabet, FreeWord, RelativeWord, WordError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct TextError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    /// Column of the first character of `value`.
    pub column: usize,
}

impl Entry {
    pub fn error(&self, offset: usize, message: impl Into<String>) -> TextError {
        TextError { line: self.line, column: self.column + offset, message: message.into() }
    }

    /// Comma-separated items with their offsets inside the value.
    pub fn items(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        for part in self.value.split(',') {
            let lead = part.len() - part.trim_start().len();
            if !part.trim().is_empty() {
                out.push((part.trim().to_string(), start + lead));
            }
            start += part.len() + 1;
        }
        out
    }

    fn word_error(&self, offset: usize, e: WordError) -> TextError {
        match e {
            WordError::Parse { column, .. } | WordError::UndeclaredGenerator { column, .. } => {
                self.error(offset + column - 1, e.to_string())
            }
            _ => self.error(offset, e.to_string()),
        }
    }

    pub fn words(&self, names: &[String]) -> Result<Vec<FreeWord>, TextError> {
        self.items()
            .into_iter()
            .map(|(s, off)| parse_free_word(&s, names).map_err(|e| self.word_error(off, e)))
            .collect()
    }

    pub fn relative(&self, alphabet: &Alphabet) -> Result<RelativeWord, TextError> {
        let lead = self.value.len() - self.value.trim_start().len();
        parse_relative_word(self.value.trim(), alphabet).map_err(|e| self.word_error(lead, e))
    }

    pub fn boolean(&self) -> Result<bool, TextError> {
        match self.value.trim() {
            "true" | "yes" => Ok(true),
            "false" | "no" => Ok(false),
            other => Err(self.error(0, format!("expected true or false, found `{other}`"))),
        }
    }

    pub fn names(&self) -> Result<Vec<String>, TextError> {
        let items = self.items();
        for (s, off) in &items {
            let ok = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(self.error(*off, format!("`{s}` is not an identifier")));
            }
        }
        Ok(items.into_iter().map(|(s, _)| s).collect())
    }
}

/// Parsed `key: value` lines. `#` starts a comment; blank lines are skipped.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: Vec<Entry>,
    lines: usize,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, TextError> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut lines = 0;
        for (i, raw) in text.lines().enumerate() {
            lines = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(colon) = content.find(':') else {
                let column = content.len() - content.trim_start().len() + 1;
                return Err(TextError { line: i + 1, column, message: "expected `key: value`".into() });
            };
            let key = content[..colon].trim().to_string();
            if entries.iter().any(|e| e.key == key) {
                return Err(TextError { line: i + 1, column: 1, message: format!("duplicate key `{key}`") });
            }
            let rest = &content[colon + 1..];
            let lead = rest.len() - rest.trim_start().len();
            entries.push(Entry { key, value: rest.trim().to_string(), line: i + 1, column: colon + 2 + lead });
        }
        Ok(KeyValues { entries, lines })
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, TextError> {
        self.get(key).ok_or_else(|| TextError {
            line: self.lines + 1,
            column: 1,
            message: format!("missing key `{key}`"),
        })
    }

    pub fn only(&self, allowed: &[&str]) -> Result<(), TextError> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(TextError { line: e.line, column: 1, message: format!("unknown key `{}`", e.key) }),
            None => Ok(()),
        }
    }

    /// A presentation under `{prefix}generators`, `{prefix}relators`, `{prefix}class`, `{prefix}torsion_free`.
    pub fn presentation(&self, prefix: &str) -> Result<GroupDescriptor, TextError> {
        let generators = self.require(&format!("{prefix}generators"))?.names()?;
        let relators = match self.get(&format!("{prefix}relators")) {
            Some(e) => e.words(&generators)?,
            None => Vec::new(),
        };
        let class_hint = match self.get(&format!("{prefix}class")) {
            None if relators.is_empty() => ClassHint::Free,
            None => ClassHint::Generic,
            Some(e) => match e.value.trim() {
                "generic" => ClassHint::Generic,
                "free" => ClassHint::Free,
                "cyclic" => ClassHint::Cyclic,
                "abelian" | "fg_abelian" => ClassHint::FgAbelian,
                other => return Err(e.error(0, format!("unknown class `{other}`"))),
            },
        };
        let torsion_free = match self.get(&format!("{prefix}torsion_free")) {
            Some(e) => e.boolean()?,
            None => false,
        };
        Ok(GroupDescriptor { generators, relators, class_hint, torsion_free })
    }
}

pub fn parse_presentation(text: &str) -> Result<GroupDescriptor, TextError> {
    let kv = KeyValues::parse(text)?;
    kv.only(&["generators", "relators", "class", "torsion_free"])?;
    kv.presentation("")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_z2_presentation() {
        let d = parse_presentation("generators: x, y\nrelators: x y x^-1 y^-1\nclass: abelian\ntorsion_free: true\n")
            .unwrap();
        assert_eq!(d.generators, vec!["x", "y"]);
        assert_eq!(d.relators.len(), 1);
        assert_eq!(d.class_hint, ClassHint::FgAbelian);
        assert!(d.torsion_free);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_presentation("generators: x, y\nrelators: x z\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 13));
        let e = parse_presentation("generators: x\nnonsense\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = parse_presentation("generators: x\nclass: weird\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn missing_relators_means_free() {
        let d = parse_presentation("generators: a, b").unwrap();
        assert_eq!(d.class_hint, ClassHint::Free);
        assert!(!d.torsion_free);
    }
}
