//! Three-valued answers and claim provenance shared by every module.

use serde::{Serialize, Serializer};
use std::fmt;

/// Outcome of an equality query in a presented group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Equality {
    Equal,
    Distinct,
    Unknown,
}

impl Equality {
    pub fn is_equal(self) -> bool {
        self == Equality::Equal
    }

    pub fn is_distinct(self) -> bool {
        self == Equality::Distinct
    }

    pub fn is_unknown(self) -> bool {
        self == Equality::Unknown
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Equality::Equal
        } else {
            Equality::Distinct
        }
    }
}

/// A yes/no question that may be undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn not(self) -> Self {
        match self {
            Decision::Yes => Decision::No,
            Decision::No => Decision::Yes,
            Decision::Unknown => Decision::Unknown,
        }
    }
}

/// Where a reported claim comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Follows from a proven theorem once its hypotheses hold.
    Theorem,
    /// Verified by an exact computation.
    Exact,
    /// Searched exhaustively up to the given word length without a counterexample.
    CheckedAtDepth(usize),
    Unknown,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Theorem => write!(f, "THEOREM"),
            Provenance::Exact => write!(f, "EXACT"),
            Provenance::CheckedAtDepth(d) => write!(f, "CHECKED_AT_DEPTH_{d}"),
            Provenance::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
