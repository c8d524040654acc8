//! Validation reports shared by every law checker in the crate.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// One failed law together with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation<L> {
    pub law: L,
    pub witness: String,
}

/// Outcome of a law check: `ok` iff no violations were recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report<L> {
    pub violations: Vec<Violation<L>>,
}

impl<L> Default for Report<L> {
    fn default() -> Self {
        Report {
            violations: Vec::new(),
        }
    }
}

impl<L> Report<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, law: L, witness: impl Into<String>) {
        self.violations.push(Violation {
            law,
            witness: witness.into(),
        });
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn extend(&mut self, other: Report<L>) {
        self.violations.extend(other.violations);
    }
}

impl<L: PartialEq> Report<L> {
    /// Whether some violation names `law`.
    pub fn cites(&self, law: &L) -> bool {
        self.violations.iter().any(|v| &v.law == law)
    }

    pub fn witnesses_for<'a>(&'a self, law: &'a L) -> impl Iterator<Item = &'a str> + 'a {
        self.violations
            .iter()
            .filter(move |v| &v.law == law)
            .map(|v| v.witness.as_str())
    }
}

impl<L: Ord + Clone> Report<L> {
    /// Distinct laws cited, in their natural order.
    pub fn laws(&self) -> BTreeSet<L> {
        self.violations.iter().map(|v| v.law.clone()).collect()
    }
}

impl<L: fmt::Display> fmt::Display for Report<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.law, v.witness)?;
        }
        Ok(())
    }
}
