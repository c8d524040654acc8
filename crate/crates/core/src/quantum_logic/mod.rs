//! Finite quantum event algebras.
//!
//! An event algebra is a finite poset with a top element `1` and an
//! orthocomplementation `∗`, satisfying exactly the axioms below (there is no
//! axiom `[f]`; orthomodularity is not assumed beyond what these imply):
//!
//! | axiom | statement |
//! |-------|-----------|
//! | `[a]` | `l ≤ 1` |
//! | `[b]` | `l∗∗ = l` |
//! | `[c]` | `l ∨ l∗ = 1` |
//! | `[d]` | `l ≤ m ⇒ m∗ ≤ l∗` |
//! | `[e]` | `l ⊥ m ⇒ l ∨ m` exists |
//! | `[g]` | `l ∨ m = 1, l ∧ m = 0 ⇒ l = m∗` |
//!
//! with `0 := 1∗` and `l ⊥ m :⇔ l ≤ m∗`. Joins and meets are least upper and
//! greatest lower bounds in the finite order; a hypothesis that mentions a
//! bound which does not exist is treated as unsatisfied.
//!
//! The joins in `[c]` and `[g]` are orthogonal joins `⊕` (the partial
//! operation guaranteed by `[e]`). For `[c]` this changes nothing when `[b]`
//! holds, since then `l ⊥ l∗`, so `[c]` is checked with the plain join to keep
//! it independent of `[b]`. For `[g]` it matters: with arbitrary joins the axiom
//! says complements are unique, which no finite non-Boolean lattice
//! satisfies (in `MO2`, `a ∨ b = 1` and `a ∧ b = 0` with `a ≠ b∗`). Read
//! with `⊕`, `[g]` is the orthomodular law.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::report::Report;

pub(crate) mod blocks;
pub mod catalog;
mod hom;
mod iso;
mod pasting;
mod subspace;

pub use blocks::{
    is_boolean, is_boolean_subalgebra, maximal_boolean_subalgebras,
    maximal_boolean_subalgebras_with_limit, subalgebra_closure,
};
pub use hom::{
    enumerate_quantum_homs, validate_quantum_hom, QuantumHom, QuantumHomLaw, MAX_ENUMERATED_HOMS,
};
pub use iso::find_isomorphism;
pub use pasting::{paste_boolean_blocks, PastingSpec, MAX_PASTING_ATOMS, MAX_PASTING_BLOCKS};
pub use subspace::{subspace_event_algebra, subspace_event_algebra_with_limit, IntVector};

/// Index of an element of an [`OrthomodularPoset`].
pub type Event = usize;

/// Default bound on event-algebra sizes for closure and block searches.
pub const DEFAULT_MAX_ELEMENTS: usize = 60;
/// Ceiling that no override of [`DEFAULT_MAX_ELEMENTS`] may exceed.
pub const HARD_MAX_ELEMENTS: usize = 200;

/// Reads `BF_MAX_ELEMENTS`, falling back to [`DEFAULT_MAX_ELEMENTS`].
pub fn max_elements_from_env() -> Result<usize> {
    match std::env::var("BF_MAX_ELEMENTS") {
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
        Ok(raw) => {
            let value: usize = raw.trim().parse().map_err(|_| {
                Error::Parse(format!("BF_MAX_ELEMENTS must be an integer, got `{raw}`"))
            })?;
            if value > HARD_MAX_ELEMENTS {
                return Err(Error::bound("BF_MAX_ELEMENTS", value, HARD_MAX_ELEMENTS));
            }
            Ok(value)
        }
    }
}

/// The event-algebra laws, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmpAxiom {
    PartialOrder,
    A,
    B,
    C,
    D,
    E,
    G,
}

impl OmpAxiom {
    pub const ALL: [OmpAxiom; 7] = [
        OmpAxiom::PartialOrder,
        OmpAxiom::A,
        OmpAxiom::B,
        OmpAxiom::C,
        OmpAxiom::D,
        OmpAxiom::E,
        OmpAxiom::G,
    ];
}

impl fmt::Display for OmpAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmpAxiom::PartialOrder => "partial order",
            OmpAxiom::A => "[a]",
            OmpAxiom::B => "[b]",
            OmpAxiom::C => "[c]",
            OmpAxiom::D => "[d]",
            OmpAxiom::E => "[e]",
            OmpAxiom::G => "[g]",
        })
    }
}

impl Serialize for OmpAxiom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite quantum event algebra: labelled elements, an order relation,
/// an orthocomplement and a designated top.
///
/// Construction checks only structure (sizes, label uniqueness, `∗` a
/// bijection); the axioms are checked by [`validate_event_algebra`], so
/// deliberately broken algebras can be represented and diagnosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthomodularPoset {
    labels: Vec<String>,
    leq: Vec<bool>,
    ortho: Vec<Event>,
    top: Event,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl OrthomodularPoset {
    /// `leq` is the row-major `n × n` relation matrix: `leq[a * n + b]` iff `a ≤ b`.
    pub fn from_parts(
        labels: Vec<String>,
        leq: Vec<bool>,
        ortho: Vec<Event>,
        top: Event,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty("element list"));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if leq.len() != n * n {
            return Err(Error::structure(
                "event algebra",
                format!("order matrix has {} entries, expected {}", leq.len(), n * n),
            ));
        }
        if ortho.len() != n {
            return Err(Error::structure(
                "event algebra",
                format!("ortho has {} entries, expected {n}", ortho.len()),
            ));
        }
        let mut hit = vec![false; n];
        for (i, &o) in ortho.iter().enumerate() {
            if o >= n {
                return Err(Error::structure(
                    "event algebra",
                    format!("ortho({}) is out of range", labels[i]),
                ));
            }
            if std::mem::replace(&mut hit[o], true) {
                return Err(Error::structure(
                    "event algebra",
                    format!("ortho is not a bijection: `{}` is hit twice", labels[o]),
                ));
            }
        }
        if top >= n {
            return Err(Error::structure("event algebra", "top is out of range"));
        }
        let mut up = vec![BitSet::new(n); n];
        let mut down = vec![BitSet::new(n); n];
        for a in 0..n {
            for b in 0..n {
                if leq[a * n + b] {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        Ok(OrthomodularPoset {
            labels,
            leq,
            ortho,
            top,
            up,
            down,
        })
    }

    /// Builds from labels, `≤` pairs, `∗` pairs and the top label. The order
    /// is taken literally (no closure is applied).
    pub fn from_labelled<S: AsRef<str>>(
        labels: &[S],
        leq_pairs: &[(S, S)],
        ortho_pairs: &[(S, S)],
        top: &str,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let n = labels.len();
        let index = |l: &str| {
            labels.iter().position(|x| x == l).ok_or_else(|| Error::Unknown {
                kind: "element",
                name: l.to_owned(),
            })
        };
        let mut leq = vec![false; n * n];
        for (a, b) in leq_pairs {
            leq[index(a.as_ref())? * n + index(b.as_ref())?] = true;
        }
        let mut ortho = vec![usize::MAX; n];
        for (a, b) in ortho_pairs {
            ortho[index(a.as_ref())?] = index(b.as_ref())?;
        }
        if let Some(i) = ortho.iter().position(|&o| o == usize::MAX) {
            return Err(Error::structure(
                "event algebra",
                format!("ortho is not total: `{}` has no image", labels[i]),
            ));
        }
        let top = index(top)?;
        Self::from_parts(labels, leq, ortho, top)
    }

    /// Reflexive-transitive closure of a covering (or any generating) relation.
    pub fn closure_of(n: usize, pairs: impl IntoIterator<Item = (Event, Event)>) -> Vec<bool> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in pairs {
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        leq
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Event) -> &str {
        &self.labels[e]
    }

    pub fn index_of(&self, label: &str) -> Option<Event> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<Event> {
        0..self.len()
    }

    pub fn leq(&self, a: Event, b: Event) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn leq_matrix(&self) -> &[bool] {
        &self.leq
    }

    pub fn ortho(&self, e: Event) -> Event {
        self.ortho[e]
    }

    pub fn ortho_map(&self) -> &[Event] {
        &self.ortho
    }

    pub fn top(&self) -> Event {
        self.top
    }

    /// `0 := 1∗`.
    pub fn bottom(&self) -> Event {
        self.ortho[self.top]
    }

    /// `a ⊥ b :⇔ a ≤ b∗`.
    pub fn orthogonal(&self, a: Event, b: Event) -> bool {
        self.leq(a, self.ortho[b])
    }

    /// Least upper bound, if one exists.
    pub fn join(&self, a: Event, b: Event) -> Option<Event> {
        let ub = self.up[a].intersection(&self.up[b]);
        let found = ub.iter().find(|&u| ub.is_subset(&self.up[u]));
        found
    }

    /// Greatest lower bound, if one exists.
    pub fn meet(&self, a: Event, b: Event) -> Option<Event> {
        let lb = self.down[a].intersection(&self.down[b]);
        let found = lb.iter().find(|&l| lb.is_subset(&self.down[l]));
        found
    }

    /// The partial operation `⊕`: the join of an orthogonal pair.
    pub fn ortho_join(&self, a: Event, b: Event) -> Option<Event> {
        if self.orthogonal(a, b) {
            self.join(a, b)
        } else {
            None
        }
    }

    /// Least upper bound of a set (`0` for the empty set).
    pub fn join_all(&self, items: impl IntoIterator<Item = Event>) -> Option<Event> {
        let mut ub = BitSet::full(self.len());
        for e in items {
            ub.intersect_with(&self.up[e]);
        }
        let found = ub.iter().find(|&u| ub.is_subset(&self.up[u]));
        found
    }

    /// Elements strictly below `b` with nothing strictly in between.
    pub fn covers(&self) -> Vec<(Event, Event)> {
        let n = self.len();
        let lt = |a: Event, b: Event| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The sub-poset on `subset` (order and `∗` restricted). `subset` must
    /// be closed under `∗` and contain the top.
    pub fn restrict(&self, subset: &[Event]) -> Result<OrthomodularPoset> {
        let pos: HashMap<Event, usize> = subset.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = subset.len();
        let labels = subset.iter().map(|&e| self.labels[e].clone()).collect();
        let mut leq = vec![false; m * m];
        for (i, &a) in subset.iter().enumerate() {
            for (j, &b) in subset.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        let mut ortho = Vec::with_capacity(m);
        for &a in subset {
            let o = pos.get(&self.ortho[a]).ok_or_else(|| {
                Error::structure(
                    "sub-algebra",
                    format!("not closed under ∗: {}∗ is missing", self.labels[a]),
                )
            })?;
            ortho.push(*o);
        }
        let top = *pos
            .get(&self.top)
            .ok_or_else(|| Error::structure("sub-algebra", "does not contain 1"))?;
        OrthomodularPoset::from_parts(labels, leq, ortho, top)
    }

    /// Replaces the order matrix (for constructing deliberate mutations).
    pub fn with_leq(&self, leq: Vec<bool>) -> Result<Self> {
        Self::from_parts(self.labels.clone(), leq, self.ortho.clone(), self.top)
    }

    /// Replaces the orthocomplement (for constructing deliberate mutations).
    pub fn with_ortho(&self, ortho: Vec<Event>) -> Result<Self> {
        Self::from_parts(self.labels.clone(), self.leq.clone(), ortho, self.top)
    }

    /// Replaces the designated top.
    pub fn with_top(&self, top: Event) -> Result<Self> {
        Self::from_parts(self.labels.clone(), self.leq.clone(), self.ortho.clone(), top)
    }
}

fn partial_order_violations(l: &OrthomodularPoset, report: &mut Report<OmpAxiom>) {
    let n = l.len();
    for a in 0..n {
        if !l.leq(a, a) {
            report.push(OmpAxiom::PartialOrder, format!("not reflexive at {}", l.label(a)));
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if l.leq(a, b) && l.leq(b, a) {
                report.push(
                    OmpAxiom::PartialOrder,
                    format!("not antisymmetric: {} ≤ {} ≤ {}", l.label(a), l.label(b), l.label(a)),
                );
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b || !l.leq(a, b) {
                continue;
            }
            for c in 0..n {
                if b != c && l.leq(b, c) && !l.leq(a, c) {
                    report.push(
                        OmpAxiom::PartialOrder,
                        format!(
                            "not transitive: {} ≤ {} ≤ {} but not {} ≤ {}",
                            l.label(a),
                            l.label(b),
                            l.label(c),
                            l.label(a),
                            l.label(c)
                        ),
                    );
                }
            }
        }
    }
}

/// Checks the partial-order laws and axioms `[a]`–`[e]`, `[g]`.
///
/// `[c]`, `[e]` and `[g]` speak about joins and meets, which are only
/// meaningful in a partial order; they are skipped when the order laws fail.
pub fn validate_event_algebra(l: &OrthomodularPoset) -> Report<OmpAxiom> {
    let mut report = Report::new();
    let n = l.len();
    let name = |e: Event| l.label(e).to_owned();

    partial_order_violations(l, &mut report);
    let order_ok = report.is_ok();

    for e in 0..n {
        if !l.leq(e, l.top()) {
            report.push(OmpAxiom::A, format!("{} ≰ 1", name(e)));
        }
    }
    for e in 0..n {
        let oo = l.ortho(l.ortho(e));
        if oo != e {
            report.push(OmpAxiom::B, format!("{}∗∗ = {}", name(e), name(oo)));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && l.leq(a, b) && !l.leq(l.ortho(b), l.ortho(a)) {
                report.push(
                    OmpAxiom::D,
                    format!(
                        "{} ≤ {} but {}∗ = {} ≰ {} = {}∗",
                        name(a),
                        name(b),
                        name(b),
                        name(l.ortho(b)),
                        name(l.ortho(a)),
                        name(a)
                    ),
                );
            }
        }
    }
    if !order_ok {
        return report;
    }

    for e in 0..n {
        match l.join(e, l.ortho(e)) {
            Some(j) if j == l.top() => {}
            Some(j) => report.push(
                OmpAxiom::C,
                format!("{} ∨ {}∗ = {} ≠ 1", name(e), name(e), name(j)),
            ),
            None => report.push(OmpAxiom::C, format!("{} ∨ {}∗ does not exist", name(e), name(e))),
        }
    }
    for a in 0..n {
        for b in a..n {
            if (l.orthogonal(a, b) || l.orthogonal(b, a)) && l.join(a, b).is_none() {
                report.push(
                    OmpAxiom::E,
                    format!("{} ⊥ {} but {} ∨ {} does not exist", name(a), name(b), name(a), name(b)),
                );
            }
        }
    }
    let bottom = l.bottom();
    for a in 0..n {
        for b in 0..n {
            if l.ortho_join(a, b) == Some(l.top()) && l.meet(a, b) == Some(bottom) && a != l.ortho(b) {
                report.push(
                    OmpAxiom::G,
                    format!(
                        "{} ⊥ {}, {} ∨ {} = 1 and {} ∧ {} = 0 but {} ≠ {}∗ = {}",
                        name(a),
                        name(b),
                        name(a),
                        name(b),
                        name(a),
                        name(b),
                        name(a),
                        name(b),
                        name(l.ortho(b))
                    ),
                );
            }
        }
    }
    report
}
