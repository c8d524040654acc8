use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{validate_event_algebra, Event, OrthomodularPoset};
use crate::error::{Error, Result};
use crate::report::Report;

/// Upper bound on the number of homs a single enumeration may return.
pub const MAX_ENUMERATED_HOMS: usize = 100_000;

/// The four arrow conditions on a quantum hom `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuantumHomLaw {
    /// `H(1) = 1`
    A,
    /// `H(k∗) = H(k)∗`
    B,
    /// `k ≤ ḱ ⇒ H(k) ≤ H(ḱ)`
    C,
    /// `k ⊥ ḱ ⇒ H(k ∨ ḱ) ≤ H(k) ∨ H(ḱ)`
    D,
}

impl fmt::Display for QuantumHomLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantumHomLaw::A => "[a]",
            QuantumHomLaw::B => "[b]",
            QuantumHomLaw::C => "[c]",
            QuantumHomLaw::D => "[d]",
        })
    }
}

impl Serialize for QuantumHomLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A total map between event algebras. Construction checks only that the
/// map is total and in range; see [`validate_quantum_hom`] for the laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumHom {
    source: Arc<OrthomodularPoset>,
    target: Arc<OrthomodularPoset>,
    map: Vec<Event>,
}

impl QuantumHom {
    pub fn new(
        source: Arc<OrthomodularPoset>,
        target: Arc<OrthomodularPoset>,
        map: Vec<Event>,
    ) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::structure(
                "quantum hom",
                format!("map has {} entries, source has {} elements", map.len(), source.len()),
            ));
        }
        if let Some(&bad) = map.iter().find(|&&m| m >= target.len()) {
            return Err(Error::structure(
                "quantum hom",
                format!("image index {bad} is outside the target"),
            ));
        }
        Ok(QuantumHom { source, target, map })
    }

    /// Builds from a label-to-label table that must mention every source element.
    pub fn from_labels<S: AsRef<str>>(
        source: Arc<OrthomodularPoset>,
        target: Arc<OrthomodularPoset>,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (k, v) in pairs {
            let k_idx = source.index_of(k.as_ref()).ok_or_else(|| Error::Unknown {
                kind: "source element",
                name: k.as_ref().to_owned(),
            })?;
            let v_idx = target.index_of(v.as_ref()).ok_or_else(|| Error::Unknown {
                kind: "target element",
                name: v.as_ref().to_owned(),
            })?;
            map[k_idx] = v_idx;
        }
        if let Some(i) = map.iter().position(|&m| m == usize::MAX) {
            return Err(Error::structure(
                "quantum hom",
                format!("map is not total: `{}` has no image", source.label(i)),
            ));
        }
        Self::new(source, target, map)
    }

    pub fn identity(l: Arc<OrthomodularPoset>) -> Self {
        let map = l.elements().collect();
        QuantumHom {
            source: l.clone(),
            target: l,
            map,
        }
    }

    pub fn source(&self) -> &Arc<OrthomodularPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OrthomodularPoset> {
        &self.target
    }

    pub fn map(&self) -> &[Event] {
        &self.map
    }

    pub fn apply(&self, e: Event) -> Event {
        self.map[e]
    }

    /// Whether every target element is hit.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &m in &self.map {
            hit[m] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &QuantumHom) -> Result<QuantumHom> {
        if inner.target != self.source {
            return Err(Error::Mismatch {
                left: "inner target".into(),
                right: "outer source".into(),
            });
        }
        Ok(QuantumHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: inner.map.iter().map(|&e| self.map[e]).collect(),
        })
    }
}

impl fmt::Display for QuantumHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, &v) in self.map.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↦{}", self.source.label(k), self.target.label(v))?;
        }
        write!(f, "}}")
    }
}

pub fn validate_quantum_hom(h: &QuantumHom) -> Report<QuantumHomLaw> {
    let (s, t) = (&*h.source, &*h.target);
    let mut report = Report::new();
    let img = |e: Event| t.label(h.map[e]).to_owned();

    if h.map[s.top()] != t.top() {
        report.push(QuantumHomLaw::A, format!("H(1) = {}", img(s.top())));
    }
    for k in s.elements() {
        if h.map[s.ortho(k)] != t.ortho(h.map[k]) {
            report.push(
                QuantumHomLaw::B,
                format!("H({}∗) = {} but H({})∗ = {}", s.label(k), img(s.ortho(k)), s.label(k), t.label(t.ortho(h.map[k]))),
            );
        }
    }
    for k in s.elements() {
        for m in s.elements() {
            if k != m && s.leq(k, m) && !t.leq(h.map[k], h.map[m]) {
                report.push(
                    QuantumHomLaw::C,
                    format!("{} ≤ {} but {} ≰ {}", s.label(k), s.label(m), img(k), img(m)),
                );
            }
        }
    }
    for k in s.elements() {
        for m in k..s.len() {
            if !s.orthogonal(k, m) {
                continue;
            }
            let Some(j) = s.join(k, m) else { continue };
            match t.join(h.map[k], h.map[m]) {
                Some(tj) if t.leq(h.map[j], tj) => {}
                Some(tj) => report.push(
                    QuantumHomLaw::D,
                    format!(
                        "H({} ∨ {}) = {} ≰ {} = H({}) ∨ H({})",
                        s.label(k),
                        s.label(m),
                        img(j),
                        t.label(tj),
                        s.label(k),
                        s.label(m)
                    ),
                ),
                None => report.push(
                    QuantumHomLaw::D,
                    format!("H({}) ∨ H({}) does not exist", s.label(k), s.label(m)),
                ),
            }
        }
    }
    report
}

/// Every quantum hom `source → target`, sorted by image table.
///
/// Both algebras must be valid event algebras. The search assigns one
/// element of each `{k, k∗}` pair at a time and prunes on the order and
/// join conditions as soon as their elements are assigned.
pub fn enumerate_quantum_homs(
    source: &Arc<OrthomodularPoset>,
    target: &Arc<OrthomodularPoset>,
) -> Result<Vec<QuantumHom>> {
    for (what, l) in [("hom source", source), ("hom target", target)] {
        let r = validate_event_algebra(l);
        if !r.is_ok() {
            return Err(Error::invalid(what, &r));
        }
    }
    let s = &**source;
    let t = &**target;
    let n = s.len();

    // Representatives of complement pairs, excluding {0, 1}.
    let mut reps = Vec::new();
    let mut seen = vec![false; n];
    seen[s.top()] = true;
    seen[s.bottom()] = true;
    for k in s.elements() {
        if !seen[k] {
            seen[k] = true;
            seen[s.ortho(k)] = true;
            reps.push(k);
        }
    }

    let mut joins = Vec::new();
    for k in s.elements() {
        for m in k..n {
            if s.orthogonal(k, m) {
                if let Some(j) = s.join(k, m) {
                    joins.push((k, m, j));
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    map[s.top()] = t.top();
    map[s.bottom()] = t.bottom();
    let mut out = Vec::new();
    if consistent(s, t, &map, &joins) {
        search(s, t, &reps, &joins, 0, &mut map, &mut out)?;
    }
    out.sort();
    Ok(out
        .into_iter()
        .map(|map| QuantumHom {
            source: source.clone(),
            target: target.clone(),
            map,
        })
        .collect())
}

fn search(
    s: &OrthomodularPoset,
    t: &OrthomodularPoset,
    reps: &[Event],
    joins: &[(Event, Event, Event)],
    depth: usize,
    map: &mut Vec<Event>,
    out: &mut Vec<Vec<Event>>,
) -> Result<()> {
    let Some(&k) = reps.get(depth) else {
        out.push(map.clone());
        if out.len() > MAX_ENUMERATED_HOMS {
            return Err(Error::bound("quantum hom count", out.len(), MAX_ENUMERATED_HOMS));
        }
        return Ok(());
    };
    let ko = s.ortho(k);
    for v in t.elements() {
        map[k] = v;
        map[ko] = t.ortho(v);
        if (k != ko || v == t.ortho(v)) && consistent(s, t, map, joins) {
            search(s, t, reps, joins, depth + 1, map, out)?;
        }
    }
    map[k] = usize::MAX;
    map[ko] = usize::MAX;
    Ok(())
}

fn consistent(
    s: &OrthomodularPoset,
    t: &OrthomodularPoset,
    map: &[Event],
    joins: &[(Event, Event, Event)],
) -> bool {
    let set = |e: Event| map[e] != usize::MAX;
    for a in s.elements().filter(|&a| set(a)) {
        for b in s.elements().filter(|&b| set(b)) {
            if s.leq(a, b) && !t.leq(map[a], map[b]) {
                return false;
            }
        }
    }
    for &(k, m, j) in joins {
        if set(k) && set(m) && set(j) {
            match t.join(map[k], map[m]) {
                Some(tj) if t.leq(map[j], tj) => {}
                _ => return false,
            }
        }
    }
    true
}
