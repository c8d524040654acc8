use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Report;

pub type Object = usize;
pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: Object,
    pub target: Object,
}

/// A finite category with an explicit composition table.
///
/// `compose(g, f)` is `g ∘ f` (first `f`, then `g`) and is defined exactly
/// when `f.target == g.source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<ArrowId>,
    table: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl FiniteCategory {
    /// `composite(g, f)` is consulted for every composable pair. Only the
    /// shape is checked here; see [`validate_category`] for the laws.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<ArrowId>,
        mut composite: impl FnMut(ArrowId, ArrowId) -> Option<ArrowId>,
    ) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Empty("object list"));
        }
        let mut seen = HashMap::new();
        for o in &objects {
            if seen.insert(o.as_str(), ()).is_some() {
                return Err(Error::DuplicateLabel(o.clone()));
            }
        }
        let mut names = HashMap::new();
        for a in &arrows {
            if a.source >= objects.len() || a.target >= objects.len() {
                return Err(Error::structure("category", format!("arrow `{}` has an unknown endpoint", a.name)));
            }
            if names.insert(a.name.as_str(), ()).is_some() {
                return Err(Error::DuplicateLabel(a.name.clone()));
            }
        }
        if identities.len() != objects.len() || identities.iter().any(|&i| i >= arrows.len()) {
            return Err(Error::structure("category", "one identity arrow per object is required"));
        }
        let m = arrows.len();
        let mut table = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                if arrows[f].target != arrows[g].source {
                    continue;
                }
                let h = composite(g, f).ok_or_else(|| {
                    Error::structure(
                        "category",
                        format!("no composite for `{}` ∘ `{}`", arrows[g].name, arrows[f].name),
                    )
                })?;
                if h >= m {
                    return Err(Error::structure("category", "composite index out of range"));
                }
                table[g * m + f] = h as u32;
            }
        }
        Ok(FiniteCategory {
            objects,
            arrows,
            identities,
            table,
        })
    }

    /// The category with one object and only its identity.
    pub fn discrete_point(name: &str) -> Self {
        let arrows = vec![Arrow {
            name: format!("id_{name}"),
            source: 0,
            target: 0,
        }];
        Self::new(vec![name.to_owned()], arrows, vec![0], |_, _| Some(0)).expect("well formed")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Option<Object> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn identity(&self, o: Object) -> ArrowId {
        self.identities[o]
    }

    /// `g ∘ f`, or `None` when `f.target != g.source`.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        match self.table[g * self.arrows.len() + f] {
            NONE => None,
            h => Some(h as usize),
        }
    }

    /// Arrows `from → to`, in arrow order.
    pub fn hom(&self, from: Object, to: Object) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == from && self.arrows[a].target == to)
            .collect()
    }

    /// Arrows with the given target, in arrow order.
    pub fn arrows_into(&self, to: Object) -> Vec<ArrowId> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == to).collect()
    }

    /// A copy with one table entry overwritten (for building corrupted
    /// fixtures); the pair must be composable.
    pub fn with_composite(&self, g: ArrowId, f: ArrowId, h: ArrowId) -> Result<Self> {
        let m = self.arrows.len();
        if self.table[g * m + f] == NONE || h >= m {
            return Err(Error::structure("category", "not a composable pair"));
        }
        let mut out = self.clone();
        out.table[g * m + f] = h as u32;
        Ok(out)
    }
}

impl fmt::Display for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "category({} objects, {} arrows)", self.objects.len(), self.arrows.len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CategoryLaw {
    Endpoints,
    Identity,
    Associativity,
}

impl fmt::Display for CategoryLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CategoryLaw::Endpoints => "endpoints",
            CategoryLaw::Identity => "identity",
            CategoryLaw::Associativity => "associativity",
        })
    }
}

/// Identity and associativity laws over all composable pairs and triples.
pub fn validate_category(c: &FiniteCategory) -> Report<CategoryLaw> {
    let mut report = Report::new();
    let name = |a: ArrowId| c.arrows[a].name.as_str();
    for (o, &i) in c.identities.iter().enumerate() {
        if c.arrows[i].source != o || c.arrows[i].target != o {
            report.push(CategoryLaw::Endpoints, format!("identity `{}` is not an endo-arrow of `{}`", name(i), c.objects[o]));
        }
    }
    let m = c.arrows.len();
    for g in 0..m {
        for f in 0..m {
            if let Some(h) = c.compose(g, f) {
                if c.arrows[h].source != c.arrows[f].source || c.arrows[h].target != c.arrows[g].target {
                    report.push(
                        CategoryLaw::Endpoints,
                        format!("`{}` ∘ `{}` = `{}` has the wrong endpoints", name(g), name(f), name(h)),
                    );
                }
            }
        }
    }
    for f in 0..m {
        let id_s = c.identities[c.arrows[f].source];
        let id_t = c.identities[c.arrows[f].target];
        if c.compose(f, id_s) != Some(f) {
            report.push(CategoryLaw::Identity, format!("`{}` ∘ id ≠ `{}`", name(f), name(f)));
        }
        if c.compose(id_t, f) != Some(f) {
            report.push(CategoryLaw::Identity, format!("id ∘ `{}` ≠ `{}`", name(f), name(f)));
        }
    }
    if !report.is_ok() {
        return report;
    }
    for f in 0..m {
        for g in 0..m {
            let Some(gf) = c.compose(g, f) else { continue };
            for h in 0..m {
                let Some(hg) = c.compose(h, g) else { continue };
                if c.compose(h, gf) != c.compose(hg, f) {
                    report.push(
                        CategoryLaw::Associativity,
                        format!("(`{}` ∘ `{}`) ∘ `{}` ≠ `{}` ∘ (`{}` ∘ `{}`)", name(h), name(g), name(f), name(h), name(g), name(f)),
                    );
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Objects 0, 1 with identities and one arrow v: 0 → 1.
    pub(crate) fn arrow_category() -> FiniteCategory {
        let arrows = vec![
            Arrow { name: "id0".into(), source: 0, target: 0 },
            Arrow { name: "id1".into(), source: 1, target: 1 },
            Arrow { name: "v".into(), source: 0, target: 1 },
        ];
        FiniteCategory::new(vec!["0".into(), "1".into()], arrows, vec![0, 1], |g, f| {
            Some(match (g, f) {
                (0, 0) => 0,
                (1, 1) => 1,
                _ => 2,
            })
        })
        .unwrap()
    }

    #[test]
    fn laws_hold_for_small_categories() {
        assert!(validate_category(&FiniteCategory::discrete_point("x")).is_ok());
        let c = arrow_category();
        assert!(validate_category(&c).is_ok());
        assert_eq!(c.hom(0, 1), vec![2]);
        assert_eq!(c.compose(2, 0), Some(2));
        assert_eq!(c.compose(0, 2), None);
    }

    #[test]
    fn corrupted_table_is_reported() {
        let c = arrow_category().with_composite(1, 2, 1).unwrap();
        let r = validate_category(&c);
        assert!(r.cites(&CategoryLaw::Endpoints));
        assert!(r.cites(&CategoryLaw::Identity));
    }
}
