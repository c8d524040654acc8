use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::category::{validate_category, Arrow, ArrowId, FiniteCategory, Object};
use crate::boolean_algebra::{
    compose_boolean_homs, enumerate_boolean_homs, validate_boolean_hom, BooleanHom, FiniteBooleanAlgebra, Subset,
};
use crate::error::{Error, Result};
use crate::quantum_logic::OrthomodularPoset;
use crate::report::Report;

/// Largest atom count accepted by [`CoordinatizationModel::powerset_model`].
pub const MAX_MODEL_ATOMS: usize = 3;

/// A finite base category of Boolean objects together with the functor `A`
/// sending each object to a powerset algebra and each arrow to a Boolean hom.
#[derive(Clone, Debug)]
pub struct CoordinatizationModel {
    base: Arc<FiniteCategory>,
    algebras: Vec<FiniteBooleanAlgebra>,
    event_algebras: Vec<Arc<OrthomodularPoset>>,
    homs: Vec<BooleanHom>,
}

impl CoordinatizationModel {
    /// Objects `2^1, …, 2^k` (atoms `a, b, c`) and every Boolean hom between
    /// them, one object per atom count.
    pub fn powerset_model(max_atoms: usize) -> Result<Self> {
        if max_atoms == 0 {
            return Err(Error::Empty("model"));
        }
        if max_atoms > MAX_MODEL_ATOMS {
            return Err(Error::bound("model atom count", max_atoms, MAX_MODEL_ATOMS));
        }
        let objects: Vec<(String, FiniteBooleanAlgebra)> = (1..=max_atoms)
            .map(|n| Ok((format!("2^{n}"), FiniteBooleanAlgebra::standard(n)?)))
            .collect::<Result<_>>()?;
        let mut arrows = Vec::new();
        for (s, (_, sa)) in objects.iter().enumerate() {
            for (t, (_, ta)) in objects.iter().enumerate() {
                for h in enumerate_boolean_homs(sa, ta)? {
                    arrows.push((s, t, h));
                }
            }
        }
        Self::build(objects, arrows)
    }

    /// From named objects and Boolean homs between them. Identities are
    /// added where missing; composites are found by matching homs, so the
    /// arrow set must be closed under composition and contain no two arrows
    /// with the same hom.
    pub fn from_arrows(
        objects: Vec<(String, FiniteBooleanAlgebra)>,
        arrows: Vec<(String, Object, Object, BooleanHom)>,
    ) -> Result<Self> {
        let mut named = Vec::new();
        for (name, s, t, h) in arrows {
            if s >= objects.len() || t >= objects.len() {
                return Err(Error::structure("model", format!("arrow `{name}` has an unknown endpoint")));
            }
            named.push((Some(name), s, t, h));
        }
        Self::build_named(objects, named)
    }

    fn build(objects: Vec<(String, FiniteBooleanAlgebra)>, arrows: Vec<(Object, Object, BooleanHom)>) -> Result<Self> {
        Self::build_named(objects, arrows.into_iter().map(|(s, t, h)| (None, s, t, h)).collect())
    }

    fn build_named(
        objects: Vec<(String, FiniteBooleanAlgebra)>,
        mut arrows: Vec<(Option<String>, Object, Object, BooleanHom)>,
    ) -> Result<Self> {
        for (name, s, t, h) in &arrows {
            if *h.source() != objects[*s].1 || *h.target() != objects[*t].1 {
                return Err(Error::structure(
                    "model",
                    format!(
                        "arrow {} does not go {} → {}",
                        name.as_deref().unwrap_or("?"),
                        objects[*s].0,
                        objects[*t].0
                    ),
                ));
            }
        }
        for (o, (_, alg)) in objects.iter().enumerate() {
            let id = BooleanHom::identity(alg);
            if !arrows.iter().any(|(_, s, t, h)| *s == o && *t == o && *h == id) {
                arrows.push((None, o, o, id));
            }
        }
        let mut index = HashMap::new();
        for (i, (name, s, t, h)) in arrows.iter().enumerate() {
            if index.insert((*s, *t, h.atom_map().to_vec()), i).is_some() {
                return Err(Error::structure(
                    "model",
                    format!("arrow {} duplicates another arrow's hom", name.as_deref().unwrap_or("?")),
                ));
            }
        }
        let identities: Vec<ArrowId> = objects
            .iter()
            .enumerate()
            .map(|(o, (_, alg))| index[&(o, o, BooleanHom::identity(alg).atom_map().to_vec())])
            .collect();
        let arrow_list: Vec<Arrow> = arrows
            .iter()
            .enumerate()
            .map(|(i, (name, s, t, h))| Arrow {
                name: match name {
                    Some(n) => n.clone(),
                    None if identities.contains(&i) => format!("id_{}", objects[*s].0),
                    None => format!("{}→{} {}", objects[*s].0, objects[*t].0, h),
                },
                source: *s,
                target: *t,
            })
            .collect();
        let mut missing = None;
        let base = FiniteCategory::new(
            objects.iter().map(|(n, _)| n.clone()).collect(),
            arrow_list,
            identities,
            |g, f| {
                let (_, s, _, hf) = &arrows[f];
                let (_, _, t, hg) = &arrows[g];
                let c = compose_boolean_homs(hg, hf).ok()?;
                let found = index.get(&(*s, *t, c.atom_map().to_vec())).copied();
                if found.is_none() && missing.is_none() {
                    missing = Some((g, f));
                }
                found
            },
        );
        let base = match (base, missing) {
            (Ok(b), _) => b,
            (Err(_), Some((g, f))) => {
                return Err(Error::structure(
                    "model",
                    format!(
                        "arrows are not closed under composition: {} ∘ {} is missing",
                        arrows[g].0.as_deref().unwrap_or("?"),
                        arrows[f].0.as_deref().unwrap_or("?")
                    ),
                ))
            }
            (Err(e), None) => return Err(e),
        };
        let algebras: Vec<FiniteBooleanAlgebra> = objects.into_iter().map(|(_, a)| a).collect();
        let event_algebras = algebras.iter().map(|a| Arc::new(a.to_event_algebra())).collect();
        Ok(CoordinatizationModel {
            base: Arc::new(base),
            algebras,
            event_algebras,
            homs: arrows.into_iter().map(|(_, _, _, h)| h).collect(),
        })
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    /// `A(ξ)` as a Boolean algebra.
    pub fn algebra(&self, o: Object) -> &FiniteBooleanAlgebra {
        &self.algebras[o]
    }

    /// `A(ξ)` as an event algebra (element index = atom mask).
    pub fn event_algebra(&self, o: Object) -> &Arc<OrthomodularPoset> {
        &self.event_algebras[o]
    }

    /// `A(v)`.
    pub fn hom(&self, v: ArrowId) -> &BooleanHom {
        &self.homs[v]
    }

    /// `A(v)(q)`.
    pub fn apply(&self, v: ArrowId, q: Subset) -> Subset {
        self.homs[v].apply(q)
    }

    /// A copy with `A(v)` replaced (for building corrupted fixtures).
    pub fn with_arrow_hom(&self, v: ArrowId, h: BooleanHom) -> Self {
        let mut out = self.clone();
        out.homs[v] = h;
        out
    }
}

impl fmt::Display for CoordinatizationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model[{}]", self.base.objects().join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FunctorLaw {
    Category,
    Endpoints,
    BooleanHom,
    Identity,
    Composition,
}

impl fmt::Display for FunctorLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctorLaw::Category => "base category",
            FunctorLaw::Endpoints => "endpoints",
            FunctorLaw::BooleanHom => "Boolean hom",
            FunctorLaw::Identity => "A(id) = id",
            FunctorLaw::Composition => "A(g∘f) = A(g)∘A(f)",
        })
    }
}

/// Category laws of the base and functor laws of `A`.
pub fn validate_model(m: &CoordinatizationModel) -> Report<FunctorLaw> {
    let mut report = Report::new();
    for v in validate_category(&m.base).violations {
        report.push(FunctorLaw::Category, format!("{}: {}", v.law, v.witness));
    }
    let base = &m.base;
    let name = |a: ArrowId| base.arrow(a).name.clone();
    for (a, arrow) in base.arrows().iter().enumerate() {
        let h = &m.homs[a];
        if *h.source() != m.algebras[arrow.source] || *h.target() != m.algebras[arrow.target] {
            report.push(FunctorLaw::Endpoints, format!("A({}) has the wrong endpoints", name(a)));
            continue;
        }
        let r = validate_boolean_hom(h);
        if !r.is_ok() {
            report.push(FunctorLaw::BooleanHom, format!("A({}): {}", name(a), r));
        }
    }
    if !report.is_ok() {
        return report;
    }
    for o in 0..base.object_count() {
        let id = base.identity(o);
        if m.homs[id] != BooleanHom::identity(&m.algebras[o]) {
            report.push(FunctorLaw::Identity, format!("A({}) = {}", name(id), m.homs[id]));
        }
    }
    let n = base.arrows().len();
    for g in 0..n {
        for f in 0..n {
            let Some(gf) = base.compose(g, f) else { continue };
            let composite = compose_boolean_homs(&m.homs[g], &m.homs[f]).expect("endpoints checked");
            if composite != m.homs[gf] {
                report.push(
                    FunctorLaw::Composition,
                    format!("A({} ∘ {}) = {} but A({}) ∘ A({}) = {}", name(g), name(f), m.homs[gf], name(g), name(f), composite),
                );
            }
        }
    }
    report
}

/// Errors unless [`validate_model`] passes.
pub(crate) fn require_valid(m: &CoordinatizationModel) -> Result<()> {
    let r = validate_model(m);
    if r.is_ok() {
        Ok(())
    } else {
        Err(Error::invalid("coordinatization model", &r))
    }
}
