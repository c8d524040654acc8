//! Boolean measurement charts, systems of prelocalizations, pasting maps,
//! and the counit verdict deciding whether a system is a localization.
//!
//! A chart is a quantum hom `ψ: A(ξ) → L` out of one of the model's Boolean
//! algebras. A system of prelocalizations is a family of charts closed under
//! precomposition `ψ ∘ A(w)` with the model's arrows `w: θ → ξ`; viewed as a
//! presheaf it is a subfunctor of `R(L)`. The system is a localization when
//! the counit `ε: S ⊗ A → L`, `[ψ ⊗ q] ↦ ψ(q)`, is a bijection preserving
//! `1`, `∗` and `≤`.

mod counit;
mod obstruction;
mod pasting;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use counit::{counit, localization_verdict, CounitClass, CounitReport};
pub use obstruction::{single_frame_obstruction, ObstructionReport};
pub use pasting::{
    cocycle_check, fibre_product, pasting_map, CocycleLaw, FibreProduct, PastingAtlas, PastingMap,
};

use crate::boolean_algebra::Subset;
use crate::error::{Error, Result};
use crate::presheaf::{chart_label, validate_model, CoordinatizationModel, Object, SetPresheaf};
use crate::quantum_logic::{enumerate_quantum_homs, validate_event_algebra, validate_quantum_hom, Event, OrthomodularPoset, QuantumHom};
use crate::report::Report;

/// A Boolean measurement chart `ψ: A(ξ) → L`.
///
/// The image table is indexed by element masks of `A(ξ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chart {
    object: Object,
    map: Vec<Event>,
}

impl Chart {
    /// Checks that the table is a quantum hom `A(object) → target`.
    pub fn new(model: &CoordinatizationModel, object: Object, target: &Arc<OrthomodularPoset>, map: Vec<Event>) -> Result<Self> {
        if object >= model.base().object_count() {
            return Err(Error::Unknown {
                kind: "model object",
                name: object.to_string(),
            });
        }
        let hom = QuantumHom::new(model.event_algebra(object).clone(), target.clone(), map)?;
        let report = validate_quantum_hom(&hom);
        if !report.is_ok() {
            return Err(Error::invalid("chart", &report));
        }
        Ok(Chart {
            object,
            map: hom.map().to_vec(),
        })
    }

    /// A chart given by the images of the atoms of `A(object)`, in atom
    /// order. Other elements go to the orthogonal join of their atoms' images.
    pub fn from_atom_images<S: AsRef<str>>(
        model: &CoordinatizationModel,
        object: Object,
        target: &Arc<OrthomodularPoset>,
        images: &[S],
    ) -> Result<Self> {
        if object >= model.base().object_count() {
            return Err(Error::Unknown {
                kind: "model object",
                name: object.to_string(),
            });
        }
        let alg = model.algebra(object);
        if images.len() != alg.atom_count() {
            return Err(Error::structure(
                "chart",
                format!("{} atom images for {} atoms", images.len(), alg.atom_count()),
            ));
        }
        let atoms: Vec<Event> = images
            .iter()
            .map(|s| {
                target.index_of(s.as_ref()).ok_or_else(|| Error::Unknown {
                    kind: "target element",
                    name: s.as_ref().to_owned(),
                })
            })
            .collect::<Result<_>>()?;
        let mut map = Vec::with_capacity(alg.len());
        for q in alg.elements() {
            let mut acc = target.bottom();
            for (i, &a) in atoms.iter().enumerate() {
                if q & alg.atom(i) != 0 {
                    acc = target.ortho_join(acc, a).ok_or_else(|| {
                        Error::structure(
                            "chart",
                            format!("images of the atoms of {} are not orthogonal", alg.element_label(q)),
                        )
                    })?;
                }
            }
            map.push(acc);
        }
        Self::new(model, object, target, map)
    }

    pub fn object(&self) -> Object {
        self.object
    }

    /// Image table indexed by element mask.
    pub fn map(&self) -> &[Event] {
        &self.map
    }

    pub fn apply(&self, q: Subset) -> Event {
        self.map[q as usize]
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    /// `ψ ∘ A(w)` for a model arrow `w` ending at this chart's object.
    pub fn precompose(&self, model: &CoordinatizationModel, w: usize) -> Chart {
        let arrow = model.base().arrow(w);
        debug_assert_eq!(arrow.target, self.object);
        Chart {
            object: arrow.source,
            map: model
                .algebra(arrow.source)
                .elements()
                .map(|q| self.map[model.apply(w, q) as usize])
                .collect(),
        }
    }

    /// E.g. `2^2 [a↦a, b↦a*]`.
    pub fn label(&self, model: &CoordinatizationModel, target: &OrthomodularPoset) -> String {
        format!(
            "{} {}",
            model.base().objects()[self.object],
            chart_label(model, self.object, target, &self.map)
        )
    }
}

/// Laws of a system of prelocalizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SystemLaw {
    /// Every member is a quantum hom into `L`.
    Subfunctor,
    /// Every precomposite of a member is a member.
    Closure,
}

impl fmt::Display for SystemLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemLaw::Subfunctor => "subfunctor",
            SystemLaw::Closure => "closure",
        })
    }
}

/// A family of charts into `L`, grouped by model object and sorted.
#[derive(Clone, Debug)]
pub struct PrelocSystem {
    model: Arc<CoordinatizationModel>,
    target: Arc<OrthomodularPoset>,
    charts: Vec<Vec<Chart>>,
}

impl PrelocSystem {
    /// Wraps an arbitrary family without closing it; see [`validate_system`].
    pub fn from_charts(
        model: Arc<CoordinatizationModel>,
        target: Arc<OrthomodularPoset>,
        charts: impl IntoIterator<Item = Chart>,
    ) -> Self {
        let mut by_object: Vec<BTreeSet<Chart>> = vec![BTreeSet::new(); model.base().object_count()];
        for c in charts {
            by_object[c.object].insert(c);
        }
        PrelocSystem {
            target,
            charts: by_object.into_iter().map(|s| s.into_iter().collect()).collect(),
            model,
        }
    }

    /// The empty system.
    pub fn empty(model: Arc<CoordinatizationModel>, target: Arc<OrthomodularPoset>) -> Self {
        Self::from_charts(model, target, [])
    }

    /// `R(L)` itself: every quantum hom from every model object.
    pub fn maximal(model: Arc<CoordinatizationModel>, target: Arc<OrthomodularPoset>) -> Result<Self> {
        require_inputs(&model, &target)?;
        let mut charts = Vec::new();
        for o in 0..model.base().object_count() {
            for h in enumerate_quantum_homs(model.event_algebra(o), &target)? {
                charts.push(Chart {
                    object: o,
                    map: h.map().to_vec(),
                });
            }
        }
        Ok(Self::from_charts(model, target, charts))
    }

    pub fn model(&self) -> &Arc<CoordinatizationModel> {
        &self.model
    }

    pub fn target(&self) -> &Arc<OrthomodularPoset> {
        &self.target
    }

    /// `S(ξ)`.
    pub fn charts(&self, xi: Object) -> &[Chart] {
        &self.charts[xi]
    }

    /// All charts, by object and then image table.
    pub fn all_charts(&self) -> impl Iterator<Item = &Chart> {
        self.charts.iter().flatten()
    }

    pub fn chart_count(&self) -> usize {
        self.charts.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, chart: &Chart) -> bool {
        self.charts
            .get(chart.object)
            .is_some_and(|s| s.binary_search(chart).is_ok())
    }

    pub fn chart_label(&self, chart: &Chart) -> String {
        chart.label(&self.model, &self.target)
    }

    /// `S ∩ T`; both must share model and target.
    pub fn intersection(&self, other: &PrelocSystem) -> Result<PrelocSystem> {
        self.require_same_setting(other)?;
        let charts = self.all_charts().filter(|c| other.contains(c)).cloned().collect::<Vec<_>>();
        Ok(Self::from_charts(self.model.clone(), self.target.clone(), charts))
    }

    /// Whether every chart of `self` is a chart of `other`.
    pub fn is_subsystem_of(&self, other: &PrelocSystem) -> bool {
        self.all_charts().all(|c| other.contains(c))
    }

    /// Drops every chart whose image contains `e`. Images only shrink under
    /// precomposition, so the result is again closed.
    pub fn without_charts_touching(&self, e: Event) -> PrelocSystem {
        let charts = self.all_charts().filter(|c| !c.map.contains(&e)).cloned().collect::<Vec<_>>();
        Self::from_charts(self.model.clone(), self.target.clone(), charts)
    }

    /// The system as a presheaf over the model base: `S(ξ)` with restriction
    /// `ψ ↦ ψ ∘ A(w)`. Fails if the family is not closed.
    pub fn as_presheaf(&self) -> Result<SetPresheaf> {
        let base = self.model.base();
        let index: Vec<HashMap<&Chart, usize>> = self
            .charts
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let sets = self
            .charts
            .iter()
            .map(|s| s.iter().map(|c| self.chart_label(c)).collect())
            .collect();
        let maps = base
            .arrows()
            .iter()
            .enumerate()
            .map(|(w, arrow)| {
                self.charts[arrow.target]
                    .iter()
                    .map(|c| {
                        let pre = c.precompose(&self.model, w);
                        index[arrow.source].get(&pre).copied().ok_or_else(|| {
                            Error::structure(
                                "system",
                                format!("{} ∘ A({}) is missing", self.chart_label(c), arrow.name),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SetPresheaf::new(base.clone(), sets, maps)
    }

    fn require_same_setting(&self, other: &PrelocSystem) -> Result<()> {
        if **self.model.base() != **other.model.base() || *self.target != *other.target {
            return Err(Error::Mismatch {
                left: "first system".into(),
                right: "second system".into(),
            });
        }
        Ok(())
    }
}

fn require_inputs(model: &CoordinatizationModel, target: &OrthomodularPoset) -> Result<()> {
    let r = validate_model(model);
    if !r.is_ok() {
        return Err(Error::invalid("model", &r));
    }
    let r = validate_event_algebra(target);
    if !r.is_ok() {
        return Err(Error::invalid("target algebra", &r));
    }
    Ok(())
}

/// Re-checks both invariants exhaustively.
pub fn validate_system(s: &PrelocSystem) -> Report<SystemLaw> {
    let mut report = Report::new();
    let model = &s.model;
    for c in s.all_charts() {
        let hom = QuantumHom::new(model.event_algebra(c.object).clone(), s.target.clone(), c.map.clone());
        let ok = hom.map(|h| validate_quantum_hom(&h).is_ok()).unwrap_or(false);
        if !ok {
            report.push(SystemLaw::Subfunctor, format!("{} is not a quantum hom", s.chart_label(c)));
        }
        for w in model.base().arrows_into(c.object) {
            let pre = c.precompose(model, w);
            if !s.contains(&pre) {
                report.push(
                    SystemLaw::Closure,
                    format!(
                        "{} ∘ A({}) = {} is missing",
                        s.chart_label(c),
                        model.base().arrow(w).name,
                        s.chart_label(&pre)
                    ),
                );
            }
        }
    }
    report
}

/// The smallest system containing `seeds`: close under precomposition with
/// every model arrow into each chart's object, to a fixpoint.
pub fn generate_system(
    model: Arc<CoordinatizationModel>,
    target: Arc<OrthomodularPoset>,
    seeds: impl IntoIterator<Item = Chart>,
) -> Result<PrelocSystem> {
    require_inputs(&model, &target)?;
    let mut seen: BTreeSet<Chart> = BTreeSet::new();
    let mut work: Vec<Chart> = Vec::new();
    for c in seeds {
        if c.object >= model.base().object_count() || c.map.len() != model.algebra(c.object).len() {
            return Err(Error::structure("chart", "chart does not match the model"));
        }
        let hom = QuantumHom::new(model.event_algebra(c.object).clone(), target.clone(), c.map.clone())?;
        let r = validate_quantum_hom(&hom);
        if !r.is_ok() {
            return Err(Error::Invalid {
                what: "seed chart",
                report: format!("{}\n{}", c.label(&model, &target), r),
            });
        }
        if seen.insert(c.clone()) {
            work.push(c);
        }
    }
    while let Some(c) = work.pop() {
        for w in model.base().arrows_into(c.object) {
            let pre = c.precompose(&model, w);
            if seen.insert(pre.clone()) {
                work.push(pre);
            }
        }
    }
    Ok(PrelocSystem::from_charts(model, target, seen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{hom_presheaf, validate_presheaf};
    use crate::quantum_logic::catalog;

    fn mo2_setting() -> (Arc<CoordinatizationModel>, Arc<OrthomodularPoset>) {
        (
            Arc::new(CoordinatizationModel::powerset_model(2).unwrap()),
            Arc::new(catalog::mo2()),
        )
    }

    #[test]
    fn empty_seed_gives_empty_system() {
        let (m, l) = mo2_setting();
        let s = generate_system(m, l, []).unwrap();
        assert_eq!(s.chart_count(), 0);
        assert!(validate_system(&s).is_ok());
    }

    #[test]
    fn all_homs_generate_the_hom_presheaf() {
        let (m, l) = mo2_setting();
        let max = PrelocSystem::maximal(m.clone(), l.clone()).unwrap();
        let generated = generate_system(m.clone(), l.clone(), max.all_charts().cloned()).unwrap();
        let r = hom_presheaf(&m, &l).unwrap();
        for o in 0..m.base().object_count() {
            assert_eq!(generated.charts(o), max.charts(o));
            assert_eq!(generated.charts(o).len(), r.charts(o).len());
        }
        assert!(validate_system(&generated).is_ok());
    }

    #[test]
    fn block_inclusions_close_up() {
        let (m, l) = mo2_setting();
        let seeds = [
            Chart::from_atom_images(&m, 1, &l, &["a", "a*"]).unwrap(),
            Chart::from_atom_images(&m, 1, &l, &["b", "b*"]).unwrap(),
        ];
        let s = generate_system(m.clone(), l, seeds).unwrap();
        // Swaps of both inclusions plus the two collapses, and the single 2^1 chart.
        assert_eq!(s.charts(1).len(), 6);
        assert_eq!(s.charts(0).len(), 1);
        assert!(validate_system(&s).is_ok());
        assert!(validate_presheaf(&s.as_presheaf().unwrap()).is_ok());
    }

    #[test]
    fn invalid_seed_is_rejected() {
        let (m, l) = mo2_setting();
        let bad = Chart::new(&m, 1, &l, vec![0, 1, 3, 5]);
        assert!(bad.is_err());
        let unchecked = Chart {
            object: 1,
            map: vec![0, 1, 3, 5],
        };
        assert!(matches!(
            generate_system(m, l, [unchecked]),
            Err(Error::Invalid { what: "seed chart", .. })
        ));
    }

    #[test]
    fn dropping_charts_through_an_element_stays_closed() {
        let (m, l) = mo2_setting();
        let max = PrelocSystem::maximal(m, l.clone()).unwrap();
        let cut = max.without_charts_touching(l.index_of("b").unwrap());
        assert!(validate_system(&cut).is_ok());
        assert!(cut.is_subsystem_of(&max));
        assert!(cut.chart_count() < max.chart_count());
    }

    #[test]
    fn unclosed_family_is_reported() {
        let (m, l) = mo2_setting();
        let c = Chart::from_atom_images(&m, 1, &l, &["a", "a*"]).unwrap();
        let s = PrelocSystem::from_charts(m, l, [c]);
        let r = validate_system(&s);
        assert_eq!(r.laws().into_iter().collect::<Vec<_>>(), vec![SystemLaw::Closure]);
        assert!(s.as_presheaf().is_err());
    }
}
