use super::category::{ArrowId, Object};
use super::set_presheaf::SetPresheaf;

/// An arrow `(θ, p/u) → (ξ, p)` of the category of elements, given by the
/// base arrow `u: θ → ξ` and the point `p ∈ X(ξ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementArrow {
    pub base_arrow: ArrowId,
    pub point: usize,
    pub source: usize,
    pub target: usize,
}

/// The category of elements of a presheaf, with its projection to the base.
///
/// Objects are the pairs `(ξ, p)` with `p ∈ X(ξ)`, ordered by object and
/// then point; arrows are ordered by base arrow and then point.
#[derive(Clone, Debug)]
pub struct ElementsCategory {
    presheaf: SetPresheaf,
    objects: Vec<(Object, usize)>,
    object_offset: Vec<usize>,
    arrows: Vec<ElementArrow>,
    arrow_offset: Vec<usize>,
}

pub fn category_of_elements(x: &SetPresheaf) -> ElementsCategory {
    let base = x.base();
    let mut objects = Vec::new();
    let mut object_offset = Vec::new();
    for o in 0..base.object_count() {
        object_offset.push(objects.len());
        objects.extend((0..x.points(o).len()).map(|p| (o, p)));
    }
    let mut arrows = Vec::new();
    let mut arrow_offset = Vec::new();
    for (u, arrow) in base.arrows().iter().enumerate() {
        arrow_offset.push(arrows.len());
        for p in 0..x.points(arrow.target).len() {
            arrows.push(ElementArrow {
                base_arrow: u,
                point: p,
                source: object_offset[arrow.source] + x.restrict(u, p),
                target: object_offset[arrow.target] + p,
            });
        }
    }
    ElementsCategory {
        presheaf: x.clone(),
        objects,
        object_offset,
        arrows,
        arrow_offset,
    }
}

impl ElementsCategory {
    pub fn objects(&self) -> &[(Object, usize)] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ElementArrow] {
        &self.arrows
    }

    pub fn object_of(&self, xi: Object, p: usize) -> usize {
        self.object_offset[xi] + p
    }

    pub fn object_label(&self, e: usize) -> String {
        let (xi, p) = self.objects[e];
        format!("({}, {})", self.presheaf.base().objects()[xi], self.presheaf.points(xi)[p])
    }

    /// Identity arrow of `(ξ, p)`.
    pub fn identity(&self, e: usize) -> usize {
        let (xi, p) = self.objects[e];
        self.arrow_offset[self.presheaf.base().identity(xi)] + p
    }

    /// `a ∘ b`, defined when `b` ends where `a` starts.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let (ea, eb) = (self.arrows[a], self.arrows[b]);
        if eb.target != ea.source {
            return None;
        }
        let uw = self.presheaf.base().compose(ea.base_arrow, eb.base_arrow)?;
        Some(self.arrow_offset[uw] + ea.point)
    }

    /// The projection `G_X` on arrows.
    pub fn project(&self, a: usize) -> ArrowId {
        self.arrows[a].base_arrow
    }

    /// Whether `G_X` preserves endpoints, identities and composition.
    pub fn projection_is_functor(&self) -> bool {
        let base = self.presheaf.base();
        for a in &self.arrows {
            let u = base.arrow(a.base_arrow);
            if self.objects[a.source].0 != u.source || self.objects[a.target].0 != u.target {
                return false;
            }
        }
        for e in 0..self.objects.len() {
            let id = self.identity(e);
            if self.arrows[id].source != e || self.arrows[id].target != e {
                return false;
            }
            if self.project(id) != base.identity(self.objects[e].0) {
                return false;
            }
        }
        for a in 0..self.arrows.len() {
            for b in self.arrows_into(self.arrows[a].source) {
                let Some(ab) = self.compose(a, b) else {
                    return false;
                };
                if base.compose(self.project(a), self.project(b)) != Some(self.project(ab))
                    || self.arrows[ab].source != self.arrows[b].source
                    || self.arrows[ab].target != self.arrows[a].target
                {
                    return false;
                }
            }
        }
        true
    }

    /// Whether every arrow over an identity is itself an identity.
    pub fn fibres_are_discrete(&self) -> bool {
        let base = self.presheaf.base();
        self.arrows.iter().enumerate().all(|(i, a)| {
            let (xi, _) = self.objects[a.target];
            a.base_arrow != base.identity(xi) || (a.source == a.target && self.identity(a.target) == i)
        })
    }

    /// Arrows ending at element `e`.
    pub fn arrows_into(&self, e: usize) -> Vec<usize> {
        let (xi, p) = self.objects[e];
        self.presheaf
            .base()
            .arrows_into(xi)
            .into_iter()
            .map(|u| self.arrow_offset[u] + p)
            .collect()
    }

    /// Objects receiving exactly one arrow from every object.
    pub fn terminal_objects(&self) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&t| {
                let mut count = vec![0usize; self.objects.len()];
                for a in self.arrows_into(t) {
                    count[self.arrows[a].source] += 1;
                }
                count.iter().all(|&c| c == 1)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::presheaf::CoordinatizationModel;

    #[test]
    fn representable_terminal_objects_are_automorphisms() {
        // 2^1 has only its identity; 2^2 also has the atom swap.
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        for (xi, automorphisms) in [(0, 1), (1, 2)] {
            let y = SetPresheaf::representable(m.base().clone(), xi).unwrap();
            let el = category_of_elements(&y);
            let id_point = y.points(xi).iter().position(|p| p.starts_with("id_")).unwrap();
            let terminal = el.terminal_objects();
            assert_eq!(terminal.len(), automorphisms);
            assert!(terminal.contains(&el.object_of(xi, id_point)));
            assert!(el.projection_is_functor());
            assert!(el.fibres_are_discrete());
        }
    }

    #[test]
    fn empty_presheaf_has_empty_category() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let el = category_of_elements(&SetPresheaf::empty(m.base().clone()));
        assert!(el.objects().is_empty());
        assert!(el.arrows().is_empty());
    }

    #[test]
    fn terminal_presheaf_elements_mirror_the_base() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let base = m.base().clone();
        let el = category_of_elements(&SetPresheaf::terminal(Arc::clone(&base)));
        assert_eq!(el.objects().len(), base.object_count());
        assert_eq!(el.arrows().len(), base.arrows().len());
    }
}
