use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use super::category::Object;
use super::hom_presheaf::hom_presheaf;
use super::model::CoordinatizationModel;
use super::nat::{enumerate_natural_transformations, NaturalTransformation, MAX_NATURAL_TRANSFORMATIONS};
use super::set_presheaf::SetPresheaf;
use super::tensor::{tensor_product, TensorQuotient};
use crate::boolean_algebra::Subset;
use crate::error::{Error, Result};
use crate::quantum_logic::{validate_event_algebra, Event, OrthomodularPoset};

/// Every assignment `κ: classes of X ⊗ A → L` whose components
/// `q ↦ κ[p ⊗ q]` are quantum homs `A(ξ) → L` for all points `p ∈ X(ξ)`.
///
/// These are the cocones `k_(ξ,p) = κ[p ⊗ −]`: the compatibility
/// `k_(θ, p/v) = k_(ξ,p) ∘ A(v)` holds because both sides read `κ` on the
/// same class. Results are sorted.
pub fn enumerate_cocone_maps(
    x: &SetPresheaf,
    model: &CoordinatizationModel,
    l: &OrthomodularPoset,
    quotient: &TensorQuotient,
) -> Result<Vec<Vec<Event>>> {
    let r = validate_event_algebra(l);
    if !r.is_ok() {
        return Err(Error::invalid("target algebra", &r));
    }
    let base = model.base();
    let mut points: Vec<(Object, usize)> = Vec::new();
    for o in 0..base.object_count() {
        points.extend((0..x.points(o).len()).map(|p| (o, p)));
    }
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); quotient.class_count()];
    for (i, &(o, p)) in points.iter().enumerate() {
        for q in model.algebra(o).elements() {
            let c = quotient.class_of_pair(o, p, q);
            if touching[c].last() != Some(&i) {
                touching[c].push(i);
            }
        }
    }
    let mut search = CoconeSearch {
        model,
        l,
        quotient,
        points: &points,
        touching: &touching,
        kappa: vec![usize::MAX; quotient.class_count()],
        trail: Vec::new(),
        out: Vec::new(),
    };
    let mut ok = true;
    for &(o, p) in &points {
        let top = model.algebra(o).top();
        ok &= search.assign(quotient.class_of_pair(o, p, 0), l.bottom());
        ok &= ok && search.assign(quotient.class_of_pair(o, p, top), l.top());
    }
    if ok {
        search.run(0)?;
    }
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct CoconeSearch<'a> {
    model: &'a CoordinatizationModel,
    l: &'a OrthomodularPoset,
    quotient: &'a TensorQuotient,
    points: &'a [(Object, usize)],
    touching: &'a [Vec<usize>],
    kappa: Vec<Event>,
    trail: Vec<usize>,
    out: Vec<Vec<Event>>,
}

impl CoconeSearch<'_> {
    fn run(&mut self, from: usize) -> Result<()> {
        let Some(c) = (from..self.kappa.len()).find(|&c| self.kappa[c] == usize::MAX) else {
            self.out.push(self.kappa.clone());
            if self.out.len() > MAX_NATURAL_TRANSFORMATIONS {
                return Err(Error::bound("cocone count", self.out.len(), MAX_NATURAL_TRANSFORMATIONS));
            }
            return Ok(());
        };
        for v in self.l.elements() {
            let mark = self.trail.len();
            if self.assign(c, v) {
                self.run(c + 1)?;
            }
            for c in self.trail.drain(mark..) {
                self.kappa[c] = usize::MAX;
            }
        }
        Ok(())
    }

    /// Sets `κ(c) = v`, forces complements, and checks every touched point.
    fn assign(&mut self, c: usize, v: Event) -> bool {
        let mut work = vec![(c, v)];
        let mut touched = Vec::new();
        while let Some((c, v)) = work.pop() {
            match self.kappa[c] {
                usize::MAX => {
                    self.kappa[c] = v;
                    self.trail.push(c);
                    touched.push(c);
                }
                existing if existing == v => continue,
                _ => return false,
            }
            for &pair in &self.quotient.classes()[c] {
                let t = self.quotient.pairs()[pair];
                let top = self.model.algebra(t.object).top();
                let partner = self.quotient.class_of_pair(t.object, t.point, top ^ t.element);
                work.push((partner, self.l.ortho(v)));
            }
        }
        touched
            .iter()
            .flat_map(|&c| self.touching[c].iter())
            .all(|&i| self.point_consistent(i))
    }

    /// Order and join conditions on the assigned part of one component.
    fn point_consistent(&self, i: usize) -> bool {
        let (o, p) = self.points[i];
        let alg = self.model.algebra(o);
        let value = |q: Subset| self.kappa[self.quotient.class_of_pair(o, p, q)];
        let l = self.l;
        for q in alg.elements() {
            let vq = value(q);
            if vq == usize::MAX {
                continue;
            }
            for r in alg.elements() {
                let vr = value(r);
                if vr == usize::MAX {
                    continue;
                }
                if q & !r == 0 && !l.leq(vq, vr) {
                    return false;
                }
                if q & r == 0 && q < r {
                    let vj = value(q | r);
                    if vj != usize::MAX {
                        match l.join(vq, vr) {
                            Some(j) if l.leq(vj, j) => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }
}

/// Outcome of [`adjunction_bijection`].
#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    /// `|Nat(X, R(L))|`
    pub nat_count: usize,
    /// Number of cocone maps `X ⊗ A → L`.
    pub hom_count: usize,
    /// Every cocone map yields a natural transformation under `r`.
    pub r_lands_in_nat: bool,
    /// Every natural transformation yields a consistent cocone map under `l`.
    pub l_lands_in_hom: bool,
    pub l_after_r_is_identity: bool,
    pub r_after_l_is_identity: bool,
    pub holds: bool,
}

/// Enumerates both sides of `Nat(X, R(L)) ≅ Hom(X ⊗ A, L)` independently and
/// checks that `r(κ)_ξ(p) = κ[p ⊗ −]` and `l(τ)[p ⊗ q] = τ_ξ(p)(q)` are
/// mutually inverse bijections.
pub fn adjunction_bijection(
    x: &SetPresheaf,
    model: &CoordinatizationModel,
    l: &Arc<OrthomodularPoset>,
) -> Result<AdjunctionReport> {
    let r_l = hom_presheaf(model, l)?;
    let nats = enumerate_natural_transformations(x, r_l.presheaf())?;
    let quotient = tensor_product(x, model)?;
    let homs = enumerate_cocone_maps(x, model, l, &quotient)?;
    let base = model.base();

    let nat_set: HashSet<&NaturalTransformation> = nats.iter().collect();
    let hom_index: HashMap<&Vec<Event>, usize> = homs.iter().enumerate().map(|(i, h)| (h, i)).collect();

    let r = |kappa: &Vec<Event>| -> Option<NaturalTransformation> {
        let components = (0..base.object_count())
            .map(|o| {
                (0..x.points(o).len())
                    .map(|p| {
                        let map: Vec<Event> = model
                            .algebra(o)
                            .elements()
                            .map(|q| kappa[quotient.class_of_pair(o, p, q)])
                            .collect();
                        r_l.point_of(o, &map)
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(NaturalTransformation { components })
    };
    let l_map = |tau: &NaturalTransformation| -> Option<Vec<Event>> {
        let mut kappa = vec![usize::MAX; quotient.class_count()];
        for (i, t) in quotient.pairs().iter().enumerate() {
            let v = r_l.charts(t.object)[tau.components[t.object][t.point]].apply(t.element as usize);
            let c = quotient.class_of(i);
            if kappa[c] == usize::MAX {
                kappa[c] = v;
            } else if kappa[c] != v {
                return None;
            }
        }
        Some(kappa)
    };

    let mut r_lands_in_nat = true;
    let mut l_after_r_is_identity = true;
    for kappa in &homs {
        match r(kappa) {
            Some(tau) if nat_set.contains(&tau) => {
                if l_map(&tau).as_ref() != Some(kappa) {
                    l_after_r_is_identity = false;
                }
            }
            _ => {
                r_lands_in_nat = false;
                l_after_r_is_identity = false;
            }
        }
    }
    let mut l_lands_in_hom = true;
    let mut r_after_l_is_identity = true;
    for tau in &nats {
        match l_map(tau) {
            Some(kappa) if hom_index.contains_key(&kappa) => {
                if r(&kappa).as_ref() != Some(tau) {
                    r_after_l_is_identity = false;
                }
            }
            _ => {
                l_lands_in_hom = false;
                r_after_l_is_identity = false;
            }
        }
    }
    let holds = nats.len() == homs.len()
        && r_lands_in_nat
        && l_lands_in_hom
        && l_after_r_is_identity
        && r_after_l_is_identity;
    Ok(AdjunctionReport {
        nat_count: nats.len(),
        hom_count: homs.len(),
        r_lands_in_nat,
        l_lands_in_hom,
        l_after_r_is_identity,
        r_after_l_is_identity,
        holds,
    })
}
