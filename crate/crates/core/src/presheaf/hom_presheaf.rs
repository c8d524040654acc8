use std::collections::HashMap;
use std::sync::Arc;

use super::category::Object;
use super::model::{require_valid, CoordinatizationModel};
use super::set_presheaf::SetPresheaf;
use crate::error::{Error, Result};
use crate::quantum_logic::{enumerate_quantum_homs, Event, OrthomodularPoset, QuantumHom};

/// Largest total number of charts in a hom-presheaf.
pub const MAX_HOM_PRESHEAF_POINTS: usize = 5_000;

/// `R(L): ξ ↦ Hom(A(ξ), L)` with restriction by precomposition, together
/// with the quantum homs behind its points.
#[derive(Clone, Debug)]
pub struct HomPresheaf {
    presheaf: SetPresheaf,
    charts: Vec<Vec<QuantumHom>>,
    index: Vec<HashMap<Vec<Event>, usize>>,
}

impl HomPresheaf {
    pub fn presheaf(&self) -> &SetPresheaf {
        &self.presheaf
    }

    /// The homs `A(ξ) → L`, in point order (sorted by image table).
    pub fn charts(&self, xi: Object) -> &[QuantumHom] {
        &self.charts[xi]
    }

    /// Point index of the hom with the given image table.
    pub fn point_of(&self, xi: Object, map: &[Event]) -> Option<usize> {
        self.index[xi].get(map).copied()
    }
}

/// Label of a chart `A(ξ) → L` by its atom images, e.g. `[a↦p, b↦q∨r]`.
pub fn chart_label(model: &CoordinatizationModel, xi: Object, l: &OrthomodularPoset, map: &[Event]) -> String {
    let alg = model.algebra(xi);
    let parts: Vec<String> = (0..alg.atom_count())
        .map(|i| format!("{}↦{}", alg.atoms()[i], l.label(map[alg.atom(i) as usize])))
        .collect();
    format!("[{}]", parts.join(", "))
}

pub fn hom_presheaf(model: &CoordinatizationModel, l: &Arc<OrthomodularPoset>) -> Result<HomPresheaf> {
    require_valid(model)?;
    let base = model.base();
    let mut charts = Vec::new();
    let mut total = 0;
    for o in 0..base.object_count() {
        let homs = enumerate_quantum_homs(model.event_algebra(o), l)?;
        total += homs.len();
        if total > MAX_HOM_PRESHEAF_POINTS {
            return Err(Error::bound("hom-presheaf size", total, MAX_HOM_PRESHEAF_POINTS));
        }
        charts.push(homs);
    }
    let index: Vec<HashMap<Vec<Event>, usize>> = charts
        .iter()
        .map(|hs| hs.iter().enumerate().map(|(i, h)| (h.map().to_vec(), i)).collect())
        .collect();
    let sets = charts
        .iter()
        .enumerate()
        .map(|(o, hs)| hs.iter().map(|h| chart_label(model, o, l, h.map())).collect())
        .collect();
    let maps = base
        .arrows()
        .iter()
        .enumerate()
        .map(|(v, arrow)| {
            let source_alg = model.algebra(arrow.source);
            charts[arrow.target]
                .iter()
                .map(|psi| {
                    let pre: Vec<Event> = source_alg
                        .elements()
                        .map(|q| psi.apply(model.apply(v, q) as usize))
                        .collect();
                    index[arrow.source]
                        .get(&pre)
                        .copied()
                        .ok_or_else(|| Error::Internal("precomposite of a hom is not a hom".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let presheaf = SetPresheaf::new(base.clone(), sets, maps)?;
    Ok(HomPresheaf {
        presheaf,
        charts,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::validate_presheaf;
    use crate::quantum_logic::catalog;

    #[test]
    fn counts_over_small_targets() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let r = hom_presheaf(&m, &Arc::new(catalog::boolean(1))).unwrap();
        assert_eq!(r.charts(0).len(), 1);
        let r = hom_presheaf(&m, &Arc::new(catalog::mo2())).unwrap();
        assert_eq!(r.charts(1).len(), 6);
        assert!(validate_presheaf(r.presheaf()).is_ok());
    }
}
