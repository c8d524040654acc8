use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{Chart, PrelocSystem};
use crate::boolean_algebra::Subset;
use crate::report::Report;

/// `A(ξ) ×_L A(ξ́)`: the pairs `(a, b)` with `φ(a) = ψ(b)`, in lexicographic
/// order. The projections are the two coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreProduct {
    pub pairs: Vec<(Subset, Subset)>,
}

impl FibreProduct {
    pub fn first(&self, k: usize) -> Subset {
        self.pairs[k].0
    }

    pub fn second(&self, k: usize) -> Subset {
        self.pairs[k].1
    }

    /// The unique `k` with `(first(k), second(k)) = (a, b)`, if `φ(a) = ψ(b)`.
    pub fn factor(&self, a: Subset, b: Subset) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }

    fn injective_on(&self, coord: impl Fn(&(Subset, Subset)) -> Subset) -> Option<(usize, usize)> {
        let mut seen: BTreeMap<Subset, usize> = BTreeMap::new();
        for (k, p) in self.pairs.iter().enumerate() {
            if let Some(&j) = seen.get(&coord(p)) {
                return Some((j, k));
            }
            seen.insert(coord(p), k);
        }
        None
    }
}

pub fn fibre_product(phi: &Chart, psi: &Chart) -> FibreProduct {
    let mut pairs = Vec::new();
    for (a, &x) in phi.map().iter().enumerate() {
        for (b, &y) in psi.map().iter().enumerate() {
            if x == y {
                pairs.push((a as Subset, b as Subset));
            }
        }
    }
    FibreProduct { pairs }
}

/// `Ω_{φ,ψ}`, from the `ψ`-side image of the fibre product to the `φ`-side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PastingMap {
    Defined(BTreeMap<Subset, Subset>),
    /// A projection is not injective; the witness names two pairs it merges.
    Undefined { witness: String },
}

impl PastingMap {
    pub fn as_map(&self) -> Option<&BTreeMap<Subset, Subset>> {
        match self {
            PastingMap::Defined(m) => Some(m),
            PastingMap::Undefined { .. } => None,
        }
    }
}

/// `Ω_{φ,ψ} = π_φ ∘ π_ψ⁻¹`, defined when both projections are injective.
pub fn pasting_map(phi: &Chart, psi: &Chart) -> PastingMap {
    let fp = fibre_product(phi, psi);
    let clash = fp
        .injective_on(|p| p.0)
        .map(|c| ("first", c))
        .or_else(|| fp.injective_on(|p| p.1).map(|c| ("second", c)));
    if let Some((side, (j, k))) = clash {
        return PastingMap::Undefined {
            witness: format!(
                "{side} projection merges pairs ({}, {}) and ({}, {})",
                fp.pairs[j].0, fp.pairs[j].1, fp.pairs[k].0, fp.pairs[k].1
            ),
        };
    }
    PastingMap::Defined(fp.pairs.iter().map(|&(a, b)| (b, a)).collect())
}

/// The compatibility conditions on pasting maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CocycleLaw {
    /// `Ω_{ξ,ξ} = 1`.
    Identity,
    /// `Ω_{ξ,ξ́}` and `Ω_{ξ́,ξ}` are mutually inverse.
    Symmetry,
    /// `Ω_{ξ,ξ́} ∘ Ω_{ξ́,ξ́́} = Ω_{ξ,ξ́́}` where both sides are defined.
    Triple,
}

impl fmt::Display for CocycleLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CocycleLaw::Identity => "identity",
            CocycleLaw::Symmetry => "symmetry",
            CocycleLaw::Triple => "triple",
        })
    }
}

/// A list of charts with the pasting map of every ordered pair.
///
/// Built from a system, the maps are exactly [`pasting_map`]; individual
/// maps can be replaced to model an inconsistent gluing.
#[derive(Clone, Debug)]
pub struct PastingAtlas {
    labels: Vec<Vec<String>>,
    chart_labels: Vec<String>,
    images: Vec<Vec<usize>>,
    maps: Vec<PastingMap>,
}

impl PastingAtlas {
    pub fn new(system: &PrelocSystem, charts: &[Chart]) -> Self {
        let model = system.model();
        let n = charts.len();
        let mut maps = Vec::with_capacity(n * n);
        for phi in charts {
            for psi in charts {
                maps.push(pasting_map(phi, psi));
            }
        }
        PastingAtlas {
            labels: charts
                .iter()
                .map(|c| {
                    let alg = model.algebra(c.object());
                    alg.elements().map(|q| alg.element_label(q)).collect()
                })
                .collect(),
            chart_labels: charts.iter().map(|c| system.chart_label(c)).collect(),
            images: charts.iter().map(|c| c.map().to_vec()).collect(),
            maps,
        }
    }

    pub fn from_system(system: &PrelocSystem) -> Self {
        let charts: Vec<Chart> = system.all_charts().cloned().collect();
        Self::new(system, &charts)
    }

    pub fn len(&self) -> usize {
        self.chart_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chart_labels.is_empty()
    }

    pub fn pasting(&self, i: usize, j: usize) -> &PastingMap {
        &self.maps[i * self.len() + j]
    }

    pub fn defined_count(&self) -> usize {
        self.maps.iter().filter(|m| m.as_map().is_some()).count()
    }

    pub fn with_pasting(mut self, i: usize, j: usize, map: PastingMap) -> Self {
        let n = self.len();
        self.maps[i * n + j] = map;
        self
    }

    /// Checks the three conditions on every pair and triple of charts whose
    /// maps are defined. Triples are checked when the three images share an
    /// element other than `0`, i.e. always for charts into one algebra with a
    /// top; the check is kept for tampered atlases.
    pub fn check(&self) -> Report<CocycleLaw> {
        let n = self.len();
        let mut report = Report::new();
        for i in 0..n {
            if let Some(m) = self.pasting(i, i).as_map() {
                if let Some((&b, &a)) = m.iter().find(|(b, a)| b != a) {
                    report.push(
                        CocycleLaw::Identity,
                        format!("Ω on {} sends {} to {}", self.chart_labels[i], self.labels[i][b as usize], self.labels[i][a as usize]),
                    );
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (fwd, back) = (self.pasting(i, j).as_map(), self.pasting(j, i).as_map());
                let ok = match (fwd, back) {
                    (Some(f), Some(b)) => f.len() == b.len() && f.iter().all(|(x, y)| b.get(y) == Some(x)),
                    (None, None) => true,
                    _ => false,
                };
                if !ok {
                    report.push(
                        CocycleLaw::Symmetry,
                        format!(
                            "Ω({}, {}) and Ω({}, {}) are not mutually inverse",
                            self.chart_labels[i], self.chart_labels[j], self.chart_labels[j], self.chart_labels[i]
                        ),
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let Some(ij) = self.pasting(i, j).as_map() else { continue };
                for k in 0..n {
                    let (Some(jk), Some(ik)) = (self.pasting(j, k).as_map(), self.pasting(i, k).as_map()) else {
                        continue;
                    };
                    if !self.triple_overlap(i, j, k) {
                        continue;
                    }
                    for (&x, &y) in jk {
                        let Some(&z) = ij.get(&y) else { continue };
                        if ik.get(&x) != Some(&z) {
                            report.push(
                                CocycleLaw::Triple,
                                format!(
                                    "Ω({a}, {b}) ∘ Ω({b}, {c}) sends {x} to {z}, Ω({a}, {c}) does not",
                                    a = self.chart_labels[i],
                                    b = self.chart_labels[j],
                                    c = self.chart_labels[k],
                                    x = self.labels[k][x as usize],
                                    z = self.labels[i][z as usize],
                                ),
                            );
                            break;
                        }
                    }
                }
            }
        }
        report
    }

    fn triple_overlap(&self, i: usize, j: usize, k: usize) -> bool {
        // Charts send 0 to 0, so index 0 of every image table is the bottom.
        let bottom = self.images[i][0];
        self.images[i]
            .iter()
            .any(|e| *e != bottom && self.images[j].contains(e) && self.images[k].contains(e))
    }
}

/// The cocycle conditions on all charts of `system`.
pub fn cocycle_check(system: &PrelocSystem) -> Report<CocycleLaw> {
    PastingAtlas::from_system(system).check()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::localization::generate_system;
    use crate::presheaf::CoordinatizationModel;
    use crate::quantum_logic::catalog;

    #[test]
    fn self_pullback_and_identity_pasting() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let l = Arc::new(catalog::mo2());
        let phi = Chart::from_atom_images(&m, 1, &l, &["a", "a*"]).unwrap();
        let fp = fibre_product(&phi, &phi);
        assert_eq!(fp.pairs, vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        let omega = pasting_map(&phi, &phi);
        assert_eq!(omega.as_map().unwrap().iter().filter(|(b, a)| b == a).count(), 4);
    }

    #[test]
    fn mo2_blocks_overlap_in_bottom_and_top() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let l = Arc::new(catalog::mo2());
        let a = Chart::from_atom_images(&m, 1, &l, &["a", "a*"]).unwrap();
        let b = Chart::from_atom_images(&m, 1, &l, &["b", "b*"]).unwrap();
        assert_eq!(fibre_product(&a, &b).pairs, vec![(0, 0), (3, 3)]);
        let omega = pasting_map(&a, &b);
        assert_eq!(omega.as_map().unwrap().clone(), BTreeMap::from([(0, 0), (3, 3)]));
    }

    #[test]
    fn collapse_chart_has_no_pasting_map() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let l = Arc::new(catalog::mo2());
        let a = Chart::from_atom_images(&m, 1, &l, &["a", "a*"]).unwrap();
        let collapse = Chart::from_atom_images(&m, 1, &l, &["1", "0"]).unwrap();
        assert!(matches!(pasting_map(&a, &collapse), PastingMap::Undefined { .. }));
    }

    #[test]
    fn generated_system_satisfies_the_cocycle_conditions() {
        let m = Arc::new(CoordinatizationModel::powerset_model(2).unwrap());
        let l = Arc::new(catalog::mo2());
        let seeds = [
            Chart::from_atom_images(&m, 1, &l, &["a", "a*"]).unwrap(),
            Chart::from_atom_images(&m, 1, &l, &["b", "b*"]).unwrap(),
        ];
        let s = generate_system(m, l, seeds).unwrap();
        assert!(cocycle_check(&s).is_ok());
    }

    #[test]
    fn tampered_symmetric_pair_breaks_only_the_triple() {
        let m = Arc::new(CoordinatizationModel::powerset_model(3).unwrap());
        let l = Arc::new(catalog::boolean(3));
        let charts = [
            Chart::from_atom_images(&m, 2, &l, &["a", "b", "c"]).unwrap(),
            Chart::from_atom_images(&m, 2, &l, &["b", "a", "c"]).unwrap(),
            Chart::from_atom_images(&m, 2, &l, &["c", "a", "b"]).unwrap(),
        ];
        let s = generate_system(m, l, charts.clone()).unwrap();
        let atlas = PastingAtlas::new(&s, &charts);
        assert!(atlas.check().is_ok());
        // Replace Ω(0, 2) and Ω(2, 0) by the identity on masks: still mutually
        // inverse, but no longer the composite through chart 1.
        let id: BTreeMap<Subset, Subset> = (0..8).map(|q| (q, q)).collect();
        let tampered = atlas
            .with_pasting(0, 2, PastingMap::Defined(id.clone()))
            .with_pasting(2, 0, PastingMap::Defined(id));
        let r = tampered.check();
        assert_eq!(r.laws().into_iter().collect::<Vec<_>>(), vec![CocycleLaw::Triple]);
    }
}
