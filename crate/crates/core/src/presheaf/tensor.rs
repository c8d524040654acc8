use serde::Serialize;

use super::category::Object;
use super::model::{require_valid as require_valid_model, CoordinatizationModel};
use super::set_presheaf::{require_valid, SetPresheaf};
use crate::boolean_algebra::Subset;
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Largest `Σ_ξ |X(ξ)|·|A(ξ)|` accepted by [`tensor_product`].
pub const MAX_TENSOR_PAIRS: usize = 10_000;

/// A pair `p ⊗ q` with `p ∈ X(ξ)` and `q ∈ A(ξ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TensorPair {
    pub object: Object,
    pub point: usize,
    pub element: Subset,
}

/// `X ⊗ A`: the disjoint union of `X(ξ) × A(ξ)` modulo the equivalence
/// generated by `(p/v) ⊗ q́ ~ p ⊗ A(v)(q́)`.
///
/// Pairs are ordered by (object, point, element mask); classes are numbered
/// by their least pair, which is also their representative.
#[derive(Clone, Debug)]
pub struct TensorQuotient {
    pairs: Vec<TensorPair>,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl TensorQuotient {
    pub fn pairs(&self) -> &[TensorPair] {
        &self.pairs
    }

    pub fn pair_index(&self, object: Object, point: usize, element: Subset) -> usize {
        self.offsets[object] + point * self.sizes[object] + element as usize
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Members of each class, ascending pair indices.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, pair: usize) -> usize {
        self.class_of[pair]
    }

    pub fn class_of_pair(&self, object: Object, point: usize, element: Subset) -> usize {
        self.class_of[self.pair_index(object, point, element)]
    }

    pub fn representative(&self, class: usize) -> TensorPair {
        self.pairs[self.classes[class][0]]
    }

    /// `p ⊗ q` with the presheaf's point label and the algebra's element label.
    pub fn pair_label(&self, x: &SetPresheaf, model: &CoordinatizationModel, pair: usize) -> String {
        let t = self.pairs[pair];
        format!(
            "{} ⊗ {}",
            x.points(t.object)[t.point],
            model.algebra(t.object).element_label(t.element)
        )
    }
}

/// Computes `X ⊗ A` by union-find over the generating relations.
pub fn tensor_product(x: &SetPresheaf, model: &CoordinatizationModel) -> Result<TensorQuotient> {
    if **x.base() != **model.base() {
        return Err(Error::Mismatch {
            left: "presheaf base".into(),
            right: "model base".into(),
        });
    }
    require_valid(x)?;
    require_valid_model(model)?;
    let base = model.base();
    let mut offsets = Vec::new();
    let mut sizes = Vec::new();
    let mut pairs = Vec::new();
    for o in 0..base.object_count() {
        offsets.push(pairs.len());
        let size = model.algebra(o).len();
        sizes.push(size);
        let total = pairs.len() + x.points(o).len() * size;
        if total > MAX_TENSOR_PAIRS {
            return Err(Error::bound("tensor pair count", total, MAX_TENSOR_PAIRS));
        }
        for p in 0..x.points(o).len() {
            for q in model.algebra(o).elements() {
                pairs.push(TensorPair {
                    object: o,
                    point: p,
                    element: q,
                });
            }
        }
    }
    let mut quotient = TensorQuotient {
        pairs,
        offsets,
        sizes,
        class_of: Vec::new(),
        classes: Vec::new(),
    };
    let mut uf = UnionFind::new(quotient.pairs.len());
    for (v, arrow) in base.arrows().iter().enumerate() {
        for p in 0..x.points(arrow.target).len() {
            let restricted = x.restrict(v, p);
            for q in model.algebra(arrow.source).elements() {
                let left = quotient.pair_index(arrow.source, restricted, q);
                let right = quotient.pair_index(arrow.target, p, model.apply(v, q));
                uf.union(left, right);
            }
        }
    }
    let (class_of, classes) = uf.canonical_classes();
    quotient.class_of = class_of;
    quotient.classes = classes;
    Ok(quotient)
}

/// Outcome of [`unit_representable_iso`].
#[derive(Clone, Debug, Serialize)]
pub struct UnitReport {
    pub object: String,
    pub algebra_size: usize,
    pub class_count: usize,
    /// Class of `id_ξ ⊗ q` for each `q ∈ A(ξ)`.
    pub images: Vec<usize>,
    pub bijective: bool,
}

/// The canonical map `A(ξ) → y[ξ] ⊗ A`, `q ↦ [id_ξ ⊗ q]`, and whether it is
/// a bijection. Refuses to run on an invalid model.
pub fn unit_representable_iso(model: &CoordinatizationModel, xi: Object) -> Result<UnitReport> {
    require_valid_model(model)?;
    let base = model.base();
    let y = SetPresheaf::representable(base.clone(), xi)?;
    let t = tensor_product(&y, model)?;
    let id_point = base
        .hom(xi, xi)
        .iter()
        .position(|&a| a == base.identity(xi))
        .expect("identity lies in its hom-set");
    let images: Vec<usize> = model
        .algebra(xi)
        .elements()
        .map(|q| t.class_of_pair(xi, id_point, q))
        .collect();
    let mut hit = vec![false; t.class_count()];
    for &c in &images {
        hit[c] = true;
    }
    let injective = {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == images.len()
    };
    Ok(UnitReport {
        object: base.objects()[xi].clone(),
        algebra_size: model.algebra(xi).len(),
        class_count: t.class_count(),
        bijective: injective && hit.into_iter().all(|h| h),
        images,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::boolean_algebra::FiniteBooleanAlgebra;
    use crate::presheaf::FiniteCategory;

    #[test]
    fn one_object_base_identifies_nothing() {
        let alg = FiniteBooleanAlgebra::standard(2).unwrap();
        let m = CoordinatizationModel::from_arrows(vec![("B".into(), alg)], vec![]).unwrap();
        let x = SetPresheaf::new(m.base().clone(), vec![vec!["p".into(), "q".into()]], vec![vec![0, 1]]).unwrap();
        let t = tensor_product(&x, &m).unwrap();
        assert_eq!(t.class_count(), 8);
        let r = unit_representable_iso(&m, 0).unwrap();
        assert!(r.bijective);
        assert_eq!(r.images, vec![0, 1, 2, 3]);
    }

    #[test]
    fn representables_collapse_to_their_algebra() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        for xi in 0..2 {
            let y = SetPresheaf::representable(m.base().clone(), xi).unwrap();
            assert_eq!(tensor_product(&y, &m).unwrap().class_count(), m.algebra(xi).len());
        }
    }

    #[test]
    fn base_mismatch() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let other = Arc::new(FiniteCategory::discrete_point("x"));
        let x = SetPresheaf::terminal(other);
        assert!(matches!(tensor_product(&x, &m), Err(Error::Mismatch { .. })));
    }
}
