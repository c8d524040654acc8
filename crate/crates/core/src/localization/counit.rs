use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::PrelocSystem;
use crate::error::{Error, Result};
use crate::presheaf::{tensor_product, TensorQuotient};
use crate::quantum_logic::Event;

/// Most witnesses kept per failing flag.
const MAX_WITNESSES_PER_FLAG: usize = 8;

/// One class `[ψ ⊗ q]` of `S ⊗ A` and its image under the counit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounitClass {
    pub representative: String,
    pub size: usize,
    pub image: String,
}

/// The counit `ε: S ⊗ A → L`, `[ψ ⊗ q] ↦ ψ(q)`, and its verdict flags.
///
/// `preserves_orthogonal_joins` is informational and not part of
/// `is_localization`: it asks that `[ψ ⊗ (c ∨ d)]` map to `ψ(c) ⊕ ψ(d)` for
/// disjoint `c, d`.
#[derive(Clone, Debug, Serialize)]
pub struct CounitReport {
    #[serde(skip)]
    pub quotient: TensorQuotient,
    pub classes: Vec<CounitClass>,
    pub class_images: Vec<Event>,
    pub covering: bool,
    pub injective: bool,
    pub preserves_top: bool,
    pub preserves_ortho: bool,
    pub preserves_order: bool,
    pub preserves_orthogonal_joins: bool,
    pub is_localization: bool,
    pub witnesses: Vec<String>,
}

impl fmt::Display for CounitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "classes: {}", self.classes.len())?;
        for (i, c) in self.classes.iter().enumerate() {
            writeln!(f, "  {i}: [{}] ({} pairs) ↦ {}", c.representative, c.size, c.image)?;
        }
        writeln!(f, "covering: {}", self.covering)?;
        writeln!(f, "injective: {}", self.injective)?;
        writeln!(f, "preserves_top: {}", self.preserves_top)?;
        writeln!(f, "preserves_ortho: {}", self.preserves_ortho)?;
        writeln!(f, "preserves_order: {}", self.preserves_order)?;
        writeln!(f, "preserves_orthogonal_joins: {}", self.preserves_orthogonal_joins)?;
        writeln!(f, "is_localization: {}", self.is_localization)?;
        for w in &self.witnesses {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Witnesses {
    lines: Vec<String>,
    per_flag: usize,
}

impl Witnesses {
    fn start_flag(&mut self) {
        self.per_flag = 0;
    }

    fn push(&mut self, line: String) {
        if self.per_flag < MAX_WITNESSES_PER_FLAG {
            self.lines.push(line);
        }
        self.per_flag += 1;
    }

    fn finish_flag(&mut self, what: &str) {
        if self.per_flag > MAX_WITNESSES_PER_FLAG {
            self.lines
                .push(format!("{what}: {} further witnesses omitted", self.per_flag - MAX_WITNESSES_PER_FLAG));
        }
    }
}

/// Builds `S ⊗ A` and checks `ε` for surjectivity, injectivity and the
/// structure it must carry: `1`, `∗` and `≤`.
///
/// The quotient order relates `[x] ≤ [y]` when some chart `ψ_K` of the
/// system has `c ≤ d` with `[ψ_K ⊗ c] = [x]` and `[ψ_K ⊗ d] = [y]`; it must
/// agree with the order of the images in `L`.
pub fn counit(system: &PrelocSystem) -> Result<CounitReport> {
    let model = system.model();
    let l = system.target();
    let x = system.as_presheaf()?;
    let quotient = tensor_product(&x, model)?;
    let n_classes = quotient.class_count();

    let mut class_images = vec![usize::MAX; n_classes];
    for (i, t) in quotient.pairs().iter().enumerate() {
        let v = system.charts(t.object)[t.point].apply(t.element);
        let c = quotient.class_of(i);
        if class_images[c] == usize::MAX {
            class_images[c] = v;
        } else if class_images[c] != v {
            return Err(Error::Internal(format!(
                "class of {} has images {} and {}",
                quotient.pair_label(&x, model, i),
                l.label(class_images[c]),
                l.label(v)
            )));
        }
    }
    let class_label = |c: usize| quotient.pair_label(&x, model, quotient.classes()[c][0]);
    let mut w = Witnesses::default();

    w.start_flag();
    let hit: BTreeSet<Event> = class_images.iter().copied().collect();
    for e in l.elements().filter(|e| !hit.contains(e)) {
        w.push(format!("uncovered: {}", l.label(e)));
    }
    let covering = w.per_flag == 0;
    w.finish_flag("uncovered");

    w.start_flag();
    let mut first_with_image = vec![usize::MAX; l.len()];
    for (c, &v) in class_images.iter().enumerate() {
        if first_with_image[v] == usize::MAX {
            first_with_image[v] = c;
        } else {
            w.push(format!(
                "not injective: [{}] and [{}] both map to {}",
                class_label(first_with_image[v]),
                class_label(c),
                l.label(v)
            ));
        }
    }
    let injective = w.per_flag == 0;
    w.finish_flag("not injective");

    let base = model.base();
    let charts: Vec<(usize, usize)> = (0..base.object_count())
        .flat_map(|o| (0..system.charts(o).len()).map(move |p| (o, p)))
        .collect();

    w.start_flag();
    for &(o, p) in &charts {
        let top = model.algebra(o).top();
        let c = quotient.class_of_pair(o, p, top);
        if class_images[c] != l.top() {
            w.push(format!("top: [{}] maps to {}", class_label(c), l.label(class_images[c])));
        }
    }
    let preserves_top = w.per_flag == 0;
    w.finish_flag("top");

    // ∗ on classes, [ψ ⊗ q]∗ = [ψ ⊗ q′], must be well defined and match ∗ in L.
    w.start_flag();
    let mut class_ortho = vec![usize::MAX; n_classes];
    for &(o, p) in &charts {
        let alg = model.algebra(o);
        for q in alg.elements() {
            let c = quotient.class_of_pair(o, p, q);
            let d = quotient.class_of_pair(o, p, alg.complement(q));
            if class_ortho[c] == usize::MAX {
                class_ortho[c] = d;
                if class_images[d] != l.ortho(class_images[c]) {
                    w.push(format!(
                        "ortho: [{}]∗ maps to {}, not {}",
                        class_label(c),
                        l.label(class_images[d]),
                        l.label(l.ortho(class_images[c]))
                    ));
                }
            } else if class_ortho[c] != d {
                w.push(format!("ortho: [{}]∗ is not well defined", class_label(c)));
            }
        }
    }
    let preserves_ortho = w.per_flag == 0;
    w.finish_flag("ortho");

    w.start_flag();
    let mut witnessed = vec![false; n_classes * n_classes];
    for &(o, p) in &charts {
        let alg = model.algebra(o);
        for c in alg.elements() {
            for d in alg.elements().filter(|&d| alg.leq(c, d)) {
                let (cc, cd) = (quotient.class_of_pair(o, p, c), quotient.class_of_pair(o, p, d));
                witnessed[cc * n_classes + cd] = true;
            }
        }
    }
    for a in 0..n_classes {
        for b in 0..n_classes {
            let in_l = l.leq(class_images[a], class_images[b]);
            let in_quotient = witnessed[a * n_classes + b];
            if in_l && !in_quotient {
                w.push(format!(
                    "order: {} ≤ {} in L, but no chart orders [{}] below [{}]",
                    l.label(class_images[a]),
                    l.label(class_images[b]),
                    class_label(a),
                    class_label(b)
                ));
            } else if in_quotient && !in_l {
                w.push(format!(
                    "order: a chart orders [{}] below [{}], but {} ≰ {} in L",
                    class_label(a),
                    class_label(b),
                    l.label(class_images[a]),
                    l.label(class_images[b])
                ));
            }
        }
    }
    let preserves_order = w.per_flag == 0;
    w.finish_flag("order");

    let mut preserves_orthogonal_joins = true;
    'outer: for &(o, p) in &charts {
        let alg = model.algebra(o);
        for c in alg.elements() {
            for d in alg.elements().filter(|&d| d & c == 0) {
                let img = |q| class_images[quotient.class_of_pair(o, p, q)];
                if l.ortho_join(img(c), img(d)) != Some(img(c | d)) {
                    preserves_orthogonal_joins = false;
                    break 'outer;
                }
            }
        }
    }

    let classes = (0..n_classes)
        .map(|c| CounitClass {
            representative: class_label(c),
            size: quotient.classes()[c].len(),
            image: l.label(class_images[c]).to_owned(),
        })
        .collect();
    let is_localization = covering && injective && preserves_top && preserves_ortho && preserves_order;
    Ok(CounitReport {
        quotient,
        classes,
        class_images,
        covering,
        injective,
        preserves_top,
        preserves_ortho,
        preserves_order,
        preserves_orthogonal_joins,
        is_localization,
        witnesses: w.lines,
    })
}

/// Whether `system` is a localization: `ε` is a bijection preserving `1`,
/// `∗` and `≤`.
pub fn localization_verdict(system: &PrelocSystem) -> Result<(bool, CounitReport)> {
    let report = counit(system)?;
    Ok((report.is_localization, report))
}
