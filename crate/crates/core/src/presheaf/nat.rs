use std::collections::HashSet;

use serde::Serialize;

use super::category::{FiniteCategory, Object};
use super::set_presheaf::{require_valid, SetPresheaf};
use crate::error::{Error, Result};

/// Upper bound on the number of transformations one enumeration may return.
pub const MAX_NATURAL_TRANSFORMATIONS: usize = 200_000;

/// Components `τ_ξ: X(ξ) → Y(ξ)`, indexed by object and then point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NaturalTransformation {
    pub components: Vec<Vec<usize>>,
}

impl NaturalTransformation {
    pub fn component(&self, xi: Object) -> &[usize] {
        &self.components[xi]
    }
}

/// The first failing naturality square, if any: for `f: θ → ξ` and
/// `p ∈ X(ξ)`, `τ_θ(p/f)` must equal `τ_ξ(p)/f`.
pub fn naturality_witness(x: &SetPresheaf, y: &SetPresheaf, tau: &NaturalTransformation) -> Option<String> {
    let base = x.base();
    for (f, arrow) in base.arrows().iter().enumerate() {
        for p in 0..x.points(arrow.target).len() {
            let lhs = tau.components[arrow.source][x.restrict(f, p)];
            let rhs = y.restrict(f, tau.components[arrow.target][p]);
            if lhs != rhs {
                return Some(format!(
                    "square for `{}` at {} does not commute",
                    arrow.name,
                    x.points(arrow.target)[p]
                ));
            }
        }
    }
    None
}

/// All natural transformations `X → Y`, sorted.
///
/// Points are assigned in decreasing order of how many points they restrict
/// to; each assignment forces the value at every restriction, so most
/// points are never branched on.
pub fn enumerate_natural_transformations(x: &SetPresheaf, y: &SetPresheaf) -> Result<Vec<NaturalTransformation>> {
    if x.base() != y.base() {
        return Err(Error::Mismatch {
            left: "base of X".into(),
            right: "base of Y".into(),
        });
    }
    require_valid(x)?;
    require_valid(y)?;
    let base = x.base();
    let n_obj = base.object_count();
    let into: Vec<Vec<usize>> = (0..n_obj).map(|o| base.arrows_into(o)).collect();

    let mut points: Vec<(Object, usize, usize)> = Vec::new();
    for o in 0..n_obj {
        for p in 0..x.points(o).len() {
            let reach: HashSet<(Object, usize)> = into[o]
                .iter()
                .map(|&f| (base.arrow(f).source, x.restrict(f, p)))
                .collect();
            points.push((o, p, reach.len()));
        }
    }
    points.sort_by(|a, b| b.2.cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));

    let mut search = Search {
        base,
        x,
        y,
        into: &into,
        tau: (0..n_obj).map(|o| vec![usize::MAX; x.points(o).len()]).collect(),
        trail: Vec::new(),
        out: Vec::new(),
    };
    search.run(&points, 0)?;
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct Search<'a> {
    base: &'a FiniteCategory,
    x: &'a SetPresheaf,
    y: &'a SetPresheaf,
    into: &'a [Vec<usize>],
    tau: Vec<Vec<usize>>,
    trail: Vec<(Object, usize)>,
    out: Vec<NaturalTransformation>,
}

impl Search<'_> {
    fn run(&mut self, points: &[(Object, usize, usize)], depth: usize) -> Result<()> {
        let Some(&(o, p, _)) = points[depth..].iter().find(|&&(o, p, _)| self.tau[o][p] == usize::MAX) else {
            self.out.push(NaturalTransformation {
                components: self.tau.clone(),
            });
            if self.out.len() > MAX_NATURAL_TRANSFORMATIONS {
                return Err(Error::bound(
                    "natural transformation count",
                    self.out.len(),
                    MAX_NATURAL_TRANSFORMATIONS,
                ));
            }
            return Ok(());
        };
        let next = depth + points[depth..].iter().position(|&(a, b, _)| (a, b) == (o, p)).unwrap();
        for v in 0..self.y.points(o).len() {
            let mark = self.trail.len();
            if self.assign(o, p, v) {
                self.run(points, next + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    fn assign(&mut self, o: Object, p: usize, v: usize) -> bool {
        self.tau[o][p] = v;
        self.trail.push((o, p));
        let mut work = vec![(o, p)];
        while let Some((o, p)) = work.pop() {
            let v = self.tau[o][p];
            for &f in &self.into[o] {
                let theta = self.base.arrow(f).source;
                let q = self.x.restrict(f, p);
                let w = self.y.restrict(f, v);
                match self.tau[theta][q] {
                    usize::MAX => {
                        self.tau[theta][q] = w;
                        self.trail.push((theta, q));
                        work.push((theta, q));
                    }
                    existing if existing != w => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for (o, p) in self.trail.drain(mark..) {
            self.tau[o][p] = usize::MAX;
        }
    }
}

/// Outcome of [`yoneda_full_faithful_check`].
#[derive(Clone, Debug, Serialize)]
pub struct YonedaCheck {
    pub holds: bool,
    pub pairs_checked: usize,
    pub failure: Option<String>,
}

/// For every pair of objects, compares `Nat(y[ξ], y[θ])` with the images
/// `y[v]` of the arrows `v: ξ → θ`. The base is validated first, so a
/// corrupted composition table is reported as an error.
pub fn yoneda_full_faithful_check(base: &std::sync::Arc<FiniteCategory>) -> Result<YonedaCheck> {
    let r = super::category::validate_category(base);
    if !r.is_ok() {
        return Err(Error::invalid("category", &r));
    }
    let n = base.object_count();
    let reps: Vec<SetPresheaf> = (0..n)
        .map(|o| SetPresheaf::representable(base.clone(), o))
        .collect::<Result<_>>()?;
    let homs: Vec<Vec<Vec<usize>>> = (0..n).map(|t| (0..n).map(|s| base.hom(s, t)).collect()).collect();
    let mut pairs = 0;
    for xi in 0..n {
        for theta in 0..n {
            pairs += 1;
            let nats: HashSet<NaturalTransformation> =
                enumerate_natural_transformations(&reps[xi], &reps[theta])?.into_iter().collect();
            let mut images = HashSet::new();
            for v in base.hom(xi, theta) {
                // y[v] at ζ sends u: ζ → ξ to v ∘ u.
                let components = (0..n)
                    .map(|zeta| {
                        homs[xi][zeta]
                            .iter()
                            .map(|&u| {
                                let vu = base.compose(v, u).expect("composable");
                                homs[theta][zeta].iter().position(|&w| w == vu).expect("in hom-set")
                            })
                            .collect()
                    })
                    .collect();
                let tau = NaturalTransformation { components };
                if !nats.contains(&tau) {
                    return Ok(YonedaCheck {
                        holds: false,
                        pairs_checked: pairs,
                        failure: Some(format!("y[{}] is not natural", base.arrow(v).name)),
                    });
                }
                images.insert(tau);
            }
            let arrows = base.hom(xi, theta).len();
            if images.len() != arrows || nats.len() != arrows {
                return Ok(YonedaCheck {
                    holds: false,
                    pairs_checked: pairs,
                    failure: Some(format!(
                        "{} → {}: {} arrows, {} distinct images, {} natural transformations",
                        base.objects()[xi],
                        base.objects()[theta],
                        arrows,
                        images.len(),
                        nats.len()
                    )),
                });
            }
        }
    }
    Ok(YonedaCheck {
        holds: true,
        pairs_checked: pairs,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::CoordinatizationModel;

    #[test]
    fn yoneda_on_small_bases() {
        let point = std::sync::Arc::new(FiniteCategory::discrete_point("x"));
        assert!(yoneda_full_faithful_check(&point).unwrap().holds);
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let check = yoneda_full_faithful_check(m.base()).unwrap();
        assert!(check.holds, "{check:?}");
        assert_eq!(check.pairs_checked, 4);
    }

    #[test]
    fn corrupted_base_is_refused() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let base = m.base();
        let v = base.hom(0, 1)[0];
        let bad = base.with_composite(base.identity(1), v, base.identity(0)).unwrap();
        assert!(yoneda_full_faithful_check(&std::sync::Arc::new(bad)).is_err());
    }

    #[test]
    fn maps_into_terminal_are_unique() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let y = SetPresheaf::representable(m.base().clone(), 1).unwrap();
        let t = SetPresheaf::terminal(m.base().clone());
        let nats = enumerate_natural_transformations(&y, &t).unwrap();
        assert_eq!(nats.len(), 1);
        assert!(naturality_witness(&y, &t, &nats[0]).is_none());
        let sections = enumerate_natural_transformations(&t, &y).unwrap();
        for s in &sections {
            assert!(naturality_witness(&t, &y, s).is_none());
        }
    }
}
