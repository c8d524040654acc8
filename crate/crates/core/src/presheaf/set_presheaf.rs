use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::category::{ArrowId, FiniteCategory, Object};
use crate::error::{Error, Result};
use crate::report::Report;

/// A contravariant set-valued functor on a finite base category.
///
/// `sets[ξ]` lists the labelled points of `X(ξ)`; for an arrow
/// `f: θ → ξ`, `maps[f][p]` is the index in `X(θ)` of the restriction
/// `p/f = X(f)(p)` of the point `p ∈ X(ξ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPresheaf {
    base: Arc<FiniteCategory>,
    sets: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

impl SetPresheaf {
    /// Shape checks only; see [`validate_presheaf`] for the functor laws.
    pub fn new(base: Arc<FiniteCategory>, sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if sets.len() != base.object_count() {
            return Err(Error::structure(
                "presheaf",
                format!("{} point sets for {} objects", sets.len(), base.object_count()),
            ));
        }
        if maps.len() != base.arrows().len() {
            return Err(Error::structure(
                "presheaf",
                format!("{} restriction maps for {} arrows", maps.len(), base.arrows().len()),
            ));
        }
        for (f, arrow) in base.arrows().iter().enumerate() {
            let (from, to) = (&sets[arrow.target], &sets[arrow.source]);
            if maps[f].len() != from.len() || maps[f].iter().any(|&q| q >= to.len()) {
                return Err(Error::structure(
                    "presheaf",
                    format!("restriction along `{}` is not a map X({}) → X({})", arrow.name, base.objects()[arrow.target], base.objects()[arrow.source]),
                ));
            }
        }
        Ok(SetPresheaf { base, sets, maps })
    }

    /// The presheaf with no points.
    pub fn empty(base: Arc<FiniteCategory>) -> Self {
        let sets = vec![Vec::new(); base.object_count()];
        let maps = vec![Vec::new(); base.arrows().len()];
        SetPresheaf { base, sets, maps }
    }

    /// The terminal presheaf: one point `*` everywhere.
    pub fn terminal(base: Arc<FiniteCategory>) -> Self {
        let sets = vec![vec!["*".to_owned()]; base.object_count()];
        let maps = vec![vec![0]; base.arrows().len()];
        SetPresheaf { base, sets, maps }
    }

    /// `y[ξ] = Hom(−, ξ)`: points of `y[ξ](θ)` are the arrows `θ → ξ` in
    /// arrow order, and `y[ξ](w)(v) = v ∘ w`.
    pub fn representable(base: Arc<FiniteCategory>, xi: Object) -> Result<Self> {
        if xi >= base.object_count() {
            return Err(Error::Unknown {
                kind: "object",
                name: xi.to_string(),
            });
        }
        let homs: Vec<Vec<ArrowId>> = (0..base.object_count()).map(|t| base.hom(t, xi)).collect();
        let sets = homs
            .iter()
            .map(|h| h.iter().map(|&a| base.arrow(a).name.clone()).collect())
            .collect();
        let maps = base
            .arrows()
            .iter()
            .enumerate()
            .map(|(w, arrow)| {
                homs[arrow.target]
                    .iter()
                    .map(|&v| {
                        let vw = base.compose(v, w).expect("composable");
                        homs[arrow.source].iter().position(|&u| u == vw).expect("composite lies in the hom-set")
                    })
                    .collect()
            })
            .collect();
        Ok(SetPresheaf { base, sets, maps })
    }

    /// `y[ξ]` for the object named `name`.
    pub fn representable_named(base: Arc<FiniteCategory>, name: &str) -> Result<Self> {
        let xi = base.object_index(name).ok_or_else(|| Error::Unknown {
            kind: "object",
            name: name.to_owned(),
        })?;
        Self::representable(base, xi)
    }

    /// Disjoint union; point labels are prefixed `0:` and `1:`.
    pub fn coproduct(&self, other: &SetPresheaf) -> Result<SetPresheaf> {
        if self.base != other.base {
            return Err(Error::Mismatch {
                left: self.base.to_string(),
                right: other.base.to_string(),
            });
        }
        let sets = self
            .sets
            .iter()
            .zip(&other.sets)
            .map(|(a, b)| {
                a.iter()
                    .map(|p| format!("0:{p}"))
                    .chain(b.iter().map(|p| format!("1:{p}")))
                    .collect()
            })
            .collect();
        let maps = self
            .base
            .arrows()
            .iter()
            .enumerate()
            .map(|(f, arrow)| {
                let shift = self.sets[arrow.source].len();
                self.maps[f]
                    .iter()
                    .copied()
                    .chain(other.maps[f].iter().map(|&q| q + shift))
                    .collect()
            })
            .collect();
        Ok(SetPresheaf {
            base: self.base.clone(),
            sets,
            maps,
        })
    }

    /// The sub-presheaf generated by the given points `(ξ, p)`: all their
    /// restrictions, relabelled with the original labels.
    pub fn generated_by(&self, points: &[(Object, usize)]) -> Result<SetPresheaf> {
        let mut keep: Vec<Vec<bool>> = self.sets.iter().map(|s| vec![false; s.len()]).collect();
        for &(xi, p) in points {
            if xi >= self.sets.len() || p >= self.sets[xi].len() {
                return Err(Error::structure("presheaf", "generator is not a point"));
            }
            for f in self.base.arrows_into(xi) {
                keep[self.base.arrow(f).source][self.maps[f][p]] = true;
            }
        }
        Ok(self.restrict_to(&keep))
    }

    /// The sub-presheaf on the kept points. Kept points must be closed under
    /// restriction.
    pub(crate) fn restrict_to(&self, keep: &[Vec<bool>]) -> SetPresheaf {
        let new_index: Vec<Vec<usize>> = keep
            .iter()
            .map(|k| {
                let mut next = 0;
                k.iter()
                    .map(|&kept| {
                        let i = if kept { next } else { usize::MAX };
                        next += kept as usize;
                        i
                    })
                    .collect()
            })
            .collect();
        let sets = self
            .sets
            .iter()
            .zip(keep)
            .map(|(s, k)| s.iter().zip(k).filter(|(_, &kept)| kept).map(|(p, _)| p.clone()).collect())
            .collect();
        let maps = self
            .base
            .arrows()
            .iter()
            .enumerate()
            .map(|(f, arrow)| {
                self.maps[f]
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| keep[arrow.target][*p])
                    .map(|(_, &q)| new_index[arrow.source][q])
                    .collect()
            })
            .collect();
        SetPresheaf {
            base: self.base.clone(),
            sets,
            maps,
        }
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    /// `X(ξ)`.
    pub fn points(&self, xi: Object) -> &[String] {
        &self.sets[xi]
    }

    pub fn point_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// `X(f)(p) = p/f`.
    pub fn restrict(&self, f: ArrowId, p: usize) -> usize {
        self.maps[f][p]
    }

    pub fn restriction_map(&self, f: ArrowId) -> &[usize] {
        &self.maps[f]
    }

    /// A copy with one restriction value overwritten (for building corrupted
    /// fixtures).
    pub fn with_restriction(&self, f: ArrowId, p: usize, q: usize) -> Result<SetPresheaf> {
        let mut maps = self.maps.clone();
        *maps
            .get_mut(f)
            .and_then(|m| m.get_mut(p))
            .ok_or_else(|| Error::structure("presheaf", "no such restriction entry"))? = q;
        SetPresheaf::new(self.base.clone(), self.sets.clone(), maps)
    }
}

impl fmt::Display for SetPresheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (o, name) in self.base.objects().iter().enumerate() {
            if o > 0 {
                writeln!(f)?;
            }
            write!(f, "X({name}) = {{{}}}", self.sets[o].join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PresheafLaw {
    Identity,
    Composition,
}

impl fmt::Display for PresheafLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresheafLaw::Identity => "X(id) = id",
            PresheafLaw::Composition => "X(g∘f) = X(f)∘X(g)",
        })
    }
}

/// Contravariant functor laws over every object and composable pair.
pub fn validate_presheaf(x: &SetPresheaf) -> Report<PresheafLaw> {
    let base = &x.base;
    let mut report = Report::new();
    for o in 0..base.object_count() {
        let id = base.identity(o);
        for p in 0..x.sets[o].len() {
            if x.maps[id][p] != p {
                report.push(
                    PresheafLaw::Identity,
                    format!("{}/id = {} in X({})", x.sets[o][p], x.sets[o][x.maps[id][p]], base.objects()[o]),
                );
            }
        }
    }
    let n = base.arrows().len();
    for g in 0..n {
        for f in 0..n {
            let Some(gf) = base.compose(g, f) else { continue };
            let target = base.arrow(g).target;
            let source = base.arrow(f).source;
            for p in 0..x.sets[target].len() {
                let direct = x.maps[gf][p];
                let stepwise = x.maps[f][x.maps[g][p]];
                if direct != stepwise {
                    report.push(
                        PresheafLaw::Composition,
                        format!(
                            "{p_label}/({g} ∘ {f}) = {a} but ({p_label}/{g})/{f} = {b}",
                            p_label = x.sets[target][p],
                            g = base.arrow(g).name,
                            f = base.arrow(f).name,
                            a = x.sets[source][direct],
                            b = x.sets[source][stepwise],
                        ),
                    );
                }
            }
        }
    }
    report
}

pub(crate) fn require_valid(x: &SetPresheaf) -> Result<()> {
    let r = validate_presheaf(x);
    if r.is_ok() {
        Ok(())
    } else {
        Err(Error::invalid("presheaf", &r))
    }
}
