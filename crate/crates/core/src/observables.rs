//! Observables on finite interval partitions of the real line.
//!
//! The Borel algebra is replaced by the Boolean algebra generated by the
//! cells `(-∞,b₁], (b₁,b₂], …, (b_k,∞)` of finitely many rational
//! breakpoints, and Borel functions by cell functions: maps sending every
//! source cell into one target cell, acting on observables through
//! preimages, `(Ξ ∙ f)(E) = Ξ(f⁻¹(E))`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::boolean_algebra::{FiniteBooleanAlgebra, Subset};
use crate::error::{Error, Result};
use crate::quantum_logic::blocks::{is_boolean_subalgebra, subalgebra_closure};
use crate::quantum_logic::{Event, OrthomodularPoset, QuantumHom};
use crate::report::Report;

/// Largest number of cells in a partition (laws are checked over all
/// `2^cells` unions).
pub const MAX_CELLS: usize = 6;

pub type Rational = Ratio<i64>;

/// The Boolean algebra of unions of cells cut out by `breakpoints`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionAlgebra {
    breakpoints: Vec<Rational>,
    algebra: FiniteBooleanAlgebra,
}

impl PartitionAlgebra {
    pub fn new(breakpoints: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() + 1 > MAX_CELLS {
            return Err(Error::bound("cell count", breakpoints.len() + 1, MAX_CELLS));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::structure(
                "partition",
                format!("breakpoints must increase strictly: {} then {}", w[0], w[1]),
            ));
        }
        let mut cells = Vec::with_capacity(breakpoints.len() + 1);
        let mut lower = "-∞".to_owned();
        for b in &breakpoints {
            cells.push(format!("({lower},{b}]"));
            lower = b.to_string();
        }
        cells.push(if breakpoints.is_empty() {
            "ℝ".to_owned()
        } else {
            format!("({lower},∞)")
        });
        let algebra = FiniteBooleanAlgebra::from_atoms(cells)?;
        Ok(PartitionAlgebra {
            breakpoints,
            algebra,
        })
    }

    /// Parses breakpoints such as `"0"`, `"1/2"`, `"-3"`.
    pub fn parse<S: AsRef<str>>(breakpoints: &[S]) -> Result<Self> {
        let values = breakpoints
            .iter()
            .map(|s| {
                Rational::from_str(s.as_ref().trim())
                    .map_err(|_| Error::Parse(format!("`{}` is not a rational number", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    /// The one-cell partition `{ℝ}`.
    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("one cell")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn cell_count(&self) -> usize {
        self.algebra.atom_count()
    }

    pub fn cell_label(&self, cell: usize) -> &str {
        &self.algebra.atoms()[cell]
    }

    /// The cells as a Boolean algebra (atom `i` = cell `i`).
    pub fn algebra(&self) -> &FiniteBooleanAlgebra {
        &self.algebra
    }

    /// Label of a union of cells.
    pub fn union_label(&self, cells: Subset) -> String {
        match cells {
            0 => "∅".into(),
            c if c == self.algebra.top() => "ℝ".into(),
            c => self.algebra.atoms_of(c).join("∪"),
        }
    }
}

impl fmt::Display for PartitionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cuts: Vec<String> = self.breakpoints.iter().map(|b| b.to_string()).collect();
        write!(f, "partition[{}]", cuts.join(", "))
    }
}

/// The observable conditions, in finite form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObservableLaw {
    /// `Ξ(∅) = 0`, `Ξ(ℝ) = 1`
    I,
    /// `E ∩ F = ∅ ⇒ Ξ(E) ⊥ Ξ(F)`
    II,
    /// `Ξ(E ∪ F) = Ξ(E) ∨ Ξ(F)` for disjoint `E`, `F`
    III,
}

impl fmt::Display for ObservableLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObservableLaw::I => "[i]",
            ObservableLaw::II => "[ii]",
            ObservableLaw::III => "[iii]",
        })
    }
}

impl Serialize for ObservableLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An assignment of an event to every cell of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    domain: PartitionAlgebra,
    codomain: Arc<OrthomodularPoset>,
    cell_map: Vec<Event>,
}

impl Observable {
    pub fn new(
        domain: PartitionAlgebra,
        codomain: Arc<OrthomodularPoset>,
        cell_map: Vec<Event>,
    ) -> Result<Self> {
        if cell_map.len() != domain.cell_count() {
            return Err(Error::structure(
                "observable",
                format!(
                    "{} cell images for {} cells",
                    cell_map.len(),
                    domain.cell_count()
                ),
            ));
        }
        if let Some(&bad) = cell_map.iter().find(|&&e| e >= codomain.len()) {
            return Err(Error::structure(
                "observable",
                format!("image index {bad} is outside the codomain"),
            ));
        }
        Ok(Observable {
            domain,
            codomain,
            cell_map,
        })
    }

    /// Cell images given by element labels, in cell order.
    pub fn from_labels<S: AsRef<str>>(
        domain: PartitionAlgebra,
        codomain: Arc<OrthomodularPoset>,
        images: &[S],
    ) -> Result<Self> {
        let map = images
            .iter()
            .map(|s| {
                codomain.index_of(s.as_ref()).ok_or_else(|| Error::Unknown {
                    kind: "element",
                    name: s.as_ref().to_owned(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, map)
    }

    pub fn domain(&self) -> &PartitionAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<OrthomodularPoset> {
        &self.codomain
    }

    pub fn cell_map(&self) -> &[Event] {
        &self.cell_map
    }

    /// `Ξ(E)` for a union of cells: the iterated orthogonal join of the cell
    /// images, `0` for the empty union, `None` if some step is undefined.
    pub fn value(&self, cells: Subset) -> Option<Event> {
        let l = &self.codomain;
        let mut acc = l.bottom();
        for c in 0..self.domain.cell_count() {
            if cells & (1 << c) != 0 {
                acc = l.ortho_join(acc, self.cell_map[c])?;
            }
        }
        Some(acc)
    }

    /// Label of `Ξ(E)`, or `undefined`.
    pub fn value_label(&self, cells: Subset) -> String {
        match self.value(cells) {
            Some(e) => self.codomain.label(e).to_owned(),
            None => "undefined".to_owned(),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (c, &e) in self.cell_map.iter().enumerate() {
            if c > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↦{}", self.domain.cell_label(c), self.codomain.label(e))?;
        }
        write!(f, "}}")
    }
}

/// Checks `[i]`, `[ii]` and finite `[iii]` over every union of cells.
///
/// An undefined union value is an additivity (`[iii]`) failure; `[i]` is
/// cited when `Ξ(ℝ)` exists but differs from `1`.
pub fn validate_observable(xi: &Observable) -> Report<ObservableLaw> {
    let l = &xi.codomain;
    let d = &xi.domain;
    let full: Subset = d.algebra.top();
    let mut report = Report::new();

    if let Some(v) = xi.value(full) {
        if v != l.top() {
            report.push(ObservableLaw::I, format!("Ξ(ℝ) = {}", l.label(v)));
        }
    }
    for e in 1..=full {
        for f in (e + 1)..=full {
            if e & f != 0 {
                continue;
            }
            if let (Some(ve), Some(vf)) = (xi.value(e), xi.value(f)) {
                if !l.orthogonal(ve, vf) {
                    report.push(
                        ObservableLaw::II,
                        format!(
                            "Ξ({}) = {} is not orthogonal to Ξ({}) = {}",
                            d.union_label(e),
                            l.label(ve),
                            d.union_label(f),
                            l.label(vf)
                        ),
                    );
                }
            }
        }
    }
    for e in 1..=full {
        if e.count_ones() < 2 {
            continue;
        }
        let Some(ve) = xi.value(e) else {
            report.push(
                ObservableLaw::III,
                format!("Ξ({}) is not the join of its cells", d.union_label(e)),
            );
            continue;
        };
        // Every split of e into two nonempty parts, each counted once.
        let mut f = (e - 1) & e;
        while f != 0 {
            let g = e ^ f;
            if f < g {
                let joined = match (xi.value(f), xi.value(g)) {
                    (Some(a), Some(b)) => l.ortho_join(a, b),
                    _ => None,
                };
                if joined != Some(ve) {
                    report.push(
                        ObservableLaw::III,
                        format!(
                            "Ξ({}) = {} but Ξ({}) ∨ Ξ({}) = {}",
                            d.union_label(e),
                            l.label(ve),
                            d.union_label(f),
                            d.union_label(g),
                            joined.map_or("undefined", |j| l.label(j))
                        ),
                    );
                }
            }
            f = (f - 1) & e;
        }
    }
    report
}

/// A map sending each source cell into one target cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFunction {
    source: PartitionAlgebra,
    target: PartitionAlgebra,
    cell_image: Vec<usize>,
}

impl CellFunction {
    /// From the target cell of each source cell.
    pub fn new(source: PartitionAlgebra, target: PartitionAlgebra, cell_image: Vec<usize>) -> Result<Self> {
        if cell_image.len() != source.cell_count() {
            return Err(Error::structure(
                "cell function",
                format!("{} images for {} source cells", cell_image.len(), source.cell_count()),
            ));
        }
        if let Some(&bad) = cell_image.iter().find(|&&c| c >= target.cell_count()) {
            return Err(Error::structure("cell function", format!("target cell {bad} does not exist")));
        }
        Ok(CellFunction {
            source,
            target,
            cell_image,
        })
    }

    /// From the preimage of each target cell. The preimages must partition
    /// the source cells.
    pub fn from_preimages(
        source: PartitionAlgebra,
        target: PartitionAlgebra,
        preimages: &[Vec<usize>],
    ) -> Result<Self> {
        if preimages.len() != target.cell_count() {
            return Err(Error::structure(
                "cell function",
                format!("{} preimages for {} target cells", preimages.len(), target.cell_count()),
            ));
        }
        let mut cell_image = vec![usize::MAX; source.cell_count()];
        for (t, cells) in preimages.iter().enumerate() {
            for &c in cells {
                if c >= source.cell_count() {
                    return Err(Error::structure("cell function", format!("source cell {c} does not exist")));
                }
                if cell_image[c] != usize::MAX {
                    return Err(Error::structure(
                        "cell function",
                        format!("preimages overlap in {}", source.cell_label(c)),
                    ));
                }
                cell_image[c] = t;
            }
        }
        if let Some(c) = cell_image.iter().position(|&t| t == usize::MAX) {
            return Err(Error::structure(
                "cell function",
                format!("preimages miss {}", source.cell_label(c)),
            ));
        }
        Ok(CellFunction {
            source,
            target,
            cell_image,
        })
    }

    pub fn identity(p: &PartitionAlgebra) -> Self {
        CellFunction {
            source: p.clone(),
            target: p.clone(),
            cell_image: (0..p.cell_count()).collect(),
        }
    }

    /// The map sending everything to the single cell `ℝ`.
    pub fn collapse(p: &PartitionAlgebra) -> Self {
        CellFunction {
            source: p.clone(),
            target: PartitionAlgebra::trivial(),
            cell_image: vec![0; p.cell_count()],
        }
    }

    pub fn source(&self) -> &PartitionAlgebra {
        &self.source
    }

    pub fn target(&self) -> &PartitionAlgebra {
        &self.target
    }

    pub fn cell_image(&self) -> &[usize] {
        &self.cell_image
    }

    /// `f⁻¹` of a union of target cells.
    pub fn preimage(&self, cells: Subset) -> Subset {
        self.cell_image
            .iter()
            .enumerate()
            .filter(|(_, &t)| cells & (1 << t) != 0)
            .fold(0, |m, (c, _)| m | 1 << c)
    }

    /// First `self`, then `g`: the function whose preimages are
    /// `self⁻¹(g⁻¹(E))`, so that `(Ξ ∙ f) ∙ g = Ξ ∙ f.then(g)`.
    pub fn then(&self, g: &CellFunction) -> Result<CellFunction> {
        if self.target != g.source {
            return Err(Error::Mismatch {
                left: self.target.to_string(),
                right: g.source.to_string(),
            });
        }
        Ok(CellFunction {
            source: self.source.clone(),
            target: g.target.clone(),
            cell_image: self.cell_image.iter().map(|&c| g.cell_image[c]).collect(),
        })
    }
}

/// The right action `Ξ ∙ f`: cell `e` of `f.target` goes to `Ξ(f⁻¹(e))`.
pub fn act_borel_function(xi: &Observable, f: &CellFunction) -> Result<Observable> {
    if f.source != xi.domain {
        return Err(Error::Mismatch {
            left: xi.domain.to_string(),
            right: f.source.to_string(),
        });
    }
    let report = validate_observable(xi);
    if !report.is_ok() {
        return Err(Error::invalid("observable", &report));
    }
    let cell_map = (0..f.target.cell_count())
        .map(|e| {
            xi.value(f.preimage(1 << e))
                .ok_or_else(|| Error::Internal("valid observable with undefined union".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Observable {
        domain: f.target.clone(),
        codomain: xi.codomain.clone(),
        cell_map,
    })
}

/// Outcome of [`observable_triangle_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TriangleCheck {
    pub holds: bool,
    /// First cell where `Θ` differs from `H ∘ Ξ`, with both values.
    pub mismatch: Option<CellMismatch>,
    pub theta_report: Report<ObservableLaw>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellMismatch {
    pub cell: String,
    pub expected: String,
    pub actual: String,
}

/// Whether `H: Ξ → Θ` is an arrow of observables: `Θ = H ∘ Ξ` cell-wise and
/// `Θ` is itself an observable.
pub fn observable_triangle_check(xi: &Observable, h: &QuantumHom, theta: &Observable) -> Result<TriangleCheck> {
    if **h.source() != *xi.codomain {
        return Err(Error::Mismatch {
            left: "hom source".into(),
            right: "codomain of Ξ".into(),
        });
    }
    if **h.target() != *theta.codomain {
        return Err(Error::Mismatch {
            left: "hom target".into(),
            right: "codomain of Θ".into(),
        });
    }
    if xi.domain != theta.domain {
        return Err(Error::Mismatch {
            left: xi.domain.to_string(),
            right: theta.domain.to_string(),
        });
    }
    let target = h.target();
    let mismatch = (0..xi.domain.cell_count()).find_map(|c| {
        let expected = h.apply(xi.cell_map[c]);
        let actual = theta.cell_map[c];
        (expected != actual).then(|| CellMismatch {
            cell: xi.domain.cell_label(c).to_owned(),
            expected: target.label(expected).to_owned(),
            actual: target.label(actual).to_owned(),
        })
    });
    let theta_report = validate_observable(theta);
    Ok(TriangleCheck {
        holds: mismatch.is_none() && theta_report.is_ok(),
        mismatch,
        theta_report,
    })
}

/// `Ξ = ψ ∘ ξ` through the Boolean subalgebra generated by the image of `Ξ`.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    /// Elements of the codomain forming `B_Ξ`, ascending.
    pub elements: Vec<Event>,
    /// `B_Ξ` as an event algebra (element `i` is `elements[i]`).
    pub algebra: Arc<OrthomodularPoset>,
    pub xi: Observable,
    pub psi: QuantumHom,
}

impl ImageFactorization {
    /// `B_Ξ` in powerset form, atoms labelled as in the codomain.
    pub fn boolean_algebra(&self) -> Result<FiniteBooleanAlgebra> {
        let l = &self.algebra;
        let atoms: Vec<String> = crate::quantum_logic::blocks::atoms(l)
            .into_iter()
            .map(|a| l.label(a).to_owned())
            .collect();
        if atoms.is_empty() {
            return Err(Error::structure("image algebra", "single-element algebra has no atoms"));
        }
        FiniteBooleanAlgebra::from_atoms(atoms)
    }
}

pub fn image_factorization(xi: &Observable) -> Result<ImageFactorization> {
    let report = validate_observable(xi);
    if !report.is_ok() {
        return Err(Error::invalid("observable", &report));
    }
    let l = &xi.codomain;
    let elements: Vec<Event> = subalgebra_closure(l, &xi.cell_map).into_iter().collect();
    if !is_boolean_subalgebra(l, &elements) {
        return Err(Error::structure(
            "image algebra",
            "the subalgebra generated by the image is not Boolean",
        ));
    }
    let algebra = Arc::new(l.restrict(&elements)?);
    let position = |e: Event| elements.binary_search(&e).expect("image lies in closure");
    let xi_b = Observable {
        domain: xi.domain.clone(),
        codomain: algebra.clone(),
        cell_map: xi.cell_map.iter().map(|&e| position(e)).collect(),
    };
    let psi = QuantumHom::new(algebra.clone(), l.clone(), elements.clone())?;
    Ok(ImageFactorization {
        elements,
        algebra,
        xi: xi_b,
        psi,
    })
}
