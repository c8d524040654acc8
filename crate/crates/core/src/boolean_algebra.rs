//! Finite Boolean algebras in powerset form.
//!
//! Every finite Boolean algebra is isomorphic to the powerset of its atoms,
//! so an algebra is stored as its ordered atom list and an element is a bit
//! mask over atom indices (bit `i` set iff atom `i` lies below the element).
//! Meet, join and complement are `&`, `|` and `top ^ x`.
//!
//! A homomorphism is stored only through the images of the source atoms;
//! its value on any other element is the join (union) of atom images.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum_logic::OrthomodularPoset;
use crate::report::Report;

/// An element of a [`FiniteBooleanAlgebra`]: a subset of atom indices.
pub type Subset = u32;

/// Largest atom count accepted by [`powerset_algebra`].
pub const MAX_LABELLED_ATOMS: usize = 5;

/// Largest atom count accepted by [`enumerate_boolean_homs`].
pub const MAX_ENUMERATED_ATOMS: usize = 4;

/// Internal ceiling on atoms (masks are `u32`; partitions use up to 7 cells).
pub(crate) const MAX_ATOMS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteBooleanAlgebra {
    atoms: Vec<String>,
}

/// Builds the powerset algebra on `labels`.
pub fn powerset_algebra<S: AsRef<str>>(labels: &[S]) -> Result<FiniteBooleanAlgebra> {
    if labels.len() > MAX_LABELLED_ATOMS {
        return Err(Error::bound("atom count", labels.len(), MAX_LABELLED_ATOMS));
    }
    FiniteBooleanAlgebra::from_atoms(labels.iter().map(|s| s.as_ref().to_owned()).collect())
}

impl FiniteBooleanAlgebra {
    /// Like [`powerset_algebra`] without the desk-scale label bound.
    pub(crate) fn from_atoms(atoms: Vec<String>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Empty("atom list"));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::bound("atom count", atoms.len(), MAX_ATOMS));
        }
        let mut seen = HashSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateLabel(a.clone()));
            }
        }
        Ok(FiniteBooleanAlgebra { atoms })
    }

    /// The algebra `2^n` with atoms `a`, `b`, `c`, ...
    pub fn standard(n: usize) -> Result<Self> {
        let atoms = (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect::<Vec<_>>();
        powerset_algebra(&atoms)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    /// Number of elements, always `2^atoms`.
    pub fn len(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> Subset {
        0
    }

    pub fn top(&self) -> Subset {
        ((1u64 << self.atoms.len()) - 1) as Subset
    }

    /// All elements in canonical (mask) order.
    pub fn elements(&self) -> impl Iterator<Item = Subset> {
        0..(self.len() as Subset)
    }

    pub fn meet(&self, a: Subset, b: Subset) -> Subset {
        a & b
    }

    pub fn join(&self, a: Subset, b: Subset) -> Subset {
        a | b
    }

    pub fn complement(&self, a: Subset) -> Subset {
        self.top() ^ a
    }

    pub fn leq(&self, a: Subset, b: Subset) -> bool {
        a & !b == 0
    }

    pub fn atom(&self, i: usize) -> Subset {
        1 << i
    }

    /// `0`, `1`, or the atoms of the element joined by `∨`.
    pub fn element_label(&self, e: Subset) -> String {
        if e == 0 {
            return "0".into();
        }
        if e == self.top() {
            return "1".into();
        }
        self.atoms_of(e).join("∨")
    }

    /// Atom labels below `e`, in atom order.
    pub fn atoms_of(&self, e: Subset) -> Vec<&str> {
        (0..self.atoms.len())
            .filter(|i| e & (1 << i) != 0)
            .map(|i| self.atoms[i].as_str())
            .collect()
    }

    /// Inverse of [`element_label`](Self::element_label).
    pub fn parse_element(&self, label: &str) -> Option<Subset> {
        match label.trim() {
            "0" => return Some(0),
            "1" => return Some(self.top()),
            _ => {}
        }
        let mut mask = 0;
        for part in label.split('∨') {
            mask |= self.atom(self.atom_index(part.trim())?);
        }
        Some(mask)
    }

    /// Mask of the listed atom labels.
    pub fn subset_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut mask = 0;
        for l in labels {
            let i = self.atom_index(l.as_ref()).ok_or_else(|| Error::Unknown {
                kind: "atom",
                name: l.as_ref().to_owned(),
            })?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// The same algebra viewed as a quantum event algebra. Element `i` of the
    /// result is the subset with mask `i`.
    pub fn to_event_algebra(&self) -> OrthomodularPoset {
        let n = self.len();
        let labels = self.elements().map(|e| self.element_label(e)).collect();
        let mut leq = vec![false; n * n];
        for a in self.elements() {
            for b in self.elements() {
                leq[a as usize * n + b as usize] = self.leq(a, b);
            }
        }
        let ortho = self.elements().map(|e| self.complement(e) as usize).collect();
        OrthomodularPoset::from_parts(labels, leq, ortho, self.top() as usize)
            .expect("powerset algebras are well formed")
    }
}

impl fmt::Display for FiniteBooleanAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{{{}}}", self.atoms.join(","))
    }
}

/// Laws checked by [`validate_boolean_hom`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BooleanHomLaw {
    Disjoint,
    JoinToTop,
    Bottom,
    Top,
    Meet,
    Join,
    Complement,
}

impl fmt::Display for BooleanHomLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BooleanHomLaw::Disjoint => "atom images not disjoint",
            BooleanHomLaw::JoinToTop => "atom images do not join to 1",
            BooleanHomLaw::Bottom => "0 not preserved",
            BooleanHomLaw::Top => "1 not preserved",
            BooleanHomLaw::Meet => "meet not preserved",
            BooleanHomLaw::Join => "join not preserved",
            BooleanHomLaw::Complement => "complement not preserved",
        })
    }
}

/// A map between finite Boolean algebras given by the images of source atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanHom {
    source: FiniteBooleanAlgebra,
    target: FiniteBooleanAlgebra,
    atom_map: Vec<Subset>,
}

impl BooleanHom {
    /// Structural checks only: one target element per source atom.
    /// Use [`validate_boolean_hom`] for the homomorphism laws.
    pub fn new(
        source: FiniteBooleanAlgebra,
        target: FiniteBooleanAlgebra,
        atom_map: Vec<Subset>,
    ) -> Result<Self> {
        if atom_map.len() != source.atom_count() {
            return Err(Error::structure(
                "Boolean hom",
                format!(
                    "atom_map has {} entries but {} has {} atoms",
                    atom_map.len(),
                    source,
                    source.atom_count()
                ),
            ));
        }
        if let Some(&bad) = atom_map.iter().find(|&&m| m > target.top()) {
            return Err(Error::structure(
                "Boolean hom",
                format!("image mask {bad:#b} is not an element of {target}"),
            ));
        }
        Ok(BooleanHom {
            source,
            target,
            atom_map,
        })
    }

    pub fn identity(algebra: &FiniteBooleanAlgebra) -> Self {
        BooleanHom {
            source: algebra.clone(),
            target: algebra.clone(),
            atom_map: (0..algebra.atom_count()).map(|i| 1 << i).collect(),
        }
    }

    pub fn source(&self) -> &FiniteBooleanAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteBooleanAlgebra {
        &self.target
    }

    pub fn atom_map(&self) -> &[Subset] {
        &self.atom_map
    }

    /// Value on an arbitrary element: the join of its atoms' images.
    pub fn apply(&self, e: Subset) -> Subset {
        self.atom_map
            .iter()
            .enumerate()
            .filter(|(i, _)| e & (1 << i) != 0)
            .fold(0, |acc, (_, &img)| acc | img)
    }

    /// The full element table, indexed by source mask.
    pub fn table(&self) -> Vec<Subset> {
        self.source.elements().map(|e| self.apply(e)).collect()
    }
}

impl fmt::Display for BooleanHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &img) in self.atom_map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}↦{}",
                self.source.atoms[i],
                self.target.element_label(img)
            )?;
        }
        write!(f, "]")
    }
}

pub fn validate_boolean_hom(h: &BooleanHom) -> Report<BooleanHomLaw> {
    let mut report = Report::new();
    let src = &h.source;
    let tgt = &h.target;
    let label = |e| tgt.element_label(e);

    for i in 0..h.atom_map.len() {
        for j in (i + 1)..h.atom_map.len() {
            let overlap = h.atom_map[i] & h.atom_map[j];
            if overlap != 0 {
                report.push(
                    BooleanHomLaw::Disjoint,
                    format!(
                        "h({}) ∧ h({}) = {}",
                        src.atoms[i],
                        src.atoms[j],
                        label(overlap)
                    ),
                );
            }
        }
    }
    let joined = h.atom_map.iter().fold(0, |acc, &m| acc | m);
    if joined != tgt.top() {
        report.push(
            BooleanHomLaw::JoinToTop,
            format!("join of atom images is {}", label(joined)),
        );
    }

    if h.apply(0) != 0 {
        report.push(BooleanHomLaw::Bottom, format!("h(0) = {}", label(h.apply(0))));
    }
    if h.apply(src.top()) != tgt.top() {
        report.push(
            BooleanHomLaw::Top,
            format!("h(1) = {}", label(h.apply(src.top()))),
        );
    }
    for a in src.elements() {
        let ha = h.apply(a);
        if h.apply(src.complement(a)) != tgt.complement(ha) {
            report.push(
                BooleanHomLaw::Complement,
                format!("a = {}", src.element_label(a)),
            );
        }
        for b in src.elements().filter(|&b| b > a) {
            let hb = h.apply(b);
            if h.apply(a & b) != ha & hb {
                report.push(
                    BooleanHomLaw::Meet,
                    format!("a = {}, b = {}", src.element_label(a), src.element_label(b)),
                );
            }
            if h.apply(a | b) != ha | hb {
                report.push(
                    BooleanHomLaw::Join,
                    format!("a = {}, b = {}", src.element_label(a), src.element_label(b)),
                );
            }
        }
    }
    report
}

/// `g ∘ f`; requires `f.target == g.source`.
pub fn compose_boolean_homs(g: &BooleanHom, f: &BooleanHom) -> Result<BooleanHom> {
    if f.target != g.source {
        return Err(Error::Mismatch {
            left: f.target.to_string(),
            right: g.source.to_string(),
        });
    }
    Ok(BooleanHom {
        source: f.source.clone(),
        target: g.target.clone(),
        atom_map: f.atom_map.iter().map(|&m| g.apply(m)).collect(),
    })
}

/// All Boolean homomorphisms `b → c`, sorted lexicographically by atom images.
///
/// A hom is the same thing as a function from the atoms of `c` to the atoms of
/// `b` (each target atom lies below exactly one source-atom image), so there
/// are `|atoms(b)|^|atoms(c)|` of them.
pub fn enumerate_boolean_homs(
    b: &FiniteBooleanAlgebra,
    c: &FiniteBooleanAlgebra,
) -> Result<Vec<BooleanHom>> {
    for alg in [b, c] {
        if alg.atom_count() > MAX_ENUMERATED_ATOMS {
            return Err(Error::bound(
                "atom count for hom enumeration",
                alg.atom_count(),
                MAX_ENUMERATED_ATOMS,
            ));
        }
    }
    let n = b.atom_count();
    let m = c.atom_count();
    let total = n.pow(m as u32);
    let mut homs = Vec::with_capacity(total);
    let mut choice = vec![0usize; m];
    for _ in 0..total {
        let mut atom_map = vec![0 as Subset; n];
        for (target_atom, &source_atom) in choice.iter().enumerate() {
            atom_map[source_atom] |= 1 << target_atom;
        }
        homs.push(BooleanHom {
            source: b.clone(),
            target: c.clone(),
            atom_map,
        });
        // odometer
        for digit in choice.iter_mut() {
            *digit += 1;
            if *digit < n {
                break;
            }
            *digit = 0;
        }
    }
    homs.sort_by(|x, y| x.atom_map.cmp(&y.atom_map));
    Ok(homs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(labels: &[&str]) -> FiniteBooleanAlgebra {
        powerset_algebra(labels).unwrap()
    }

    #[test]
    fn powerset_sizes_and_complement() {
        assert_eq!(alg(&["x"]).len(), 2);
        let xy = alg(&["x", "y"]);
        let labels: Vec<_> = xy.elements().map(|e| xy.element_label(e)).collect();
        assert_eq!(labels, ["0", "x", "y", "1"]);
        let abc = alg(&["a", "b", "c"]);
        assert_eq!(abc.len(), 8);
        let a = abc.subset_of(&["a"]).unwrap();
        assert_eq!(abc.complement(a), abc.subset_of(&["b", "c"]).unwrap());
    }

    #[test]
    fn constructor_errors() {
        match powerset_algebra(&["x", "y", "x"]) {
            Err(Error::DuplicateLabel(l)) => assert_eq!(l, "x"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            powerset_algebra::<&str>(&[]),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            powerset_algebra(&["a", "b", "c", "d", "e", "f"]),
            Err(Error::Bound { .. })
        ));
    }

    #[test]
    fn boolean_laws_exhaustive() {
        for n in 1..=4 {
            let b = FiniteBooleanAlgebra::standard(n).unwrap();
            for x in b.elements() {
                assert_eq!(b.complement(b.complement(x)), x);
                assert_eq!(b.meet(x, b.complement(x)), b.bottom());
                assert_eq!(b.join(x, b.complement(x)), b.top());
                for y in b.elements() {
                    assert_eq!(
                        b.complement(b.meet(x, y)),
                        b.join(b.complement(x), b.complement(y))
                    );
                    for z in b.elements() {
                        assert_eq!(
                            b.meet(x, b.join(y, z)),
                            b.join(b.meet(x, y), b.meet(x, z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hom_validation_examples() {
        let xy = alg(&["x", "y"]);
        assert!(validate_boolean_hom(&BooleanHom::identity(&xy)).is_ok());

        let one = alg(&["t"]);
        let both_to_top = BooleanHom::new(xy.clone(), one.clone(), vec![1, 1]).unwrap();
        let r = validate_boolean_hom(&both_to_top);
        assert!(r.cites(&BooleanHomLaw::Disjoint));
        assert_eq!(
            BooleanHomLaw::Disjoint.to_string(),
            "atom images not disjoint"
        );

        let partial = BooleanHom::new(one.clone(), xy.clone(), vec![0b01]).unwrap();
        let r = validate_boolean_hom(&partial);
        assert!(!r.is_ok());
        assert!(r.cites(&BooleanHomLaw::JoinToTop));
        assert!(!r.cites(&BooleanHomLaw::Disjoint));
    }

    #[test]
    fn atom_map_length_is_structural() {
        let xy = alg(&["x", "y"]);
        assert!(matches!(
            BooleanHom::new(xy.clone(), xy, vec![1]),
            Err(Error::Structure { .. })
        ));
    }

    #[test]
    fn composition_mismatch_names_both() {
        let a = alg(&["x"]);
        let b = alg(&["y", "z"]);
        let f = BooleanHom::identity(&a);
        let g = BooleanHom::identity(&b);
        match compose_boolean_homs(&g, &f) {
            Err(Error::Mismatch { left, right }) => {
                assert_eq!(left, "2^{x}");
                assert_eq!(right, "2^{y,z}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn enumeration_counts() {
        let s = |n| FiniteBooleanAlgebra::standard(n).unwrap();
        assert_eq!(enumerate_boolean_homs(&s(1), &s(1)).unwrap().len(), 1);
        assert_eq!(enumerate_boolean_homs(&s(2), &s(1)).unwrap().len(), 2);
        assert_eq!(enumerate_boolean_homs(&s(1), &s(2)).unwrap().len(), 1);
        assert!(enumerate_boolean_homs(&s(5), &s(1)).is_err());
    }

    #[test]
    fn labels_round_trip() {
        let b = alg(&["p", "q", "r"]);
        for e in b.elements() {
            assert_eq!(b.parse_element(&b.element_label(e)), Some(e));
        }
    }
}
