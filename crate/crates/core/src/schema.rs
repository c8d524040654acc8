//! JSON documents for every input and output kind, and a [`Loader`] that
//! turns them into library values.
//!
//! Wherever a document expects an event algebra or a model it accepts a
//! reference: an inline document, a catalog name, or a path to another file
//! (resolved relative to the referring file).
//!
//! | kind | shape |
//! |---|---|
//! | Boolean algebra | `{"atoms": ["x", "y"]}` |
//! | Boolean hom | `{"source": …, "target": …, "atom_map": {"x": ["a"], "y": ["b", "c"]}}` |
//! | event algebra | `{"elements": […], "leq": [["0", "a"], …], "ortho": {"a": "a*", …}, "top": "1"}` |
//! | | `{"blocks": [["a1", "a2"], ["b1", "b2"]]}`, `{"dim": 2, "rays": [[1, 0], [1, 1]]}`, `{"catalog": "MO2"}` |
//! | quantum hom | `{"source": <algebra>, "target": <algebra>, "map": {"a": "x", …}}` |
//! | partition | `{"breakpoints": ["0", "1/2", "3"]}` |
//! | observable | `{"partition": …, "target": <algebra>, "map": {"(-∞,0]": "a", …}}` |
//! | cell function | `{"source": …, "target": …, "preimages": {"ℝ": ["(-∞,0]", "(0,∞)"]}}` |
//! | model | `{"powerset": 2}` or `{"objects": [{"name", "atoms"}], "arrows": [{"name", "source", "target", "atom_map"}]}` |
//! | category | `{"objects": […], "arrows": [{"name", "source", "target"}], "composition": [["g", "f", "g∘f"]]}` |
//! | presheaf | `{"model": …, "sets": {"2^1": […]}, "maps": {"v": {"p": "q"}}}`, or `"representable"` / `"terminal"` |
//! | system | `{"target": <algebra>, "model": <model>, "seeds": [{"object": "2^2", "atom_map": {"a": "a", "b": "a*"}}]}` |

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boolean_algebra::{powerset_algebra, BooleanHom, FiniteBooleanAlgebra};
use crate::error::{Error, Result};
use crate::localization::{generate_system, Chart, PrelocSystem};
use crate::observables::{CellFunction, Observable, PartitionAlgebra};
use crate::presheaf::{Arrow, CoordinatizationModel, FiniteCategory, SetPresheaf};
use crate::quantum_logic::{
    catalog, max_elements_from_env, maximal_boolean_subalgebras, paste_boolean_blocks, subspace_event_algebra,
    validate_event_algebra, OrthomodularPoset, PastingSpec, QuantumHom,
};

/// Deepest chain of file references followed.
const MAX_REF_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanAlgebraDoc {
    pub atoms: Vec<String>,
}

impl BooleanAlgebraDoc {
    pub fn of(a: &FiniteBooleanAlgebra) -> Self {
        BooleanAlgebraDoc {
            atoms: a.atoms().to_vec(),
        }
    }

    pub fn build(&self) -> Result<FiniteBooleanAlgebra> {
        powerset_algebra(&self.atoms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanHomDoc {
    pub source: BooleanAlgebraDoc,
    pub target: BooleanAlgebraDoc,
    pub atom_map: IndexMap<String, Vec<String>>,
}

impl BooleanHomDoc {
    pub fn of(h: &BooleanHom) -> Self {
        BooleanHomDoc {
            source: BooleanAlgebraDoc::of(h.source()),
            target: BooleanAlgebraDoc::of(h.target()),
            atom_map: atom_map_doc(h),
        }
    }

    pub fn build(&self) -> Result<BooleanHom> {
        build_boolean_hom(self.source.build()?, self.target.build()?, &self.atom_map)
    }
}

fn atom_map_doc(h: &BooleanHom) -> IndexMap<String, Vec<String>> {
    h.source()
        .atoms()
        .iter()
        .zip(h.atom_map())
        .map(|(a, &m)| (a.clone(), h.target().atoms_of(m).into_iter().map(str::to_owned).collect()))
        .collect()
}

fn build_boolean_hom(
    source: FiniteBooleanAlgebra,
    target: FiniteBooleanAlgebra,
    atom_map: &IndexMap<String, Vec<String>>,
) -> Result<BooleanHom> {
    let mut masks = vec![None; source.atom_count()];
    for (atom, image) in atom_map {
        let i = source.atom_index(atom).ok_or_else(|| Error::Unknown {
            kind: "source atom",
            name: atom.clone(),
        })?;
        masks[i] = Some(target.subset_of(image)?);
    }
    let masks = masks
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| Error::structure("Boolean hom", format!("atom `{}` has no image", source.atoms()[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    BooleanHom::new(source, target, masks)
}

/// An event algebra listed element by element. `leq` is taken literally
/// unless `close_leq` asks for its reflexive-transitive closure; `top`
/// defaults to the unique element above every other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmpDoc {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub close_leq: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<String>>>,
}

impl OmpDoc {
    /// The full order relation and `∗`; blocks are included when the
    /// algebra is valid and small enough to search.
    pub fn of(l: &OrthomodularPoset) -> Self {
        let mut leq = Vec::new();
        for a in l.elements() {
            for b in l.elements().filter(|&b| l.leq(a, b)) {
                leq.push((l.label(a).to_owned(), l.label(b).to_owned()));
            }
        }
        let blocks = validate_event_algebra(l)
            .is_ok()
            .then(|| maximal_boolean_subalgebras(l).ok())
            .flatten()
            .map(|bs| bs.iter().map(|b| b.iter().map(|&e| l.label(e).to_owned()).collect()).collect());
        OmpDoc {
            elements: l.labels().to_vec(),
            leq,
            ortho: l
                .elements()
                .map(|e| (l.label(e).to_owned(), l.label(l.ortho(e)).to_owned()))
                .collect(),
            top: Some(l.label(l.top()).to_owned()),
            close_leq: false,
            blocks,
        }
    }

    pub fn build(&self) -> Result<OrthomodularPoset> {
        let limit = max_elements_from_env()?;
        if self.elements.len() > limit {
            return Err(Error::bound("event algebra size", self.elements.len(), limit));
        }
        let n = self.elements.len();
        let index: HashMap<&str, usize> = self.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != n {
            let dup = self
                .elements
                .iter()
                .enumerate()
                .find(|(i, s)| index[s.as_str()] != *i)
                .map(|(_, s)| s.clone())
                .unwrap_or_default();
            return Err(Error::DuplicateLabel(dup));
        }
        let lookup = |s: &str| {
            index.get(s).copied().ok_or_else(|| Error::Unknown {
                kind: "element",
                name: s.to_owned(),
            })
        };
        let pairs = self
            .leq
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let leq = if self.close_leq {
            OrthomodularPoset::closure_of(n, pairs)
        } else {
            let mut m = vec![false; n * n];
            for (a, b) in pairs {
                m[a * n + b] = true;
            }
            m
        };
        let mut ortho = vec![usize::MAX; n];
        for (a, b) in &self.ortho {
            ortho[lookup(a)?] = lookup(b)?;
        }
        if let Some(i) = ortho.iter().position(|&o| o == usize::MAX) {
            return Err(Error::structure(
                "event algebra",
                format!("ortho is not total: `{}` has no image", self.elements[i]),
            ));
        }
        let top = match &self.top {
            Some(t) => lookup(t)?,
            None => {
                let tops: Vec<usize> = (0..n).filter(|&t| (0..n).all(|a| leq[a * n + t])).collect();
                match tops[..] {
                    [t] => t,
                    _ => return Err(Error::structure("event algebra", "no `top` given and no unique greatest element")),
                }
            }
        };
        let l = OrthomodularPoset::from_parts(self.elements.clone(), leq, ortho, top)?;
        if let Some(blocks) = &self.blocks {
            let mut given = blocks
                .iter()
                .map(|b| {
                    let mut v = b.iter().map(|s| lookup(s)).collect::<Result<Vec<_>>>()?;
                    v.sort_unstable();
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?;
            given.sort();
            let computed = maximal_boolean_subalgebras(&l)?;
            if given != computed {
                return Err(Error::structure("event algebra", "listed blocks differ from the maximal Boolean subalgebras"));
            }
        }
        Ok(l)
    }
}

/// A model object: a name and the atoms of its Boolean algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelObjectDoc {
    pub name: String,
    pub atoms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
    pub atom_map: IndexMap<String, Vec<String>>,
}

/// An explicit model; identities may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub objects: Vec<ModelObjectDoc>,
    pub arrows: Vec<ModelArrowDoc>,
}

impl ModelDoc {
    pub fn of(m: &CoordinatizationModel) -> Self {
        let base = m.base();
        ModelDoc {
            objects: (0..base.object_count())
                .map(|o| ModelObjectDoc {
                    name: base.objects()[o].clone(),
                    atoms: m.algebra(o).atoms().to_vec(),
                })
                .collect(),
            arrows: base
                .arrows()
                .iter()
                .enumerate()
                .map(|(v, a)| ModelArrowDoc {
                    name: a.name.clone(),
                    source: base.objects()[a.source].clone(),
                    target: base.objects()[a.target].clone(),
                    atom_map: atom_map_doc(m.hom(v)),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<CoordinatizationModel> {
        let objects = self
            .objects
            .iter()
            .map(|o| Ok((o.name.clone(), powerset_algebra(&o.atoms)?)))
            .collect::<Result<Vec<_>>>()?;
        let find = |name: &str| {
            objects.iter().position(|(n, _)| n == name).ok_or_else(|| Error::Unknown {
                kind: "model object",
                name: name.to_owned(),
            })
        };
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                let (s, t) = (find(&a.source)?, find(&a.target)?);
                let h = build_boolean_hom(objects[s].1.clone(), objects[t].1.clone(), &a.atom_map)?;
                Ok((a.name.clone(), s, t, h))
            })
            .collect::<Result<Vec<_>>>()?;
        CoordinatizationModel::from_arrows(objects, arrows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A finite category. Identities are implicit and named `id_<object>`;
/// `composition` lists `[g, f, g∘f]` for every composable non-identity pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

impl CategoryDoc {
    pub fn of(c: &FiniteCategory) -> Self {
        let ids: Vec<usize> = (0..c.object_count()).map(|o| c.identity(o)).collect();
        let non_id: Vec<usize> = (0..c.arrows().len()).filter(|a| !ids.contains(a)).collect();
        let mut composition = Vec::new();
        for &g in &non_id {
            for &f in &non_id {
                if let Some(h) = c.compose(g, f) {
                    composition.push((c.arrow(g).name.clone(), c.arrow(f).name.clone(), c.arrow(h).name.clone()));
                }
            }
        }
        CategoryDoc {
            objects: c.objects().to_vec(),
            arrows: non_id
                .iter()
                .map(|&a| {
                    let arrow = c.arrow(a);
                    ArrowDoc {
                        name: arrow.name.clone(),
                        source: c.objects()[arrow.source].clone(),
                        target: c.objects()[arrow.target].clone(),
                    }
                })
                .collect(),
            composition,
        }
    }

    pub fn build(&self) -> Result<FiniteCategory> {
        let find = |name: &str| {
            self.objects.iter().position(|n| n == name).ok_or_else(|| Error::Unknown {
                kind: "object",
                name: name.to_owned(),
            })
        };
        let mut arrows: Vec<Arrow> = self
            .objects
            .iter()
            .enumerate()
            .map(|(o, n)| Arrow {
                name: format!("id_{n}"),
                source: o,
                target: o,
            })
            .collect();
        let k = arrows.len();
        for a in &self.arrows {
            arrows.push(Arrow {
                name: a.name.clone(),
                source: find(&a.source)?,
                target: find(&a.target)?,
            });
        }
        let by_name: HashMap<&str, usize> = arrows.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        let arrow_id = |name: &str| {
            by_name.get(name).copied().ok_or_else(|| Error::Unknown {
                kind: "arrow",
                name: name.to_owned(),
            })
        };
        let mut table = HashMap::new();
        for (g, f, h) in &self.composition {
            table.insert((arrow_id(g)?, arrow_id(f)?), arrow_id(h)?);
        }
        FiniteCategory::new(self.objects.clone(), arrows, (0..k).collect(), |g, f| {
            if g < k {
                Some(f)
            } else if f < k {
                Some(g)
            } else {
                table.get(&(g, f)).copied()
            }
        })
    }
}

/// A presheaf over a model's base (`model`) or over a bare category
/// (`category`). Either `sets` and `maps`, or one of the shortcuts.
/// `maps[v][p] = q` means `p/v = q`; identity maps may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representable: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub terminal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<IndexMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<IndexMap<String, IndexMap<String, String>>>,
}

impl PresheafDoc {
    /// Explicit sets and maps over the presheaf's base, written as a bare category.
    pub fn of(x: &SetPresheaf) -> Self {
        let base = x.base();
        let sets = (0..base.object_count())
            .map(|o| (base.objects()[o].clone(), x.points(o).to_vec()))
            .collect();
        let ids: Vec<usize> = (0..base.object_count()).map(|o| base.identity(o)).collect();
        let maps = base
            .arrows()
            .iter()
            .enumerate()
            .filter(|(v, _)| !ids.contains(v))
            .map(|(v, a)| {
                let table = (0..x.points(a.target).len())
                    .map(|p| (x.points(a.target)[p].clone(), x.points(a.source)[x.restrict(v, p)].clone()))
                    .collect();
                (a.name.clone(), table)
            })
            .collect();
        PresheafDoc {
            category: Some(serde_json::to_value(CategoryDoc::of(base)).expect("serializable")),
            sets: Some(sets),
            maps: Some(maps),
            ..Default::default()
        }
    }
}

/// `{"object": "2^2", "atom_map": {"a": "a", "b": "a*"}}`: atom images of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub object: String,
    pub atom_map: IndexMap<String, String>,
}

/// A system of prelocalizations, given by seed charts (closed on load) or
/// as the maximal system `R(L)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub target: Value,
    pub model: Value,
    #[serde(default)]
    pub seeds: Vec<ChartDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    pub breakpoints: Vec<String>,
}

impl PartitionDoc {
    pub fn of(p: &PartitionAlgebra) -> Self {
        PartitionDoc {
            breakpoints: p.breakpoints().iter().map(|b| b.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<PartitionAlgebra> {
        PartitionAlgebra::parse(&self.breakpoints)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDoc {
    pub partition: PartitionDoc,
    pub target: Value,
    pub map: IndexMap<String, String>,
}

impl ObservableDoc {
    pub fn of(xi: &Observable) -> Self {
        let l = xi.codomain();
        ObservableDoc {
            partition: PartitionDoc::of(xi.domain()),
            target: serde_json::to_value(OmpDoc::of(l)).expect("serializable"),
            map: (0..xi.domain().cell_count())
                .map(|c| (xi.domain().cell_label(c).to_owned(), l.label(xi.cell_map()[c]).to_owned()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellFunctionDoc {
    pub source: PartitionDoc,
    pub target: PartitionDoc,
    pub preimages: IndexMap<String, Vec<String>>,
}

impl CellFunctionDoc {
    pub fn of(f: &CellFunction) -> Self {
        let mut preimages: IndexMap<String, Vec<String>> = (0..f.target().cell_count())
            .map(|t| (f.target().cell_label(t).to_owned(), Vec::new()))
            .collect();
        for (c, &t) in f.cell_image().iter().enumerate() {
            preimages[t].push(f.source().cell_label(c).to_owned());
        }
        CellFunctionDoc {
            source: PartitionDoc::of(f.source()),
            target: PartitionDoc::of(f.target()),
            preimages,
        }
    }

    pub fn build(&self) -> Result<CellFunction> {
        let (source, target) = (self.source.build()?, self.target.build()?);
        let mut preimages = vec![None; target.cell_count()];
        for (t, cells) in &self.preimages {
            let ti = cell_index(&target, t)?;
            preimages[ti] = Some(cells.iter().map(|c| cell_index(&source, c)).collect::<Result<Vec<_>>>()?);
        }
        let preimages = preimages
            .into_iter()
            .enumerate()
            .map(|(t, p)| {
                p.ok_or_else(|| {
                    Error::structure("cell function", format!("no preimage for {}", target.cell_label(t)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CellFunction::from_preimages(source, target, &preimages)
    }
}

fn cell_index(p: &PartitionAlgebra, label: &str) -> Result<usize> {
    (0..p.cell_count())
        .find(|&c| p.cell_label(c) == label)
        .ok_or_else(|| Error::Unknown {
            kind: "cell",
            name: label.to_owned(),
        })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumHomDoc {
    pub source: Value,
    pub target: Value,
    pub map: IndexMap<String, String>,
}

/// What a top-level document describes, judged by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    BooleanAlgebra,
    BooleanHom,
    EventAlgebra,
    QuantumHom,
    Partition,
    Observable,
    CellFunction,
    Model,
    Category,
    Presheaf,
    System,
}

impl DocumentKind {
    pub fn detect(v: &Value) -> Option<DocumentKind> {
        let obj = v.as_object()?;
        let has = |k: &str| obj.contains_key(k);
        Some(if has("seeds") || has("maximal") {
            DocumentKind::System
        } else if has("partition") {
            DocumentKind::Observable
        } else if has("preimages") {
            DocumentKind::CellFunction
        } else if has("atom_map") {
            DocumentKind::BooleanHom
        } else if has("map") && has("source") {
            DocumentKind::QuantumHom
        } else if has("sets") || has("representable") || has("terminal") {
            DocumentKind::Presheaf
        } else if has("composition") {
            DocumentKind::Category
        } else if has("powerset") {
            DocumentKind::Model
        } else if has("objects") {
            let first_is_object = obj["objects"].as_array().and_then(|a| a.first()).is_some_and(Value::is_object);
            if first_is_object {
                DocumentKind::Model
            } else {
                DocumentKind::Category
            }
        } else if has("breakpoints") {
            DocumentKind::Partition
        } else if has("atoms") {
            DocumentKind::BooleanAlgebra
        } else if has("elements") || has("blocks") || has("catalog") || has("rays") {
            DocumentKind::EventAlgebra
        } else {
            return None;
        })
    }
}

/// Parses JSON text into `T`; errors name the field path and, for syntax
/// errors, the line and column.
pub fn parse_document<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| parse_error(what, e))
}

fn from_value<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_path_to_error::deserialize(v.clone()).map_err(|e| parse_error(what, e))
}

fn parse_error(what: &str, e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    if path == "." {
        Error::Parse(format!("{what}: {}", e.inner()))
    } else {
        Error::Parse(format!("{what}, field `{path}`: {}", e.inner()))
    }
}

/// Resolves documents and file references relative to a directory.
#[derive(Clone, Debug)]
pub struct Loader {
    dir: PathBuf,
    depth: usize,
}

impl Loader {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Loader {
            dir: dir.into(),
            depth: 0,
        }
    }

    /// Reads `path` and returns its JSON value with a loader for the
    /// references it contains.
    pub fn open(path: &Path) -> Result<(Loader, Value)> {
        Loader::new(".").read(path)
    }

    fn read(&self, path: &Path) -> Result<(Loader, Value)> {
        if self.depth >= MAX_REF_DEPTH {
            return Err(Error::bound("file reference depth", self.depth + 1, MAX_REF_DEPTH));
        }
        let full = self.dir.join(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", full.display())))?;
        let value: Value = parse_document(&text, &full.display().to_string())?;
        let dir = full.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((
            Loader {
                dir,
                depth: self.depth + 1,
            },
            value,
        ))
    }

    /// Follows a string value as a path; returns other values unchanged.
    fn resolve(&self, v: &Value) -> Result<(Loader, Value)> {
        match v {
            Value::String(path) => self.read(Path::new(path)),
            other => Ok((self.clone(), other.clone())),
        }
    }

    pub fn event_algebra(&self, v: &Value) -> Result<OrthomodularPoset> {
        let (_, v) = self.resolve(v)?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("event algebra must be an object or a path".into()))?;
        if let Some(name) = obj.get("catalog") {
            if obj.len() != 1 {
                return Err(Error::Parse("a catalog reference takes no other fields".into()));
            }
            let name = name
                .as_str()
                .ok_or_else(|| Error::Parse("`catalog` must be a string".into()))?;
            return catalog_algebra(name);
        }
        if obj.contains_key("blocks") && !obj.contains_key("elements") {
            let spec: PastingSpec = from_value(&v, "pasting")?;
            return paste_boolean_blocks(&spec);
        }
        if obj.contains_key("rays") {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Rays {
                dim: usize,
                rays: Vec<Vec<i64>>,
            }
            let r: Rays = from_value(&v, "subspaces")?;
            return subspace_event_algebra(&r.rays, r.dim);
        }
        from_value::<OmpDoc>(&v, "event algebra")?.build()
    }

    pub fn model(&self, v: &Value) -> Result<CoordinatizationModel> {
        let (_, v) = self.resolve(v)?;
        if v.get("powerset").is_some() {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Powerset {
                powerset: usize,
            }
            let p: Powerset = from_value(&v, "model")?;
            return CoordinatizationModel::powerset_model(p.powerset);
        }
        from_value::<ModelDoc>(&v, "model")?.build()
    }

    pub fn category(&self, v: &Value) -> Result<FiniteCategory> {
        let (_, v) = self.resolve(v)?;
        from_value::<CategoryDoc>(&v, "category")?.build()
    }

    pub fn boolean_hom(&self, v: &Value) -> Result<BooleanHom> {
        let (_, v) = self.resolve(v)?;
        from_value::<BooleanHomDoc>(&v, "Boolean hom")?.build()
    }

    pub fn quantum_hom(&self, v: &Value) -> Result<QuantumHom> {
        let (loader, v) = self.resolve(v)?;
        let doc: QuantumHomDoc = from_value(&v, "quantum hom")?;
        let source = Arc::new(loader.event_algebra(&doc.source)?);
        let target = Arc::new(loader.event_algebra(&doc.target)?);
        let pairs: Vec<(&str, &str)> = doc.map.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        QuantumHom::from_labels(source, target, &pairs)
    }

    pub fn observable(&self, v: &Value) -> Result<Observable> {
        let (loader, v) = self.resolve(v)?;
        let doc: ObservableDoc = from_value(&v, "observable")?;
        let partition = doc.partition.build()?;
        let target = Arc::new(loader.event_algebra(&doc.target)?);
        let mut images = vec![None; partition.cell_count()];
        for (cell, e) in &doc.map {
            images[cell_index(&partition, cell)?] = Some(e.as_str());
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(c, e)| {
                e.ok_or_else(|| Error::structure("observable", format!("cell {} has no image", partition.cell_label(c))))
            })
            .collect::<Result<Vec<_>>>()?;
        Observable::from_labels(partition, target, &images)
    }

    pub fn cell_function(&self, v: &Value) -> Result<CellFunction> {
        let (_, v) = self.resolve(v)?;
        from_value::<CellFunctionDoc>(&v, "cell function")?.build()
    }

    /// The presheaf, and the model when the document names one.
    pub fn presheaf(&self, v: &Value) -> Result<(SetPresheaf, Option<CoordinatizationModel>)> {
        let (loader, v) = self.resolve(v)?;
        let doc: PresheafDoc = from_value(&v, "presheaf")?;
        let (base, model) = match (&doc.model, &doc.category) {
            (Some(m), None) => {
                let model = loader.model(m)?;
                (model.base().clone(), Some(model))
            }
            (None, Some(c)) => (Arc::new(loader.category(c)?), None),
            _ => return Err(Error::Parse("presheaf needs exactly one of `model` and `category`".into())),
        };
        let shortcuts = usize::from(doc.representable.is_some()) + usize::from(doc.terminal) + usize::from(doc.sets.is_some());
        if shortcuts != 1 {
            return Err(Error::Parse(
                "presheaf needs exactly one of `sets`, `representable` and `terminal`".into(),
            ));
        }
        let x = if let Some(name) = &doc.representable {
            SetPresheaf::representable_named(base, name)?
        } else if doc.terminal {
            SetPresheaf::terminal(base)
        } else {
            let sets_doc = doc.sets.as_ref().expect("checked above");
            let mut sets = vec![None; base.object_count()];
            for (name, points) in sets_doc {
                let o = base.object_index(name).ok_or_else(|| Error::Unknown {
                    kind: "object",
                    name: name.clone(),
                })?;
                sets[o] = Some(points.clone());
            }
            let sets: Vec<Vec<String>> = sets.into_iter().map(Option::unwrap_or_default).collect();
            let empty = IndexMap::new();
            let maps_doc = doc.maps.as_ref().unwrap_or(&empty);
            for name in maps_doc.keys() {
                if base.arrow_index(name).is_none() {
                    return Err(Error::Unknown {
                        kind: "arrow",
                        name: name.clone(),
                    });
                }
            }
            let point = |o: usize, label: &str| {
                sets[o].iter().position(|p| p == label).ok_or_else(|| Error::Unknown {
                    kind: "point",
                    name: format!("{label} in {}", base.objects()[o]),
                })
            };
            let maps = base
                .arrows()
                .iter()
                .enumerate()
                .map(|(v, a)| match maps_doc.get(&a.name) {
                    None if base.identity(a.target) == v => Ok((0..sets[a.target].len()).collect()),
                    None if sets[a.target].is_empty() => Ok(Vec::new()),
                    None => Err(Error::structure("presheaf", format!("no map for arrow `{}`", a.name))),
                    Some(table) => sets[a.target]
                        .iter()
                        .map(|p| {
                            let q = table.get(p).ok_or_else(|| {
                                Error::structure("presheaf", format!("map for `{}` misses point {p}", a.name))
                            })?;
                            point(a.source, q)
                        })
                        .collect::<Result<Vec<_>>>(),
                })
                .collect::<Result<Vec<_>>>()?;
            SetPresheaf::new(base, sets, maps)?
        };
        Ok((x, model))
    }

    pub fn system(&self, v: &Value) -> Result<PrelocSystem> {
        let (loader, v) = self.resolve(v)?;
        let doc: SystemDoc = from_value(&v, "system")?;
        let target = Arc::new(loader.event_algebra(&doc.target)?);
        let model = Arc::new(loader.model(&doc.model)?);
        if doc.maximal {
            if !doc.seeds.is_empty() {
                return Err(Error::Parse("a maximal system takes no seeds".into()));
            }
            return PrelocSystem::maximal(model, target);
        }
        let seeds = doc
            .seeds
            .iter()
            .map(|c| chart_from_doc(&model, &target, c))
            .collect::<Result<Vec<_>>>()?;
        generate_system(model, target, seeds)
    }
}

fn chart_from_doc(model: &CoordinatizationModel, target: &Arc<OrthomodularPoset>, doc: &ChartDoc) -> Result<Chart> {
    let o = model.base().object_index(&doc.object).ok_or_else(|| Error::Unknown {
        kind: "model object",
        name: doc.object.clone(),
    })?;
    let alg = model.algebra(o);
    for atom in doc.atom_map.keys() {
        if alg.atom_index(atom).is_none() {
            return Err(Error::Unknown {
                kind: "atom",
                name: format!("{atom} of {}", doc.object),
            });
        }
    }
    let images = alg
        .atoms()
        .iter()
        .map(|a| {
            doc.atom_map
                .get(a)
                .map(String::as_str)
                .ok_or_else(|| Error::structure("chart", format!("atom `{a}` of {} has no image", doc.object)))
        })
        .collect::<Result<Vec<_>>>()?;
    Chart::from_atom_images(model, o, target, &images)
}

/// `2^n`, `MO2`…`MO5`, `shared_atom_pair`, `disjoint_triples`, `block_chain`.
pub fn catalog_algebra(name: &str) -> Result<OrthomodularPoset> {
    let unknown = || Error::Unknown {
        kind: "catalog algebra",
        name: name.to_owned(),
    };
    if let Some(n) = name.strip_prefix("2^") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        return Ok(FiniteBooleanAlgebra::standard(n)?.to_event_algebra());
    }
    if let Some(n) = name.strip_prefix("MO") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        if !(1..=5).contains(&n) {
            return Err(unknown());
        }
        return Ok(catalog::mo(n));
    }
    match name {
        "shared_atom_pair" => Ok(catalog::shared_atom_pair()),
        "disjoint_triples" => Ok(catalog::disjoint_triples()),
        "block_chain" => Ok(catalog::block_chain()),
        _ => Err(unknown()),
    }
}
