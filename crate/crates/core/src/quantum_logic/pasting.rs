use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{validate_event_algebra, OrthomodularPoset};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Largest number of distinct atoms across all blocks.
pub const MAX_PASTING_ATOMS: usize = 9;
/// Largest number of blocks.
pub const MAX_PASTING_BLOCKS: usize = 5;

/// Boolean blocks given by their atoms; equal labels denote shared atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PastingSpec {
    pub blocks: Vec<Vec<String>>,
}

impl PastingSpec {
    pub fn new<S: AsRef<str>>(blocks: &[&[S]]) -> Self {
        PastingSpec {
            blocks: blocks
                .iter()
                .map(|b| b.iter().map(|s| s.as_ref().to_owned()).collect())
                .collect(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Empty("block list"));
        }
        if self.blocks.len() > MAX_PASTING_BLOCKS {
            return Err(Error::bound("block count", self.blocks.len(), MAX_PASTING_BLOCKS));
        }
        let mut all = HashSet::new();
        let mut sets = Vec::new();
        for block in &self.blocks {
            if block.is_empty() {
                return Err(Error::Empty("block"));
            }
            let mut set = BTreeSet::new();
            for a in block {
                if a == "0" || a == "1" {
                    return Err(Error::structure("pasting", format!("`{a}` is reserved")));
                }
                if !set.insert(a.as_str()) {
                    return Err(Error::DuplicateLabel(a.clone()));
                }
                all.insert(a.as_str());
            }
            sets.push(set);
        }
        if all.len() > MAX_PASTING_ATOMS {
            return Err(Error::bound("distinct atom count", all.len(), MAX_PASTING_ATOMS));
        }
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return Err(Error::structure(
                        "pasting",
                        format!("block {} is contained in block {}", i + 1, j + 1),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Glues the Boolean algebras of the blocks along shared atoms.
///
/// Two block elements are identified when they have the same atoms or the
/// same block complement; the second clause is what makes `∗` well defined
/// on shared elements (in blocks `[p,q,r]`, `[r,s,t]` it identifies
/// `p∨q = r∗ = s∨t`). The order is generated by the block orders. If the
/// identifications force two distinct atoms together, or `0` with `1`, the
/// pasting is rejected; otherwise the result is checked by
/// [`validate_event_algebra`] and any violation is returned as
/// [`Error::Pasting`].
///
/// Elements are ordered `0`, then by (first block, size, atom mask), then `1`.
pub fn paste_boolean_blocks(spec: &PastingSpec) -> Result<OrthomodularPoset> {
    spec.check()?;

    // Node = (block, mask); nodes of block b occupy offset[b]..offset[b+1].
    let mut offset = vec![0usize];
    for block in &spec.blocks {
        offset.push(offset.last().unwrap() + (1usize << block.len()));
    }
    let total = *offset.last().unwrap();
    let node = |b: usize, m: u32| offset[b] + m as usize;
    let atoms_of = |b: usize, m: u32| -> BTreeSet<&str> {
        spec.blocks[b]
            .iter()
            .enumerate()
            .filter(|(i, _)| m & (1 << i) != 0)
            .map(|(_, a)| a.as_str())
            .collect()
    };

    let mut uf = UnionFind::new(total);
    let mut by_atoms: HashMap<BTreeSet<&str>, usize> = HashMap::new();
    let mut by_complement: HashMap<BTreeSet<&str>, usize> = HashMap::new();
    for (b, block) in spec.blocks.iter().enumerate() {
        let full = (1u32 << block.len()) - 1;
        for m in 0..=full {
            let id = node(b, m);
            if let Some(&other) = by_atoms.get(&atoms_of(b, m)) {
                uf.union(id, other);
            } else {
                by_atoms.insert(atoms_of(b, m), id);
            }
            if let Some(&other) = by_complement.get(&atoms_of(b, full ^ m)) {
                uf.union(id, other);
            } else {
                by_complement.insert(atoms_of(b, full ^ m), id);
            }
        }
    }

    let (class_of, classes) = uf.canonical_classes();
    let bottom_class = class_of[node(0, 0)];
    let top_class = class_of[node(0, (1 << spec.blocks[0].len()) - 1)];
    if bottom_class == top_class {
        return Err(Error::structure("pasting", "the identifications force 0 = 1"));
    }
    for members in &classes {
        let singles: BTreeSet<&str> = members
            .iter()
            .filter_map(|&id| {
                let b = offset.partition_point(|&o| o <= id) - 1;
                let m = (id - offset[b]) as u32;
                (m.count_ones() == 1).then(|| atoms_of(b, m).into_iter().next().unwrap())
            })
            .collect();
        if singles.len() > 1 {
            let names: Vec<_> = singles.into_iter().collect();
            return Err(Error::structure(
                "pasting",
                format!("the identifications force distinct atoms {} to coincide", names.join(" = ")),
            ));
        }
    }

    // Order the classes: 0, then by least (block, popcount, mask), then 1.
    let key_of = |id: usize| {
        let b = offset.partition_point(|&o| o <= id) - 1;
        let m = (id - offset[b]) as u32;
        (b, m.count_ones(), m)
    };
    let mut order: Vec<usize> = (0..classes.len())
        .filter(|&c| c != bottom_class && c != top_class)
        .collect();
    order.sort_by_key(|&c| classes[c].iter().map(|&id| key_of(id)).min().unwrap());
    order.insert(0, bottom_class);
    order.push(top_class);
    let mut position = vec![0; classes.len()];
    for (p, &c) in order.iter().enumerate() {
        position[c] = p;
    }

    let n = order.len();
    let labels: Vec<String> = order
        .iter()
        .map(|&c| {
            if c == bottom_class {
                return "0".to_owned();
            }
            if c == top_class {
                return "1".to_owned();
            }
            let rep = classes[c].iter().copied().min_by_key(|&id| key_of(id)).unwrap();
            let (b, _, m) = key_of(rep);
            atoms_of_in_order(&spec.blocks[b], m).join("∨")
        })
        .collect();

    let mut pairs = Vec::new();
    let mut ortho = vec![0; n];
    for (b, block) in spec.blocks.iter().enumerate() {
        let full = (1u32 << block.len()) - 1;
        for x in 0..=full {
            let px = position[class_of[node(b, x)]];
            ortho[px] = position[class_of[node(b, full ^ x)]];
            for y in 0..=full {
                if x & !y == 0 {
                    pairs.push((px, position[class_of[node(b, y)]]));
                }
            }
        }
    }
    let leq = OrthomodularPoset::closure_of(n, pairs);
    let l = OrthomodularPoset::from_parts(labels, leq, ortho, n - 1)?;
    let report = validate_event_algebra(&l);
    if !report.is_ok() {
        return Err(Error::Pasting(report));
    }
    Ok(l)
}

fn atoms_of_in_order(block: &[String], m: u32) -> Vec<&str> {
    block
        .iter()
        .enumerate()
        .filter(|(i, _)| m & (1 << i) != 0)
        .map(|(_, a)| a.as_str())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_logic::{catalog, find_isomorphism};

    #[test]
    fn single_block_is_boolean_square() {
        let l = paste_boolean_blocks(&PastingSpec::new(&[&["x", "y"]])).unwrap();
        assert_eq!(l.labels(), ["0", "x", "y", "1"]);
        assert!(find_isomorphism(&l, &catalog::boolean(2)).is_some());
    }

    #[test]
    fn two_disjoint_pairs_give_mo2() {
        let l = paste_boolean_blocks(&PastingSpec::new(&[&["a1", "a2"], &["b1", "b2"]])).unwrap();
        assert_eq!(l.len(), 6);
        assert!(find_isomorphism(&l, &catalog::mo2()).is_some());
    }

    #[test]
    fn shared_atom_identifies_its_complements() {
        let l = paste_boolean_blocks(&PastingSpec::new(&[&["p", "q", "r"], &["r", "s", "t"]])).unwrap();
        assert_eq!(l.len(), 12);
        let r = l.index_of("r").unwrap();
        assert_eq!(l.label(l.ortho(r)), "p∨q");
        let st = l.index_of("s").unwrap();
        assert_eq!(l.join(st, l.index_of("t").unwrap()), Some(l.ortho(r)));
    }

    #[test]
    fn inconsistent_sharing_is_rejected() {
        // a∨b is shared, so the complements c and d would have to coincide.
        let e = paste_boolean_blocks(&PastingSpec::new(&[&["a", "b", "c"], &["a", "b", "d"]]));
        assert!(matches!(e, Err(Error::Structure { .. })), "{e:?}");
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(
            paste_boolean_blocks(&PastingSpec::new::<&str>(&[])),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            paste_boolean_blocks(&PastingSpec::new(&[&["a", "b"], &["a"]])),
            Err(Error::Structure { .. })
        ));
        assert!(matches!(
            paste_boolean_blocks(&PastingSpec::new(&[&["a", "a"]])),
            Err(Error::DuplicateLabel(_))
        ));
    }
}
