use std::collections::BTreeSet;

use super::{max_elements_from_env, Event, OrthomodularPoset};
use crate::error::{Error, Result};

/// Atoms of `l`: the minimal elements strictly above `0`.
pub(crate) fn atoms(l: &OrthomodularPoset) -> Vec<Event> {
    let bottom = l.bottom();
    let above: Vec<Event> = l.elements().filter(|&e| e != bottom && l.leq(bottom, e)).collect();
    above
        .iter()
        .copied()
        .filter(|&a| !above.iter().any(|&b| b != a && l.leq(b, a)))
        .collect()
}

/// Whether `subset` is a Boolean subalgebra of `l`: it contains `0` and `1`,
/// is closed under `∗`, and the map sending each member to the set of
/// subset-atoms below it is an isomorphism onto a powerset that turns `∗`
/// into set complement and disjoint unions into orthogonal joins of `l`.
pub fn is_boolean_subalgebra(l: &OrthomodularPoset, subset: &[Event]) -> bool {
    let members: BTreeSet<Event> = subset.iter().copied().collect();
    let (bottom, top) = (l.bottom(), l.top());
    if !members.contains(&bottom) || !members.contains(&top) {
        return false;
    }
    if members.iter().any(|&e| !members.contains(&l.ortho(e))) {
        return false;
    }
    if members.len() == 1 {
        return true;
    }
    let nonzero: Vec<Event> = members.iter().copied().filter(|&e| e != bottom).collect();
    let sub_atoms: Vec<Event> = nonzero
        .iter()
        .copied()
        .filter(|&a| !nonzero.iter().any(|&b| b != a && l.leq(b, a)))
        .collect();
    let k = sub_atoms.len();
    if k >= 31 || members.len() != 1 << k {
        return false;
    }
    let mask_of = |e: Event| -> u32 {
        sub_atoms
            .iter()
            .enumerate()
            .filter(|(_, &a)| l.leq(a, e))
            .fold(0, |m, (i, _)| m | 1 << i)
    };
    let full = (1u32 << k) - 1;
    let mut element_of = vec![usize::MAX; 1 << k];
    for &e in &members {
        let m = mask_of(e);
        if element_of[m as usize] != usize::MAX {
            return false;
        }
        element_of[m as usize] = e;
        if mask_of(l.ortho(e)) != full ^ m {
            return false;
        }
    }
    for &x in &members {
        for &y in &members {
            let (mx, my) = (mask_of(x), mask_of(y));
            if l.leq(x, y) != (mx & !my == 0) {
                return false;
            }
            if mx & my == 0 && l.ortho_join(x, y) != Some(element_of[(mx | my) as usize]) {
                return false;
            }
        }
    }
    true
}

/// Whether `l` is (isomorphic to) a powerset algebra.
pub fn is_boolean(l: &OrthomodularPoset) -> bool {
    let all: Vec<Event> = l.elements().collect();
    is_boolean_subalgebra(l, &all)
}

/// Closure of `generators ∪ {0, 1}` under `∗` and orthogonal joins.
pub fn subalgebra_closure(l: &OrthomodularPoset, generators: &[Event]) -> BTreeSet<Event> {
    let mut set: BTreeSet<Event> = generators.iter().copied().collect();
    set.insert(l.bottom());
    set.insert(l.top());
    loop {
        let items: Vec<Event> = set.iter().copied().collect();
        let before = set.len();
        for &a in &items {
            set.insert(l.ortho(a));
            for &b in &items {
                if let Some(j) = l.ortho_join(a, b) {
                    set.insert(j);
                }
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Maximal Boolean subalgebras, using the `BF_MAX_ELEMENTS` bound.
pub fn maximal_boolean_subalgebras(l: &OrthomodularPoset) -> Result<Vec<Vec<Event>>> {
    maximal_boolean_subalgebras_with_limit(l, max_elements_from_env()?)
}

/// Maximal Boolean subalgebras (blocks), each as a sorted element list;
/// blocks are sorted lexicographically.
///
/// In a finite algebra every block atom is an atom of `l`, so candidates are
/// generated from maximal pairwise-orthogonal sets of atoms (Bron–Kerbosch
/// on the orthogonality graph), closed under joins, filtered by
/// [`is_boolean_subalgebra`] and finally by inclusion-maximality.
pub fn maximal_boolean_subalgebras_with_limit(
    l: &OrthomodularPoset,
    limit: usize,
) -> Result<Vec<Vec<Event>>> {
    if l.len() > limit {
        return Err(Error::bound("event algebra size", l.len(), limit));
    }
    if l.len() == 1 {
        return Ok(vec![vec![0]]);
    }
    let atoms = atoms(l);
    let adjacent = |a: Event, b: Event| a != b && l.orthogonal(a, b);
    let mut cliques = Vec::new();
    bron_kerbosch(&mut Vec::new(), atoms.clone(), Vec::new(), &adjacent, &mut cliques);

    let mut candidates: BTreeSet<Vec<Event>> = BTreeSet::new();
    'clique: for clique in cliques {
        if clique.len() >= 31 {
            return Err(Error::bound("orthogonal atom set", clique.len(), 30));
        }
        let mut set = BTreeSet::new();
        for m in 0u32..(1 << clique.len()) {
            let members = clique
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, &a)| a);
            match l.join_all(members) {
                Some(j) => {
                    set.insert(j);
                }
                None => continue 'clique,
            }
        }
        let set: Vec<Event> = set.into_iter().collect();
        if is_boolean_subalgebra(l, &set) {
            candidates.insert(set);
        }
    }
    let candidates: Vec<Vec<Event>> = candidates.into_iter().collect();
    let maximal = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|d| d.len() > c.len() && c.iter().all(|e| d.binary_search(e).is_ok()))
        })
        .cloned()
        .collect();
    Ok(maximal)
}

fn bron_kerbosch(
    r: &mut Vec<Event>,
    mut p: Vec<Event>,
    mut x: Vec<Event>,
    adjacent: &impl Fn(Event, Event) -> bool,
    out: &mut Vec<Vec<Event>>,
) {
    if p.is_empty() && x.is_empty() {
        let mut c = r.clone();
        c.sort_unstable();
        out.push(c);
        return;
    }
    while let Some(v) = p.pop() {
        r.push(v);
        let np = p.iter().copied().filter(|&u| adjacent(u, v)).collect();
        let nx = x.iter().copied().filter(|&u| adjacent(u, v)).collect();
        bron_kerbosch(r, np, nx, adjacent, out);
        r.pop();
        x.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_logic::catalog;

    fn labels(l: &OrthomodularPoset, block: &[Event]) -> Vec<String> {
        block.iter().map(|&e| l.label(e).to_owned()).collect()
    }

    #[test]
    fn boolean_algebra_is_its_own_block() {
        let l = catalog::boolean(3);
        let blocks = maximal_boolean_subalgebras(&l).unwrap();
        assert_eq!(blocks, vec![(0..8).collect::<Vec<_>>()]);
        assert!(is_boolean(&l));
    }

    #[test]
    fn mo2_has_two_blocks() {
        let l = catalog::mo2();
        let blocks = maximal_boolean_subalgebras(&l).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(labels(&l, &blocks[0]), ["0", "a", "a*", "1"]);
        assert_eq!(labels(&l, &blocks[1]), ["0", "b", "b*", "1"]);
        assert!(!is_boolean(&l));
    }

    #[test]
    fn mo3_has_three_blocks() {
        assert_eq!(maximal_boolean_subalgebras(&catalog::mo(3)).unwrap().len(), 3);
    }

    #[test]
    fn closure_of_atom_pair() {
        let l = catalog::mo2();
        let a = l.index_of("a").unwrap();
        let c = subalgebra_closure(&l, &[a]);
        assert_eq!(labels(&l, &c.into_iter().collect::<Vec<_>>()), ["0", "a", "a*", "1"]);
    }

    #[test]
    fn size_bound() {
        let l = catalog::boolean(4);
        assert!(matches!(
            maximal_boolean_subalgebras_with_limit(&l, 10),
            Err(Error::Bound { .. })
        ));
    }
}
