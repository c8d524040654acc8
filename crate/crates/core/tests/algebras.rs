mod common;

use std::sync::Arc;

use boolean_frames::boolean_algebra::{
    compose_boolean_homs, enumerate_boolean_homs, validate_boolean_hom, BooleanHom, FiniteBooleanAlgebra,
};
use boolean_frames::quantum_logic::{
    enumerate_quantum_homs, find_isomorphism, is_boolean_subalgebra, maximal_boolean_subalgebras,
    paste_boolean_blocks, subspace_event_algebra, validate_event_algebra, validate_quantum_hom, OrthomodularPoset,
    PastingSpec, QuantumHom,
};
use boolean_frames::schema::OmpDoc;
use common::*;
use proptest::prelude::*;
use proptest::sample::Index;

fn standard(n: usize) -> FiniteBooleanAlgebra {
    FiniteBooleanAlgebra::standard(n).unwrap()
}

/// The same algebra with its elements listed in another order.
fn permuted(l: &OrthomodularPoset, perm: &[usize]) -> OrthomodularPoset {
    let n = l.len();
    let mut inverse = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    let labels = perm.iter().map(|&old| l.label(old).to_owned()).collect();
    let mut leq = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            leq[a * n + b] = l.leq(perm[a], perm[b]);
        }
    }
    let ortho = perm.iter().map(|&old| inverse[l.ortho(old)]).collect();
    OrthomodularPoset::from_parts(labels, leq, ortho, inverse[l.top()]).unwrap()
}

#[test]
fn suite_algebras_are_valid_and_round_trip() {
    for (name, l) in suite() {
        assert!(validate_event_algebra(&l).is_ok(), "{name}");
        let back = OmpDoc::of(&l).build().unwrap();
        assert_eq!(back.labels(), l.labels(), "{name}");
        assert_eq!(back.leq_matrix(), l.leq_matrix(), "{name}");
        assert_eq!(back.ortho_map(), l.ortho_map(), "{name}");
    }
}

#[test]
fn boolean_homs_compose() {
    for (m, n, k) in [(1, 2, 3), (2, 2, 2), (2, 3, 2), (3, 2, 3)] {
        let (a, b, c) = (standard(m), standard(n), standard(k));
        let fs = enumerate_boolean_homs(&a, &b).unwrap();
        let gs = enumerate_boolean_homs(&b, &c).unwrap();
        // Each of the n target atoms lies under the image of exactly one of
        // the m source atoms: m^n homs.
        assert_eq!(fs.len(), m.pow(n as u32));
        for f in &fs {
            assert!(validate_boolean_hom(f).is_ok());
            let id = BooleanHom::identity(&b);
            assert_eq!(compose_boolean_homs(&id, f).unwrap().table(), f.table());
            for g in &gs {
                let gf = compose_boolean_homs(g, f).unwrap();
                assert!(validate_boolean_hom(&gf).is_ok());
                for e in a.elements() {
                    assert_eq!(gf.apply(e), g.apply(f.apply(e)));
                }
            }
        }
    }
}

#[test]
fn quantum_homs_match_the_oracle_and_compose() {
    let targets = suite();
    for n in 1..=3 {
        let source = Arc::new(standard(n).to_event_algebra());
        for (name, l) in &targets {
            let homs = enumerate_quantum_homs(&source, l).unwrap();
            let tables: Vec<Vec<usize>> = homs.iter().map(|h| h.map().to_vec()).collect();
            assert_eq!(tables, quantum_homs_from_powerset(n, l), "2^{n} → {name}");
        }
    }
    let mo2 = Arc::new(boolean_frames::quantum_logic::catalog::mo2());
    let b2 = Arc::new(standard(2).to_event_algebra());
    let mo3 = Arc::new(boolean_frames::quantum_logic::catalog::mo(3));
    for f in enumerate_quantum_homs(&b2, &mo2).unwrap() {
        for g in enumerate_quantum_homs(&mo2, &mo3).unwrap() {
            let gf: QuantumHom = g.after(&f).unwrap();
            assert!(validate_quantum_hom(&gf).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabelled_algebras_are_isomorphic(which in any::<Index>(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let algebras = suite();
        let (_, l) = which.get(&algebras);
        let mut perm: Vec<usize> = l.elements().collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let p = permuted(l, &perm);
        prop_assert!(validate_event_algebra(&p).is_ok());
        let f = find_isomorphism(l, &p);
        prop_assert!(f.is_some());
        prop_assert!(is_isomorphism(l, &p, &f.unwrap()));
    }

    #[test]
    fn pastings_are_valid_or_refused(blocks in prop::collection::vec(prop::collection::btree_set(0..6usize, 2..4), 1..4)) {
        let names = ["p", "q", "r", "s", "t", "u"];
        let spec = PastingSpec {
            blocks: blocks.iter().map(|b| b.iter().map(|&i| names[i].to_owned()).collect()).collect(),
        };
        if let Ok(l) = paste_boolean_blocks(&spec) {
            prop_assert!(validate_event_algebra(&l).is_ok());
            for block in &spec.blocks {
                // An atom glued to a join in another block keeps that join's
                // label; it is still the complement of its blockmates' join.
                let known: Vec<usize> = block.iter().filter_map(|a| l.index_of(a)).collect();
                let atoms = match block.len() - known.len() {
                    0 => known,
                    1 => {
                        let missing = l.ortho(l.join_all(known.iter().copied()).unwrap());
                        known.into_iter().chain([missing]).collect()
                    }
                    _ => continue,
                };
                let mut members = vec![l.ortho(l.top())];
                for mask in 1u32..(1 << atoms.len()) {
                    let picked = atoms.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &a)| a);
                    members.push(l.join_all(picked).unwrap());
                }
                members.sort();
                members.dedup();
                prop_assert_eq!(members.len(), 1 << atoms.len());
                prop_assert!(is_boolean_subalgebra(&l, &members));
            }
            prop_assert!(maximal_boolean_subalgebras(&l).unwrap().len() <= spec.blocks.len());
        }
    }

    #[test]
    fn plane_subspace_algebras_are_valid(rays in prop::collection::vec((-3i64..=3, -3i64..=3), 1..4)) {
        let rays: Vec<Vec<i64>> = rays.into_iter().filter(|&(x, y)| (x, y) != (0, 0)).map(|(x, y)| vec![x, y]).collect();
        prop_assume!(!rays.is_empty());
        let l = subspace_event_algebra(&rays, 2).unwrap();
        prop_assert!(validate_event_algebra(&l).is_ok());
        // 0, 1 and an orthogonal pair of lines per distinct direction class.
        prop_assert_eq!(l.len() % 2, 0);
    }
}
