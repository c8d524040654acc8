//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles recompute their answers from the definitions and deliberately
//! avoid the library routines they are compared against.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use boolean_frames::boolean_algebra::{enumerate_boolean_homs, BooleanHom, FiniteBooleanAlgebra, Subset};
use boolean_frames::localization::{generate_system, Chart, PrelocSystem};
use boolean_frames::presheaf::{CoordinatizationModel, Object, SetPresheaf, TensorQuotient};
use boolean_frames::quantum_logic::{
    catalog, paste_boolean_blocks, subspace_event_algebra, Event, OmpAxiom, OrthomodularPoset, PastingSpec,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Algebra = Arc<OrthomodularPoset>;

/// `ℝ²` with the lines of two orthogonal bases.
pub fn plane_two_bases() -> OrthomodularPoset {
    subspace_event_algebra(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]], 2).unwrap()
}

pub fn two_block_pasting() -> OrthomodularPoset {
    paste_boolean_blocks(&PastingSpec::new(&[&["a", "a*"], &["b", "b*"]])).unwrap()
}

/// Every event algebra the acceptance suite ranges over.
pub fn suite() -> Vec<(&'static str, Algebra)> {
    vec![
        ("2^1", catalog::boolean(1)),
        ("2^2", catalog::boolean(2)),
        ("2^3", catalog::boolean(3)),
        ("MO2", catalog::mo2()),
        ("MO3", catalog::mo(3)),
        ("shared_atom_pair", catalog::shared_atom_pair()),
        ("disjoint_triples", catalog::disjoint_triples()),
        ("block_chain", catalog::block_chain()),
        ("plane", plane_two_bases()),
    ]
    .into_iter()
    .map(|(n, l)| (n, Arc::new(l)))
    .collect()
}

pub fn model(atoms: usize) -> Arc<CoordinatizationModel> {
    Arc::new(CoordinatizationModel::powerset_model(atoms).unwrap())
}

/// Object `2^n` of a powerset model.
pub fn object(model: &CoordinatizationModel, n: usize) -> Object {
    model.base().object_index(&format!("2^{n}")).unwrap()
}

pub fn chart(model: &CoordinatizationModel, n: usize, l: &Algebra, images: &[&str]) -> Chart {
    Chart::from_atom_images(model, object(model, n), l, images).unwrap()
}

/// The system generated by the given blocks of `MO2` over `{2^1, 2^2}`.
pub fn mo2_block_system(blocks: &[[&str; 2]]) -> PrelocSystem {
    let m = model(2);
    let l: Algebra = Arc::new(catalog::mo2());
    let seeds: Vec<Chart> = blocks.iter().map(|b| chart(&m, 2, &l, b)).collect();
    generate_system(m, l, seeds).unwrap()
}

/// Both `MO2` block inclusions and their swaps over a base with the single
/// arrow `2^1 → 2^2`: nothing merges a chart with its swap.
pub fn unmerged_duplicates_system() -> PrelocSystem {
    let one = FiniteBooleanAlgebra::standard(1).unwrap();
    let two = FiniteBooleanAlgebra::standard(2).unwrap();
    let v: BooleanHom = enumerate_boolean_homs(&one, &two).unwrap().remove(0);
    let m = Arc::new(
        CoordinatizationModel::from_arrows(
            vec![("2^1".into(), one), ("2^2".into(), two)],
            vec![("v".into(), 0, 1, v)],
        )
        .unwrap(),
    );
    let l: Algebra = Arc::new(catalog::mo2());
    let seeds: Vec<Chart> = [["a", "a*"], ["a*", "a"], ["b", "b*"], ["b*", "b"]]
        .iter()
        .map(|im| Chart::from_atom_images(&m, 1, &l, im).unwrap())
        .collect();
    generate_system(m, l, seeds).unwrap()
}

/// One mutation of a valid algebra per law, each rejected for that law.
pub fn kill_fixtures() -> Vec<(OmpAxiom, &'static str, OrthomodularPoset)> {
    let b2 = catalog::boolean(2);
    let mo2 = catalog::mo2();
    let n = b2.len();
    let flip = |l: &OrthomodularPoset, a: &str, b: &str| {
        let n = l.len();
        let mut leq = l.leq_matrix().to_vec();
        let k = l.index_of(a).unwrap() * n + l.index_of(b).unwrap();
        leq[k] = !leq[k];
        leq
    };
    let mut out = Vec::new();

    let mut leq = b2.leq_matrix().to_vec();
    leq[0] = false;
    out.push((OmpAxiom::PartialOrder, "2^2 with 0 ≰ 0", b2.with_leq(leq).unwrap()));

    out.push((OmpAxiom::A, "2^2 with top moved to 0", b2.with_top(0).unwrap()));

    let (a, b) = (mo2.index_of("a").unwrap(), mo2.index_of("b").unwrap());
    let mut ortho = mo2.ortho_map().to_vec();
    ortho.swap(a, b);
    out.push((OmpAxiom::B, "MO2 with a∗, b∗ exchanged", mo2.with_ortho(ortho).unwrap()));

    out.push((OmpAxiom::C, "2^2 with a ≤ b added", b2.with_leq(flip(&b2, "a", "b")).unwrap()));
    out.push((OmpAxiom::D, "2^2 with 0 ≤ a removed", b2.with_leq(flip(&b2, "0", "a")).unwrap()));

    let b4 = catalog::boolean(4);
    let keep: Vec<Event> = b4
        .elements()
        .filter(|&e| !matches!(b4.label(e), "a∨b" | "c∨d"))
        .collect();
    out.push((OmpAxiom::E, "2^4 without a∨b and c∨d", b4.restrict(&keep).unwrap()));

    let mut leq = flip(&mo2, "a", "b*");
    let m = mo2.len();
    leq[mo2.index_of("b").unwrap() * m + mo2.index_of("a*").unwrap()] = true;
    out.push((OmpAxiom::G, "MO2 with a ≤ b∗ and b ≤ a∗ (hexagon)", mo2.with_leq(leq).unwrap()));
    debug_assert_eq!(n, 4);
    out
}

/// Least upper bound straight from the order matrix.
pub fn lub(l: &OrthomodularPoset, a: Event, b: Event) -> Option<Event> {
    let ubs: Vec<Event> = l.elements().filter(|&u| l.leq(a, u) && l.leq(b, u)).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| l.leq(u, v)))
}

/// Every quantum hom `2^n → L` as an image table indexed by atom mask. The
/// values on one element of each complementary pair are chosen freely and
/// the four laws are checked afterwards from their definitions.
pub fn quantum_homs_from_powerset(n: usize, l: &OrthomodularPoset) -> Vec<Vec<Event>> {
    let size = 1usize << n;
    let top = size - 1;
    let free: Vec<usize> = (1..size).filter(|&s| s < top - s).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; free.len()];
    let k = l.len();
    'outer: loop {
        let mut h = vec![usize::MAX; size];
        h[top] = l.top();
        h[0] = l.ortho(l.top());
        for (i, &s) in free.iter().enumerate() {
            h[s] = choice[i];
            h[top - s] = l.ortho(choice[i]);
        }
        if is_quantum_hom_table(n, l, &h) {
            out.push(h);
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < k {
                continue 'outer;
            }
            *c = 0;
        }
        break;
    }
    out.sort();
    out
}

fn is_quantum_hom_table(n: usize, l: &OrthomodularPoset, h: &[Event]) -> bool {
    let size = 1usize << n;
    let top = size - 1;
    if h[top] != l.top() {
        return false;
    }
    for s in 0..size {
        if h[top ^ s] != l.ortho(h[s]) {
            return false;
        }
        for t in 0..size {
            if s & !t == 0 && !l.leq(h[s], h[t]) {
                return false;
            }
            if s & t == 0 {
                match lub(l, h[s], h[t]) {
                    Some(j) if l.leq(h[s | t], j) => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

/// Atoms of `L` counted from the order; `L` is Boolean iff `|L| = 2^atoms`
/// and every pair has a least upper bound (for the suite's algebras).
pub fn looks_boolean(l: &OrthomodularPoset) -> bool {
    let bottom = l.ortho(l.top());
    let atoms = l
        .elements()
        .filter(|&e| e != bottom && l.elements().all(|f| f == bottom || f == e || !l.leq(f, e)))
        .count();
    l.len() == 1 << atoms && l.elements().all(|a| l.elements().all(|b| lub(l, a, b).is_some()))
}

/// A pair `(object, point, element)` of `X ⊗ A`.
pub type Pair = (Object, usize, Subset);

/// The tensor quotient by repeated relaxation: every pair starts as its own
/// label and each generating relation copies the smaller label across until
/// nothing changes.
pub fn naive_quotient(x: &SetPresheaf, model: &CoordinatizationModel) -> BTreeSet<BTreeSet<Pair>> {
    let base = model.base();
    let mut pairs: Vec<Pair> = Vec::new();
    for o in 0..base.object_count() {
        for p in 0..x.points(o).len() {
            for q in model.algebra(o).elements() {
                pairs.push((o, p, q));
            }
        }
    }
    let index: HashMap<Pair, usize> = pairs.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut edges = Vec::new();
    for (v, arrow) in base.arrows().iter().enumerate() {
        for p in 0..x.points(arrow.target).len() {
            let restricted = x.restrict(v, p);
            for q in model.algebra(arrow.source).elements() {
                edges.push((
                    index[&(arrow.source, restricted, q)],
                    index[&(arrow.target, p, model.apply(v, q))],
                ));
            }
        }
    }
    let mut label: Vec<usize> = (0..pairs.len()).collect();
    loop {
        let mut changed = false;
        for &(a, b) in &edges {
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: HashMap<usize, BTreeSet<Pair>> = HashMap::new();
    for (i, &t) in pairs.iter().enumerate() {
        groups.entry(label[i]).or_default().insert(t);
    }
    groups.into_values().collect()
}

pub fn library_partition(q: &TensorQuotient) -> BTreeSet<BTreeSet<Pair>> {
    q.classes()
        .iter()
        .map(|c| {
            c.iter()
                .map(|&i| {
                    let t = q.pairs()[i];
                    (t.object, t.point, t.element)
                })
                .collect()
        })
        .collect()
}

/// `|Nat(X, R(L))|` over a powerset model by backtracking over points, with
/// charts from [`quantum_homs_from_powerset`].
pub fn nat_count_oracle(x: &SetPresheaf, model: &CoordinatizationModel, l: &OrthomodularPoset) -> usize {
    let base = model.base();
    let charts: Vec<Vec<Vec<Event>>> = (0..base.object_count())
        .map(|o| quantum_homs_from_powerset(model.algebra(o).atom_count(), l))
        .collect();
    // Larger objects first, so that restrictions are usually forced.
    let mut points: Vec<(Object, usize)> = Vec::new();
    for o in (0..base.object_count()).rev() {
        points.extend((0..x.points(o).len()).map(|p| (o, p)));
    }
    let mut assigned: Vec<Vec<Option<usize>>> = (0..base.object_count()).map(|o| vec![None; x.points(o).len()]).collect();

    fn consistent(
        x: &SetPresheaf,
        model: &CoordinatizationModel,
        charts: &[Vec<Vec<Event>>],
        assigned: &[Vec<Option<usize>>],
    ) -> bool {
        for (v, arrow) in model.base().arrows().iter().enumerate() {
            for p in 0..x.points(arrow.target).len() {
                let (Some(big), Some(small)) = (assigned[arrow.target][p], assigned[arrow.source][x.restrict(v, p)]) else {
                    continue;
                };
                let big = &charts[arrow.target][big];
                let small = &charts[arrow.source][small];
                if model.algebra(arrow.source).elements().any(|q| small[q as usize] != big[model.apply(v, q) as usize]) {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        i: usize,
        points: &[(Object, usize)],
        x: &SetPresheaf,
        model: &CoordinatizationModel,
        charts: &[Vec<Vec<Event>>],
        assigned: &mut Vec<Vec<Option<usize>>>,
    ) -> usize {
        if i == points.len() {
            return 1;
        }
        let (o, p) = points[i];
        let mut total = 0;
        for c in 0..charts[o].len() {
            assigned[o][p] = Some(c);
            if consistent(x, model, charts, assigned) {
                total += go(i + 1, points, x, model, charts, assigned);
            }
        }
        assigned[o][p] = None;
        total
    }

    go(0, &points, x, model, &charts, &mut assigned)
}

/// A random presheaf over the model base: a coproduct of one or two
/// sub-presheaves of representables, each generated by one or two points,
/// sometimes with the terminal presheaf added.
pub fn random_presheaf(model: &CoordinatizationModel, rng: &mut impl Rng) -> SetPresheaf {
    let base = model.base();
    let summand = |rng: &mut dyn rand::RngCore| {
        let xi = rng.gen_range(0..base.object_count());
        let y = SetPresheaf::representable(base.clone(), xi).unwrap();
        let mut generators = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let o = rng.gen_range(0..base.object_count());
            if let Some(p) = (0..y.points(o).len()).collect::<Vec<_>>().choose(rng) {
                generators.push((o, *p));
            }
        }
        if generators.is_empty() {
            y
        } else {
            y.generated_by(&generators).unwrap()
        }
    };
    let mut x = summand(rng);
    if rng.gen_bool(0.4) {
        x = x.coproduct(&summand(rng)).unwrap();
    }
    if rng.gen_bool(0.2) {
        x = x.coproduct(&SetPresheaf::terminal(base.clone())).unwrap();
    }
    x
}

/// Checks a candidate isomorphism from its definition.
pub fn is_isomorphism(a: &OrthomodularPoset, b: &OrthomodularPoset, f: &[Event]) -> bool {
    if a.len() != b.len() || f.len() != a.len() {
        return false;
    }
    let image: BTreeSet<Event> = f.iter().copied().collect();
    image.len() == a.len()
        && f[a.top()] == b.top()
        && a.elements().all(|x| f[a.ortho(x)] == b.ortho(f[x]))
        && a.elements().all(|x| a.elements().all(|y| a.leq(x, y) == b.leq(f[x], f[y])))
}
