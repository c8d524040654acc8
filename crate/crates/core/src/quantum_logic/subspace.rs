use std::collections::BTreeSet;

use super::{max_elements_from_env, validate_event_algebra, OrthomodularPoset};
use crate::error::{Error, Result};

/// An integer vector of length 2 or 3.
pub type IntVector = Vec<i64>;

/// A subspace of ℚ² or ℚ³. Lines and planes are stored by a primitive
/// vector (the direction of a line, the normal of a plane) whose first
/// nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Subspace {
    Zero,
    Line(IntVector),
    Plane(IntVector),
    Whole,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(v: &[i64]) -> Option<IntVector> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return None;
    }
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 {
        -1
    } else {
        1
    };
    Some(v.iter().map(|&x| sign * x / g).collect())
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[i64], b: &[i64]) -> IntVector {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Subspace {
    fn ortho(&self, dim: usize) -> Subspace {
        match self {
            Subspace::Zero => Subspace::Whole,
            Subspace::Whole => Subspace::Zero,
            Subspace::Line(v) if dim == 2 => Subspace::Line(primitive(&[-v[1], v[0]]).unwrap()),
            Subspace::Line(v) => Subspace::Plane(v.clone()),
            Subspace::Plane(n) => Subspace::Line(n.clone()),
        }
    }

    fn contains(&self, other: &Subspace) -> bool {
        use Subspace::*;
        match (other, self) {
            (Zero, _) | (_, Whole) => true,
            (_, Zero) | (Whole, _) => false,
            (Line(a), Line(b)) | (Plane(a), Plane(b)) => a == b,
            (Line(v), Plane(n)) => dot(v, n) == 0,
            (Plane(_), Line(_)) => false,
        }
    }

    fn meet(&self, other: &Subspace) -> Subspace {
        use Subspace::*;
        if self.contains(other) {
            return other.clone();
        }
        if other.contains(self) {
            return self.clone();
        }
        match (self, other) {
            (Plane(a), Plane(b)) => Line(primitive(&cross(a, b)).expect("distinct planes")),
            _ => Zero,
        }
    }

    fn label(&self) -> String {
        let coords = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Subspace::Zero => "0".into(),
            Subspace::Whole => "1".into(),
            Subspace::Line(v) => format!("⟨{}⟩", coords(v)),
            Subspace::Plane(n) => format!("⟨{}⟩⊥", coords(n)),
        }
    }
}

/// Closes the spans of `rays` under orthogonal complement and intersection,
/// using the element bound from `BF_MAX_ELEMENTS` (default 60).
pub fn subspace_event_algebra(rays: &[IntVector], dim: usize) -> Result<OrthomodularPoset> {
    subspace_event_algebra_with_limit(rays, dim, max_elements_from_env()?)
}

/// Inclusion-ordered subspaces generated by `rays`, with `∗` the orthogonal
/// complement for the integer dot product. Elements are listed `0`, lines,
/// planes, `1`, each group sorted by its primitive vector.
pub fn subspace_event_algebra_with_limit(
    rays: &[IntVector],
    dim: usize,
    limit: usize,
) -> Result<OrthomodularPoset> {
    if dim != 2 && dim != 3 {
        return Err(Error::structure("subspace input", format!("dimension must be 2 or 3, got {dim}")));
    }
    if rays.is_empty() {
        return Err(Error::Empty("ray list"));
    }
    let mut set = BTreeSet::from([Subspace::Zero, Subspace::Whole]);
    for r in rays {
        if r.len() != dim {
            return Err(Error::structure(
                "subspace input",
                format!("ray {r:?} has length {}, expected {dim}", r.len()),
            ));
        }
        if r.iter().any(|x| x.abs() > 1 << 20) {
            return Err(Error::structure("subspace input", format!("ray {r:?} has a coordinate above 2^20")));
        }
        let v = primitive(r).ok_or_else(|| Error::structure("subspace input", "zero ray"))?;
        set.insert(Subspace::Line(v));
    }
    loop {
        let items: Vec<Subspace> = set.iter().cloned().collect();
        let mut fresh = BTreeSet::new();
        for a in &items {
            fresh.insert(a.ortho(dim));
            for b in &items {
                fresh.insert(a.meet(b));
            }
        }
        let before = set.len();
        set.extend(fresh);
        if set.len() > limit {
            return Err(Error::bound("subspace closure size", set.len(), limit));
        }
        if set.len() == before {
            break;
        }
    }
    let items: Vec<Subspace> = set.into_iter().collect();
    let n = items.len();
    let mut leq = vec![false; n * n];
    for (i, a) in items.iter().enumerate() {
        for (j, b) in items.iter().enumerate() {
            leq[i * n + j] = b.contains(a);
        }
    }
    let ortho = items
        .iter()
        .map(|a| {
            let o = a.ortho(dim);
            items.iter().position(|b| *b == o).expect("closed under ∗")
        })
        .collect();
    let labels = items.iter().map(Subspace::label).collect();
    let l = OrthomodularPoset::from_parts(labels, leq, ortho, n - 1)?;
    let report = validate_event_algebra(&l);
    if !report.is_ok() {
        return Err(Error::invalid("subspace event algebra", &report));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_logic::{catalog, find_isomorphism, maximal_boolean_subalgebras};

    #[test]
    fn one_ray_in_the_plane() {
        let l = subspace_event_algebra(&[vec![1, 0]], 2).unwrap();
        assert_eq!(l.labels(), ["0", "⟨0,1⟩", "⟨1,0⟩", "1"]);
        assert!(find_isomorphism(&l, &catalog::boolean(2)).is_some());
    }

    #[test]
    fn two_bases_of_the_plane() {
        let l = subspace_event_algebra(&[vec![1, 0], vec![1, 1]], 2).unwrap();
        assert_eq!(l.len(), 6);
        assert!(find_isomorphism(&l, &catalog::mo2()).is_some());
    }

    #[test]
    fn two_frames_sharing_a_ray_in_space() {
        let l = subspace_event_algebra(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 1]], 3).unwrap();
        assert_eq!(l.len(), 12);
        let blocks = maximal_boolean_subalgebras(&l).unwrap();
        assert_eq!(blocks.len(), 2);
        let shared: Vec<_> = blocks[0].iter().filter(|e| blocks[1].contains(e)).map(|&e| l.label(e)).collect();
        assert_eq!(shared, ["0", "⟨1,0,0⟩", "⟨1,0,0⟩⊥", "1"]);
    }

    #[test]
    fn closure_bound_is_reported() {
        let rays = vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 3], vec![2, -1, 5]];
        match subspace_event_algebra_with_limit(&rays, 3, 20) {
            Err(Error::Bound { actual, limit, .. }) => {
                assert!(actual > 20);
                assert_eq!(limit, 20);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_input() {
        assert!(subspace_event_algebra(&[vec![0, 0]], 2).is_err());
        assert!(subspace_event_algebra(&[vec![1, 0, 0]], 2).is_err());
        assert!(subspace_event_algebra(&[vec![1]], 1).is_err());
    }
}
