use super::{Event, OrthomodularPoset};

/// An isomorphism `a → b` (bijection preserving and reflecting `≤`,
/// commuting with `∗`, sending `1` to `1`), found by exhaustive search.
/// Returns the image table indexed by elements of `a`.
pub fn find_isomorphism(a: &OrthomodularPoset, b: &OrthomodularPoset) -> Option<Vec<Event>> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let profile = |l: &OrthomodularPoset, e: Event| {
        let up = l.elements().filter(|&x| l.leq(e, x)).count();
        let down = l.elements().filter(|&x| l.leq(x, e)).count();
        (up, down, l.ortho(e) == e)
    };
    let pa: Vec<_> = a.elements().map(|e| profile(a, e)).collect();
    let pb: Vec<_> = b.elements().map(|e| profile(b, e)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.top()] = b.top();
    used[b.top()] = true;
    if a.ortho(a.top()) != a.top() {
        map[a.ortho(a.top())] = b.ortho(b.top());
        used[b.ortho(b.top())] = true;
    }
    let order: Vec<Event> = a.elements().filter(|&e| map[e] == usize::MAX).collect();
    if extend(a, b, &pa, &pb, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &OrthomodularPoset,
    b: &OrthomodularPoset,
    pa: &[(usize, usize, bool)],
    pb: &[(usize, usize, bool)],
    order: &[Event],
    depth: usize,
    map: &mut [Event],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    if map[x] != usize::MAX {
        return extend(a, b, pa, pb, order, depth + 1, map, used);
    }
    let xo = a.ortho(x);
    for y in b.elements() {
        if used[y] || pa[x] != pb[y] {
            continue;
        }
        let yo = b.ortho(y);
        if (xo == x) != (yo == y) || (xo != x && (used[yo] || map[xo] != usize::MAX)) {
            continue;
        }
        map[x] = y;
        used[y] = true;
        map[xo] = yo;
        used[yo] = true;
        let fits = [x, xo].iter().all(|&u| {
            a.elements()
                .filter(|&v| map[v] != usize::MAX)
                .all(|v| a.leq(u, v) == b.leq(map[u], map[v]) && a.leq(v, u) == b.leq(map[v], map[u]))
        });
        if fits && extend(a, b, pa, pb, order, depth + 1, map, used) {
            return true;
        }
        used[yo] = false;
        map[xo] = usize::MAX;
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
