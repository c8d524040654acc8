/// Disjoint-set forest with union by size and path compression.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, id: usize) -> usize {
        let mut root = id;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut id = id;
        while self.parent[id] != root {
            let next = self.parent[id];
            self.parent[id] = root;
            id = next;
        }
        root
    }

    /// Returns `true` when the two sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    /// Canonical labelling: classes are numbered by their least member, so
    /// class `0` contains element `0` and class ids increase with their
    /// smallest element.
    pub fn canonical_classes(&mut self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.len();
        let mut root_to_class = vec![usize::MAX; n];
        let mut class_of = vec![0; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if root_to_class[r] == usize::MAX {
                root_to_class[r] = classes.len();
                classes.push(Vec::new());
            }
            class_of[i] = root_to_class[r];
            classes[root_to_class[r]].push(i);
        }
        (class_of, classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_are_numbered_by_least_member() {
        let mut uf = UnionFind::new(6);
        uf.union(4, 1);
        uf.union(5, 3);
        uf.union(3, 1);
        let (class_of, classes) = uf.canonical_classes();
        assert_eq!(class_of, vec![0, 1, 2, 1, 1, 1]);
        assert_eq!(classes, vec![vec![0], vec![1, 3, 4, 5], vec![2]]);
    }

    #[test]
    fn union_reports_merges() {
        let mut uf = UnionFind::new(3);
        assert!(uf.union(0, 2));
        assert!(!uf.union(2, 0));
        assert_eq!(uf.find(0), uf.find(2));
    }
}
