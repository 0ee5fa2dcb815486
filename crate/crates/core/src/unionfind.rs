/// Disjoint sets over `0..n` with path compression and union by size. Each
/// root also tracks the smallest member of its set.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    min: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            min: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Returns `true` if two different sets were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.min[ra] = self.min[ra].min(self.min[rb]);
        true
    }

    /// Smallest element of the set containing `x`.
    pub fn representative(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.min[r] as usize
    }

    /// Dense labels `0..k`, numbered by increasing representative.
    pub fn labels(&mut self) -> (Vec<u32>, usize) {
        let n = self.len();
        let mut label_of_rep = vec![u32::MAX; n];
        let mut labels = vec![0u32; n];
        let mut next = 0u32;
        for (x, label) in labels.iter_mut().enumerate() {
            let rep = self.representative(x);
            // x is visited in increasing order, so a set's representative is
            // the first member seen
            if label_of_rep[rep] == u32::MAX {
                label_of_rep[rep] = next;
                next += 1;
            }
            *label = label_of_rep[rep];
        }
        (labels, next as usize)
    }
}
