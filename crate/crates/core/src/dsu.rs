//! Disjoint-set merging with union by size and path compression, plus an
//! ordered multiset of component sizes so the largest and second-largest
//! components are exact after every merge.

use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
        self.components = self.parent.len();
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; returns the two sizes that merged, or
    /// `None` when they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        let merged = (self.size[ra], self.size[rb]);
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        Some(merged)
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Sizes of all components, sorted descending.
    pub fn sizes_desc(&mut self) -> Vec<usize> {
        let mut sizes: Vec<usize> = (0..self.len())
            .filter(|&v| self.parent[v] == v)
            .map(|v| self.size[v])
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Canonical labels: components numbered by their smallest vertex.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut root_label = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|v| {
                let r = self.find(v);
                if root_label[r] == usize::MAX {
                    root_label[r] = next;
                    next += 1;
                }
                root_label[r]
            })
            .collect()
    }
}

/// Multiset of component sizes with per-threshold counters.
#[derive(Debug, Clone)]
pub struct SizeCensus {
    counts: BTreeMap<usize, usize>,
    thresholds: Vec<usize>,
    at_least: Vec<usize>,
}

impl SizeCensus {
    /// Census of `n` singletons.
    pub fn singletons(n: usize, thresholds: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        if n > 0 {
            counts.insert(1, n);
        }
        let at_least = thresholds
            .iter()
            .map(|&s| if s <= 1 { n } else { 0 })
            .collect();
        SizeCensus {
            counts,
            thresholds: thresholds.to_vec(),
            at_least,
        }
    }

    pub fn merge(&mut self, a: usize, b: usize) {
        self.remove(a);
        self.remove(b);
        *self.counts.entry(a + b).or_insert(0) += 1;
        for (s, c) in self.thresholds.iter().zip(self.at_least.iter_mut()) {
            *c = *c + usize::from(a + b >= *s) - usize::from(a >= *s) - usize::from(b >= *s);
        }
    }

    fn remove(&mut self, size: usize) {
        let slot = self.counts.get_mut(&size).expect("size present in census");
        *slot -= 1;
        if *slot == 0 {
            self.counts.remove(&size);
        }
    }

    pub fn largest(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn second_largest(&self) -> usize {
        let mut it = self.counts.iter().rev();
        match it.next() {
            Some((&s, &c)) if c >= 2 => s,
            Some(_) => it.next().map(|(&s, _)| s).unwrap_or(0),
            None => 0,
        }
    }

    /// Number of components of size at least each configured threshold.
    pub fn at_least(&self) -> &[usize] {
        &self.at_least
    }
}
