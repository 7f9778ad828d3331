use std::collections::VecDeque;

use serde::Serialize;

use super::Graph;

const UNSEEN: usize = usize::MAX;

/// Length of a shortest cycle, or `None` for a forest.
///
/// One breadth-first search per root; a non-tree edge `(u, w)` met from `u`
/// closes a cycle through the root of length at most `dist[u] + dist[w] + 1`,
/// and the minimum over all roots is exact.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut dist = vec![UNSEEN; n];
    let mut parent = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    let mut best = usize::MAX;
    for root in 0..n {
        dist.fill(UNSEEN);
        dist[root] = 0;
        parent[root] = UNSEEN;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // any cycle closed from this layer has length >= 2 * dist[u]
            if 2 * dist[u] >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == UNSEEN {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// `B(A, r)`: all vertices within distance `r` of some center, sorted.
pub fn ball(g: &Graph, centers: &[usize], radius: usize) -> Vec<usize> {
    let mut dist = vec![UNSEEN; g.n()];
    let mut queue = VecDeque::new();
    for &c in centers {
        if dist[c] == UNSEEN {
            dist[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == UNSEEN {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..g.n()).filter(|&v| dist[v] != UNSEEN).collect()
}

/// Component label per vertex, numbered in order of smallest member.
pub fn components(g: &Graph) -> (Vec<usize>, usize) {
    let mut label = vec![UNSEEN; g.n()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if label[s] != UNSEEN {
            continue;
        }
        label[s] = count;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if label[w] == UNSEEN {
                    label[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphMetrics {
    pub max_degree: usize,
    pub min_degree: usize,
    /// `None` when the graph is disconnected (infinite diameter).
    pub diameter: Option<usize>,
    pub connected: bool,
}

pub fn graph_metrics(g: &Graph) -> GraphMetrics {
    let (_, count) = components(g);
    let connected = count <= 1;
    let diameter = connected.then(|| {
        let mut dist = vec![UNSEEN; g.n()];
        let mut queue = VecDeque::new();
        let mut diam = 0;
        for root in 0..g.n() {
            dist.fill(UNSEEN);
            dist[root] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                diam = diam.max(dist[u]);
                for &w in g.neighbors(u) {
                    if dist[w] == UNSEEN {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        diam
    });
    GraphMetrics {
        max_degree: g.max_degree(),
        min_degree: g.min_degree(),
        diameter,
        connected,
    }
}
