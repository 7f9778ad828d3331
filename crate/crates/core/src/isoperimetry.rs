//! Edge and vertex isoperimetric constants.
//!
//! The exact solvers enumerate connected candidate sets on graphs with at
//! most 64 vertices, one bit per vertex. Edge expansion only needs sets that
//! are connected in the graph itself. Vertex expansion needs sets connected
//! in the square of the graph: two pieces at distance 3 or more have
//! disjoint outer boundaries, so splitting them never hurts, while pieces at
//! distance 2 can share boundary vertices (three leaves of a star have one
//! boundary vertex between them).

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{components, Graph};
use crate::rng;

pub const DEFAULT_WORK_LIMIT: u64 = 100_000_000;
const MAX_BITSET_VERTICES: usize = 64;
const FLUSH_EVERY: u64 = 4096;

/// A cut `A` with both of its boundary sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutResult {
    /// Sorted vertex list.
    pub witness: Vec<usize>,
    pub edge_boundary: usize,
    pub vertex_boundary: usize,
    pub edge_ratio: f64,
    pub vertex_ratio: f64,
}

impl CutResult {
    /// Measures the cut `witness` (any order, no duplicates).
    pub fn of(g: &Graph, witness: &[usize]) -> Self {
        let mut inside = vec![false; g.n()];
        for &v in witness {
            inside[v] = true;
        }
        let mut edge_boundary = 0;
        let mut outside_nbr = vec![false; g.n()];
        for &v in witness {
            for &u in g.neighbors(v) {
                if !inside[u] {
                    edge_boundary += 1;
                    outside_nbr[u] = true;
                }
            }
        }
        let vertex_boundary = outside_nbr.iter().filter(|&&b| b).count();
        let mut sorted = witness.to_vec();
        sorted.sort_unstable();
        let k = sorted.len() as f64;
        CutResult {
            witness: sorted,
            edge_boundary,
            vertex_boundary,
            edge_ratio: edge_boundary as f64 / k,
            vertex_ratio: vertex_boundary as f64 / k,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Objective {
    Edge,
    Vertex,
}

/// Exact `min |E(A, A^c)| / |A|` over `0 < |A| <= n/2`.
pub fn edge_cheeger_exact(g: &Graph, work_limit: u64) -> Result<CutResult> {
    exact(g, work_limit, Objective::Edge)
}

/// Exact `min |∂A| / |A|` over `0 < |A| <= n/2`, where `∂A` is the set of
/// outside vertices adjacent to `A`.
pub fn vertex_iso_exact(g: &Graph, work_limit: u64) -> Result<CutResult> {
    exact(g, work_limit, Objective::Vertex)
}

fn exact(g: &Graph, work_limit: u64, objective: Objective) -> Result<CutResult> {
    let n = g.n();
    if n < 2 {
        return Err(Error::precondition(format!(
            "isoperimetric constants need at least 2 vertices, got {n}"
        )));
    }
    if n > MAX_BITSET_VERTICES {
        return Err(Error::SizeGuard {
            guard: "exact isoperimetry vertex count",
            limit: MAX_BITSET_VERTICES as u64,
            actual: n as u64,
        });
    }
    let (labels, count) = components(g);
    if count > 1 {
        // The whole component with the smallest vertex among those that fit.
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        let pick = (0..count).find(|&l| 2 * sizes[l] <= n).expect("some component fits");
        let witness: Vec<usize> = (0..n).filter(|&v| labels[v] == pick).collect();
        return Ok(CutResult::of(g, &witness));
    }

    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | bit(u)))
        .collect();
    let reach = match objective {
        Objective::Edge => adj.clone(),
        Objective::Vertex => (0..n)
            .map(|v| {
                let two = g.neighbors(v).iter().fold(adj[v], |m, &u| m | adj[u]);
                two & !bit(v)
            })
            .collect(),
    };
    let ctx = Enumeration {
        adj: &adj,
        reach: &reach,
        max_size: (n / 2) as u32,
        objective,
        limit: work_limit,
        visited: AtomicU64::new(0),
    };
    let per_root: Option<Vec<Option<Best>>> = (0..n).into_par_iter().map(|r| ctx.search_root(r)).collect();
    let visited = ctx.visited.load(Ordering::Relaxed);
    let per_root = per_root.filter(|_| visited <= work_limit).ok_or(Error::SizeGuard {
        guard: "work_limit",
        limit: work_limit,
        actual: visited,
    })?;
    let best = per_root
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.beats(&a) { b } else { a })
        .expect("n >= 2 gives a singleton candidate");
    let witness: Vec<usize> = (0..n).filter(|&v| best.set & bit(v) != 0).collect();
    Ok(CutResult::of(g, &witness))
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

#[derive(Clone, Copy, Debug)]
struct Best {
    boundary: u64,
    size: u64,
    set: u64,
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        let lhs = self.boundary * other.size;
        let rhs = other.boundary * self.size;
        lhs < rhs || (lhs == rhs && lex_less(self.set, other.set))
    }
}

/// Lexicographic order of the sorted element lists of two distinct sets.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let i = diff.trailing_zeros();
    let above = if i == 63 { 0 } else { !0u64 << (i + 1) };
    if a & (1u64 << i) != 0 {
        b & above != 0
    } else {
        a & above == 0
    }
}

struct Enumeration<'a> {
    adj: &'a [u64],
    reach: &'a [u64],
    max_size: u32,
    objective: Objective,
    limit: u64,
    visited: AtomicU64,
}

struct RootState {
    best: Option<Best>,
    pending: u64,
}

impl Enumeration<'_> {
    /// Best set whose lowest vertex is `r`, or `None` when the shared work
    /// counter passes the limit.
    fn search_root(&self, r: usize) -> Option<Option<Best>> {
        let mut st = RootState { best: None, pending: 0 };
        let below = bit(r) - 1;
        let set = bit(r);
        let ext = self.reach[r] & !below & !set;
        let boundary = self.boundary_after(0, 0, 0, r);
        let ok = self.grow(&mut st, set, self.adj[r], boundary.0, ext, below | set);
        self.visited.fetch_add(st.pending, Ordering::Relaxed);
        ok.then_some(st.best)
    }

    /// Edge boundary and neighborhood mask after adding `v` to `set`.
    fn boundary_after(&self, set: u64, nbr: u64, edge_boundary: u64, v: usize) -> (u64, u64) {
        let deg = self.adj[v].count_ones() as u64;
        let inside = (self.adj[v] & set).count_ones() as u64;
        (edge_boundary + deg - 2 * inside, nbr | self.adj[v])
    }

    fn grow(&self, st: &mut RootState, set: u64, nbr: u64, eb: u64, mut ext: u64, mut forbid: u64) -> bool {
        st.pending += 1;
        if st.pending >= FLUSH_EVERY {
            let total = self.visited.fetch_add(st.pending, Ordering::Relaxed) + st.pending;
            st.pending = 0;
            if total > self.limit {
                return false;
            }
        }
        let size = set.count_ones() as u64;
        let boundary = match self.objective {
            Objective::Edge => eb,
            Objective::Vertex => (nbr & !set).count_ones() as u64,
        };
        let cand = Best { boundary, size, set };
        if st.best.is_none_or(|b| cand.beats(&b)) {
            st.best = Some(cand);
        }
        if size as u32 >= self.max_size {
            return true;
        }
        while ext != 0 {
            let v = ext.trailing_zeros() as usize;
            ext &= !bit(v);
            let child = set | bit(v);
            let (eb2, nbr2) = self.boundary_after(set, nbr, eb, v);
            let ext2 = (ext | self.reach[v]) & !forbid & !child;
            if !self.grow(st, child, nbr2, eb2, ext2, forbid) {
                return false;
            }
            forbid |= bit(v);
        }
        true
    }
}

/// A valid cut found by seeded local search, hence an upper bound on the
/// edge Cheeger constant. Starts from breadth-first prefixes, then runs
/// `budget` add/remove/swap proposals on the best one, accepting any move
/// that does not raise the edge ratio.
pub fn cheeger_upper_bound(g: &Graph, budget: u64, seed: u64) -> Result<CutResult> {
    let n = g.n();
    if n < 2 {
        return Err(Error::precondition(format!(
            "isoperimetric constants need at least 2 vertices, got {n}"
        )));
    }
    let (labels, count) = components(g);
    if count > 1 {
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        let pick = (0..count).find(|&l| 2 * sizes[l] <= n).expect("some component fits");
        let witness: Vec<usize> = (0..n).filter(|&v| labels[v] == pick).collect();
        return Ok(CutResult::of(g, &witness));
    }
    let half = n / 2;
    let mut r = rng::stream(seed, 0);

    let mut starts = vec![0];
    for _ in 1..n.min(8) {
        starts.push(r.random_range(0..n));
    }
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for &s in &starts {
        let order = bfs_order(g, s);
        let mut inside = vec![false; n];
        let mut eb = 0usize;
        for (i, &v) in order.iter().take(half).enumerate() {
            let inn = g.neighbors(v).iter().filter(|&&u| inside[u]).count();
            eb = eb + g.degree(v) - 2 * inn;
            inside[v] = true;
            let k = i + 1;
            if best.as_ref().is_none_or(|&(b, bk, _)| eb * bk < b * k) {
                best = Some((eb, k, order[..k].to_vec()));
            }
        }
    }
    let (mut eb, _, members) = best.expect("n >= 2");

    let mut search = LocalCut::new(g, &members, eb);
    let mut best_set = members;
    let (mut best_eb, mut best_k) = (eb, best_set.len());
    for _ in 0..budget {
        let k = search.members.len();
        let mv = r.random_range(0..3u8);
        let ok = match mv {
            0 if k < half => {
                let v = r.random_range(0..n);
                !search.inside[v] && search.try_move(Some(v), None, &mut eb)
            }
            1 if k > 1 => {
                let v = search.members[r.random_range(0..k)];
                search.try_move(None, Some(v), &mut eb)
            }
            2 if k < n => {
                let out = r.random_range(0..n);
                let inn = search.members[r.random_range(0..k)];
                !search.inside[out] && search.try_move(Some(out), Some(inn), &mut eb)
            }
            _ => false,
        };
        if ok {
            let k = search.members.len();
            if eb * best_k < best_eb * k {
                best_eb = eb;
                best_k = k;
                best_set = search.members.clone();
            }
        }
    }
    Ok(CutResult::of(g, &best_set))
}

fn bfs_order(g: &Graph, s: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = vec![s];
    seen[s] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    order
}

struct LocalCut<'g> {
    g: &'g Graph,
    inside: Vec<bool>,
    members: Vec<usize>,
    pos: Vec<usize>,
}

impl<'g> LocalCut<'g> {
    fn new(g: &'g Graph, members: &[usize], _eb: usize) -> Self {
        let mut inside = vec![false; g.n()];
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in members.iter().enumerate() {
            inside[v] = true;
            pos[v] = i;
        }
        LocalCut { g, inside, members: members.to_vec(), pos }
    }

    fn inside_nbrs(&self, v: usize) -> usize {
        self.g.neighbors(v).iter().filter(|&&u| self.inside[u]).count()
    }

    fn toggle(&mut self, v: usize, eb: &mut usize) {
        let inn = self.inside_nbrs(v);
        let deg = self.g.degree(v);
        if self.inside[v] {
            *eb = *eb + 2 * inn - deg;
            self.inside[v] = false;
            let i = self.pos[v];
            let last = self.members.pop().expect("member present");
            if last != v {
                self.members[i] = last;
                self.pos[last] = i;
            }
            self.pos[v] = usize::MAX;
        } else {
            *eb = *eb + deg - 2 * inn;
            self.inside[v] = true;
            self.pos[v] = self.members.len();
            self.members.push(v);
        }
    }

    /// Applies the move and keeps it unless the edge ratio went up.
    fn try_move(&mut self, add: Option<usize>, remove: Option<usize>, eb: &mut usize) -> bool {
        let (old_eb, old_k) = (*eb, self.members.len());
        if let Some(v) = remove {
            self.toggle(v, eb);
        }
        if let Some(v) = add {
            self.toggle(v, eb);
        }
        let k = self.members.len();
        if *eb * old_k <= old_eb * k {
            return true;
        }
        if let Some(v) = add {
            self.toggle(v, eb);
        }
        if let Some(v) = remove {
            self.toggle(v, eb);
        }
        false
    }
}
