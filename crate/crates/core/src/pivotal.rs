//! Monotone edge events, pivotal edges and the coupled (configuration, edge)
//! sampler whose marginals are product-Bernoulli and uniform.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{check_probability, ln_binomial_mass, tolerant_ceil, Estimate};
use crate::percolation::PercSample;
use crate::rng::{self, StreamRng};

/// Slack for comparing the real-valued functional against integer levels.
pub const Z_TOLERANCE: f64 = 1e-9;

pub type UpSetPredicate = Arc<dyn Fn(&Graph, &[bool]) -> bool + Send + Sync>;

/// A family of edge sets, given by its membership test.
#[derive(Clone)]
pub enum UpSetSpec {
    /// Some open component has at least this many vertices.
    LargeComponentExists(usize),
    /// `Z >= i` for the large-component threshold `ceil(c * n)`.
    ZAtLeast { c: f64, i: i64 },
    /// At least this many open edges.
    EdgeCountAtLeast(usize),
    /// Caller-supplied test. Monotonicity is only declared, not checked.
    Custom {
        name: String,
        pred: UpSetPredicate,
        declared_monotone: bool,
    },
}

impl fmt::Debug for UpSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UpSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpSetSpec::LargeComponentExists(s) => write!(f, "large>={s}"),
            UpSetSpec::ZAtLeast { c, i } => write!(f, "z>={i}@c={c}"),
            UpSetSpec::EdgeCountAtLeast(t) => write!(f, "edges>={t}"),
            UpSetSpec::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl UpSetSpec {
    pub fn custom(
        name: impl Into<String>,
        declared_monotone: bool,
        pred: impl Fn(&Graph, &[bool]) -> bool + Send + Sync + 'static,
    ) -> Self {
        UpSetSpec::Custom {
            name: name.into(),
            pred: Arc::new(pred),
            declared_monotone,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            UpSetSpec::ZAtLeast { c, .. } => check_fraction(c),
            _ => Ok(()),
        }
    }

    pub fn is_declared_monotone(&self) -> bool {
        match self {
            UpSetSpec::Custom { declared_monotone, .. } => *declared_monotone,
            _ => true,
        }
    }

    /// Membership of the configuration `open` (one flag per edge).
    pub fn contains(&self, g: &Graph, open: &[bool]) -> bool {
        match self {
            UpSetSpec::EdgeCountAtLeast(t) => open.iter().filter(|&&o| o).count() >= *t,
            UpSetSpec::LargeComponentExists(s) => {
                open_sizes(g, open).first().copied().unwrap_or(0) >= *s
            }
            UpSetSpec::ZAtLeast { c, i } => {
                z_from_sizes(&open_sizes(g, open), g.n(), *c).z >= *i as f64 - Z_TOLERANCE
            }
            UpSetSpec::Custom { pred, .. } => pred(g, open),
        }
    }
}

fn check_fraction(c: f64) -> Result<()> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(Error::precondition(format!("fraction c = {c} is outside (0, 1]")))
    }
}

fn open_sizes(g: &Graph, open: &[bool]) -> Vec<usize> {
    let mut dsu = DisjointSets::new(g.n());
    for (&(u, v), _) in g.edges().iter().zip(open).filter(|(_, &o)| o) {
        dsu.union(u, v);
    }
    dsu.sizes_desc()
}

/// Vertices in large components, their number, and
/// `z = y / (c n) - comp_count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZBreakdown {
    pub y: usize,
    pub comp_count: usize,
    pub z: f64,
}

/// `sizes` sorted descending.
fn z_from_sizes(sizes: &[usize], n: usize, c: f64) -> ZBreakdown {
    let min = (tolerant_ceil(c * n as f64) as usize).max(1);
    let large = sizes.iter().take_while(|&&s| s >= min);
    let (y, comp_count) = large.fold((0, 0), |(y, k), &s| (y + s, k + 1));
    ZBreakdown {
        y,
        comp_count,
        z: y as f64 / (c * n as f64) - comp_count as f64,
    }
}

pub fn z_value(s: &PercSample<'_>, c: f64) -> Result<ZBreakdown> {
    check_fraction(c)?;
    Ok(z_from_sizes(s.sizes(), s.graph().n(), c))
}

/// Whether adding `e` to `open` lands in `u` while removing it does not.
pub fn is_pivotal(g: &Graph, open: &[bool], e: usize, u: &UpSetSpec) -> bool {
    let mut cfg = open.to_vec();
    cfg[e] = true;
    if !u.contains(g, &cfg) {
        return false;
    }
    cfg[e] = false;
    !u.contains(g, &cfg)
}

/// One draw of the coupled pair: a uniformly random edge ordering, an
/// independent `X ~ Binom(k, p)`, the first `X` edges as the set, and as
/// the edge either the `X`-th (with probability `X/k`) or the next one.
/// Returns the membership vector and the chosen edge id.
pub fn sample_pair(k: usize, p: f64, seed: u64) -> Result<(Vec<bool>, usize)> {
    check_pair_args(k, p)?;
    Ok(sample_pair_with(k, p, &mut rng::stream(seed, 0)))
}

fn check_pair_args(k: usize, p: f64) -> Result<()> {
    check_probability("p", p)?;
    if k == 0 {
        return Err(Error::precondition("the pair sampler needs at least one edge"));
    }
    Ok(())
}

fn sample_pair_with(k: usize, p: f64, r: &mut StreamRng) -> (Vec<bool>, usize) {
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(r);
    let x = (0..k).filter(|_| r.random::<f64>() < p).count();
    let take_last = r.random::<f64>() * (k as f64) < x as f64;
    let e = if take_last { order[x - 1] } else { order[x] };
    let mut set = vec![false; k];
    for &i in &order[..x] {
        set[i] = true;
    }
    (set, e)
}

/// Exact joint law of [`sample_pair`]: entry `mask * k + e` is the
/// probability of set `mask` (bit per edge) with edge `e`, integrated over
/// all `k!` orderings, every `X` and the final choice.
pub fn pair_construction_law(k: usize, p: f64) -> Result<Vec<f64>> {
    check_pair_args(k, p)?;
    if k > 8 {
        return Err(Error::SizeGuard {
            guard: "pair law edge count",
            limit: 8,
            actual: k as u64,
        });
    }
    let pmf = crate::numeric::binomial_pmf(k, p);
    let mut law = vec![0.0; (1 << k) * k];
    let mut perms = Vec::new();
    permutations(&mut (0..k).collect(), 0, &mut perms);
    let per_order = 1.0 / perms.len() as f64;
    for order in &perms {
        for (x, &wx) in pmf.iter().enumerate() {
            let mask = order[..x].iter().fold(0usize, |m, &i| m | 1 << i);
            let last = x as f64 / k as f64;
            if x > 0 {
                law[mask * k + order[x - 1]] += per_order * wx * last;
            }
            if x < k {
                law[mask * k + order[x]] += per_order * wx * (1.0 - last);
            }
        }
    }
    Ok(law)
}

fn permutations(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == v.len() {
        out.push(v.clone());
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, out);
        v.swap(i, j);
    }
}

/// Monte Carlo probability that the sampled edge is pivotal at the sampled
/// configuration. Trial `t` draws from stream `t`, so the estimate does not
/// depend on the thread count.
pub fn pivotal_prob_mc(g: &Graph, p: f64, u: &UpSetSpec, trials: u64, seed: u64) -> Result<Estimate> {
    u.validate()?;
    check_pair_args(g.m(), p)?;
    if !u.is_declared_monotone() {
        return Err(Error::precondition(format!("up-set {u} is not declared monotone")));
    }
    if trials == 0 {
        return Err(Error::precondition("trials must be positive"));
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (open, e) = sample_pair_with(g.m(), p, &mut rng::stream(seed, t));
            u64::from(is_pivotal(g, &open, e, u))
        })
        .sum();
    Ok(Estimate::from_sums(hits as f64, hits as f64, trials as usize))
}

/// `((k + 1) / k) * max over p in [x, 1 - x] and m of Binom(k, p){m}`.
/// For each `m` the best `p` is `m / k` clamped into the interval.
pub fn pivotal_bound(k: usize, x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::precondition(format!("margin x = {x} is outside (0, 1/2]")));
    }
    if k == 0 {
        return Err(Error::precondition("pivotal bound needs at least one edge"));
    }
    let best = (0..=k)
        .map(|m| {
            let p = (m as f64 / k as f64).clamp(x, 1.0 - x);
            ln_binomial_mass(k as u64, m as u64, p).exp()
        })
        .fold(0.0, f64::max);
    Ok((k + 1) as f64 / k as f64 * best)
}

/// Open edges whose removal leaves two distinct components of size at least
/// `ceil(c * n)` that the edge joins. Ascending edge ids.
pub fn find_lbridges(s: &PercSample<'_>, c: f64) -> Result<Vec<usize>> {
    check_fraction(c)?;
    let g = s.graph();
    let n = g.n();
    let min = (tolerant_ceil(c * n as f64) as usize).max(1);
    let open = s.open();
    let mut comp_size = vec![0usize; n];
    for &l in s.labels() {
        comp_size[l] += 1;
    }

    // Iterative DFS over the open subgraph: discovery times, low links and
    // subtree sizes. A tree edge is a bridge iff low[child] > disc[parent].
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut sub = vec![1usize; n];
    let mut time = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge used to enter, next incident index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&(v, via, next)) = stack.last() {
            let inc = g.incident_edges(v);
            if next < inc.len() {
                let e = inc[next];
                stack.last_mut().expect("nonempty").2 += 1;
                if !open[e] || e == via {
                    continue;
                }
                let (a, b) = g.edge(e);
                let w = if a == v { b } else { a };
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    sub[parent] += sub[v];
                    if low[v] > disc[parent] {
                        let total = comp_size[s.labels()[v]];
                        if sub[v] >= min && total - sub[v] >= min {
                            out.push(via);
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// One row of the pivotal experiment table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PivotalRow {
    pub k: usize,
    pub p: f64,
    pub upset: String,
    pub estimate: f64,
    pub se: f64,
    pub bound: f64,
}

pub fn write_pivotal_csv<W: Write>(out: &mut W, rows: &[PivotalRow], comments: &[String]) -> std::io::Result<()> {
    crate::percolation::write_comments(out, comments)?;
    writeln!(out, "k,p,upset,estimate,se,bound")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.k, r.p, r.upset, r.estimate, r.se, r.bound)?;
    }
    Ok(())
}
