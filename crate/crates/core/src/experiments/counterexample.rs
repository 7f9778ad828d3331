use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{num, point, proportion, ExperimentReport};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{generate, FamilySpec, Graph};
use crate::numeric::binomial_pmf;
use crate::oracle::ClusterCensus;
use crate::percolation::LargeThreshold;
use crate::rng::{self, derive_seed};

const EXACT_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CounterexampleKind {
    /// The cycle `C_n` at `p = 1 - 3/n`.
    Cycle,
    /// `C_n x K_h` at `p = 1 - (3/n)^(1/h)`, so that on average three rungs
    /// of the cycle are fully closed.
    CycleProduct { clique: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleConfig {
    pub kind: CounterexampleKind,
    /// Cycle length; the demo also runs twice this length.
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
}

/// Probability of two or more components with at least a quarter of the
/// vertices, on families with poor expansion, at sizes `n` and `2n`. For
/// plain cycles a second estimator places the closed edges directly
/// (binomial count, then uniform distinct positions) and measures arcs;
/// for at most 20 edges the exact value is added.
pub fn counterexample_demo(cfg: &CounterexampleConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let clique = match cfg.kind {
        CounterexampleKind::Cycle => 1,
        CounterexampleKind::CycleProduct { clique } => clique,
    };
    if cfg.n * clique < 8 || cfg.n < 3 || cfg.trials == 0 {
        return Err(Error::precondition(format!(
            "demo needs at least 8 vertices, so that a quarter is at least 2, and trials > 0 (n = {}, clique = {clique}, trials = {})",
            cfg.n, cfg.trials
        )));
    }
    let mut report = ExperimentReport::new("counterexample_demo", cfg, cfg.seed);
    for (i, len) in [cfg.n, 2 * cfg.n].into_iter().enumerate() {
        let spec = match cfg.kind {
            CounterexampleKind::Cycle => FamilySpec::Cycle(len),
            CounterexampleKind::CycleProduct { clique } => {
                FamilySpec::Product(Box::new(FamilySpec::Cycle(len)), Box::new(FamilySpec::Complete(clique)))
            }
        };
        let g = generate(&spec)?;
        let closed = (3.0 / len as f64).powf(1.0 / clique as f64);
        let p = 1.0 - closed;
        let large = LargeThreshold::Fraction(0.25).min_size(g.n());
        let seed = derive_seed(cfg.seed, i as u64);
        let est = proportion(two_large_hits(&g, p, large, cfg.trials, seed), cfg.trials);

        let name = spec.to_string();
        let mut cols = vec![
            ("cycle_length", len as f64),
            ("vertices", g.n() as f64),
            ("p", p),
            ("large_size", large as f64),
            ("estimate", est.mean),
            ("estimate_se", est.se),
        ];
        let key = |k: &str| format!("{name}/{k}");
        report.put(key("p"), num(p));
        report.put_estimate(&key("estimate"), est);
        if cfg.kind == CounterexampleKind::Cycle {
            let oracle_seed = derive_seed(cfg.seed, 1 << 32 | i as u64);
            let hits = placement_hits(len, closed, large, cfg.trials, oracle_seed);
            let place = proportion(hits, cfg.trials);
            let z = (est.mean - place.mean) / (est.se.powi(2) + place.se.powi(2)).sqrt();
            cols.extend([("placement", place.mean), ("placement_se", place.se), ("agreement_z", z)]);
            report.put_estimate(&key("placement"), place);
            report.put(key("agreement_z"), num(z));
        }
        if g.m() <= EXACT_EDGE_LIMIT {
            let exact = ClusterCensus::new(&g, &[large])?.at(p)?.p_two_large[0];
            cols.push(("exact", exact));
            report.put(key("exact"), num(exact));
        }
        report.points.push(point(&name, &cols));
    }
    Ok(report.finish(started))
}

/// Trials (stream `t` of `seed`) in which `G(p)` has at least two
/// components of size `>= large`.
fn two_large_hits(g: &Graph, p: f64, large: usize, trials: u64, seed: u64) -> u64 {
    (0..trials)
        .into_par_iter()
        .map_init(
            || DisjointSets::new(g.n()),
            |dsu, t| {
                dsu.reset();
                let mut r = rng::stream(seed, t);
                for &(u, v) in g.edges() {
                    if r.random::<f64>() < p {
                        dsu.union(u, v);
                    }
                }
                let big = dsu.sizes_desc().iter().take_while(|&&s| s >= large).count();
                u64::from(big >= 2)
            },
        )
        .sum()
}

/// Same event on the cycle `C_len` with each edge closed with probability
/// `closed`, simulated by drawing the number of closed edges and then their
/// positions; components are the arcs between consecutive closed edges.
fn placement_hits(len: usize, closed: f64, large: usize, trials: u64, seed: u64) -> u64 {
    let pmf = binomial_pmf(len, closed);
    let cdf: Vec<f64> = pmf
        .iter()
        .scan(0.0, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, t);
            let u: f64 = r.random();
            let k = cdf.iter().position(|&c| u < c).unwrap_or(len);
            if k < 2 {
                return 0;
            }
            let mut pos = rand::seq::index::sample(&mut r, len, k).into_vec();
            pos.sort_unstable();
            let wrap = len - pos[k - 1] + pos[0];
            let arcs = pos.windows(2).map(|w| w[1] - w[0]).chain(std::iter::once(wrap));
            u64::from(arcs.filter(|&a| a >= large).count() >= 2)
        })
        .sum()
}
