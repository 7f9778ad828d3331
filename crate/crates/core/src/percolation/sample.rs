use rand::Rng;
use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{check_probability, tolerant_ceil};
use crate::rng;

/// One bond-percolation configuration on a borrowed graph, with its
/// component structure.
#[derive(Debug, Clone)]
pub struct PercSample<'g> {
    graph: &'g Graph,
    open: Vec<bool>,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    p: f64,
}

impl<'g> PercSample<'g> {
    /// Analyzes the configuration `open` (one flag per edge id).
    pub fn from_open(graph: &'g Graph, open: Vec<bool>, p: f64) -> Self {
        assert_eq!(open.len(), graph.m(), "one indicator per edge");
        let mut dsu = DisjointSets::new(graph.n());
        for (&(u, v), _) in graph.edges().iter().zip(&open).filter(|(_, &o)| o) {
            dsu.union(u, v);
        }
        PercSample {
            graph,
            labels: dsu.labels(),
            sizes: dsu.sizes_desc(),
            open,
            p,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn open(&self) -> &[bool] {
        &self.open
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    /// Component id per vertex, numbered by smallest member.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Component sizes, largest first.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn into_open(self) -> Vec<bool> {
        self.open
    }
}

/// Per-edge uniforms in `[0, 1)` from stream 0 of `seed`. Thresholding one
/// vector at several `p` gives the monotone coupling.
pub fn edge_uniforms(g: &Graph, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed, 0);
    (0..g.m()).map(|_| r.random::<f64>()).collect()
}

/// Configuration with edge `e` open iff `uniforms[e] < p`.
pub fn sample_from_uniforms<'g>(g: &'g Graph, uniforms: &[f64], p: f64) -> Result<PercSample<'g>> {
    check_probability("p", p)?;
    let open = uniforms.iter().map(|&u| u < p).collect();
    Ok(PercSample::from_open(g, open, p))
}

/// `G(p)`: every edge retained independently with probability `p`.
pub fn sample(g: &Graph, p: f64, seed: u64) -> Result<PercSample<'_>> {
    check_probability("p", p)?;
    sample_from_uniforms(g, &edge_uniforms(g, seed), p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentStats {
    pub l1: usize,
    pub l2: usize,
    /// Components of size at least each requested threshold.
    pub counts: Vec<usize>,
}

pub fn component_stats(s: &PercSample<'_>, thresholds: &[usize]) -> ComponentStats {
    let sizes = s.sizes();
    ComponentStats {
        l1: sizes.first().copied().unwrap_or(0),
        l2: sizes.get(1).copied().unwrap_or(0),
        counts: thresholds
            .iter()
            .map(|&t| sizes.iter().take_while(|&&x| x >= t).count())
            .collect(),
    }
}

/// What makes a component "large".
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LargeThreshold {
    /// At least `ceil(c * n)` vertices, `0 < c <= 1`.
    Fraction(f64),
    /// At least `ceil(n^omega)` vertices, `0 < omega < 1`.
    Power(f64),
    /// At least this many vertices.
    Size(usize),
}

impl LargeThreshold {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LargeThreshold::Fraction(c) if !(c > 0.0 && c <= 1.0) => {
                Err(Error::precondition(format!("fraction c = {c} is outside (0, 1]")))
            }
            LargeThreshold::Power(w) if !(w > 0.0 && w < 1.0) => {
                Err(Error::precondition(format!("exponent omega = {w} is outside (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    /// Minimum size of a large component on `n` vertices (at least 1).
    pub fn min_size(&self, n: usize) -> usize {
        let raw = match *self {
            LargeThreshold::Fraction(c) => tolerant_ceil(c * n as f64),
            LargeThreshold::Power(w) => tolerant_ceil((n as f64).powf(w)),
            LargeThreshold::Size(s) => s as f64,
        };
        (raw as usize).max(1)
    }
}

/// Number of components of size at least `ceil(c * n)`.
pub fn count_large_components(s: &PercSample<'_>, c: f64) -> Result<usize> {
    count_components_at_least(s, LargeThreshold::Fraction(c))
}

pub fn count_components_at_least(s: &PercSample<'_>, t: LargeThreshold) -> Result<usize> {
    t.validate()?;
    let min = t.min_size(s.graph().n());
    Ok(s.sizes().iter().take_while(|&&x| x >= min).count())
}
