//! Newman–Ziff sweeps: one random edge order per trial yields the cluster
//! statistics at every edge count `m`; binomial mixing over `m` turns the
//! microcanonical rows into `G(p)` expectations for any `p`.

use std::io::{self, Write};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::dsu::{DisjointSets, SizeCensus};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{binomial_pmf, check_probability, Estimate};
use crate::rng;

/// Trials handed to the thread pool at once; accumulation order inside and
/// across chunks is the trial order.
const CHUNK: usize = 64;
/// Row weights below this fraction of the peak are dropped when computing
/// per-trial canonical values (standard errors only).
const WEIGHT_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub trials: usize,
    /// Component-size thresholds `s` for the `count >= s` statistics.
    pub thresholds: Vec<usize>,
    pub seed: u64,
    /// Record every `stride`-th edge count (plus the last). 1 records all.
    pub stride: usize,
    /// Retention probabilities at which per-trial canonical values are kept,
    /// giving standard errors for the smoothed curves.
    pub p_grid: Vec<f64>,
}

impl SweepConfig {
    pub fn new(trials: usize, thresholds: Vec<usize>, seed: u64) -> Self {
        SweepConfig {
            trials,
            thresholds,
            seed,
            stride: 1,
            p_grid: Vec::new(),
        }
    }

    pub fn with_grid(mut self, p_grid: Vec<f64>) -> Self {
        self.p_grid = p_grid;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }
}

/// `points` evenly spaced probabilities covering `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..points)
            .map(|i| i as f64 / (points - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct GridMoments {
    p: f64,
    l1: (f64, f64),
    l2: (f64, f64),
    two_large: Vec<(f64, f64)>,
}

/// Accumulated microcanonical statistics of a sweep ensemble.
///
/// Sums are integers, so the record does not depend on how trials were
/// scheduled across threads.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    n: usize,
    m_max: usize,
    trials: usize,
    seed: u64,
    thresholds: Vec<usize>,
    stride: usize,
    rows: Vec<usize>,
    l1_sum: Vec<u64>,
    l2_sum: Vec<u64>,
    count_sum: Vec<Vec<u64>>,
    two_large_sum: Vec<Vec<u64>>,
    grid: Vec<GridMoments>,
}

/// Mean statistics at one recorded edge count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowMeans {
    pub m: usize,
    pub l1: f64,
    pub l2: f64,
    pub counts: Vec<f64>,
    /// Fraction of sweeps with at least two components of size `>= s`.
    pub two_large: Vec<f64>,
}

impl SweepRecord {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    /// Recorded edge counts, ascending, always including 0 and `m_max`.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn p_grid(&self) -> Vec<f64> {
        self.grid.iter().map(|g| g.p).collect()
    }

    pub fn row(&self, idx: usize) -> RowMeans {
        let t = self.trials as f64;
        RowMeans {
            m: self.rows[idx],
            l1: self.l1_sum[idx] as f64 / t,
            l2: self.l2_sum[idx] as f64 / t,
            counts: self.count_sum.iter().map(|c| c[idx] as f64 / t).collect(),
            two_large: self.two_large_sum.iter().map(|c| c[idx] as f64 / t).collect(),
        }
    }

    /// Row for edge count `m`, if recorded.
    pub fn row_at(&self, m: usize) -> Option<RowMeans> {
        self.rows.binary_search(&m).ok().map(|i| self.row(i))
    }

    /// Binomial weights on recorded rows; unrecorded edge counts are
    /// linearly interpolated between their neighbouring rows.
    fn row_weights(&self, p: f64) -> Vec<f64> {
        let pmf = binomial_pmf(self.m_max, p);
        if self.stride == 1 {
            return pmf;
        }
        let mut w = vec![0.0; self.rows.len()];
        let mut hi = 0;
        for (m, &pm) in pmf.iter().enumerate() {
            while self.rows[hi] < m {
                hi += 1;
            }
            if self.rows[hi] == m {
                w[hi] += pm;
            } else {
                let (a, b) = (self.rows[hi - 1], self.rows[hi]);
                let lam = (m - a) as f64 / (b - a) as f64;
                w[hi - 1] += pm * (1.0 - lam);
                w[hi] += pm * lam;
            }
        }
        w
    }
}

/// `G(p)` expectations obtained by binomial mixing of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothedStats {
    pub p: f64,
    pub l1: f64,
    pub l2: f64,
    pub counts: Vec<f64>,
    pub two_large: Vec<f64>,
}

/// `E_p[stat] = sum_m Binom(m_max, p){m} * stat_m` for every statistic.
pub fn binomial_smooth(rec: &SweepRecord, p: f64) -> Result<SmoothedStats> {
    check_probability("p", p)?;
    let w = rec.row_weights(p);
    let t = rec.trials as f64;
    let dot = |sums: &[u64]| -> f64 {
        w.iter()
            .zip(sums)
            .filter(|(&wi, _)| wi > 0.0)
            .map(|(&wi, &s)| wi * s as f64)
            .sum::<f64>()
            / t
    };
    Ok(SmoothedStats {
        p,
        l1: dot(&rec.l1_sum),
        l2: dot(&rec.l2_sum),
        counts: rec.count_sum.iter().map(|c| dot(c)).collect(),
        two_large: rec.two_large_sum.iter().map(|c| dot(c)).collect(),
    })
}

/// One row of the canonical (fixed-`p`) table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalPoint {
    pub p: f64,
    pub l1_frac: Estimate,
    pub l2_frac: f64,
    /// Probability of two or more components of size `>=` the first threshold.
    pub p_two_large: Estimate,
}

/// Smoothed curves on the sweep's configured grid, with standard errors
/// taken across sweeps of the per-sweep smoothed values.
pub fn canonical_curve(rec: &SweepRecord) -> Vec<CanonicalPoint> {
    let n = rec.n.max(1) as f64;
    rec.grid
        .iter()
        .map(|g| {
            let s = binomial_smooth(rec, g.p).expect("grid p validated at sweep time");
            let se = |(a, b): (f64, f64)| Estimate::from_sums(a, b, rec.trials).se;
            let (two_mean, two_se) = match (s.two_large.first(), g.two_large.first()) {
                (Some(&m), Some(&mom)) => (m, se(mom)),
                _ => (f64::NAN, f64::NAN),
            };
            CanonicalPoint {
                p: g.p,
                l1_frac: Estimate {
                    mean: s.l1 / n,
                    se: se(g.l1) / n,
                },
                l2_frac: s.l2 / n,
                p_two_large: Estimate {
                    mean: two_mean,
                    se: two_se,
                },
            }
        })
        .collect()
}

/// Sweep with default options (stride 1, no standard-error grid).
pub fn newman_ziff_sweep(
    g: &Graph,
    trials: usize,
    thresholds: &[usize],
    seed: u64,
) -> Result<SweepRecord> {
    newman_ziff_sweep_with(g, &SweepConfig::new(trials, thresholds.to_vec(), seed))
}

struct TrialRows {
    l1: Vec<u32>,
    l2: Vec<u32>,
    counts: Vec<Vec<u32>>,
    two_large: Vec<Vec<u32>>,
    /// Per grid point: smoothed l1, l2, then two_large per threshold.
    canonical: Vec<Vec<f64>>,
}

struct SparseWeights {
    start: usize,
    weights: Vec<f64>,
}

impl SparseWeights {
    fn dot(&self, row: &[u32]) -> f64 {
        self.weights
            .iter()
            .zip(&row[self.start..])
            .map(|(w, &x)| w * x as f64)
            .sum()
    }
}

pub fn newman_ziff_sweep_with(g: &Graph, cfg: &SweepConfig) -> Result<SweepRecord> {
    if cfg.trials == 0 {
        return Err(Error::precondition("a sweep needs at least one trial"));
    }
    if cfg.stride == 0 {
        return Err(Error::precondition("stride must be at least 1"));
    }
    for &p in &cfg.p_grid {
        check_probability("grid p", p)?;
    }
    let (n, m_max) = (g.n(), g.m());
    let mut rows: Vec<usize> = (0..=m_max).step_by(cfg.stride).collect();
    if *rows.last().unwrap() != m_max {
        rows.push(m_max);
    }
    let k = cfg.thresholds.len();
    let mut rec = SweepRecord {
        n,
        m_max,
        trials: cfg.trials,
        seed: cfg.seed,
        thresholds: cfg.thresholds.clone(),
        stride: cfg.stride,
        l1_sum: vec![0; rows.len()],
        l2_sum: vec![0; rows.len()],
        count_sum: vec![vec![0; rows.len()]; k],
        two_large_sum: vec![vec![0; rows.len()]; k],
        grid: cfg
            .p_grid
            .iter()
            .map(|&p| GridMoments {
                p,
                l1: (0.0, 0.0),
                l2: (0.0, 0.0),
                two_large: vec![(0.0, 0.0); k],
            })
            .collect(),
        rows,
    };
    let sparse: Vec<SparseWeights> = cfg
        .p_grid
        .iter()
        .map(|&p| {
            let w = rec.row_weights(p);
            let peak = w.iter().cloned().fold(0.0, f64::max);
            let keep = |x: &f64| *x > WEIGHT_CUTOFF * peak;
            let start = w.iter().position(keep).unwrap_or(0);
            let end = w.iter().rposition(keep).map_or(start, |e| e + 1);
            SparseWeights {
                start,
                weights: w[start..end].to_vec(),
            }
        })
        .collect();

    let order: Vec<usize> = (0..m_max).collect();
    for chunk_start in (0..cfg.trials).step_by(CHUNK) {
        let chunk_end = (chunk_start + CHUNK).min(cfg.trials);
        let outputs: Vec<TrialRows> = (chunk_start..chunk_end)
            .into_par_iter()
            .map_init(
                || (DisjointSets::new(n), order.clone()),
                |(dsu, order), t| run_trial(g, cfg, &rec.rows, &sparse, dsu, order, t as u64),
            )
            .collect();
        for out in outputs {
            accumulate(&mut rec, out);
        }
    }
    Ok(rec)
}

fn run_trial(
    g: &Graph,
    cfg: &SweepConfig,
    rows: &[usize],
    sparse: &[SparseWeights],
    dsu: &mut DisjointSets,
    order: &mut [usize],
    trial: u64,
) -> TrialRows {
    let mut rng = rng::stream(cfg.seed, trial);
    order.sort_unstable();
    order.shuffle(&mut rng);
    dsu.reset();
    let k = cfg.thresholds.len();
    let mut census = SizeCensus::singletons(g.n(), &cfg.thresholds);
    let mut out = TrialRows {
        l1: Vec::with_capacity(rows.len()),
        l2: Vec::with_capacity(rows.len()),
        counts: vec![Vec::with_capacity(rows.len()); k],
        two_large: vec![Vec::with_capacity(rows.len()); k],
        canonical: Vec::new(),
    };
    let record = |census: &SizeCensus, out: &mut TrialRows| {
        out.l1.push(census.largest() as u32);
        out.l2.push(census.second_largest() as u32);
        for (i, &c) in census.at_least().iter().enumerate() {
            out.counts[i].push(c as u32);
            out.two_large[i].push(u32::from(c >= 2));
        }
    };
    let mut next_row = 0;
    if rows[next_row] == 0 {
        record(&census, &mut out);
        next_row += 1;
    }
    for (idx, &e) in order.iter().enumerate() {
        let (u, v) = g.edge(e);
        if let Some((a, b)) = dsu.union(u, v) {
            census.merge(a, b);
        }
        if next_row < rows.len() && rows[next_row] == idx + 1 {
            record(&census, &mut out);
            next_row += 1;
        }
    }
    out.canonical = sparse
        .iter()
        .map(|w| {
            let mut vals = vec![w.dot(&out.l1), w.dot(&out.l2)];
            vals.extend(out.two_large.iter().map(|r| w.dot(r)));
            vals
        })
        .collect();
    out
}

fn accumulate(rec: &mut SweepRecord, out: TrialRows) {
    let add = |sum: &mut [u64], row: &[u32]| {
        for (s, &x) in sum.iter_mut().zip(row) {
            *s += x as u64;
        }
    };
    add(&mut rec.l1_sum, &out.l1);
    add(&mut rec.l2_sum, &out.l2);
    for (s, r) in rec.count_sum.iter_mut().zip(&out.counts) {
        add(s, r);
    }
    for (s, r) in rec.two_large_sum.iter_mut().zip(&out.two_large) {
        add(s, r);
    }
    let push = |acc: &mut (f64, f64), x: f64| {
        acc.0 += x;
        acc.1 += x * x;
    };
    for (g, vals) in rec.grid.iter_mut().zip(&out.canonical) {
        push(&mut g.l1, vals[0]);
        push(&mut g.l2, vals[1]);
        for (acc, &x) in g.two_large.iter_mut().zip(&vals[2..]) {
            push(acc, x);
        }
    }
}

/// Header lines (`# ...`) followed by `m,L1_mean,L2_mean,count_ge_<s>_mean...`.
pub fn write_sweep_csv<W: Write>(mut w: W, rec: &SweepRecord, comments: &[String]) -> io::Result<()> {
    write_comments(&mut w, comments)?;
    write!(w, "m,L1_mean,L2_mean")?;
    for s in &rec.thresholds {
        write!(w, ",count_ge_{s}_mean")?;
    }
    writeln!(w)?;
    for i in 0..rec.rows.len() {
        let r = rec.row(i);
        write!(w, "{},{},{}", r.m, r.l1, r.l2)?;
        for c in &r.counts {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Header lines followed by `p,L1_frac,L1_frac_se,L2_frac,P_two_large,P_two_large_se`.
pub fn write_canonical_csv<W: Write>(
    mut w: W,
    points: &[CanonicalPoint],
    comments: &[String],
) -> io::Result<()> {
    write_comments(&mut w, comments)?;
    writeln!(w, "p,L1_frac,L1_frac_se,L2_frac,P_two_large,P_two_large_se")?;
    for pt in points {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            pt.p,
            pt.l1_frac.mean,
            pt.l1_frac.se,
            pt.l2_frac,
            pt.p_two_large.mean,
            pt.p_two_large.se
        )?;
    }
    Ok(())
}

/// Writes each line of each comment as `# line`.
pub fn write_comments<W: Write>(w: &mut W, comments: &[String]) -> io::Result<()> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}
