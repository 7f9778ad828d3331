//! Exhaustive enumeration of all `2^m` edge configurations of a tiny graph.
//!
//! Configurations are integers with one bit per edge id. Every quantity is
//! first tallied as integer counts per number of open edges, which does not
//! depend on `p`, and then weighted once with `p^k (1 - p)^(m - k)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::check_probability;
use crate::pivotal::{is_pivotal, UpSetSpec};

pub const CLUSTER_EDGE_LIMIT: usize = 24;
pub const PIVOTAL_EDGE_LIMIT: usize = 20;
const CHUNK_BITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactStats {
    pub p: f64,
    pub mean_l1: f64,
    pub mean_l2: f64,
    pub thresholds: Vec<usize>,
    /// `P(L1 >= s)` per threshold.
    pub p_l1_at_least: Vec<f64>,
    /// `P(at least two components of size >= s)` per threshold.
    pub p_two_large: Vec<f64>,
    pub p_connected: f64,
}

/// Integer tallies of cluster statistics, indexed by open-edge count.
#[derive(Debug, Clone)]
pub struct ClusterCensus {
    m: usize,
    thresholds: Vec<usize>,
    l1_sum: Vec<u64>,
    l2_sum: Vec<u64>,
    l1_at_least: Vec<Vec<u64>>,
    two_large: Vec<Vec<u64>>,
    connected: Vec<u64>,
}

fn guard(name: &'static str, limit: usize, g: &Graph) -> Result<()> {
    if g.m() > limit {
        Err(Error::SizeGuard {
            guard: name,
            limit: limit as u64,
            actual: g.m() as u64,
        })
    } else {
        Ok(())
    }
}

/// `p^k (1 - p)^(m - k)` for every `k`, exact at `p = 0` and `p = 1`.
pub fn popcount_weights(m: usize, p: f64) -> Vec<f64> {
    let mut w = vec![0.0; m + 1];
    if p <= 0.0 {
        w[0] = 1.0;
    } else if p >= 1.0 {
        w[m] = 1.0;
    } else {
        // m <= 24, so plain powers neither underflow nor lose accuracy
        let q = 1.0 - p;
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = p.powi(k as i32) * q.powi((m - k) as i32);
        }
    }
    w
}

/// Runs `visit(mask, tally)` over all masks in fixed-size chunks and adds the
/// per-chunk tallies; integer addition keeps the merge order irrelevant.
fn tally_masks<T, F>(m: usize, zero: impl Fn() -> T + Sync + Send, visit: F, add: impl Fn(&mut T, T) + Sync + Send) -> T
where
    T: Send,
    F: Fn(u64, &mut T) + Sync + Send,
{
    let total = 1u64 << m;
    let chunk = 1u64 << CHUNK_BITS.min(m as u32);
    (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut t = zero();
            for mask in c * chunk..(c + 1) * chunk {
                visit(mask, &mut t);
            }
            t
        })
        .reduce(&zero, |mut a, b| {
            add(&mut a, b);
            a
        })
}

fn mask_to_open(mask: u64, m: usize) -> Vec<bool> {
    (0..m).map(|e| mask >> e & 1 == 1).collect()
}

impl ClusterCensus {
    pub fn new(g: &Graph, thresholds: &[usize]) -> Result<Self> {
        guard("oracle cluster-stats edge count", CLUSTER_EDGE_LIMIT, g)?;
        let (m, n, nt) = (g.m(), g.n(), thresholds.len());
        let zero = || ClusterCensus {
            m,
            thresholds: thresholds.to_vec(),
            l1_sum: vec![0; m + 1],
            l2_sum: vec![0; m + 1],
            l1_at_least: vec![vec![0; m + 1]; nt],
            two_large: vec![vec![0; m + 1]; nt],
            connected: vec![0; m + 1],
        };
        let edges = g.edges();
        Ok(tally_masks(
            m,
            zero,
            |mask, t| {
                let mut dsu = DisjointSets::new(n);
                let mut rest = mask;
                while rest != 0 {
                    let e = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    dsu.union(edges[e].0, edges[e].1);
                }
                let sizes = dsu.sizes_desc();
                let k = mask.count_ones() as usize;
                let l1 = sizes.first().copied().unwrap_or(0);
                let l2 = sizes.get(1).copied().unwrap_or(0);
                t.l1_sum[k] += l1 as u64;
                t.l2_sum[k] += l2 as u64;
                t.connected[k] += u64::from(sizes.len() <= 1);
                for (j, &s) in t.thresholds.iter().enumerate() {
                    t.l1_at_least[j][k] += u64::from(l1 >= s);
                    t.two_large[j][k] += u64::from(l2 >= s);
                }
            },
            |a, b| {
                let add = |x: &mut Vec<u64>, y: &Vec<u64>| x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                add(&mut a.l1_sum, &b.l1_sum);
                add(&mut a.l2_sum, &b.l2_sum);
                add(&mut a.connected, &b.connected);
                for j in 0..nt {
                    add(&mut a.l1_at_least[j], &b.l1_at_least[j]);
                    add(&mut a.two_large[j], &b.two_large[j]);
                }
            },
        ))
    }

    pub fn at(&self, p: f64) -> Result<ExactStats> {
        check_probability("p", p)?;
        let w = popcount_weights(self.m, p);
        let dot = |counts: &[u64]| counts.iter().zip(&w).map(|(&c, &wk)| c as f64 * wk).sum::<f64>();
        Ok(ExactStats {
            p,
            mean_l1: dot(&self.l1_sum),
            mean_l2: dot(&self.l2_sum),
            thresholds: self.thresholds.clone(),
            p_l1_at_least: self.l1_at_least.iter().map(|c| dot(c)).collect(),
            p_two_large: self.two_large.iter().map(|c| dot(c)).collect(),
            p_connected: dot(&self.connected),
        })
    }
}

pub fn exact_cluster_stats(g: &Graph, p: f64, thresholds: &[usize]) -> Result<ExactStats> {
    check_probability("p", p)?;
    ClusterCensus::new(g, thresholds)?.at(p)
}

/// Number of member configurations per open-edge count.
fn member_counts(g: &Graph, u: &UpSetSpec) -> Vec<u64> {
    let m = g.m();
    tally_masks(
        m,
        || vec![0u64; m + 1],
        |mask, t| {
            if u.contains(g, &mask_to_open(mask, m)) {
                t[mask.count_ones() as usize] += 1;
            }
        },
        |a, b| a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
    )
}

/// Total weight of the configurations in `u`.
pub fn exact_event_prob(g: &Graph, p: f64, u: &UpSetSpec) -> Result<f64> {
    check_probability("p", p)?;
    u.validate()?;
    guard("oracle event edge count", CLUSTER_EDGE_LIMIT, g)?;
    let w = popcount_weights(g.m(), p);
    Ok(member_counts(g, u).iter().zip(&w).map(|(&c, &wk)| c as f64 * wk).sum())
}

fn membership_table(g: &Graph, u: &UpSetSpec) -> Vec<bool> {
    let m = g.m();
    (0..1u64 << m)
        .into_par_iter()
        .map(|mask| u.contains(g, &mask_to_open(mask, m)))
        .collect()
}

/// `(1/m) sum_e sum_A P(A) [e is pivotal at A]` with `A` product-Bernoulli.
pub fn exact_pivotal_prob(g: &Graph, p: f64, u: &UpSetSpec) -> Result<f64> {
    check_probability("p", p)?;
    u.validate()?;
    guard("oracle pivotal edge count", PIVOTAL_EDGE_LIMIT, g)?;
    let m = g.m();
    if m == 0 {
        return Err(Error::precondition("pivotal probability needs at least one edge"));
    }
    let inside = membership_table(g, u);
    let counts = tally_masks(
        m,
        || vec![0u64; m + 1],
        |mask, t| {
            let k = mask.count_ones() as usize;
            for e in 0..m {
                let b = 1u64 << e;
                if inside[(mask | b) as usize] && !inside[(mask & !b) as usize] {
                    t[k] += 1;
                }
            }
        },
        |a, b| a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
    );
    let w = popcount_weights(m, p);
    let total: f64 = counts.iter().zip(&w).map(|(&c, &wk)| c as f64 * wk).sum();
    Ok(total / m as f64)
}

/// Whether every single-edge addition keeps a member configuration inside
/// `u`.
pub fn verify_monotone(g: &Graph, u: &UpSetSpec) -> Result<bool> {
    u.validate()?;
    guard("oracle monotonicity edge count", PIVOTAL_EDGE_LIMIT, g)?;
    let m = g.m();
    let inside = membership_table(g, u);
    Ok((0..1u64 << m).into_par_iter().all(|mask| {
        !inside[mask as usize] || (0..m).all(|e| inside[(mask | 1 << e) as usize])
    }))
}

/// Pivotality of every edge at one configuration, for cross-checks against
/// [`is_pivotal`].
pub fn pivotal_edges(g: &Graph, open: &[bool], u: &UpSetSpec) -> Vec<usize> {
    (0..g.m()).filter(|&e| is_pivotal(g, open, e, u)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_metrics, generate, FamilySpec};

    fn gen(s: &str) -> Graph {
        generate(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-13
    }

    #[test]
    fn cluster_examples() {
        let k3 = exact_cluster_stats(&gen("complete:3"), 0.5, &[2]).unwrap();
        assert!(close(k3.p_connected, 0.5));
        let p3 = exact_cluster_stats(&gen("path:3"), 0.5, &[2, 3]).unwrap();
        assert!(close(p3.mean_l1, 2.0));
        assert!(close(p3.p_l1_at_least[1], 0.25));
        for s in ["cycle:6", "box:2,3", "hypercube:3"] {
            let st = exact_cluster_stats(&gen(s), 0.0, &[2]).unwrap();
            assert_eq!((st.mean_l1, st.p_two_large[0]), (1.0, 0.0));
        }
    }

    #[test]
    fn p_one_matches_component_structure() {
        let g = Graph::new(7, vec![(0, 1), (1, 2), (3, 4), (5, 6), (4, 5)]).unwrap();
        let st = exact_cluster_stats(&g, 1.0, &[3, 4, 5]).unwrap();
        assert_eq!(st.mean_l1, 4.0);
        assert_eq!(st.mean_l2, 3.0);
        assert_eq!(st.p_l1_at_least, vec![1.0, 1.0, 0.0]);
        assert_eq!(st.p_two_large, vec![1.0, 0.0, 0.0]);
        assert_eq!(st.p_connected, 0.0);
        assert!(!graph_metrics(&g).connected);
    }

    #[test]
    fn lattice_weights_sum_to_one() {
        for p in [0.0, 0.13, 0.5, 0.99, 1.0] {
            let w = popcount_weights(12, p);
            let total: f64 = (0..=12u64)
                .map(|k| statrs::function::factorial::binomial(12, k) * w[k as usize])
                .sum();
            assert!((total - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn event_examples() {
        let k3 = gen("complete:3");
        assert!(close(exact_event_prob(&k3, 0.3, &UpSetSpec::EdgeCountAtLeast(0)).unwrap(), 1.0));
        assert_eq!(exact_event_prob(&k3, 0.3, &UpSetSpec::EdgeCountAtLeast(4)).unwrap(), 0.0);
        let p = exact_event_prob(&k3, 0.5, &UpSetSpec::LargeComponentExists(2)).unwrap();
        assert!(close(p, 7.0 / 8.0));
    }

    #[test]
    fn pivotal_examples() {
        let edge = gen("path:2");
        for p in [0.0, 0.4, 1.0] {
            assert!(close(exact_pivotal_prob(&edge, p, &UpSetSpec::EdgeCountAtLeast(1)).unwrap(), 1.0));
        }
        let p3 = gen("path:3");
        for p in [0.1, 0.5, 0.8] {
            let v = exact_pivotal_prob(&p3, p, &UpSetSpec::LargeComponentExists(3)).unwrap();
            assert!(close(v, p), "{v} vs {p}");
        }
    }

    #[test]
    fn monotonicity_examples() {
        let c6 = gen("cycle:6");
        assert!(verify_monotone(&c6, &UpSetSpec::LargeComponentExists(4)).unwrap());
        assert!(verify_monotone(&c6, &UpSetSpec::ZAtLeast { c: 0.3, i: 1 }).unwrap());
        let exactly = UpSetSpec::custom("exactly2", false, |_, o| o.iter().filter(|&&b| b).count() == 2);
        assert!(!verify_monotone(&c6, &exactly).unwrap());
    }

    #[test]
    fn guards() {
        let k8 = gen("complete:8");
        assert!(exact_cluster_stats(&k8, 0.5, &[2]).unwrap_err().is_size_guard());
        assert!(exact_pivotal_prob(&gen("complete:7"), 0.5, &UpSetSpec::EdgeCountAtLeast(1))
            .unwrap_err()
            .is_size_guard());
        assert!(exact_cluster_stats(&gen("path:3"), 1.2, &[2]).is_err());
    }

    #[test]
    fn event_prob_is_nondecreasing_in_p() {
        let g = gen("box:2,3");
        let u = UpSetSpec::ZAtLeast { c: 0.3, i: 1 };
        let mut prev = 0.0;
        for i in 0..=20 {
            let v = exact_event_prob(&g, i as f64 / 20.0, &u).unwrap();
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn pivotal_edges_at_a_configuration() {
        let p3 = gen("path:3");
        let u = UpSetSpec::LargeComponentExists(3);
        assert_eq!(pivotal_edges(&p3, &[false, true], &u), vec![0]);
        assert_eq!(pivotal_edges(&p3, &[true, true], &u), vec![0, 1]);
        assert!(pivotal_edges(&p3, &[false, false], &u).is_empty());
    }
}
