use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{num, point, proportion, ExperimentReport};
use crate::error::{Error, Result};
use crate::graph::{generate, FamilySpec};
use crate::isoperimetry::{edge_cheeger_exact, DEFAULT_WORK_LIMIT};
use crate::numeric::{check_probability, Estimate};
use crate::percolation::edge_uniforms;
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerRunConfig {
    pub family: FamilySpec,
    pub p_list: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

/// For each `p`, the frequency with which the exact edge Cheeger constant
/// of `G(p)` is at least `1/log2(n)`, plus its mean.
///
/// Every trial thresholds one uniform per edge at all values of `p`, so the
/// open sets are nested. Adding edges never lowers a cut, so the constant
/// must be nondecreasing along the sorted `p` list within a trial; the
/// report counts, per consecutive pair, trials where that fails and trials
/// where the threshold is met at the smaller `p` but missed at the larger
/// one. Both counts are expected to be zero.
pub fn percolated_expander_cheeger(cfg: &CheegerRunConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    if cfg.p_list.is_empty() || cfg.trials == 0 {
        return Err(Error::precondition("needs at least one p and one trial"));
    }
    for &p in &cfg.p_list {
        check_probability("p", p)?;
    }
    let g = generate(&cfg.family)?;
    let n = g.n();
    if n < 3 {
        return Err(Error::precondition(format!("needs n >= 3 so that log2(n) > 1, got {n}")));
    }
    let level = 1.0 / (n as f64).log2();
    let mut ps = cfg.p_list.clone();
    ps.sort_by(f64::total_cmp);
    ps.dedup();

    // per trial, the constant at each sorted p
    let values: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let u = edge_uniforms(&g, derive_seed(cfg.seed, t));
            ps.iter()
                .map(|&p| {
                    let open: Vec<bool> = u.iter().map(|&x| x < p).collect();
                    edge_cheeger_exact(&g.spanning_subgraph(&open), DEFAULT_WORK_LIMIT).map(|c| c.edge_ratio)
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new("percolated_expander_cheeger", cfg, cfg.seed);
    report.put("n", n);
    report.put("level", num(level));
    let name = cfg.family.to_string();
    for (j, &p) in ps.iter().enumerate() {
        let col: Vec<f64> = values.iter().map(|v| v[j]).collect();
        let hits = col.iter().filter(|&&c| c >= level).count() as u64;
        let freq = proportion(hits, cfg.trials);
        let mean = Estimate::from_samples(&col);
        report.points.push(point(
            &name,
            &[
                ("p", p),
                ("frequency", freq.mean),
                ("frequency_se", freq.se),
                ("mean_cheeger", mean.mean),
                ("mean_cheeger_se", mean.se),
            ],
        ));
    }
    let (mut decreases, mut lost) = (0u64, 0u64);
    for v in &values {
        for w in v.windows(2) {
            decreases += u64::from(w[1] < w[0]);
            lost += u64::from(w[0] >= level && w[1] < level);
        }
    }
    report.put("coupled_pairs", (ps.len() - 1) as u64 * cfg.trials);
    report.put("coupled_decreases", decreases);
    report.put("coupled_threshold_losses", lost);
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_graph_is_deterministic() {
        // K_8 has constant 4, far above 1/3
        let cfg = CheegerRunConfig {
            family: "complete:8".parse().unwrap(),
            p_list: vec![1.0, 0.0],
            trials: 5,
            seed: 1,
        };
        let r = percolated_expander_cheeger(&cfg).unwrap();
        let pts: Vec<_> = r.series("complete:8").collect();
        assert_eq!(pts[0].values["p"], 0.0);
        assert_eq!(pts[0].values["frequency"], 0.0);
        assert_eq!(pts[1].values["frequency"], 1.0);
        assert_eq!(pts[1].values["mean_cheeger"], 4.0);
        assert_eq!(r.summary_f64("coupled_decreases"), Some(0.0));
    }

    #[test]
    fn coupled_runs_are_monotone() {
        let cfg = CheegerRunConfig {
            family: "rr:16,3,seed=4".parse().unwrap(),
            p_list: vec![0.7, 0.8, 0.9, 0.95, 1.0],
            trials: 400,
            seed: 9,
        };
        let r = percolated_expander_cheeger(&cfg).unwrap();
        assert_eq!(r.summary_f64("coupled_decreases"), Some(0.0));
        assert_eq!(r.summary_f64("coupled_threshold_losses"), Some(0.0));
        let f: Vec<f64> = r.points.iter().map(|p| p.values["frequency"]).collect();
        assert!(f.windows(2).all(|w| w[0] <= w[1]), "{f:?}");
        assert_eq!(r.without_timing(), percolated_expander_cheeger(&cfg).unwrap().without_timing());
    }

    #[test]
    fn size_guard_propagates() {
        let cfg = CheegerRunConfig {
            family: "cycle:80".parse().unwrap(),
            p_list: vec![1.0],
            trials: 1,
            seed: 0,
        };
        assert!(percolated_expander_cheeger(&cfg).unwrap_err().is_size_guard());
    }
}
