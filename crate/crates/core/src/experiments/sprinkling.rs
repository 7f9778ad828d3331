use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{estimate_in_order, num, point, ExperimentReport};
use crate::bounds::{first_phase_component_size, gw_survival, gw_vertex_survival};
use crate::error::{Error, Result};
use crate::graph::{generate, girth, FamilySpec};
use crate::numeric::tolerant_ceil;
use crate::percolation::{sprinkle_union, PercSample, SprinklePlan};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FirstPhaseSize {
    /// `(1 + ε/3)^(g/2)` from the girth `g`.
    Girth,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SprinklingConfig {
    pub family: FamilySpec,
    pub eps: f64,
    pub first_phase: FirstPhaseSize,
    pub trials: u64,
    pub seed: u64,
}

/// Two-phase run on a `d`-regular graph: phase one at
/// `p1 = (1 + ε/2)/(d - 1)`, phase two at the complementary probability so
/// the union is `G(p)` with `p = (1 + ε)/(d - 1)`. Reports the fraction of
/// vertices that phase one puts in components of size at least `m`, the
/// union's largest-component fraction against branching-process survival,
/// and the union's per-edge open frequency.
///
/// Periodic boxes use `d` instead of `d - 1` in both probabilities and are
/// labeled exploratory.
pub fn sprinkling_giant_demo(cfg: &SprinklingConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let d = cfg.family.regular_degree().ok_or_else(|| {
        Error::precondition(format!("family {} is not regular", cfg.family))
    })?;
    if d < 3 || cfg.eps < 0.0 || cfg.trials == 0 {
        return Err(Error::precondition(format!(
            "needs degree >= 3, eps >= 0 and trials > 0 (d = {d}, eps = {}, trials = {})",
            cfg.eps, cfg.trials
        )));
    }
    let exploratory = matches!(cfg.family, FamilySpec::Box { .. });
    let base = if exploratory { d } else { d - 1 } as f64;
    let (p, p1) = ((1.0 + cfg.eps) / base, (1.0 + cfg.eps / 2.0) / base);
    if p > 1.0 {
        return Err(Error::precondition(format!("p = {p} exceeds 1; lower eps")));
    }
    let g = generate(&cfg.family)?;
    let plan = SprinklePlan::two_phase(p, p1)?;
    let girth_len = girth(&g);
    let m_real = match cfg.first_phase {
        FirstPhaseSize::Girth => first_phase_component_size(cfg.eps, girth_len.unwrap_or(g.n()) as u32),
        FirstPhaseSize::Fixed(m) => m as f64,
    };
    let m_size = (tolerant_ceil(m_real) as usize).max(1);
    let (n, edges) = (g.n() as f64, g.m().max(1) as f64);

    let per_trial: Vec<(f64, f64, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let out = sprinkle_union(&g, &plan, derive_seed(cfg.seed, t));
            let phase1 = PercSample::from_open(&g, out.phase_masks[0].clone(), p1);
            let in_large: usize = phase1.sizes().iter().take_while(|&&s| s >= m_size).sum();
            let giant = out.union.sizes().first().copied().unwrap_or(0);
            (in_large as f64 / n, giant as f64 / n, out.union.open_count() as f64 / edges)
        })
        .collect();
    let column = |f: fn(&(f64, f64, f64)) -> f64| per_trial.iter().map(f).collect::<Vec<_>>();
    let phase1 = estimate_in_order(&column(|x| x.0));
    let giant = estimate_in_order(&column(|x| x.1));
    let marginal = estimate_in_order(&column(|x| x.2));

    let mut report = ExperimentReport::new("sprinkling_giant_demo", cfg, cfg.seed);
    report.put("exploratory", exploratory);
    report.put("degree", d);
    report.put("girth", girth_len.map_or(serde_json::Value::Null, |x| x.into()));
    report.put("p", num(p));
    report.put("p1", num(p1));
    report.put("p2", num(plan.phases()[1]));
    report.put("first_phase_size", num(m_real));
    report.put_estimate("phase1_large_frac", phase1);
    report.put_estimate("union_giant_frac", giant);
    report.put_estimate("edge_marginal", marginal);
    let (surv, vsurv) = (gw_survival(d as u32, p)?, gw_vertex_survival(d as u32, p)?);
    report.put("gw_survival", num(surv));
    report.put("gw_vertex_survival", num(vsurv));
    for (t, x) in per_trial.iter().enumerate() {
        report.points.push(point(
            "trials",
            &[("trial", t as f64), ("phase1_large_frac", x.0), ("union_giant_frac", x.1), ("edge_marginal", x.2)],
        ));
    }
    Ok(report.finish(started))
}
