use serde::Serialize;

use super::sample::{edge_uniforms, PercSample};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::check_probability;
use crate::rng;

/// Retention probabilities of independent phases whose union is one
/// percolation configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SprinklePlan {
    phases: Vec<f64>,
}

impl SprinklePlan {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        for &p in &phases {
            check_probability("phase probability", p)?;
        }
        Ok(SprinklePlan { phases })
    }

    /// Two-phase plan `(p1, p2)` whose union retains edges with probability `p`.
    pub fn two_phase(p: f64, p1: f64) -> Result<Self> {
        Self::new(vec![p1, sprinkle_split(p, p1)?])
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `1 - prod(1 - p_i)`.
    pub fn union_probability(&self) -> f64 {
        1.0 - self.phases.iter().map(|p| 1.0 - p).product::<f64>()
    }
}

/// The second-phase probability `p2` with `(1 - p1)(1 - p2) = 1 - p`.
pub fn sprinkle_split(p: f64, p1: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("p1", p1)?;
    if p1 > p {
        return Err(Error::precondition(format!(
            "first phase p1 = {p1} exceeds the target p = {p}"
        )));
    }
    if p1 == 1.0 {
        // p = 1 as well; any second phase satisfies the identity
        return Ok(0.0);
    }
    Ok((p - p1) / (1.0 - p1))
}

#[derive(Debug, Clone)]
pub struct SprinkleOutcome<'g> {
    /// Open-edge mask of each phase, in plan order.
    pub phase_masks: Vec<Vec<bool>>,
    /// The union configuration, tagged with the plan's union probability.
    pub union: PercSample<'g>,
}

/// Samples each phase independently (phase `i` uses stream `i` of a seed
/// derived from `seed`, phase 0 uses `seed` itself) and takes the union.
///
/// Phase 0 draws exactly what [`super::sample`] would draw for `seed`.
pub fn sprinkle_union<'g>(g: &'g Graph, plan: &SprinklePlan, seed: u64) -> SprinkleOutcome<'g> {
    let phase_masks: Vec<Vec<bool>> = plan
        .phases
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let phase_seed = if i == 0 { seed } else { rng::derive_seed(seed, i as u64) };
            edge_uniforms(g, phase_seed).into_iter().map(|u| u < p).collect()
        })
        .collect();
    let mut open = vec![false; g.m()];
    for mask in &phase_masks {
        for (o, &b) in open.iter_mut().zip(mask) {
            *o |= b;
        }
    }
    SprinkleOutcome {
        union: PercSample::from_open(g, open, plan.union_probability()),
        phase_masks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};
    use crate::numeric::Estimate;
    use crate::percolation::sample;

    #[test]
    fn split_examples() {
        assert_eq!(sprinkle_split(0.5, 0.5).unwrap(), 0.0);
        let p2 = sprinkle_split(0.5, 0.3).unwrap();
        assert!((p2 - 2.0 / 7.0).abs() < 1e-15);
        assert!(((1.0 - 0.3) * (1.0 - p2) - 0.5).abs() < 1e-15);
        let p2 = sprinkle_split(0.4, 11.0 / 30.0).unwrap();
        assert!((p2 - 1.0 / 19.0).abs() < 1e-15);
        assert!(sprinkle_split(0.3, 0.5).is_err());
        assert!(sprinkle_split(0.5, 1.0).is_err());
        assert_eq!(sprinkle_split(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(sprinkle_split(1.0, 0.2).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_plans() {
        let g = generate(&FamilySpec::Hypercube(4)).unwrap();
        for seed in 0..5 {
            let out = sprinkle_union(&g, &SprinklePlan::new(vec![0.4, 0.0]).unwrap(), seed);
            assert_eq!(out.union.open(), sample(&g, 0.4, seed).unwrap().open());
            let empty = sprinkle_union(&g, &SprinklePlan::new(vec![0.0, 0.0]).unwrap(), seed);
            assert_eq!(empty.union.open_count(), 0);
        }
        assert!(SprinklePlan::new(vec![0.2, 1.2]).is_err());
    }

    #[test]
    fn union_marginal_on_triangle() {
        let g = generate(&FamilySpec::Complete(3)).unwrap();
        let plan = SprinklePlan::two_phase(0.5, 0.3).unwrap();
        assert!((plan.union_probability() - 0.5).abs() < 1e-15);
        let trials = 100_000;
        let opens: Vec<f64> = (0..trials)
            .flat_map(|t| {
                let out = sprinkle_union(&g, &plan, t);
                out.union.open().iter().map(|&o| f64::from(u8::from(o))).collect::<Vec<_>>()
            })
            .collect();
        for e in 0..3 {
            let per_edge: Vec<f64> = opens.iter().skip(e).step_by(3).copied().collect();
            let est = Estimate::from_samples(&per_edge);
            assert!(est.agrees_with(0.5, 3.0), "edge {e}: {est:?}");
        }
    }
}
