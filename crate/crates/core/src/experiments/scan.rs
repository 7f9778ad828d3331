use std::time::Instant;

use serde::Serialize;

use super::{num, point, ExperimentReport};
use crate::error::{Error, Result};
use crate::graph::{generate, FamilySpec};
use crate::oracle::ClusterCensus;
use crate::percolation::{canonical_curve, newman_ziff_sweep_with, uniform_grid, LargeThreshold, SweepConfig};
use crate::rng::derive_seed;

/// Below this many edges the scan adds the exact curve from full
/// enumeration next to the Monte Carlo one.
const EXACT_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GridMode {
    /// `points` evenly spaced values of `p` in `[0, 1]`.
    Uniform { points: usize },
    /// `points` evenly spaced values of `p * n` in `[0, max_units]`.
    PerVertex { max_units: f64, points: usize },
}

impl GridMode {
    fn grid(&self, n: usize) -> Result<Vec<f64>> {
        match *self {
            GridMode::Uniform { points } if points >= 2 => Ok(uniform_grid(points)),
            GridMode::PerVertex { max_units, points } if points >= 2 && max_units > 0.0 => {
                let step = max_units / (points - 1) as f64;
                Ok((0..points).map(|i| (step * i as f64 / n as f64).min(1.0)).collect())
            }
            _ => Err(Error::precondition(format!("grid {self:?} needs at least two points"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub families: Vec<FamilySpec>,
    /// Level of `E[L1]/n` whose crossing estimates the threshold.
    pub a: f64,
    /// Size that makes a component large for the two-giants probability.
    pub large: LargeThreshold,
    /// Sweeps per family; each sweep serves every grid point.
    pub trials: usize,
    pub seed: u64,
    pub grid: GridMode,
}

impl ScanConfig {
    /// Defaults: `a = 0.05`, large means `>= 0.02 n`, 101-point grid.
    pub fn new(families: Vec<FamilySpec>, trials: usize, seed: u64) -> Self {
        ScanConfig {
            families,
            a: 0.05,
            large: LargeThreshold::Fraction(0.02),
            trials,
            seed,
            grid: GridMode::Uniform { points: 101 },
        }
    }
}

/// Per family: one sweep ensemble, smoothed `E[L1]/n` on the grid, and the
/// first crossing of `a` by linear interpolation. The report's summary also
/// carries the location of the `E[L2]` peak and the two-giants supremum
/// from the same ensemble.
pub fn threshold_scan(cfg: &ScanConfig) -> Result<ExperimentReport> {
    scan("threshold_scan", cfg)
}

/// Per family: the smoothed probability of two or more large components
/// over the grid and its supremum, from the same ensemble as the threshold
/// curve.
pub fn uniqueness_scan(cfg: &ScanConfig) -> Result<ExperimentReport> {
    scan("uniqueness_scan", cfg)
}

fn scan(id: &str, cfg: &ScanConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    if !(cfg.a > 0.0 && cfg.a < 1.0) {
        return Err(Error::precondition(format!("level a = {} is outside (0, 1)", cfg.a)));
    }
    cfg.large.validate()?;
    let mut report = ExperimentReport::new(id, cfg, cfg.seed);
    for (i, fam) in cfg.families.iter().enumerate() {
        let g = generate(fam)?;
        let n = g.n();
        let grid = cfg.grid.grid(n)?;
        let large = cfg.large.min_size(n);
        let sweep_cfg = SweepConfig::new(cfg.trials, vec![large], derive_seed(cfg.seed, i as u64)).with_grid(grid.clone());
        let rec = newman_ziff_sweep_with(&g, &sweep_cfg)?;
        let curve = canonical_curve(&rec);
        let exact = if g.m() <= EXACT_EDGE_LIMIT {
            Some(ClusterCensus::new(&g, &[large])?)
        } else {
            None
        };

        let name = fam.to_string();
        let mut sup_exact = f64::NEG_INFINITY;
        for pt in &curve {
            let mut cols = vec![
                ("p", pt.p),
                ("p_times_n", pt.p * n as f64),
                ("l1_frac", pt.l1_frac.mean),
                ("l1_frac_se", pt.l1_frac.se),
                ("l2_frac", pt.l2_frac),
                ("delta", pt.p_two_large.mean),
                ("delta_se", pt.p_two_large.se),
            ];
            if let Some(census) = &exact {
                let st = census.at(pt.p)?;
                cols.push(("l1_frac_exact", st.mean_l1 / n as f64));
                cols.push(("delta_exact", st.p_two_large[0]));
                sup_exact = sup_exact.max(st.p_two_large[0]);
            }
            report.points.push(point(&name, &cols));
        }

        let ps: Vec<f64> = curve.iter().map(|c| c.p).collect();
        let l1: Vec<f64> = curve.iter().map(|c| c.l1_frac.mean).collect();
        let crossing = first_crossing(&ps, &l1, cfg.a);
        let peak = curve
            .iter()
            .fold(None::<(f64, f64)>, |best, c| match best {
                Some((_, v)) if v >= c.l2_frac => best,
                _ => Some((c.p, c.l2_frac)),
            })
            .map(|(p, _)| p);
        let sup = curve
            .iter()
            .fold(None::<&crate::percolation::CanonicalPoint>, |best, c| match best {
                Some(b) if b.p_two_large.mean >= c.p_two_large.mean => best,
                _ => Some(c),
            })
            .expect("grid has points");

        let key = |k: &str| format!("{name}/{k}");
        report.put(key("n"), n);
        report.put(key("large_size"), large);
        report.put(key("resolution"), num(ps[1] - ps[0]));
        report.put(key("crossing_p"), num(crossing.unwrap_or(f64::NAN)));
        report.put(key("crossing_p_times_n"), num(crossing.map_or(f64::NAN, |c| c * n as f64)));
        report.put(key("l2_peak_p"), num(peak.unwrap_or(f64::NAN)));
        let (lo, hi) = match (crossing, peak) {
            (Some(c), Some(p)) => (c.min(p), c.max(p)),
            _ => (f64::NAN, f64::NAN),
        };
        report.put(key("bracket_lo"), num(lo));
        report.put(key("bracket_hi"), num(hi));
        report.put(key("bracket_width"), num(hi - lo));
        report.put(key("sup_delta"), num(sup.p_two_large.mean));
        report.put(key("sup_delta_se"), num(sup.p_two_large.se));
        report.put(key("sup_delta_p"), num(sup.p));
        if exact.is_some() {
            report.put(key("sup_delta_exact"), num(sup_exact));
        }
    }
    Ok(report.finish(started))
}

/// First `p` at which `ys` reaches `level`, interpolating linearly between
/// the bracketing grid points.
fn first_crossing(ps: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    let i = ys.iter().position(|&y| y >= level)?;
    if i == 0 {
        return Some(ps[0]);
    }
    let (x0, x1, y0, y1) = (ps[i - 1], ps[i], ys[i - 1], ys[i]);
    Some(x0 + (level - y0) * (x1 - x0) / (y1 - y0))
}
