//! Small numeric helpers shared across modules.

use serde::Serialize;

use crate::error::{Error, Result};

const SNAP: f64 = 1e-9;

/// `ceil(x)`, except that values within `1e-9` (relative) of an integer
/// snap to it, so `0.3 * 10` gives 3 rather than 4.
pub fn tolerant_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= SNAP * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// `floor(x)` with the same integer snapping as [`tolerant_ceil`].
pub fn tolerant_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= SNAP * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

pub fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::precondition(format!("{name} = {p} is outside [0, 1]")))
    }
}

/// Binomial(`k`, `p`) probability mass function as a vector over `0..=k`.
///
/// Log-weights are built by the ratio recurrence outward from the mode and
/// normalized once, so no factorial is ever formed.
pub fn binomial_pmf(k: usize, p: f64) -> Vec<f64> {
    let mut w = vec![0.0; k + 1];
    if p <= 0.0 {
        w[0] = 1.0;
        return w;
    }
    if p >= 1.0 {
        w[k] = 1.0;
        return w;
    }
    let mode = (((k + 1) as f64 * p).floor() as usize).min(k);
    let log_odds = p.ln() - (-p).ln_1p();
    let mut log_w = vec![0.0; k + 1];
    for j in mode..k {
        log_w[j + 1] = log_w[j] + ((k - j) as f64 / (j + 1) as f64).ln() + log_odds;
    }
    for j in (1..=mode).rev() {
        log_w[j - 1] = log_w[j] + (j as f64 / (k - j + 1) as f64).ln() - log_odds;
    }
    let mut total = 0.0;
    for (wj, lj) in w.iter_mut().zip(&log_w) {
        *wj = lj.exp();
        total += *wj;
    }
    for wj in &mut w {
        *wj /= total;
    }
    w
}

/// `ln Binom(k, p){m}` from log-gamma values.
pub fn ln_binomial_mass(k: u64, m: u64, p: f64) -> f64 {
    let ln_choose = statrs::function::factorial::ln_binomial(k, m);
    let a = if m == 0 { 0.0 } else { m as f64 * p.ln() };
    let b = if m == k { 0.0 } else { (k - m) as f64 * (-p).ln_1p() };
    ln_choose + a + b
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// From running sums over `count` observations (sample variance).
    pub fn from_sums(sum: f64, sum_sq: f64, count: usize) -> Self {
        let n = count as f64;
        let mean = sum / n;
        let se = if count > 1 {
            let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Estimate { mean, se }
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        let (s, s2) = xs.iter().fold((0.0, 0.0), |(s, s2), x| (s + x, s2 + x * x));
        Self::from_sums(s, s2, xs.len())
    }

    /// Whether `value` lies within `k` standard errors of the mean. A zero
    /// standard error demands exact agreement up to rounding.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se + 1e-12
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping() {
        assert_eq!(tolerant_ceil(0.3 * 10.0), 3.0);
        assert_eq!(tolerant_ceil(3.2), 4.0);
        assert_eq!(tolerant_floor(1.0 / 0.2), 5.0);
        assert_eq!(tolerant_floor(1.0 / 0.3), 3.0);
    }

    #[test]
    fn pmf_matches_direct_formula() {
        let w = binomial_pmf(4, 0.3);
        let direct = [0.2401, 0.4116, 0.2646, 0.0756, 0.0081];
        for (a, b) in w.iter().zip(direct) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert_eq!(binomial_pmf(3, 0.0), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(binomial_pmf(3, 1.0), vec![0.0, 0.0, 0.0, 1.0]);
        let big = binomial_pmf(15000, 0.37);
        assert!((big.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let m = 5550;
        let rel = (big[m] - ln_binomial_mass(15000, m as u64, 0.37).exp()).abs() / big[m];
        assert!(rel < 1e-9, "{rel}");
    }

    #[test]
    fn estimate_sums() {
        let e = Estimate::from_samples(&[1.0, 0.0, 1.0, 0.0]);
        assert_eq!(e.mean, 0.5);
        assert!((e.se - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(e.agrees_with(0.6, 1.0));
    }
}
