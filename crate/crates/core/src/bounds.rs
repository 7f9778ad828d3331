//! Closed-form tail bounds and constants for expander percolation.
//!
//! Products and powers are formed in log space. Each evaluator returns the
//! natural log alongside the linear value, which is mapped to 0 and flagged
//! when it underflows `f64`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::tolerant_ceil;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub ln_value: f64,
    pub underflowed: bool,
}

impl BoundValue {
    fn from_ln(ln_value: f64) -> Self {
        let value = ln_value.exp();
        BoundValue {
            value,
            ln_value,
            underflowed: value < f64::MIN_POSITIVE,
        }
    }
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::precondition(msg()))
    }
}

fn check_common(n: f64, delta: f64, b: f64) -> Result<()> {
    require(n >= 1.0, || format!("vertex count n = {n} must be at least 1"))?;
    require(delta >= 1.0, || format!("max degree {delta} must be at least 1"))?;
    require(b > 0.0, || format!("expansion constant b = {b} must be positive"))
}

/// `(Δ e) A^b`, required to be below 1.
fn closeness_ratio(delta: f64, b: f64, a_margin: f64) -> Result<f64> {
    require(a_margin > 0.0 && a_margin < 1.0, || format!("margin A = {a_margin} is outside (0, 1)"))?;
    let q = delta * std::f64::consts::E * a_margin.powf(b);
    require(q < 1.0, || format!("(Δe)A^b = {q} is not below 1; the bound is vacuous"))?;
    Ok(q)
}

/// `(1/c) q^(c n) / (1 - q)` with `q = (Δ e) A^b`: the probability that
/// near-complete percolation on an edge `b`-expander leaves a connected
/// chunk of at least `c n` vertices cut off.
pub fn linear_cut_tail(n: f64, delta: f64, b: f64, a_margin: f64, c: f64) -> Result<BoundValue> {
    check_common(n, delta, b)?;
    require(c > 0.0 && c <= 1.0, || format!("fraction c = {c} is outside (0, 1]"))?;
    let q = closeness_ratio(delta, b, a_margin)?;
    Ok(BoundValue::from_ln(-c.ln() + c * n * q.ln() - (-q).ln_1p()))
}

/// `n^(1 - ω) q^(n^ω) / (1 - q)`, the same tail with the sublinear cut-off
/// `n^ω`.
pub fn sublinear_cut_tail(n: f64, delta: f64, b: f64, a_margin: f64, omega: f64) -> Result<BoundValue> {
    check_common(n, delta, b)?;
    require(omega > 0.0 && omega <= 1.0, || format!("exponent omega = {omega} is outside (0, 1]"))?;
    let q = closeness_ratio(delta, b, a_margin)?;
    Ok(BoundValue::from_ln((1.0 - omega) * n.ln() + n.powf(omega) * q.ln() - (-q).ln_1p()))
}

fn log_base(x: f64, b: f64) -> f64 {
    x.ln() / b.ln_1p()
}

/// Ball radius after which any set of at least `c n` vertices reaches `k n`
/// vertices in a vertex `b`-expander: both ceilings plus one.
pub fn ball_growth_radius(b: f64, c: f64, k: f64) -> Result<u64> {
    require(b > 0.0, || format!("expansion constant b = {b} must be positive"))?;
    require(c > 0.0 && c < 0.5, || format!("fraction c = {c} is outside (0, 1/2)"))?;
    require(k > 0.5 && k < 1.0, || format!("fraction k = {k} is outside (1/2, 1)"))?;
    let grow_out = tolerant_ceil(-log_base(2.0 * (1.0 - k), b));
    let grow_in = tolerant_ceil(-log_base(2.0 * c, b));
    Ok(grow_out as u64 + grow_in as u64 + 1)
}

/// `ceil((1 - ω) log_{1+b} n)`.
pub fn sublinear_radius(n: f64, b: f64, omega: f64) -> Result<u64> {
    require(n >= 1.0, || format!("vertex count n = {n} must be at least 1"))?;
    require(b > 0.0, || format!("expansion constant b = {b} must be positive"))?;
    require(omega > 0.0 && omega <= 1.0, || format!("exponent omega = {omega} is outside (0, 1]"))?;
    Ok(tolerant_ceil((1.0 - omega) * log_base(n, b)).max(0.0) as u64)
}

fn check_margin(x: f64) -> Result<()> {
    require(x > 0.0 && x <= 0.5, || format!("margin x = {x} is outside (0, 1/2]"))
}

/// `log_{1+b}(4 Δ^3 / x^2)`.
fn growth_exponent(b: f64, delta: f64, x: f64) -> f64 {
    log_base(4.0 * delta.powi(3) / (x * x), b)
}

/// `(1 - ω) L + (1/2 - ω)` with `L = log_{1+b}(4 Δ^3 / x^2)`; the
/// sublinear bound decays exactly when this is negative.
pub fn sublinear_condition_lhs(omega: f64, b: f64, delta: f64, x: f64) -> Result<f64> {
    require(b > 0.0, || format!("expansion constant b = {b} must be positive"))?;
    require(delta >= 1.0, || format!("max degree {delta} must be at least 1"))?;
    check_margin(x)?;
    let l = growth_exponent(b, delta, x);
    Ok((1.0 - omega) * l + (0.5 - omega))
}

/// The root `(L + 1/2) / (L + 1)` of [`sublinear_condition_lhs`].
pub fn min_omega(b: f64, delta: f64, x: f64) -> Result<f64> {
    sublinear_condition_lhs(0.0, b, delta, x)?;
    let l = growth_exponent(b, delta, x);
    Ok((l + 0.5) / (l + 1.0))
}

/// `10 γ Δ^(3r) x^(-2r) 2^(2r) n^(1/2 - ω)` with `r = sublinear_radius(n, b, ω)`.
pub fn two_giants_bound(n: f64, delta: f64, b: f64, x: f64, omega: f64, gamma: f64) -> Result<BoundValue> {
    check_common(n, delta, b)?;
    check_margin(x)?;
    require(gamma > 0.0, || format!("gamma = {gamma} must be positive"))?;
    let r = sublinear_radius(n, b, omega)? as f64;
    let ln = (10.0 * gamma).ln()
        + r * (3.0 * delta.ln() - 2.0 * x.ln() + 2.0 * std::f64::consts::LN_2)
        + (0.5 - omega) * n.ln();
    Ok(BoundValue::from_ln(ln))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SprinklingConstant {
    /// `first_term - second_term`.
    pub constant: f64,
    /// `(c/2) (ε/(2d))^(d/(c a))`.
    pub first_term: f64,
    /// `3 ln 2 / (1 + ε/3)^(g/2)`.
    pub second_term: f64,
    /// Component size reached by the first phase, `(1 + ε/3)^(g/2)`.
    pub m: f64,
    pub p: f64,
    pub p1: f64,
    pub positive: bool,
}

/// `(1 + ε/3)^(g/2)`: the component size the first sprinkling phase
/// reaches on a graph of girth `g`.
pub fn first_phase_component_size(eps: f64, g: u32) -> f64 {
    (g as f64 / 2.0 * (eps / 3.0).ln_1p()).exp()
}

/// Constants of the two-phase giant-component argument on a `d`-regular
/// graph with isoperimetric number `c` and girth `g`.
pub fn sprinkling_constant(d: u32, c: f64, g: u32, eps: f64, a: f64) -> Result<SprinklingConstant> {
    require(d >= 3, || format!("degree d = {d} must be at least 3"))?;
    require(c > 0.0, || format!("isoperimetric number c = {c} must be positive"))?;
    require(g >= 3, || format!("girth g = {g} must be at least 3"))?;
    require(eps >= 0.0, || format!("eps = {eps} must be nonnegative"))?;
    require(a > 0.0, || format!("giant fraction a = {a} must be positive"))?;
    let df = d as f64;
    let p = (1.0 + eps) / (df - 1.0);
    require(p <= 1.0, || format!("p = (1+eps)/(d-1) = {p} exceeds 1"))?;
    let first_term = if eps == 0.0 {
        0.0
    } else {
        (c / 2.0) * (df / (c * a) * (eps / (2.0 * df)).ln()).exp()
    };
    let m = first_phase_component_size(eps, g);
    let second_term = 3.0 * std::f64::consts::LN_2 / m;
    let constant = first_term - second_term;
    Ok(SprinklingConstant {
        constant,
        first_term,
        second_term,
        m,
        p,
        p1: (1.0 + eps / 2.0) / (df - 1.0),
        positive: constant > 0.0,
    })
}

const GW_TOLERANCE: f64 = 1e-12;

/// Smallest root of `q = (1 - p + p q)^(d-1)` by monotone iteration from 0,
/// polished with Newton steps.
fn gw_extinction(d: u32, p: f64) -> Result<f64> {
    require(d >= 2, || format!("degree d = {d} must be at least 2"))?;
    require((0.0..=1.0).contains(&p), || format!("p = {p} is outside [0, 1]"))?;
    if p == 1.0 {
        return Ok(0.0);
    }
    let k = (d - 1) as i32;
    if p * k as f64 <= 1.0 {
        return Ok(1.0);
    }
    let f = |q: f64| (1.0 - p + p * q).powi(k);
    let mut q = 0.0;
    for _ in 0..1_000_000 {
        let next = f(q);
        let done = (next - q).abs() < GW_TOLERANCE;
        q = next;
        if done {
            break;
        }
    }
    // Iterates approach the root from below, where the convex map
    // f(q) - q is positive and decreasing, so Newton stays below it too.
    for _ in 0..50 {
        let slope = k as f64 * p * (1.0 - p + p * q).powi(k - 1) - 1.0;
        if slope >= 0.0 {
            break;
        }
        let step = (f(q) - q) / slope;
        q -= step;
        if step.abs() < 1e-17 {
            break;
        }
    }
    Ok(q)
}

/// Survival probability of a branching process with `Binom(d - 1, p)`
/// offspring.
pub fn gw_survival(d: u32, p: f64) -> Result<f64> {
    Ok(1.0 - gw_extinction(d, p)?)
}

/// Probability that the root of a `d`-regular tree (with `d` children)
/// lies in an infinite open cluster: `1 - (1 - p + p q)^d`.
pub fn gw_vertex_survival(d: u32, p: f64) -> Result<f64> {
    let q = gw_extinction(d, p)?;
    Ok(1.0 - (1.0 - p + p * q).powi(d as i32))
}

/// `(n / log2 n) q^ceil(log2 n) / (1 - q)` with `q = (Δ e) 2^b A^(b/2)`,
/// the geometric tail for cutting off a set of at least `log2 n` vertices.
pub fn log_cut_tail(n: f64, delta: f64, b: f64, a_margin: f64) -> Result<BoundValue> {
    check_common(n, delta, b)?;
    require(n >= 2.0, || format!("vertex count n = {n} must be at least 2"))?;
    require(a_margin > 0.0 && a_margin < 1.0, || format!("margin A = {a_margin} is outside (0, 1)"))?;
    let q = delta * std::f64::consts::E * 2f64.powf(b) * a_margin.powf(b / 2.0);
    require(q < 0.5, || format!("(Δe)2^b A^(b/2) = {q} is not below 1/2"))?;
    let log2n = n.log2();
    Ok(BoundValue::from_ln(n.ln() - log2n.ln() + tolerant_ceil(log2n) * q.ln() - (-q).ln_1p()))
}
