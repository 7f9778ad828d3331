use std::collections::HashMap;

use clap::Args;
use percolab::bounds::{self as b, BoundValue};
use percolab::pivotal::pivotal_bound;

use crate::commands::CliError;

#[derive(Args, Default)]
pub struct BoundsArgs {
    /// Smallest admissible sublinear exponent: `b=,delta=,x=`.
    #[arg(long)]
    pub min_omega: Vec<String>,
    /// Left-hand side of the sublinear decay condition: `omega=,b=,delta=,x=`.
    #[arg(long)]
    pub condition: Vec<String>,
    /// Branching-process survival: `d=,p=`.
    #[arg(long)]
    pub gw: Vec<String>,
    /// Linear cut-off tail: `n=,delta=,b=,a=,c=`.
    #[arg(long)]
    pub linear_cut: Vec<String>,
    /// Sublinear cut-off tail: `n=,delta=,b=,a=,omega=`.
    #[arg(long)]
    pub sublinear_cut: Vec<String>,
    /// Logarithmic cut-off tail: `n=,delta=,b=,a=`.
    #[arg(long)]
    pub log_cut: Vec<String>,
    /// Two-giants probability bound: `n=,delta=,b=,x=,omega=,gamma=`.
    #[arg(long)]
    pub two_giants: Vec<String>,
    /// Ball-growth radius: `b=,c=,k=`.
    #[arg(long)]
    pub ball_radius: Vec<String>,
    /// Sublinear radius: `n=,b=,omega=`.
    #[arg(long)]
    pub sublinear_radius: Vec<String>,
    /// Two-phase sprinkling constants: `d=,c=,g=,eps=,a=`.
    #[arg(long)]
    pub sprinkling: Vec<String>,
    /// Pivotal probability bound: `k=,x=`.
    #[arg(long)]
    pub pivotal: Vec<String>,
}

/// One evaluated quantity: `(bound, params, quantity, value)`.
pub type BoundRow = (&'static str, String, &'static str, f64);

struct Params<'a> {
    text: &'a str,
    map: HashMap<String, f64>,
}

impl<'a> Params<'a> {
    fn parse(text: &'a str, keys: &[&str]) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("`{part}` is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("`{part}`: value is not a number")))?;
            if !keys.contains(&k.trim()) {
                return Err(CliError::Usage(format!("unknown key `{k}`; expected {}", keys.join(", "))));
            }
            map.insert(k.trim().to_string(), v);
        }
        if let Some(missing) = keys.iter().find(|k| !map.contains_key(**k)) {
            return Err(CliError::Usage(format!("`{text}` is missing `{missing}=`")));
        }
        Ok(Params { text, map })
    }

    fn get(&self, k: &str) -> f64 {
        self.map[k]
    }

    fn int(&self, k: &str) -> Result<u32, CliError> {
        let v = self.get(k);
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u32)
        } else {
            Err(CliError::Usage(format!("`{k}` must be a non-negative integer, got {v}")))
        }
    }
}

fn tail(rows: &mut Vec<BoundRow>, name: &'static str, p: &Params, v: BoundValue) {
    rows.push((name, p.text.to_string(), "value", v.value));
    rows.push((name, p.text.to_string(), "ln_value", v.ln_value));
}

pub fn evaluate(a: &BoundsArgs) -> Result<Vec<BoundRow>, CliError> {
    let mut rows = Vec::new();
    for s in &a.min_omega {
        let p = Params::parse(s, &["b", "delta", "x"])?;
        let w = b::min_omega(p.get("b"), p.get("delta"), p.get("x"))?;
        rows.push(("min_omega", s.clone(), "omega", w));
    }
    for s in &a.condition {
        let p = Params::parse(s, &["omega", "b", "delta", "x"])?;
        let v = b::sublinear_condition_lhs(p.get("omega"), p.get("b"), p.get("delta"), p.get("x"))?;
        rows.push(("sublinear_condition", s.clone(), "lhs", v));
    }
    for s in &a.gw {
        let p = Params::parse(s, &["d", "p"])?;
        let d = p.int("d")?;
        rows.push(("gw_survival", s.clone(), "survival", b::gw_survival(d, p.get("p"))?));
        rows.push(("gw_survival", s.clone(), "vertex_survival", b::gw_vertex_survival(d, p.get("p"))?));
    }
    for s in &a.linear_cut {
        let p = Params::parse(s, &["n", "delta", "b", "a", "c"])?;
        let v = b::linear_cut_tail(p.get("n"), p.get("delta"), p.get("b"), p.get("a"), p.get("c"))?;
        tail(&mut rows, "linear_cut_tail", &p, v);
    }
    for s in &a.sublinear_cut {
        let p = Params::parse(s, &["n", "delta", "b", "a", "omega"])?;
        let v = b::sublinear_cut_tail(p.get("n"), p.get("delta"), p.get("b"), p.get("a"), p.get("omega"))?;
        tail(&mut rows, "sublinear_cut_tail", &p, v);
    }
    for s in &a.log_cut {
        let p = Params::parse(s, &["n", "delta", "b", "a"])?;
        let v = b::log_cut_tail(p.get("n"), p.get("delta"), p.get("b"), p.get("a"))?;
        tail(&mut rows, "log_cut_tail", &p, v);
    }
    for s in &a.two_giants {
        let p = Params::parse(s, &["n", "delta", "b", "x", "omega", "gamma"])?;
        let v = b::two_giants_bound(
            p.get("n"),
            p.get("delta"),
            p.get("b"),
            p.get("x"),
            p.get("omega"),
            p.get("gamma"),
        )?;
        tail(&mut rows, "two_giants_bound", &p, v);
    }
    for s in &a.ball_radius {
        let p = Params::parse(s, &["b", "c", "k"])?;
        let r = b::ball_growth_radius(p.get("b"), p.get("c"), p.get("k"))?;
        rows.push(("ball_growth_radius", s.clone(), "radius", r as f64));
    }
    for s in &a.sublinear_radius {
        let p = Params::parse(s, &["n", "b", "omega"])?;
        let r = b::sublinear_radius(p.get("n"), p.get("b"), p.get("omega"))?;
        rows.push(("sublinear_radius", s.clone(), "radius", r as f64));
    }
    for s in &a.sprinkling {
        let p = Params::parse(s, &["d", "c", "g", "eps", "a"])?;
        let k = b::sprinkling_constant(p.int("d")?, p.get("c"), p.int("g")?, p.get("eps"), p.get("a"))?;
        for (q, v) in [
            ("constant", k.constant),
            ("first_term", k.first_term),
            ("second_term", k.second_term),
            ("m", k.m),
            ("p", k.p),
            ("p1", k.p1),
        ] {
            rows.push(("sprinkling_constant", s.clone(), q, v));
        }
    }
    for s in &a.pivotal {
        let p = Params::parse(s, &["k", "x"])?;
        let v = pivotal_bound(p.int("k")? as usize, p.get("x"))?;
        rows.push(("pivotal_bound", s.clone(), "bound", v));
    }
    if rows.is_empty() {
        return Err(CliError::Usage("bounds needs at least one bound flag (see --help)".into()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_require_every_key() {
        assert!(Params::parse("b=1,delta=3", &["b", "delta", "x"]).is_err());
        assert!(Params::parse("b=1,delta=3,x=0.25,y=2", &["b", "delta", "x"]).is_err());
        assert!(Params::parse("b=one", &["b"]).is_err());
        let p = Params::parse(" b = 1 , delta=3,x=0.25", &["b", "delta", "x"]).unwrap();
        assert_eq!(p.get("delta"), 3.0);
    }

    #[test]
    fn min_omega_row() {
        let a = BoundsArgs {
            min_omega: vec!["b=1,delta=3,x=0.25".into()],
            ..Default::default()
        };
        let rows = evaluate(&a).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].3 - 0.957_464_501_475_835).abs() < 1e-12);
        assert!(evaluate(&BoundsArgs::default()).is_err());
    }
}
