use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Serialize, Serializer};

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

/// A graph family together with its size parameters.
///
/// The textual form is `name:param[,param...]`, e.g. `cycle:8`, `box:3,8`,
/// `torus:3,8`, `rr:10000,3,seed=7` or `product:cycle:100/complete:3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Hypercube(usize),
    Box {
        dim: usize,
        side: usize,
        torus: bool,
    },
    RandomRegular {
        n: usize,
        d: usize,
        seed: u64,
    },
    Product(Box<FamilySpec>, Box<FamilySpec>),
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            FamilySpec::Complete(n) | FamilySpec::Path(n) if *n == 0 => {
                bad(format!("{self}: vertex count must be at least 1"))
            }
            FamilySpec::Cycle(n) if *n < 3 => bad(format!("{self}: a simple cycle needs n >= 3")),
            FamilySpec::Hypercube(d) if *d == 0 => bad(format!("{self}: dimension must be at least 1")),
            FamilySpec::Box { dim, side, .. } if *dim == 0 || *side == 0 => {
                bad(format!("{self}: dimension and side must be at least 1"))
            }
            FamilySpec::RandomRegular { n, d, .. } => {
                if *n == 0 {
                    bad(format!("{self}: vertex count must be at least 1"))
                } else if d >= n {
                    bad(format!("{self}: degree must be below the vertex count"))
                } else if (n * d) % 2 == 1 {
                    bad(format!("{self}: n*d must be even"))
                } else {
                    Ok(())
                }
            }
            FamilySpec::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// Vertex count of the generated graph.
    pub fn vertex_count(&self) -> usize {
        match self {
            FamilySpec::Complete(n) | FamilySpec::Cycle(n) | FamilySpec::Path(n) => *n,
            FamilySpec::Hypercube(d) => 1 << d,
            FamilySpec::Box { dim, side, .. } => side.pow(*dim as u32),
            FamilySpec::RandomRegular { n, .. } => *n,
            FamilySpec::Product(a, b) => a.vertex_count() * b.vertex_count(),
        }
    }

    /// Common degree when every generated graph of the family is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        match self {
            FamilySpec::Complete(n) => Some(n - 1),
            FamilySpec::Cycle(_) => Some(2),
            FamilySpec::Hypercube(d) => Some(*d),
            FamilySpec::Box {
                dim, side, torus, ..
            } if *torus && *side >= 3 => Some(2 * dim),
            FamilySpec::RandomRegular { d, .. } => Some(*d),
            FamilySpec::Product(a, b) => Some(a.regular_degree()? + b.regular_degree()?),
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            FamilySpec::Box { dim, side, torus } => {
                let name = if *torus { "torus" } else { "box" };
                write!(f, "{name}:{dim},{side}")
            }
            FamilySpec::RandomRegular { n, d, seed } => write!(f, "rr:{n},{d},seed={seed}"),
            FamilySpec::Product(a, b) => write!(f, "product:{a}/{b}"),
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSpec(format!("`{text}`: {msg}"));
        let (name, rest) = text
            .split_once(':')
            .ok_or_else(|| bad("expected name:param[,param...]"))?;
        if name == "product" {
            let (a, b) = rest
                .split_once('/')
                .ok_or_else(|| bad("product needs two factors separated by `/`"))?;
            return Ok(FamilySpec::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        let mut seed = None;
        let mut nums = Vec::new();
        for tok in rest.split(',').map(str::trim) {
            if let Some(s) = tok.strip_prefix("seed=") {
                seed = Some(s.parse::<u64>().map_err(|_| bad("seed must be an integer"))?);
            } else {
                nums.push(
                    tok.parse::<usize>()
                        .map_err(|_| bad("parameters must be non-negative integers"))?,
                );
            }
        }
        if matches!(name, "rr" | "random-regular") && nums.len() == 3 && seed.is_none() {
            seed = nums.pop().map(|s| s as u64);
        }
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(bad(&format!("expected {k} parameter(s)")))
            }
        };
        let spec = match name {
            "complete" | "k" => {
                arity(1)?;
                FamilySpec::Complete(nums[0])
            }
            "cycle" | "c" => {
                arity(1)?;
                FamilySpec::Cycle(nums[0])
            }
            "path" | "p" => {
                arity(1)?;
                FamilySpec::Path(nums[0])
            }
            "hypercube" | "cube" | "q" => {
                arity(1)?;
                FamilySpec::Hypercube(nums[0])
            }
            "box" | "grid" | "torus" => {
                arity(2)?;
                FamilySpec::Box {
                    dim: nums[0],
                    side: nums[1],
                    torus: name == "torus",
                }
            }
            "rr" | "random-regular" => {
                arity(2)?;
                FamilySpec::RandomRegular {
                    n: nums[0],
                    d: nums[1],
                    seed: seed.unwrap_or(0),
                }
            }
            _ => return Err(bad("unknown family name")),
        };
        if seed.is_some() && !matches!(spec, FamilySpec::RandomRegular { .. }) {
            return Err(bad("only rr takes a seed"));
        }
        Ok(spec)
    }
}

/// Builds the graph described by `spec`. Deterministic, including the seed
/// of random families.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    let g = match spec {
        FamilySpec::Complete(n) => {
            let n = *n;
            let edges = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            Graph::from_valid_edges(n, edges)
        }
        FamilySpec::Cycle(n) => {
            Graph::from_valid_edges(*n, (0..*n).map(|i| (i, (i + 1) % n)).collect())
        }
        FamilySpec::Path(n) => Graph::from_valid_edges(*n, (1..*n).map(|i| (i - 1, i)).collect()),
        FamilySpec::Hypercube(d) => {
            let n = 1usize << d;
            let edges = (0..n)
                .flat_map(|v| {
                    (0..*d)
                        .map(move |i| (v, v ^ (1 << i)))
                        .filter(|&(v, w)| v < w)
                })
                .collect();
            Graph::from_valid_edges(n, edges)
        }
        FamilySpec::Box { dim, side, torus } => lattice_box(*dim, *side, *torus),
        FamilySpec::RandomRegular { n, d, seed } => random_regular(*n, *d, *seed)?,
        FamilySpec::Product(a, b) => cartesian_product(&generate(a)?, &generate(b)?),
    };
    Ok(g)
}

/// `[side]^dim` grid; with `torus` each line closes into a cycle. Sides
/// below 3 have no distinct wrap-around edge, so those tori equal boxes.
fn lattice_box(dim: usize, side: usize, torus: bool) -> Graph {
    let n = side.pow(dim as u32);
    let mut edges = Vec::new();
    for v in 0..n {
        let mut stride = 1;
        for _ in 0..dim {
            let coord = (v / stride) % side;
            if coord + 1 < side {
                edges.push((v, v + stride));
            } else if torus && side >= 3 {
                edges.push((v - coord * stride, v));
            }
            stride *= side;
        }
    }
    Graph::from_valid_edges(n, edges)
}

/// Attempts allowed before giving up: `ceil(10 * e^{(d^2-1)/4})`, i.e. ten
/// times the reciprocal of the asymptotic probability that a pairing is simple.
pub(crate) fn pairing_budget(d: usize) -> u64 {
    let d = d as f64;
    let budget = (10.0 * ((d * d - 1.0) / 4.0).exp()).ceil();
    if budget >= u64::MAX as f64 {
        u64::MAX
    } else {
        (budget as u64).max(1)
    }
}

/// Uniform simple `d`-regular graph by the pairing model, rejecting the
/// whole matching on any loop or multi-edge.
fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    let budget = pairing_budget(d);
    let mut rng = rng::stream(seed, 0);
    let mut points: Vec<usize> = (0..n * d).map(|p| p / d).collect();
    let mut seen = HashSet::with_capacity(n * d / 2);
    'attempt: for _ in 0..budget {
        points.shuffle(&mut rng);
        seen.clear();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Ok(Graph::from_valid_edges(n, edges));
    }
    Err(Error::RetryBudgetExhausted(budget))
}

/// Cartesian product `g □ h`; vertex `(a, b)` has index `a * h.n() + b`.
///
/// Edges are listed copy-of-`h`-first (for each `a`), then copies of `g`'s
/// edges for each `b`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.n();
    let mut edges = Vec::with_capacity(g.n() * h.m() + nh * g.m());
    for a in 0..g.n() {
        edges.extend(h.edges().iter().map(|&(b, b2)| (a * nh + b, a * nh + b2)));
    }
    for &(a, a2) in g.edges() {
        edges.extend((0..nh).map(|b| (a * nh + b, a2 * nh + b)));
    }
    Graph::from_valid_edges(g.n() * nh, edges)
}
