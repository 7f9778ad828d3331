//! A bond-percolation laboratory for finite graphs.
//!
//! * [`graph`]: simple undirected graphs, family generators, girth, balls.
//! * [`isoperimetry`]: exact edge and vertex isoperimetric constants.
//! * [`percolation`]: `G(p)` sampling, Newman–Ziff sweeps, sprinkling.
//! * [`pivotal`]: up-sets, pivotal edges, L-bridges and the pivotal bound.
//! * [`oracle`]: exhaustive enumeration of all configurations on tiny graphs.
//! * [`bounds`]: closed-form tail bounds and constants.
//! * [`experiments`]: seeded report-producing recipes.

pub mod bounds;
pub mod dsu;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod isoperimetry;
pub mod numeric;
pub mod oracle;
pub mod percolation;
pub mod pivotal;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{FamilySpec, Graph};
