//! Bond percolation: single configurations, component analytics,
//! Newman–Ziff sweeps with binomial smoothing, and multi-phase sprinkling.

mod sample;
mod sprinkle;
mod sweep;

pub use sample::{
    component_stats, count_components_at_least, count_large_components, edge_uniforms, sample,
    sample_from_uniforms, ComponentStats, LargeThreshold, PercSample,
};
pub use sprinkle::{sprinkle_split, sprinkle_union, SprinklePlan, SprinkleOutcome};
pub use sweep::{
    binomial_smooth, canonical_curve, newman_ziff_sweep, newman_ziff_sweep_with, uniform_grid,
    write_canonical_csv, write_sweep_csv, CanonicalPoint, RowMeans, SmoothedStats, SweepConfig,
    SweepRecord,
};
pub use sweep::write_comments;
