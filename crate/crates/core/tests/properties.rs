use percolab::bounds::ball_growth_radius;
use percolab::graph::{ball, generate};
use percolab::isoperimetry::{vertex_iso_exact, DEFAULT_WORK_LIMIT};
use percolab::percolation::{binomial_smooth, edge_uniforms, newman_ziff_sweep, sample_from_uniforms};
use percolab::{FamilySpec, Graph};
use proptest::prelude::*;

fn family(s: &str) -> Graph {
    generate(&s.parse::<FamilySpec>().unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Any set of at least c n vertices reaches k n vertices within the
    // radius computed from the exactly certified vertex expansion.
    #[test]
    fn ball_growth_on_certified_expanders(
        which in 0usize..3,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..12),
        c in 0.05f64..0.45,
        k in 0.55f64..0.95,
    ) {
        let g = family(["hypercube:4", "rr:20,3,seed=5", "product:cycle:5/complete:3"][which]);
        let b = vertex_iso_exact(&g, DEFAULT_WORK_LIMIT).unwrap().vertex_ratio;
        prop_assume!(b > 0.0);
        let n = g.n();
        let mut set: Vec<usize> = picks.iter().map(|i| i.index(n)).collect();
        set.sort_unstable();
        set.dedup();
        prop_assume!(set.len() as f64 >= c * n as f64);
        let r = ball_growth_radius(b, c, k).unwrap();
        let reached = ball(&g, &set, r as usize).len();
        prop_assert!(reached as f64 >= k * n as f64, "b={b} r={r} reached {reached} of {n}");
    }

    // Thresholding shared uniforms at p <= p' only merges components.
    #[test]
    fn coupled_samples_coarsen(seed in any::<u64>(), p in 0.0f64..1.0, dp in 0.0f64..0.5) {
        let g = family("rr:60,3,seed=2");
        let u = edge_uniforms(&g, seed);
        let lo = sample_from_uniforms(&g, &u, p).unwrap();
        let hi = sample_from_uniforms(&g, &u, (p + dp).min(1.0)).unwrap();
        let (a, b) = (lo.labels(), hi.labels());
        for x in 0..g.n() {
            for y in 0..g.n() {
                if a[x] == a[y] {
                    prop_assert_eq!(b[x], b[y]);
                }
            }
        }
        prop_assert!(hi.sizes()[0] >= lo.sizes()[0]);
    }
}

#[test]
fn subcritical_giant_fraction_shrinks_with_n() {
    // p = (1 - 0.2)/(d - 1) on 3-regular graphs
    let p = 0.4;
    let fracs: Vec<f64> = [1000usize, 10_000]
        .iter()
        .map(|&n| {
            let g = generate(&FamilySpec::RandomRegular { n, d: 3, seed: 3 }).unwrap();
            let rec = newman_ziff_sweep(&g, 100, &[], 5).unwrap();
            binomial_smooth(&rec, p).unwrap().l1 / n as f64
        })
        .collect();
    assert!(fracs[1] < fracs[0], "{fracs:?}");
    assert!(fracs[1] < 0.05, "{fracs:?}");
}

#[test]
fn sweeps_do_not_depend_on_thread_count() {
    let g = family("rr:500,4,seed=1");
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| newman_ziff_sweep(&g, 64, &[10], 42).unwrap())
    };
    assert_eq!(run(1), run(4));
}
