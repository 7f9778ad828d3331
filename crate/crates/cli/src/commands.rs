use std::fmt;
use std::fs::File;
use std::io::{self, BufReader};
use std::time::Instant;

use clap::Subcommand;
use serde_json::json;

use percolab::experiments::{
    counterexample_demo, percolated_expander_cheeger, sprinkling_giant_demo, threshold_scan, uniqueness_scan,
    write_points_csv, write_report_json, CheegerRunConfig, CounterexampleConfig, CounterexampleKind,
    ExperimentReport, FirstPhaseSize, GridMode, ScanConfig, SprinklingConfig,
};
use percolab::graph::{generate, girth, graph_metrics, read_graph, write_graph};
use percolab::isoperimetry::{cheeger_upper_bound, edge_cheeger_exact, vertex_iso_exact};
use percolab::oracle::{exact_cluster_stats, exact_pivotal_prob};
use percolab::percolation::{
    canonical_curve, component_stats, newman_ziff_sweep_with, sample, uniform_grid, write_canonical_csv,
    write_sweep_csv, LargeThreshold, SweepConfig,
};
use percolab::pivotal::{pivotal_bound, pivotal_prob_mc, write_pivotal_csv, PivotalRow, UpSetSpec};
use percolab::{FamilySpec, Graph};

use crate::output::{num, Format, Sink, Table};
use crate::{bounds, Cli, Command, GraphSource};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Lab(percolab::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 5,
            CliError::Lab(e) if e.is_precondition() => 3,
            CliError::Lab(e) if e.is_size_guard() => 4,
            CliError::Lab(e) if e.is_input_error() => 5,
            CliError::Lab(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Input(m) => write!(f, "input: {m}"),
            CliError::Lab(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<percolab::Error> for CliError {
    fn from(e: percolab::Error) -> Self {
        CliError::Lab(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Subcommand)]
pub enum Experiment {
    /// Threshold location per family from the smoothed giant fraction.
    ThresholdScan(ScanArgs),
    /// Probability of two large components over p, per family.
    UniquenessScan(ScanArgs),
    /// Two large components on cycles or cycle products at n and 2n.
    Counterexample {
        /// Cycle length.
        #[arg(long)]
        n: usize,
        /// Product with a clique of this size.
        #[arg(long)]
        clique: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Two-phase sprinkling on a regular family.
    Sprinkling {
        #[arg(long)]
        family: String,
        #[arg(long)]
        eps: f64,
        /// `girth` or a fixed component size.
        #[arg(long, default_value = "girth")]
        first_phase: String,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// Exact edge Cheeger constant of percolated small graphs.
    Cheeger {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
}

#[derive(clap::Args)]
pub struct ScanArgs {
    /// Family spec; repeatable.
    #[arg(long, required = true)]
    family: Vec<String>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Level of the giant fraction whose crossing locates the threshold.
    #[arg(long, default_value_t = 0.05)]
    a: f64,
    /// Fraction of n that makes a component large.
    #[arg(long, default_value_t = 0.02)]
    large_frac: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Grid in units of 1/n up to this value instead of all of [0, 1].
    #[arg(long)]
    per_vertex: Option<f64>,
}

fn family(text: &str) -> Result<FamilySpec> {
    Ok(text.parse::<FamilySpec>()?)
}

fn load(src: &GraphSource) -> Result<(Graph, String)> {
    match (&src.family, &src.graph) {
        (Some(f), None) => {
            let spec = family(f)?;
            Ok((generate(&spec)?, spec.to_string()))
        }
        (None, Some(path)) => {
            let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let g = read_graph(BufReader::new(file)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok((g, path.display().to_string()))
        }
        _ => Err(CliError::Usage("give exactly one of --family and --graph".into())),
    }
}

fn parse_upset(text: &str) -> Result<UpSetSpec> {
    let bad = || CliError::Usage(format!("up-set `{text}`: expected large:S, edges:T or z:C,I"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let u = match kind {
        "large" => UpSetSpec::LargeComponentExists(rest.parse().map_err(|_| bad())?),
        "edges" => UpSetSpec::EdgeCountAtLeast(rest.parse().map_err(|_| bad())?),
        "z" => {
            let (c, i) = rest.split_once(',').ok_or_else(bad)?;
            UpSetSpec::ZAtLeast {
                c: c.parse().map_err(|_| bad())?,
                i: i.parse().map_err(|_| bad())?,
            }
        }
        _ => return Err(bad()),
    };
    u.validate()?;
    Ok(u)
}

pub fn run(cli: &Cli) -> Result<()> {
    let started = Instant::now();
    let mut sink = Sink {
        format: cli.format,
        out: cli.out.clone(),
        command: std::env::args().skip(1).collect(),
        seed: cli.seed,
        runtime_s: None,
    };
    // Results are computed first; the runtime (if requested) covers the
    // computation and is stamped before writing.
    let stamp = |sink: &mut Sink| {
        if cli.timing {
            sink.runtime_s = Some(started.elapsed().as_secs_f64());
        }
    };
    match &cli.command {
        Command::Gen { family: f } => {
            let spec = family(f)?;
            let g = generate(&spec)?;
            stamp(&mut sink);
            let mut comments = sink.comments();
            comments.insert(0, format!("family: {spec}"));
            sink.write(|w| write_graph(w, &g, &comments))?;
            sink.summary(&format!("generated {spec}: n={} m={}", g.n(), g.m()));
        }
        Command::Metrics { source } => {
            let (g, name) = load(source)?;
            let m = graph_metrics(&g);
            let gi = girth(&g);
            stamp(&mut sink);
            let mut t = Table::new(&["graph", "n", "m", "min_degree", "max_degree", "diameter", "connected", "girth"]);
            t.push(vec![
                json!(name),
                json!(g.n()),
                json!(g.m()),
                json!(m.min_degree),
                json!(m.max_degree),
                json!(m.diameter),
                json!(m.connected),
                json!(gi),
            ]);
            sink.write_table(&t)?;
            sink.summary(&format!(
                "{name}: n={} m={} degrees {}..{} connected={}",
                g.n(),
                g.m(),
                m.min_degree,
                m.max_degree,
                m.connected
            ));
        }
        Command::Cheeger {
            source,
            vertex,
            upper,
            work_limit,
        } => {
            let (g, name) = load(source)?;
            let (kind, cut) = match (vertex, upper) {
                (true, None) => ("vertex_exact", vertex_iso_exact(&g, *work_limit)?),
                (false, None) => ("edge_exact", edge_cheeger_exact(&g, *work_limit)?),
                (false, Some(budget)) => ("edge_upper", cheeger_upper_bound(&g, *budget, cli.seed)?),
                (true, Some(_)) => return Err(CliError::Usage("--upper applies to the edge boundary only".into())),
            };
            stamp(&mut sink);
            let witness: Vec<String> = cut.witness.iter().map(|v| v.to_string()).collect();
            let mut t = Table::new(&[
                "graph",
                "kind",
                "size",
                "edge_boundary",
                "vertex_boundary",
                "edge_ratio",
                "vertex_ratio",
                "witness",
            ]);
            t.push(vec![
                json!(name),
                json!(kind),
                json!(cut.witness.len()),
                json!(cut.edge_boundary),
                json!(cut.vertex_boundary),
                num(cut.edge_ratio),
                num(cut.vertex_ratio),
                json!(witness.join(" ")),
            ]);
            sink.write_table(&t)?;
            let ratio = if *vertex { cut.vertex_ratio } else { cut.edge_ratio };
            sink.summary(&format!("{name}: {kind} ratio={ratio} at |A|={}", cut.witness.len()));
        }
        Command::Percolate { source, p, thresholds } => {
            let (g, name) = load(source)?;
            let s = sample(&g, *p, cli.seed)?;
            let st = component_stats(&s, thresholds);
            stamp(&mut sink);
            let mut cols = vec!["graph", "p", "open_edges", "components", "l1", "l2"];
            let names: Vec<String> = thresholds.iter().map(|t| format!("count_ge_{t}")).collect();
            cols.extend(names.iter().map(String::as_str));
            let mut t = Table::new(&cols);
            let mut row = vec![
                json!(name),
                num(*p),
                json!(s.open_count()),
                json!(s.sizes().len()),
                json!(st.l1),
                json!(st.l2),
            ];
            row.extend(st.counts.iter().map(|c| json!(c)));
            t.push(row);
            sink.write_table(&t)?;
            sink.summary(&format!("{name} at p={p}: L1={} L2={} open={}", st.l1, st.l2, s.open_count()));
        }
        Command::Sweep {
            source,
            trials,
            thresholds,
            canonical,
        } => {
            let (g, name) = load(source)?;
            let mut cfg = SweepConfig::new(*trials, thresholds.clone(), cli.seed);
            if let Some(points) = canonical {
                if *points < 2 {
                    return Err(CliError::Usage("--canonical needs at least 2 points".into()));
                }
                cfg = cfg.with_grid(uniform_grid(*points));
            }
            let rec = newman_ziff_sweep_with(&g, &cfg)?;
            stamp(&mut sink);
            let mut comments = sink.comments();
            comments.insert(0, format!("graph: {name}"));
            match (canonical.is_some(), sink.format) {
                (false, Format::Csv) => sink.write(|w| write_sweep_csv(w, &rec, &comments))?,
                (true, Format::Csv) => sink.write(|w| write_canonical_csv(w, &canonical_curve(&rec), &comments))?,
                (false, Format::Json) => {
                    let rows: Vec<_> = (0..rec.rows().len()).map(|i| rec.row(i)).collect();
                    sink.write_json(&sink.envelope(json!({"graph": name, "rows": rows})))?
                }
                (true, Format::Json) => {
                    sink.write_json(&sink.envelope(json!({"graph": name, "points": canonical_curve(&rec)})))?
                }
            }
            sink.summary(&format!("{name}: {trials} sweeps over {} edges", g.m()));
        }
        Command::Oracle { source, p, thresholds } => {
            let (g, name) = load(source)?;
            let stats = p
                .iter()
                .map(|&p| exact_cluster_stats(&g, p, thresholds))
                .collect::<percolab::Result<Vec<_>>>()?;
            stamp(&mut sink);
            let mut cols = vec!["graph", "p", "mean_l1", "mean_l2", "p_connected"];
            let extra: Vec<String> = thresholds
                .iter()
                .flat_map(|s| [format!("p_l1_ge_{s}"), format!("p_two_ge_{s}")])
                .collect();
            cols.extend(extra.iter().map(String::as_str));
            let mut t = Table::new(&cols);
            for st in &stats {
                let mut row = vec![json!(name), num(st.p), num(st.mean_l1), num(st.mean_l2), num(st.p_connected)];
                for k in 0..thresholds.len() {
                    row.push(num(st.p_l1_at_least[k]));
                    row.push(num(st.p_two_large[k]));
                }
                t.push(row);
            }
            sink.write_table(&t)?;
            let line: Vec<String> = stats
                .iter()
                .map(|st| format!("p={}: P(connected)={}", st.p, st.p_connected))
                .collect();
            sink.summary(&format!("{name}: {}", line.join("; ")));
        }
        Command::Pivotal {
            source,
            p,
            upset,
            trials,
            x,
            exact,
        } => {
            let (g, name) = load(source)?;
            let upsets = upset.iter().map(|u| parse_upset(u)).collect::<Result<Vec<_>>>()?;
            let bound = pivotal_bound(g.m(), *x)?;
            let mut rows = Vec::new();
            for (i, u) in upsets.iter().enumerate() {
                for (j, &pp) in p.iter().enumerate() {
                    let (estimate, se) = if *exact {
                        (exact_pivotal_prob(&g, pp, u)?, 0.0)
                    } else {
                        let seed = percolab::rng::derive_seed(cli.seed, (i * p.len() + j) as u64);
                        let e = pivotal_prob_mc(&g, pp, u, *trials, seed)?;
                        (e.mean, e.se)
                    };
                    rows.push(PivotalRow {
                        k: g.m(),
                        p: pp,
                        upset: u.to_string(),
                        estimate,
                        se,
                        bound,
                    });
                }
            }
            stamp(&mut sink);
            let mut comments = sink.comments();
            comments.insert(0, format!("graph: {name}"));
            match sink.format {
                Format::Csv => sink.write(|w| write_pivotal_csv(&mut &mut *w, &rows, &comments))?,
                Format::Json => sink.write_json(&sink.envelope(json!({"graph": name, "rows": rows})))?,
            }
            let worst = rows.iter().map(|r| r.estimate).fold(0.0, f64::max);
            sink.summary(&format!("{name}: max pivotal probability {worst} vs bound {bound}"));
        }
        Command::Bounds(args) => {
            let rows = bounds::evaluate(args)?;
            stamp(&mut sink);
            let mut t = Table::new(&["bound", "params", "quantity", "value"]);
            for (b, params, q, v) in &rows {
                t.push(vec![json!(b), json!(params), json!(q), num(*v)]);
            }
            sink.write_table(&t)?;
            let line: Vec<String> = rows.iter().map(|(b, _, q, v)| format!("{b} {q}={v}")).collect();
            sink.summary(&line.join("; "));
        }
        Command::Experiment { which } => {
            let report = experiment(which, cli.seed)?;
            let report = if cli.timing { report } else { report.without_timing() };
            sink.runtime_s = report.runtime_s;
            write_report(&sink, &report)?;
            let keys: Vec<String> = report
                .summary
                .iter()
                .take(6)
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            sink.summary(&format!("{}: {}", report.id, keys.join(" ")));
        }
    }
    Ok(())
}

fn experiment(which: &Experiment, seed: u64) -> Result<ExperimentReport> {
    Ok(match which {
        Experiment::ThresholdScan(a) => threshold_scan(&scan_config(a, seed)?)?,
        Experiment::UniquenessScan(a) => uniqueness_scan(&scan_config(a, seed)?)?,
        Experiment::Counterexample { n, clique, trials } => counterexample_demo(&CounterexampleConfig {
            kind: match clique {
                Some(h) => CounterexampleKind::CycleProduct { clique: *h },
                None => CounterexampleKind::Cycle,
            },
            n: *n,
            trials: *trials,
            seed,
        })?,
        Experiment::Sprinkling {
            family: f,
            eps,
            first_phase,
            trials,
        } => {
            let first_phase = match first_phase.as_str() {
                "girth" => FirstPhaseSize::Girth,
                m => FirstPhaseSize::Fixed(
                    m.parse()
                        .map_err(|_| CliError::Usage(format!("--first-phase `{m}`: expected girth or an integer")))?,
                ),
            };
            sprinkling_giant_demo(&SprinklingConfig {
                family: family(f)?,
                eps: *eps,
                first_phase,
                trials: *trials,
                seed,
            })?
        }
        Experiment::Cheeger { family: f, p, trials } => percolated_expander_cheeger(&CheegerRunConfig {
            family: family(f)?,
            p_list: p.clone(),
            trials: *trials,
            seed,
        })?,
    })
}

fn scan_config(a: &ScanArgs, seed: u64) -> Result<ScanConfig> {
    let families = a.family.iter().map(|f| family(f)).collect::<Result<Vec<_>>>()?;
    let mut cfg = ScanConfig::new(families, a.trials, seed);
    cfg.a = a.a;
    cfg.large = LargeThreshold::Fraction(a.large_frac);
    cfg.grid = match a.per_vertex {
        Some(max_units) => GridMode::PerVertex {
            max_units,
            points: a.points,
        },
        None => GridMode::Uniform { points: a.points },
    };
    Ok(cfg)
}

fn write_report(sink: &Sink, report: &ExperimentReport) -> Result<()> {
    match sink.format {
        Format::Json => sink.write(|w| write_report_json(w, report))?,
        Format::Csv => {
            let mut comments = sink.comments();
            comments.push(format!("id: {}", report.id));
            comments.push(format!("config: {}", report.config));
            comments.push(format!("summary: {}", serde_json::to_string(&report.summary).map_err(io::Error::from)?));
            sink.write(|w| write_points_csv(w, report, &comments))?;
        }
    }
    Ok(())
}
