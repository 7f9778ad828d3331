use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn percolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percolab"))
        .args(args)
        .env_remove("PERCOLAB_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Output without the `# command:` echo, which differs whenever argv does.
fn without_command(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("# command:"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn gen_writes_header_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let o = percolab(&["gen", "--family", "cycle:8", "--out", path_str(&g)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&g).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("8 8"));
    assert!(text.contains("# seed: 0"));
    assert!(text.contains("# command: percolab gen --family cycle:8"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);
}

#[test]
fn oracle_on_triangle_file() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.txt");
    fs::write(&k3, "3 3\n0 1\n1 2\n0 2\n").unwrap();
    let o = percolab(&["oracle", "--graph", path_str(&k3), "--p", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("P(connected)=0.5"), "{}", stderr(&o));
    let csv = stdout(&o);
    let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "graph,p,mean_l1,mean_l2,p_connected,p_l1_ge_2,p_two_ge_2");
    let cells: Vec<&str> = data[1].split(',').collect();
    assert_eq!(cells[4], "0.5");
}

#[test]
fn bounds_min_omega() {
    let o = percolab(&["bounds", "--min-omega", "b=1,delta=3,x=0.25", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let w = v["result"][0]["value"].as_f64().unwrap();
    assert!((w - 0.9575).abs() < 1e-4, "{w}");
    assert_eq!(v["seed"], 0);
}

#[test]
fn exit_codes_name_the_failure() {
    let usage = percolab(&["metrics", "--family", "cycle:5", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));
    let both = percolab(&["metrics", "--family", "cycle:5", "--graph", "x.txt"]);
    assert_eq!(both.status.code(), Some(2));
    let pre = percolab(&["percolate", "--family", "cycle:5", "--p", "1.5"]);
    assert_eq!(pre.status.code(), Some(3));
    let guard = percolab(&["oracle", "--family", "cycle:30", "--p", "0.5"]);
    assert_eq!(guard.status.code(), Some(4));
    assert!(stderr(&guard).contains("size guard"), "{}", stderr(&guard));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "3 2\n0 1\n").unwrap();
    let input = percolab(&["metrics", "--graph", path_str(&bad)]);
    assert_eq!(input.status.code(), Some(5));
    let spec = percolab(&["metrics", "--family", "nosuch:3"]);
    assert_eq!(spec.status.code(), Some(5));
}

#[test]
fn same_arguments_give_identical_bytes() {
    let args = ["sweep", "--family", "rr:200,3,seed=4", "--trials", "20", "--canonical", "11", "--seed", "5"];
    let (a, b) = (percolab(&args), percolab(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let exp = ["experiment", "counterexample", "--n", "8", "--trials", "500", "--format", "json"];
    let (a, b) = (percolab(&exp), percolab(&exp));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    for key in ["id", "config", "points", "summary", "seed", "runtime_s"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["runtime_s"].is_null());
}

#[test]
fn thread_count_does_not_change_results() {
    let base = ["pivotal", "--family", "cycle:6", "--p", "0.5", "--upset", "large:3", "--trials", "5000"];
    let one = percolab(&[&base[..], &["--threads", "1"]].concat());
    let four = percolab(&[&base[..], &["--threads", "4"]].concat());
    assert!(one.status.success(), "{}", stderr(&one));
    assert_eq!(without_command(&stdout(&one)), without_command(&stdout(&four)));
    assert!(stdout(&one).contains("k,p,upset,estimate,se,bound"));
}

#[test]
fn seed_from_environment_unless_flag_given() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_percolab"));
        c.args(["percolate", "--family", "rr:100,3", "--p", "0.5"]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        match env {
            Some(s) => c.env("PERCOLAB_SEED", s),
            None => c.env_remove("PERCOLAB_SEED"),
        };
        stdout(&c.output().unwrap())
    };
    assert!(run(Some("9"), None).contains("# seed: 9"));
    assert!(run(Some("9"), Some("3")).contains("# seed: 3"));
    assert!(run(None, None).contains("# seed: 0"));
}

#[test]
fn timing_is_opt_in() {
    let o = percolab(&["metrics", "--family", "hypercube:3", "--timing"]);
    assert!(stdout(&o).contains("# runtime_s: "));
    let o = percolab(&["metrics", "--family", "hypercube:3"]);
    assert!(!stdout(&o).contains("runtime_s"));
    assert!(stdout(&o).contains("hypercube:3,8,12,3,3,3,true,4"));
}

#[test]
fn experiment_csv_carries_config_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cheeger.csv");
    let o = percolab(&[
        "experiment",
        "cheeger",
        "--family",
        "complete:6",
        "--p",
        "0.5,1",
        "--trials",
        "50",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# config: "));
    assert!(text.contains("\"coupled_decreases\":0"));
    assert!(text.contains("series,p,frequency,frequency_se,mean_cheeger,mean_cheeger_se"));
    assert!(stdout(&o).starts_with("percolated_expander_cheeger:"));
}
