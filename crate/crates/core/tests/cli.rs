use std::fs;
use std::path::Path;
use std::process::Command;

use qrank::output::{fmt_sig, CsvTable};

fn qrank(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qrank")).args(args).output().unwrap()
}

fn read_csv(path: &Path) -> CsvTable {
    CsvTable::parse(&fs::read_to_string(path).unwrap())
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn toy_command_writes_rank_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrank(&["--command", "toy", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_csv(&dir.path().join("toy_ranks.csv"));
    assert_eq!(t.rows.len(), 8);
    assert_eq!(t.column("node").unwrap(), vec!["1", "2", "3", "4", "5", "6", "7", "8"]);
    let s = summary(dir.path());
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["command"], "toy");
}

#[test]
fn csv_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrank(&[
        "--command", "sweep", "--gen", "er,25,3", "--seed", "4", "--ensemble", "2",
        "--alpha-grid", "0.6,1", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(t.rows.len(), 2);
    for row in &t.rows {
        for cell in &row[..6] {
            let x: f64 = cell.parse().unwrap();
            assert_eq!(&fmt_sig(x), cell);
        }
    }
    let ratio_at_one: f64 = t.column("ratio").unwrap()[1].parse().unwrap();
    assert!((ratio_at_one - 1.0).abs() < 0.02);
}

#[test]
fn commands_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = qrank(&[
            "--command", "histogram", "--gen", "ba,30,2", "--seed", "9", "--ensemble", "2",
            "--alpha-grid", "0.5:1:0.25", "--out", d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for f in ["histogram.csv", "sweep_members.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
    let h = read_csv(&a.path().join("histogram.csv"));
    let total: usize = h.column("count").unwrap().iter().map(|c| c.parse::<usize>().unwrap()).sum();
    assert_eq!(total, 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"command": "scaling", "sizes": [20, 30], "ensemble": 1, "alpha_grid": [0.7, 1.0]}"#).unwrap();
    let out = qrank(&["--config", cfg.to_str().unwrap(), "--sizes", "20", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_csv(&dir.path().join("scaling.csv"));
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0][0], "20");
}

#[test]
fn report_on_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.edges");
    fs::write(&graph, "# ring with a chord\na b\nb c\nc d\nd a\na c\n").unwrap();
    let out = qrank(&[
        "--command", "report", "--graph", graph.to_str().unwrap(), "--alpha-grid", "0.5,1",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let curve = read_csv(&dir.path().join("curve.csv"));
    assert_eq!(curve.column("kendall_vs_pr").unwrap()[1].parse::<f64>().unwrap(), 1.0);
    let shifts = read_csv(&dir.path().join("shifts.csv"));
    assert_eq!(shifts.column("node").unwrap(), vec!["a", "b", "c", "d"]);
    assert_eq!(summary(dir.path())["results"]["nodes"], 4);
}

#[test]
fn non_convergence_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrank(&[
        "--command", "sweep", "--gen", "er,20,3", "--ensemble", "1", "--alpha-grid", "0.5",
        "--max-time", "0.5", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(summary(dir.path())["non_converged"], 1);
    let members = read_csv(&dir.path().join("sweep_members.csv"));
    assert_eq!(members.column("converged").unwrap(), vec!["false"]);
}

#[test]
fn bad_input_is_rejected() {
    assert_eq!(qrank(&["--alpha-grid", "0,1"]).status.code(), Some(2));
    assert_eq!(qrank(&["--gen", "ba,5,4"]).status.code(), Some(2));
    assert!(!qrank(&["--command", "bogus"]).status.success());
}

#[test]
fn save_graph_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.edges");
    let out = qrank(&["--gen", "ba,40,2", "--seed", "5", "--save-graph", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (g, _) = qrank::netgraph::load_edge_list(fs::read_to_string(&path).unwrap().as_bytes(), true).unwrap();
    let want = qrank::netgraph::generate(&qrank::GraphGenSpec::ba(40, 2, 5)).unwrap();
    assert_eq!(g.edge_count(), want.edge_count());
    assert_eq!(g.node_count(), 40);
}
