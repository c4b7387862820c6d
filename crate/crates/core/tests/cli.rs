use std::path::Path;
use std::process::{Command, Output};

fn polypart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polypart")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn approximate_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = polypart(&["approximate", "--scenario", "stripe", "--eps", "0.4", "--seed", "7", "--out-dir", path(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("scenario,"));
    assert_eq!(text.lines().count(), 2);
    let sub = dir.path().join("stripe-eps-0.4");
    for f in ["input.json", "cover.json", "charts.json", "pieces.json", "row.json", "partition.json", "overlay.svg"] {
        assert!(sub.join(f).is_file(), "missing {f}");
    }
    assert_eq!(std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), text);
    assert!(dir.path().join("timings.csv").is_file());
}

#[test]
fn sweep_reads_toml_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "scenario = \"stripe\"\neps = [0.4, 0.3]\nseed = 3\n\n[pipeline]\nsamples_per_cell = 600\n").unwrap();
    let o = polypart(&["sweep", "--config", path(&cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.starts_with("stripe,2,")));
}

#[test]
fn dimension_must_match_scenario() {
    let o = polypart(&["approximate", "--scenario", "circle", "--dimension", "3"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("2-dimensional"));
}

#[test]
fn rejects_bad_eps() {
    let o = polypart(&["sweep", "--scenario", "stripe", "--eps", "1.5"]);
    assert!(!o.status.success());
}

#[test]
fn doubling_demo_baseline_only() {
    let o = polypart(&["doubling-demo", "--scenario", "stripe", "--baseline-only", "--grid-step", "0.005"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("baseline total"));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = polypart(&["render", "--scenario", "stripe", "--eps", "0.4", "--out-dir", path(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("stripe-eps-0.4.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}
