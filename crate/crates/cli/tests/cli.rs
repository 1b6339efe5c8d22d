use std::path::Path;
use std::process::{Command, Output};

fn hfatom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfatom")).args(args).output().unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let header = lines.next().unwrap();
    (header, lines.collect())
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].clone()).collect()
}

fn floats(v: Vec<String>) -> Vec<f64> {
    v.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn limit_scan_gaps_shrink_within_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("limit.csv");
    let o = hfatom(&[
        "limit-scan",
        "--b-ladder",
        "1e6,1e9,1e12",
        "--points",
        "4001",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    let gaps = floats(column(&h, &rows, "gap"));
    let bounds = floats(column(&h, &rows, "delta_bound"));
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(gaps.iter().zip(&bounds).all(|(g, b)| g <= b));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("limit.csv.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["command"], "limit-scan");
    assert_eq!(meta["config"]["params"]["points"], 4001);
    assert_eq!(meta["summary"]["gap_decreasing"], true);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = hfatom(&[
            "limit-scan",
            "--b-ladder",
            "1e4,1e8",
            "--points",
            "801",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        (
            std::fs::read(&p).unwrap(),
            std::fs::read(dir.path().join(format!("{name}.json"))).unwrap(),
        )
    };
    let (a, _) = run("a.csv");
    let (b, _) = run("b.csv");
    assert_eq!(a, b);
}

#[test]
fn empty_ladder_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.toml");
    std::fs::write(&cfg, "b_ladder = []\nz = 1.0\n").unwrap();
    let o = hfatom(&["limit-scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mf.toml");
    let out = dir.path().join("mf.csv");
    std::fs::write(
        &cfg,
        format!(
            "command = \"meanfield-scan\"\nlambdas = [0.0, 1.0]\nz_ladder = [5, 10, 20, 40]\npoints = 3001\nhalf_width = 30.0\noutput = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = hfatom(&[
        "meanfield-scan",
        "--config",
        cfg.to_str().unwrap(),
        "--lambdas",
        "0,0.5,1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&out);
    let kinds = column(&h, &rows, "kind");
    assert_eq!(kinds.iter().filter(|k| *k == "lambda").count(), 3);
    let diffs = floats(column(&h, &rows, "diff"));
    let numeric = floats(column(&h, &rows, "numeric"));
    assert_eq!(numeric[0], 0.0);
    assert!(diffs[..3].iter().all(|d| *d <= 1e-3));
    let gaps = &diffs[3..];
    assert_eq!(gaps.len(), 4);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));

    std::fs::write(&cfg, "colour = \"red\"\n").unwrap();
    let o = hfatom(&["meanfield-scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "command = \"limit-scan\"\n").unwrap();
    let o = hfatom(&["meanfield-scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_report_orders_and_clamps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = hfatom(&[
        "bounds-report",
        "--cases",
        "1:2,1:3",
        "--half-width",
        "12",
        "--points",
        "41,61",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&out);
    assert!(column(&h, &rows, "ordering_ok").iter().all(|v| v == "true"));
    let upper = floats(column(&h, &rows, "upper"));
    assert_eq!(upper, vec![-0.3125, -0.3125]);
}

#[test]
fn budget_violation_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_hfatom"))
        .env("HFATOM_MAX_DIM", "100")
        .args(["bounds-report", "--cases", "1:2", "-o", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let (h, rows) = csv_rows(&out);
    assert!(column(&h, &rows, "status")[0].starts_with("capacity"));

    let o = hfatom(&[
        "--max-dim",
        "100",
        "bounds-report",
        "--cases",
        "1:2",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_format_holds_rows() {
    let o = hfatom(&[
        "superharmonic-check",
        "--centers",
        "1,0",
        "--radii",
        "0.5",
        "--points",
        "3001",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let cols: Vec<&str> = doc["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    let ok = cols.iter().position(|c| *c == "superharmonic_ok").unwrap();
    assert_eq!(rows[0][ok], true);
}

#[test]
fn eval_prints_closed_forms() {
    let o = hfatom(&["eval", "hyperstrong", "--lambda", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["energy"].as_f64().unwrap(), -7.0 / 48.0);

    let o = hfatom(&["eval", "comparison", "--z", "1", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["energy"].as_f64().unwrap(), -0.3125);
    assert_eq!(v["bound"], false);

    let o = hfatom(&["eval", "hyperstrong", "--lambda=-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hfatom(&["eval", "operator-inequality", "--b", "1", "--points", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hfatom(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}
