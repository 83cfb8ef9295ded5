use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn snort(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snort"))
        .args(args)
        .env_remove("SNORT_MEMO_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_star_and_empty() {
    let o = snort(&["eval", path(&fixture("k14.json"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "±4\n");
    let o = snort(&["eval", path(&fixture("empty.json"))]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn eval_witness_with_temperature() {
    let o = snort(&["eval", "--temperature", path(&fixture("witness.json"))]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.ends_with("t = 11/2\n"), "{out}");
    let o = snort(&[
        "eval",
        "--temperature",
        "--json",
        path(&fixture("witness.json")),
    ]);
    let v = json(&o);
    assert_eq!(v["temperature"], "11/2");
    assert_eq!(v["degree"], 4);
}

#[test]
fn eval_edge_list_with_tint() {
    let o = snort(&["eval", path(&fixture("tinted-star.txt"))]);
    assert_eq!(stdout(&o), "{4|*}\n");
    let o = snort(&["temp", path(&fixture("c434.txt"))]);
    assert_eq!(stdout(&o), "7\n");
}

#[test]
fn thermo_game_literals() {
    let o = snort(&["thermo", "--game", "{2|-1}", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["temperature"], "3/2");
    assert_eq!(v["mast"], "1/2");
    let v = json(&snort(&["thermo", "--game", "{-1,{2|-2}|-8}", "--json"]));
    assert_eq!(
        (v["temperature"].as_str(), v["mast"].as_str()),
        (Some("4"), Some("-4"))
    );
    let v = json(&snort(&["thermo", "--game", "3", "--json"]));
    assert_eq!(
        (v["temperature"].as_str(), v["mast"].as_str()),
        (Some("-1"), Some("3"))
    );
}

#[test]
fn thermo_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let o = snort(&["thermo", "--game", "{4|-1/2}", "--svg", path(&out)]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("</svg>"));
}

#[test]
fn verify_families_pass() {
    let o = snort(&["verify", "--family", "caterpillar", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for row in [
        "±{3*, {{5|4}|*}}",
        "±{5, {{8|6*}|0}}",
        "±{7*, {{11|8}|*}}",
        "±{9, {{14|10*}|0}}",
    ] {
        assert!(out.contains(row), "{out}");
    }
    assert_eq!(out.matches("pass").count(), 4);
    let v = json(&snort(&[
        "verify", "--family", "star", "--n-max", "6", "--json",
    ]));
    assert_eq!(v["allPass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    let o = snort(&["verify", "--family", "joined-stars", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_json_is_stable() {
    let a = snort(&[
        "verify",
        "--family",
        "caterpillar",
        "--n-max",
        "2",
        "--json",
    ]);
    let b = snort(&[
        "verify",
        "--family",
        "caterpillar",
        "--n-max",
        "2",
        "--json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["rows"][1]["tempMinusDegree"], "1");
}

#[test]
fn conjecture_on_fixtures() {
    let files = ["witness.json", "k14.json", "empty.json", "c434.txt"].map(fixture);
    let mut args = vec!["conjecture", "--json"];
    args.extend(files.iter().map(|f| path(f)));
    let o = snort(&args);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["allHold"], true);
    // Witness: deg 4, deg2 9, t 11/2.
    assert_eq!(v["rows"][0]["secondDegree"], 9);
    assert_eq!(v["rows"][0]["margin"], "3");
    assert_eq!(v["rows"][3]["margin"], "2");
}

#[test]
fn search_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(
        &config,
        r#"{"populationSize": 8, "generations": 4, "eliteCount": 2, "maxVertices": 9, "rngSeed": 5}"#,
    )
    .unwrap();
    let seed = fixture("k14.json");
    let run = |out: &PathBuf| {
        let o = snort(&[
            "search",
            "--config",
            path(&config),
            "--out",
            path(out),
            path(&seed),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let a = run(&dir.path().join("a.json"));
    let b = run(&dir.path().join("b.json"));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["generationsCompleted"], 4);

    let resumed = dir.path().join("c.json");
    let o = snort(&[
        "search",
        "--resume",
        path(&dir.path().join("a.json")),
        "--generations",
        "2",
        "--out",
        path(&resumed),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let c: serde_json::Value = serde_json::from_slice(&std::fs::read(&resumed).unwrap()).unwrap();
    assert_eq!(c["generationsCompleted"], 6);
    let best = |v: &serde_json::Value| v["entries"][0]["fitness"].as_str().unwrap().to_string();
    let parse = |s: String| s.parse::<snort_core::Dyadic>().unwrap();
    assert!(parse(best(&c)) >= parse(best(&v)));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(snort(&["eval", "no-such-file.json"]).status.code(), Some(2));
    assert_eq!(snort(&["thermo", "--game", "{2|"]).status.code(), Some(2));
    assert_eq!(
        snort(&["verify", "--family", "cycle"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"vertices": [{"id": "a"}], "edges": [["a", "a"]]}"#,
    )
    .unwrap();
    let o = snort(&["eval", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("self-loop"));
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"populationSize": 0}"#).unwrap();
    assert_eq!(
        snort(&["search", "--config", path(&cfg)]).status.code(),
        Some(2)
    );
}

#[test]
fn memo_limit_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_snort"))
        .args(["eval", path(&fixture("c434.txt"))])
        .env("SNORT_MEMO_LIMIT", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "±{7*, {{11|8}|*}}\n");
    let o = Command::new(env!("CARGO_BIN_EXE_snort"))
        .args(["eval", path(&fixture("k14.json"))])
        .env("SNORT_MEMO_LIMIT", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
